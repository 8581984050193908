// Copyright 2026 The sptree Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "sptree/dot.h"
#include "sptree/error.h"
#include "sptree/mechanism.h"

namespace sptree {
namespace {

Witness fig1_witness() {
  const auto table = tabulate(*fig1_mechanism());
  return make_deviation(table, {0, 3}, 1, 4);
}

TEST(Dot, PlainTreeListsEveryEdge) {
  const auto t = fig1_tree();
  const auto dot = export_dot(*t);
  EXPECT_EQ(dot.rfind("graph tree {", 0), 0u);
  for (const char* edge : {"0 -- 2", "1 -- 2", "2 -- 3", "3 -- 4"}) {
    EXPECT_NE(dot.find(edge), std::string::npos) << edge << "\n" << dot;
  }
  EXPECT_EQ(dot, export_dot(*t));
}

TEST(Dot, WitnessOverlay) {
  const auto t = fig1_tree();
  const auto dot = export_dot(*t, fig1_witness());
  EXPECT_NE(dot.find("doublecircle"), std::string::npos);
  EXPECT_NE(dot.find("dashed"), std::string::npos);
  EXPECT_NE(dot.find("a'2"), std::string::npos);
  EXPECT_NE(dot.find("lightblue"), std::string::npos);
  EXPECT_EQ(dot, export_dot(*t, fig1_witness()));
  EXPECT_NE(dot, export_dot(*t));
}

TEST(WitnessFile, RoundTrip) {
  const auto t = fig1_tree();
  const auto text = format_witness(*t, fig1_witness());
  EXPECT_NE(text.find("profile=(0,3)"), std::string::npos) << text;
  EXPECT_NE(text.find("agent=2"), std::string::npos) << text;
  EXPECT_EQ(parse_witness(text, *t), fig1_witness());
  EXPECT_EQ(format_witness(*t, std::nullopt), "witness=none\n");
  EXPECT_FALSE(parse_witness("witness=none\n", *t).has_value());

  const Witness profile = ProfileWitness{{0, 1}, 4};
  EXPECT_EQ(parse_witness(format_witness(*t, profile), *t), profile);
  const Witness unreached = UnreachedVertex{3};
  EXPECT_EQ(parse_witness(format_witness(*t, unreached), *t), unreached);
  const Witness perm = PermutationWitness{{0, 3}, 1, {3, 0}, 0};
  EXPECT_EQ(parse_witness(format_witness(*t, perm), *t), perm);
}

TEST(WitnessFile, Errors) {
  const auto t = fig1_tree();
  EXPECT_THROW(parse_witness("profile=(0,3)\ncolour=red\n", *t), ParseError);
  EXPECT_THROW(parse_witness("profile=(0,9)\noutcome=1\n", *t), Error);
  EXPECT_THROW(parse_witness("profile=(0,3)\nagent=3\nreport=4\noutcome=1\ndeviated_outcome=0\n", *t),
               Error);
}

}  // namespace
}  // namespace sptree
