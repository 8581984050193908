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

#ifndef SPTREE_DOT_H_
#define SPTREE_DOT_H_

#include <optional>
#include <string>
#include <string_view>

#include "sptree/axioms.h"
#include "sptree/tree.h"

namespace sptree {

// Undirected DOT graph of the tree. With a witness, agent peaks are shaded
// and annotated, x and x' are drawn as double circles, [a_i,a'_i] is bold
// and [x,x'] dashed. Output depends only on the inputs.
std::string export_dot(const DiscreteTree& t,
                       const std::optional<Witness>& witness = std::nullopt);

// Witness file: key=value lines. A deviation uses profile=(l1,...,ln),
// agent=<1-based>, report, outcome, deviated_outcome; a profile witness
// omits agent and report; "witness=none" marks a clean result. Vertices are
// tree labels. Unknown keys are rejected.
std::string format_witness(const DiscreteTree& t, const std::optional<Witness>& w);
std::optional<Witness> parse_witness(std::string_view text, const DiscreteTree& t);
std::optional<Witness> read_witness_file(const std::string& path,
                                         const DiscreteTree& t);

}  // namespace sptree

#endif  // SPTREE_DOT_H_
