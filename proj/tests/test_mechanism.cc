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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "oracle.h"
#include "sptree/axioms.h"
#include "sptree/error.h"
#include "sptree/mechanism.h"

namespace sptree {
namespace {

TreePtr path_tree(int vertices) {
  std::vector<std::pair<int, int>> edges;
  for (int v = 1; v < vertices; ++v) edges.emplace_back(v - 1, v);
  return oracle::tree_from(vertices, edges);
}

TEST(Codec, MostSignificantAgentFirst) {
  const ProfileCodec codec(5, 3);
  EXPECT_EQ(codec.size(), 125u);
  const Profile a{1, 2, 3};
  EXPECT_EQ(codec.encode(a), 1u * 25 + 2u * 5 + 3u);
  EXPECT_EQ(codec.decode(38), a);
  EXPECT_EQ(codec.replace(38, 0, 4), 4u * 25 + 2u * 5 + 3u);
  EXPECT_EQ(codec.diagonal(2), 2u * 25 + 2u * 5 + 2u);
}

TEST(TableMechanism, IdentityOnP3) {
  const auto t = path_tree(3);
  const std::vector<std::pair<Profile, Vertex>> entries{{{0}, 0}, {{1}, 1}, {{2}, 2}};
  const auto m = table_mechanism(t, 1, entries);
  for (Vertex v = 0; v < 3; ++v) EXPECT_EQ(m->evaluate(Profile{v}), v);
  EXPECT_TRUE(check_property(*m, PropertyId::parse("sp")).holds());
}

TEST(TableMechanism, Errors) {
  const auto t = path_tree(3);
  const std::vector<std::pair<Profile, Vertex>> bad_outcome{{{0}, 3}, {{1}, 1}, {{2}, 2}};
  EXPECT_THROW(table_mechanism(t, 1, bad_outcome), DomainError);
  const std::vector<std::pair<Profile, Vertex>> missing{{{0}, 0}, {{1}, 1}};
  EXPECT_THROW(table_mechanism(t, 1, missing), DomainError);
  const std::vector<std::pair<Profile, Vertex>> duplicate{
      {{0}, 0}, {{1}, 1}, {{2}, 2}, {{1}, 0}};
  EXPECT_THROW(table_mechanism(t, 1, duplicate), DomainError);
  EXPECT_THROW(MechanismTable(t, 1, {0, 1}), DomainError);
}

TEST(TableMechanism, FillRule) {
  const auto t = path_tree(3);
  const std::vector<std::pair<Profile, Vertex>> entries{{{0, 0}, 2}};
  const auto m = table_mechanism(t, 2, entries, [](const Profile& a) { return a[1]; });
  EXPECT_EQ(m->evaluate(Profile{0, 0}), 2);
  EXPECT_EQ(m->evaluate(Profile{2, 1}), 1);
}

TEST(Fig1, KnownOutcomes) {
  const auto f = fig1_mechanism();
  EXPECT_EQ(f->evaluate(Profile{0, 3}), 1);
  EXPECT_EQ(f->evaluate(Profile{0, 4}), 0);
  for (Vertex v = 0; v < 5; ++v) EXPECT_EQ(f->evaluate(Profile{v, v}), v);
}

// Independent restatement of the three branches.
TEST(Fig1, MatchesBranches) {
  const auto f = fig1_mechanism();
  for (Vertex y = 0; y < 5; ++y) {
    for (Vertex x = 0; x < 5; ++x) {
      Vertex want;
      if (y == 0) {
        want = x % 2;
      } else if (y == 2) {
        want = std::min(x, 3);
      } else {
        want = std::min(x, y);
      }
      EXPECT_EQ(f->evaluate(Profile{y, x}), want) << y << "," << x;
    }
  }
}

TEST(Fig1, TableRoundTrip) {
  const auto f = fig1_mechanism();
  const auto table = tabulate(*f);
  ASSERT_EQ(table.size(), 25u);
  const auto text = format_table(table, "fig1.txt");
  const auto parsed = parse_table(text, [&](const std::string& path) {
    EXPECT_EQ(path, "fig1.txt");
    return f->tree_ptr();
  });
  EXPECT_EQ(parsed.tree_path, "fig1.txt");
  EXPECT_EQ(parsed.table, table);
  EXPECT_EQ(format_table(parsed.table, "fig1.txt"), text);
  const auto back = table_mechanism(parsed.table);
  ProfileCodec codec(5, 2);
  for (std::uint64_t code = 0; code < 25; ++code) {
    const auto a = codec.decode(code);
    EXPECT_EQ(back->evaluate(a), f->evaluate(a));
  }
}

TEST(TableFile, DiskRoundTripResolvesRelativeTree) {
  const auto dir = std::filesystem::temp_directory_path() / "sptree_table_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream tree(dir / "t.txt");
    tree << format_tree(*fig1_tree());
  }
  const auto table = tabulate(*fig1_mechanism());
  write_table_file((dir / "m.txt").string(), table, "t.txt");
  const auto parsed = read_table_file((dir / "m.txt").string());
  EXPECT_EQ(parsed.table.outcomes().size(), 25u);
  EXPECT_TRUE(std::equal(parsed.table.outcomes().begin(), parsed.table.outcomes().end(),
                         table.outcomes().begin()));
  std::filesystem::remove_all(dir);
}

TEST(TableFile, ParseErrors) {
  auto load = [](const std::string&) { return path_tree(2); };
  EXPECT_THROW(parse_table("tree: x\nagents: 1\ncolour: red\n0 -> 0\n1 -> 1\n", load),
               ParseError);
  EXPECT_THROW(parse_table("tree: x\nagents: 1\n0 -> 0\n", load), ParseError);
  EXPECT_THROW(parse_table("tree: x\nagents: 1\n0 -> 0\n0 -> 1\n1 -> 1\n", load),
               ParseError);
  EXPECT_THROW(parse_table("tree: x\nagents: 1\n0 -> 0\n1 -> 7\n", load), ParseError);
  EXPECT_THROW(parse_table("agents: 1\n0 -> 0\n1 -> 1\n", load), ParseError);
  try {
    parse_table("tree: x\nagents: 1\n0 -> 0\n1 -> 7\n", load);
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4);
  }
}

TEST(Dictator, Examples) {
  const auto t = path_tree(5);
  EXPECT_EQ(dictator_mechanism(t, 2, 1)->evaluate(Profile{2, 4}), 2);
  EXPECT_EQ(dictator_mechanism(t, 2, 2)->evaluate(Profile{2, 4}), 4);
  EXPECT_EQ(dictator_mechanism(t, 2, 2)->evaluate(Profile{3, 3}), 3);
  EXPECT_THROW(dictator_mechanism(t, 2, 0), DomainError);
  EXPECT_THROW(dictator_mechanism(t, 2, 3), DomainError);
}

int brute_median(const DiscreteTree& t, std::vector<Vertex> ballots) {
  int best = -1, best_sum = 1 << 30;
  for (Vertex v = 0; v < t.vertex_count(); ++v) {
    int sum = 0;
    for (Vertex b : ballots) sum += t.dist(v, b);
    if (sum < best_sum) best = v, best_sum = sum;
  }
  return best;
}

TEST(Median, Examples) {
  const auto p3 = path_tree(3);
  EXPECT_EQ(median_mechanism(p3, 2, {0})->evaluate(Profile{2, 2}), 2);
  const auto p5 = path_tree(5);
  for (Vertex v = 0; v < 5; ++v) {
    EXPECT_EQ(median_mechanism(p5, 1, {})->evaluate(Profile{v}), v);
  }
  // Sums of distances to {0,4,2}: 0:4 1:6 2:3 3:4 4:5.
  const auto fig1 = fig1_tree();
  EXPECT_EQ(median_mechanism(fig1, 2, {2})->evaluate(Profile{0, 4}), 2);
  EXPECT_THROW(median_mechanism(p3, 2, {}), DomainError);
}

TEST(Median, MatchesSumOfDistancesOnCorpus) {
  for (const auto& [name, t] : oracle::named_trees()) {
    const int v = t->vertex_count();
    if (v > 10) continue;
    const auto m = median_mechanism(t, 2, {0});
    const ProfileCodec codec(v, 2);
    for (std::uint64_t code = 0; code < codec.size(); ++code) {
      auto a = codec.decode(code);
      ASSERT_EQ(m->evaluate(a), brute_median(*t, {a[0], a[1], 0})) << name;
    }
  }
}

TEST(Median, TruthfulReReportIsIdempotent) {
  for (const auto& [name, t] : oracle::named_trees()) {
    if (t->vertex_count() > 7) continue;
    const auto m = median_mechanism(t, 3, {});
    const auto table = tabulate(*m);
    for (std::uint64_t code = 0; code < table.size(); ++code) {
      const Vertex x = table.outcome(code);
      for (int i = 0; i < 3; ++i) {
        ASSERT_EQ(table.outcome(table.codec().replace(code, i, x)), x) << name;
      }
    }
  }
}

TEST(OrderStatistic, Examples) {
  const std::vector<std::int64_t> a{3, 7}, b{5, 1, 9}, c{4, 4, 4};
  EXPECT_EQ(order_statistic(a, 1), 3);
  EXPECT_EQ(order_statistic(b, 2), 5);
  EXPECT_EQ(order_statistic(c, 3), 4);
  EXPECT_THROW(order_statistic(a, 0), DomainError);
  EXPECT_THROW(order_statistic(a, 3), DomainError);
  const auto p5 = path_tree(5);
  EXPECT_EQ(order_statistic_mechanism(p5, 3, 2)->evaluate(Profile{4, 0, 2}), 2);
}

TEST(Gmvs, Examples) {
  const auto p5 = path_tree(5);
  const auto one = gmvs_mechanism({p5, 1, 0, 4, {0, 4}});
  EXPECT_EQ(one->evaluate(Profile{3}), 3);
  const auto two = gmvs_mechanism({p5, 2, 0, 4, {0, 2, 2, 4}});
  EXPECT_EQ(two->evaluate(Profile{0, 4}), 2);
  const auto degenerate = gmvs_mechanism({p5, 2, 3, 3, {3, 3, 3, 3}});
  for (Vertex u = 0; u < 5; ++u) {
    for (Vertex w = 0; w < 5; ++w) EXPECT_EQ(degenerate->evaluate(Profile{u, w}), 3);
  }
}

TEST(Gmvs, ProperSubsetReadingDiffersOnlyThroughGrandCoalition) {
  const auto p5 = path_tree(5);
  const auto g = gmvs_mechanism({p5, 2, 0, 4, {0, 1, 1, 4}});
  EXPECT_EQ(g->offset(Profile{4, 4}), 4);
  EXPECT_EQ(g->offset_proper_subsets(Profile{4, 4}), 1);
  EXPECT_EQ(g->offset(Profile{0, 3}), g->offset_proper_subsets(Profile{0, 3}));
}

TEST(Gmvs, InvalidParams) {
  const auto p5 = path_tree(5);
  EXPECT_THROW(gmvs_mechanism({p5, 2, 0, 4, {0, 3, 2}}), DomainError);
  EXPECT_THROW(gmvs_mechanism({p5, 2, 0, 4, {1, 2, 2, 4}}), DomainError);
  EXPECT_THROW(gmvs_mechanism({p5, 2, 0, 4, {0, 2, 2, 3}}), DomainError);
  EXPECT_THROW(gmvs_mechanism({p5, 2, 0, 4, {0, 3, 2, 2}}), DomainError);
  const auto star = oracle::tree_from(4, {{0, 1}, {0, 2}, {0, 3}});
  EXPECT_THROW(gmvs_mechanism({star, 1, 1, 2, {1, 3}}), DomainError);
}

// Literal max-min over the subsets, with positions measured from low.
int brute_gmvs(const std::vector<int>& pos, const std::vector<int>& alpha) {
  const int n = static_cast<int>(pos.size());
  int best = 0;
  for (int s = 0; s < (1 << n); ++s) {
    int value = alpha[s];
    for (int i = 0; i < n; ++i) {
      if (s >> i & 1) value = std::min(value, pos[i]);
    }
    best = std::max(best, value);
  }
  return best;
}

// Every monotone threshold family on every interval of P7 with up to six
// edges, one and two agents.
TEST(Gmvs, UncompromisingOnAllSmallIntervals) {
  const auto t = path_tree(7);
  int families = 0;
  for (Vertex low = 0; low < 7; ++low) {
    for (Vertex high = 0; high < 7; ++high) {
      const auto interval = path(*t, low, high);
      const int len = static_cast<int>(interval.size()) - 1;
      for (int n = 1; n <= 2; ++n) {
        const int inner = (1 << n) - 2;
        std::vector<int> off(inner, 0);
        while (true) {
          std::vector<int> alpha{0};
          alpha.insert(alpha.end(), off.begin(), off.end());
          alpha.push_back(len);
          bool monotone = true;
          for (int s = 0; s < (1 << n); ++s) {
            for (int i = 0; i < n; ++i) {
              if (alpha[s] > alpha[s | (1 << i)]) monotone = false;
            }
          }
          if (monotone) {
            ++families;
            std::vector<Vertex> thresholds;
            for (int o : alpha) thresholds.push_back(interval[o]);
            const auto g = gmvs_mechanism({t, n, low, high, thresholds});
            const auto table = tabulate(*g);
            ASSERT_TRUE(check_uncompromising(table).holds()) << g->describe();
            ASSERT_TRUE(check_property(table, PropertyId::parse("sp")).holds())
                << g->describe();
            for (std::uint64_t code = 0; code < table.size(); ++code) {
              const auto a = table.codec().decode(code);
              std::vector<int> pos;
              for (Vertex v : a) pos.push_back(t->dist(low, t->project(low, high, v)));
              ASSERT_EQ(table.outcome(code), interval[brute_gmvs(pos, alpha)]);
            }
          }
          int k = 0;
          while (k < inner && ++off[k] > len) off[k++] = 0;
          if (k == inner) break;
        }
      }
    }
  }
  EXPECT_GT(families, 100);
}

TEST(Builtins, UnanimousOnCorpus) {
  for (const auto& [name, t] : oracle::named_trees()) {
    if (t->vertex_count() > 10) continue;
    std::vector<MechanismPtr> ms{dictator_mechanism(t, 2, 1), dictator_mechanism(t, 2, 2),
                                 median_mechanism(t, 2, {0}),
                                 median_mechanism(t, 3, {})};
    if (t->is_path()) {
      const auto [lo, hi] = t->path_endpoints();
      ms.push_back(order_statistic_mechanism(t, 2, 1));
      ms.push_back(order_statistic_mechanism(t, 2, 2));
      ms.push_back(gmvs_mechanism({t, 2, lo, hi, {lo, lo, hi, hi}}));
    }
    for (const auto& m : ms) {
      ASSERT_TRUE(check_unanimous(tabulate(*m)).holds()) << name << " " << m->describe();
    }
  }
  EXPECT_TRUE(check_unanimous(tabulate(*fig1_mechanism())).holds());
}

TEST(Builtins, ParseSpecs) {
  const auto t = path_tree(5);
  EXPECT_EQ(make_builtin("builtin:fig1", nullptr, 2)->describe(), "fig1");
  EXPECT_EQ(make_builtin("builtin:dictator:2", t, 2)->evaluate(Profile{1, 3}), 3);
  EXPECT_EQ(make_builtin("builtin:constant:4", t, 2)->evaluate(Profile{1, 3}), 4);
  EXPECT_EQ(make_builtin("builtin:median:0", t, 2)->evaluate(Profile{3, 4}), 3);
  EXPECT_EQ(make_builtin("builtin:order-statistic:2", t, 2)->evaluate(Profile{1, 3}), 3);
  EXPECT_EQ(make_builtin("builtin:gmvs:0,4:0,2,2,4", t, 2)->evaluate(Profile{0, 4}), 2);
  EXPECT_THROW(make_builtin("builtin:nope", t, 2), DomainError);
  EXPECT_THROW(make_builtin("dictator:1", t, 2), DomainError);
  EXPECT_THROW(make_builtin("builtin:dictator", t, 2), DomainError);
  EXPECT_THROW(make_builtin("builtin:median", t, 2), DomainError);
}

TEST(Evaluate, ArityAndDomain) {
  const auto f = fig1_mechanism();
  EXPECT_THROW(f->evaluate(Profile{0}), DomainError);
  EXPECT_THROW(f->evaluate(Profile{0, 5}), DomainError);
}

}  // namespace
}  // namespace sptree
