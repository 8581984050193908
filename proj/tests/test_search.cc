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
#include <set>

#include "oracle.h"
#include "sptree/error.h"
#include "sptree/search.h"

namespace sptree {
namespace {

TreePtr path_tree(int vertices) {
  std::vector<std::pair<int, int>> edges;
  for (int v = 1; v < vertices; ++v) edges.emplace_back(v - 1, v);
  return oracle::tree_from(vertices, edges);
}

std::uint64_t count_all(const SearchSpace& space) {
  return enumerate_mechanisms(space, 0, 1u << 30, [](const MechanismTable&) {
           return true;
         }).emitted;
}

TEST(SearchSpace, Counts) {
  EXPECT_EQ(SearchSpace(path_tree(3), 2).total(), 19683);
  EXPECT_EQ(count_all(SearchSpace(path_tree(3), 2)), 19683u);
  EXPECT_EQ(count_all(SearchSpace(path_tree(2), 1)), 4u);
  const BigInt big = SearchSpace(oracle::tree_from(4, {{0, 1}, {0, 2}, {0, 3}}), 2).total();
  EXPECT_EQ(big, BigInt(1) << 32);
  EXPECT_EQ(SearchSpace(path_tree(5), 2).total(), boost::multiprecision::pow(BigInt(5), 25));
}

TEST(SearchSpace, OntoAndUnanimousFiltersMatchRecount) {
  const auto t = path_tree(3);
  std::uint64_t onto = 0, unanimous = 0, both = 0;
  enumerate_mechanisms(SearchSpace(t, 2), 0, 1u << 30, [&](const MechanismTable& m) {
    std::set<Vertex> image(m.outcomes().begin(), m.outcomes().end());
    const bool o = image.size() == 3;
    bool u = true;
    for (Vertex v = 0; v < 3; ++v) u = u && m.evaluate(Profile{v, v}) == v;
    onto += o;
    unanimous += u;
    both += o && u;
    return true;
  });
  EXPECT_EQ(onto, 18150u);  // 3^9 - 3*2^9 + 3
  EXPECT_EQ(unanimous, 729u);
  EXPECT_EQ(count_all(SearchSpace(t, 2, {true, false})), onto);
  EXPECT_EQ(count_all(SearchSpace(t, 2, {false, true})), unanimous);
  EXPECT_EQ(count_all(SearchSpace(t, 2, {true, true})), both);
}

TEST(SearchSpace, IdsAreLexicographic) {
  const SearchSpace space(path_tree(3), 1);
  EXPECT_EQ(space.id_of(std::vector<Vertex>{0, 0, 1}), 1);
  EXPECT_EQ(space.id_of(std::vector<Vertex>{1, 0, 0}), 9);
  EXPECT_EQ(space.table_of(26), (std::vector<Vertex>{2, 2, 2}));
  BigInt expect = 0;
  enumerate_mechanisms(space, 0, 100, [&](const MechanismTable& m) {
    EXPECT_EQ(space.id_of(m.outcomes()), expect);
    expect += 1;
    return true;
  });
  EXPECT_THROW(space.table_of(27), DomainError);
}

TEST(Enumeration, BudgetAndResume) {
  const SearchSpace space(path_tree(3), 2, {true, false});
  std::vector<std::vector<Vertex>> whole, parts;
  enumerate_mechanisms(space, 0, 1u << 30, [&](const MechanismTable& m) {
    whole.emplace_back(m.outcomes().begin(), m.outcomes().end());
    return true;
  });
  BigInt next = 0;
  int rounds = 0;
  while (true) {
    const auto r = enumerate_mechanisms(space, next, 5000, [&](const MechanismTable& m) {
      parts.emplace_back(m.outcomes().begin(), m.outcomes().end());
      return true;
    });
    ++rounds;
    EXPECT_LE(r.visited, 5000u);
    next = r.next;
    if (r.complete) break;
  }
  EXPECT_EQ(rounds, 4);
  EXPECT_EQ(parts, whole);
}

TEST(Cursor, RoundTrip) {
  const SearchSpace space(path_tree(3), 2, {true, false});
  const auto blob = encode_cursor(space, 12345);
  EXPECT_EQ(blob, "sptree-cursor/1 vertices=3 agents=2 filter=onto next=12345");
  EXPECT_EQ(decode_cursor(space, blob), 12345);
  EXPECT_THROW(decode_cursor(SearchSpace(path_tree(3), 1), blob), DomainError);
  EXPECT_THROW(decode_cursor(SearchSpace(path_tree(3), 2), blob), DomainError);
  EXPECT_THROW(decode_cursor(space, "garbage"), DomainError);
  EXPECT_THROW(decode_cursor(space, "sptree-cursor/1 vertices=3 agents=2 filter=onto next=99999"),
               DomainError);
}

TEST(PairwiseLemma, P2SingleAgent) {
  const auto r = verify_pairwise_lemma(path_tree(2), 1, {});
  EXPECT_EQ(r.verdict, ClaimVerdict::kConfirmed);
  EXPECT_EQ(r.examined, 4u);
  EXPECT_EQ(r.tally("discrepancies"), 0u);
  // Only the swap {0->1, 1->0} fails sp.
  EXPECT_EQ(r.tally("sp_mechanisms"), 3u);
}

TEST(PairwiseLemma, P3TwoAgents) {
  const auto r = verify_pairwise_lemma(path_tree(3), 2, {});
  EXPECT_EQ(r.verdict, ClaimVerdict::kConfirmed);
  EXPECT_EQ(r.examined, 19683u);
  EXPECT_EQ(r.tally("pairs"), 19683u * 9 * 2 * 2);
  EXPECT_EQ(r.tally("sp_pairs"), r.tally("tmon_db_pairs"));
  EXPECT_TRUE(r.witness.empty());
}

TEST(PairwiseLemma, ZeroSamples) {
  VerifyOptions opts;
  opts.mode = SearchMode::kSampled;
  opts.seed = 1;
  opts.samples = 0;
  const auto r = verify_pairwise_lemma(path_tree(3), 2, opts);
  EXPECT_EQ(r.verdict, ClaimVerdict::kConfirmed);
  EXPECT_EQ(r.examined, 0u);
  opts.seed.reset();
  EXPECT_THROW(verify_pairwise_lemma(path_tree(3), 2, opts), DomainError);
}

TEST(PairwiseLemma, SampledIsSeededAndWorkerIndependent) {
  VerifyOptions opts;
  opts.mode = SearchMode::kSampled;
  opts.seed = 42;
  opts.samples = 3000;
  const auto t = oracle::tree_from(5, {{0, 1}, {1, 2}, {1, 3}, {3, 4}});
  const auto one = render(verify_pairwise_lemma(t, 2, opts));
  opts.workers = 4;
  EXPECT_EQ(render(verify_pairwise_lemma(t, 2, opts)), one);
  opts.seed = 43;
  EXPECT_NE(render(verify_pairwise_lemma(t, 2, opts)), one);
}

TEST(MainTheorem, P3TwoAgents) {
  const auto r = verify_main_theorem(path_tree(3), 2, {});
  EXPECT_EQ(r.verdict, ClaimVerdict::kConfirmed);
  EXPECT_EQ(r.tally("onto"), 18150u);
  EXPECT_EQ(r.tally("onto_sp"), r.tally("onto_tmon_atc"));
  EXPECT_GT(r.tally("onto_sp"), 0u);
}

TEST(MainTheorem, SingleAgentOnSmallTrees) {
  for (const auto& [name, t] : oracle::corpus(4)) {
    if (t->vertex_count() < 2 || t->vertex_count() > 4) continue;
    const auto r = verify_main_theorem(t, 1, {});
    EXPECT_EQ(r.verdict, ClaimVerdict::kConfirmed) << name;
    EXPECT_EQ(r.tally("discrepancies"), 0u) << name;
  }
}

TEST(MainTheorem, ResumeSplitMatchesOneRun) {
  const auto t = path_tree(3);
  const auto whole = verify_main_theorem(t, 2, {});
  VerifyOptions first;
  first.budget = 7000;
  const auto a = verify_main_theorem(t, 2, first);
  EXPECT_EQ(a.verdict, ClaimVerdict::kInconclusive);
  const auto cursor = a.detail("cursor");
  ASSERT_TRUE(cursor.has_value());
  VerifyOptions second;
  second.start = decode_cursor(SearchSpace(t, 2), *cursor);
  const auto b = verify_main_theorem(t, 2, second);
  EXPECT_EQ(b.verdict, ClaimVerdict::kConfirmed);
  EXPECT_EQ(a.examined + b.examined, whole.examined);
  for (const auto& [key, value] : whole.tallies) {
    EXPECT_EQ(a.tally(key) + b.tally(key), value) << key;
  }
}

TEST(MainTheorem, WorkerCountDoesNotChangeReport) {
  const auto t = path_tree(3);
  VerifyOptions opts;
  const auto one = render(verify_main_theorem(t, 2, opts));
  opts.workers = 3;
  EXPECT_EQ(render(verify_main_theorem(t, 2, opts)), one);
}

TEST(Tpar, NecessityOnP3AndSpider) {
  EXPECT_EQ(verify_tpar_necessity(path_tree(3), 2, {}).verdict, ClaimVerdict::kConfirmed);
  VerifyOptions opts;
  opts.mode = SearchMode::kSynthesized;
  const auto r =
      verify_tpar_necessity(oracle::tree_from(4, {{0, 1}, {1, 2}, {1, 3}}), 2, opts);
  EXPECT_EQ(r.verdict, ClaimVerdict::kConfirmed);
  EXPECT_GT(r.tally("onto_sp"), 0u);
  EXPECT_EQ(r.tally("onto_sp"), r.tally("onto_sp_tpar"));
}

// An onto table that misses tpar somewhere is never sp, and the miner says so.
TEST(Tpar, ContrapositiveOnRandomTables) {
  const auto t = oracle::tree_from(4, {{0, 1}, {1, 2}, {1, 3}});
  std::uint64_t state = 5;
  int found = 0;
  for (int k = 0; k < 3000 && found < 20; ++k) {
    std::vector<Vertex> out(16);
    for (auto& v : out) {
      state = state * 6364136223846793005ULL + 1442695040888963407ULL;
      v = static_cast<Vertex>((state >> 33) % 4);
    }
    for (Vertex v = 0; v < 4; ++v) out[v * 5] = v;  // unanimous, hence onto
    const MechanismTable m(t, 2, out);
    if (check_property(m, PropertyId::parse("tpar")).holds()) continue;
    ++found;
    const auto mined = mine_violation(m, PropertyId::parse("sp"), {});
    ASSERT_TRUE(mined.witness.has_value());
    EXPECT_TRUE(replay(m, PropertyId::parse("sp"), *mined.witness));
  }
  EXPECT_EQ(found, 20);
}

std::vector<std::vector<Vertex>> brute_sp_onto(const TreePtr& t, int agents) {
  std::vector<std::vector<Vertex>> out;
  enumerate_mechanisms(SearchSpace(t, agents, {true, false}), 0, 1u << 30,
                       [&](const MechanismTable& m) {
                         if (check_property(m, PropertyId::parse("sp")).holds()) {
                           out.emplace_back(m.outcomes().begin(), m.outcomes().end());
                         }
                         return true;
                       });
  return out;
}

TEST(Synthesis, MatchesBruteForce) {
  for (const auto& t : {path_tree(2), path_tree(3)}) {
    for (int agents : {1, 2}) {
      const auto s = synthesize_sp_onto(t, agents);
      EXPECT_TRUE(s.stats.complete);
      EXPECT_EQ(s.tables, brute_sp_onto(t, agents));
      EXPECT_EQ(s.stats.emitted, s.tables.size());
    }
  }
  const auto p2 = synthesize_sp_onto(path_tree(2), 1);
  EXPECT_EQ(p2.tables, (std::vector<std::vector<Vertex>>{{0, 1}}));
}

TEST(Synthesis, SingleAgentCorpusMatchesBruteForce) {
  for (const auto& [name, t] : oracle::corpus(5)) {
    if (t->vertex_count() < 2 || t->vertex_count() > 5) continue;
    EXPECT_EQ(synthesize_sp_onto(t, 1).tables, brute_sp_onto(t, 1)) << name;
  }
}

TEST(Synthesis, DeterministicAcrossWorkers) {
  const auto t = oracle::tree_from(4, {{0, 1}, {0, 2}, {0, 3}});
  const auto one = synthesize_sp_onto(t, 2, {}, 1);
  const auto four = synthesize_sp_onto(t, 2, {}, 4);
  EXPECT_EQ(one.tables, four.tables);
  EXPECT_EQ(one.stats.nodes, four.stats.nodes);
  for (const auto& out : one.tables) {
    const MechanismTable m(t, 2, out);
    for (const char* p : {"sp", "onto", "tmon", "atc", "tpar"}) {
      ASSERT_TRUE(check_property(m, PropertyId::parse(p)).holds()) << p;
    }
  }
}

TEST(Synthesis, FiveVertexTreeContainsFig1) {
  const auto f = tabulate(*fig1_mechanism());
  const auto s = synthesize_sp_onto(f.tree_ptr(), 2, {}, 2);
  EXPECT_TRUE(s.stats.complete);
  const std::vector<Vertex> want(f.outcomes().begin(), f.outcomes().end());
  EXPECT_TRUE(std::binary_search(s.tables.begin(), s.tables.end(), want));
  EXPECT_TRUE(std::is_sorted(s.tables.begin(), s.tables.end()));
}

TEST(Synthesis, LimitsMarkIncomplete) {
  const auto t = oracle::tree_from(4, {{0, 1}, {0, 2}, {0, 3}});
  const auto s = synthesize_sp_onto(t, 2, {1000, 0});
  EXPECT_FALSE(s.stats.complete);
  const auto capped = synthesize_sp_onto(t, 2, {0, 5});
  EXPECT_FALSE(capped.stats.complete);
  EXPECT_EQ(capped.tables.size(), 5u);
}

TEST(Mine, Examples) {
  const auto fig1 = tabulate(*fig1_mechanism());
  const auto tc = mine_violation(fig1, PropertyId::parse("tc"), {});
  ASSERT_TRUE(tc.witness.has_value());
  EXPECT_TRUE(replay(fig1, PropertyId::parse("tc"), *tc.witness));

  const auto dictator = tabulate(*dictator_mechanism(fig1_tree(), 2, 1));
  const auto none = mine_violation(dictator, PropertyId::parse("sp"), {});
  EXPECT_FALSE(none.witness.has_value());
  EXPECT_TRUE(none.exhaustive);

  const auto p5 = path_tree(5);
  const auto parity = tabulate(*table_mechanism(p5, 2, {}, [](const Profile& a) {
    return a[0] == 0 ? a[1] % 2 : std::min(a[0], a[1]);
  }));
  MineStrategy random{MineStrategy::Kind::kRandom, 1, 10000};
  const auto r = mine_violation(parity, PropertyId::parse("sp"), random);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_FALSE(r.exhaustive);
  EXPECT_TRUE(replay(parity, PropertyId::parse("sp"), *r.witness));
  EXPECT_EQ(mine_violation(parity, PropertyId::parse("sp"), random).witness, r.witness);

  const auto quiet = mine_violation(dictator, PropertyId::parse("sp"), random);
  EXPECT_FALSE(quiet.witness.has_value());
  EXPECT_FALSE(quiet.exhaustive);
  EXPECT_THROW(mine_violation(dictator, PropertyId::parse("onto"), random), DomainError);
}

TEST(Report, RenderHasKeyValueSection) {
  const auto r = verify_pairwise_lemma(path_tree(2), 1, {});
  const auto text = render(r);
  for (const char* key : {"claim=pairwise-lemma", "mode=exhaustive", "examined=4",
                          "verdict=confirmed", "witness=none"}) {
    EXPECT_NE(text.find(std::string(key) + "\n"), std::string::npos) << key << "\n" << text;
  }
  EXPECT_EQ(exit_code(ClaimVerdict::kConfirmed), 0);
  EXPECT_EQ(exit_code(ClaimVerdict::kRefuted), 1);
  EXPECT_EQ(exit_code(ClaimVerdict::kInconclusive), 3);
  EXPECT_EQ(parse_search_mode("synthesized"), SearchMode::kSynthesized);
  EXPECT_THROW(parse_search_mode("bogus"), DomainError);
}

}  // namespace
}  // namespace sptree
