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

#ifndef SPTREE_SEARCH_H_
#define SPTREE_SEARCH_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "sptree/axioms.h"
#include "sptree/mechanism.h"
#include "sptree/tree.h"

namespace sptree {

using BigInt = boost::multiprecision::cpp_int;

struct SearchFilter {
  bool onto = false;
  bool unanimous = false;
  friend bool operator==(const SearchFilter&, const SearchFilter&) = default;
};

// All tables V^n -> V for a tree and agent count. A mechanism's id reads
// its outcome array as a base-|V| number, slot 0 most significant, so ids
// run in lexicographic table order.
class SearchSpace {
 public:
  SearchSpace(TreePtr tree, int agents, SearchFilter filter = {});

  const DiscreteTree& tree() const { return *tree_; }
  const TreePtr& tree_ptr() const { return tree_; }
  int agents() const { return codec_.agents(); }
  const ProfileCodec& codec() const { return codec_; }
  const SearchFilter& filter() const { return filter_; }
  std::uint64_t slots() const { return codec_.size(); }
  // |V|^(|V|^n), before filtering.
  const BigInt& total() const { return total_; }

  BigInt id_of(std::span<const Vertex> outcomes) const;
  std::vector<Vertex> table_of(const BigInt& id) const;
  bool passes(std::span<const Vertex> outcomes) const;

 private:
  TreePtr tree_;
  ProfileCodec codec_;
  SearchFilter filter_;
  BigInt total_;
};

// Opaque resume token: "sptree-cursor/1 vertices=<V> agents=<n> filter=<f>
// next=<id>". Decoding checks that it belongs to the given space.
std::string encode_cursor(const SearchSpace& space, const BigInt& next);
BigInt decode_cursor(const SearchSpace& space, std::string_view blob);

struct EnumerationResult {
  std::uint64_t visited = 0;  // ids consumed, filtered or not
  std::uint64_t emitted = 0;
  bool complete = false;      // reached the end of the space
  BigInt next;                // first id not visited
};

// Streams every table passing the filter in id order, starting at `start`
// and visiting at most `budget` ids. `visit` returning false stops early.
EnumerationResult enumerate_mechanisms(
    const SearchSpace& space, const BigInt& start, std::uint64_t budget,
    const std::function<bool(const MechanismTable&)>& visit);

enum class SearchMode { kExhaustive, kSampled, kSynthesized };
std::string_view to_string(SearchMode mode);
SearchMode parse_search_mode(std::string_view text);

enum class ClaimVerdict { kConfirmed, kRefuted, kInconclusive };
std::string_view to_string(ClaimVerdict v);

struct EquivalenceReport {
  std::string claim;
  std::string mode;
  std::optional<std::uint64_t> seed;
  std::string domain;  // e.g. "vertices=3 agents=2"
  std::uint64_t examined = 0;
  std::vector<std::pair<std::string, std::uint64_t>> tallies;
  ClaimVerdict verdict = ClaimVerdict::kConfirmed;
  // First discrepancy as ordered key/value fields; empty when none.
  std::vector<std::pair<std::string, std::string>> witness;
  // Claim-specific results (survivor lists, stability notes, cursor).
  std::vector<std::pair<std::string, std::string>> details;

  std::uint64_t tally(std::string_view key) const;
  std::optional<std::string> detail(std::string_view key) const;
};

// Human summary followed by one key=value line per field. Contains nothing
// that depends on timing or worker count.
std::string render(const EquivalenceReport& report);
// 0 confirmed, 1 refuted, 3 inconclusive.
int exit_code(ClaimVerdict v);

struct SynthesisLimits {
  std::uint64_t max_nodes = 0;   // 0 means unlimited
  std::uint64_t max_tables = 0;  // 0 means unlimited
};

struct VerifyOptions {
  SearchMode mode = SearchMode::kExhaustive;
  std::optional<std::uint64_t> seed;  // required for sampled mode
  std::uint64_t samples = 0;
  std::uint64_t budget = 100'000'000;
  BigInt start = 0;
  int workers = 1;
  SynthesisLimits limits;
};

// sp_pair <=> tmon_pair and db_pair on every deviation pair of every
// examined table.
EquivalenceReport verify_pairwise_lemma(TreePtr tree, int agents,
                                        const VerifyOptions& opts);
// Among onto tables: sp <=> tmon and atc. Also tallies onto tables with
// tmon and tc, as an empirical record.
EquivalenceReport verify_main_theorem(TreePtr tree, int agents,
                                      const VerifyOptions& opts);
// Every onto and sp table satisfies tpar at every profile.
EquivalenceReport verify_tpar_necessity(TreePtr tree, int agents,
                                        const VerifyOptions& opts);

struct SynthesisStats {
  std::uint64_t nodes = 0;         // slot assignments tried
  std::uint64_t pair_prunes = 0;   // rejected by a tmon/db pair check
  std::uint64_t onto_prunes = 0;   // too few slots left to reach every vertex
  std::uint64_t emitted = 0;
  bool complete = true;
};

struct SynthesisResult {
  // Outcome arrays in lexicographic order.
  std::vector<std::vector<Vertex>> tables;
  SynthesisStats stats;
};

// Backtracking over table slots in profile-code order. Each assignment is
// checked against every already assigned slot one deviation away, in both
// directions, with tmon_pair and db_pair; complete tables must be onto.
SynthesisResult synthesize_sp_onto(TreePtr tree, int agents,
                                   const SynthesisLimits& limits = {},
                                   int workers = 1);

struct MineStrategy {
  enum class Kind { kScan, kRandom };
  Kind kind = Kind::kScan;
  std::uint64_t seed = 0;
  std::uint64_t tries = 0;
};

struct MineResult {
  std::optional<Witness> witness;
  // True when a scan covered everything, so no witness means none exists.
  bool exhaustive = false;
  std::uint64_t tried = 0;
};

// Random mode draws (profile, agent, report) triples, or profiles for tpar;
// it never concludes that a property holds.
MineResult mine_violation(const MechanismTable& m, const PropertyId& prop,
                          const MineStrategy& strategy);

}  // namespace sptree

#endif  // SPTREE_SEARCH_H_
