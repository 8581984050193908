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

#ifndef SPTREE_AXIOMS_H_
#define SPTREE_AXIOMS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sptree/mechanism.h"
#include "sptree/tree.h"

namespace sptree {

// The four vertices every pairwise axiom depends on: agent i moves its
// report from `from` (a_i) to `to` (a'_i) and the outcome moves from
// `outcome` (x = f(a)) to `deviated_outcome` (x' = f(a_-i, a'_i)).
struct Move {
  Vertex from = 0;
  Vertex to = 0;
  Vertex outcome = 0;
  Vertex deviated_outcome = 0;

  bool trivial() const { return from == to; }
  Move reversed() const { return {to, from, deviated_outcome, outcome}; }
  friend bool operator==(const Move&, const Move&) = default;
};

// A profile, a deviating agent (0-based) with its alternative report, and
// both outcomes.
struct DeviationPair {
  Profile profile;
  int agent = 0;
  Vertex report = 0;
  Vertex outcome = 0;
  Vertex deviated_outcome = 0;

  Move move() const {
    return {profile[agent], report, outcome, deviated_outcome};
  }
  Profile deviated_profile() const {
    Profile out = profile;
    out[agent] = report;
    return out;
  }
  friend bool operator==(const DeviationPair&, const DeviationPair&) = default;
};

// Evaluates both outcomes through the table.
DeviationPair make_deviation(const MechanismTable& m, Profile profile, int agent,
                             Vertex report);

// Pairwise predicates. A trivial move (from == to) satisfies all of them.
//
// sp:   d(a_i,x) <= d(a_i,x') and d(a'_i,x') <= d(a'_i,x).
// tmon: on the common subpath of [a_i,a'_i] and [x,x'] (if it has an edge)
//       the endpoint nearer a_i is also the endpoint nearer x.
// db:   d(tree(a_i->a'_i,x), tree(a_i->a'_i,x')) >= |depth(x) - depth(x')|.
// adr:  if x != x' share a side tree, both are exactly one step from their
//       median with a_i.
// tsi:  if x is more than `steps` away from [a_i,a'_i], x' stays in x's
//       side tree.
// tc:   x == x' or [x,x'] lies on [a_i,a'_i].
// atc:  adr and tsi with steps = 1.
bool sp_pair(const DiscreteTree& t, const Move& mv);
bool tmon_pair(const DiscreteTree& t, const Move& mv);
bool db_pair(const DiscreteTree& t, const Move& mv);
bool adr_pair(const DiscreteTree& t, const Move& mv);
bool tsi_pair(const DiscreteTree& t, const Move& mv, int steps);
bool tc_pair(const DiscreteTree& t, const Move& mv);
bool atc_pair(const DiscreteTree& t, const Move& mv);

inline bool sp_pair(const DiscreteTree& t, const DeviationPair& p) { return sp_pair(t, p.move()); }
inline bool tmon_pair(const DiscreteTree& t, const DeviationPair& p) { return tmon_pair(t, p.move()); }
inline bool db_pair(const DiscreteTree& t, const DeviationPair& p) { return db_pair(t, p.move()); }
inline bool adr_pair(const DiscreteTree& t, const DeviationPair& p) { return adr_pair(t, p.move()); }
inline bool tsi_pair(const DiscreteTree& t, const DeviationPair& p, int steps) { return tsi_pair(t, p.move(), steps); }
inline bool tc_pair(const DiscreteTree& t, const DeviationPair& p) { return tc_pair(t, p.move()); }
inline bool atc_pair(const DiscreteTree& t, const DeviationPair& p) { return atc_pair(t, p.move()); }

// Whether `outcome` is a tree Pareto location for the profile: an agent's
// report, or within distance 1 of the interior of the spanned subtree.
bool tpar_location(const DiscreteTree& t, std::span<const Vertex> profile,
                   Vertex outcome);
bool tpar_profile(const Mechanism& m, std::span<const Vertex> profile);

// Bit flags of every pairwise predicate for one move.
enum PairBit : std::uint8_t {
  kSpBit = 1 << 0,
  kTmonBit = 1 << 1,
  kDbBit = 1 << 2,
  kAdrBit = 1 << 3,
  kTsi1Bit = 1 << 4,
  kTcBit = 1 << 5,
  kAllPairBits = 0x3f,
};

// All pairwise verdicts of a move at once, memoised over V^4 for trees of
// at most kCacheLimit vertices.
class PairClassifier {
 public:
  static constexpr int kCacheLimit = 16;

  explicit PairClassifier(const DiscreteTree& t);

  std::uint8_t bits(const Move& mv) const {
    if (cache_.empty()) return compute(mv);
    return cache_[index(mv)];
  }
  std::uint8_t compute(const Move& mv) const;
  const DiscreteTree& tree() const { return *tree_; }

 private:
  std::size_t index(const Move& mv) const {
    const std::size_t n = static_cast<std::size_t>(tree_->vertex_count());
    return ((static_cast<std::size_t>(mv.from) * n + mv.to) * n + mv.outcome) * n +
           mv.deviated_outcome;
  }

  const DiscreteTree* tree_;
  std::vector<std::uint8_t> cache_;
};

class PropertyId {
 public:
  enum class Kind {
    kSp,
    kTmon,
    kDb,
    kAdr,
    kTsi,
    kTc,
    kAtc,
    kTpar,
    kOnto,
    kUnanimous,
    kAnonymous,
    kUncompromising,
  };

  PropertyId(Kind kind, int tsi_steps = 1);
  // "sp", "tmon", "db", "adr", "tsi:<m>", "tc", "atc", "tpar", "onto",
  // "unanimous", "anonymous", "uncompromising". Throws DomainError.
  static PropertyId parse(std::string_view text);

  Kind kind() const { return kind_; }
  int tsi_steps() const { return tsi_steps_; }
  bool pairwise() const;
  std::string to_string() const;
  // Evaluates a pairwise property on one move.
  bool holds_on(const DiscreteTree& t, const Move& mv) const;

  friend bool operator==(const PropertyId&, const PropertyId&) = default;

 private:
  Kind kind_;
  int tsi_steps_;
};

enum class Verdict { kHolds, kViolated };
std::string_view to_string(Verdict v);

struct ProfileWitness {
  Profile profile;
  Vertex outcome = 0;
  friend bool operator==(const ProfileWitness&, const ProfileWitness&) = default;
};

struct PermutationWitness {
  Profile profile;
  Vertex outcome = 0;
  Profile permuted;
  Vertex permuted_outcome = 0;
  friend bool operator==(const PermutationWitness&, const PermutationWitness&) = default;
};

struct UnreachedVertex {
  Vertex vertex = 0;
  friend bool operator==(const UnreachedVertex&, const UnreachedVertex&) = default;
};

using Witness =
    std::variant<DeviationPair, ProfileWitness, PermutationWitness, UnreachedVertex>;

struct PropertyReport {
  std::string property;
  Verdict verdict = Verdict::kHolds;
  std::optional<Witness> witness;
  // Without full counts a violated check stops at its witness; the counters
  // then give the witness's 1-based rank in scan order.
  std::uint64_t pairs_checked = 0;
  std::uint64_t profiles_checked = 0;
  std::uint64_t violations = 0;
  double elapsed_seconds = 0;

  bool holds() const { return verdict == Verdict::kHolds; }
};

struct CheckOptions {
  bool full_counts = false;
  int workers = 1;
};

// Quantifies a property over the whole table. Pairwise properties scan
// (profile code, agent, report) lexicographically, skipping trivial moves.
// Throws DomainError when the property does not apply to the domain
// (anonymous with one agent, uncompromising off a path).
PropertyReport check_property(const MechanismTable& m, const PropertyId& prop,
                              const CheckOptions& opts = {});
PropertyReport check_property(const Mechanism& m, const PropertyId& prop,
                              const CheckOptions& opts = {});

PropertyReport check_onto(const MechanismTable& m);
PropertyReport check_unanimous(const MechanismTable& m);
PropertyReport check_anonymous(const MechanismTable& m);
// Path domains only: an agent strictly on one side of the outcome cannot
// move it by re-reporting anywhere on that same side (outcome included).
PropertyReport check_uncompromising(const MechanismTable& m);

// True iff the witness, re-evaluated through the table, still violates the
// property.
bool replay(const MechanismTable& m, const PropertyId& prop, const Witness& w);

// One-line rendering with vertex labels and 1-based agent numbers, e.g.
// "profile=(0,3) agent=2 report=4 outcome=1 deviated_outcome=0".
std::string describe(const DiscreteTree& t, const Witness& w);

// Text for a batch of reports: one summary line per property, then
// key=value lines. Elapsed times are left out so output is reproducible.
std::string render(const DiscreteTree& t, std::span<const PropertyReport> reports);

}  // namespace sptree

#endif  // SPTREE_AXIOMS_H_
