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

#ifndef SPTREE_MECHANISM_H_
#define SPTREE_MECHANISM_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sptree/profile_codec.h"
#include "sptree/tree.h"

namespace sptree {

using TreePtr = std::shared_ptr<const DiscreteTree>;

enum class MechanismKind {
  kTable,
  kFig1,
  kMedian,
  kDictator,
  kGmvs,
  kOrderStatistic,
  kConstant,
};

std::string_view to_string(MechanismKind kind);

// A deterministic map V^n -> V over a fixed tree. Instances are immutable and
// may be evaluated concurrently.
class Mechanism {
 public:
  virtual ~Mechanism() = default;

  const DiscreteTree& tree() const { return *tree_; }
  const TreePtr& tree_ptr() const { return tree_; }
  int agents() const { return agents_; }

  virtual MechanismKind kind() const = 0;
  // Stable textual description, e.g. "dictator:2" or "median:phantoms=2".
  virtual std::string describe() const = 0;

  // Checks arity and vertex ids, then evaluates.
  Vertex evaluate(std::span<const Vertex> profile) const;
  // Skips validation; for callers iterating a codec they built themselves.
  Vertex evaluate_unchecked(std::span<const Vertex> profile) const {
    return do_evaluate(profile);
  }

 protected:
  Mechanism(TreePtr tree, int agents);

 private:
  virtual Vertex do_evaluate(std::span<const Vertex> profile) const = 0;

  TreePtr tree_;
  int agents_;
};

using MechanismPtr = std::shared_ptr<const Mechanism>;

// Dense outcome array indexed by ProfileCodec codes.
class MechanismTable {
 public:
  // Throws DomainError when the array has the wrong length or holds an
  // outcome that is not a vertex.
  MechanismTable(TreePtr tree, int agents, std::vector<Vertex> outcomes);

  const DiscreteTree& tree() const { return *tree_; }
  const TreePtr& tree_ptr() const { return tree_; }
  int agents() const { return codec_.agents(); }
  const ProfileCodec& codec() const { return codec_; }
  std::uint64_t size() const { return outcomes_.size(); }

  Vertex outcome(std::uint64_t code) const { return outcomes_[code]; }
  Vertex evaluate(std::span<const Vertex> profile) const {
    return outcomes_[codec_.encode(profile)];
  }
  std::span<const Vertex> outcomes() const { return outcomes_; }

  friend bool operator==(const MechanismTable& a, const MechanismTable& b) {
    return a.codec_ == b.codec_ && a.outcomes_ == b.outcomes_;
  }

 private:
  TreePtr tree_;
  ProfileCodec codec_;
  std::vector<Vertex> outcomes_;
};

MechanismTable tabulate(const Mechanism& m);

// Wraps a table as a Mechanism of kind kTable.
MechanismPtr table_mechanism(MechanismTable table);

// Builds a table from explicit (profile, outcome) entries. Every profile of
// V^n must be covered exactly once unless `fill` supplies the missing ones.
MechanismPtr table_mechanism(
    TreePtr tree, int agents,
    std::span<const std::pair<Profile, Vertex>> entries,
    const std::function<Vertex(const Profile&)>& fill = {});

// The five-vertex tree 0-2, 1-2, 2-3, 3-4 used by fig1_mechanism().
TreePtr fig1_tree();

// Two agents on fig1_tree(). With y = a_1 and x = a_2:
//   y == 0 -> x mod 2,  y == 2 -> min(x, 3),  otherwise min(x, y).
MechanismPtr fig1_mechanism();

// f(a) = a_agent, agent 1-based.
MechanismPtr dictator_mechanism(TreePtr tree, int agents, int agent);

MechanismPtr constant_mechanism(TreePtr tree, int agents, Vertex where);

// The vertex minimising the total distance to all reports plus the fixed
// phantom ballots. The ballot count must be odd, which makes the minimiser
// unique on a tree.
MechanismPtr median_mechanism(TreePtr tree, int agents,
                              std::vector<Vertex> phantoms);

// k-th smallest report on a path-shaped tree, positions counted from
// path_endpoints().first. k is 1-based.
MechanismPtr order_statistic_mechanism(TreePtr tree, int agents, int k);

// k-th smallest entry of an integer profile (1-based k).
std::int64_t order_statistic(std::span<const std::int64_t> profile, int k);

// Thresholds of a generalized median voter scheme on the interval
// [low, high]. thresholds[S] is alpha_S for the agent subset with bitmask S
// (bit i = agent i+1); alpha_{} must be low and alpha_N must be high, all
// thresholds lie on [low, high] and d(alpha_S, low) is monotone in S.
struct GmvsParams {
  TreePtr tree;
  int agents = 0;
  Vertex low = 0;
  Vertex high = 0;
  std::vector<Vertex> thresholds;
};

// Throws DomainError describing the first violated requirement.
void validate(const GmvsParams& params);

class GmvsMechanism final : public Mechanism {
 public:
  explicit GmvsMechanism(GmvsParams params);

  MechanismKind kind() const override { return MechanismKind::kGmvs; }
  std::string describe() const override;
  const GmvsParams& params() const { return params_; }

  // Distance of the outcome from `low`:
  //   max over S subset-or-equal N of min({d(a_i,low)}_{i in S}, d(alpha_S,low)).
  // Reports off the interval are first projected onto it.
  int offset(std::span<const Vertex> profile) const;
  // Same maximum restricted to proper subsets S != N.
  int offset_proper_subsets(std::span<const Vertex> profile) const;

 private:
  Vertex do_evaluate(std::span<const Vertex> profile) const override;
  Vertex vertex_at_offset(int offset) const;
  int offset_impl(std::span<const Vertex> profile, bool include_all) const;

  GmvsParams params_;
  std::vector<Vertex> interval_;  // [low, high] in order
};

std::shared_ptr<const GmvsMechanism> gmvs_mechanism(GmvsParams params);

// Resolves "builtin:<name>[:params]" (see README for the list). `tree` and
// `agents` supply the domain for every built-in except fig1, which carries
// its own. Throws DomainError on unknown names or bad parameters.
MechanismPtr make_builtin(std::string_view spec, TreePtr tree, int agents);

// Table file:
//   tree: <path>
//   agents: <n>
//   a_1 ... a_n -> x        (one line per profile, vertex labels)
// Lines are written in codec order; '#' comments and blank lines are
// ignored when reading.
std::string format_table(const MechanismTable& table, std::string_view tree_path);

struct ParsedTable {
  std::string tree_path;
  MechanismTable table;
};

// `load_tree` turns the header path into a tree.
ParsedTable parse_table(
    std::string_view text,
    const std::function<TreePtr(const std::string&)>& load_tree);

// Reads a table file, resolving a relative tree path against the table
// file's directory.
ParsedTable read_table_file(const std::string& path);
void write_table_file(const std::string& path, const MechanismTable& table,
                      std::string_view tree_path);

}  // namespace sptree

#endif  // SPTREE_MECHANISM_H_
