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

#ifndef SPTREE_LINE_H_
#define SPTREE_LINE_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sptree/search.h"

namespace sptree {

using LineProfile = std::vector<std::int64_t>;

// Sorted, shifted so the first entry is 0. The spread is the last entry.
using NormalizedClass = std::vector<std::int64_t>;

struct Normalized {
  NormalizedClass cls;
  std::int64_t shift = 0;
  // cls[k] == a[order[k]] - shift.
  std::vector<int> order;
};

// Throws DomainError when the spread exceeds `window`.
Normalized normalize(std::span<const std::int64_t> a, std::int64_t window);
LineProfile denormalize(const Normalized& n);

std::int64_t spread_of(std::span<const std::int64_t> a);

// Every class of n agents with spread at most W, in lexicographic order.
std::vector<NormalizedClass> line_classes(int agents, int window);

// An anonymous shift-invariant mechanism on the integer line, given either
// by an outcome offset per class (tabulated) or by a closed form over the
// sorted profile (functional). Tabulated specs are undefined beyond the
// window; functional ones are defined everywhere.
class LineMechanismSpec {
 public:
  using Rule = std::function<std::int64_t(std::span<const std::int64_t> sorted)>;

  static LineMechanismSpec tabulated(int agents, int window,
                                     std::vector<std::int64_t> offsets);
  static LineMechanismSpec functional(int agents, int window, std::string name,
                                      Rule rule);

  int agents() const { return agents_; }
  int window() const { return window_; }
  bool is_functional() const { return static_cast<bool>(rule_); }
  const std::string& name() const { return name_; }
  const std::vector<NormalizedClass>& classes() const { return classes_; }
  std::size_t class_count() const { return classes_.size(); }
  std::int64_t offset(std::size_t class_index) const;
  std::optional<std::size_t> class_index(std::span<const std::int64_t> cls) const;

  // Outcome at a raw profile; nullopt when a tabulated spec is asked about
  // a profile wider than its window.
  std::optional<std::int64_t> evaluate(std::span<const std::int64_t> a) const;

  // Offsets of every in-window class (evaluates functional specs).
  std::vector<std::int64_t> offsets() const;

 private:
  LineMechanismSpec(int agents, int window);

  int agents_;
  int window_;
  std::string name_;
  std::vector<NormalizedClass> classes_;
  std::vector<std::int64_t> offsets_;
  Rule rule_;
};

// 1 <= k <= n.
LineMechanismSpec order_statistic_spec(int agents, int window, int k);
// floor(sum / n).
LineMechanismSpec floor_average_spec(int agents, int window);
// Same in-window behaviour, as a table.
LineMechanismSpec tabulate(const LineMechanismSpec& spec);
// k when the spec agrees with the k-th order statistic on every class.
std::optional<int> as_order_statistic(const LineMechanismSpec& spec);

// Outcomes for every profile in {0..length}^n, indexed like ProfileCodec
// with base length+1.
struct RawLineTable {
  int agents = 0;
  std::int64_t length = 0;
  std::vector<std::int64_t> outcomes;

  std::uint64_t code(std::span<const std::int64_t> a) const;
  LineProfile decode(std::uint64_t code) const;
  std::int64_t at(std::span<const std::int64_t> a) const { return outcomes[code(a)]; }
};

RawLineTable raw_table(const LineMechanismSpec& spec, std::int64_t length);
RawLineTable raw_table(int agents, std::int64_t length,
                       const std::function<std::int64_t(const LineProfile&)>& f);

enum class LineVerdict { kHolds, kViolated, kUnverifiable };
std::string_view to_string(LineVerdict v);

struct LineWitness {
  LineProfile profile;
  int agent = -1;  // 0-based; -1 for per-profile properties
  std::int64_t report = 0;
  std::int64_t outcome = 0;
  std::int64_t deviated_outcome = 0;
  friend bool operator==(const LineWitness&, const LineWitness&) = default;
};
std::string describe(const LineWitness& w);

struct LineReport {
  std::string property;
  LineVerdict verdict = LineVerdict::kHolds;
  std::optional<LineWitness> witness;  // first violation in scan order
  std::vector<LineWitness> violations; // all, when requested
  std::uint64_t checked = 0;
  std::uint64_t unverifiable = 0;
};

// f(a + 1) == f(a) + 1 whenever both profiles lie in the table.
LineReport check_shift_invariant(const RawLineTable& table);
// f(a) == f(sorted(a)).
LineReport check_anonymous(const RawLineTable& table);
// Every class maps to one of its own entries.
LineReport check_tops_only(const LineMechanismSpec& spec);

// How a single deviation resolves.
struct LineDeviation {
  LineVerdict verdict = LineVerdict::kHolds;
  std::int64_t outcome = 0;
  std::optional<std::int64_t> deviated_outcome;
};

// Agent `agent` of the class profile `cls` reports `report`.
LineDeviation line_deviation(const LineMechanismSpec& spec,
                             std::span<const std::int64_t> cls, int agent,
                             std::int64_t report);

// Scans every class, agent and report in [-D, spread + D]. A deviation
// leaving the window is evaluated directly for functional specs. For a
// tabulated tops-only spec it is resolved when no entry of the deviated
// profile is strictly closer to the deviator than the current outcome, and
// counted as unverifiable otherwise; so is every out-of-window deviation of
// a spec that is not tops-only. Violations win over unverifiable.
LineReport line_sp_check(const LineMechanismSpec& spec, std::int64_t deviation,
                         bool collect_all = false);

// Every outcome in [0, W] is hit by a profile inside [0, W].
bool onto_within_window(const LineMechanismSpec& spec);

struct LineTheoremOptions {
  std::uint64_t budget = 10'000'000;  // specs per enumeration
  int workers = 1;
};

// Enumerates tops-only anonymous tabulated specs, keeps those that pass
// line_sp_check and onto_within_window, and compares the survivors with the
// order statistics. Also enumerates specs with offsets in [0, W] that are not
// tops-only and counts how many are refuted within the window.
EquivalenceReport verify_line_theorem(int agents, int window, std::int64_t deviation,
                                      const LineTheoremOptions& opts = {});

// Line spec file: "agents: n", "spread: W", then "c_1 ... c_n -> offset"
// for every class in lexicographic order.
std::string format_line_spec(const LineMechanismSpec& spec);
LineMechanismSpec parse_line_spec(std::string_view text);
LineMechanismSpec read_line_spec_file(const std::string& path);

}  // namespace sptree

#endif  // SPTREE_LINE_H_
