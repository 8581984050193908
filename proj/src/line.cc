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

#include "sptree/line.h"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "parallel.h"
#include "sptree/error.h"
#include "text.h"

namespace sptree {

namespace {

std::string join(std::span<const std::int64_t> v, char sep) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) s += sep;
    s += std::to_string(v[k]);
  }
  return s;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

bool is_tops_only_table(const LineMechanismSpec& spec) {
  for (std::size_t c = 0; c < spec.class_count(); ++c) {
    const auto& cls = spec.classes()[c];
    if (std::find(cls.begin(), cls.end(), spec.offset(c)) == cls.end()) return false;
  }
  return true;
}

LineDeviation deviate(const LineMechanismSpec& spec, bool tops_only,
                      std::span<const std::int64_t> cls, int agent,
                      std::int64_t report) {
  LineDeviation d;
  const auto here = spec.evaluate(cls);
  if (!here) throw DomainError("profile outside the spec's window");
  d.outcome = *here;
  LineProfile moved(cls.begin(), cls.end());
  const std::int64_t peak = moved[agent];
  moved[agent] = report;
  const std::int64_t before = std::llabs(d.outcome - peak);
  if (const auto there = spec.evaluate(moved)) {
    d.deviated_outcome = *there;
    d.verdict = std::llabs(*there - peak) < before ? LineVerdict::kViolated
                                                   : LineVerdict::kHolds;
    return d;
  }
  // Outside a tabulated spec's window. Tops-only confines the unknown
  // outcome to the entries of the deviated profile.
  if (tops_only) {
    const bool can_gain = std::any_of(moved.begin(), moved.end(), [&](std::int64_t e) {
      return std::llabs(e - peak) < before;
    });
    d.verdict = can_gain ? LineVerdict::kUnverifiable : LineVerdict::kHolds;
    return d;
  }
  d.verdict = LineVerdict::kUnverifiable;
  return d;
}

}  // namespace

std::int64_t spread_of(std::span<const std::int64_t> a) {
  if (a.empty()) return 0;
  const auto [lo, hi] = std::minmax_element(a.begin(), a.end());
  return *hi - *lo;
}

Normalized normalize(std::span<const std::int64_t> a, std::int64_t window) {
  if (a.empty()) throw DomainError("empty line profile");
  if (spread_of(a) > window) {
    throw DomainError("profile spread " + std::to_string(spread_of(a)) +
                      " exceeds window " + std::to_string(window));
  }
  Normalized n;
  n.order.resize(a.size());
  std::iota(n.order.begin(), n.order.end(), 0);
  std::stable_sort(n.order.begin(), n.order.end(),
                   [&](int i, int j) { return a[i] < a[j]; });
  n.shift = a[n.order.front()];
  for (int i : n.order) n.cls.push_back(a[i] - n.shift);
  return n;
}

LineProfile denormalize(const Normalized& n) {
  LineProfile a(n.cls.size());
  for (std::size_t k = 0; k < n.cls.size(); ++k) a[n.order[k]] = n.cls[k] + n.shift;
  return a;
}

std::vector<NormalizedClass> line_classes(int agents, int window) {
  if (agents < 1) throw DomainError("need at least one agent");
  if (window < 0) throw DomainError("window must be non-negative");
  std::vector<NormalizedClass> out;
  NormalizedClass c(agents, 0);
  while (true) {
    out.push_back(c);
    // Next non-decreasing sequence with c[0] = 0 and entries <= window.
    int k = agents - 1;
    while (k > 0 && c[k] == window) --k;
    if (k == 0) break;
    const std::int64_t v = c[k] + 1;
    for (int j = k; j < agents; ++j) c[j] = v;
  }
  return out;
}

LineMechanismSpec::LineMechanismSpec(int agents, int window)
    : agents_(agents), window_(window), classes_(line_classes(agents, window)) {}

LineMechanismSpec LineMechanismSpec::tabulated(int agents, int window,
                                               std::vector<std::int64_t> offsets) {
  LineMechanismSpec s(agents, window);
  if (offsets.size() != s.classes_.size()) {
    throw DomainError("spec has " + std::to_string(offsets.size()) +
                      " offsets, expected " + std::to_string(s.classes_.size()));
  }
  s.offsets_ = std::move(offsets);
  s.name_ = "table:" + join(s.offsets_, ',');
  return s;
}

LineMechanismSpec LineMechanismSpec::functional(int agents, int window,
                                                std::string name, Rule rule) {
  LineMechanismSpec s(agents, window);
  s.name_ = std::move(name);
  s.rule_ = std::move(rule);
  return s;
}

std::optional<std::size_t> LineMechanismSpec::class_index(
    std::span<const std::int64_t> cls) const {
  if (cls.size() != static_cast<std::size_t>(agents_)) return std::nullopt;
  const auto it = std::lower_bound(classes_.begin(), classes_.end(), cls,
                                   [](const NormalizedClass& a, auto b) {
                                     return std::lexicographical_compare(
                                         a.begin(), a.end(), b.begin(), b.end());
                                   });
  if (it == classes_.end() || !std::equal(it->begin(), it->end(), cls.begin(), cls.end())) {
    return std::nullopt;
  }
  return static_cast<std::size_t>(it - classes_.begin());
}

std::int64_t LineMechanismSpec::offset(std::size_t class_index) const {
  if (rule_) return rule_(classes_.at(class_index));
  return offsets_.at(class_index);
}

std::optional<std::int64_t> LineMechanismSpec::evaluate(
    std::span<const std::int64_t> a) const {
  if (a.size() != static_cast<std::size_t>(agents_)) {
    throw DomainError("profile has " + std::to_string(a.size()) + " agents, expected " +
                      std::to_string(agents_));
  }
  if (rule_) {
    LineProfile sorted(a.begin(), a.end());
    std::sort(sorted.begin(), sorted.end());
    return rule_(sorted);
  }
  if (spread_of(a) > window_) return std::nullopt;
  const Normalized n = normalize(a, window_);
  return offsets_[*class_index(n.cls)] + n.shift;
}

std::vector<std::int64_t> LineMechanismSpec::offsets() const {
  if (!rule_) return offsets_;
  std::vector<std::int64_t> out;
  for (const auto& c : classes_) out.push_back(rule_(c));
  return out;
}

LineMechanismSpec order_statistic_spec(int agents, int window, int k) {
  if (k < 1 || k > agents) {
    throw DomainError("order statistic k=" + std::to_string(k) + " outside [1, " +
                      std::to_string(agents) + "]");
  }
  return LineMechanismSpec::functional(
      agents, window, "k=" + std::to_string(k),
      [k](std::span<const std::int64_t> sorted) { return sorted[k - 1]; });
}

LineMechanismSpec floor_average_spec(int agents, int window) {
  return LineMechanismSpec::functional(
      agents, window, "floor-average", [](std::span<const std::int64_t> sorted) {
        const std::int64_t sum = std::accumulate(sorted.begin(), sorted.end(),
                                                 std::int64_t{0});
        return floor_div(sum, static_cast<std::int64_t>(sorted.size()));
      });
}

LineMechanismSpec tabulate(const LineMechanismSpec& spec) {
  return LineMechanismSpec::tabulated(spec.agents(), spec.window(), spec.offsets());
}

std::optional<int> as_order_statistic(const LineMechanismSpec& spec) {
  const auto offs = spec.offsets();
  for (int k = 1; k <= spec.agents(); ++k) {
    bool all = true;
    for (std::size_t c = 0; c < offs.size() && all; ++c) {
      all = offs[c] == spec.classes()[c][k - 1];
    }
    if (all) return k;
  }
  return std::nullopt;
}

std::uint64_t RawLineTable::code(std::span<const std::int64_t> a) const {
  std::uint64_t c = 0;
  for (std::int64_t v : a) {
    if (v < 0 || v > length) throw DomainError("profile outside the raw table");
    c = c * static_cast<std::uint64_t>(length + 1) + static_cast<std::uint64_t>(v);
  }
  return c;
}

LineProfile RawLineTable::decode(std::uint64_t c) const {
  LineProfile a(agents);
  for (int i = agents; i-- > 0;) {
    a[i] = static_cast<std::int64_t>(c % static_cast<std::uint64_t>(length + 1));
    c /= static_cast<std::uint64_t>(length + 1);
  }
  return a;
}

RawLineTable raw_table(int agents, std::int64_t length,
                       const std::function<std::int64_t(const LineProfile&)>& f) {
  if (agents < 1 || length < 0) throw DomainError("bad raw table shape");
  RawLineTable t;
  t.agents = agents;
  t.length = length;
  std::uint64_t size = 1;
  for (int i = 0; i < agents; ++i) {
    size *= static_cast<std::uint64_t>(length + 1);
    if (size > ProfileCodec::kMaxProfiles) throw DomainError("raw table too large");
  }
  t.outcomes.resize(size);
  for (std::uint64_t c = 0; c < size; ++c) t.outcomes[c] = f(t.decode(c));
  return t;
}

RawLineTable raw_table(const LineMechanismSpec& spec, std::int64_t length) {
  if (!spec.is_functional() && length > spec.window()) {
    throw DomainError("raw table wider than the spec's window");
  }
  return raw_table(spec.agents(), length,
                   [&](const LineProfile& a) { return *spec.evaluate(a); });
}

std::string_view to_string(LineVerdict v) {
  switch (v) {
    case LineVerdict::kHolds: return "holds";
    case LineVerdict::kViolated: return "violated";
    case LineVerdict::kUnverifiable: return "unverifiable";
  }
  return "?";
}

std::string describe(const LineWitness& w) {
  std::string s = "profile=(" + join(w.profile, ',') + ")";
  if (w.agent >= 0) {
    s += " agent=" + std::to_string(w.agent + 1) + " report=" + std::to_string(w.report);
  }
  s += " outcome=" + std::to_string(w.outcome);
  if (w.agent >= 0) s += " deviated_outcome=" + std::to_string(w.deviated_outcome);
  return s;
}

LineReport check_shift_invariant(const RawLineTable& table) {
  LineReport r;
  r.property = "shift-invariant";
  for (std::uint64_t c = 0; c < table.outcomes.size(); ++c) {
    LineProfile a = table.decode(c);
    if (*std::max_element(a.begin(), a.end()) == table.length) continue;
    ++r.checked;
    LineProfile b = a;
    for (auto& v : b) ++v;
    const std::int64_t x = table.outcomes[c];
    const std::int64_t y = table.at(b);
    if (y != x + 1) {
      r.verdict = LineVerdict::kViolated;
      r.witness = LineWitness{a, -1, 0, x, y};
      return r;
    }
  }
  return r;
}

LineReport check_anonymous(const RawLineTable& table) {
  LineReport r;
  r.property = "anonymous";
  for (std::uint64_t c = 0; c < table.outcomes.size(); ++c) {
    ++r.checked;
    LineProfile a = table.decode(c);
    LineProfile sorted = a;
    std::sort(sorted.begin(), sorted.end());
    if (table.outcomes[c] != table.at(sorted)) {
      r.verdict = LineVerdict::kViolated;
      r.witness = LineWitness{a, -1, 0, table.outcomes[c], table.at(sorted)};
      return r;
    }
  }
  return r;
}

LineReport check_tops_only(const LineMechanismSpec& spec) {
  LineReport r;
  r.property = "tops-only";
  for (std::size_t c = 0; c < spec.class_count(); ++c) {
    ++r.checked;
    const auto& cls = spec.classes()[c];
    const std::int64_t x = spec.offset(c);
    if (std::find(cls.begin(), cls.end(), x) == cls.end()) {
      r.verdict = LineVerdict::kViolated;
      r.witness = LineWitness{cls, -1, 0, x, x};
      return r;
    }
  }
  return r;
}

LineDeviation line_deviation(const LineMechanismSpec& spec,
                             std::span<const std::int64_t> cls, int agent,
                             std::int64_t report) {
  if (agent < 0 || agent >= spec.agents()) throw DomainError("agent out of range");
  const bool tops = !spec.is_functional() && is_tops_only_table(spec);
  return deviate(spec, tops, cls, agent, report);
}

LineReport line_sp_check(const LineMechanismSpec& spec, std::int64_t deviation,
                         bool collect_all) {
  if (deviation < spec.window()) {
    throw DomainError("deviation window must be at least the spread window");
  }
  LineReport r;
  r.property = "sp";
  const bool tops = !spec.is_functional() && is_tops_only_table(spec);
  for (const auto& cls : spec.classes()) {
    const std::int64_t hi = cls.back() + deviation;
    for (int i = 0; i < spec.agents(); ++i) {
      for (std::int64_t rep = -deviation; rep <= hi; ++rep) {
        if (rep == cls[i]) continue;
        ++r.checked;
        const LineDeviation d = deviate(spec, tops, cls, i, rep);
        if (d.verdict == LineVerdict::kUnverifiable) {
          ++r.unverifiable;
        } else if (d.verdict == LineVerdict::kViolated) {
          LineWitness w{cls, i, rep, d.outcome, *d.deviated_outcome};
          if (!r.witness) r.witness = w;
          if (!collect_all) {
            r.verdict = LineVerdict::kViolated;
            return r;
          }
          r.violations.push_back(std::move(w));
        }
      }
    }
  }
  if (r.witness) {
    r.verdict = LineVerdict::kViolated;
  } else if (r.unverifiable > 0) {
    r.verdict = LineVerdict::kUnverifiable;
  }
  return r;
}

bool onto_within_window(const LineMechanismSpec& spec) {
  const std::int64_t w = spec.window();
  std::vector<char> hit(w + 1, 0);
  for (std::size_t c = 0; c < spec.class_count(); ++c) {
    const std::int64_t spread = spec.classes()[c].back();
    const std::int64_t x = spec.offset(c);
    for (std::int64_t d = 0; d + spread <= w; ++d) {
      if (x + d >= 0 && x + d <= w) hit[x + d] = 1;
    }
  }
  return std::all_of(hit.begin(), hit.end(), [](char h) { return h; });
}

EquivalenceReport verify_line_theorem(int agents, int window, std::int64_t deviation,
                                      const LineTheoremOptions& opts) {
  if (deviation < window) {
    throw DomainError("deviation window must be at least the spread window");
  }
  const auto classes = line_classes(agents, window);
  EquivalenceReport rep;
  rep.claim = "line-theorem";
  rep.mode = "exhaustive";
  rep.domain = "line agents=" + std::to_string(agents) +
               " spread=" + std::to_string(window) +
               " deviation=" + std::to_string(deviation);

  // Tops-only specs: per class, the distinct entries.
  std::vector<std::vector<std::int64_t>> choices;
  for (const auto& c : classes) {
    std::vector<std::int64_t> v(c.begin(), c.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    choices.push_back(std::move(v));
  }
  auto count_specs = [&](const std::vector<std::size_t>& radices) -> std::optional<std::uint64_t> {
    std::uint64_t total = 1;
    for (auto r : radices) {
      if (total > opts.budget / r) return std::nullopt;
      total *= r;
    }
    return total;
  };
  auto decode = [](std::uint64_t index, const std::vector<std::size_t>& radices) {
    std::vector<std::size_t> digits(radices.size());
    for (std::size_t k = radices.size(); k-- > 0;) {
      digits[k] = index % radices[k];
      index /= radices[k];
    }
    return digits;
  };

  std::vector<std::size_t> tops_radix;
  for (const auto& c : choices) tops_radix.push_back(c.size());
  const auto tops_total = count_specs(tops_radix);

  // D = 2W is the reference point for verdict stability.
  const std::int64_t reference = std::max<std::int64_t>(window, 2 * window);
  struct Outcome {
    bool violated = false;
    bool unverifiable = false;
    bool onto = false;
    bool unstable = false;
  };
  bool complete = true;
  std::vector<std::string> survivors;
  std::vector<std::vector<std::int64_t>> survivor_offsets;
  std::set<int> found_k;
  std::uint64_t violated = 0, unverifiable = 0, not_onto = 0, unstable = 0;

  if (!tops_total) {
    complete = false;
  } else {
    std::vector<Outcome> outcomes(*tops_total);
    const std::uint64_t chunks = internal::chunk_count(*tops_total);
    internal::run_chunks(chunks, opts.workers, [&](std::uint64_t ch) {
      const auto [lo, hi] = internal::chunk_range(*tops_total, chunks, ch);
      for (std::uint64_t s = lo; s < hi; ++s) {
        const auto digits = decode(s, tops_radix);
        std::vector<std::int64_t> offs(classes.size());
        for (std::size_t c = 0; c < classes.size(); ++c) offs[c] = choices[c][digits[c]];
        const auto spec = LineMechanismSpec::tabulated(agents, window, offs);
        const auto sp = line_sp_check(spec, deviation);
        Outcome& o = outcomes[s];
        o.violated = sp.verdict == LineVerdict::kViolated;
        o.unverifiable = sp.unverifiable > 0;
        o.onto = onto_within_window(spec);
        if (reference < deviation) {
          const bool at_ref =
              line_sp_check(spec, reference).verdict == LineVerdict::kViolated;
          o.unstable = at_ref != o.violated;
        }
      }
    });
    for (std::uint64_t s = 0; s < *tops_total; ++s) {
      const Outcome& o = outcomes[s];
      violated += o.violated;
      unverifiable += !o.violated && o.unverifiable;
      not_onto += !o.onto;
      unstable += o.unstable;
      if (o.violated || !o.onto) continue;
      const auto digits = decode(s, tops_radix);
      std::vector<std::int64_t> offs(classes.size());
      for (std::size_t c = 0; c < classes.size(); ++c) offs[c] = choices[c][digits[c]];
      const auto spec = LineMechanismSpec::tabulated(agents, window, offs);
      if (const auto k = as_order_statistic(spec)) {
        survivors.push_back("k=" + std::to_string(*k));
        found_k.insert(*k);
      } else {
        survivors.push_back(spec.name());
        survivor_offsets.push_back(offs);
      }
    }
  }

  // Second part: specs with offsets in [0, W] that are not tops-only should
  // all be refuted within the window.
  std::vector<std::size_t> wide_radix(classes.size(), static_cast<std::size_t>(window) + 1);
  const auto wide_total = count_specs(wide_radix);
  std::uint64_t n1_specs = 0, n1_refuted = 0, n1_unresolved = 0;
  std::optional<std::vector<std::int64_t>> n1_first_unresolved;
  if (!wide_total) {
    complete = false;
  } else {
    std::vector<char> state(*wide_total, 0);  // 0 tops-only, 1 refuted, 2 unresolved
    const std::uint64_t chunks = internal::chunk_count(*wide_total);
    internal::run_chunks(chunks, opts.workers, [&](std::uint64_t ch) {
      const auto [lo, hi] = internal::chunk_range(*wide_total, chunks, ch);
      for (std::uint64_t s = lo; s < hi; ++s) {
        const auto digits = decode(s, wide_radix);
        std::vector<std::int64_t> offs(digits.begin(), digits.end());
        const auto spec = LineMechanismSpec::tabulated(agents, window, offs);
        if (check_tops_only(spec).verdict == LineVerdict::kHolds) continue;
        state[s] = line_sp_check(spec, deviation).verdict == LineVerdict::kViolated ? 1 : 2;
      }
    });
    for (std::uint64_t s = 0; s < *wide_total; ++s) {
      if (state[s] == 0) continue;
      ++n1_specs;
      if (state[s] == 1) {
        ++n1_refuted;
      } else {
        ++n1_unresolved;
        if (!n1_first_unresolved) {
          const auto digits = decode(s, wide_radix);
          n1_first_unresolved = std::vector<std::int64_t>(digits.begin(), digits.end());
        }
      }
    }
  }

  rep.examined = (tops_total ? *tops_total : 0) + n1_specs;
  rep.tallies = {{"tops_only_specs", tops_total ? *tops_total : 0},
                 {"violated", violated},
                 {"passing_with_unverifiable", unverifiable},
                 {"not_onto", not_onto},
                 {"survivors", survivors.size()},
                 {"order_statistics", found_k.size()},
                 {"unstable_between_2w_and_d", unstable},
                 {"non_tops_only_specs", n1_specs},
                 {"non_tops_only_refuted", n1_refuted},
                 {"non_tops_only_unresolved", n1_unresolved}};
  std::string expected, got;
  for (int k = 1; k <= agents; ++k) expected += (k > 1 ? "," : "") + ("k=" + std::to_string(k));
  for (std::size_t k = 0; k < survivors.size(); ++k) got += (k ? "," : "") + survivors[k];
  rep.details = {{"survivors", got.empty() ? "none" : got}, {"expected", expected}};
  if (n1_first_unresolved) {
    rep.details.emplace_back("first_unresolved_non_tops_only", join(*n1_first_unresolved, ','));
  }

  const bool exact = survivor_offsets.empty() &&
                     found_k.size() == static_cast<std::size_t>(agents);
  if (tops_total && !exact) {
    rep.verdict = ClaimVerdict::kRefuted;
    if (!survivor_offsets.empty()) {
      rep.witness = {{"unexpected_survivor", join(survivor_offsets.front(), ',')}};
    } else {
      for (int k = 1; k <= agents; ++k) {
        if (!found_k.count(k)) {
          rep.witness = {{"missing_order_statistic", "k=" + std::to_string(k)}};
          break;
        }
      }
    }
  } else if (!complete || n1_unresolved > 0) {
    rep.verdict = ClaimVerdict::kInconclusive;
  } else {
    rep.verdict = ClaimVerdict::kConfirmed;
  }
  return rep;
}

std::string format_line_spec(const LineMechanismSpec& spec) {
  std::ostringstream out;
  out << "agents: " << spec.agents() << "\n";
  out << "spread: " << spec.window() << "\n";
  const auto offs = spec.offsets();
  for (std::size_t c = 0; c < spec.class_count(); ++c) {
    out << join(spec.classes()[c], ' ') << " -> " << offs[c] << "\n";
  }
  return out.str();
}

LineMechanismSpec parse_line_spec(std::string_view text) {
  std::optional<int> agents, window;
  std::vector<std::pair<int, std::string_view>> rows;
  internal::for_each_line(text, [&](int line_no, std::string_view line) {
    if (line.find("->") != std::string_view::npos) {
      rows.emplace_back(line_no, line);
      return;
    }
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError(line_no, "expected 'key: value'");
    const auto key = internal::trim(line.substr(0, colon));
    const auto value = internal::to_int(line.substr(colon + 1));
    if (!value || *value < 0 || *value > 64) {
      throw ParseError(line_no, "bad value for '" + std::string(key) + "'");
    }
    if (key == "agents") {
      agents = static_cast<int>(*value);
    } else if (key == "spread") {
      window = static_cast<int>(*value);
    } else {
      throw ParseError(line_no, "unknown key '" + std::string(key) + "'");
    }
  });
  if (!agents || !window) throw ParseError(0, "missing 'agents' or 'spread' header");
  const auto classes = line_classes(*agents, *window);
  std::vector<std::optional<std::int64_t>> offs(classes.size());
  for (const auto& [line_no, line] : rows) {
    const auto arrow = line.find("->");
    NormalizedClass cls;
    for (auto tok : internal::tokens(line.substr(0, arrow))) {
      const auto v = internal::to_int(tok);
      if (!v) throw ParseError(line_no, "bad class entry '" + std::string(tok) + "'");
      cls.push_back(*v);
    }
    const auto off = internal::to_int(line.substr(arrow + 2));
    if (!off) throw ParseError(line_no, "bad offset");
    const auto it = std::find(classes.begin(), classes.end(), cls);
    if (it == classes.end()) throw ParseError(line_no, "not a normalized class");
    auto& slot = offs[it - classes.begin()];
    if (slot) throw ParseError(line_no, "duplicate class");
    slot = *off;
  }
  std::vector<std::int64_t> dense;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (!offs[c]) throw ParseError(0, "missing class (" + join(classes[c], ',') + ")");
    dense.push_back(*offs[c]);
  }
  return LineMechanismSpec::tabulated(*agents, *window, std::move(dense));
}

LineMechanismSpec read_line_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_line_spec(buf.str());
  } catch (const ParseError& e) {
    throw e.in(path);
  }
}

}  // namespace sptree
