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

#include "sptree/axioms.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "parallel.h"
#include "sptree/error.h"

namespace sptree {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string labelled(const DiscreteTree& t, std::span<const Vertex> profile) {
  std::string out = "(";
  for (std::size_t k = 0; k < profile.size(); ++k) {
    if (k) out += ',';
    out += std::to_string(t.label(profile[k]));
  }
  return out + ")";
}

// Rank of the move (agent, report) within one profile's scan.
std::uint64_t move_rank(int agent, Vertex report, Vertex current, int vertices) {
  return static_cast<std::uint64_t>(agent) * (vertices - 1) +
         static_cast<std::uint64_t>(report < current ? report : report - 1);
}

struct ScanHit {
  std::uint64_t rank = 0;  // global scan rank (pairs or profiles)
  Witness witness;
};

struct ChunkResult {
  std::optional<ScanHit> first;
  std::uint64_t violations = 0;
};

// Shared driver: visit(code, profile, record) inspects one profile and calls
// record(rank, witness) for each violation in scan order.
template <class Visit>
PropertyReport scan_profiles(const MechanismTable& m, std::string property,
                             std::uint64_t items_per_profile, bool pairwise,
                             const CheckOptions& opts, Visit visit) {
  const auto start = Clock::now();
  const ProfileCodec& codec = m.codec();
  const std::uint64_t total = codec.size();
  const std::uint64_t chunks = internal::chunk_count(total);
  std::vector<ChunkResult> results(chunks);
  std::atomic<std::uint64_t> best{std::numeric_limits<std::uint64_t>::max()};

  internal::run_chunks(chunks, opts.workers, [&](std::uint64_t c) {
    const auto [lo, hi] = internal::chunk_range(total, chunks, c);
    ChunkResult& out = results[c];
    Profile a(m.agents());
    for (std::uint64_t code = lo; code < hi; ++code) {
      if (!opts.full_counts && code * items_per_profile >= best.load()) break;
      codec.decode(code, a);
      bool stop = false;
      visit(code, a, [&](std::uint64_t rank, Witness w) {
        ++out.violations;
        if (!out.first) {
          out.first = ScanHit{rank, std::move(w)};
          if (!opts.full_counts) {
            auto seen = best.load();
            while (rank < seen && !best.compare_exchange_weak(seen, rank)) {
            }
            stop = true;
          }
        }
        return !stop;
      });
      if (stop) break;
    }
  });

  PropertyReport report;
  report.property = std::move(property);
  const ChunkResult* hit = nullptr;
  for (const auto& r : results) {
    report.violations += r.violations;
    if (!hit && r.first) hit = &r;
  }
  const std::uint64_t all_items = total * items_per_profile;
  if (hit) {
    report.verdict = Verdict::kViolated;
    report.witness = hit->first->witness;
    if (!opts.full_counts) report.violations = 1;
  }
  if (opts.full_counts || !hit) {
    report.profiles_checked = total;
    report.pairs_checked = pairwise ? all_items : 0;
  } else {
    const std::uint64_t rank = hit->first->rank;
    report.profiles_checked = rank / items_per_profile + 1;
    report.pairs_checked = pairwise ? rank + 1 : 0;
  }
  report.elapsed_seconds = seconds_since(start);
  return report;
}

PropertyReport check_pairwise(const MechanismTable& m, const PropertyId& prop,
                              const CheckOptions& opts) {
  const DiscreteTree& t = m.tree();
  const int vertices = t.vertex_count();
  const int n = m.agents();
  const std::uint64_t per_profile = static_cast<std::uint64_t>(n) * (vertices - 1);
  const ProfileCodec& codec = m.codec();
  const PairClassifier classifier(t);

  std::uint8_t mask = 0;
  switch (prop.kind()) {
    case PropertyId::Kind::kSp: mask = kSpBit; break;
    case PropertyId::Kind::kTmon: mask = kTmonBit; break;
    case PropertyId::Kind::kDb: mask = kDbBit; break;
    case PropertyId::Kind::kAdr: mask = kAdrBit; break;
    case PropertyId::Kind::kTc: mask = kTcBit; break;
    case PropertyId::Kind::kAtc: mask = kAdrBit | kTsi1Bit; break;
    case PropertyId::Kind::kTsi:
      if (prop.tsi_steps() == 1) mask = kTsi1Bit;
      break;
    default: break;
  }
  auto holds = [&](const Move& mv) {
    if (mask) return (classifier.bits(mv) & mask) == mask;
    return prop.holds_on(t, mv);
  };

  return scan_profiles(
      m, prop.to_string(), per_profile, true, opts,
      [&](std::uint64_t code, const Profile& a, auto&& record) {
        const Vertex x = m.outcome(code);
        for (int i = 0; i < n; ++i) {
          const Vertex ai = a[i];
          for (Vertex r = 0; r < vertices; ++r) {
            if (r == ai) continue;
            const Vertex x2 = m.outcome(codec.replace(code, i, r));
            const Move mv{ai, r, x, x2};
            if (holds(mv)) continue;
            if (!record(code * per_profile + move_rank(i, r, ai, vertices),
                        DeviationPair{a, i, r, x, x2})) {
              return;
            }
          }
        }
      });
}

PropertyReport check_tpar(const MechanismTable& m, const CheckOptions& opts) {
  const DiscreteTree& t = m.tree();
  return scan_profiles(m, "tpar", 1, false, opts,
                       [&](std::uint64_t code, const Profile& a, auto&& record) {
                         const Vertex x = m.outcome(code);
                         if (!tpar_location(t, a, x)) {
                           record(code, ProfileWitness{a, x});
                         }
                       });
}

PropertyReport check_uncompromising_impl(const MechanismTable& m,
                                         const CheckOptions& opts) {
  const DiscreteTree& t = m.tree();
  if (!t.is_path()) {
    throw DomainError("uncompromising is defined on path domains only");
  }
  const Vertex origin = t.path_endpoints().first;
  const int vertices = t.vertex_count();
  const int n = m.agents();
  const std::uint64_t per_profile = static_cast<std::uint64_t>(n) * (vertices - 1);
  const ProfileCodec& codec = m.codec();
  auto pos = [&](Vertex v) { return t.dist(origin, v); };
  return scan_profiles(
      m, "uncompromising", per_profile, true, opts,
      [&](std::uint64_t code, const Profile& a, auto&& record) {
        const Vertex x = m.outcome(code);
        for (int i = 0; i < n; ++i) {
          const Vertex ai = a[i];
          if (pos(ai) == pos(x)) continue;
          const bool above = pos(ai) > pos(x);
          for (Vertex r = 0; r < vertices; ++r) {
            if (r == ai) continue;
            const bool same_side = above ? pos(r) >= pos(x) : pos(r) <= pos(x);
            if (!same_side) continue;
            const Vertex x2 = m.outcome(codec.replace(code, i, r));
            if (x2 == x) continue;
            if (!record(code * per_profile + move_rank(i, r, ai, vertices),
                        DeviationPair{a, i, r, x, x2})) {
              return;
            }
          }
        }
      });
}

bool uncompromising_violated(const DiscreteTree& t, const DeviationPair& p) {
  const Vertex origin = t.path_endpoints().first;
  auto pos = [&](Vertex v) { return t.dist(origin, v); };
  const Vertex ai = p.profile[p.agent];
  if (pos(ai) == pos(p.outcome) || p.outcome == p.deviated_outcome) return false;
  if (pos(ai) > pos(p.outcome)) return pos(p.report) >= pos(p.outcome);
  return pos(p.report) <= pos(p.outcome);
}

}  // namespace

DeviationPair make_deviation(const MechanismTable& m, Profile profile, int agent,
                             Vertex report) {
  if (agent < 0 || agent >= m.agents()) {
    throw DomainError("agent index out of range");
  }
  m.tree().require_valid(report);
  const auto code = m.codec().encode(profile);
  const Vertex x = m.outcome(code);
  const Vertex x2 = m.outcome(m.codec().replace(code, agent, report));
  return DeviationPair{std::move(profile), agent, report, x, x2};
}

bool sp_pair(const DiscreteTree& t, const Move& mv) {
  if (mv.trivial()) return true;
  return t.dist(mv.from, mv.outcome) <= t.dist(mv.from, mv.deviated_outcome) &&
         t.dist(mv.to, mv.deviated_outcome) <= t.dist(mv.to, mv.outcome);
}

// Projections of x and x' onto [a_i,a'_i] bound the common subpath: it is
// [p,q] when p != q and has at most one vertex otherwise. p is always the
// end nearer x.
bool tmon_pair(const DiscreteTree& t, const Move& mv) {
  if (mv.trivial() || mv.outcome == mv.deviated_outcome) return true;
  const Vertex p = t.project(mv.from, mv.to, mv.outcome);
  const Vertex q = t.project(mv.from, mv.to, mv.deviated_outcome);
  if (p == q) return true;
  return t.dist(mv.from, p) < t.dist(mv.from, q);
}

// Side trees w.r.t. [a_i,a'_i] are rooted at projections; two of them are
// d(p,q) apart and a vertex's depth is its distance to its root.
bool db_pair(const DiscreteTree& t, const Move& mv) {
  if (mv.trivial()) return true;
  const Vertex p = t.project(mv.from, mv.to, mv.outcome);
  const Vertex q = t.project(mv.from, mv.to, mv.deviated_outcome);
  const int gap = t.dist(p, q);
  const int depth_x = t.dist(mv.outcome, p);
  const int depth_x2 = t.dist(mv.deviated_outcome, q);
  return gap >= std::abs(depth_x - depth_x2);
}

bool adr_pair(const DiscreteTree& t, const Move& mv) {
  if (mv.trivial() || mv.outcome == mv.deviated_outcome) return true;
  if (t.project(mv.from, mv.to, mv.outcome) !=
      t.project(mv.from, mv.to, mv.deviated_outcome)) {
    return true;
  }
  const Vertex z = t.median(mv.from, mv.outcome, mv.deviated_outcome);
  return t.dist(mv.outcome, z) == 1 && t.dist(mv.deviated_outcome, z) == 1;
}

bool tsi_pair(const DiscreteTree& t, const Move& mv, int steps) {
  if (mv.trivial()) return true;
  const Vertex p = t.project(mv.from, mv.to, mv.outcome);
  if (t.dist(mv.outcome, p) <= steps) return true;
  return p == t.project(mv.from, mv.to, mv.deviated_outcome);
}

bool tc_pair(const DiscreteTree& t, const Move& mv) {
  if (mv.trivial() || mv.outcome == mv.deviated_outcome) return true;
  return t.on_path(mv.from, mv.to, mv.outcome) &&
         t.on_path(mv.from, mv.to, mv.deviated_outcome);
}

bool atc_pair(const DiscreteTree& t, const Move& mv) {
  return adr_pair(t, mv) && tsi_pair(t, mv, 1);
}

bool tpar_location(const DiscreteTree& t, std::span<const Vertex> profile,
                   Vertex outcome) {
  if (std::find(profile.begin(), profile.end(), outcome) != profile.end()) {
    return true;
  }
  const VertexSet inner = interior(t, profile);
  for (Vertex v : inner) {
    if (t.dist(v, outcome) <= 1) return true;
  }
  return false;
}

bool tpar_profile(const Mechanism& m, std::span<const Vertex> profile) {
  return tpar_location(m.tree(), profile, m.evaluate(profile));
}

PairClassifier::PairClassifier(const DiscreteTree& t) : tree_(&t) {
  const int n = t.vertex_count();
  if (n > kCacheLimit) return;
  cache_.resize(static_cast<std::size_t>(n) * n * n * n);
  for (Vertex a = 0; a < n; ++a) {
    for (Vertex b = 0; b < n; ++b) {
      for (Vertex x = 0; x < n; ++x) {
        for (Vertex y = 0; y < n; ++y) {
          const Move mv{a, b, x, y};
          cache_[index(mv)] = compute(mv);
        }
      }
    }
  }
}

std::uint8_t PairClassifier::compute(const Move& mv) const {
  const DiscreteTree& t = *tree_;
  std::uint8_t bits = 0;
  if (sp_pair(t, mv)) bits |= kSpBit;
  if (tmon_pair(t, mv)) bits |= kTmonBit;
  if (db_pair(t, mv)) bits |= kDbBit;
  if (adr_pair(t, mv)) bits |= kAdrBit;
  if (tsi_pair(t, mv, 1)) bits |= kTsi1Bit;
  if (tc_pair(t, mv)) bits |= kTcBit;
  return bits;
}

PropertyId::PropertyId(Kind kind, int tsi_steps)
    : kind_(kind), tsi_steps_(kind == Kind::kTsi ? tsi_steps : 0) {
  if (kind == Kind::kTsi && tsi_steps < 0) {
    throw DomainError("tsi step bound must be non-negative");
  }
}

PropertyId PropertyId::parse(std::string_view text) {
  static const std::pair<std::string_view, Kind> kNames[] = {
      {"sp", Kind::kSp},           {"tmon", Kind::kTmon},
      {"db", Kind::kDb},           {"adr", Kind::kAdr},
      {"tc", Kind::kTc},           {"atc", Kind::kAtc},
      {"tpar", Kind::kTpar},       {"onto", Kind::kOnto},
      {"unanimous", Kind::kUnanimous}, {"anonymous", Kind::kAnonymous},
      {"uncompromising", Kind::kUncompromising},
  };
  for (const auto& [name, kind] : kNames) {
    if (text == name) return PropertyId(kind);
  }
  if (text.substr(0, 4) == "tsi:") {
    const std::string digits(text.substr(4));
    char* end = nullptr;
    const long steps = std::strtol(digits.c_str(), &end, 10);
    if (!digits.empty() && *end == '\0' && steps >= 0 && steps < 1'000'000) {
      return PropertyId(Kind::kTsi, static_cast<int>(steps));
    }
  }
  throw DomainError("unknown property '" + std::string(text) + "'");
}

bool PropertyId::pairwise() const {
  switch (kind_) {
    case Kind::kSp:
    case Kind::kTmon:
    case Kind::kDb:
    case Kind::kAdr:
    case Kind::kTsi:
    case Kind::kTc:
    case Kind::kAtc:
      return true;
    default:
      return false;
  }
}

std::string PropertyId::to_string() const {
  switch (kind_) {
    case Kind::kSp: return "sp";
    case Kind::kTmon: return "tmon";
    case Kind::kDb: return "db";
    case Kind::kAdr: return "adr";
    case Kind::kTsi: return "tsi:" + std::to_string(tsi_steps_);
    case Kind::kTc: return "tc";
    case Kind::kAtc: return "atc";
    case Kind::kTpar: return "tpar";
    case Kind::kOnto: return "onto";
    case Kind::kUnanimous: return "unanimous";
    case Kind::kAnonymous: return "anonymous";
    case Kind::kUncompromising: return "uncompromising";
  }
  return "?";
}

bool PropertyId::holds_on(const DiscreteTree& t, const Move& mv) const {
  switch (kind_) {
    case Kind::kSp: return sp_pair(t, mv);
    case Kind::kTmon: return tmon_pair(t, mv);
    case Kind::kDb: return db_pair(t, mv);
    case Kind::kAdr: return adr_pair(t, mv);
    case Kind::kTsi: return tsi_pair(t, mv, tsi_steps_);
    case Kind::kTc: return tc_pair(t, mv);
    case Kind::kAtc: return atc_pair(t, mv);
    default:
      throw DomainError("property " + to_string() + " is not pairwise");
  }
}

std::string_view to_string(Verdict v) {
  return v == Verdict::kHolds ? "holds" : "violated";
}

PropertyReport check_property(const MechanismTable& m, const PropertyId& prop,
                              const CheckOptions& opts) {
  using Kind = PropertyId::Kind;
  switch (prop.kind()) {
    case Kind::kTpar: return check_tpar(m, opts);
    case Kind::kOnto: return check_onto(m);
    case Kind::kUnanimous: return check_unanimous(m);
    case Kind::kAnonymous: return check_anonymous(m);
    case Kind::kUncompromising: return check_uncompromising_impl(m, opts);
    default: return check_pairwise(m, prop, opts);
  }
}

PropertyReport check_property(const Mechanism& m, const PropertyId& prop,
                              const CheckOptions& opts) {
  const auto start = Clock::now();
  PropertyReport report = check_property(tabulate(m), prop, opts);
  report.elapsed_seconds = seconds_since(start);
  return report;
}

PropertyReport check_onto(const MechanismTable& m) {
  const auto start = Clock::now();
  const int vertices = m.tree().vertex_count();
  std::vector<char> hit(vertices, 0);
  int missing = vertices;
  std::uint64_t scanned = 0;
  for (std::uint64_t code = 0; code < m.size() && missing > 0; ++code) {
    ++scanned;
    const Vertex x = m.outcome(code);
    if (!hit[x]) {
      hit[x] = 1;
      --missing;
    }
  }
  PropertyReport report;
  report.property = "onto";
  report.profiles_checked = scanned;
  for (Vertex v = 0; v < vertices; ++v) {
    if (!hit[v]) {
      report.verdict = Verdict::kViolated;
      report.witness = UnreachedVertex{v};
      report.violations = static_cast<std::uint64_t>(missing);
      break;
    }
  }
  report.elapsed_seconds = seconds_since(start);
  return report;
}

PropertyReport check_unanimous(const MechanismTable& m) {
  const auto start = Clock::now();
  PropertyReport report;
  report.property = "unanimous";
  for (Vertex v = 0; v < m.tree().vertex_count(); ++v) {
    ++report.profiles_checked;
    const Vertex x = m.outcome(m.codec().diagonal(v));
    if (x != v) {
      report.verdict = Verdict::kViolated;
      report.witness = ProfileWitness{Profile(m.agents(), v), x};
      report.violations = 1;
      break;
    }
  }
  report.elapsed_seconds = seconds_since(start);
  return report;
}

// f(a) == f(sorted(a)) for every a is equivalent to invariance under every
// permutation.
PropertyReport check_anonymous(const MechanismTable& m) {
  if (m.agents() < 2) {
    throw DomainError("anonymity needs at least two agents");
  }
  const auto start = Clock::now();
  PropertyReport report;
  report.property = "anonymous";
  Profile a(m.agents());
  for (std::uint64_t code = 0; code < m.size(); ++code) {
    ++report.profiles_checked;
    m.codec().decode(code, a);
    Profile sorted = a;
    std::sort(sorted.begin(), sorted.end());
    const Vertex x = m.outcome(code);
    const Vertex y = m.outcome(m.codec().encode(sorted));
    if (x != y) {
      report.verdict = Verdict::kViolated;
      report.witness = PermutationWitness{a, x, sorted, y};
      report.violations = 1;
      break;
    }
  }
  report.elapsed_seconds = seconds_since(start);
  return report;
}

PropertyReport check_uncompromising(const MechanismTable& m) {
  return check_uncompromising_impl(m, CheckOptions{});
}

bool replay(const MechanismTable& m, const PropertyId& prop, const Witness& w) {
  using Kind = PropertyId::Kind;
  const DiscreteTree& t = m.tree();
  if (const auto* p = std::get_if<DeviationPair>(&w)) {
    if (p->report == p->profile[p->agent]) return false;
    const DeviationPair fresh = make_deviation(m, p->profile, p->agent, p->report);
    if (fresh != *p) return false;
    if (prop.kind() == Kind::kUncompromising) return uncompromising_violated(t, fresh);
    return prop.pairwise() && !prop.holds_on(t, fresh.move());
  }
  if (const auto* p = std::get_if<ProfileWitness>(&w)) {
    if (m.evaluate(p->profile) != p->outcome) return false;
    if (prop.kind() == Kind::kTpar) return !tpar_location(t, p->profile, p->outcome);
    if (prop.kind() == Kind::kUnanimous) {
      const bool diagonal = std::all_of(p->profile.begin(), p->profile.end(),
                                        [&](Vertex v) { return v == p->profile[0]; });
      return diagonal && p->outcome != p->profile[0];
    }
    return false;
  }
  if (const auto* p = std::get_if<PermutationWitness>(&w)) {
    if (prop.kind() != Kind::kAnonymous) return false;
    if (!std::is_permutation(p->profile.begin(), p->profile.end(),
                             p->permuted.begin(), p->permuted.end())) {
      return false;
    }
    return m.evaluate(p->profile) == p->outcome &&
           m.evaluate(p->permuted) == p->permuted_outcome &&
           p->outcome != p->permuted_outcome;
  }
  const auto& u = std::get<UnreachedVertex>(w);
  if (prop.kind() != Kind::kOnto) return false;
  const auto outs = m.outcomes();
  return std::find(outs.begin(), outs.end(), u.vertex) == outs.end();
}

std::string describe(const DiscreteTree& t, const Witness& w) {
  std::ostringstream out;
  if (const auto* p = std::get_if<DeviationPair>(&w)) {
    out << "profile=" << labelled(t, p->profile) << " agent=" << p->agent + 1
        << " report=" << t.label(p->report) << " outcome=" << t.label(p->outcome)
        << " deviated_outcome=" << t.label(p->deviated_outcome);
  } else if (const auto* p = std::get_if<ProfileWitness>(&w)) {
    out << "profile=" << labelled(t, p->profile)
        << " outcome=" << t.label(p->outcome);
  } else if (const auto* p = std::get_if<PermutationWitness>(&w)) {
    out << "profile=" << labelled(t, p->profile) << " outcome=" << t.label(p->outcome)
        << " permuted=" << labelled(t, p->permuted)
        << " permuted_outcome=" << t.label(p->permuted_outcome);
  } else {
    out << "unreached=" << t.label(std::get<UnreachedVertex>(w).vertex);
  }
  return out.str();
}

std::string render(const DiscreteTree& t, std::span<const PropertyReport> reports) {
  std::ostringstream out;
  for (const auto& r : reports) {
    out << r.property << ": " << to_string(r.verdict);
    if (r.witness) out << " at " << describe(t, *r.witness);
    out << " (" << r.pairs_checked << " pairs, " << r.profiles_checked << " profiles)\n";
  }
  out << "\n";
  for (const auto& r : reports) {
    const std::string key = "property." + r.property;
    out << key << "=" << to_string(r.verdict) << "\n";
    out << key << ".pairs_checked=" << r.pairs_checked << "\n";
    out << key << ".profiles_checked=" << r.profiles_checked << "\n";
    out << key << ".violations=" << r.violations << "\n";
    out << key << ".witness=" << (r.witness ? describe(t, *r.witness) : "none") << "\n";
  }
  return out.str();
}

}  // namespace sptree
