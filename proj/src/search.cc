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

#include "sptree/search.h"

#include <algorithm>
#include <atomic>
#include <map>
#include <sstream>

#include "parallel.h"
#include "sptree/error.h"
#include "sptree/rng.h"
#include "text.h"

namespace sptree {

namespace {

std::string filter_name(const SearchFilter& f) {
  if (f.onto && f.unanimous) return "onto+unanimous";
  if (f.onto) return "onto";
  if (f.unanimous) return "unanimous";
  return "none";
}

std::string domain_of(const DiscreteTree& t, int agents) {
  std::string edges;
  for (const auto& [u, v] : t.edges()) {
    if (!edges.empty()) edges += ',';
    edges += std::to_string(t.label(u)) + "-" + std::to_string(t.label(v));
  }
  return "vertices=" + std::to_string(t.vertex_count()) +
         " agents=" + std::to_string(agents) + " edges=" + edges;
}

// Everything the per-table checks need, precomputed once per run.
class Context {
 public:
  Context(const DiscreteTree& t, int agents)
      : t_(t),
        codec_(t.vertex_count(), agents),
        classifier_(t),
        vertices_(t.vertex_count()),
        agents_(agents) {
    const std::uint64_t s = codec_.size();
    profiles_.resize(s * agents);
    for (std::uint64_t code = 0; code < s; ++code) {
      codec_.decode(code, std::span<Vertex>(profiles_.data() + code * agents, agents));
    }
    if (vertices_ <= 64) {
      tpar_masks_.resize(s);
      for (std::uint64_t code = 0; code < s; ++code) {
        std::uint64_t mask = 0;
        for (Vertex x = 0; x < vertices_; ++x) {
          if (tpar_location(t_, profile(code), x)) mask |= std::uint64_t{1} << x;
        }
        tpar_masks_[code] = mask;
      }
    }
  }

  const DiscreteTree& tree() const { return t_; }
  const ProfileCodec& codec() const { return codec_; }
  const PairClassifier& classifier() const { return classifier_; }
  int vertices() const { return vertices_; }
  int agents() const { return agents_; }
  std::uint64_t slots() const { return codec_.size(); }

  std::span<const Vertex> profile(std::uint64_t code) const {
    return {profiles_.data() + code * agents_, static_cast<std::size_t>(agents_)};
  }

  bool tpar_ok(std::uint64_t code, Vertex x) const {
    if (!tpar_masks_.empty()) return (tpar_masks_[code] >> x) & 1;
    return tpar_location(t_, profile(code), x);
  }

  // Calls fn(code, agent, report, bits) for every nontrivial pair in scan
  // order until fn returns false.
  template <class Fn>
  void for_each_pair(std::span<const Vertex> out, Fn&& fn) const {
    for (std::uint64_t code = 0; code < slots(); ++code) {
      const auto a = profile(code);
      const Vertex x = out[code];
      for (int i = 0; i < agents_; ++i) {
        for (Vertex r = 0; r < vertices_; ++r) {
          if (r == a[i]) continue;
          const Vertex x2 = out[codec_.replace(code, i, r)];
          if (!fn(code, i, r, classifier_.bits(Move{a[i], r, x, x2}))) return;
        }
      }
    }
  }

  DeviationPair pair(std::span<const Vertex> out, std::uint64_t code, int agent,
                     Vertex report) const {
    const auto a = profile(code);
    return DeviationPair{Profile(a.begin(), a.end()), agent, report, out[code],
                         out[codec_.replace(code, agent, report)]};
  }

 private:
  const DiscreteTree& t_;
  ProfileCodec codec_;
  PairClassifier classifier_;
  int vertices_;
  int agents_;
  std::vector<Vertex> profiles_;
  std::vector<std::uint64_t> tpar_masks_;
};

using Fields = std::vector<std::pair<std::string, std::string>>;

std::string table_text(const DiscreteTree& t, std::span<const Vertex> out) {
  std::string s;
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (k) s += ' ';
    s += std::to_string(t.label(out[k]));
  }
  return s;
}

// Splits describe() output ("k=v k=v ...") into fields. Profiles contain no
// spaces, so a plain split is exact.
void append_witness(Fields& f, const DiscreteTree& t, const Witness& w) {
  const std::string text = describe(t, w);
  for (auto token : internal::tokens(text)) {
    const auto eq = token.find('=');
    f.emplace_back(std::string(token.substr(0, eq)),
                   std::string(token.substr(eq + 1)));
  }
}

std::string bit_text(std::uint8_t bits, std::uint8_t bit) {
  return (bits & bit) ? "true" : "false";
}

struct Accumulator {
  std::vector<std::uint64_t> tallies;
  std::optional<std::pair<std::uint64_t, Fields>> first;  // (order key, witness)

  void found(std::uint64_t key, Fields f) {
    if (!first || key < first->first) first = {key, std::move(f)};
  }
  void merge(Accumulator&& other) {
    if (tallies.size() < other.tallies.size()) tallies.resize(other.tallies.size());
    for (std::size_t k = 0; k < other.tallies.size(); ++k) tallies[k] += other.tallies[k];
    if (other.first) found(other.first->first, std::move(other.first->second));
  }
};

// One claim: tally names plus the per-table examination. The last tally is
// always the discrepancy count.
struct Claim {
  std::string name;
  std::vector<std::string> tally_names;
  std::function<void(const Context&, std::span<const Vertex>, bool onto,
                     std::uint64_t key, Accumulator&)>
      examine;
};

Fields mechanism_fields(const Context& ctx, std::span<const Vertex> out) {
  BigInt id = 0;
  for (Vertex v : out) id = id * ctx.vertices() + v;
  return {{"mechanism", id.str()}, {"table", table_text(ctx.tree(), out)}};
}

Claim pairwise_lemma_claim() {
  Claim c;
  c.name = "pairwise-lemma";
  c.tally_names = {"pairs", "sp_pairs", "tmon_db_pairs", "sp_mechanisms",
                   "discrepancies"};
  c.examine = [](const Context& ctx, std::span<const Vertex> out, bool,
                 std::uint64_t key, Accumulator& acc) {
    std::uint64_t pairs = 0, sp = 0, tmon_db = 0, bad = 0;
    std::optional<DeviationPair> witness;
    std::uint8_t witness_bits = 0;
    ctx.for_each_pair(out, [&](std::uint64_t code, int i, Vertex r, std::uint8_t b) {
      ++pairs;
      const bool s = b & kSpBit;
      const bool td = (b & (kTmonBit | kDbBit)) == (kTmonBit | kDbBit);
      sp += s;
      tmon_db += td;
      if (s != td) {
        ++bad;
        if (!witness) {
          witness = ctx.pair(out, code, i, r);
          witness_bits = b;
        }
      }
      return true;
    });
    acc.tallies[0] += pairs;
    acc.tallies[1] += sp;
    acc.tallies[2] += tmon_db;
    acc.tallies[3] += sp == pairs;
    acc.tallies[4] += bad;
    if (witness) {
      Fields f = mechanism_fields(ctx, out);
      append_witness(f, ctx.tree(), *witness);
      f.emplace_back("sp_pair", bit_text(witness_bits, kSpBit));
      f.emplace_back("tmon_pair", bit_text(witness_bits, kTmonBit));
      f.emplace_back("db_pair", bit_text(witness_bits, kDbBit));
      acc.found(key, std::move(f));
    }
  };
  return c;
}

// First pair whose bits miss any of `mask`.
std::optional<DeviationPair> first_failing(const Context& ctx,
                                           std::span<const Vertex> out,
                                           std::uint8_t mask) {
  std::optional<DeviationPair> w;
  ctx.for_each_pair(out, [&](std::uint64_t code, int i, Vertex r, std::uint8_t b) {
    if ((b & mask) == mask) return true;
    w = ctx.pair(out, code, i, r);
    return false;
  });
  return w;
}

constexpr std::uint8_t kTmonAtc = kTmonBit | kAdrBit | kTsi1Bit;
constexpr std::uint8_t kTmonTc = kTmonBit | kTcBit;

Claim main_theorem_claim() {
  Claim c;
  c.name = "main-theorem";
  c.tally_names = {"onto", "onto_sp", "onto_tmon_atc", "onto_tmon_tc",
                   "discrepancies"};
  c.examine = [](const Context& ctx, std::span<const Vertex> out, bool onto,
                 std::uint64_t key, Accumulator& acc) {
    if (!onto) return;
    std::uint8_t all = kAllPairBits;
    ctx.for_each_pair(out, [&](std::uint64_t, int, Vertex, std::uint8_t b) {
      all &= b;
      return (all & (kSpBit | kTmonAtc | kTcBit)) != 0;
    });
    const bool sp = all & kSpBit;
    const bool tmon_atc = (all & kTmonAtc) == kTmonAtc;
    acc.tallies[0] += 1;
    acc.tallies[1] += sp;
    acc.tallies[2] += tmon_atc;
    acc.tallies[3] += (all & kTmonTc) == kTmonTc;
    if (sp != tmon_atc) {
      acc.tallies[4] += 1;
      Fields f = mechanism_fields(ctx, out);
      f.emplace_back("sp", sp ? "holds" : "violated");
      f.emplace_back("tmon_atc", tmon_atc ? "holds" : "violated");
      const auto w = first_failing(ctx, out, sp ? kTmonAtc : std::uint8_t{kSpBit});
      append_witness(f, ctx.tree(), *w);
      acc.found(key, std::move(f));
    }
  };
  return c;
}

Claim tpar_claim() {
  Claim c;
  c.name = "tpar-necessity";
  c.tally_names = {"onto", "onto_sp", "onto_sp_tpar", "discrepancies"};
  c.examine = [](const Context& ctx, std::span<const Vertex> out, bool onto,
                 std::uint64_t key, Accumulator& acc) {
    if (!onto) return;
    acc.tallies[0] += 1;
    if (first_failing(ctx, out, kSpBit)) return;
    acc.tallies[1] += 1;
    for (std::uint64_t code = 0; code < ctx.slots(); ++code) {
      if (!ctx.tpar_ok(code, out[code])) {
        acc.tallies[3] += 1;
        Fields f = mechanism_fields(ctx, out);
        const auto a = ctx.profile(code);
        append_witness(f, ctx.tree(),
                       ProfileWitness{Profile(a.begin(), a.end()), out[code]});
        acc.found(key, std::move(f));
        return;
      }
    }
    acc.tallies[2] += 1;
  };
  return c;
}

bool image_is_onto(std::span<const Vertex> out, int vertices) {
  std::vector<char> hit(vertices, 0);
  int missing = vertices;
  for (Vertex v : out) {
    if (!hit[v]) {
      hit[v] = 1;
      if (--missing == 0) return true;
    }
  }
  return missing == 0;
}

struct RunResult {
  Accumulator acc;
  std::uint64_t examined = 0;
  bool complete = true;
  std::optional<BigInt> next;
};

Accumulator fresh(const Claim& claim) {
  Accumulator a;
  a.tallies.assign(claim.tally_names.size(), 0);
  return a;
}

RunResult run_exhaustive(const Context& ctx, const SearchSpace& space,
                         const Claim& claim, const VerifyOptions& opts) {
  RunResult res;
  res.acc = fresh(claim);
  if (opts.start < 0 || opts.start > space.total()) {
    throw DomainError("start id outside the search space");
  }
  const BigInt remaining = space.total() - opts.start;
  std::uint64_t range = opts.budget;
  if (remaining <= BigInt(opts.budget)) {
    range = static_cast<std::uint64_t>(remaining);
  } else {
    res.complete = false;
    res.next = opts.start + opts.budget;
  }
  res.examined = range;
  const int vertices = ctx.vertices();
  const std::uint64_t chunks = internal::chunk_count(range);
  std::vector<Accumulator> parts(chunks, fresh(claim));
  internal::run_chunks(chunks, opts.workers, [&](std::uint64_t c) {
    const auto [lo, hi] = internal::chunk_range(range, chunks, c);
    if (lo == hi) return;
    std::vector<Vertex> out = space.table_of(opts.start + lo);
    std::vector<std::uint64_t> count(vertices, 0);
    for (Vertex v : out) ++count[v];
    int missing = static_cast<int>(std::count(count.begin(), count.end(), 0u));
    for (std::uint64_t k = lo; k < hi; ++k) {
      claim.examine(ctx, out, missing == 0, k, parts[c]);
      // Odometer step, least significant slot last.
      for (std::size_t j = out.size(); j-- > 0;) {
        if (--count[out[j]] == 0) ++missing;
        if (++out[j] == vertices) {
          out[j] = 0;
          if (count[0]++ == 0) --missing;
          continue;
        }
        if (count[out[j]]++ == 0) --missing;
        break;
      }
    }
  });
  for (auto& p : parts) res.acc.merge(std::move(p));
  return res;
}

RunResult run_sampled(const Context& ctx, const Claim& claim, std::uint64_t seed,
                      std::uint64_t samples, int workers) {
  RunResult res;
  res.acc = fresh(claim);
  res.examined = samples;
  const std::uint64_t chunks = internal::chunk_count(samples);
  std::vector<Accumulator> parts(chunks, fresh(claim));
  internal::run_chunks(chunks, workers, [&](std::uint64_t c) {
    const auto [lo, hi] = internal::chunk_range(samples, chunks, c);
    std::vector<Vertex> out(ctx.slots());
    for (std::uint64_t k = lo; k < hi; ++k) {
      auto rng = SplitMix64::substream(seed, k);
      for (auto& v : out) v = static_cast<Vertex>(rng.below(ctx.vertices()));
      claim.examine(ctx, out, image_is_onto(out, ctx.vertices()), k, parts[c]);
    }
  });
  for (auto& p : parts) res.acc.merge(std::move(p));
  return res;
}

void add_tallies(EquivalenceReport& r, const Claim& claim, const Accumulator& acc,
                 const std::string& prefix) {
  for (std::size_t k = 0; k < claim.tally_names.size(); ++k) {
    r.tallies.emplace_back(prefix + claim.tally_names[k], acc.tallies[k]);
  }
}

EquivalenceReport run_claim(TreePtr tree, int agents, const VerifyOptions& opts,
                            const Claim& claim) {
  if (!tree) throw DomainError("no tree");
  const DiscreteTree& t = *tree;
  if (t.vertex_count() < 2) throw DomainError("search needs at least two vertices");
  EquivalenceReport r;
  r.claim = claim.name;
  r.mode = std::string(to_string(opts.mode));
  r.domain = domain_of(t, agents);
  const Context ctx(t, agents);
  bool complete = true;
  std::optional<std::pair<std::uint64_t, Fields>> witness;

  switch (opts.mode) {
    case SearchMode::kExhaustive: {
      const SearchSpace space(tree, agents);
      auto res = run_exhaustive(ctx, space, claim, opts);
      r.examined = res.examined;
      add_tallies(r, claim, res.acc, "");
      complete = res.complete;
      witness = std::move(res.acc.first);
      if (opts.start != 0) r.details.emplace_back("start", opts.start.str());
      if (res.next) r.details.emplace_back("cursor", encode_cursor(space, *res.next));
      break;
    }
    case SearchMode::kSampled: {
      if (!opts.seed) throw DomainError("sampled mode requires a seed");
      r.seed = opts.seed;
      auto res = run_sampled(ctx, claim, *opts.seed, opts.samples, opts.workers);
      r.examined = res.examined;
      add_tallies(r, claim, res.acc, "");
      witness = std::move(res.acc.first);
      if (witness) {
        witness->second.insert(witness->second.begin(),
                               {"sample", std::to_string(witness->first)});
      }
      break;
    }
    case SearchMode::kSynthesized: {
      const auto synth = synthesize_sp_onto(tree, agents, opts.limits, opts.workers);
      Accumulator acc = fresh(claim);
      for (std::uint64_t k = 0; k < synth.tables.size(); ++k) {
        claim.examine(ctx, synth.tables[k], image_is_onto(synth.tables[k], t.vertex_count()),
                      k, acc);
      }
      r.examined = synth.tables.size();
      add_tallies(r, claim, acc, "");
      r.tallies.emplace_back("synthesis_nodes", synth.stats.nodes);
      r.tallies.emplace_back("synthesis_pair_prunes", synth.stats.pair_prunes);
      r.tallies.emplace_back("synthesis_onto_prunes", synth.stats.onto_prunes);
      complete = synth.stats.complete;
      witness = std::move(acc.first);
      if (opts.samples > 0) {
        if (!opts.seed) throw DomainError("sampling requires a seed");
        r.seed = opts.seed;
        auto res = run_sampled(ctx, claim, *opts.seed, opts.samples, opts.workers);
        r.examined += res.examined;
        r.tallies.emplace_back("sampled", res.examined);
        add_tallies(r, claim, res.acc, "sampled_");
        if (!witness && res.acc.first) {
          witness = std::move(res.acc.first);
          witness->second.insert(witness->second.begin(),
                                 {"sample", std::to_string(witness->first)});
        }
      }
      break;
    }
  }
  if (witness) {
    r.verdict = ClaimVerdict::kRefuted;
    r.witness = std::move(witness->second);
  } else {
    r.verdict = complete ? ClaimVerdict::kConfirmed : ClaimVerdict::kInconclusive;
  }
  return r;
}

// Backtracking synthesiser state shared by all workers.
class Synthesizer {
 public:
  Synthesizer(const Context& ctx, const SynthesisLimits& limits)
      : ctx_(ctx), limits_(limits), vertices_(ctx.vertices()) {
    const int v = vertices_;
    compat_.resize(static_cast<std::size_t>(v) * v * v * v);
    const auto& cls = ctx.classifier();
    constexpr std::uint8_t need = kTmonBit | kDbBit;
    for (Vertex a = 0; a < v; ++a) {
      for (Vertex b = 0; b < v; ++b) {
        for (Vertex x = 0; x < v; ++x) {
          for (Vertex y = 0; y < v; ++y) {
            const Move mv{a, b, x, y};
            compat_[index(a, b, x, y)] =
                (cls.bits(mv) & need) == need && (cls.bits(mv.reversed()) & need) == need;
          }
        }
      }
    }
    // For each slot, the earlier slots one deviation away.
    back_.resize(ctx.slots());
    for (std::uint64_t code = 0; code < ctx.slots(); ++code) {
      const auto a = ctx.profile(code);
      for (int i = 0; i < ctx.agents(); ++i) {
        for (Vertex r = 0; r < a[i]; ++r) {
          back_[code].push_back({ctx.codec().replace(code, i, r), a[i], r});
        }
      }
    }
  }

  struct Partial {
    std::vector<Vertex> out;
    std::vector<int> count;
    int missing = 0;
    std::uint64_t depth = 0;
  };

  Partial root() const {
    Partial p;
    p.out.assign(ctx_.slots(), 0);
    p.count.assign(vertices_, 0);
    p.missing = vertices_;
    return p;
  }

  // Depth-first search from p down to `stop_depth`, handing each reached
  // node (complete table or prefix) to `sink` in lexicographic order.
  template <class Sink>
  void search(Partial& p, std::uint64_t stop_depth, SynthesisStats& stats,
              Sink&& sink) {
    if (halted_.load(std::memory_order_relaxed)) return;
    if (p.depth == stop_depth) {
      sink(p);
      return;
    }
    const std::uint64_t slot = p.depth;
    const std::uint64_t left = ctx_.slots() - slot - 1;
    for (Vertex v = 0; v < vertices_; ++v) {
      if (!count_node(stats)) return;
      bool ok = true;
      for (const auto& b : back_[slot]) {
        if (!compat_[index(b.from, b.to, v, p.out[b.slot])]) {
          ok = false;
          break;
        }
      }
      if (!ok) {
        ++stats.pair_prunes;
        continue;
      }
      const int missing = p.missing - (p.count[v] == 0 ? 1 : 0);
      if (static_cast<std::uint64_t>(missing) > left) {
        ++stats.onto_prunes;
        continue;
      }
      p.out[slot] = v;
      ++p.count[v];
      const int saved = p.missing;
      p.missing = missing;
      ++p.depth;
      search(p, stop_depth, stats, sink);
      --p.depth;
      p.missing = saved;
      --p.count[v];
      p.out[slot] = 0;
    }
  }

  bool emit_allowed(SynthesisStats& stats) {
    if (limits_.max_tables == 0) return true;
    if (emitted_.fetch_add(1) < limits_.max_tables) return true;
    halt(stats);
    return false;
  }

  bool halted() const { return halted_.load(); }

 private:
  struct Back {
    std::uint64_t slot;
    Vertex from;
    Vertex to;
  };

  std::size_t index(Vertex a, Vertex b, Vertex x, Vertex y) const {
    const std::size_t v = vertices_;
    return ((static_cast<std::size_t>(a) * v + b) * v + x) * v + y;
  }

  bool count_node(SynthesisStats& stats) {
    ++stats.nodes;
    if (limits_.max_nodes == 0) return true;
    if (nodes_.fetch_add(1, std::memory_order_relaxed) < limits_.max_nodes) return true;
    halt(stats);
    return false;
  }

  void halt(SynthesisStats& stats) {
    stats.complete = false;
    halted_ = true;
  }

  const Context& ctx_;
  SynthesisLimits limits_;
  int vertices_;
  std::vector<char> compat_;
  std::vector<std::vector<Back>> back_;
  std::atomic<std::uint64_t> nodes_{0};
  std::atomic<std::uint64_t> emitted_{0};
  std::atomic<bool> halted_{false};
};

}  // namespace

SearchSpace::SearchSpace(TreePtr tree, int agents, SearchFilter filter)
    : tree_(std::move(tree)),
      codec_(tree_ ? tree_->vertex_count() : 0, agents),
      filter_(filter) {
  total_ = boost::multiprecision::pow(BigInt(tree_->vertex_count()),
                                      static_cast<unsigned>(codec_.size()));
}

BigInt SearchSpace::id_of(std::span<const Vertex> outcomes) const {
  if (outcomes.size() != slots()) throw DomainError("table has the wrong length");
  BigInt id = 0;
  for (Vertex v : outcomes) {
    tree_->require_valid(v);
    id = id * tree_->vertex_count() + v;
  }
  return id;
}

std::vector<Vertex> SearchSpace::table_of(const BigInt& id) const {
  if (id < 0 || id >= total_) throw DomainError("mechanism id outside the space");
  std::vector<Vertex> out(slots());
  BigInt rest = id;
  const int base = tree_->vertex_count();
  for (std::size_t s = out.size(); s-- > 0;) {
    out[s] = static_cast<Vertex>(static_cast<int>(rest % base));
    rest /= base;
  }
  return out;
}

bool SearchSpace::passes(std::span<const Vertex> outcomes) const {
  const int vertices = tree_->vertex_count();
  if (filter_.unanimous) {
    for (Vertex v = 0; v < vertices; ++v) {
      if (outcomes[codec_.diagonal(v)] != v) return false;
    }
  }
  if (filter_.onto && !filter_.unanimous && !image_is_onto(outcomes, vertices)) {
    return false;
  }
  return true;
}

std::string encode_cursor(const SearchSpace& space, const BigInt& next) {
  return "sptree-cursor/1 vertices=" + std::to_string(space.tree().vertex_count()) +
         " agents=" + std::to_string(space.agents()) +
         " filter=" + filter_name(space.filter()) + " next=" + next.str();
}

BigInt decode_cursor(const SearchSpace& space, std::string_view blob) {
  const auto parts = internal::tokens(blob);
  if (parts.size() != 5 || parts[0] != "sptree-cursor/1") {
    throw DomainError("not a cursor: '" + std::string(blob) + "'");
  }
  std::map<std::string, std::string, std::less<>> kv;
  for (std::size_t k = 1; k < parts.size(); ++k) {
    const auto eq = parts[k].find('=');
    if (eq == std::string_view::npos) throw DomainError("malformed cursor field");
    kv[std::string(parts[k].substr(0, eq))] = std::string(parts[k].substr(eq + 1));
  }
  if (kv["vertices"] != std::to_string(space.tree().vertex_count()) ||
      kv["agents"] != std::to_string(space.agents()) ||
      kv["filter"] != filter_name(space.filter())) {
    throw DomainError("cursor belongs to a different search space");
  }
  const std::string& next = kv["next"];
  if (next.empty() || !std::all_of(next.begin(), next.end(), ::isdigit)) {
    throw DomainError("malformed cursor position");
  }
  BigInt id(next);
  if (id > space.total()) throw DomainError("cursor position outside the space");
  return id;
}

EnumerationResult enumerate_mechanisms(
    const SearchSpace& space, const BigInt& start, std::uint64_t budget,
    const std::function<bool(const MechanismTable&)>& visit) {
  EnumerationResult res;
  if (start < 0 || start > space.total()) {
    throw DomainError("start id outside the search space");
  }
  res.next = start;
  if (start == space.total()) {
    res.complete = true;
    return res;
  }
  std::vector<Vertex> out = space.table_of(start);
  const int vertices = space.tree().vertex_count();
  while (res.visited < budget) {
    ++res.visited;
    res.next += 1;
    if (space.passes(out)) {
      ++res.emitted;
      if (!visit(MechanismTable(space.tree_ptr(), space.agents(), out))) break;
    }
    std::size_t j = out.size();
    while (j-- > 0) {
      if (++out[j] < vertices) break;
      out[j] = 0;
    }
    if (j == static_cast<std::size_t>(-1)) break;  // wrapped past the last id
  }
  res.complete = res.next == space.total();
  return res;
}

std::string_view to_string(SearchMode mode) {
  switch (mode) {
    case SearchMode::kExhaustive: return "exhaustive";
    case SearchMode::kSampled: return "sampled";
    case SearchMode::kSynthesized: return "synthesized";
  }
  return "?";
}

SearchMode parse_search_mode(std::string_view text) {
  if (text == "exhaustive") return SearchMode::kExhaustive;
  if (text == "sampled") return SearchMode::kSampled;
  if (text == "synthesized") return SearchMode::kSynthesized;
  throw DomainError("unknown mode '" + std::string(text) + "'");
}

std::string_view to_string(ClaimVerdict v) {
  switch (v) {
    case ClaimVerdict::kConfirmed: return "confirmed";
    case ClaimVerdict::kRefuted: return "refuted";
    case ClaimVerdict::kInconclusive: return "inconclusive";
  }
  return "?";
}

int exit_code(ClaimVerdict v) {
  switch (v) {
    case ClaimVerdict::kConfirmed: return 0;
    case ClaimVerdict::kRefuted: return 1;
    case ClaimVerdict::kInconclusive: return 3;
  }
  return 2;
}

std::uint64_t EquivalenceReport::tally(std::string_view key) const {
  for (const auto& [k, v] : tallies) {
    if (k == key) return v;
  }
  throw DomainError("no tally named " + std::string(key));
}

std::optional<std::string> EquivalenceReport::detail(std::string_view key) const {
  for (const auto& [k, v] : details) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::string render(const EquivalenceReport& r) {
  std::ostringstream out;
  const std::string seed = r.seed ? std::to_string(*r.seed) : "none";
  out << "claim " << r.claim << ": " << to_string(r.verdict) << "\n";
  out << "  mode " << r.mode << ", seed " << seed << ", " << r.examined
      << " mechanisms examined\n";
  out << "  domain " << r.domain << "\n";
  for (const auto& [k, v] : r.tallies) out << "  " << k << ": " << v << "\n";
  for (const auto& [k, v] : r.details) out << "  " << k << ": " << v << "\n";
  if (r.witness.empty()) {
    out << "  no discrepancy\n";
  } else {
    out << "  first discrepancy:";
    for (const auto& [k, v] : r.witness) out << " " << k << "=" << v;
    out << "\n";
  }
  out << "\n";
  out << "claim=" << r.claim << "\n";
  out << "mode=" << r.mode << "\n";
  out << "seed=" << seed << "\n";
  out << "domain=" << r.domain << "\n";
  out << "examined=" << r.examined << "\n";
  for (const auto& [k, v] : r.tallies) out << "tally." << k << "=" << v << "\n";
  for (const auto& [k, v] : r.details) out << "detail." << k << "=" << v << "\n";
  out << "verdict=" << to_string(r.verdict) << "\n";
  if (r.witness.empty()) {
    out << "witness=none\n";
  } else {
    for (const auto& [k, v] : r.witness) out << "witness." << k << "=" << v << "\n";
  }
  return out.str();
}

EquivalenceReport verify_pairwise_lemma(TreePtr tree, int agents,
                                        const VerifyOptions& opts) {
  return run_claim(std::move(tree), agents, opts, pairwise_lemma_claim());
}

EquivalenceReport verify_main_theorem(TreePtr tree, int agents,
                                      const VerifyOptions& opts) {
  return run_claim(std::move(tree), agents, opts, main_theorem_claim());
}

EquivalenceReport verify_tpar_necessity(TreePtr tree, int agents,
                                        const VerifyOptions& opts) {
  return run_claim(std::move(tree), agents, opts, tpar_claim());
}

SynthesisResult synthesize_sp_onto(TreePtr tree, int agents,
                                   const SynthesisLimits& limits, int workers) {
  if (!tree) throw DomainError("no tree");
  const Context ctx(*tree, agents);
  Synthesizer synth(ctx, limits);
  SynthesisResult result;

  // Split the search at a fixed prefix depth; each prefix subtree is
  // explored independently and results are concatenated in prefix order.
  std::uint64_t depth = 0;
  for (std::uint64_t width = 1; depth < ctx.slots() && width < 256; ++depth) {
    width *= ctx.vertices();
  }
  std::vector<Synthesizer::Partial> prefixes;
  {
    auto p = synth.root();
    synth.search(p, depth, result.stats, [&](const Synthesizer::Partial& q) {
      prefixes.push_back(q);
    });
  }
  std::vector<std::vector<std::vector<Vertex>>> found(prefixes.size());
  std::vector<SynthesisStats> stats(prefixes.size());
  internal::run_chunks(prefixes.size(), workers, [&](std::uint64_t k) {
    synth.search(prefixes[k], ctx.slots(), stats[k], [&](const Synthesizer::Partial& q) {
      if (q.missing == 0 && synth.emit_allowed(stats[k])) found[k].push_back(q.out);
    });
  });
  for (std::size_t k = 0; k < prefixes.size(); ++k) {
    result.stats.nodes += stats[k].nodes;
    result.stats.pair_prunes += stats[k].pair_prunes;
    result.stats.onto_prunes += stats[k].onto_prunes;
    result.stats.complete = result.stats.complete && stats[k].complete;
    for (auto& t : found[k]) result.tables.push_back(std::move(t));
  }
  if (synth.halted()) result.stats.complete = false;
  if (limits.max_tables && result.tables.size() > limits.max_tables) {
    result.tables.resize(limits.max_tables);
  }
  result.stats.emitted = result.tables.size();
  return result;
}

MineResult mine_violation(const MechanismTable& m, const PropertyId& prop,
                          const MineStrategy& strategy) {
  MineResult res;
  if (strategy.kind == MineStrategy::Kind::kScan) {
    const auto report = check_property(m, prop);
    res.witness = report.witness;
    res.exhaustive = true;
    res.tried = prop.pairwise() ? report.pairs_checked : report.profiles_checked;
    return res;
  }
  using Kind = PropertyId::Kind;
  if (!prop.pairwise() && prop.kind() != Kind::kTpar) {
    throw DomainError("random mining supports pairwise properties and tpar only");
  }
  const DiscreteTree& t = m.tree();
  const int vertices = t.vertex_count();
  const int n = m.agents();
  if (prop.pairwise() && vertices < 2) return res;
  Profile a(n);
  for (std::uint64_t k = 0; k < strategy.tries; ++k) {
    ++res.tried;
    auto rng = SplitMix64::substream(strategy.seed, k);
    for (auto& v : a) v = static_cast<Vertex>(rng.below(vertices));
    if (prop.kind() == Kind::kTpar) {
      const Vertex x = m.evaluate(a);
      if (!tpar_location(t, a, x)) {
        res.witness = ProfileWitness{a, x};
        return res;
      }
      continue;
    }
    const int i = static_cast<int>(rng.below(n));
    auto r = static_cast<Vertex>(rng.below(vertices - 1));
    if (r >= a[i]) ++r;
    const DeviationPair p = make_deviation(m, a, i, r);
    if (!prop.holds_on(t, p.move())) {
      res.witness = p;
      return res;
    }
  }
  return res;
}

}  // namespace sptree
