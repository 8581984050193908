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

// sptree: command-line front end.
//
//   sptree check       --mech <builtin:...|table file> [--tree f] --props sp,tc
//   sptree verify      --claim <name> [--tree f] --agents n [--mode m]
//   sptree synthesize  --tree f --agents n [--out-dir d]
//   sptree mine        --mech ... --prop p [--strategy scan|random --seed s]
//   sptree export-dot  --tree f [--witness w]
//
// Exit codes: 0 holds/confirmed, 1 violated/refuted, 2 usage or input
// error, 3 budget exhausted without a verdict.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sptree/axioms.h"
#include "sptree/dot.h"
#include "sptree/error.h"
#include "sptree/line.h"
#include "sptree/mechanism.h"
#include "sptree/preferences.h"
#include "sptree/search.h"

namespace fs = std::filesystem;
using namespace sptree;

namespace {

constexpr int kExitUsage = 2;

struct Common {
  std::string tree_path;
  int agents = 2;
  int workers = 1;
  std::string report_path;
};

struct Usage : Error {
  using Error::Error;
};

TreePtr load_tree(const std::string& path) {
  if (path.empty()) throw Usage("--tree is required");
  return std::make_shared<const DiscreteTree>(read_tree_file(path));
}

void emit(const std::string& text, const std::string& path) {
  std::cout << text;
  if (path.empty()) return;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

MechanismPtr load_mechanism(const std::string& spec, const Common& c) {
  if (spec.empty()) throw Usage("--mech is required");
  if (spec.rfind("builtin:", 0) == 0) {
    TreePtr tree = c.tree_path.empty() ? nullptr : load_tree(c.tree_path);
    return make_builtin(spec, tree, c.agents);
  }
  return table_mechanism(read_table_file(spec).table);
}

std::vector<PropertyId> parse_props(const std::vector<std::string>& raw) {
  std::vector<PropertyId> out;
  for (const auto& item : raw) {
    std::size_t pos = 0;
    while (pos <= item.size()) {
      const auto cut = item.find(',', pos);
      const std::string name = item.substr(pos, cut - pos);
      if (!name.empty()) out.push_back(PropertyId::parse(name));
      if (cut == std::string::npos) break;
      pos = cut + 1;
    }
  }
  if (out.empty()) throw Usage("no properties requested");
  return out;
}

// For a g.m.v.s., compares the outcome over all coalitions with the one
// that leaves the grand coalition out of the maximum.
std::string gmvs_readings(const Mechanism& m) {
  const auto* g = dynamic_cast<const GmvsMechanism*>(&m);
  if (!g) return {};
  const DiscreteTree& t = m.tree();
  const ProfileCodec codec(t.vertex_count(), m.agents());
  std::uint64_t differ = 0;
  std::string first;
  for (std::uint64_t code = 0; code < codec.size(); ++code) {
    const Profile a = codec.decode(code);
    const int all = g->offset(a), proper = g->offset_proper_subsets(a);
    if (all == proper) continue;
    if (differ++ == 0) {
      std::string labels;
      for (Vertex v : a) labels += (labels.empty() ? "" : ",") + std::to_string(t.label(v));
      first = "gmvs.first_difference=profile=(" + labels + ") all_subsets_offset=" +
              std::to_string(all) + " proper_subsets_offset=" + std::to_string(proper) + "\n";
    }
  }
  return "gmvs.readings_differ=" + std::to_string(differ) + "\n" + first;
}

int run_check(const Common& c, const std::string& mech_spec,
              const std::vector<std::string>& props, const std::string& prefs_path,
              bool full_counts, const std::string& witness_path, bool verbose) {
  const auto mech = load_mechanism(mech_spec, c);
  const MechanismTable table = tabulate(*mech);
  std::vector<PropertyReport> reports;
  CheckOptions opts{full_counts, c.workers};
  if (!props.empty() || prefs_path.empty()) {
    for (const auto& p : parse_props(props)) {
      reports.push_back(check_property(table, p, opts));
    }
  }
  std::string extra;
  if (!prefs_path.empty()) {
    const auto prefs = read_preferences_file(prefs_path, table.tree());
    auto res = check_sp_under_preferences(table, prefs);
    reports.push_back(res.report);
    for (const auto& m : res.manipulations) {
      extra += "manipulation=" + describe(table.tree(), Witness{m}) + "\n";
    }
  }
  if (verbose) extra += gmvs_readings(*mech);
  emit(render(table.tree(), reports) + extra, c.report_path);
  bool violated = false;
  std::optional<Witness> first;
  for (const auto& r : reports) {
    if (!r.holds()) {
      violated = true;
      if (!first) first = r.witness;
    }
  }
  if (!witness_path.empty()) {
    std::ofstream out(witness_path, std::ios::binary);
    if (!out) throw Error("cannot write " + witness_path);
    out << format_witness(table.tree(), first);
  }
  return violated ? 1 : 0;
}

struct VerifyArgs {
  std::string claim;
  std::string mode = "exhaustive";
  std::optional<std::uint64_t> seed;
  std::uint64_t samples = 0;
  std::uint64_t budget = 100'000'000;
  std::string cursor;
  std::uint64_t max_nodes = 0;
  int spread = 3;
  std::optional<std::int64_t> deviation;
};

int run_verify(const Common& c, const VerifyArgs& v) {
  EquivalenceReport report;
  if (v.claim == "line-theorem") {
    LineTheoremOptions lo;
    lo.budget = v.budget;
    lo.workers = c.workers;
    report = verify_line_theorem(c.agents, v.spread, v.deviation.value_or(2 * v.spread), lo);
  } else {
    const TreePtr tree = load_tree(c.tree_path);
    VerifyOptions o;
    o.mode = parse_search_mode(v.mode);
    o.seed = v.seed;
    o.samples = v.samples;
    o.budget = v.budget;
    o.workers = c.workers;
    o.limits.max_nodes = v.max_nodes;
    if (o.mode == SearchMode::kSampled && !v.seed) {
      throw Usage("--seed is required with --mode sampled");
    }
    if (!v.cursor.empty()) {
      std::string blob = v.cursor;
      if (fs::is_regular_file(blob)) {
        std::ifstream in(blob);
        std::getline(in, blob);
      }
      o.start = decode_cursor(SearchSpace(tree, c.agents), blob);
    }
    if (v.claim == "pairwise-lemma") {
      report = verify_pairwise_lemma(tree, c.agents, o);
    } else if (v.claim == "main-theorem") {
      report = verify_main_theorem(tree, c.agents, o);
    } else if (v.claim == "tpar-necessity") {
      report = verify_tpar_necessity(tree, c.agents, o);
    } else {
      throw Usage("unknown claim '" + v.claim + "'");
    }
  }
  emit(render(report), c.report_path);
  return exit_code(report.verdict);
}

int run_synthesize(const Common& c, const SynthesisLimits& limits,
                   const std::string& out_dir) {
  const TreePtr tree = load_tree(c.tree_path);
  const auto res = synthesize_sp_onto(tree, c.agents, limits, c.workers);
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    const std::string tree_ref =
        fs::relative(fs::absolute(c.tree_path), fs::absolute(out_dir)).generic_string();
    for (std::size_t k = 0; k < res.tables.size(); ++k) {
      char name[32];
      std::snprintf(name, sizeof name, "table-%06zu.txt", k + 1);
      write_table_file((fs::path(out_dir) / name).string(),
                       MechanismTable(tree, c.agents, res.tables[k]), tree_ref);
    }
  }
  std::string text;
  text += "synthesized=" + std::to_string(res.stats.emitted) + "\n";
  text += "complete=" + std::string(res.stats.complete ? "true" : "false") + "\n";
  text += "nodes=" + std::to_string(res.stats.nodes) + "\n";
  text += "pair_prunes=" + std::to_string(res.stats.pair_prunes) + "\n";
  text += "onto_prunes=" + std::to_string(res.stats.onto_prunes) + "\n";
  emit(text, c.report_path);
  return res.stats.complete ? 0 : 3;
}

int run_mine(const Common& c, const std::string& mech_spec, const std::string& prop,
             const std::string& strategy, std::optional<std::uint64_t> seed,
             std::uint64_t tries, const std::string& witness_path) {
  const auto mech = load_mechanism(mech_spec, c);
  const MechanismTable table = tabulate(*mech);
  MineStrategy s;
  if (strategy == "random") {
    if (!seed) throw Usage("--seed is required with --strategy random");
    s.kind = MineStrategy::Kind::kRandom;
    s.seed = *seed;
    s.tries = tries;
  } else if (strategy != "scan") {
    throw Usage("unknown strategy '" + strategy + "'");
  }
  const auto res = mine_violation(table, PropertyId::parse(prop), s);
  std::string text = format_witness(table.tree(), res.witness);
  text += "tried=" + std::to_string(res.tried) + "\n";
  text += "exhaustive=" + std::string(res.exhaustive ? "true" : "false") + "\n";
  emit(text, c.report_path);
  if (!witness_path.empty()) {
    std::ofstream out(witness_path, std::ios::binary);
    if (!out) throw Error("cannot write " + witness_path);
    out << format_witness(table.tree(), res.witness);
  }
  if (res.witness) return 1;
  return res.exhaustive ? 0 : 3;
}

int run_export_dot(const Common& c, const std::string& witness_path) {
  const TreePtr tree = load_tree(c.tree_path);
  std::optional<Witness> w;
  if (!witness_path.empty()) w = read_witness_file(witness_path, *tree);
  emit(export_dot(*tree, w), c.report_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Strategyproof facility location on discrete trees"};
  app.require_subcommand(1);
  Common common;

  auto add_common = [&](CLI::App* sub, bool agents) {
    sub->add_option("--tree", common.tree_path, "Tree edge-list file");
    if (agents) sub->add_option("--agents", common.agents, "Number of agents")->check(CLI::Range(1, 16));
    sub->add_option("--workers", common.workers, "Worker threads")
        ->envname("SPTREE_WORKERS")
        ->check(CLI::Range(1, 1024));
    sub->add_option("--report,--out", common.report_path, "Also write the report here");
  };

  auto* check = app.add_subcommand("check", "Check properties of one mechanism");
  add_common(check, true);
  std::string mech;
  std::vector<std::string> props;
  std::string prefs_path, witness_out;
  bool full_counts = false;
  check->add_option("--mech", mech, "builtin:<name>[:params] or a table file")->required();
  check->add_option("--props,--prop", props, "Comma-separated properties")->delimiter(',');
  check->add_option("--prefs", prefs_path, "Preference profile file");
  check->add_flag("--full-counts", full_counts, "Scan everything instead of stopping at a witness");
  check->add_option("--witness", witness_out, "Write the first witness here");
  bool verbose = false;
  check->add_flag("--verbose", verbose,
                  "For gmvs, also compare against the proper-subset reading");

  auto* verify = app.add_subcommand("verify", "Verify a claim over mechanism space");
  add_common(verify, true);
  VerifyArgs va;
  verify->add_option("--claim", va.claim, "pairwise-lemma | main-theorem | tpar-necessity | line-theorem")
      ->required();
  verify->add_option("--mode", va.mode, "exhaustive | sampled | synthesized");
  verify->add_option("--seed", va.seed, "Seed for sampled work");
  verify->add_option("--samples", va.samples, "Random tables to draw");
  verify->add_option("--budget", va.budget, "Most mechanisms to examine in one run");
  verify->add_option("--cursor", va.cursor, "Resume from a cursor (blob or file)");
  verify->add_option("--max-nodes", va.max_nodes, "Synthesis node limit");
  verify->add_option("--spread", va.spread, "Line window W")->check(CLI::Range(0, 16));
  verify->add_option("--deviation", va.deviation, "Line deviation window D (default 2W)");

  auto* synth = app.add_subcommand("synthesize", "Synthesize every SP and onto table");
  add_common(synth, true);
  SynthesisLimits limits;
  std::string out_dir;
  synth->add_option("--max-nodes", limits.max_nodes, "Node expansion limit");
  synth->add_option("--max-tables", limits.max_tables, "Stop after this many tables");
  synth->add_option("--out-dir", out_dir, "Write each table file here");

  auto* mine = app.add_subcommand("mine", "Search one mechanism for a violation");
  add_common(mine, true);
  std::string mine_prop, strategy = "scan", mine_witness;
  std::optional<std::uint64_t> mine_seed;
  std::uint64_t tries = 100000;
  mine->add_option("--mech", mech, "builtin:<name>[:params] or a table file")->required();
  mine->add_option("--prop", mine_prop, "Property")->required();
  mine->add_option("--strategy", strategy, "scan | random");
  mine->add_option("--seed", mine_seed, "Seed for random mining");
  mine->add_option("--tries", tries, "Random draws");
  mine->add_option("--witness", mine_witness, "Write the witness file here");

  auto* dot = app.add_subcommand("export-dot", "Draw a tree, optionally with a witness");
  add_common(dot, false);
  std::string dot_witness;
  dot->add_option("--witness", dot_witness, "Witness file to overlay");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*check) return run_check(common, mech, props, prefs_path, full_counts, witness_out,
                                  verbose);
    if (*verify) return run_verify(common, va);
    if (*synth) return run_synthesize(common, limits, out_dir);
    if (*mine) return run_mine(common, mech, mine_prop, strategy, mine_seed, tries, mine_witness);
    if (*dot) return run_export_dot(common, dot_witness);
  } catch (const std::exception& e) {
    std::cerr << "sptree: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
