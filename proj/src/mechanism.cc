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

#include "sptree/mechanism.h"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "sptree/error.h"
#include "text.h"

namespace sptree {

namespace {

class TableBacked final : public Mechanism {
 public:
  explicit TableBacked(MechanismTable table)
      : Mechanism(table.tree_ptr(), table.agents()), table_(std::move(table)) {}

  MechanismKind kind() const override { return MechanismKind::kTable; }
  std::string describe() const override {
    return "table:" + std::to_string(table_.size()) + "-entries";
  }

 private:
  Vertex do_evaluate(std::span<const Vertex> profile) const override {
    return table_.evaluate(profile);
  }

  MechanismTable table_;
};

class Fig1 final : public Mechanism {
 public:
  Fig1() : Mechanism(fig1_tree(), 2) {}

  MechanismKind kind() const override { return MechanismKind::kFig1; }
  std::string describe() const override { return "fig1"; }

 private:
  Vertex do_evaluate(std::span<const Vertex> a) const override {
    const Vertex y = a[0];
    const Vertex x = a[1];
    if (y == 0) return x % 2;
    if (y == 2) return std::min(x, 3);
    return std::min(x, y);
  }
};

class Dictator final : public Mechanism {
 public:
  Dictator(TreePtr tree, int agents, int agent)
      : Mechanism(std::move(tree), agents), agent_(agent) {}

  MechanismKind kind() const override { return MechanismKind::kDictator; }
  std::string describe() const override {
    return "dictator:" + std::to_string(agent_);
  }

 private:
  Vertex do_evaluate(std::span<const Vertex> a) const override {
    return a[agent_ - 1];
  }

  int agent_;
};

class Constant final : public Mechanism {
 public:
  Constant(TreePtr tree, int agents, Vertex where)
      : Mechanism(std::move(tree), agents), where_(where) {}

  MechanismKind kind() const override { return MechanismKind::kConstant; }
  std::string describe() const override {
    return "constant:" + std::to_string(tree().label(where_));
  }

 private:
  Vertex do_evaluate(std::span<const Vertex>) const override { return where_; }

  Vertex where_;
};

class Median final : public Mechanism {
 public:
  Median(TreePtr tree, int agents, std::vector<Vertex> phantoms)
      : Mechanism(std::move(tree), agents), phantoms_(std::move(phantoms)) {}

  MechanismKind kind() const override { return MechanismKind::kMedian; }
  std::string describe() const override {
    std::string out = "median:phantoms=";
    for (std::size_t k = 0; k < phantoms_.size(); ++k) {
      if (k) out += ',';
      out += std::to_string(tree().label(phantoms_[k]));
    }
    return out;
  }

 private:
  // Plain argmin over all vertices; the odd ballot count makes it unique.
  Vertex do_evaluate(std::span<const Vertex> a) const override {
    const DiscreteTree& t = tree();
    Vertex best = 0;
    long best_cost = std::numeric_limits<long>::max();
    for (Vertex v = 0; v < t.vertex_count(); ++v) {
      long cost = 0;
      for (Vertex p : a) cost += t.dist(v, p);
      for (Vertex p : phantoms_) cost += t.dist(v, p);
      if (cost < best_cost) {
        best_cost = cost;
        best = v;
      }
    }
    return best;
  }

  std::vector<Vertex> phantoms_;
};

class OrderStatistic final : public Mechanism {
 public:
  OrderStatistic(TreePtr tree, int agents, int k)
      : Mechanism(std::move(tree), agents), k_(k) {
    origin_ = this->tree().path_endpoints().first;
  }

  MechanismKind kind() const override { return MechanismKind::kOrderStatistic; }
  std::string describe() const override {
    return "order-statistic:" + std::to_string(k_);
  }

 private:
  Vertex do_evaluate(std::span<const Vertex> a) const override {
    std::vector<Vertex> sorted(a.begin(), a.end());
    const DiscreteTree& t = tree();
    std::nth_element(sorted.begin(), sorted.begin() + (k_ - 1), sorted.end(),
                     [&](Vertex u, Vertex v) {
                       return t.dist(origin_, u) < t.dist(origin_, v);
                     });
    return sorted[k_ - 1];
  }

  int k_;
  Vertex origin_ = 0;
};

using internal::split;
using internal::trim;

std::int64_t parse_int(std::string_view token, std::string_view what) {
  token = trim(token);
  std::int64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() || token.empty()) {
    throw DomainError("bad " + std::string(what) + " '" + std::string(token) +
                      "'");
  }
  return value;
}

Vertex vertex_by_label(const DiscreteTree& t, std::int64_t label) {
  const auto v = t.vertex_of_label(label);
  if (!v) throw DomainError("no vertex labelled " + std::to_string(label));
  return *v;
}

std::vector<Vertex> parse_vertex_list(const DiscreteTree& t,
                                      std::string_view text) {
  std::vector<Vertex> out;
  if (trim(text).empty()) return out;
  for (auto token : split(text, ',')) {
    out.push_back(vertex_by_label(t, parse_int(token, "vertex label")));
  }
  return out;
}

}  // namespace

std::string_view to_string(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::kTable: return "table";
    case MechanismKind::kFig1: return "fig1";
    case MechanismKind::kMedian: return "median";
    case MechanismKind::kDictator: return "dictator";
    case MechanismKind::kGmvs: return "gmvs";
    case MechanismKind::kOrderStatistic: return "order-statistic";
    case MechanismKind::kConstant: return "constant";
  }
  return "unknown";
}

Mechanism::Mechanism(TreePtr tree, int agents)
    : tree_(std::move(tree)), agents_(agents) {
  if (!tree_) throw DomainError("mechanism needs a tree");
  if (agents_ < 1) throw DomainError("mechanism needs at least one agent");
}

Vertex Mechanism::evaluate(std::span<const Vertex> profile) const {
  if (static_cast<int>(profile.size()) != agents_) {
    throw DomainError("profile has " + std::to_string(profile.size()) +
                      " entries, mechanism expects " + std::to_string(agents_));
  }
  require_profile(*tree_, profile);
  return do_evaluate(profile);
}

MechanismTable::MechanismTable(TreePtr tree, int agents,
                               std::vector<Vertex> outcomes)
    : tree_(std::move(tree)),
      codec_(tree_ ? tree_->vertex_count() : 0, agents),
      outcomes_(std::move(outcomes)) {
  if (outcomes_.size() != codec_.size()) {
    throw DomainError("table has " + std::to_string(outcomes_.size()) +
                      " entries, expected " + std::to_string(codec_.size()));
  }
  for (std::uint64_t code = 0; code < outcomes_.size(); ++code) {
    if (!tree_->valid(outcomes_[code])) {
      throw DomainError("outcome " + std::to_string(outcomes_[code]) +
                        " of profile code " + std::to_string(code) +
                        " is not a vertex");
    }
  }
}

MechanismTable tabulate(const Mechanism& m) {
  const ProfileCodec codec(m.tree().vertex_count(), m.agents());
  std::vector<Vertex> outcomes(codec.size());
  Profile a(m.agents());
  for (std::uint64_t code = 0; code < codec.size(); ++code) {
    codec.decode(code, a);
    outcomes[code] = m.evaluate_unchecked(a);
  }
  return MechanismTable(m.tree_ptr(), m.agents(), std::move(outcomes));
}

MechanismPtr table_mechanism(MechanismTable table) {
  return std::make_shared<TableBacked>(std::move(table));
}

MechanismPtr table_mechanism(
    TreePtr tree, int agents, std::span<const std::pair<Profile, Vertex>> entries,
    const std::function<Vertex(const Profile&)>& fill) {
  if (!tree) throw DomainError("table needs a tree");
  const ProfileCodec codec(tree->vertex_count(), agents);
  constexpr Vertex kUnset = -1;
  std::vector<Vertex> outcomes(codec.size(), kUnset);
  for (const auto& [profile, outcome] : entries) {
    const auto code = codec.encode(profile);
    if (outcomes[code] != kUnset) {
      throw DomainError("duplicate profile (code " + std::to_string(code) + ")");
    }
    if (!tree->valid(outcome)) {
      throw DomainError("outcome " + std::to_string(outcome) +
                        " is not a vertex");
    }
    outcomes[code] = outcome;
  }
  for (std::uint64_t code = 0; code < codec.size(); ++code) {
    if (outcomes[code] != kUnset) continue;
    if (!fill) {
      throw DomainError("missing profile (code " + std::to_string(code) + ")");
    }
    outcomes[code] = fill(codec.decode(code));
  }
  return table_mechanism(MechanismTable(std::move(tree), agents, std::move(outcomes)));
}

TreePtr fig1_tree() {
  static const TreePtr tree = [] {
    const std::vector<Edge> edges{{0, 2}, {1, 2}, {2, 3}, {3, 4}};
    return std::make_shared<const DiscreteTree>(
        DiscreteTree::from_edges(5, edges));
  }();
  return tree;
}

MechanismPtr fig1_mechanism() {
  static const MechanismPtr m = std::make_shared<Fig1>();
  return m;
}

MechanismPtr dictator_mechanism(TreePtr tree, int agents, int agent) {
  if (agent < 1 || agent > agents) {
    throw DomainError("dictator index " + std::to_string(agent) +
                      " outside 1.." + std::to_string(agents));
  }
  return std::make_shared<Dictator>(std::move(tree), agents, agent);
}

MechanismPtr constant_mechanism(TreePtr tree, int agents, Vertex where) {
  if (!tree) throw DomainError("mechanism needs a tree");
  tree->require_valid(where);
  return std::make_shared<Constant>(std::move(tree), agents, where);
}

MechanismPtr median_mechanism(TreePtr tree, int agents,
                              std::vector<Vertex> phantoms) {
  if (!tree) throw DomainError("mechanism needs a tree");
  if ((agents + static_cast<int>(phantoms.size())) % 2 == 0) {
    throw DomainError("median needs an odd ballot count, got " +
                      std::to_string(agents) + " agents + " +
                      std::to_string(phantoms.size()) + " phantoms");
  }
  for (Vertex p : phantoms) tree->require_valid(p);
  return std::make_shared<Median>(std::move(tree), agents, std::move(phantoms));
}

MechanismPtr order_statistic_mechanism(TreePtr tree, int agents, int k) {
  if (!tree) throw DomainError("mechanism needs a tree");
  if (k < 1 || k > agents) {
    throw DomainError("order statistic k=" + std::to_string(k) +
                      " outside 1.." + std::to_string(agents));
  }
  return std::make_shared<OrderStatistic>(std::move(tree), agents, k);
}

std::int64_t order_statistic(std::span<const std::int64_t> profile, int k) {
  if (k < 1 || k > static_cast<int>(profile.size())) {
    throw DomainError("order statistic k=" + std::to_string(k) +
                      " outside 1.." + std::to_string(profile.size()));
  }
  std::vector<std::int64_t> sorted(profile.begin(), profile.end());
  std::nth_element(sorted.begin(), sorted.begin() + (k - 1), sorted.end());
  return sorted[k - 1];
}

void validate(const GmvsParams& p) {
  if (!p.tree) throw DomainError("gmvs needs a tree");
  if (p.agents < 1 || p.agents > 20) {
    throw DomainError("gmvs supports 1..20 agents");
  }
  p.tree->require_valid(p.low);
  p.tree->require_valid(p.high);
  const std::size_t subsets = std::size_t{1} << p.agents;
  if (p.thresholds.size() != subsets) {
    throw DomainError("gmvs needs " + std::to_string(subsets) +
                      " thresholds, got " + std::to_string(p.thresholds.size()));
  }
  const DiscreteTree& t = *p.tree;
  for (std::size_t s = 0; s < subsets; ++s) {
    t.require_valid(p.thresholds[s]);
    if (!t.on_path(p.low, p.high, p.thresholds[s])) {
      throw DomainError("threshold for subset " + std::to_string(s) +
                        " is off the interval");
    }
  }
  if (p.thresholds.front() != p.low) {
    throw DomainError("threshold of the empty coalition must be the low end");
  }
  if (p.thresholds.back() != p.high) {
    throw DomainError("threshold of the grand coalition must be the high end");
  }
  // Monotonicity along single-element extensions implies it for all S < R.
  for (std::size_t s = 0; s < subsets; ++s) {
    for (int i = 0; i < p.agents; ++i) {
      const std::size_t r = s | (std::size_t{1} << i);
      if (r == s) continue;
      if (t.dist(p.thresholds[s], p.low) > t.dist(p.thresholds[r], p.low)) {
        throw DomainError("thresholds not monotone: subset " +
                          std::to_string(s) + " lies beyond subset " +
                          std::to_string(r));
      }
    }
  }
}

GmvsMechanism::GmvsMechanism(GmvsParams params)
    : Mechanism(params.tree, params.agents), params_(std::move(params)) {
  validate(params_);
  interval_ = path(*params_.tree, params_.low, params_.high);
}

std::string GmvsMechanism::describe() const {
  const DiscreteTree& t = tree();
  std::string out = "gmvs:" + std::to_string(t.label(params_.low)) + "," +
                    std::to_string(t.label(params_.high)) + ":";
  for (std::size_t s = 0; s < params_.thresholds.size(); ++s) {
    if (s) out += ',';
    out += std::to_string(t.label(params_.thresholds[s]));
  }
  return out;
}

int GmvsMechanism::offset_impl(std::span<const Vertex> a,
                               bool include_all) const {
  const DiscreteTree& t = tree();
  const int n = params_.agents;
  std::vector<int> depth(n);
  for (int i = 0; i < n; ++i) {
    const Vertex on_interval = t.project(params_.low, params_.high, a[i]);
    depth[i] = t.dist(on_interval, params_.low);
  }
  const std::size_t subsets = std::size_t{1} << n;
  const std::size_t limit = include_all ? subsets : subsets - 1;
  int best = 0;  // the empty coalition contributes d(alpha_{}, low) = 0
  for (std::size_t s = 1; s < limit; ++s) {
    int value = t.dist(params_.thresholds[s], params_.low);
    for (int i = 0; i < n; ++i) {
      if (s >> i & 1) value = std::min(value, depth[i]);
    }
    best = std::max(best, value);
  }
  return best;
}

int GmvsMechanism::offset(std::span<const Vertex> a) const {
  return offset_impl(a, true);
}

int GmvsMechanism::offset_proper_subsets(std::span<const Vertex> a) const {
  return offset_impl(a, false);
}

Vertex GmvsMechanism::vertex_at_offset(int offset) const {
  return interval_[offset];
}

Vertex GmvsMechanism::do_evaluate(std::span<const Vertex> a) const {
  return vertex_at_offset(offset(a));
}

std::shared_ptr<const GmvsMechanism> gmvs_mechanism(GmvsParams params) {
  return std::make_shared<GmvsMechanism>(std::move(params));
}

MechanismPtr make_builtin(std::string_view spec, TreePtr tree, int agents) {
  constexpr std::string_view kPrefix = "builtin:";
  if (spec.substr(0, kPrefix.size()) != kPrefix) {
    throw DomainError("not a builtin mechanism: '" + std::string(spec) + "'");
  }
  const auto parts = split(spec.substr(kPrefix.size()), ':');
  const std::string_view name = parts[0];
  auto arg = [&](std::size_t k) -> std::string_view {
    if (k >= parts.size()) {
      throw DomainError("builtin '" + std::string(name) + "' needs parameter " +
                        std::to_string(k));
    }
    return parts[k];
  };
  if (name == "fig1") {
    if (parts.size() != 1) throw DomainError("builtin:fig1 takes no parameters");
    return fig1_mechanism();
  }
  if (!tree) {
    throw DomainError("builtin '" + std::string(name) + "' needs a tree");
  }
  if (name == "dictator") {
    return dictator_mechanism(tree, agents,
                              static_cast<int>(parse_int(arg(1), "agent index")));
  }
  if (name == "constant") {
    return constant_mechanism(tree, agents,
                              vertex_by_label(*tree, parse_int(arg(1), "vertex")));
  }
  if (name == "median") {
    const std::string_view list = parts.size() > 1 ? parts[1] : "";
    return median_mechanism(tree, agents, parse_vertex_list(*tree, list));
  }
  if (name == "order-statistic") {
    return order_statistic_mechanism(tree, agents,
                                     static_cast<int>(parse_int(arg(1), "k")));
  }
  if (name == "gmvs") {
    const auto ends = parse_vertex_list(*tree, arg(1));
    if (ends.size() != 2) throw DomainError("gmvs needs 'low,high'");
    GmvsParams params{tree, agents, ends[0], ends[1],
                      parse_vertex_list(*tree, arg(2))};
    return gmvs_mechanism(std::move(params));
  }
  throw DomainError("unknown builtin mechanism '" + std::string(name) + "'");
}

std::string format_table(const MechanismTable& table, std::string_view tree_path) {
  const DiscreteTree& t = table.tree();
  std::ostringstream out;
  out << "tree: " << tree_path << '\n';
  out << "agents: " << table.agents() << '\n';
  Profile a(table.agents());
  for (std::uint64_t code = 0; code < table.size(); ++code) {
    table.codec().decode(code, a);
    for (Vertex v : a) out << t.label(v) << ' ';
    out << "-> " << t.label(table.outcome(code)) << '\n';
  }
  return out.str();
}

ParsedTable parse_table(std::string_view text,
                        const std::function<TreePtr(const std::string&)>& load_tree) {
  std::optional<std::string> tree_path;
  std::optional<int> agents;
  TreePtr tree;
  std::optional<ProfileCodec> codec;
  std::vector<std::optional<Vertex>> outcomes;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    const auto arrow = line.find("->");
    if (arrow == std::string_view::npos) {
      const auto colon = line.find(':');
      if (colon == std::string_view::npos) {
        throw ParseError(line_no, "expected 'key: value' or 'profile -> outcome'");
      }
      const std::string_view key = trim(line.substr(0, colon));
      const std::string_view value = trim(line.substr(colon + 1));
      if (codec) throw ParseError(line_no, "header after table entries");
      if (key == "tree") {
        if (tree_path) throw ParseError(line_no, "duplicate 'tree' key");
        tree_path = std::string(value);
      } else if (key == "agents") {
        if (agents) throw ParseError(line_no, "duplicate 'agents' key");
        try {
          agents = static_cast<int>(parse_int(value, "agent count"));
        } catch (const DomainError& e) {
          throw ParseError(line_no, e.what());
        }
      } else {
        throw ParseError(line_no, "unknown key '" + std::string(key) + "'");
      }
      continue;
    }

    if (!codec) {
      if (!tree_path || !agents) {
        throw ParseError(line_no, "table entries before 'tree' and 'agents'");
      }
      tree = load_tree(*tree_path);
      try {
        codec.emplace(tree->vertex_count(), *agents);
      } catch (const DomainError& e) {
        throw ParseError(line_no, e.what());
      }
      outcomes.assign(codec->size(), std::nullopt);
    }
    try {
      Profile a;
      std::string_view lhs = trim(line.substr(0, arrow));
      while (!lhs.empty()) {
        const auto cut = lhs.find_first_of(" \t");
        a.push_back(vertex_by_label(*tree, parse_int(lhs.substr(0, cut), "vertex label")));
        lhs = cut == std::string_view::npos ? std::string_view{} : trim(lhs.substr(cut));
      }
      const Vertex x = vertex_by_label(
          *tree, parse_int(line.substr(arrow + 2), "outcome label"));
      const auto code = codec->encode(a);
      if (outcomes[code]) throw DomainError("duplicate profile");
      outcomes[code] = x;
    } catch (const DomainError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  if (!tree_path || !agents) throw ParseError(0, "missing 'tree' or 'agents' header");
  if (!codec) throw ParseError(0, "table has no entries");
  std::vector<Vertex> dense(codec->size());
  for (std::uint64_t code = 0; code < codec->size(); ++code) {
    if (!outcomes[code]) {
      std::string profile;
      for (Vertex v : codec->decode(code)) {
        profile += std::to_string(tree->label(v)) + ' ';
      }
      throw ParseError(0, "missing profile " + profile);
    }
    dense[code] = *outcomes[code];
  }
  return ParsedTable{*tree_path, MechanismTable(tree, *agents, std::move(dense))};
}

ParsedTable read_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open table file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const auto dir = std::filesystem::path(path).parent_path();
  try {
    return parse_table(buffer.str(), [&dir](const std::string& tree_path) {
      std::filesystem::path p(tree_path);
      if (p.is_relative()) p = dir / p;
      return std::make_shared<const DiscreteTree>(read_tree_file(p.string()));
    });
  } catch (const ParseError& e) {
    throw e.in(path);
  }
}

void write_table_file(const std::string& path, const MechanismTable& table,
                      std::string_view tree_path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write table file '" + path + "'");
  out << format_table(table, tree_path);
}

}  // namespace sptree
