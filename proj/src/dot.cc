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

#include "sptree/dot.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "sptree/error.h"
#include "text.h"

namespace sptree {

namespace {

std::set<std::pair<Vertex, Vertex>> path_edges(const DiscreteTree& t, Vertex u,
                                               Vertex w) {
  std::set<std::pair<Vertex, Vertex>> out;
  const auto p = path(t, u, w);
  for (std::size_t k = 1; k < p.size(); ++k) out.insert(std::minmax(p[k - 1], p[k]));
  return out;
}

Vertex vertex_from(const DiscreteTree& t, int line_no, std::string_view text) {
  const auto label = internal::to_int(text);
  if (!label) throw ParseError(line_no, "bad vertex '" + std::string(text) + "'");
  const auto v = t.vertex_of_label(*label);
  if (!v) throw ParseError(line_no, "no vertex labelled " + std::to_string(*label));
  return *v;
}

}  // namespace

std::string export_dot(const DiscreteTree& t, const std::optional<Witness>& witness) {
  Profile profile;
  std::optional<int> agent;
  std::optional<Vertex> report, x, x2;
  if (witness) {
    if (const auto* p = std::get_if<DeviationPair>(&*witness)) {
      profile = p->profile;
      agent = p->agent;
      report = p->report;
      x = p->outcome;
      x2 = p->deviated_outcome;
    } else if (const auto* p = std::get_if<ProfileWitness>(&*witness)) {
      profile = p->profile;
      x = p->outcome;
    } else if (const auto* p = std::get_if<PermutationWitness>(&*witness)) {
      profile = p->profile;
      x = p->outcome;
    } else {
      x = std::get<UnreachedVertex>(*witness).vertex;
    }
  }
  std::set<std::pair<Vertex, Vertex>> agent_path, outcome_path;
  if (agent) agent_path = path_edges(t, profile[*agent], *report);
  if (x && x2) outcome_path = path_edges(t, *x, *x2);

  std::ostringstream out;
  out << "graph tree {\n";
  out << "  node [shape=circle, fontname=\"Helvetica\"];\n";
  for (Vertex v = 0; v < t.vertex_count(); ++v) {
    std::vector<std::string> attrs{"label=\"" + std::to_string(t.label(v)) + "\""};
    std::string agents;
    for (std::size_t i = 0; i < profile.size(); ++i) {
      if (profile[i] == v) agents += (agents.empty() ? "a" : ",a") + std::to_string(i + 1);
    }
    if (report && *report == v) agents += (agents.empty() ? "a'" : ",a'") + std::to_string(*agent + 1);
    std::string marks;
    if (x && *x == v) marks += "x";
    if (x2 && *x2 == v) marks += marks.empty() ? "x'" : ",x'";
    std::string note = agents;
    if (!marks.empty()) note += (note.empty() ? "" : " ") + marks;
    if (!note.empty()) attrs.push_back("xlabel=\"" + note + "\"");
    if (!agents.empty()) attrs.push_back("style=filled, fillcolor=\"lightblue\"");
    if (!marks.empty()) {
      attrs.push_back("shape=doublecircle");
      attrs.push_back(std::string("color=\"") + (x && *x == v ? "red" : "blue") + "\"");
    }
    out << "  " << v << " [";
    for (std::size_t k = 0; k < attrs.size(); ++k) out << (k ? ", " : "") << attrs[k];
    out << "];\n";
  }
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (const auto& [u, v] : t.edges()) edges.push_back(std::minmax(u, v));
  std::sort(edges.begin(), edges.end());
  for (const auto& e : edges) {
    std::vector<std::string> attrs;
    if (agent_path.count(e)) attrs.push_back("penwidth=3, color=\"darkgreen\"");
    if (outcome_path.count(e)) attrs.push_back("style=dashed, color=\"red\"");
    if (agent_path.count(e) && outcome_path.count(e)) {
      attrs = {"penwidth=3, style=dashed, color=\"darkgreen:red\""};
    }
    out << "  " << e.first << " -- " << e.second;
    if (!attrs.empty()) out << " [" << attrs.front() << "]";
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

std::string format_witness(const DiscreteTree& t, const std::optional<Witness>& w) {
  if (!w) return "witness=none\n";
  std::string out;
  const std::string text = describe(t, *w);
  for (auto token : internal::tokens(text)) {
    out += std::string(token) + "\n";
  }
  return out;
}

std::optional<Witness> parse_witness(std::string_view text, const DiscreteTree& t) {
  std::map<std::string, std::pair<int, std::string>, std::less<>> kv;
  internal::for_each_line(text, [&](int line_no, std::string_view line) {
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected key=value");
    std::string key(internal::trim(line.substr(0, eq)));
    static const std::set<std::string, std::less<>> kKeys = {
        "witness", "profile",  "agent",    "report",          "outcome",
        "deviated_outcome", "permuted", "permuted_outcome", "unreached"};
    if (!kKeys.count(key)) throw ParseError(line_no, "unknown key '" + key + "'");
    if (kv.count(key)) throw ParseError(line_no, "duplicate key '" + key + "'");
    kv[key] = {line_no, std::string(internal::trim(line.substr(eq + 1)))};
  });
  if (kv.count("witness")) {
    if (kv["witness"].second != "none" || kv.size() != 1) {
      throw ParseError(kv["witness"].first, "witness=none must stand alone");
    }
    return std::nullopt;
  }
  if (kv.count("unreached")) {
    if (kv.size() != 1) throw ParseError(kv["unreached"].first, "unreached must stand alone");
    return UnreachedVertex{vertex_from(t, kv["unreached"].first, kv["unreached"].second)};
  }
  for (const char* need : {"profile", "outcome"}) {
    if (!kv.count(need)) throw ParseError(0, std::string("missing '") + need + "'");
  }
  const auto& [pline, ptext] = kv["profile"];
  auto profile_from = [&](int line_no, std::string_view body) {
    if (body.size() >= 2 && body.front() == '(' && body.back() == ')') {
      body = body.substr(1, body.size() - 2);
    }
    Profile out;
    for (auto tok : internal::split(body, ',')) out.push_back(vertex_from(t, line_no, tok));
    return out;
  };
  const Profile profile = profile_from(pline, ptext);
  const Vertex x = vertex_from(t, kv["outcome"].first, kv["outcome"].second);
  if (kv.count("permuted")) {
    if (!kv.count("permuted_outcome")) throw ParseError(0, "missing 'permuted_outcome'");
    return PermutationWitness{
        profile, x, profile_from(kv["permuted"].first, kv["permuted"].second),
        vertex_from(t, kv["permuted_outcome"].first, kv["permuted_outcome"].second)};
  }
  const bool deviation = kv.count("agent") || kv.count("report") || kv.count("deviated_outcome");
  if (!deviation) return ProfileWitness{profile, x};
  for (const char* need : {"agent", "report", "deviated_outcome"}) {
    if (!kv.count(need)) throw ParseError(0, std::string("missing '") + need + "'");
  }
  const auto agent = internal::to_int(kv["agent"].second);
  if (!agent || *agent < 1 || *agent > static_cast<std::int64_t>(profile.size())) {
    throw ParseError(kv["agent"].first, "agent out of range");
  }
  return DeviationPair{profile, static_cast<int>(*agent - 1),
                       vertex_from(t, kv["report"].first, kv["report"].second), x,
                       vertex_from(t, kv["deviated_outcome"].first,
                                   kv["deviated_outcome"].second)};
}

std::optional<Witness> read_witness_file(const std::string& path,
                                         const DiscreteTree& t) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_witness(buf.str(), t);
  } catch (const ParseError& e) {
    throw e.in(path);
  }
}

}  // namespace sptree
