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

#include "sptree/preferences.h"

#include <chrono>
#include <fstream>
#include <sstream>

#include "sptree/error.h"
#include "text.h"

namespace sptree {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

PreferenceOrder::PreferenceOrder(int vertex_count,
                                 std::vector<std::vector<Vertex>> tiers)
    : tiers_(std::move(tiers)), rank_(vertex_count, -1) {
  for (std::size_t k = 0; k < tiers_.size(); ++k) {
    if (tiers_[k].empty()) throw DomainError("empty preference tier");
    for (Vertex v : tiers_[k]) {
      if (v < 0 || v >= vertex_count) {
        throw DomainError("preference names unknown vertex " + std::to_string(v));
      }
      if (rank_[v] != -1) {
        throw DomainError("vertex " + std::to_string(v) + " ranked twice");
      }
      rank_[v] = static_cast<int>(k);
    }
  }
  for (Vertex v = 0; v < vertex_count; ++v) {
    if (rank_[v] == -1) {
      throw DomainError("incomplete preference: vertex " + std::to_string(v) +
                        " is unranked");
    }
  }
}

Vertex PreferenceOrder::peak() const {
  if (tiers_.front().size() != 1) {
    throw DomainError("preference has no unique peak");
  }
  return tiers_.front().front();
}

Profile PreferenceProfile::truthful() const {
  Profile a;
  a.reserve(agents.size());
  for (const auto& p : agents) a.push_back(p.peak());
  return a;
}

PreferenceProfile parse_preferences(std::string_view text, const DiscreteTree& t) {
  PreferenceProfile out;
  internal::for_each_line(text, [&](int line_no, std::string_view line) {
    std::vector<std::vector<Vertex>> tiers;
    for (auto tier_text : internal::split(line, ';')) {
      std::vector<Vertex> tier;
      for (auto token : internal::split(tier_text, ',')) {
        const auto label = internal::to_int(token);
        if (!label) {
          throw ParseError(line_no, "bad vertex label '" +
                                        std::string(internal::trim(token)) + "'");
        }
        const auto v = t.vertex_of_label(*label);
        if (!v) {
          throw ParseError(line_no, "no vertex labelled " + std::to_string(*label));
        }
        tier.push_back(*v);
      }
      tiers.push_back(std::move(tier));
    }
    try {
      out.agents.emplace_back(t.vertex_count(), std::move(tiers));
    } catch (const DomainError& e) {
      throw ParseError(line_no, e.what());
    }
  });
  if (out.agents.empty()) throw ParseError(0, "no preferences given");
  return out;
}

PreferenceProfile read_preferences_file(const std::string& path,
                                        const DiscreteTree& t) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_preferences(buf.str(), t);
  } catch (const ParseError& e) {
    throw e.in(path);
  }
}

PreferenceCheck check_sp_under_preferences(const MechanismTable& m,
                                           const PreferenceProfile& prefs) {
  const auto start = Clock::now();
  if (static_cast<int>(prefs.agents.size()) != m.agents()) {
    throw DomainError("preference profile has " + std::to_string(prefs.agents.size()) +
                      " agents, mechanism has " + std::to_string(m.agents()));
  }
  const Profile a = prefs.truthful();
  PreferenceCheck out;
  out.report.property = "sp-preferences";
  out.report.profiles_checked = 1;
  const auto code = m.codec().encode(a);
  const Vertex x = m.outcome(code);
  for (int i = 0; i < m.agents(); ++i) {
    for (Vertex r = 0; r < m.tree().vertex_count(); ++r) {
      if (r == a[i]) continue;
      ++out.report.pairs_checked;
      const Vertex x2 = m.outcome(m.codec().replace(code, i, r));
      if (prefs.agents[i].prefers(x2, x)) {
        out.manipulations.push_back(DeviationPair{a, i, r, x, x2});
      }
    }
  }
  if (!out.manipulations.empty()) {
    out.report.verdict = Verdict::kViolated;
    out.report.witness = out.manipulations.front();
    out.report.violations = out.manipulations.size();
  }
  out.report.elapsed_seconds = seconds_since(start);
  return out;
}

PreferenceRule distance_preference_rule(const DiscreteTree& t) {
  return [&t](Vertex peak, Vertex v) { return t.dist(peak, v); };
}

PropertyReport check_sp_under_rule(const MechanismTable& m,
                                   const PreferenceRule& rule) {
  const auto start = Clock::now();
  PropertyReport report;
  report.property = "sp-rule";
  const int vertices = m.tree().vertex_count();
  Profile a(m.agents());
  for (std::uint64_t code = 0; code < m.size(); ++code) {
    ++report.profiles_checked;
    m.codec().decode(code, a);
    const Vertex x = m.outcome(code);
    for (int i = 0; i < m.agents(); ++i) {
      for (Vertex r = 0; r < vertices; ++r) {
        if (r == a[i]) continue;
        ++report.pairs_checked;
        const Vertex x2 = m.outcome(m.codec().replace(code, i, r));
        if (rule(a[i], x2) < rule(a[i], x)) {
          report.verdict = Verdict::kViolated;
          report.witness = DeviationPair{a, i, r, x, x2};
          report.violations = 1;
          report.elapsed_seconds = seconds_since(start);
          return report;
        }
      }
    }
  }
  report.elapsed_seconds = seconds_since(start);
  return report;
}

}  // namespace sptree
