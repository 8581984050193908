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

#ifndef SPTREE_PREFERENCES_H_
#define SPTREE_PREFERENCES_H_

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "sptree/axioms.h"
#include "sptree/mechanism.h"
#include "sptree/tree.h"

namespace sptree {

// A total preorder over V as ranked tiers, best tier first. Vertices in the
// same tier are indifferent.
class PreferenceOrder {
 public:
  // Throws DomainError unless every vertex appears in exactly one tier.
  PreferenceOrder(int vertex_count, std::vector<std::vector<Vertex>> tiers);

  int rank(Vertex v) const { return rank_[v]; }
  bool prefers(Vertex u, Vertex v) const { return rank_[u] < rank_[v]; }
  const std::vector<std::vector<Vertex>>& tiers() const { return tiers_; }
  // The single vertex of the top tier; throws DomainError when it is tied.
  Vertex peak() const;

 private:
  std::vector<std::vector<Vertex>> tiers_;
  std::vector<int> rank_;
};

struct PreferenceProfile {
  std::vector<PreferenceOrder> agents;

  // Each agent's peak: the truthful report.
  Profile truthful() const;
};

// One agent per non-blank line, tiers separated by ';' and the vertices of
// a tier by ','. Vertices are tree labels. ParseError carries the line.
PreferenceProfile parse_preferences(std::string_view text, const DiscreteTree& t);
PreferenceProfile read_preferences_file(const std::string& path,
                                        const DiscreteTree& t);

struct PreferenceCheck {
  // Witness is the first manipulation in (agent, report) order.
  PropertyReport report;
  // Every strictly improving unilateral misreport at the truthful profile.
  std::vector<DeviationPair> manipulations;
};

// SP at the truthful profile under ordinal preferences: agent i manipulates
// by reporting r when f(a_-i, r) is strictly preferred to f(a).
PreferenceCheck check_sp_under_preferences(const MechanismTable& m,
                                           const PreferenceProfile& prefs);

// Preferences as a function of the peak: rank(peak, v), lower is better.
using PreferenceRule = std::function<int(Vertex peak, Vertex v)>;

// Quadratic preferences: rank is the distance to the peak.
PreferenceRule distance_preference_rule(const DiscreteTree& t);

// SP over every profile, each agent ranking outcomes by rule(a_i, .).
// Scan order and counters follow check_property.
PropertyReport check_sp_under_rule(const MechanismTable& m,
                                   const PreferenceRule& rule);

}  // namespace sptree

#endif  // SPTREE_PREFERENCES_H_
