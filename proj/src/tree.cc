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

#include "sptree/tree.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>
#include <string>

#include "sptree/error.h"
#include "text.h"

namespace sptree {

namespace {

constexpr int kMedianCacheLimit = 64;

class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[a] = b;
    return true;
  }

 private:
  std::vector<int> parent_;
};

using internal::trim;

}  // namespace

VertexSet::VertexSet(std::vector<Vertex> ids) : ids_(std::move(ids)) {
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

bool VertexSet::contains(Vertex v) const {
  return std::binary_search(ids_.begin(), ids_.end(), v);
}

DiscreteTree DiscreteTree::from_edges(int vertex_count,
                                      std::span<const Edge> edges,
                                      std::vector<std::int64_t> labels) {
  if (vertex_count < 1 || vertex_count > kMaxVertices) {
    throw DomainError("vertex count must be in [1, " +
                      std::to_string(kMaxVertices) + "], got " +
                      std::to_string(vertex_count));
  }
  if (!labels.empty() && static_cast<int>(labels.size()) != vertex_count) {
    throw DomainError("label count does not match vertex count");
  }
  DiscreteTree t;
  t.vertex_count_ = vertex_count;
  t.adjacency_.resize(vertex_count);
  if (labels.empty()) {
    labels.resize(vertex_count);
    std::iota(labels.begin(), labels.end(), 0);
  }
  t.labels_ = std::move(labels);

  DisjointSets components(vertex_count);
  std::set<Edge> seen;
  for (auto [u, v] : edges) {
    if (u < 0 || u >= vertex_count || v < 0 || v >= vertex_count) {
      throw DomainError("edge endpoint out of range");
    }
    const Edge key{std::min(u, v), std::max(u, v)};
    if (!seen.insert(key).second) {
      throw ParseError(0, "duplicate edge " + std::to_string(u) + " " +
                              std::to_string(v));
    }
    if (!components.unite(u, v)) {
      throw ParseError(0, "cycle detected at edge " + std::to_string(u) +
                              " " + std::to_string(v));
    }
    t.edges_.push_back(key);
    t.adjacency_[u].push_back(v);
    t.adjacency_[v].push_back(u);
  }
  if (static_cast<int>(t.edges_.size()) != vertex_count - 1) {
    throw ParseError(0, "disconnected input: " +
                            std::to_string(t.edges_.size()) + " edges for " +
                            std::to_string(vertex_count) + " vertices");
  }
  std::sort(t.edges_.begin(), t.edges_.end());
  for (auto& nbrs : t.adjacency_) std::sort(nbrs.begin(), nbrs.end());

  // One BFS per source fills a row of both tables. next_[u][w] is recorded
  // from the BFS rooted at w: the parent of u points one step towards w.
  const auto n = static_cast<std::size_t>(vertex_count);
  t.dist_.assign(n * n, 0);
  t.next_.assign(n * n, 0);
  std::vector<int> level(n);
  std::vector<Vertex> parent(n);
  std::queue<Vertex> frontier;
  for (Vertex root = 0; root < vertex_count; ++root) {
    std::fill(level.begin(), level.end(), -1);
    level[root] = 0;
    parent[root] = root;
    frontier.push(root);
    while (!frontier.empty()) {
      const Vertex u = frontier.front();
      frontier.pop();
      for (Vertex w : t.adjacency_[u]) {
        if (level[w] >= 0) continue;
        level[w] = level[u] + 1;
        parent[w] = u;
        frontier.push(w);
      }
    }
    for (Vertex u = 0; u < vertex_count; ++u) {
      t.dist_[static_cast<std::size_t>(root) * n + u] =
          static_cast<std::uint16_t>(level[u]);
      t.next_[static_cast<std::size_t>(u) * n + root] =
          static_cast<std::uint16_t>(parent[u]);
      t.diameter_ = std::max(t.diameter_, level[u]);
    }
  }

  if (vertex_count <= kMedianCacheLimit) {
    t.median_.resize(n * n * n);
    for (Vertex p = 0; p < vertex_count; ++p) {
      for (Vertex q = 0; q < vertex_count; ++q) {
        for (Vertex r = 0; r < vertex_count; ++r) {
          // Walk from p towards q for (d(p,q) + d(p,r) - d(q,r)) / 2 steps.
          int steps = (t.dist(p, q) + t.dist(p, r) - t.dist(q, r)) / 2;
          Vertex m = p;
          while (steps-- > 0) m = t.next_hop(m, q);
          t.median_[(static_cast<std::size_t>(p) * n + q) * n + r] =
              static_cast<std::uint8_t>(m);
        }
      }
    }
  }
  return t;
}

std::span<const Vertex> DiscreteTree::neighbors(Vertex v) const {
  require_valid(v);
  return adjacency_[v];
}

Vertex DiscreteTree::median(Vertex p, Vertex q, Vertex r) const {
  const auto n = static_cast<std::size_t>(vertex_count_);
  if (!median_.empty()) return median_[(p * n + q) * n + r];
  int steps = (dist(p, q) + dist(p, r) - dist(q, r)) / 2;
  Vertex m = p;
  while (steps-- > 0) m = next_hop(m, q);
  return m;
}

bool DiscreteTree::is_path() const {
  for (const auto& nbrs : adjacency_) {
    if (nbrs.size() > 2) return false;
  }
  return true;
}

std::pair<Vertex, Vertex> DiscreteTree::path_endpoints() const {
  if (!is_path()) throw DomainError("tree is not a path");
  if (vertex_count_ == 1) return {0, 0};
  std::vector<Vertex> leaves;
  for (Vertex v = 0; v < vertex_count_; ++v) {
    if (adjacency_[v].size() == 1) leaves.push_back(v);
  }
  if (labels_[leaves[1]] < labels_[leaves[0]]) std::swap(leaves[0], leaves[1]);
  return {leaves[0], leaves[1]};
}

std::optional<Vertex> DiscreteTree::vertex_of_label(std::int64_t label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<Vertex>(it - labels_.begin());
}

void DiscreteTree::require_valid(Vertex v) const {
  if (!valid(v)) {
    throw DomainError("invalid vertex id " + std::to_string(v) + " (tree has " +
                      std::to_string(vertex_count_) + " vertices)");
  }
}

DiscreteTree parse_tree(std::string_view text) {
  std::vector<std::pair<std::int64_t, std::int64_t>> raw;
  std::vector<int> raw_lines;
  std::set<std::pair<std::int64_t, std::int64_t>> seen;
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

    std::int64_t ends[2];
    int count = 0;
    while (!line.empty()) {
      const auto cut = line.find_first_of(" \t");
      const std::string_view token = line.substr(0, cut);
      line = cut == std::string_view::npos ? std::string_view{}
                                           : trim(line.substr(cut));
      if (count == 2) throw ParseError(line_no, "expected exactly two vertices");
      std::int64_t value = 0;
      const auto [ptr, ec] =
          std::from_chars(token.data(), token.data() + token.size(), value);
      if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw ParseError(line_no,
                         "non-integer token '" + std::string(token) + "'");
      }
      ends[count++] = value;
    }
    if (count != 2) throw ParseError(line_no, "expected exactly two vertices");
    if (ends[0] == ends[1]) {
      throw ParseError(line_no, "cycle detected: self-loop on " +
                                    std::to_string(ends[0]));
    }
    const auto key = std::minmax(ends[0], ends[1]);
    if (!seen.insert({key.first, key.second}).second) {
      throw ParseError(line_no, "duplicate edge " + std::to_string(ends[0]) +
                                    " " + std::to_string(ends[1]));
    }
    raw.emplace_back(ends[0], ends[1]);
    raw_lines.push_back(line_no);
  }
  if (raw.empty()) throw ParseError(0, "empty edge list");

  std::vector<std::int64_t> labels;
  for (auto [u, v] : raw) {
    labels.push_back(u);
    labels.push_back(v);
  }
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  if (labels.size() > static_cast<std::size_t>(DiscreteTree::kMaxVertices)) {
    throw ParseError(0, "too many vertices");
  }
  auto dense = [&labels](std::int64_t label) {
    return static_cast<Vertex>(
        std::lower_bound(labels.begin(), labels.end(), label) - labels.begin());
  };

  // Cycles are reported against the line that closes them.
  DisjointSets components(static_cast<int>(labels.size()));
  std::vector<Edge> edges;
  for (std::size_t k = 0; k < raw.size(); ++k) {
    const Vertex u = dense(raw[k].first);
    const Vertex v = dense(raw[k].second);
    if (!components.unite(u, v)) {
      throw ParseError(raw_lines[k], "cycle detected at edge " +
                                         std::to_string(raw[k].first) + " " +
                                         std::to_string(raw[k].second));
    }
    edges.emplace_back(u, v);
  }
  if (edges.size() + 1 != labels.size()) {
    throw ParseError(0, "disconnected input: " + std::to_string(edges.size()) +
                            " edges for " + std::to_string(labels.size()) +
                            " vertices");
  }
  const int count = static_cast<int>(labels.size());
  return DiscreteTree::from_edges(count, edges, std::move(labels));
}

DiscreteTree read_tree_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open tree file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_tree(buffer.str());
  } catch (const ParseError& e) {
    throw e.in(path);
  }
}

std::string format_tree(const DiscreteTree& t) {
  std::ostringstream out;
  for (auto [u, v] : t.edges()) out << t.label(u) << ' ' << t.label(v) << '\n';
  return out.str();
}

int distance(const DiscreteTree& t, Vertex u, Vertex v) {
  t.require_valid(u);
  t.require_valid(v);
  return t.dist(u, v);
}

std::vector<Vertex> path(const DiscreteTree& t, Vertex u, Vertex w) {
  t.require_valid(u);
  t.require_valid(w);
  std::vector<Vertex> out{u};
  while (u != w) {
    u = t.next_hop(u, w);
    out.push_back(u);
  }
  return out;
}

int set_distance(const DiscreteTree& t, const VertexSet& a,
                 const VertexSet& b) {
  for (Vertex v : a) t.require_valid(v);
  for (Vertex v : b) t.require_valid(v);
  int best = kInfiniteDistance;
  for (Vertex u : a) {
    for (Vertex v : b) best = std::min(best, t.dist(u, v));
  }
  return best;
}

VertexSet side_tree(const DiscreteTree& t, Vertex a, Vertex b, Vertex v) {
  t.require_valid(v);
  const auto spine = path(t, a, b);
  std::set<Edge> removed;
  for (std::size_t k = 0; k + 1 < spine.size(); ++k) {
    removed.insert(std::minmax(spine[k], spine[k + 1]));
  }
  std::vector<char> reached(t.vertex_count(), 0);
  std::vector<Vertex> stack{v}, out;
  reached[v] = 1;
  while (!stack.empty()) {
    const Vertex u = stack.back();
    stack.pop_back();
    out.push_back(u);
    for (Vertex w : t.neighbors(u)) {
      if (reached[w] || removed.count(std::minmax(u, w))) continue;
      reached[w] = 1;
      stack.push_back(w);
    }
  }
  return VertexSet(std::move(out));
}

int depth_from_path(const DiscreteTree& t, Vertex a, Vertex b, Vertex v) {
  t.require_valid(v);
  int best = kInfiniteDistance;
  for (Vertex p : path(t, a, b)) best = std::min(best, t.dist(v, p));
  return best;
}

std::vector<Vertex> path_intersection(const DiscreteTree& t, Vertex u1,
                                      Vertex w1, Vertex u2, Vertex w2) {
  for (Vertex v : {u1, w1, u2, w2}) t.require_valid(v);
  // [u2,w2] enters [u1,w1] at the projection of u2 and leaves it at the
  // projection of w2; if both project to one vertex the paths share at most
  // that vertex.
  const Vertex p = t.project(u1, w1, u2);
  const Vertex q = t.project(u1, w1, w2);
  if (p == q) {
    if (t.on_path(u2, w2, p)) return {p};
    return {};
  }
  return t.dist(u1, p) < t.dist(u1, q) ? path(t, p, q) : path(t, q, p);
}

Vertex median_of_three(const DiscreteTree& t, Vertex p, Vertex q, Vertex r) {
  t.require_valid(p);
  t.require_valid(q);
  t.require_valid(r);
  return t.median(p, q, r);
}

VertexSet interior(const DiscreteTree& t, std::span<const Vertex> profile) {
  require_profile(t, profile);
  std::vector<char> mark(t.vertex_count(), 0);
  for (std::size_t i = 0; i < profile.size(); ++i) {
    for (std::size_t j = i + 1; j < profile.size(); ++j) {
      Vertex u = profile[i];
      const Vertex w = profile[j];
      if (u == w) continue;
      u = t.next_hop(u, w);
      while (u != w) {
        mark[u] = 1;
        u = t.next_hop(u, w);
      }
    }
  }
  std::vector<Vertex> out;
  for (Vertex v = 0; v < t.vertex_count(); ++v) {
    if (mark[v]) out.push_back(v);
  }
  return VertexSet(std::move(out));
}

void require_profile(const DiscreteTree& t, std::span<const Vertex> profile) {
  if (profile.empty()) throw DomainError("profile must have at least one agent");
  for (Vertex v : profile) t.require_valid(v);
}

}  // namespace sptree
