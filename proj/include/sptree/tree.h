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

#ifndef SPTREE_TREE_H_
#define SPTREE_TREE_H_

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace sptree {

using Vertex = int;
using Profile = std::vector<Vertex>;
using Edge = std::pair<Vertex, Vertex>;

// Returned by set_distance() when either set is empty.
inline constexpr int kInfiniteDistance = std::numeric_limits<int>::max();

// Sorted, duplicate-free set of vertex ids.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(std::vector<Vertex> ids);

  bool contains(Vertex v) const;
  bool empty() const { return ids_.empty(); }
  std::size_t size() const { return ids_.size(); }
  const std::vector<Vertex>& ids() const { return ids_; }
  auto begin() const { return ids_.begin(); }
  auto end() const { return ids_.end(); }

  friend bool operator==(const VertexSet&, const VertexSet&) = default;

 private:
  std::vector<Vertex> ids_;
};

// A finite, unweighted, immutable tree on the dense vertex ids
// 0..vertex_count()-1. All-pairs hop distances and next-hop routing are
// computed once at construction, so every query below is a table lookup or
// a walk of at most diameter() steps.
class DiscreteTree {
 public:
  static constexpr int kMaxVertices = 4096;

  // Builds a tree over vertices 0..vertex_count-1. `labels`, when given,
  // records the external name of each dense id (defaults to the id itself).
  // Throws ParseError (line 0) on duplicate edges, cycles or disconnection
  // and DomainError on out-of-range endpoints.
  static DiscreteTree from_edges(int vertex_count, std::span<const Edge> edges,
                                 std::vector<std::int64_t> labels = {});

  int vertex_count() const { return vertex_count_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const Vertex> neighbors(Vertex v) const;
  bool valid(Vertex v) const { return v >= 0 && v < vertex_count_; }

  // Unchecked lookups for hot loops; callers guarantee valid ids.
  int dist(Vertex u, Vertex v) const {
    return dist_[static_cast<std::size_t>(u) * vertex_count_ + v];
  }
  // Neighbour of u on the path towards w; u itself when u == w.
  Vertex next_hop(Vertex u, Vertex w) const {
    return next_[static_cast<std::size_t>(u) * vertex_count_ + w];
  }
  // Unique vertex common to [p,q], [p,r] and [q,r].
  Vertex median(Vertex p, Vertex q, Vertex r) const;
  // Nearest vertex of [a,b] to v, i.e. the root of v's side tree.
  Vertex project(Vertex a, Vertex b, Vertex v) const { return median(a, b, v); }
  // True iff v lies on [u,w].
  bool on_path(Vertex u, Vertex w, Vertex v) const {
    return dist(u, v) + dist(v, w) == dist(u, w);
  }

  int diameter() const { return diameter_; }
  bool is_path() const;
  // The endpoints of a path-shaped tree, smaller label first. Throws
  // DomainError when the tree is not a path.
  std::pair<Vertex, Vertex> path_endpoints() const;

  std::int64_t label(Vertex v) const { return labels_[v]; }
  const std::vector<std::int64_t>& labels() const { return labels_; }
  std::optional<Vertex> vertex_of_label(std::int64_t label) const;

  // Throws DomainError unless v is a valid id.
  void require_valid(Vertex v) const;

 private:
  DiscreteTree() = default;

  int vertex_count_ = 0;
  int diameter_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<Vertex>> adjacency_;
  std::vector<std::uint16_t> dist_;
  std::vector<std::uint16_t> next_;
  std::vector<std::uint8_t> median_;  // dense V^3 cache for small trees
  std::vector<std::int64_t> labels_;
};

// Parses "u v" edge lines. '#' starts a comment; blank lines are ignored.
// Labels are arbitrary integers and are remapped to dense ids in ascending
// label order, so a file that already uses 0..k-1 keeps its numbering.
DiscreteTree parse_tree(std::string_view edge_list_text);
DiscreteTree read_tree_file(const std::string& path);
// Inverse of parse_tree() up to comments: one "u v" line per edge, labels.
std::string format_tree(const DiscreteTree& t);

int distance(const DiscreteTree& t, Vertex u, Vertex v);
std::vector<Vertex> path(const DiscreteTree& t, Vertex u, Vertex w);
int set_distance(const DiscreteTree& t, const VertexSet& a, const VertexSet& b);
// tree(a -> b, v): v plus everything reachable from v without using an edge
// of [a,b]. With a == b no edge is excluded and the whole tree is returned.
VertexSet side_tree(const DiscreteTree& t, Vertex a, Vertex b, Vertex v);
int depth_from_path(const DiscreteTree& t, Vertex a, Vertex b, Vertex v);
// Common subpath of [u1,w1] and [u2,w2], ordered away from u1.
std::vector<Vertex> path_intersection(const DiscreteTree& t, Vertex u1,
                                      Vertex w1, Vertex u2, Vertex w2);
Vertex median_of_three(const DiscreteTree& t, Vertex p, Vertex q, Vertex r);
// Vertices strictly between two reported locations.
VertexSet interior(const DiscreteTree& t, std::span<const Vertex> profile);

void require_profile(const DiscreteTree& t, std::span<const Vertex> profile);

}  // namespace sptree

#endif  // SPTREE_TREE_H_
