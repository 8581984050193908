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

#include <gtest/gtest.h>

#include <algorithm>

#include "oracle.h"
#include "sptree/error.h"
#include "sptree/rng.h"
#include "sptree/tree.h"

namespace sptree {
namespace {

const char kFig1[] = "0 2\n1 2\n2 3\n3 4";

std::vector<Vertex> ids(const VertexSet& s) { return s.ids(); }

TEST(ParseTree, Fig1Tree) {
  const auto t = parse_tree(kFig1);
  EXPECT_EQ(t.vertex_count(), 5);
  EXPECT_EQ(t.edges().size(), 4u);
  EXPECT_EQ(t.dist(0, 4), 3);
}

TEST(ParseTree, SmallestTree) {
  const auto t = parse_tree("0 1");
  EXPECT_EQ(t.vertex_count(), 2);
  EXPECT_EQ(t.dist(0, 1), 1);
}

TEST(ParseTree, CommentsAndBlankLines) {
  const auto t = parse_tree("# header\n\n0 1  # trailing\n1 2\n");
  EXPECT_EQ(t.vertex_count(), 3);
}

TEST(ParseTree, RemapsLabelsInOrder) {
  const auto t = parse_tree("10 30\n30 20");
  ASSERT_EQ(t.vertex_count(), 3);
  EXPECT_EQ(t.label(0), 10);
  EXPECT_EQ(t.label(1), 20);
  EXPECT_EQ(t.label(2), 30);
  EXPECT_EQ(t.vertex_of_label(20), 1);
  EXPECT_FALSE(t.vertex_of_label(5).has_value());
}

void expect_parse_error(const char* text, int line, const std::string& needle) {
  try {
    parse_tree(text);
    FAIL() << "no error for: " << text;
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), line) << e.what();
    EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
  }
}

TEST(ParseTree, Errors) {
  expect_parse_error("0 1\n1 2\n2 0", 3, "cycle");
  expect_parse_error("0 1\n1 0", 2, "duplicate");
  expect_parse_error("0 1\n2 3", 0, "disconnected");
  expect_parse_error("0 1\n1 x", 2, "non-integer");
  expect_parse_error("0 1\n1 2 3", 2, "two vertices");
  expect_parse_error("0 0", 1, "cycle");
  expect_parse_error("# nothing\n", 0, "empty");
}

TEST(ParseTree, FormatRoundTrip) {
  const auto t = parse_tree("5 7\n7 9\n7 11");
  const auto u = parse_tree(format_tree(t));
  EXPECT_EQ(u.edges(), t.edges());
  EXPECT_EQ(u.labels(), t.labels());
}

TEST(Distance, Examples) {
  const auto t = parse_tree(kFig1);
  EXPECT_EQ(distance(t, 0, 1), 2);
  EXPECT_EQ(distance(t, 3, 3), 0);
  EXPECT_EQ(distance(t, 0, 4), 3);
  EXPECT_THROW(distance(t, 0, 5), DomainError);
}

TEST(Path, Examples) {
  const auto t = parse_tree(kFig1);
  EXPECT_EQ(path(t, 0, 4), (std::vector<Vertex>{0, 2, 3, 4}));
  EXPECT_EQ(path(t, 2, 2), (std::vector<Vertex>{2}));
  EXPECT_EQ(path(t, 1, 0), (std::vector<Vertex>{1, 2, 0}));
  EXPECT_THROW(path(t, -1, 0), DomainError);
}

TEST(SetDistance, Examples) {
  const auto t = parse_tree(kFig1);
  EXPECT_EQ(set_distance(t, VertexSet({0}), VertexSet({1, 2})), 1);
  EXPECT_EQ(set_distance(t, VertexSet({3, 4}), VertexSet({3, 4})), 0);
  EXPECT_EQ(set_distance(t, VertexSet({0}), VertexSet()), kInfiniteDistance);
  EXPECT_THROW(set_distance(t, VertexSet({9}), VertexSet({0})), DomainError);
}

TEST(SideTree, Examples) {
  const auto t = parse_tree(kFig1);
  // The edge {1,2} is off the path, so 2 is reachable from 1.
  EXPECT_EQ(ids(side_tree(t, 0, 4, 1)), (std::vector<Vertex>{1, 2}));
  EXPECT_EQ(ids(side_tree(t, 3, 4, 1)), (std::vector<Vertex>{0, 1, 2, 3}));
  EXPECT_EQ(ids(side_tree(t, 2, 2, 4)), (std::vector<Vertex>{0, 1, 2, 3, 4}));
}

TEST(Depth, Examples) {
  const auto t = parse_tree(kFig1);
  EXPECT_EQ(depth_from_path(t, 0, 4, 1), 1);
  EXPECT_EQ(depth_from_path(t, 0, 4, 3), 0);
  EXPECT_EQ(depth_from_path(t, 3, 4, 0), 2);
}

TEST(PathIntersection, Examples) {
  const auto t = parse_tree(kFig1);
  EXPECT_TRUE(path_intersection(t, 3, 4, 1, 0).empty());
  EXPECT_EQ(path_intersection(t, 0, 4, 0, 4), path(t, 0, 4));
  const auto p3 = parse_tree("0 1\n1 2");
  EXPECT_EQ(path_intersection(p3, 0, 1, 0, 2), (std::vector<Vertex>{0, 1}));
}

TEST(Median, Examples) {
  const auto t = parse_tree(kFig1);
  EXPECT_EQ(median_of_three(t, 3, 1, 0), 2);
  EXPECT_EQ(median_of_three(t, 4, 4, 4), 4);
  const auto p3 = parse_tree("0 1\n1 2");
  EXPECT_EQ(median_of_three(p3, 0, 1, 2), 1);
}

TEST(Interior, Examples) {
  const auto t = parse_tree(kFig1);
  const Profile a{0, 4}, b{3, 3, 3}, c{0, 1};
  EXPECT_EQ(ids(interior(t, a)), (std::vector<Vertex>{2, 3}));
  EXPECT_TRUE(interior(t, b).empty());
  EXPECT_EQ(ids(interior(t, c)), (std::vector<Vertex>{2}));
}

TEST(Tree, PathShape) {
  EXPECT_TRUE(parse_tree("0 1\n1 2\n2 3").is_path());
  EXPECT_FALSE(parse_tree(kFig1).is_path());
  const auto t = parse_tree("3 1\n1 2");
  EXPECT_EQ(t.label(t.path_endpoints().first), 2);
}

// Everything below is checked against the oracle on the whole corpus.

class Corpus : public ::testing::Test {
 protected:
  static const std::vector<oracle::NamedTree>& trees() {
    static const auto c = oracle::corpus(6);
    return c;
  }
};

TEST_F(Corpus, DistancesAndPathsMatchOracle) {
  for (const auto& [name, t] : trees()) {
    const auto g = oracle::graph_of(*t);
    for (Vertex u = 0; u < t->vertex_count(); ++u) {
      for (Vertex w = 0; w < t->vertex_count(); ++w) {
        ASSERT_EQ(path(*t, u, w), oracle::path(g, u, w)) << name;
        ASSERT_EQ(t->dist(u, w), oracle::dist(g, u, w)) << name;
        ASSERT_EQ(t->dist(u, w), t->dist(w, u));
        ASSERT_EQ(t->dist(u, w) == 0, u == w);
      }
    }
  }
}

TEST_F(Corpus, OnPathIffDistancesAdd) {
  for (const auto& [name, t] : trees()) {
    const auto g = oracle::graph_of(*t);
    for (Vertex u = 0; u < t->vertex_count(); ++u) {
      for (Vertex w = 0; w < t->vertex_count(); ++w) {
        const auto on = oracle::path_set(g, u, w);
        for (Vertex v = 0; v < t->vertex_count(); ++v) {
          ASSERT_EQ(on.count(v) == 1, t->dist(u, v) + t->dist(v, w) == t->dist(u, w))
              << name;
          ASSERT_EQ(t->on_path(u, w, v), on.count(v) == 1);
        }
      }
    }
  }
}

TEST_F(Corpus, SideTreesAndDepthMatchOracle) {
  for (const auto& [name, t] : trees()) {
    const auto g = oracle::graph_of(*t);
    const int n = t->vertex_count();
    for (Vertex a = 0; a < n; ++a) {
      for (Vertex b = 0; b < n; ++b) {
        for (Vertex v = 0; v < n; ++v) {
          const auto s = side_tree(*t, a, b, v);
          const auto o = oracle::side_tree(g, a, b, v);
          ASSERT_EQ(s.ids(), std::vector<Vertex>(o.begin(), o.end())) << name;
          ASSERT_EQ(depth_from_path(*t, a, b, v), oracle::depth(g, a, b, v)) << name;
        }
      }
    }
  }
}

TEST_F(Corpus, SideTreesPartitionTheVertices) {
  for (const auto& [name, t] : trees()) {
    const int n = t->vertex_count();
    for (Vertex a = 0; a < n; ++a) {
      for (Vertex b = 0; b < n; ++b) {
        if (a == b) continue;
        std::vector<int> hits(n, 0);
        for (Vertex p : path(*t, a, b)) {
          for (Vertex v : side_tree(*t, a, b, p)) ++hits[v];
        }
        ASSERT_TRUE(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }))
            << name << " " << a << "->" << b;
      }
    }
  }
}

// d(a_i,x) = d({a_i}, tree(a_i -> a'_i, x)) + depth(a_i -> a'_i, x).
TEST_F(Corpus, DepthIdentity) {
  for (const auto& [name, t] : trees()) {
    const int n = t->vertex_count();
    for (Vertex a = 0; a < n; ++a) {
      for (Vertex b = 0; b < n; ++b) {
        for (Vertex x = 0; x < n; ++x) {
          const int lhs = distance(*t, a, x);
          const int rhs = set_distance(*t, VertexSet({a}), side_tree(*t, a, b, x)) +
                          depth_from_path(*t, a, b, x);
          ASSERT_EQ(lhs, rhs) << name << " a=" << a << " b=" << b << " x=" << x;
        }
      }
    }
  }
}

TEST_F(Corpus, PathIntersectionIsCommonSubpath) {
  for (const auto& [name, t] : trees()) {
    if (t->vertex_count() > 7) continue;  // V^4 quadruples
    const auto g = oracle::graph_of(*t);
    const int n = t->vertex_count();
    for (Vertex u1 = 0; u1 < n; ++u1) {
      for (Vertex w1 = 0; w1 < n; ++w1) {
        for (Vertex u2 = 0; u2 < n; ++u2) {
          for (Vertex w2 = 0; w2 < n; ++w2) {
            const auto p = path_intersection(*t, u1, w1, u2, w2);
            ASSERT_EQ(p, oracle::path_intersection(g, u1, w1, u2, w2)) << name;
            for (std::size_t k = 1; k < p.size(); ++k) {
              ASSERT_EQ(t->dist(p[k - 1], p[k]), 1) << name;
            }
          }
        }
      }
    }
  }
}

TEST_F(Corpus, MedianMatchesOracleAndIsSymmetric) {
  for (const auto& [name, t] : trees()) {
    const auto g = oracle::graph_of(*t);
    const int n = t->vertex_count();
    for (Vertex p = 0; p < n; ++p) {
      for (Vertex q = 0; q < n; ++q) {
        for (Vertex r = 0; r < n; ++r) {
          const Vertex m = median_of_three(*t, p, q, r);
          ASSERT_EQ(m, oracle::median(g, p, q, r)) << name;
          ASSERT_EQ(m, median_of_three(*t, p, r, q));
          ASSERT_EQ(m, median_of_three(*t, q, p, r));
          ASSERT_EQ(m, median_of_three(*t, q, r, p));
          ASSERT_EQ(m, median_of_three(*t, r, p, q));
          ASSERT_EQ(m, median_of_three(*t, r, q, p));
        }
      }
    }
  }
}

TEST_F(Corpus, InteriorMatchesOracle) {
  for (const auto& [name, t] : trees()) {
    const auto g = oracle::graph_of(*t);
    const int n = t->vertex_count();
    for (Vertex a = 0; a < n; ++a) {
      for (Vertex b = 0; b < n; ++b) {
        for (Vertex c = 0; c < n; ++c) {
          const Profile prof{a, b, c};
          const auto want = oracle::interior(g, prof);
          ASSERT_EQ(interior(*t, prof).ids(), std::vector<Vertex>(want.begin(), want.end()))
              << name;
        }
      }
    }
  }
}

TEST(Tree, LargeTreeAgreesWithOracle) {
  std::vector<Edge> edges;
  for (int v = 1; v < 2000; ++v) edges.emplace_back((v - 1) / 3, v);
  const auto t = DiscreteTree::from_edges(2000, edges);
  const auto g = oracle::graph_of(t);
  SplitMix64 rng(7);
  for (int k = 0; k < 50; ++k) {
    const auto p = static_cast<Vertex>(rng.below(2000));
    const auto q = static_cast<Vertex>(rng.below(2000));
    const auto r = static_cast<Vertex>(rng.below(2000));
    ASSERT_EQ(median_of_three(t, p, q, r), oracle::median(g, p, q, r));
    ASSERT_EQ(distance(t, p, q), oracle::dist(g, p, q));
  }
}

}  // namespace
}  // namespace sptree
