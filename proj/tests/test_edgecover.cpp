#include <gtest/gtest.h>

#include "gen.hpp"
#include "relbn/edgecover.hpp"
#include "relbn/errors.hpp"
#include "relbn/lang.hpp"

using namespace relbn;

namespace {

std::string data(const std::string& name) { return read_file(std::string(RELBN_DATA_DIR) + "/" + name); }

BwGraph path(std::initializer_list<bool> colours) {
  BwGraph g;
  for (bool b : colours) g.add_node(b);
  for (size_t i = 1; i < g.node_count(); ++i) g.add_edge(i - 1, i);
  return g;
}

BwGraph complete_bipartite_black(long a, long b) {
  BwGraph g;
  for (long i = 0; i < a + b; ++i) g.add_node(true);
  for (long i = 0; i < a; ++i) {
    for (long j = 0; j < b; ++j) g.add_edge(static_cast<size_t>(i), static_cast<size_t>(a + j));
  }
  return g;
}

}  // namespace

TEST(BwGraph, RejectsBadEdges) {
  BwGraph g;
  g.add_node(true, "a");
  g.add_node(false, "b");
  g.add_edge(0, 1);
  EXPECT_THROW(g.add_edge(0, 0), ValidationError);
  EXPECT_THROW(g.add_edge(1, 0), ValidationError);
  EXPECT_THROW(g.add_edge(0, 5), ValidationError);
  EXPECT_THROW(g.add_node(true, "a"), ValidationError);
  EXPECT_EQ(*g.find("b"), 1u);
  EXPECT_EQ(g.neighbors(0), (std::vector<size_t>{1}));
}

TEST(ClassifyEdge, Kinds) {
  BwGraph g = path({false, false, true, true});
  EXPECT_EQ(classify_edge(g, 0, 1), EdgeKind::Free);
  EXPECT_EQ(classify_edge(g, 1, 2), EdgeKind::Dangling);
  EXPECT_EQ(classify_edge(g, 2, 3), EdgeKind::Regular);
  EXPECT_THROW(classify_edge(g, 0, 3), ValidationError);
  EXPECT_EQ(edge_kind_name(EdgeKind::Dangling), "dangling");
}

TEST(BruteForce, SmallCases) {
  EXPECT_EQ(count_covers_bruteforce(path({true, true})), 1);
  BwGraph isolated;
  isolated.add_node(true);
  isolated.add_node(true);
  EXPECT_EQ(count_covers_bruteforce(isolated), 0);
  EXPECT_EQ(count_covers_bruteforce(path({true, true, true})), 1);
  EXPECT_EQ(count_covers_bruteforce(path({false, true, true, false})), 5);
  EXPECT_THROW(count_covers_bruteforce(complete_bipartite_black(5, 6)), ResourceError);
}

TEST(ClassB, WorkedInstances) {
  EXPECT_EQ(count_covers_classB({1, 1, 1, 1}).count, 5);
  // All black nodes whitened: only the 12 free edges remain.
  EXPECT_EQ(count_covers_classB({0, 0, 0, 0, 12}).count, 4096);
  EXPECT_EQ(count_covers_classB({1, 1, 1, 1, 1}).count, 10);
  EXPECT_EQ(count_covers_classB({3, 3, 2, 2}).count, 449999);
}

TEST(ClassB, MatchesBruteForceWithFreeEdges) {
  for (long f = 0; f <= 2; ++f) {
    for (ClassB c : {ClassB{2, 1, 2, 1, f}, ClassB{0, 2, 2, 1, f}, ClassB{1, 2, 1, 0, f}, ClassB{0, 2, 3, 0, f},
                     ClassB{2, 0, 2, 2, f}, ClassB{1, 2, 0, 3, f}}) {
      EXPECT_EQ(count_covers_classB(c).count, count_covers_bruteforce(classb_graph(c)))
          << c.v1 << " " << c.v2 << " " << c.v3 << " " << c.v4 << " " << f;
    }
  }
}

TEST(ClassB, CallBound) {
  for (long a = 0; a <= 4; ++a) {
    for (long b = 0; b <= 4; ++b) {
      for (long c = 0; c <= 4; ++c) {
        for (long d = 0; d <= 4; ++d) {
          ClassB x{a, b, c, d};
          EXPECT_LE(count_covers_classB(x).calls, classb_call_bound(x));
        }
      }
    }
  }
  EXPECT_EQ(classb_call_bound({3, 3, 2, 2}), 36u);
  // Mirrored: n = |V2| = 3, m = |V3| = 1.
  EXPECT_EQ(classb_call_bound({2, 3, 1, 0}), 4u * 5 / 2 + 4 * 2 * 3 / 2);
  // 2x2 split states, each adding one call to the bound of class B (1, i-1, j-1, 1).
  EXPECT_EQ(classb_call_bound({0, 2, 2, 0}), (1u + 2) + (1 + 5) + (1 + 4) + (1 + 9));
}

TEST(AllBlackBipartite, MatchesBruteForce) {
  EXPECT_EQ(count_covers_all_black_bipartite(1, 1), 1);
  EXPECT_EQ(count_covers_all_black_bipartite(2, 2), 7);
  for (long a = 1; a <= 4; ++a) {
    for (long b = 1; b <= 4; ++b) {
      EXPECT_EQ(count_covers_all_black_bipartite(a, b), count_covers_bruteforce(complete_bipartite_black(a, b)));
    }
  }
}

TEST(Partition, DefinitionalCases) {
  Rational l(2, 3);
  BwGraph dangling = path({true, false});
  EXPECT_EQ(partition_function(dangling, l).value, l);
  BwGraph free = path({false, false});
  EXPECT_EQ(partition_function(free, l).value, Rational(5, 3));
  BwGraph p4 = parse_bwg(data("path4.bwg"));
  EXPECT_EQ(partition_function(p4, Rational(1)).value, Rational(5));
  EXPECT_THROW(partition_function(p4, Rational(0)), ValidationError);
}

TEST(Partition, ClassBMatchesBruteForce) {
  for (Rational l : {Rational(1, 2), Rational(3), Rational(2, 7)}) {
    for (ClassB c : {ClassB{1, 2, 2, 1, 1}, ClassB{2, 2, 1, 3}, ClassB{0, 3, 2, 0}, ClassB{2, 1, 0, 0}}) {
      EXPECT_EQ(partition_classB(c, l).value, partition_bruteforce(classb_graph(c), l));
    }
    EXPECT_EQ(partition_all_black_bipartite(2, 3, l).value, partition_bruteforce(complete_bipartite_black(2, 3), l));
  }
}

TEST(Partition, InclusionExclusionAgrees) {
  gen::Rng rng(4);
  for (int i = 0; i < 50; ++i) {
    BwGraph g = gen::random_bwgraph(rng, static_cast<int>(gen::uniform(rng, 2, 7)), 0.4, 0.5);
    Rational l(gen::uniform(rng, 1, 5), gen::uniform(rng, 1, 5));
    EXPECT_EQ(partition_inclusion_exclusion(g, l), partition_bruteforce(g, l));
  }
}

TEST(Partition, FreeEdgeDoublesCount) {
  gen::Rng rng(6);
  int checked = 0;
  while (checked < 40) {
    BwGraph g = gen::random_bwgraph(rng, static_cast<int>(gen::uniform(rng, 3, 6)), 0.5, 0.5);
    if (g.edge_count() > 10) continue;
    for (auto [u, v] : g.edges()) {
      if (classify_edge(g, u, v) != EdgeKind::Free) continue;
      BwGraph h;
      for (size_t x = 0; x < g.node_count(); ++x) h.add_node(g.black(x));
      for (auto [a, b] : g.edges()) {
        if (!(a == u && b == v)) h.add_edge(a, b);
      }
      EXPECT_EQ(count_covers_bruteforce(g), 2 * count_covers_bruteforce(h));
      ++checked;
      break;
    }
  }
}

TEST(Recognize, ClassBUpToRelabeling) {
  ClassB c{2, 3, 1, 2, 2};
  EXPECT_EQ(recognize_classB(classb_graph(c)), c);
  // Reversed layer order is the mirror image.
  BwGraph k = parse_bwg(data("k22black.bwg"));
  EXPECT_EQ(count_covers(k).count, 7);
  EXPECT_EQ(count_covers(parse_bwg(data("path4.bwg"))).count, 5);
  BwGraph tri = path({true, true, true});
  tri.add_edge(0, 2);
  EXPECT_FALSE(recognize_classB(tri));
  EXPECT_THROW(partition_function(tri, Rational(1)), UnsupportedError);
}

TEST(MinCover, Sizes) {
  EXPECT_EQ(min_edge_cover_bipartite_complete(1, 1), (std::vector<std::pair<long, long>>{{1, 1}}));
  EXPECT_EQ(min_edge_cover_bipartite_complete(2, 1), (std::vector<std::pair<long, long>>{{1, 1}, {2, 1}}));
  EXPECT_EQ(min_edge_cover_bipartite_complete(2, 3).size(), 3u);
  for (long a = 1; a <= 3; ++a) {
    for (long b = 1; b <= 3; ++b) {
      EXPECT_EQ(min_edge_cover_bipartite_complete(a, b).size(), static_cast<size_t>(std::max(a, b)));
    }
  }
}

TEST(Glauber, Basics) {
  BwGraph g = parse_bwg(data("path4.bwg"));
  EXPECT_EQ(glauber_sample(g, Rational(1), 0, 1), std::vector<bool>(3, true));
  BwGraph d = path({true, false});
  EXPECT_EQ(glauber_sample(d, Rational(1, 3), 1000, 9), std::vector<bool>{true});
  EXPECT_EQ(glauber_sample(g, Rational(1), 500, 42), glauber_sample(g, Rational(1), 500, 42));
}

TEST(Glauber, StaysInsideCovers) {
  gen::Rng rng(12);
  for (int i = 0; i < 10; ++i) {
    BwGraph g = gen::random_coverable_bwgraph(rng, 6, 0.5, 0.5);
    bool valid = true;
    glauber_sample(g, Rational(2, 3), 2000, static_cast<uint64_t>(i),
                   [&](const std::vector<bool>& s) { valid &= is_cover(g, s); });
    EXPECT_TRUE(valid);
  }
}

TEST(Bwg, ParseAndRender) {
  BwGraph g = parse_bwg(data("path4.bwg"));
  ASSERT_EQ(g.node_count(), 4u);
  EXPECT_TRUE(g.black(1));
  BwGraph back = parse_bwg(render_bwg(g));
  EXPECT_EQ(back.edges(), g.edges());
  EXPECT_EQ(count_covers_bruteforce(parse_bwg("classB 1 1 1 1\n")), 5);
  try {
    parse_bwg("node a black\nedge a z\n");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.line(), 2);
  }
}
