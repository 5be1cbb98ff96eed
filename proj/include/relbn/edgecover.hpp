#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "relbn/rational.hpp"

namespace relbn {

// Undirected simple graph with black (must be covered) and white nodes.
class BwGraph {
 public:
  size_t add_node(bool black, std::string name = "");
  // Throws ValidationError on self-loops, parallel edges or unknown nodes.
  size_t add_edge(size_t u, size_t v);

  size_t node_count() const { return black_.size(); }
  size_t edge_count() const { return edges_.size(); }
  bool black(size_t v) const { return black_[v]; }
  const std::string& name(size_t v) const { return names_[v]; }
  std::optional<size_t> find(const std::string& name) const;
  const std::vector<std::pair<size_t, size_t>>& edges() const { return edges_; }
  bool has_edge(size_t u, size_t v) const;
  std::vector<size_t> neighbors(size_t v) const;

 private:
  std::vector<bool> black_;
  std::vector<std::string> names_;
  std::vector<std::pair<size_t, size_t>> edges_;
  std::vector<std::vector<size_t>> adj_;
};

enum class EdgeKind { Free, Dangling, Regular };
std::string edge_kind_name(EdgeKind k);

// Throws ValidationError when {u,v} is not an edge of g.
EdgeKind classify_edge(const BwGraph& g, size_t u, size_t v);

// True when every black node has an incident edge in the subset.
bool is_cover(const BwGraph& g, const std::vector<bool>& in);

constexpr size_t kDefaultEdgeGuard = 25;

// Gray-code enumeration over all 2^|E| subsets.
BigInt count_covers_bruteforce(const BwGraph& g, size_t guard = kDefaultEdgeGuard);
Rational partition_bruteforce(const BwGraph& g, const Rational& lambda, size_t guard = kDefaultEdgeGuard);

// Inclusion-exclusion over the black nodes; an independent oracle.
Rational partition_inclusion_exclusion(const BwGraph& g, const Rational& lambda, size_t guard = kDefaultEdgeGuard);

// Four layers V1 (white), V2 (black), V3 (black), V4 (white), consecutive
// layers completely connected, plus `free_edges` white-white edges.
struct ClassB {
  long v1 = 0, v2 = 0, v3 = 0, v4 = 0;
  long free_edges = 0;
  friend bool operator==(const ClassB&, const ClassB&) = default;
};

BwGraph classb_graph(const ClassB& c);

struct CoverCount {
  BigInt count;
  unsigned long long calls = 0;  // recursion states computed
};

struct Partition {
  Rational value;
  unsigned long long calls = 0;
};

// (n+1)(n+2)/2 + (n+1)(m+1)(m+2)/2 with n = |V3| and m = |V2| (swapped
// for the mirror). With both white layers empty the all-black split runs
// instead, and the bound sums one class-B bound per split state.
unsigned long long classb_call_bound(const ClassB& c);

CoverCount count_covers_classB(const ClassB& c);
Partition partition_classB(const ClassB& c, const Rational& lambda);

// Complete bipartite K_{a,b} with every node black.
BigInt count_covers_all_black_bipartite(long a, long b);
Partition partition_all_black_bipartite(long a, long b, const Rational& lambda);

// Recognizes class-B graphs (up to node relabeling and extra free edges).
// Returns nullopt when the shape is not one the recursions handle.
std::optional<ClassB> recognize_classB(const BwGraph& g);

// Exact Z(g, lambda) via recognition; UnsupportedError otherwise.
Partition partition_function(const BwGraph& g, const Rational& lambda);
CoverCount count_covers(const BwGraph& g);

// Lexicographically least minimum edge cover of K_{a,b}, nodes numbered from 1.
std::vector<std::pair<long, long>> min_edge_cover_bipartite_complete(long a, long b);

// Glauber chain on edge covers started from the all-edges cover. The
// observer, when set, sees the state after every step.
using CoverObserver = std::function<void(const std::vector<bool>&)>;
std::vector<bool> glauber_sample(const BwGraph& g, const Rational& lambda, unsigned long long steps,
                                 uint64_t seed, const CoverObserver& observer = nullptr);

// `.bwg`: `node ID black|white`, `edge ID ID`, `classB k1 m n k2`.
BwGraph parse_bwg(const std::string& text);
std::string render_bwg(const BwGraph& g);

}  // namespace relbn
