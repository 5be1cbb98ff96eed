#include "relbn/edgecover.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "relbn/errors.hpp"

namespace relbn {

size_t BwGraph::add_node(bool black, std::string name) {
  size_t id = black_.size();
  if (name.empty()) name = std::to_string(id + 1);
  if (find(name)) throw ValidationError("duplicate node '" + name + "'");
  black_.push_back(black);
  names_.push_back(std::move(name));
  adj_.emplace_back();
  return id;
}

std::optional<size_t> BwGraph::find(const std::string& name) const {
  for (size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

size_t BwGraph::add_edge(size_t u, size_t v) {
  if (u >= node_count() || v >= node_count()) throw ValidationError("edge names an unknown node");
  if (u == v) throw ValidationError("self-loop on node '" + names_[u] + "'");
  if (has_edge(u, v)) throw ValidationError("parallel edge " + names_[u] + "-" + names_[v]);
  edges_.push_back({u, v});
  adj_[u].push_back(v);
  adj_[v].push_back(u);
  return edges_.size() - 1;
}

bool BwGraph::has_edge(size_t u, size_t v) const {
  if (u >= node_count() || v >= node_count()) return false;
  const auto& a = adj_[u];
  return std::find(a.begin(), a.end(), v) != a.end();
}

std::vector<size_t> BwGraph::neighbors(size_t v) const { return adj_.at(v); }

std::string edge_kind_name(EdgeKind k) {
  switch (k) {
    case EdgeKind::Free: return "free";
    case EdgeKind::Dangling: return "dangling";
    case EdgeKind::Regular: return "regular";
  }
  return "?";
}

EdgeKind classify_edge(const BwGraph& g, size_t u, size_t v) {
  if (!g.has_edge(u, v)) throw ValidationError("not an edge of the graph");
  int blacks = g.black(u) + g.black(v);
  return blacks == 0 ? EdgeKind::Free : blacks == 1 ? EdgeKind::Dangling : EdgeKind::Regular;
}

bool is_cover(const BwGraph& g, const std::vector<bool>& in) {
  std::vector<bool> hit(g.node_count(), false);
  for (size_t i = 0; i < g.edge_count(); ++i) {
    if (!in[i]) continue;
    hit[g.edges()[i].first] = true;
    hit[g.edges()[i].second] = true;
  }
  for (size_t v = 0; v < g.node_count(); ++v) {
    if (g.black(v) && !hit[v]) return false;
  }
  return true;
}

namespace {

void check_lambda(const Rational& lambda) {
  if (lambda <= Rational(0)) throw ValidationError("lambda must be positive");
}

// Number of covers of each cardinality.
std::vector<unsigned long long> covers_by_size(const BwGraph& g, size_t guard) {
  size_t e = g.edge_count();
  if (e > guard) throw ResourceError("brute force exceeds edge guard " + std::to_string(guard), e);
  std::vector<int> deg(g.node_count(), 0);
  std::vector<bool> in(e, false);
  long uncovered = 0;
  for (size_t v = 0; v < g.node_count(); ++v) uncovered += g.black(v);
  std::vector<unsigned long long> by_size(e + 1, 0);
  size_t size = 0;
  if (uncovered == 0) ++by_size[0];
  unsigned long long total = 1ULL << e;
  for (unsigned long long i = 1; i < total; ++i) {
    size_t bit = static_cast<size_t>(std::countr_zero(i));
    int d = in[bit] ? -1 : 1;
    in[bit] = !in[bit];
    size += d;
    for (size_t v : {g.edges()[bit].first, g.edges()[bit].second}) {
      if (!g.black(v)) continue;
      if (d > 0 && deg[v] == 0) --uncovered;
      deg[v] += d;
      if (d < 0 && deg[v] == 0) ++uncovered;
    }
    if (uncovered == 0) ++by_size[size];
  }
  return by_size;
}

Rational power(const Rational& b, long e) { return pow(b, static_cast<unsigned long>(e)); }

// The recursions over (k1, k2): k1 nodes of a layer deleted, k2 whitened.
class ClassBSolver {
 public:
  explicit ClassBSolver(const Rational& lambda) : mu_(Rational(1) + lambda) {}

  Rational solve(ClassB c) {
    Rational free = power(mu_, c.free_edges);
    if (c.v2 == 0 && c.v3 == 0) return free;
    if (c.v3 == 0) return free * power(power(mu_, c.v1) - 1, c.v2);
    if (c.v2 == 0) return free * power(power(mu_, c.v4) - 1, c.v3);
    if (c.v4 == 0 && c.v1 > 0) c = {c.v4, c.v3, c.v2, c.v1, c.free_edges};
    if (c.v1 == 0 && c.v4 == 0) return free * all_black(c.v2, c.v3);
    return free * right(c);
  }

  Rational all_black(long a, long b) {
    if (a == 0 || b == 0) return Rational(a == 0 && b == 0 ? 1 : 0);
    auto key = std::make_pair(a, b);
    auto it = ab_cache_.find(key);
    if (it != ab_cache_.end()) return it->second;
    ++calls;
    // Split on a regular edge {u,v}: whitening both leaves a class-B graph
    // with single-node outer layers.
    Rational v = mu_ * solve({1, a - 1, b - 1, 1, 0}) - all_black(a - 1, b) - all_black(a, b - 1) -
                 all_black(a - 1, b - 1);
    ab_cache_.emplace(key, v);
    return v;
  }

  unsigned long long calls = 0;

 private:
  // V3 nodes: whitening one leaves (q-1) free edges to V4.
  Rational right(const ClassB& c) {
    long n = c.v3;
    std::vector<std::vector<std::optional<Rational>>> cache(n + 1, std::vector<std::optional<Rational>>(n + 1));
    std::function<Rational(long, long)> r = [&](long k1, long k2) -> Rational {
      auto& slot = cache[k1][k2];
      if (slot) return *slot;
      ++calls;
      Rational v;
      if (k1 + k2 == n) {
        v = power(mu_, (c.v4 - 1) * k2) * left(c.v1 + k2, c.v2);
      } else {
        v = mu_ * r(k1, k2 + 1) - r(k1 + 1, k2);
      }
      slot = v;
      return v;
    };
    return r(0, 0);
  }

  // V2 nodes against `a` white neighbours each; a fresh cache per call.
  Rational left(long a, long m) {
    if (a == 0) {
      ++calls;
      return Rational(m == 0 ? 1 : 0);
    }
    std::vector<std::vector<std::optional<Rational>>> cache(m + 1, std::vector<std::optional<Rational>>(m + 1));
    std::function<Rational(long, long)> l = [&](long k1, long k2) -> Rational {
      auto& slot = cache[k1][k2];
      if (slot) return *slot;
      ++calls;
      Rational v;
      if (k1 + k2 == m) {
        v = power(mu_, (a - 1) * k2);
      } else {
        v = mu_ * l(k1, k2 + 1) - l(k1 + 1, k2);
      }
      slot = v;
      return v;
    };
    return l(0, 0);
  }

  Rational mu_;
  std::map<std::pair<long, long>, Rational> ab_cache_;
};

void check_classb(const ClassB& c) {
  if (c.v1 < 0 || c.v2 < 0 || c.v3 < 0 || c.v4 < 0 || c.free_edges < 0) {
    throw ValidationError("class-B layer sizes must be non-negative");
  }
}

}  // namespace

BigInt count_covers_bruteforce(const BwGraph& g, size_t guard) {
  BigInt total = 0;
  for (unsigned long long c : covers_by_size(g, guard)) total += BigInt(std::to_string(c));
  return total;
}

Rational partition_bruteforce(const BwGraph& g, const Rational& lambda, size_t guard) {
  check_lambda(lambda);
  std::vector<unsigned long long> by_size = covers_by_size(g, guard);
  Rational z(0), p(1);
  for (unsigned long long c : by_size) {
    z += p * Rational(BigInt(std::to_string(c)), 1);
    p *= lambda;
  }
  return z;
}

Rational partition_inclusion_exclusion(const BwGraph& g, const Rational& lambda, size_t guard) {
  check_lambda(lambda);
  std::vector<size_t> blacks;
  for (size_t v = 0; v < g.node_count(); ++v) {
    if (g.black(v)) blacks.push_back(v);
  }
  if (blacks.size() > guard) throw ResourceError("inclusion-exclusion exceeds guard " + std::to_string(guard), blacks.size());
  // Z = sum over S of (-1)^|S| (1+lambda)^(edges avoiding S).
  std::vector<long long> coeff(g.edge_count() + 1, 0);
  std::vector<int> touched(g.edge_count(), 0);
  std::vector<bool> in(blacks.size(), false);
  std::vector<std::vector<size_t>> incident(g.node_count());
  for (size_t i = 0; i < g.edge_count(); ++i) {
    incident[g.edges()[i].first].push_back(i);
    incident[g.edges()[i].second].push_back(i);
  }
  size_t avoiding = g.edge_count(), size = 0;
  coeff[avoiding] += 1;
  unsigned long long total = 1ULL << blacks.size();
  for (unsigned long long i = 1; i < total; ++i) {
    size_t bit = static_cast<size_t>(std::countr_zero(i));
    int d = in[bit] ? -1 : 1;
    in[bit] = !in[bit];
    size += d;
    for (size_t e : incident[blacks[bit]]) {
      if (d > 0 && touched[e]++ == 0) --avoiding;
      if (d < 0 && --touched[e] == 0) ++avoiding;
    }
    coeff[avoiding] += size % 2 ? -1 : 1;
  }
  Rational mu = Rational(1) + lambda, z(0), p(1);
  for (long long c : coeff) {
    z += p * Rational(c);
    p *= mu;
  }
  return z;
}

BwGraph classb_graph(const ClassB& c) {
  check_classb(c);
  BwGraph g;
  std::vector<size_t> layer[4];
  const long sizes[4] = {c.v1, c.v2, c.v3, c.v4};
  for (int l = 0; l < 4; ++l) {
    for (long i = 1; i <= sizes[l]; ++i) {
      layer[l].push_back(g.add_node(l == 1 || l == 2, "v" + std::to_string(l + 1) + "_" + std::to_string(i)));
    }
  }
  for (int l = 0; l < 3; ++l) {
    for (size_t u : layer[l]) {
      for (size_t v : layer[l + 1]) g.add_edge(u, v);
    }
  }
  // Free edges as disjoint white pairs.
  for (long i = 1; i <= c.free_edges; ++i) {
    size_t a = g.add_node(false, "f" + std::to_string(i) + "a");
    size_t b = g.add_node(false, "f" + std::to_string(i) + "b");
    g.add_edge(a, b);
  }
  return g;
}

unsigned long long classb_call_bound(const ClassB& c) {
  if (c.v1 == 0 && c.v4 == 0 && c.v2 > 0 && c.v3 > 0) {
    // All-black split: one state per (i, j), each solving class B (1, i-1, j-1, 1).
    unsigned long long total = 0;
    for (long i = 1; i <= c.v2; ++i) {
      for (long j = 1; j <= c.v3; ++j) total += 1 + classb_call_bound({1, i - 1, j - 1, 1});
    }
    return total;
  }
  unsigned long long n = c.v3, m = c.v2;
  if (c.v4 == 0 && c.v1 > 0) std::swap(n, m);
  return (n + 1) * (n + 2) / 2 + (n + 1) * (m + 1) * (m + 2) / 2;
}

Partition partition_classB(const ClassB& c, const Rational& lambda) {
  check_classb(c);
  check_lambda(lambda);
  ClassBSolver s(lambda);
  Rational v = s.solve(c);
  return {v, s.calls};
}

CoverCount count_covers_classB(const ClassB& c) {
  Partition p = partition_classB(c, Rational(1));
  return {p.value.num(), p.calls};
}

Partition partition_all_black_bipartite(long a, long b, const Rational& lambda) {
  if (a < 0 || b < 0) throw ValidationError("bipartite side sizes must be non-negative");
  check_lambda(lambda);
  ClassBSolver s(lambda);
  Rational v = s.all_black(a, b);
  return {v, s.calls};
}

BigInt count_covers_all_black_bipartite(long a, long b) {
  return partition_all_black_bipartite(a, b, Rational(1)).value.num();
}

std::optional<ClassB> recognize_classB(const BwGraph& g) {
  ClassB c;
  std::vector<size_t> blacks;
  for (size_t v = 0; v < g.node_count(); ++v) {
    if (g.black(v)) blacks.push_back(v);
  }
  for (const auto& [u, v] : g.edges()) {
    if (!g.black(u) && !g.black(v)) ++c.free_edges;
  }
  auto black_neighbors = [&](size_t v) {
    std::set<size_t> out;
    for (size_t w : g.neighbors(v)) {
      if (g.black(w)) out.insert(w);
    }
    return out;
  };
  if (blacks.empty()) return c;
  // Two-colour the black subgraph from the first black node.
  std::vector<int> side(g.node_count(), -1);
  std::vector<size_t> stack{blacks[0]};
  side[blacks[0]] = 0;
  while (!stack.empty()) {
    size_t v = stack.back();
    stack.pop_back();
    for (size_t w : black_neighbors(v)) {
      if (side[w] < 0) {
        side[w] = 1 - side[v];
        stack.push_back(w);
      } else if (side[w] == side[v]) {
        return std::nullopt;
      }
    }
  }
  std::set<size_t> x, y;
  for (size_t v : blacks) {
    if (side[v] < 0) return std::nullopt;
    (side[v] == 0 ? x : y).insert(v);
  }
  if (y.empty()) {
    // A single black node without black neighbours sits alone in V3.
    if (x.size() != 1) return std::nullopt;
    std::swap(x, y);
  }
  for (size_t v : x) {
    if (black_neighbors(v) != y) return std::nullopt;
  }
  for (size_t v : y) {
    if (black_neighbors(v) != x) return std::nullopt;
  }
  c.v2 = static_cast<long>(x.size());
  c.v3 = static_cast<long>(y.size());
  for (size_t v = 0; v < g.node_count(); ++v) {
    if (g.black(v)) continue;
    std::set<size_t> nb = black_neighbors(v);
    if (nb.empty()) continue;
    if (!x.empty() && nb == x) {
      ++c.v1;
    } else if (nb == y) {
      ++c.v4;
    } else {
      return std::nullopt;
    }
  }
  return c;
}

Partition partition_function(const BwGraph& g, const Rational& lambda) {
  check_lambda(lambda);
  if (auto c = recognize_classB(g)) return partition_classB(*c, lambda);
  // Without black-black edges every dangling edge belongs to one black node.
  bool regular = false;
  for (const auto& [u, v] : g.edges()) regular = regular || (g.black(u) && g.black(v));
  if (!regular) {
    Rational mu = Rational(1) + lambda, z(1);
    for (size_t v = 0; v < g.node_count(); ++v) {
      z *= g.black(v) ? pow(mu, g.neighbors(v).size()) - Rational(1) : Rational(1);
    }
    for (const auto& [u, v] : g.edges()) {
      if (!g.black(u) && !g.black(v)) z *= mu;
    }
    return {z, 0};
  }
  throw UnsupportedError("graph is not class B or a recognized special case; use the brute-force oracle");
}

CoverCount count_covers(const BwGraph& g) {
  Partition p = partition_function(g, Rational(1));
  return {p.value.num(), p.calls};
}

std::vector<std::pair<long, long>> min_edge_cover_bipartite_complete(long a, long b) {
  if (a < 0 || b < 0) throw ValidationError("side sizes must be non-negative");
  if ((a == 0) != (b == 0)) throw ValidationError("demands are uncoverable: one side is empty");
  std::vector<std::pair<long, long>> out;
  if (a == 0) return out;
  if (a <= b) {
    for (long j = 1; j <= b - a + 1; ++j) out.push_back({1, j});
    for (long i = 2; i <= a; ++i) out.push_back({i, b - a + i});
  } else {
    for (long i = 1; i <= a - b + 1; ++i) out.push_back({i, 1});
    for (long j = 2; j <= b; ++j) out.push_back({a - b + j, j});
  }
  return out;
}

std::vector<bool> glauber_sample(const BwGraph& g, const Rational& lambda, unsigned long long steps,
                                 uint64_t seed, const CoverObserver& observer) {
  check_lambda(lambda);
  size_t e = g.edge_count();
  std::vector<bool> in(e, true);
  if (!is_cover(g, in)) throw ValidationError("graph has no edge cover");
  if (e == 0) return in;
  std::vector<int> deg(g.node_count(), 0);
  for (const auto& [u, v] : g.edges()) {
    ++deg[u];
    ++deg[v];
  }
  // Add with probability lambda/(1+lambda) = p/(p+q): accept iff a uniform
  // 64-bit draw is below ceil(p * 2^64 / (p+q)).
  BigInt p = lambda.num(), q = lambda.den();
  BigInt scaled = p * pow2(64);
  BigInt t = (scaled + (p + q) - 1) / (p + q);
  static_assert(sizeof(unsigned long) == 8, "64-bit unsigned long required");
  bool always_add = t >= pow2(64);
  uint64_t threshold = always_add ? 0 : t.get_ui();
  std::mt19937_64 gen(seed);
  // Rejection sampling keeps the edge index exactly uniform.
  uint64_t limit = UINT64_MAX - (UINT64_MAX % e + 1) % e;
  for (unsigned long long s = 0; s < steps; ++s) {
    uint64_t x;
    do {
      x = gen();
    } while (x > limit);
    size_t i = static_cast<size_t>(x % e);
    bool add = always_add || gen() < threshold;
    auto [u, v] = g.edges()[i];
    if (add) {
      if (!in[i]) {
        in[i] = true;
        ++deg[u];
        ++deg[v];
      }
    } else if (in[i] && (!g.black(u) || deg[u] > 1) && (!g.black(v) || deg[v] > 1)) {
      in[i] = false;
      --deg[u];
      --deg[v];
    }
    if (observer) observer(in);
  }
  return in;
}

BwGraph parse_bwg(const std::string& text) {
  BwGraph g;
  std::istringstream lines(text);
  std::string line;
  int lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::vector<std::pair<std::string, int>> toks;
    for (size_t i = 0; i < line.size();) {
      if (std::isspace(static_cast<unsigned char>(line[i]))) {
        ++i;
        continue;
      }
      size_t j = i;
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
      toks.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
      i = j;
    }
    if (toks.empty()) continue;
    const std::string& kw = toks[0].first;
    auto fail = [&](const std::string& what, size_t tok) {
      int col = tok < toks.size() ? toks[tok].second : static_cast<int>(line.size()) + 1;
      throw FormatError(what, lineno, col);
    };
    try {
      if (kw == "node") {
        if (toks.size() != 3) fail("expected 'node ID black|white'", 0);
        const std::string& color = toks[2].first;
        if (color != "black" && color != "white") fail("colour must be black or white", 2);
        if (g.find(toks[1].first)) fail("duplicate node '" + toks[1].first + "'", 1);
        g.add_node(color == "black", toks[1].first);
      } else if (kw == "edge") {
        if (toks.size() != 3) fail("expected 'edge ID ID'", 0);
        auto u = g.find(toks[1].first), v = g.find(toks[2].first);
        if (!u) fail("unknown node '" + toks[1].first + "'", 1);
        if (!v) fail("unknown node '" + toks[2].first + "'", 2);
        g.add_edge(*u, *v);
      } else if (kw == "classB") {
        if (toks.size() != 5) fail("expected 'classB k1 m n k2'", 0);
        long sz[4];
        for (int k = 0; k < 4; ++k) {
          const std::string& s = toks[k + 1].first;
          if (s.empty() || !std::all_of(s.begin(), s.end(), ::isdigit) || s.size() > 6) {
            fail("layer size must be a small non-negative integer", k + 1);
          }
          sz[k] = std::stol(s);
        }
        if (g.node_count() > 0) fail("classB must be the only statement", 0);
        g = classb_graph({sz[0], sz[1], sz[2], sz[3], 0});
      } else {
        fail("unknown statement '" + kw + "'", 0);
      }
    } catch (const FormatError&) {
      throw;
    } catch (const ValidationError& ex) {
      throw FormatError(ex.what(), lineno, toks[0].second);
    }
  }
  return g;
}

std::string render_bwg(const BwGraph& g) {
  std::ostringstream out;
  for (size_t v = 0; v < g.node_count(); ++v) {
    out << "node " << g.name(v) << (g.black(v) ? " black\n" : " white\n");
  }
  for (const auto& [u, v] : g.edges()) out << "edge " << g.name(u) << " " << g.name(v) << "\n";
  return out.str();
}

}  // namespace relbn
