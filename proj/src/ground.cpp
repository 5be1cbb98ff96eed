#include "relbn/ground.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>

#include "relbn/errors.hpp"

namespace relbn {

namespace {

long resolve(const Term& t, const Binding& b, long n) {
  long v = t.ind;
  if (t.is_var) {
    auto it = b.find(t.var);
    if (it == b.end()) throw ValidationError("unbound logvar '" + t.var + "'");
    v = it->second;
  }
  if (v < 1 || v > n) throw ValidationError("individual " + std::to_string(v) + " outside 1.." + std::to_string(n));
  return v;
}

Formula ground_rec(const Formula& f, Binding& b, long n) {
  switch (f.op()) {
    case Op::True:
    case Op::False:
      return f;
    case Op::Eq:
      return Formula::constant(resolve(f.terms()[0], b, n) == resolve(f.terms()[1], b, n));
    case Op::Atom: {
      std::vector<Term> args;
      for (const Term& t : f.terms()) args.push_back(Term::individual(resolve(t, b, n)));
      return Formula::atom(f.name(), args);
    }
    case Op::ForAll:
    case Op::Exists: {
      const std::string& v = f.name();
      auto it = b.find(v);
      bool had = it != b.end();
      long saved = had ? it->second : 0;
      std::vector<Formula> ks;
      for (long i = 1; i <= n; ++i) {
        b[v] = i;
        ks.push_back(ground_rec(f.kid(0), b, n));
      }
      if (had) {
        b[v] = saved;
      } else {
        b.erase(v);
      }
      if (ks.size() == 1) return ks[0];
      return f.op() == Op::ForAll ? Formula::conj(ks) : Formula::disj(ks);
    }
    default: {
      std::vector<Formula> ks;
      for (const Formula& k : f.kids()) ks.push_back(ground_rec(k, b, n));
      switch (f.op()) {
        case Op::Not: return Formula::negate(ks[0]);
        case Op::And: return Formula::conj(ks);
        case Op::Or: return Formula::disj(ks);
        case Op::Implies: return Formula::implies(ks[0], ks[1]);
        default: return Formula::iff(ks[0], ks[1]);
      }
    }
  }
}

unsigned long long node_count(const RelationalSpec& spec, long n, unsigned long long cap) {
  unsigned long long total = 0;
  for (const Relation& r : spec.relations) {
    unsigned long long c = 1;
    for (int i = 0; i < r.arity; ++i) {
      c *= static_cast<unsigned long long>(n);
      if (c > cap) return cap + 1;
    }
    total += c;
    if (total > cap) return cap + 1;
  }
  return total;
}

void add_node(GroundNetwork& net, const RelationalSpec& spec, const Entry& e, const GroundAtom& a, long n) {
  if (!e.is_definition()) {
    net.add_root(a, e.prob);
    return;
  }
  Binding b;
  for (size_t i = 0; i < e.head.size(); ++i) b[e.head[i]] = a.args[i];
  net.add_defined(a, ground_rec(e.body, b, n));
  (void)spec;
}

void collect_atoms(const Formula& f, std::vector<GroundAtom>& out) {
  if (f.op() == Op::Atom) {
    GroundAtom a{f.name(), {}};
    for (const Term& t : f.terms()) a.args.push_back(t.ind);
    out.push_back(std::move(a));
  }
  for (const Formula& k : f.kids()) collect_atoms(k, out);
}

}  // namespace

Formula ground_formula(const Formula& body, const Binding& binding, long n) {
  if (n < 1) throw ValidationError("domain size must be positive");
  Binding b = binding;
  return ground_rec(body, b, n);
}

void check_atom(const RelationalSpec& spec, long n, const GroundAtom& a) {
  const Relation* r = spec.relation(a.rel);
  if (!r) throw ValidationError("unknown relation in query: " + a.rel);
  if (static_cast<size_t>(r->arity) != a.args.size()) {
    throw ValidationError("atom " + a.str() + " does not match arity " + std::to_string(r->arity));
  }
  for (long x : a.args) {
    if (x < 1 || x > n) throw ValidationError("atom " + a.str() + " outside domain 1.." + std::to_string(n));
  }
}

GroundNetwork ground_spec(const RelationalSpec& spec, long n, const GroundOptions& opts) {
  if (n < 1) throw ValidationError("domain size must be positive");
  require_valid(spec);
  unsigned long long count = node_count(spec, n, opts.node_cap);
  if (count > opts.node_cap) {
    throw ResourceError("grounding exceeds node cap " + std::to_string(opts.node_cap), count);
  }
  GroundNetwork net;
  net.domain_size = n;
  for (const Relation& r : spec.relations) {
    const Entry* e = spec.entry(r.name);
    std::vector<long> args(r.arity, 1);
    while (true) {
      add_node(net, spec, *e, GroundAtom{r.name, args}, n);
      int i = r.arity - 1;
      while (i >= 0 && args[i] == n) args[i--] = 1;
      if (i < 0) break;
      ++args[i];
    }
  }
  return net;
}

GroundNetwork relevant_subnetwork(const GroundNetwork& net, const std::vector<GroundAtom>& atoms) {
  std::vector<bool> keep(net.size(), false);
  std::deque<size_t> work;
  for (const GroundAtom& a : atoms) {
    auto i = net.find(a);
    if (!i) throw ValidationError("query atom " + a.str() + " is not a node of the network");
    if (!keep[*i]) {
      keep[*i] = true;
      work.push_back(*i);
    }
  }
  while (!work.empty()) {
    size_t v = work.front();
    work.pop_front();
    for (size_t p : net.parents(v)) {
      if (!keep[p]) {
        keep[p] = true;
        work.push_back(p);
      }
    }
  }
  GroundNetwork out;
  out.domain_size = net.domain_size;
  for (size_t i = 0; i < net.size(); ++i) {
    if (!keep[i]) continue;
    const GroundNode& g = net.node(i);
    if (g.root) {
      out.add_root(g.atom, g.prob);
    } else {
      out.add_defined(g.atom, g.body);
    }
  }
  return out;
}

GroundNetwork relevant_subnetwork(const GroundNetwork& net, const Query& query) {
  return relevant_subnetwork(net, query.atoms());
}

GroundNetwork ground_for_query(const RelationalSpec& spec, long n, const std::vector<GroundAtom>& atoms,
                               const GroundOptions& opts) {
  if (n < 1) throw ValidationError("domain size must be positive");
  require_valid(spec);
  std::map<std::string, size_t> order;
  for (size_t i = 0; i < spec.relations.size(); ++i) order[spec.relations[i].name] = i;
  auto less = [&](const GroundAtom& a, const GroundAtom& b) {
    size_t oa = order.at(a.rel), ob = order.at(b.rel);
    return oa != ob ? oa < ob : a.args < b.args;
  };
  std::map<GroundAtom, Formula, decltype(less)> found(less);
  std::deque<GroundAtom> work;
  for (const GroundAtom& a : atoms) {
    check_atom(spec, n, a);
    if (found.emplace(a, Formula::top()).second) work.push_back(a);
  }
  while (!work.empty()) {
    GroundAtom a = work.front();
    work.pop_front();
    const Entry* e = spec.entry(a.rel);
    if (!e->is_definition()) continue;
    Binding b;
    for (size_t i = 0; i < e->head.size(); ++i) b[e->head[i]] = a.args[i];
    Formula body = ground_rec(e->body, b, n);
    found[a] = body;
    std::vector<GroundAtom> refs;
    collect_atoms(body, refs);
    for (GroundAtom& r : refs) {
      if (found.emplace(r, Formula::top()).second) {
        if (found.size() > opts.node_cap) {
          throw ResourceError("grounding exceeds node cap " + std::to_string(opts.node_cap), found.size());
        }
        work.push_back(std::move(r));
      }
    }
  }
  GroundNetwork net;
  net.domain_size = n;
  for (const auto& [a, body] : found) {
    const Entry* e = spec.entry(a.rel);
    if (e->is_definition()) {
      net.add_defined(a, body);
    } else {
      net.add_root(a, e->prob);
    }
  }
  return net;
}

}  // namespace relbn
