#include "relbn/dllite.hpp"

#include <functional>

#include "relbn/edgecover.hpp"
#include "relbn/errors.hpp"
#include "relbn/ground.hpp"
#include "relbn/infer.hpp"

namespace relbn {

namespace {

bool dllite_label(const RelationalSpec& spec) {
  FragmentLabel l = classify_fragment(spec);
  return l.kind == FragmentLabel::Kind::DLLiteNF || l.kind == FragmentLabel::Kind::DLLiteNFWithPrimitiveNegation;
}

// e(x) := exists y: r(x,y), or r(y,x) when `inverse`, with any variable names.
bool is_aux_definition(const Entry& e, const std::string& role, bool inverse) {
  if (!e.is_definition() || e.head.size() != 1 || e.body.op() != Op::Exists) return false;
  const Formula& a = e.body.kid(0);
  if (a.op() != Op::Atom || a.name() != role || a.terms().size() != 2) return false;
  Term x = Term::variable(e.head[0]), y = Term::variable(e.body.name());
  if (e.head[0] == e.body.name()) return false;
  return inverse ? a.terms()[0] == y && a.terms()[1] == x : a.terms()[0] == x && a.terms()[1] == y;
}

std::string fresh_aux(const RelationalSpec& spec, const std::string& base, const std::string& role, bool inverse,
                      const std::set<std::string>& taken, bool& reuse) {
  for (int k = 0;; ++k) {
    std::string name = k == 0 ? base : base + "_" + std::to_string(k);
    if (taken.count(name)) continue;
    const Entry* e = spec.entry(name);
    if (!spec.has(name) && !e) {
      reuse = false;
      return name;
    }
    if (e && is_aux_definition(*e, role, inverse)) {
      reuse = true;
      return name;
    }
  }
}

Formula rewrite(const Formula& f, const NormalizedDllite& nd) {
  if (f.op() == Op::Exists && f.kid(0).op() == Op::Atom && f.kid(0).terms().size() == 2) {
    const Formula& a = f.kid(0);
    auto it = nd.aux.find(a.name());
    Term y = Term::variable(f.name());
    if (it != nd.aux.end()) {
      if (a.terms()[1] == y && !(a.terms()[0] == y)) return Formula::atom(it->second.first, {a.terms()[0]});
      if (a.terms()[0] == y && !(a.terms()[1] == y)) return Formula::atom(it->second.second, {a.terms()[1]});
    }
  }
  if (f.op() == Op::And) {
    std::vector<Formula> ks;
    for (const Formula& k : f.kids()) ks.push_back(rewrite(k, nd));
    return Formula::conj(ks);
  }
  if (f.op() == Op::Not) return Formula::negate(rewrite(f.kid(0), nd));
  return f;
}

// Demands collected from positive assignments.
struct Propagation {
  bool consistent = true;
  std::map<GroundAtom, bool> primitive;
  std::map<std::string, RoleReduction> roles;
  unsigned long long steps = 0;
};

struct AuxRef {
  std::string role;
  bool inverse;
};

std::map<std::string, AuxRef> aux_index(const NormalizedDllite& nd) {
  std::map<std::string, AuxRef> out;
  for (const auto& [r, names] : nd.aux) {
    out[names.first] = {r, false};
    out[names.second] = {r, true};
  }
  return out;
}

// Rejects assignments outside the positive fragment.
void check_literal(const NormalizedDllite& nd, const std::map<std::string, AuxRef>& aux, const Literal& l, long n) {
  check_atom(nd.spec, n, l.atom);
  if (l.value) return;
  const Relation* r = nd.spec.relation(l.atom.rel);
  if (r->arity == 2) throw UnsupportedError("negative role assignment " + l.atom.str() + " is outside the DLLite engine");
  if (aux.count(l.atom.rel) || !nd.spec.is_root(l.atom.rel)) {
    throw UnsupportedError("negative assignment to defined atom " + l.atom.str() + " is outside the DLLite engine");
  }
}

Propagation propagate(const NormalizedDllite& nd, const std::map<std::string, AuxRef>& aux,
                      const std::vector<Literal>& literals) {
  Propagation p;
  for (const std::string& r : nd.roles) {
    RoleReduction rr;
    rr.role = r;
    rr.alpha = nd.spec.entry(r)->prob;
    p.roles[r] = rr;
  }
  std::set<GroundAtom> expanded;
  std::vector<Literal> stack(literals.rbegin(), literals.rend());
  while (!stack.empty() && p.consistent) {
    Literal l = stack.back();
    stack.pop_back();
    ++p.steps;
    const GroundAtom& a = l.atom;
    if (a.args.size() == 2) {
      p.roles[a.rel].forced.insert({a.args[0], a.args[1]});
      continue;
    }
    if (auto it = aux.find(a.rel); it != aux.end()) {
      RoleReduction& rr = p.roles[it->second.role];
      (it->second.inverse ? rr.demand_inv : rr.demand).insert(a.args[0]);
      continue;
    }
    const Entry* e = nd.spec.entry(a.rel);
    if (!e->is_definition()) {
      auto [slot, fresh] = p.primitive.insert({a, l.value});
      if (!fresh && slot->second != l.value) p.consistent = false;
      continue;
    }
    if (!expanded.insert(a).second) continue;
    Term x = Term::individual(a.args[0]);
    std::function<void(const Formula&, bool)> walk = [&](const Formula& f, bool value) {
      ++p.steps;
      switch (f.op()) {
        case Op::Atom:
          stack.push_back({GroundAtom{f.name(), {x.ind}}, value});
          return;
        case Op::Not:
          walk(f.kid(0), !value);
          return;
        case Op::And:
          for (const Formula& k : f.kids()) walk(k, value);
          return;
        case Op::True:
          return;
        default:
          throw UnsupportedError("body of " + a.rel + " is not a normalized DLLite concept");
      }
    };
    walk(e->body, true);
  }
  return p;
}

Rational mass(const NormalizedDllite& nd, const Propagation& p, long n, unsigned long long& work) {
  if (!p.consistent) return Rational(0);
  Rational v(1);
  for (const auto& [a, value] : p.primitive) {
    const Rational& alpha = nd.spec.entry(a.rel)->prob;
    v *= value ? alpha : Rational(1) - alpha;
  }
  for (const auto& [r, rr] : p.roles) {
    ++work;
    v *= role_factor(rr, n);
  }
  return v;
}

std::vector<Literal> merged(const Query& q) {
  std::vector<Literal> all = q.q;
  all.insert(all.end(), q.e.begin(), q.e.end());
  return all;
}

}  // namespace

NormalizedDllite normalize(const RelationalSpec& spec) {
  require_valid(spec);
  if (!dllite_label(spec)) throw UnsupportedError("specification is not in the DLLite fragment");
  NormalizedDllite nd;
  std::set<std::string> taken;
  std::vector<std::pair<std::string, bool>> added;  // (name, inverse) needing a definition
  for (const Relation& r : spec.relations) {
    if (r.arity != 2) continue;
    nd.roles.push_back(r.name);
    bool reuse_f = false, reuse_i = false;
    std::string f = fresh_aux(spec, "e_" + r.name, r.name, false, taken, reuse_f);
    taken.insert(f);
    std::string i = fresh_aux(spec, "e_" + r.name + "_inv", r.name, true, taken, reuse_i);
    taken.insert(i);
    nd.aux[r.name] = {f, i};
  }
  std::set<std::string> aux_names = taken;
  for (const Relation& r : spec.relations) nd.spec.declare(r.name, r.arity);
  for (const Entry& e : spec.entries) {
    if (!e.is_definition() || aux_names.count(e.rel)) {
      nd.spec.entries.push_back(e);
      continue;
    }
    nd.spec.entries.push_back(Entry::definition(e.rel, e.head, rewrite(e.body, nd)));
  }
  for (const std::string& r : nd.roles) {
    const auto& [f, i] = nd.aux.at(r);
    if (!spec.has(f)) {
      nd.spec.add(Entry::definition(f, {"x"}, Formula::exists("y", Formula::atom(r, {Term::variable("x"), Term::variable("y")}))), 1);
    }
    if (!spec.has(i)) {
      nd.spec.add(Entry::definition(i, {"x"}, Formula::exists("y", Formula::atom(r, {Term::variable("y"), Term::variable("x")}))), 1);
    }
  }
  return nd;
}

Rational role_factor(const RoleReduction& r, long n) {
  const Rational& alpha = r.alpha;
  bool demands = !r.demand.empty() || !r.demand_inv.empty() || !r.forced.empty();
  if (alpha.is_zero()) return Rational(demands ? 0 : 1);
  if (alpha == Rational(1)) return Rational(1);
  // Forced groundings already satisfy their endpoints' demands.
  std::set<long> d = r.demand, dinv = r.demand_inv;
  for (const auto& [a, b] : r.forced) {
    d.erase(a);
    dinv.erase(b);
  }
  long v2 = static_cast<long>(d.size()), v3 = static_cast<long>(dinv.size());
  ClassB c{n - v3, v2, v3, n - v2, 0};
  Rational one_minus = Rational(1) - alpha;
  Rational lambda = alpha / one_minus;
  long edges = c.v1 * c.v2 + c.v2 * c.v3 + c.v3 * c.v4;
  Rational z = partition_classB(c, lambda).value;
  return z * pow(one_minus, static_cast<unsigned long>(edges)) * pow(alpha, r.forced.size());
}

bool dllite_applies(const RelationalSpec& spec, const std::vector<Literal>& literals) {
  if (!validate_spec(spec).ok() || !dllite_label(spec)) return false;
  NormalizedDllite nd = normalize(spec);
  std::map<std::string, AuxRef> aux = aux_index(nd);
  for (const Literal& l : literals) {
    const Relation* r = nd.spec.relation(l.atom.rel);
    if (!r || static_cast<size_t>(r->arity) != l.atom.args.size()) return false;
    if (l.value) continue;
    if (r->arity == 2 || aux.count(l.atom.rel) || !nd.spec.is_root(l.atom.rel)) return false;
  }
  return true;
}

Rational infer_positive(const RelationalSpec& spec, long n, const Query& query, unsigned long long* work) {
  if (n < 1) throw ValidationError("domain size must be positive");
  NormalizedDllite nd = normalize(spec);
  std::map<std::string, AuxRef> aux = aux_index(nd);
  std::vector<Literal> all = merged(query);
  for (const Literal& l : all) check_literal(nd, aux, l, n);
  unsigned long long w = 0;
  Propagation joint = propagate(nd, aux, all);
  Propagation ev = propagate(nd, aux, query.e);
  w += joint.steps + ev.steps;
  Rational pj = mass(nd, joint, n, w);
  Rational pe = mass(nd, ev, n, w);
  if (work) *work = w;
  if (pe.is_zero()) throw ZeroEvidence();
  return pj / pe;
}

MpeResult mpe(const RelationalSpec& spec, long n, const std::vector<Literal>& evidence) {
  if (n < 1) throw ValidationError("domain size must be positive");
  NormalizedDllite nd = normalize(spec);
  std::map<std::string, AuxRef> aux = aux_index(nd);
  for (const Literal& l : evidence) check_literal(nd, aux, l, n);
  Propagation p = propagate(nd, aux, evidence);

  GroundNetwork net = ground_spec(nd.spec, n);
  std::vector<bool> values(net.size(), false);
  auto set = [&](const GroundAtom& a, bool v) { values[*net.find(a)] = v; };
  const Rational half(BigInt(1), BigInt(2));
  for (const GroundNode& g : net.nodes()) {
    if (g.root && g.atom.args.size() <= 1) set(g.atom, g.prob >= half);
  }
  if (p.consistent) {
    for (const auto& [a, v] : p.primitive) set(a, v);
  }
  for (const auto& [r, rr] : p.roles) {
    if (rr.alpha >= half) {
      for (long a = 1; a <= n; ++a) {
        for (long b = 1; b <= n; ++b) set({r, {a, b}}, true);
      }
      continue;
    }
    if (!p.consistent) continue;
    for (const auto& [a, b] : rr.forced) set({r, {a, b}}, true);
    std::set<long> d = rr.demand, dinv = rr.demand_inv;
    for (const auto& [a, b] : rr.forced) {
      d.erase(a);
      dinv.erase(b);
    }
    std::vector<long> rows(d.begin(), d.end()), cols(dinv.begin(), dinv.end());
    if (!rows.empty() && !cols.empty()) {
      for (const auto& [i, j] : min_edge_cover_bipartite_complete(static_cast<long>(rows.size()), static_cast<long>(cols.size()))) {
        set({r, {rows[i - 1], cols[j - 1]}}, true);
      }
    } else {
      for (long a : rows) set({r, {a, 1}}, true);
      for (long b : cols) set({r, {1, b}}, true);
    }
  }
  // Defined atoms follow from their bodies.
  for (size_t i : net.topological_order()) {
    const GroundNode& g = net.node(i);
    if (g.root) continue;
    values[i] = evaluate(g.body, {}, n, [&](const std::string& rel, const std::vector<long>& args) {
      return static_cast<bool>(values[*net.find(GroundAtom{rel, args})]);
    });
  }
  MpeResult out;
  for (size_t i = 0; i < net.size(); ++i) out.assignment[net.node(i).atom] = values[i];
  bool satisfied = p.consistent;
  for (const Literal& l : evidence) satisfied = satisfied && out.assignment.at(l.atom) == l.value;
  out.inconsistent = !satisfied;
  out.prob = satisfied ? joint_probability(net, values) : Rational(0);
  return out;
}

}  // namespace relbn
