#include "relbn/infer.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>

#include "relbn/dllite.hpp"
#include "relbn/errors.hpp"

namespace relbn {

size_t default_root_cap() {
  if (const char* s = std::getenv("RELBN_ROOT_CAP")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(s, &end, 10);
    if (end != s && *end == '\0') return v;
  }
  return 24;
}

Engine parse_engine(const std::string& name) {
  if (name == "auto") return Engine::Auto;
  if (name == "bruteforce") return Engine::BruteForce;
  if (name == "positive-product") return Engine::PositiveProduct;
  if (name == "qf-pruned") return Engine::QfPruned;
  if (name == "dllite") return Engine::DLLite;
  throw ValidationError("unknown engine '" + name + "'");
}

std::string engine_name(Engine e) {
  switch (e) {
    case Engine::Auto: return "auto";
    case Engine::BruteForce: return "bruteforce";
    case Engine::PositiveProduct: return "positive-product";
    case Engine::QfPruned: return "qf-pruned";
    case Engine::DLLite: return "dllite";
  }
  return "?";
}

namespace {

// Postfix program for one ground body.
struct Instr {
  enum Code : uint8_t { Push, Const, Not, And, Or, Implies, Iff } code;
  uint32_t arg;
};

class Evaluator {
 public:
  explicit Evaluator(const GroundNetwork& net) : net_(net) {
    for (size_t i : net.topological_order()) {
      if (net.node(i).root) continue;
      order_.push_back(i);
      std::vector<Instr> code;
      compile(net.node(i).body, code);
      code_.push_back(std::move(code));
    }
  }

  // Fills in defined nodes from the root values already in `v`.
  void run(std::vector<char>& v) const {
    for (size_t k = 0; k < order_.size(); ++k) v[order_[k]] = exec(code_[k], v);
  }

  // True when every defined node equals its body under `v`.
  bool consistent(const std::vector<char>& v) const {
    for (size_t k = 0; k < order_.size(); ++k) {
      if (v[order_[k]] != exec(code_[k], v)) return false;
    }
    return true;
  }

 private:
  void compile(const Formula& f, std::vector<Instr>& out) const {
    switch (f.op()) {
      case Op::True: out.push_back({Instr::Const, 1}); return;
      case Op::False: out.push_back({Instr::Const, 0}); return;
      case Op::Eq: {
        const Term& a = f.terms()[0];
        const Term& b = f.terms()[1];
        if (a.is_var || b.is_var) throw ValidationError("logvar in ground body");
        out.push_back({Instr::Const, a.ind == b.ind ? 1u : 0u});
        return;
      }
      case Op::Atom: {
        GroundAtom a{f.name(), {}};
        for (const Term& t : f.terms()) {
          if (t.is_var) throw ValidationError("logvar in ground body");
          a.args.push_back(t.ind);
        }
        auto j = net_.find(a);
        if (!j) throw ValidationError("ground body references unknown atom " + a.str());
        out.push_back({Instr::Push, static_cast<uint32_t>(*j)});
        return;
      }
      case Op::ForAll:
      case Op::Exists:
        throw ValidationError("quantifier in ground body");
      default:
        for (const Formula& k : f.kids()) compile(k, out);
        switch (f.op()) {
          case Op::Not: out.push_back({Instr::Not, 1}); break;
          case Op::And: out.push_back({Instr::And, static_cast<uint32_t>(f.kids().size())}); break;
          case Op::Or: out.push_back({Instr::Or, static_cast<uint32_t>(f.kids().size())}); break;
          case Op::Implies: out.push_back({Instr::Implies, 2}); break;
          default: out.push_back({Instr::Iff, 2}); break;
        }
    }
  }

  static char exec(const std::vector<Instr>& code, const std::vector<char>& v) {
    thread_local std::vector<char> st;
    st.clear();
    for (const Instr& in : code) {
      switch (in.code) {
        case Instr::Push: st.push_back(v[in.arg]); break;
        case Instr::Const: st.push_back(static_cast<char>(in.arg)); break;
        case Instr::Not: st.back() = !st.back(); break;
        case Instr::And:
        case Instr::Or: {
          bool is_and = in.code == Instr::And;
          char r = is_and ? 1 : 0;
          for (uint32_t k = 0; k < in.arg; ++k) {
            char x = st.back();
            st.pop_back();
            r = is_and ? (r && x) : (r || x);
          }
          st.push_back(r);
          break;
        }
        case Instr::Implies:
        case Instr::Iff: {
          char b = st.back();
          st.pop_back();
          char a = st.back();
          st.back() = in.code == Instr::Implies ? (!a || b) : (a == b);
          break;
        }
      }
    }
    return st.back();
  }

  const GroundNetwork& net_;
  std::vector<size_t> order_;
  std::vector<std::vector<Instr>> code_;
};

struct Target {
  size_t node;
  bool value;
};

std::vector<Target> targets(const GroundNetwork& net, const std::vector<Literal>& ls) {
  std::vector<Target> out;
  for (const Literal& l : ls) {
    auto i = net.find(l.atom);
    if (!i) throw ValidationError("query atom " + l.atom.str() + " is not a node of the network");
    out.push_back({*i, l.value});
  }
  return out;
}

}  // namespace

Rational joint_probability(const GroundNetwork& net, const std::vector<bool>& values) {
  if (values.size() != net.size()) throw ValidationError("joint_probability needs a total assignment");
  std::vector<char> v(values.begin(), values.end());
  Evaluator ev(net);
  if (!ev.consistent(v)) return Rational(0);
  Rational p(1);
  for (size_t i = 0; i < net.size(); ++i) {
    const GroundNode& n = net.node(i);
    if (n.root) p *= values[i] ? n.prob : Rational(1) - n.prob;
  }
  return p;
}

Rational joint_probability(const GroundNetwork& net, const std::map<GroundAtom, bool>& values) {
  std::vector<bool> v(net.size());
  size_t matched = 0;
  for (size_t i = 0; i < net.size(); ++i) {
    auto it = values.find(net.node(i).atom);
    if (it == values.end()) throw ValidationError("assignment misses " + net.node(i).atom.str());
    v[i] = it->second;
    ++matched;
  }
  if (matched != values.size()) throw ValidationError("assignment mentions atoms outside the network");
  return joint_probability(net, v);
}

Mass enumerate_mass(const GroundNetwork& net, const Query& query, size_t root_cap) {
  Evaluator ev(net);
  std::vector<Target> qs = targets(net, query.q), es = targets(net, query.e);
  std::vector<int> fixed(net.size(), -1);
  for (const Target& t : es) fixed[t.node] = t.value;

  struct Root {
    size_t node;
    BigInt on, off;  // numerators over the root's denominator
    int fixed;
  };
  std::vector<Root> roots;
  BigInt denom = 1;
  size_t free_roots = 0;
  for (size_t i = 0; i < net.size(); ++i) {
    const GroundNode& n = net.node(i);
    if (!n.root) continue;
    BigInt q = n.prob.den(), p = n.prob.num();
    denom *= q;
    roots.push_back({i, p, q - p, fixed[i]});
    if (fixed[i] < 0) ++free_roots;
  }
  if (free_roots > root_cap) {
    throw ResourceError("enumeration exceeds root cap " + std::to_string(root_cap), free_roots);
  }

  std::vector<char> v(net.size(), 0);
  std::vector<BigInt> prefix(roots.size() + 1);
  prefix[0] = 1;
  BigInt sum_e = 0, sum_qe = 0;
  unsigned long long leaves = 0;
  // Every joint term shares the denominator `denom`, so numerators are summed
  // as integers and divided once at the end.
  std::function<void(size_t)> dfs = [&](size_t d) {
    if (d == roots.size()) {
      ++leaves;
      ev.run(v);
      for (const Target& t : es) {
        if (static_cast<bool>(v[t.node]) != t.value) return;
      }
      sum_e += prefix[d];
      for (const Target& t : qs) {
        if (static_cast<bool>(v[t.node]) != t.value) return;
      }
      sum_qe += prefix[d];
      return;
    }
    const Root& r = roots[d];
    for (int val = 1; val >= 0; --val) {
      if (r.fixed >= 0 && r.fixed != val) continue;
      const BigInt& f = val ? r.on : r.off;
      if (f == 0) continue;
      v[r.node] = static_cast<char>(val);
      prefix[d + 1] = prefix[d] * f;
      dfs(d + 1);
    }
  };
  dfs(0);
  return {Rational(sum_qe, denom), Rational(sum_e, denom), leaves};
}

Rational query_probability(const GroundNetwork& net, const Query& query, size_t root_cap) {
  Mass m = enumerate_mass(net, query, root_cap);
  if (m.evidence.is_zero()) throw ZeroEvidence();
  return m.joint / m.evidence;
}

namespace {

bool all_values(const Query& q, bool value) {
  for (const auto* side : {&q.q, &q.e}) {
    for (const Literal& l : *side) {
      if (l.value != value) return false;
    }
  }
  return true;
}

bool propositional(const RelationalSpec& spec) {
  return std::all_of(spec.relations.begin(), spec.relations.end(), [](const Relation& r) { return r.arity == 0; });
}

// Upward closure: forcing a defined atom to `pol` forces every literal of
// its junction; the root values reached form the only consistent assignment.
bool closure(const RelationalSpec& spec, const std::vector<Literal>& ls, bool pol,
             std::map<std::string, bool>& forced, unsigned long long& work) {
  std::set<std::string> visited;
  std::vector<std::pair<std::string, bool>> stack;
  for (const Literal& l : ls) stack.push_back({l.atom.rel, pol});
  auto force_root = [&](const std::string& r, bool v) {
    auto [it, fresh] = forced.insert({r, v});
    return fresh || it->second == v;
  };
  while (!stack.empty()) {
    auto [name, v] = stack.back();
    stack.pop_back();
    ++work;
    const Entry* e = spec.entry(name);
    if (!e->is_definition()) {
      if (!force_root(name, v)) return false;
      continue;
    }
    if (!visited.insert(name).second) continue;
    std::function<bool(const Formula&)> rec = [&](const Formula& f) {
      ++work;
      switch (f.op()) {
        case Op::Atom: stack.push_back({f.name(), v}); return true;
        case Op::Not: return force_root(f.kid(0).name(), !v);
        case Op::True: return v;  // a true conjunction cannot be false
        case Op::False: return !v;
        default:
          for (const Formula& k : f.kids()) {
            if (!rec(k)) return false;
          }
          return true;
      }
    };
    if (!rec(e->body)) return false;
  }
  return true;
}

Rational closure_mass(const RelationalSpec& spec, const std::vector<Literal>& ls, bool pol,
                      unsigned long long& work) {
  std::map<std::string, bool> forced;
  if (!closure(spec, ls, pol, forced, work)) return Rational(0);
  Rational p(1);
  for (auto& [r, v] : forced) {
    const Rational& a = spec.entry(r)->prob;
    p *= v ? a : Rational(1) - a;
  }
  return p;
}

}  // namespace

bool positive_product_applies(const RelationalSpec& spec, const Query& query) {
  if (!propositional(spec)) return false;
  if (all_values(query, true) && junction_shape(spec, Op::And)) return true;
  return all_values(query, false) && junction_shape(spec, Op::Or);
}

Rational positive_query_product(const RelationalSpec& spec, const Query& query, unsigned long long* work) {
  require_valid(spec);
  if (!propositional(spec)) throw UnsupportedError("positive-product needs a propositional specification");
  for (const GroundAtom& a : query.atoms()) check_atom(spec, 1, a);
  bool pol;
  if (all_values(query, true) && junction_shape(spec, Op::And)) {
    pol = true;
  } else if (all_values(query, false) && junction_shape(spec, Op::Or)) {
    pol = false;
  } else {
    throw UnsupportedError(
        "positive-product needs Prop(and) with positive assignments or Prop(or) with negative ones");
  }
  unsigned long long w = 0;
  std::vector<Literal> all = query.q;
  all.insert(all.end(), query.e.begin(), query.e.end());
  Rational joint = closure_mass(spec, all, pol, w);
  Rational ev = query.e.empty() ? Rational(1) : closure_mass(spec, query.e, pol, w);
  if (work) *work = w;
  if (ev.is_zero()) throw ZeroEvidence();
  return joint / ev;
}

Formula condition_formula(const Formula& f, const std::map<GroundAtom, bool>& fixed) {
  std::function<Formula(const Formula&)> rec = [&](const Formula& g) -> Formula {
    switch (g.op()) {
      case Op::Atom: {
        GroundAtom a{g.name(), {}};
        for (const Term& t : g.terms()) a.args.push_back(t.ind);
        auto it = fixed.find(a);
        return it == fixed.end() ? g : Formula::constant(it->second);
      }
      case Op::True:
      case Op::False:
      case Op::Eq:
        return g;
      default: {
        std::vector<Formula> ks;
        for (const Formula& k : g.kids()) ks.push_back(rec(k));
        switch (g.op()) {
          case Op::Not: return Formula::negate(ks[0]);
          case Op::And: return Formula::conj(ks);
          case Op::Or: return Formula::disj(ks);
          case Op::Implies: return Formula::implies(ks[0], ks[1]);
          case Op::Iff: return Formula::iff(ks[0], ks[1]);
          case Op::ForAll: return Formula::forall(g.name(), ks[0]);
          default: return Formula::exists(g.name(), ks[0]);
        }
      }
    }
  };
  return simplify(rec(f));
}

Rational pruned_query_probability(const RelationalSpec& spec, long n, const Query& query,
                                  const InferOptions& opts, unsigned long long* work) {
  GroundNetwork net = ground_for_query(spec, n, query.atoms(), opts.ground);
  // Evidenced roots become constants; their factor cancels in P(Q,E)/P(E).
  std::map<GroundAtom, bool> fixed;
  for (const Literal& l : query.e) {
    const GroundNode& g = net.node(*net.find(l.atom));
    if (!g.root) continue;
    Rational f = l.value ? g.prob : Rational(1) - g.prob;
    if (f.is_zero()) throw ZeroEvidence();
    fixed[l.atom] = l.value;
  }
  Query rest;
  for (const Literal& l : query.q) {
    if (!fixed.count(l.atom)) rest.q.push_back(l);
  }
  for (const Literal& l : query.e) {
    if (!fixed.count(l.atom)) rest.e.push_back(l);
  }
  GroundNetwork cond;
  cond.domain_size = n;
  for (const GroundNode& g : net.nodes()) {
    if (fixed.count(g.atom)) continue;
    if (g.root) {
      cond.add_root(g.atom, g.prob);
    } else {
      cond.add_defined(g.atom, fixed.empty() ? g.body : condition_formula(g.body, fixed));
    }
  }
  if (rest.q.empty() && rest.e.empty()) {
    if (work) *work = 0;
    return Rational(1);
  }
  GroundNetwork pruned = relevant_subnetwork(cond, rest);
  Mass m = enumerate_mass(pruned, rest, opts.root_cap);
  if (work) *work = m.leaves;
  if (m.evidence.is_zero()) throw ZeroEvidence();
  return m.joint / m.evidence;
}

InferResult infer(const RelationalSpec& spec, long n, const Query& query, Engine engine, const InferOptions& opts) {
  require_valid(spec);
  if (n < 1) throw ValidationError("domain size must be positive");
  for (const GroundAtom& a : query.atoms()) {
    const Relation* r = spec.relation(a.rel);
    // Auxiliary DLLite concepts are checked by the dllite engine itself.
    if (r || (engine != Engine::DLLite && engine != Engine::Auto)) check_atom(spec, n, a);
  }
  std::vector<Literal> literals = query.q;
  literals.insert(literals.end(), query.e.begin(), query.e.end());
  if (engine == Engine::Auto) {
    FragmentLabel label = classify_fragment(spec, opts.fffo_bound);
    bool dl = label.kind == FragmentLabel::Kind::DLLiteNF ||
              label.kind == FragmentLabel::Kind::DLLiteNFWithPrimitiveNegation;
    if (positive_product_applies(spec, query)) {
      engine = Engine::PositiveProduct;
    } else if (dl && dllite_applies(spec, literals)) {
      engine = Engine::DLLite;
    } else {
      for (const GroundAtom& a : query.atoms()) check_atom(spec, n, a);
      engine = Engine::QfPruned;
    }
  }
  InferResult r;
  r.engine = engine;
  switch (engine) {
    case Engine::BruteForce: {
      GroundNetwork net = ground_spec(spec, n, opts.ground);
      Mass m = enumerate_mass(net, query, opts.root_cap);
      r.work = m.leaves;
      if (m.evidence.is_zero()) throw ZeroEvidence();
      r.value = m.joint / m.evidence;
      break;
    }
    case Engine::PositiveProduct:
      r.value = positive_query_product(spec, query, &r.work);
      break;
    case Engine::QfPruned:
      r.value = pruned_query_probability(spec, n, query, opts, &r.work);
      break;
    case Engine::DLLite:
      r.value = infer_positive(spec, n, query, &r.work);
      break;
    case Engine::Auto:
      break;
  }
  if (query.gamma) r.decision = r.value > *query.gamma;
  return r;
}

bool decide_threshold(const RelationalSpec& spec, long n, const Query& query, const InferOptions& opts) {
  if (!query.gamma) throw ValidationError("threshold decision needs gamma");
  if (!query.gamma->is_probability()) throw ValidationError("gamma must lie in [0,1]");
  return *infer(spec, n, query, Engine::Auto, opts).decision;
}

}  // namespace relbn
