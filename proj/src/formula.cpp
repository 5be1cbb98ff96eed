#include "relbn/formula.hpp"

#include "relbn/errors.hpp"

namespace relbn {

struct Formula::Node {
  Op op;
  std::string name;
  std::vector<Term> terms;
  std::vector<Formula> kids;
};

Formula::Formula() : n_(top().n_) {}

Formula Formula::top() {
  static const auto n = std::make_shared<const Node>(Node{Op::True, {}, {}, {}});
  return Formula(n);
}

Formula Formula::bottom() {
  static const auto n = std::make_shared<const Node>(Node{Op::False, {}, {}, {}});
  return Formula(n);
}

Formula Formula::eq(Term a, Term b) {
  return Formula(std::make_shared<const Node>(Node{Op::Eq, {}, {std::move(a), std::move(b)}, {}}));
}

Formula Formula::atom(std::string rel, std::vector<Term> args) {
  return Formula(std::make_shared<const Node>(Node{Op::Atom, std::move(rel), std::move(args), {}}));
}

Formula Formula::negate(Formula f) {
  return Formula(std::make_shared<const Node>(Node{Op::Not, {}, {}, {std::move(f)}}));
}

Formula Formula::conj(std::vector<Formula> kids) {
  return Formula(std::make_shared<const Node>(Node{Op::And, {}, {}, std::move(kids)}));
}

Formula Formula::disj(std::vector<Formula> kids) {
  return Formula(std::make_shared<const Node>(Node{Op::Or, {}, {}, std::move(kids)}));
}

Formula Formula::implies(Formula a, Formula b) {
  return Formula(std::make_shared<const Node>(Node{Op::Implies, {}, {}, {std::move(a), std::move(b)}}));
}

Formula Formula::iff(Formula a, Formula b) {
  return Formula(std::make_shared<const Node>(Node{Op::Iff, {}, {}, {std::move(a), std::move(b)}}));
}

Formula Formula::forall(std::string var, Formula body) {
  return Formula(std::make_shared<const Node>(Node{Op::ForAll, std::move(var), {}, {std::move(body)}}));
}

Formula Formula::exists(std::string var, Formula body) {
  return Formula(std::make_shared<const Node>(Node{Op::Exists, std::move(var), {}, {std::move(body)}}));
}

Op Formula::op() const { return n_->op; }
const std::string& Formula::name() const { return n_->name; }
const std::vector<Term>& Formula::terms() const { return n_->terms; }
const std::vector<Formula>& Formula::kids() const { return n_->kids; }

bool operator==(const Formula& a, const Formula& b) {
  if (a.n_ == b.n_) return true;
  return a.n_->op == b.n_->op && a.n_->name == b.n_->name && a.n_->terms == b.n_->terms &&
         a.n_->kids == b.n_->kids;
}

namespace {

void collect_free(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (f.op()) {
    case Op::Eq:
    case Op::Atom:
      for (const Term& t : f.terms()) {
        if (t.is_var && !bound.count(t.var)) out.insert(t.var);
      }
      return;
    case Op::ForAll:
    case Op::Exists: {
      bool fresh = bound.insert(f.name()).second;
      collect_free(f.kid(0), bound, out);
      if (fresh) bound.erase(f.name());
      return;
    }
    default:
      for (const Formula& k : f.kids()) collect_free(k, bound, out);
  }
}

}  // namespace

std::set<std::string> free_logvars(const Formula& f) {
  std::set<std::string> bound, out;
  collect_free(f, bound, out);
  return out;
}

std::set<std::string> logvar_symbols(const Formula& f) {
  std::set<std::string> out;
  std::function<void(const Formula&)> rec = [&](const Formula& g) {
    for (const Term& t : g.terms()) {
      if (t.is_var) out.insert(t.var);
    }
    if (g.op() == Op::ForAll || g.op() == Op::Exists) out.insert(g.name());
    for (const Formula& k : g.kids()) rec(k);
  };
  rec(f);
  return out;
}

std::set<std::string> relations_in(const Formula& f) {
  std::set<std::string> out;
  std::function<void(const Formula&)> rec = [&](const Formula& g) {
    if (g.op() == Op::Atom) out.insert(g.name());
    for (const Formula& k : g.kids()) rec(k);
  };
  rec(f);
  return out;
}

bool has_quantifier(const Formula& f) {
  if (f.op() == Op::ForAll || f.op() == Op::Exists) return true;
  for (const Formula& k : f.kids()) {
    if (has_quantifier(k)) return true;
  }
  return false;
}

size_t formula_size(const Formula& f) {
  size_t n = 1;
  for (const Formula& k : f.kids()) n += formula_size(k);
  return n;
}

namespace {

long term_value(const Term& t, const Binding& b) {
  if (!t.is_var) return t.ind;
  auto it = b.find(t.var);
  if (it == b.end()) throw ValidationError("unbound logvar '" + t.var + "'");
  return it->second;
}

}  // namespace

bool evaluate(const Formula& f, const Binding& binding, long n, const Interpretation& interp) {
  switch (f.op()) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Eq: return term_value(f.terms()[0], binding) == term_value(f.terms()[1], binding);
    case Op::Atom: {
      std::vector<long> args;
      for (const Term& t : f.terms()) args.push_back(term_value(t, binding));
      return interp(f.name(), args);
    }
    case Op::Not: return !evaluate(f.kid(0), binding, n, interp);
    case Op::And:
      for (const Formula& k : f.kids()) {
        if (!evaluate(k, binding, n, interp)) return false;
      }
      return true;
    case Op::Or:
      for (const Formula& k : f.kids()) {
        if (evaluate(k, binding, n, interp)) return true;
      }
      return false;
    case Op::Implies:
      return !evaluate(f.kid(0), binding, n, interp) || evaluate(f.kid(1), binding, n, interp);
    case Op::Iff:
      return evaluate(f.kid(0), binding, n, interp) == evaluate(f.kid(1), binding, n, interp);
    case Op::ForAll:
    case Op::Exists: {
      bool all = f.op() == Op::ForAll;
      Binding b = binding;
      for (long i = 1; i <= n; ++i) {
        b[f.name()] = i;
        if (evaluate(f.kid(0), b, n, interp) != all) return !all;
      }
      return all;
    }
  }
  return false;
}

Formula substitute(const Formula& f, const std::map<std::string, Term>& sub) {
  switch (f.op()) {
    case Op::True:
    case Op::False:
      return f;
    case Op::Eq:
    case Op::Atom: {
      std::vector<Term> ts = f.terms();
      for (Term& t : ts) {
        if (!t.is_var) continue;
        auto it = sub.find(t.var);
        if (it != sub.end()) t = it->second;
      }
      return f.op() == Op::Eq ? Formula::eq(ts[0], ts[1]) : Formula::atom(f.name(), ts);
    }
    case Op::ForAll:
    case Op::Exists: {
      std::map<std::string, Term> inner = sub;
      inner.erase(f.name());
      Formula body = substitute(f.kid(0), inner);
      return f.op() == Op::ForAll ? Formula::forall(f.name(), body) : Formula::exists(f.name(), body);
    }
    default: {
      std::vector<Formula> ks;
      for (const Formula& k : f.kids()) ks.push_back(substitute(k, sub));
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

Formula simplify(const Formula& f) {
  switch (f.op()) {
    case Op::True:
    case Op::False:
    case Op::Atom:
      return f;
    case Op::Eq: {
      const Term& a = f.terms()[0];
      const Term& b = f.terms()[1];
      if (!a.is_var && !b.is_var) return Formula::constant(a.ind == b.ind);
      if (a == b) return Formula::top();
      return f;
    }
    case Op::Not: {
      Formula k = simplify(f.kid(0));
      if (k.is_constant()) return Formula::constant(k.op() == Op::False);
      if (k.op() == Op::Not) return k.kid(0);
      return Formula::negate(k);
    }
    case Op::And:
    case Op::Or: {
      bool is_and = f.op() == Op::And;
      Op absorbing = is_and ? Op::False : Op::True;
      std::vector<Formula> ks;
      for (const Formula& k : f.kids()) {
        Formula s = simplify(k);
        if (s.op() == absorbing) return s;
        if (s.is_constant()) continue;
        ks.push_back(s);
      }
      if (ks.empty()) return Formula::constant(is_and);
      if (ks.size() == 1) return ks[0];
      return is_and ? Formula::conj(ks) : Formula::disj(ks);
    }
    case Op::Implies: {
      Formula a = simplify(f.kid(0)), b = simplify(f.kid(1));
      if (a.op() == Op::False || b.op() == Op::True) return Formula::top();
      if (a.op() == Op::True) return b;
      if (b.op() == Op::False) return simplify(Formula::negate(a));
      return Formula::implies(a, b);
    }
    case Op::Iff: {
      Formula a = simplify(f.kid(0)), b = simplify(f.kid(1));
      if (a.is_constant() && b.is_constant()) return Formula::constant(a.op() == b.op());
      if (a.op() == Op::True) return b;
      if (b.op() == Op::True) return a;
      if (a.op() == Op::False) return simplify(Formula::negate(b));
      if (b.op() == Op::False) return simplify(Formula::negate(a));
      return Formula::iff(a, b);
    }
    case Op::ForAll:
    case Op::Exists: {
      Formula b = simplify(f.kid(0));
      if (b.is_constant()) return b;
      return f.op() == Op::ForAll ? Formula::forall(f.name(), b) : Formula::exists(f.name(), b);
    }
  }
  return f;
}

}  // namespace relbn
