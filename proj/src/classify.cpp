#include <algorithm>

#include "relbn/model.hpp"

namespace relbn {

namespace {

using Kind = FragmentLabel::Kind;

bool all_propositional(const RelationalSpec& spec) {
  return std::all_of(spec.relations.begin(), spec.relations.end(),
                     [](const Relation& r) { return r.arity == 0; });
}

bool is_literal_of(const RelationalSpec& spec, const Formula& f) {
  if (f.op() == Op::Atom) return true;
  return f.op() == Op::Not && f.kid(0).op() == Op::Atom && spec.is_root(f.kid(0).name());
}

// Conjunction (or, dually, disjunction) of atoms and negated root atoms.
bool is_junction(const RelationalSpec& spec, const Formula& f, Op junction) {
  if (is_literal_of(spec, f)) return true;
  if (f.op() == (junction == Op::And ? Op::True : Op::False)) return true;
  if (f.op() != junction) return false;
  return std::all_of(f.kids().begin(), f.kids().end(),
                     [&](const Formula& k) { return is_junction(spec, k, junction); });
}

bool has_equality(const Formula& f) {
  if (f.op() == Op::Eq) return true;
  return std::any_of(f.kids().begin(), f.kids().end(), has_equality);
}

bool unary_atom_on(const RelationalSpec& spec, const Formula& f, const std::string& x) {
  if (f.op() != Op::Atom || f.terms().size() != 1) return false;
  const Relation* r = spec.relation(f.name());
  return r && r->arity == 1 && f.terms()[0] == Term::variable(x);
}

bool role_atom(const RelationalSpec& spec, const Formula& f, const std::string& a, const std::string& b) {
  if (f.op() != Op::Atom || f.terms().size() != 2) return false;
  const Relation* r = spec.relation(f.name());
  return r && r->arity == 2 && f.terms()[0] == Term::variable(a) && f.terms()[1] == Term::variable(b);
}

bool dllite_concept(const RelationalSpec& spec, const Formula& f, const std::string& x, bool negation) {
  if (unary_atom_on(spec, f, x)) return true;
  if (negation && f.op() == Op::Not && unary_atom_on(spec, f.kid(0), x) && spec.is_root(f.kid(0).name())) {
    return true;
  }
  if (f.op() == Op::And) {
    return std::all_of(f.kids().begin(), f.kids().end(),
                       [&](const Formula& k) { return dllite_concept(spec, k, x, negation); });
  }
  if (f.op() == Op::Exists && f.name() != x) {
    const std::string& y = f.name();
    return role_atom(spec, f.kid(0), x, y) || role_atom(spec, f.kid(0), y, x);
  }
  return false;
}

// EL concepts; with `alc`, also negation, disjunction and value restriction.
bool el_concept(const RelationalSpec& spec, const Formula& f, const std::string& x, bool alc) {
  if (unary_atom_on(spec, f, x) || f.op() == Op::True) return true;
  if (alc && f.op() == Op::False) return true;
  if (f.op() == Op::And || (alc && f.op() == Op::Or)) {
    return std::all_of(f.kids().begin(), f.kids().end(),
                       [&](const Formula& k) { return el_concept(spec, k, x, alc); });
  }
  if (alc && f.op() == Op::Not) return el_concept(spec, f.kid(0), x, alc);
  if ((f.op() == Op::Exists || (alc && f.op() == Op::ForAll)) && f.name() != x) {
    const std::string& y = f.name();
    const Formula& b = f.kid(0);
    if (f.op() == Op::ForAll) {
      return b.op() == Op::Implies && role_atom(spec, b.kid(0), x, y) && el_concept(spec, b.kid(1), y, alc);
    }
    if (role_atom(spec, b, x, y)) return true;
    if (b.op() != Op::And || b.kids().empty() || !role_atom(spec, b.kid(0), x, y)) return false;
    return std::all_of(b.kids().begin() + 1, b.kids().end(),
                       [&](const Formula& k) { return el_concept(spec, k, y, alc); });
  }
  return false;
}

bool description_logic_shape(const RelationalSpec& spec) {
  for (const Relation& r : spec.relations) {
    if (r.arity < 1 || r.arity > 2) return false;
    const Entry* e = spec.entry(r.name);
    if (!e) return false;
    if (r.arity == 2 && e->is_definition()) return false;
  }
  return true;
}

template <typename Pred>
bool all_definitions(const RelationalSpec& spec, Pred pred) {
  return std::all_of(spec.entries.begin(), spec.entries.end(),
                     [&](const Entry& e) { return !e.is_definition() || pred(e); });
}

}  // namespace

bool junction_shape(const RelationalSpec& spec, Op junction) {
  return all_definitions(spec, [&](const Entry& e) { return is_junction(spec, e.body, junction); });
}

int max_logvar_count(const RelationalSpec& spec) {
  int k = 0;
  for (const Entry& e : spec.entries) {
    if (!e.is_definition()) continue;
    std::set<std::string> s = logvar_symbols(e.body);
    s.insert(e.head.begin(), e.head.end());
    k = std::max(k, static_cast<int>(s.size()));
  }
  return k;
}

FragmentLabel classify_fragment(const RelationalSpec& spec, int fffo_bound) {
  if (all_propositional(spec)) {
    if (all_definitions(spec, [&](const Entry& e) { return is_junction(spec, e.body, Op::And); })) {
      return {Kind::PropAnd};
    }
    if (all_definitions(spec, [&](const Entry& e) { return is_junction(spec, e.body, Op::Or); })) {
      return {Kind::PropOr};
    }
    if (all_definitions(spec, [&](const Entry& e) { return !has_quantifier(e.body) && !has_equality(e.body); })) {
      return {Kind::PropAndNot};
    }
  }
  if (description_logic_shape(spec)) {
    auto head = [](const Entry& e) { return e.head.empty() ? std::string() : e.head[0]; };
    if (all_definitions(spec, [&](const Entry& e) { return dllite_concept(spec, e.body, head(e), false); })) {
      return {Kind::DLLiteNF};
    }
    if (all_definitions(spec, [&](const Entry& e) { return dllite_concept(spec, e.body, head(e), true); })) {
      return {Kind::DLLiteNFWithPrimitiveNegation};
    }
    if (all_definitions(spec, [&](const Entry& e) { return el_concept(spec, e.body, head(e), false); })) {
      return {Kind::EL};
    }
    if (all_definitions(spec, [&](const Entry& e) { return el_concept(spec, e.body, head(e), true); })) {
      return {Kind::ALC};
    }
  }
  if (all_definitions(spec, [&](const Entry& e) {
        if (has_quantifier(e.body)) return false;
        std::set<std::string> head(e.head.begin(), e.head.end());
        for (const std::string& v : free_logvars(e.body)) {
          if (!head.count(v)) return false;
        }
        return true;
      })) {
    return {Kind::QF};
  }
  int k = max_logvar_count(spec);
  if (k <= fffo_bound) return {Kind::FFFOk, k};
  return {Kind::FFFO};
}

}  // namespace relbn
