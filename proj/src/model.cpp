#include "relbn/model.hpp"

#include <algorithm>
#include <sstream>

#include "relbn/errors.hpp"

namespace relbn {

Entry Entry::definition(std::string rel, std::vector<std::string> head, Formula body) {
  Entry e;
  e.kind = Kind::Definition;
  e.rel = std::move(rel);
  e.head = std::move(head);
  e.body = std::move(body);
  return e;
}

Entry Entry::assessment(std::string rel, Rational prob) {
  Entry e;
  e.kind = Kind::Assessment;
  e.rel = std::move(rel);
  e.prob = std::move(prob);
  return e;
}

bool operator==(const Entry& a, const Entry& b) {
  if (a.kind != b.kind || a.rel != b.rel) return false;
  if (a.is_definition()) return a.head == b.head && a.body == b.body;
  return a.prob == b.prob;
}

void RelationalSpec::declare(const std::string& name, int arity) {
  if (!relation(name)) relations.push_back({name, arity});
}

void RelationalSpec::add(Entry e, int arity) {
  declare(e.rel, arity);
  entries.push_back(std::move(e));
}

const Relation* RelationalSpec::relation(const std::string& name) const {
  for (const Relation& r : relations) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

const Entry* RelationalSpec::entry(const std::string& name) const {
  for (const Entry& e : entries) {
    if (e.rel == name) return &e;
  }
  return nullptr;
}

bool RelationalSpec::is_root(const std::string& name) const {
  const Entry* e = entry(name);
  return e && !e->is_definition();
}

bool operator==(const RelationalSpec& a, const RelationalSpec& b) {
  std::set<Relation> ra(a.relations.begin(), a.relations.end());
  std::set<Relation> rb(b.relations.begin(), b.relations.end());
  if (ra != rb || a.entries.size() != b.entries.size()) return false;
  for (const Entry& e : a.entries) {
    const Entry* o = b.entry(e.rel);
    if (!o || !(*o == e)) return false;
  }
  return true;
}

std::string GroundAtom::str() const {
  if (args.empty()) return rel;
  std::string s = rel + "(";
  for (size_t i = 0; i < args.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(args[i]);
  }
  return s + ")";
}

size_t GroundAtomHash::operator()(const GroundAtom& a) const {
  size_t h = std::hash<std::string>()(a.rel);
  for (long x : a.args) h = h * 1000003u ^ std::hash<long>()(x);
  return h;
}

std::optional<size_t> GroundNetwork::find(const GroundAtom& a) const {
  auto it = index_.find(a);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

size_t GroundNetwork::add_root(GroundAtom a, Rational p) {
  if (index_.count(a)) throw ValidationError("duplicate ground node " + a.str());
  index_[a] = nodes_.size();
  nodes_.push_back({std::move(a), true, std::move(p), Formula::top()});
  return nodes_.size() - 1;
}

size_t GroundNetwork::add_defined(GroundAtom a, Formula body) {
  if (index_.count(a)) throw ValidationError("duplicate ground node " + a.str());
  index_[a] = nodes_.size();
  nodes_.push_back({std::move(a), false, Rational(0), std::move(body)});
  return nodes_.size() - 1;
}

std::vector<size_t> GroundNetwork::parents(size_t i) const {
  std::vector<size_t> out;
  const GroundNode& n = nodes_[i];
  if (n.root) return out;
  std::function<void(const Formula&)> rec = [&](const Formula& f) {
    if (f.op() == Op::Atom) {
      GroundAtom a{f.name(), {}};
      for (const Term& t : f.terms()) {
        if (t.is_var) throw ValidationError("logvar in ground body of " + n.atom.str());
        a.args.push_back(t.ind);
      }
      auto j = find(a);
      if (!j) throw ValidationError("body of " + n.atom.str() + " references unknown atom " + a.str());
      if (std::find(out.begin(), out.end(), *j) == out.end()) out.push_back(*j);
    }
    for (const Formula& k : f.kids()) rec(k);
  };
  rec(n.body);
  return out;
}

std::vector<size_t> GroundNetwork::topological_order() const {
  std::vector<int> state(nodes_.size(), 0);
  std::vector<size_t> order;
  order.reserve(nodes_.size());
  // Iterative DFS so long chains do not overflow the stack.
  for (size_t s = 0; s < nodes_.size(); ++s) {
    if (state[s]) continue;
    std::vector<std::pair<size_t, std::vector<size_t>>> stack;
    stack.push_back({s, parents(s)});
    state[s] = 1;
    while (!stack.empty()) {
      auto& [v, ps] = stack.back();
      if (ps.empty()) {
        state[v] = 2;
        order.push_back(v);
        stack.pop_back();
        continue;
      }
      size_t p = ps.back();
      ps.pop_back();
      if (state[p] == 1) throw ValidationError("cyclic ground network at " + nodes_[p].atom.str());
      if (state[p] == 0) {
        state[p] = 1;
        stack.push_back({p, parents(p)});
      }
    }
  }
  return order;
}

size_t GroundNetwork::root_count() const {
  return std::count_if(nodes_.begin(), nodes_.end(), [](const GroundNode& n) { return n.root; });
}

size_t GroundNetwork::edge_count() const {
  size_t e = 0;
  for (size_t i = 0; i < nodes_.size(); ++i) e += parents(i).size();
  return e;
}

bool operator==(const GroundNetwork& a, const GroundNetwork& b) {
  if (a.domain_size != b.domain_size || a.size() != b.size()) return false;
  for (const GroundNode& n : a.nodes()) {
    auto j = b.find(n.atom);
    if (!j) return false;
    const GroundNode& m = b.node(*j);
    if (n.root != m.root) return false;
    if (n.root ? !(n.prob == m.prob) : !(n.body == m.body)) return false;
  }
  return true;
}

namespace {

void add_literal(std::vector<Literal>& to, const std::vector<Literal>& other, Literal l) {
  for (const std::vector<Literal>* side : {static_cast<const std::vector<Literal>*>(&to), &other}) {
    for (const Literal& x : *side) {
      if (x.atom == l.atom && x.value != l.value) {
        throw ValidationError("conflicting assignments for " + l.atom.str());
      }
    }
  }
  for (const Literal& x : to) {
    if (x.atom == l.atom) return;
  }
  to.push_back(std::move(l));
}

}  // namespace

void Query::add_query(Literal l) { add_literal(q, e, std::move(l)); }
void Query::add_evidence(Literal l) { add_literal(e, q, std::move(l)); }

std::vector<GroundAtom> Query::atoms() const {
  std::vector<GroundAtom> out;
  for (const auto* side : {&q, &e}) {
    for (const Literal& l : *side) {
      if (std::find(out.begin(), out.end(), l.atom) == out.end()) out.push_back(l.atom);
    }
  }
  return out;
}

std::string FragmentLabel::str() const {
  switch (kind) {
    case Kind::PropAnd: return "PropAnd";
    case Kind::PropOr: return "PropOr";
    case Kind::PropAndNot: return "PropAndNot";
    case Kind::DLLiteNF: return "DLLiteNF";
    case Kind::DLLiteNFWithPrimitiveNegation: return "DLLiteNFWithPrimitiveNegation";
    case Kind::EL: return "EL";
    case Kind::ALC: return "ALC";
    case Kind::QF: return "QF";
    case Kind::FFFOk: return "FFFOk(" + std::to_string(k) + ")";
    case Kind::FFFO: return "FFFO";
  }
  return "?";
}

size_t ValidationReport::count(Violation::Kind k) const {
  return std::count_if(violations.begin(), violations.end(),
                       [k](const Violation& v) { return v.kind == k; });
}

std::string ValidationReport::str() const {
  std::ostringstream os;
  for (const Violation& v : violations) os << v.message << "\n";
  return os.str();
}

namespace {

void check_body(const RelationalSpec& spec, const Entry& e, std::vector<Violation>& out) {
  std::set<std::string> head(e.head.begin(), e.head.end());
  std::set<std::string> reported_stray;
  std::function<void(const Formula&, std::set<std::string>&)> rec =
      [&](const Formula& f, std::set<std::string>& bound) {
        switch (f.op()) {
          case Op::Atom: {
            const Relation* r = spec.relation(f.name());
            if (!r) {
              out.push_back({Violation::Kind::UndeclaredRelation,
                             "definition of " + e.rel + " mentions undeclared relation " + f.name()});
            } else if (static_cast<size_t>(r->arity) != f.terms().size()) {
              out.push_back({Violation::Kind::ArityMismatch,
                             "atom " + f.name() + " in definition of " + e.rel + " has " +
                                 std::to_string(f.terms().size()) + " arguments, arity is " +
                                 std::to_string(r->arity)});
            }
            [[fallthrough]];
          }
          case Op::Eq:
            for (const Term& t : f.terms()) {
              if (t.is_var && !bound.count(t.var) && !head.count(t.var) &&
                  reported_stray.insert(t.var).second) {
                out.push_back({Violation::Kind::StrayLogvar,
                               "logvar " + t.var + " in definition of " + e.rel +
                                   " is neither in the head nor bound"});
              }
            }
            return;
          case Op::ForAll:
          case Op::Exists: {
            if (bound.count(f.name()) || head.count(f.name())) {
              out.push_back({Violation::Kind::StrayLogvar,
                             "logvar " + f.name() + " in definition of " + e.rel + " is bound twice"});
              rec(f.kid(0), bound);
              return;
            }
            bound.insert(f.name());
            rec(f.kid(0), bound);
            bound.erase(f.name());
            return;
          }
          default:
            for (const Formula& k : f.kids()) rec(k, bound);
        }
      };
  std::set<std::string> bound;
  rec(e.body, bound);
}

// Tarjan SCC over relation indices; returns the cyclic components.
std::vector<std::vector<std::string>> cycles(const DirectedGraph& g) {
  std::map<std::string, size_t> id;
  for (size_t i = 0; i < g.nodes.size(); ++i) id[g.nodes[i]] = i;
  std::vector<std::vector<size_t>> adj(g.nodes.size());
  std::vector<bool> self(g.nodes.size(), false);
  for (auto& [a, b] : g.edges) {
    adj[id[a]].push_back(id[b]);
    if (a == b) self[id[a]] = true;
  }
  size_t n = g.nodes.size(), counter = 0;
  std::vector<long> index(n, -1), low(n, 0);
  std::vector<bool> on(n, false);
  std::vector<size_t> stack;
  std::vector<std::vector<std::string>> out;
  std::function<void(size_t)> strong = [&](size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on[v] = true;
    for (size_t w : adj[v]) {
      if (index[w] < 0) {
        strong(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::string> comp;
      size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on[w] = false;
        comp.push_back(g.nodes[w]);
      } while (w != v);
      if (comp.size() > 1 || self[v]) {
        std::sort(comp.begin(), comp.end());
        out.push_back(comp);
      }
    }
  };
  for (size_t v = 0; v < n; ++v) {
    if (index[v] < 0) strong(v);
  }
  return out;
}

}  // namespace

ValidationReport validate_spec(const RelationalSpec& spec) {
  ValidationReport rep;
  auto& out = rep.violations;
  std::map<std::string, int> seen;
  for (const Relation& r : spec.relations) {
    auto [it, fresh] = seen.insert({r.name, r.arity});
    if (!fresh) {
      out.push_back({r.arity == it->second ? Violation::Kind::DuplicateEntry : Violation::Kind::ArityMismatch,
                     "relation " + r.name + " declared twice"});
    }
    if (r.arity < 0) out.push_back({Violation::Kind::ArityMismatch, "relation " + r.name + " has negative arity"});
  }
  std::map<std::string, int> entries;
  for (const Entry& e : spec.entries) {
    if (++entries[e.rel] == 2) {
      out.push_back({Violation::Kind::DuplicateEntry, "relation " + e.rel + " has more than one entry"});
    }
    const Relation* r = spec.relation(e.rel);
    if (!r) {
      out.push_back({Violation::Kind::UndeclaredRelation, "entry for undeclared relation " + e.rel});
      continue;
    }
    if (!e.is_definition()) {
      if (!e.prob.is_probability()) {
        out.push_back({Violation::Kind::BadProbability,
                       "probability of " + e.rel + " is " + e.prob.str() + ", outside [0,1]"});
      }
      continue;
    }
    if (static_cast<int>(e.head.size()) != r->arity) {
      out.push_back({Violation::Kind::ArityMismatch,
                     "head of " + e.rel + " has " + std::to_string(e.head.size()) +
                         " logvars, arity is " + std::to_string(r->arity)});
    }
    std::set<std::string> hs(e.head.begin(), e.head.end());
    if (hs.size() != e.head.size()) {
      out.push_back({Violation::Kind::HeadLogvars, "head logvars of " + e.rel + " are not distinct"});
    }
    check_body(spec, e, out);
  }
  for (const Relation& r : spec.relations) {
    if (!entries.count(r.name)) {
      out.push_back({Violation::Kind::MissingEntry, "relation " + r.name + " has no definition or assessment"});
    }
  }
  for (const auto& comp : cycles(parvariable_graph(spec))) {
    std::string s;
    for (const std::string& c : comp) s += (s.empty() ? "" : ", ") + c;
    out.push_back({Violation::Kind::Cycle, "cyclic parvariable graph through {" + s + "}"});
  }
  return rep;
}

void require_valid(const RelationalSpec& spec) {
  ValidationReport rep = validate_spec(spec);
  if (!rep.ok()) throw ValidationError("invalid specification:\n" + rep.str());
}

std::vector<std::string> DirectedGraph::roots() const {
  std::vector<std::string> out;
  for (const std::string& n : nodes) {
    bool has_parent = std::any_of(edges.begin(), edges.end(), [&](const auto& e) { return e.second == n; });
    if (!has_parent) out.push_back(n);
  }
  return out;
}

DirectedGraph parvariable_graph(const RelationalSpec& spec) {
  DirectedGraph g;
  std::set<std::string> names;
  for (const Relation& r : spec.relations) {
    if (names.insert(r.name).second) g.nodes.push_back(r.name);
  }
  for (const Entry& e : spec.entries) {
    if (!e.is_definition()) continue;
    for (const std::string& y : relations_in(e.body)) {
      if (names.count(y) && names.count(e.rel)) g.edges.insert({y, e.rel});
    }
  }
  return g;
}

}  // namespace relbn
