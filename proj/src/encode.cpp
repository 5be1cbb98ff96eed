#include "relbn/encode.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "relbn/errors.hpp"
#include "relbn/infer.hpp"
#include "relbn/lang.hpp"

namespace relbn {

namespace {

std::vector<Term> vars(const std::vector<std::string>& names) {
  std::vector<Term> out;
  for (const std::string& v : names) out.push_back(Term::variable(v));
  return out;
}

bool taken(const RelationalSpec& spec, const std::set<std::string>& extra, const std::string& name) {
  return spec.has(name) || spec.entry(name) || extra.count(name);
}

std::string fresh_name(const RelationalSpec& spec, const std::set<std::string>& extra, CptNaming& naming,
                       const std::string& bits, const std::string& child) {
  if (naming.numbered) {
    while (taken(spec, extra, naming.prefix + std::to_string(naming.next))) ++naming.next;
    return naming.prefix + std::to_string(naming.next++);
  }
  std::string base = naming.prefix + bits;
  if (!taken(spec, extra, base)) return base;
  base += "_" + child;
  if (!taken(spec, extra, base)) return base;
  for (int k = 2;; ++k) {
    std::string s = base + "_" + std::to_string(k);
    if (!taken(spec, extra, s)) return s;
  }
}

void check_table(const std::string& child, size_t parents, const std::vector<Rational>& table) {
  if (parents > 20) throw ValidationError("too many parents for " + child);
  if (table.size() != (size_t{1} << parents)) {
    throw ValidationError("table of " + child + " needs " + std::to_string(size_t{1} << parents) + " entries, got " +
                          std::to_string(table.size()));
  }
  for (const Rational& p : table) {
    if (!p.is_probability()) throw ValidationError("table entry " + p.str() + " of " + child + " is not in [0,1]");
  }
}

// Or over parent configurations of (literals & fresh root). Fresh roots are
// applied to `aux_args` and added to the spec as assessments.
Formula configuration_disjunction(RelationalSpec& spec, const std::vector<Formula>& parents,
                                  const std::vector<Rational>& table, const std::vector<std::string>& aux_args,
                                  CptNaming& naming, const std::string& child) {
  size_t k = parents.size();
  std::set<std::string> reserved{child};
  for (const Formula& p : parents) {
    std::set<std::string> rs = relations_in(p);
    reserved.insert(rs.begin(), rs.end());
  }
  std::vector<Formula> disjuncts;
  for (size_t cfg = 0; cfg < table.size(); ++cfg) {
    std::string bits;
    std::vector<Formula> lits;
    for (size_t i = 0; i < k; ++i) {
      bool on = (cfg >> (k - 1 - i)) & 1;
      bits += on ? '1' : '0';
      lits.push_back(on ? parents[i] : Formula::negate(parents[i]));
    }
    std::string z = fresh_name(spec, reserved, naming, bits, child);
    spec.add(Entry::assessment(z, table[cfg]), static_cast<int>(aux_args.size()));
    lits.push_back(Formula::atom(z, vars(aux_args)));
    disjuncts.push_back(Formula::conj(lits));
  }
  return Formula::disj(disjuncts);
}

// A parent atom; logvars outside the child's are aggregated by `exists`.
Formula parent_formula(const ParentRef& p, const std::vector<std::string>& child_vars) {
  Formula f = Formula::atom(p.rel, vars(p.args));
  std::vector<std::string> extra;
  for (const std::string& v : p.args) {
    if (std::find(child_vars.begin(), child_vars.end(), v) == child_vars.end() &&
        std::find(extra.begin(), extra.end(), v) == extra.end()) {
      extra.push_back(v);
    }
  }
  for (auto it = extra.rbegin(); it != extra.rend(); ++it) f = Formula::exists(*it, f);
  return f;
}

void check_logvars(const std::string& child, const std::vector<std::string>& logvars) {
  std::set<std::string> s(logvars.begin(), logvars.end());
  if (s.size() != logvars.size()) throw ValidationError("repeated logvar in head of " + child);
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

// Commas outside parentheses separate items.
std::vector<std::string> split_top(const std::string& s) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
  return out;
}

std::string strip_comment(std::string line) {
  if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
  return line;
}

ParentRef parse_atom_ref(const std::string& text, int line) {
  Formula f;
  try {
    f = parse_formula(text);
  } catch (const FormatError& e) {
    throw FormatError(std::string("bad atom '") + text + "': " + e.what(), line, 1);
  }
  if (f.op() != Op::Atom) throw FormatError("expected an atom, got '" + text + "'", line, 1);
  ParentRef r{f.name(), {}};
  for (const Term& t : f.terms()) {
    if (!t.is_var) throw FormatError("atom '" + text + "' must use logvars", line, 1);
    r.args.push_back(t.var);
  }
  return r;
}

std::vector<Rational> parse_probs(const std::string& text, int line) {
  std::vector<Rational> out;
  for (const std::string& w : words(text)) {
    Rational p;
    if (!Rational::try_parse(w, &p)) throw FormatError("bad probability '" + w + "'", line, 1);
    out.push_back(p);
  }
  if (out.empty()) throw FormatError("missing probabilities", line, 1);
  return out;
}

}  // namespace

void append_cpt(RelationalSpec& spec, const Cpt& cpt, CptNaming& naming) {
  check_logvars(cpt.child, cpt.logvars);
  check_table(cpt.child, cpt.parents.size(), cpt.table);
  int arity = static_cast<int>(cpt.logvars.size());
  if (cpt.parents.empty()) {
    spec.add(Entry::assessment(cpt.child, cpt.table[0]), arity);
    return;
  }
  std::vector<Formula> parents;
  for (const ParentRef& p : cpt.parents) {
    if (p.rel == cpt.child) throw ValidationError(cpt.child + " cannot be its own parent");
    spec.declare(p.rel, static_cast<int>(p.args.size()));
    parents.push_back(parent_formula(p, cpt.logvars));
  }
  spec.declare(cpt.child, arity);
  Formula body = configuration_disjunction(spec, parents, cpt.table, cpt.logvars, naming, cpt.child);
  spec.add(Entry::definition(cpt.child, cpt.logvars, body), arity);
}

void append_cpt(RelationalSpec& spec, const Cpt& cpt) {
  CptNaming naming;
  append_cpt(spec, cpt, naming);
}

RelationalSpec cpt_to_axioms(const Cpt& cpt) {
  RelationalSpec spec;
  append_cpt(spec, cpt);
  return spec;
}

void append_noisy_or(RelationalSpec& spec, const std::string& child, const std::vector<std::string>& logvars,
                     const std::vector<ParentRef>& parents, const std::vector<Rational>& probs) {
  if (parents.size() != probs.size()) throw ValidationError("noisy-or needs one inhibitor probability per parent");
  if (parents.empty()) throw ValidationError("noisy-or needs at least one parent");
  check_logvars(child, logvars);
  int arity = static_cast<int>(logvars.size());
  std::set<std::string> reserved{child};
  for (const ParentRef& p : parents) {
    spec.declare(p.rel, static_cast<int>(p.args.size()));
    reserved.insert(p.rel);
  }
  spec.declare(child, arity);
  std::vector<Formula> disjuncts;
  CptNaming naming{"W", false, 1};
  for (size_t i = 0; i < parents.size(); ++i) {
    if (!probs[i].is_probability()) throw ValidationError("inhibitor probability " + probs[i].str() + " is not in [0,1]");
    std::string w = fresh_name(spec, reserved, naming, std::to_string(i + 1), child);
    spec.add(Entry::assessment(w, probs[i]), arity);
    disjuncts.push_back(Formula::conj({parent_formula(parents[i], logvars), Formula::atom(w, vars(logvars))}));
  }
  spec.add(Entry::definition(child, logvars, disjuncts.size() == 1 ? disjuncts[0] : Formula::disj(disjuncts)), arity);
}

PlateModel parse_plate(const std::string& text) {
  PlateModel model;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(strip_comment(raw));
    if (s.empty()) continue;
    std::vector<std::string> w = words(s);
    if (w[0] == "plate") {
      if (w.size() != 3) throw FormatError("expected 'plate Name logvar'", line, 1);
      model.plates.push_back({w[1], w[2]});
      continue;
    }
    size_t eq = s.rfind('=');
    if (eq == std::string::npos) throw FormatError("expected 'Child(...) [| parents] = probabilities'", line, 1);
    std::string lhs = s.substr(0, eq);
    Cpt cpt;
    cpt.table = parse_probs(s.substr(eq + 1), line);
    size_t bar = lhs.find('|');
    ParentRef child = parse_atom_ref(trim(lhs.substr(0, bar)), line);
    cpt.child = child.rel;
    cpt.logvars = child.args;
    if (bar != std::string::npos) {
      for (const std::string& p : split_top(lhs.substr(bar + 1))) {
        if (p.empty()) throw FormatError("empty parent", line, static_cast<int>(bar) + 2);
        cpt.parents.push_back(parse_atom_ref(p, line));
      }
    }
    model.vars.push_back(std::move(cpt));
  }
  return model;
}

RelationalSpec plate_to_spec(const PlateModel& model) {
  std::set<std::string> logvars;
  for (const auto& p : model.plates) {
    if (!logvars.insert(p.logvar).second) throw ValidationError("logvar " + p.logvar + " belongs to two plates");
  }
  std::map<std::string, size_t> arity;
  RelationalSpec spec;
  for (const Cpt& v : model.vars) {
    if (arity.count(v.child)) throw ValidationError("parvariable " + v.child + " defined twice");
    arity[v.child] = v.logvars.size();
    for (const std::string& x : v.logvars) {
      if (!logvars.count(x)) throw ValidationError("logvar " + x + " of " + v.child + " is not in any plate");
    }
    spec.declare(v.child, static_cast<int>(v.logvars.size()));
  }
  for (const Cpt& v : model.vars) {
    for (const ParentRef& p : v.parents) {
      auto it = arity.find(p.rel);
      if (it == arity.end()) throw ValidationError("unknown parent " + p.rel + " of " + v.child);
      if (it->second != p.args.size()) throw ValidationError("parent " + p.rel + " of " + v.child + " has wrong arity");
      for (const std::string& x : p.args) {
        if (!logvars.count(x)) throw ValidationError("logvar " + x + " of parent " + p.rel + " is not in any plate");
      }
    }
  }
  CptNaming naming{"A", true, 1};
  for (const Cpt& v : model.vars) append_cpt(spec, v, naming);
  require_valid(spec);
  return spec;
}

Prm parse_prm(const std::string& text) {
  Prm prm;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(strip_comment(raw));
    if (s.empty()) continue;
    std::vector<std::string> w = words(s);
    if (w[0] == "class") {
      if (w.size() != 3) throw FormatError("expected 'class Name logvar'", line, 1);
      prm.classes.push_back({w[1], w[2]});
    } else if (w[0] == "assoc") {
      if (w.size() != 4) throw FormatError("expected 'assoc name FromClass ToClass'", line, 1);
      prm.assocs.push_back({w[1], w[2], w[3]});
    } else if (w[0] == "attr") {
      size_t eq = s.rfind('=');
      if (eq == std::string::npos) throw FormatError("expected 'attr Name(Class) [| parents] = probabilities'", line, 1);
      Prm::Attr a;
      a.table = parse_probs(s.substr(eq + 1), line);
      std::string lhs = trim(s.substr(4, eq - 4));
      size_t bar = lhs.find('|');
      std::string head = trim(lhs.substr(0, bar));
      size_t open = head.find('('), close = head.rfind(')');
      if (open == std::string::npos || close != head.size() - 1) {
        throw FormatError("expected 'Name(Class)'", line, 1);
      }
      a.name = trim(head.substr(0, open));
      a.cls = trim(head.substr(open + 1, close - open - 1));
      if (a.name.empty() || a.cls.empty()) throw FormatError("expected 'Name(Class)'", line, 1);
      if (bar != std::string::npos) {
        for (const std::string& p : split_top(lhs.substr(bar + 1))) {
          if (p.empty()) throw FormatError("empty parent", line, 1);
          size_t dot = p.find('.');
          if (dot == std::string::npos) {
            a.parents.push_back({"", p});
          } else {
            a.parents.push_back({trim(p.substr(0, dot)), trim(p.substr(dot + 1))});
          }
        }
      }
      prm.attrs.push_back(std::move(a));
    } else {
      throw FormatError("unknown statement '" + w[0] + "'", line, 1);
    }
  }
  return prm;
}

Skeleton parse_skeleton(const std::string& text) {
  Skeleton sk;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  auto id = [&](const std::string& s) {
    if (s.empty() || s.size() > 9 || !std::all_of(s.begin(), s.end(), ::isdigit) || std::stol(s) < 1) {
      throw FormatError("object ids are positive integers, got '" + s + "'", line, 1);
    }
    return std::stol(s);
  };
  while (std::getline(in, raw)) {
    ++line;
    std::vector<std::string> w = words(strip_comment(raw));
    if (w.empty()) continue;
    if (w.size() == 2) {
      sk.members.push_back({w[0], id(w[1])});
    } else if (w.size() == 3) {
      sk.links.push_back({w[0], {id(w[1]), id(w[2])}});
    } else {
      throw FormatError("expected 'Class id' or 'assoc id id'", line, 1);
    }
  }
  return sk;
}

PrmEncoding prm_to_spec(const Prm& prm, const Skeleton& skeleton) {
  std::map<std::string, const Prm::Class*> classes;
  std::map<std::string, const Prm::Assoc*> assocs;
  std::map<std::string, const Prm::Attr*> attrs;
  std::set<std::string> names;
  auto fresh = [&](const std::string& n) {
    if (!names.insert(n).second) throw ValidationError("name " + n + " is used twice in the PRM");
  };
  RelationalSpec spec;
  const Rational half(BigInt(1), BigInt(2));
  for (const auto& c : prm.classes) {
    fresh(c.name);
    classes[c.name] = &c;
    spec.add(Entry::assessment(c.name, half), 1);
  }
  for (const auto& a : prm.assocs) {
    fresh(a.name);
    if (!classes.count(a.from) || !classes.count(a.to)) throw ValidationError("association " + a.name + " names an unknown class");
    assocs[a.name] = &a;
    spec.add(Entry::assessment(a.name, half), 2);
  }
  for (const auto& a : prm.attrs) {
    fresh(a.name);
    if (!classes.count(a.cls)) throw ValidationError("attribute " + a.name + " names unknown class " + a.cls);
    attrs[a.name] = &a;
    spec.declare(a.name, 1);
  }
  CptNaming naming{"A", true, 1};
  for (const auto& a : prm.attrs) {
    check_table(a.name, a.parents.size(), a.table);
    if (a.parents.empty()) {
      spec.add(Entry::assessment(a.name, a.table[0]), 1);
      continue;
    }
    const std::string z = classes.at(a.cls)->logvar;
    std::set<std::string> used{z};
    std::map<std::string, std::string> bound;  // association -> bound logvar
    std::vector<std::string> order;
    std::vector<Formula> guards, links, parents;
    bool direct = false;
    for (const auto& p : a.parents) {
      auto pa = attrs.find(p.attr);
      if (pa == attrs.end()) throw ValidationError("unknown parent attribute " + p.attr + " of " + a.name);
      const std::string& pcls = pa->second->cls;
      if (p.via.empty()) {
        if (pcls != a.cls) throw ValidationError("parent " + p.attr + " of " + a.name + " belongs to another class");
        direct = true;
        parents.push_back(Formula::atom(p.attr, {Term::variable(z)}));
        continue;
      }
      auto as = assocs.find(p.via);
      if (as == assocs.end()) throw ValidationError("unknown association " + p.via);
      const Prm::Assoc& link = *as->second;
      bool forward = link.from == pcls && link.to == a.cls;
      bool backward = link.from == a.cls && link.to == pcls;
      if (!forward && !backward) {
        throw ValidationError("association " + p.via + " does not connect " + a.cls + " with " + pcls);
      }
      auto bv = bound.find(p.via);
      if (bv == bound.end()) {
        std::string v = classes.at(pcls)->logvar;
        for (int k = 2; used.count(v); ++k) v = classes.at(pcls)->logvar + std::to_string(k);
        used.insert(v);
        bv = bound.emplace(p.via, v).first;
        order.push_back(v);
        guards.push_back(Formula::atom(pcls, {Term::variable(v)}));
        links.push_back(forward ? Formula::atom(p.via, {Term::variable(v), Term::variable(z)})
                                : Formula::atom(p.via, {Term::variable(z), Term::variable(v)}));
      }
      parents.push_back(Formula::atom(p.attr, {Term::variable(bv->second)}));
    }
    std::vector<std::string> aux_args;
    if (direct || order.empty()) aux_args.push_back(z);
    aux_args.insert(aux_args.end(), order.begin(), order.end());
    Formula body = configuration_disjunction(spec, parents, a.table, aux_args, naming, a.name);
    if (!order.empty()) {
      std::vector<Formula> cond = guards;
      cond.insert(cond.end(), links.begin(), links.end());
      body = Formula::implies(Formula::conj(cond), body);
      for (auto it = order.rbegin(); it != order.rend(); ++it) body = Formula::forall(*it, body);
    }
    spec.add(Entry::definition(a.name, {z}, body), 1);
  }
  require_valid(spec);

  PrmEncoding out;
  std::map<std::string, std::set<long>> members;
  std::map<std::string, std::set<std::pair<long, long>>> links;
  long n = 1;
  for (const auto& [c, i] : skeleton.members) {
    if (!classes.count(c)) throw ValidationError("skeleton names unknown class " + c);
    members[c].insert(i);
    n = std::max(n, i);
  }
  for (const auto& [a, ij] : skeleton.links) {
    auto it = assocs.find(a);
    if (it == assocs.end()) throw ValidationError("skeleton names unknown association " + a);
    if (!members[it->second->from].count(ij.first) || !members[it->second->to].count(ij.second)) {
      throw ValidationError("skeleton link " + a + "(" + std::to_string(ij.first) + "," + std::to_string(ij.second) +
                            ") does not match the classes " + it->second->from + " and " + it->second->to);
    }
    links[a].insert(ij);
    n = std::max({n, ij.first, ij.second});
  }
  for (const auto& c : prm.classes) {
    for (long i = 1; i <= n; ++i) out.evidence.push_back({{c.name, {i}}, members[c.name].count(i) > 0});
  }
  for (const auto& a : prm.assocs) {
    for (long i = 1; i <= n; ++i) {
      for (long j = 1; j <= n; ++j) out.evidence.push_back({{a.name, {i, j}}, links[a.name].count({i, j}) > 0});
    }
  }
  out.spec = std::move(spec);
  out.n = n;
  return out;
}

Cnf parse_dimacs(const std::string& text) {
  Cnf cnf;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  bool header = false;
  long declared = 0;
  std::vector<int> cur;
  while (std::getline(in, raw)) {
    ++line;
    std::vector<std::string> w = words(raw);
    if (w.empty() || w[0] == "c" || w[0][0] == 'c') continue;
    if (w[0] == "p") {
      if (header || w.size() != 4 || w[1] != "cnf") throw FormatError("expected 'p cnf VARS CLAUSES'", line, 1);
      try {
        cnf.num_vars = std::stoi(w[2]);
        declared = std::stol(w[3]);
      } catch (const std::exception&) {
        throw FormatError("bad header numbers", line, 1);
      }
      if (cnf.num_vars < 0 || declared < 0) throw FormatError("negative header numbers", line, 1);
      header = true;
      continue;
    }
    if (!header) throw FormatError("clause before 'p cnf' header", line, 1);
    for (const std::string& t : w) {
      int lit;
      try {
        size_t used = 0;
        lit = std::stoi(t, &used);
        if (used != t.size()) throw std::invalid_argument(t);
      } catch (const std::exception&) {
        throw FormatError("bad literal '" + t + "'", line, 1);
      }
      if (lit == 0) {
        cnf.clauses.push_back(cur);
        cur.clear();
      } else {
        if (std::abs(lit) > cnf.num_vars) throw FormatError("literal " + t + " exceeds declared variables", line, 1);
        cur.push_back(lit);
      }
    }
  }
  if (!cur.empty()) throw FormatError("last clause is not terminated by 0", line, 1);
  if (!header) throw FormatError("missing 'p cnf' header", 1, 1);
  if (static_cast<long>(cnf.clauses.size()) != declared) {
    throw FormatError("header declares " + std::to_string(declared) + " clauses, found " +
                      std::to_string(cnf.clauses.size()), line, 1);
  }
  return cnf;
}

std::string render_dimacs(const Cnf& cnf) {
  std::ostringstream out;
  out << "p cnf " << cnf.num_vars << " " << cnf.clauses.size() << "\n";
  for (const auto& c : cnf.clauses) {
    for (int l : c) out << l << " ";
    out << "0\n";
  }
  return out.str();
}

BigInt count_models(const Cnf& cnf, int guard) {
  if (cnf.num_vars > guard || cnf.num_vars > 62) {
    throw ResourceError("model counting exceeds variable guard " + std::to_string(guard), cnf.num_vars);
  }
  std::vector<std::pair<uint64_t, uint64_t>> masks;  // (positive, negative) variable bits
  for (const auto& c : cnf.clauses) {
    uint64_t pos = 0, neg = 0;
    for (int l : c) (l > 0 ? pos : neg) |= uint64_t{1} << (std::abs(l) - 1);
    masks.push_back({pos, neg});
  }
  uint64_t total = uint64_t{1} << cnf.num_vars, count = 0;
  for (uint64_t a = 0; a < total; ++a) {
    bool ok = true;
    for (const auto& [pos, neg] : masks) {
      if (!((a & pos) | (~a & neg))) {
        ok = false;
        break;
      }
    }
    count += ok;
  }
  return BigInt(std::to_string(count));
}

BigInt count_one_in_three(const Cnf& cnf) {
  // Backtracking in variable order; a clause fails as soon as two of its
  // literals are true or all are false.
  int n = cnf.num_vars;
  std::vector<std::vector<std::pair<size_t, bool>>> occ(n + 1);
  std::vector<int> trues(cnf.clauses.size(), 0), open(cnf.clauses.size(), 0);
  for (size_t c = 0; c < cnf.clauses.size(); ++c) {
    if (cnf.clauses[c].empty()) return 0;
    for (int l : cnf.clauses[c]) {
      occ[std::abs(l)].push_back({c, l > 0});
      ++open[c];
    }
  }
  BigInt count = 0;
  std::function<void(int)> go = [&](int v) {
    if (v > n) {
      count += 1;
      return;
    }
    for (int val = 0; val <= 1; ++val) {
      bool ok = true;
      for (const auto& [c, pos] : occ[v]) {
        --open[c];
        if (pos == static_cast<bool>(val)) ++trues[c];
        if (trues[c] > 1 || (open[c] == 0 && trues[c] == 0)) ok = false;
      }
      if (ok) go(v + 1);
      for (const auto& [c, pos] : occ[v]) {
        ++open[c];
        if (pos == static_cast<bool>(val)) --trues[c];
      }
    }
  };
  go(1);
  return count;
}

Cnf one_in_three_gadget(const Cnf& phi) {
  Cnf out;
  out.num_vars = phi.num_vars;
  for (const auto& c : phi.clauses) {
    if (c.size() != 3) throw ValidationError("gadget needs clauses of exactly three literals");
    if (c[0] == c[1] || c[0] == c[2] || c[1] == c[2]) throw ValidationError("gadget clause repeats a literal");
    int b = out.num_vars;
    out.num_vars += 5;
    out.clauses.push_back({-c[0], b + 1, b + 2});
    out.clauses.push_back({c[1], b + 2, b + 3});
    out.clauses.push_back({-c[2], b + 3, b + 4});
    out.clauses.push_back({b + 1, b + 3, b + 5});
  }
  return out;
}

namespace {

void check_matrix_bounds(long m, long n, long M, long N) {
  if (!(N > n && n > 0 && M > m && m > 0)) throw ValidationError("matrix problem needs N > n > 0 and M > m > 0");
  if (M * N > 62) throw ResourceError("matrix too large", static_cast<unsigned long long>(M * N));
}

}  // namespace

Cnf matrix_problem_to_formula(long m, long n, long M, long N) {
  check_matrix_bounds(m, n, M, N);
  Cnf cnf;
  cnf.num_vars = static_cast<int>(M * N);
  auto cell = [&](long i, long j) { return static_cast<int>((i - 1) * N + j); };
  for (long i = 1; i <= m; ++i) {
    std::vector<int> c;
    for (long j = 1; j <= N; ++j) c.push_back(cell(i, j));
    cnf.clauses.push_back(c);
  }
  for (long j = 1; j <= n; ++j) {
    std::vector<int> c;
    for (long i = 1; i <= M; ++i) c.push_back(cell(i, j));
    cnf.clauses.push_back(c);
  }
  return cnf;
}

BigInt matrix_count_bruteforce(long m, long n, long M, long N) {
  check_matrix_bounds(m, n, M, N);
  if (M * N > kDefaultVarGuard) throw ResourceError("matrix enumeration exceeds guard", static_cast<unsigned long long>(M * N));
  uint64_t total = uint64_t{1} << (M * N), count = 0;
  for (uint64_t a = 0; a < total; ++a) {
    auto at = [&](long i, long j) { return (a >> ((i - 1) * N + (j - 1))) & 1; };
    bool ok = true;
    for (long i = 1; i <= m && ok; ++i) {
      bool any = false;
      for (long j = 1; j <= N; ++j) any = any || at(i, j);
      ok = any;
    }
    for (long j = 1; j <= n && ok; ++j) {
      bool any = false;
      for (long i = 1; i <= M; ++i) any = any || at(i, j);
      ok = any;
    }
    count += ok;
  }
  return BigInt(std::to_string(count));
}

std::vector<std::pair<size_t, size_t>> intersection_graph(const Cnf& cnf) {
  std::vector<std::set<int>> vs;
  for (const auto& c : cnf.clauses) {
    std::set<int> s;
    for (int l : c) s.insert(std::abs(l));
    vs.push_back(s);
  }
  std::vector<std::pair<size_t, size_t>> out;
  for (size_t i = 0; i < vs.size(); ++i) {
    for (size_t j = i + 1; j < vs.size(); ++j) {
      if (std::any_of(vs[i].begin(), vs[i].end(), [&](int v) { return vs[j].count(v) > 0; })) out.push_back({i, j});
    }
  }
  return out;
}

ClassB linmoncbpc_to_bwgraph(const Cnf& phi) {
  size_t k = phi.clauses.size();
  if (k < 2) throw ValidationError("LinMonCBPC needs clauses on both sides");
  std::vector<std::set<int>> vs;
  std::set<int> used;
  for (const auto& c : phi.clauses) {
    std::set<int> s;
    for (int l : c) {
      if (l <= 0) throw ValidationError("formula is not monotone");
      if (!s.insert(l).second) throw ValidationError("clause repeats a proposition");
      used.insert(l);
    }
    if (s.empty()) throw ValidationError("empty clause");
    vs.push_back(s);
  }
  auto shared = [&](size_t i, size_t j) {
    size_t n = 0;
    for (int v : vs[i]) n += vs[j].count(v);
    return n;
  };
  std::vector<int> side(k, -1);
  side[0] = 0;
  std::vector<size_t> stack{0};
  while (!stack.empty()) {
    size_t i = stack.back();
    stack.pop_back();
    for (size_t j = 0; j < k; ++j) {
      if (j == i || shared(i, j) == 0) continue;
      if (side[j] < 0) {
        side[j] = 1 - side[i];
        stack.push_back(j);
      } else if (side[j] == side[i]) {
        throw ValidationError("intersection graph is not bipartite");
      }
    }
  }
  std::vector<size_t> left, right;
  for (size_t i = 0; i < k; ++i) {
    if (side[i] < 0) throw ValidationError("intersection graph is not connected");
    (side[i] == 0 ? left : right).push_back(i);
  }
  for (size_t l : left) {
    for (size_t r : right) {
      if (shared(l, r) != 1) throw ValidationError("formula is not linear clause-bipartite complete");
    }
  }
  auto uniform = [&](const std::vector<size_t>& part) {
    size_t s = vs[part[0]].size();
    for (size_t i : part) {
      if (vs[i].size() != s) throw ValidationError("clause sizes differ within a part");
    }
    return static_cast<long>(s);
  };
  long sl = uniform(left), sr = uniform(right);
  long nl = static_cast<long>(left.size()), nr = static_cast<long>(right.size());
  return ClassB{sl - nr, nl, nr, sr - nl, phi.num_vars - static_cast<long>(used.size())};
}

}  // namespace relbn

namespace relbn {

std::vector<std::string> verify_plate(const PlateModel& model) {
  RelationalSpec spec = plate_to_spec(model);
  size_t v = model.vars.size();
  if (v > 20) throw ResourceError("plate oracle exceeds 20 parvariables", v);
  std::map<std::string, size_t> index;
  for (size_t i = 0; i < v; ++i) index[model.vars[i].child] = i;
  std::vector<Rational> marginal(v, Rational(0));
  for (uint64_t a = 0; a < (uint64_t{1} << v); ++a) {
    Rational p(1);
    for (size_t i = 0; i < v && !p.is_zero(); ++i) {
      const Cpt& c = model.vars[i];
      size_t cfg = 0;
      for (const ParentRef& par : c.parents) cfg = (cfg << 1) | ((a >> index.at(par.rel)) & 1);
      const Rational& on = c.table[cfg];
      p *= (a >> i) & 1 ? on : Rational(1) - on;
    }
    for (size_t i = 0; i < v; ++i) {
      if ((a >> i) & 1) marginal[i] += p;
    }
  }
  std::vector<std::string> out;
  for (size_t i = 0; i < v; ++i) {
    const Cpt& c = model.vars[i];
    Query q;
    q.add_query({GroundAtom{c.child, std::vector<long>(c.logvars.size(), 1)}, true});
    Rational got = infer(spec, 1, q, Engine::BruteForce).value;
    if (got != marginal[i]) {
      out.push_back(c.child + ": encoding gives " + got.str() + ", template network gives " + marginal[i].str());
    }
  }
  return out;
}

}  // namespace relbn
