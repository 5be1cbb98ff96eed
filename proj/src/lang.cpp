#include "relbn/lang.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "relbn/errors.hpp"

namespace relbn {

namespace {

enum class Tok {
  Ident, Number, LParen, RParen, Comma, Dot, Slash, Define, Equals, Bang, Amp, Bar,
  Arrow, DArrow, Colon, Semi, End
};

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

const char* describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
    case Tok::Slash: return "'/'";
    case Tok::Define: return "':='";
    case Tok::Equals: return "'='";
    case Tok::Bang: return "'!'";
    case Tok::Amp: return "'&'";
    case Tok::Bar: return "'|'";
    case Tok::Arrow: return "'->'";
    case Tok::DArrow: return "'<->'";
    case Tok::Colon: return "':'";
    case Tok::Semi: return "';'";
    case Tok::End: return "end of input";
  }
  return "?";
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '?' || c == '\'';
}
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto adv = [&](size_t n) {
    for (size_t k = 0; k < n; ++k, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      adv(1);
      continue;
    }
    if (c == '#' || (c == '/' && i + 1 < s.size() && s[i + 1] == '/')) {
      while (i < s.size() && s[i] != '\n') adv(1);
      continue;
    }
    int l = line, cl = col;
    if (ident_start(c)) {
      size_t j = i;
      while (j < s.size() && ident_char(s[j])) ++j;
      out.push_back({Tok::Ident, std::string(s.substr(i, j - i)), l, cl});
      adv(j - i);
      continue;
    }
    if (digit(c)) {
      size_t j = i;
      while (j < s.size() && digit(s[j])) ++j;
      if (j + 1 < s.size() && (s[j] == '.' || s[j] == '/') && digit(s[j + 1])) {
        ++j;
        while (j < s.size() && digit(s[j])) ++j;
      }
      out.push_back({Tok::Number, std::string(s.substr(i, j - i)), l, cl});
      adv(j - i);
      continue;
    }
    auto two = s.substr(i, 2);
    auto three = s.substr(i, 3);
    Tok t;
    size_t n = 1;
    if (three == "<->") {
      t = Tok::DArrow;
      n = 3;
    } else if (two == "->") {
      t = Tok::Arrow;
      n = 2;
    } else if (two == ":=") {
      t = Tok::Define;
      n = 2;
    } else {
      switch (c) {
        case '(': t = Tok::LParen; break;
        case ')': t = Tok::RParen; break;
        case ',': t = Tok::Comma; break;
        case '.': t = Tok::Dot; break;
        case '/': t = Tok::Slash; break;
        case '=': t = Tok::Equals; break;
        case '!': case '~': t = Tok::Bang; break;
        case '&': t = Tok::Amp; break;
        case '|': t = Tok::Bar; break;
        case ':': t = Tok::Colon; break;
        case ';': t = Tok::Semi; break;
        default:
          throw FormatError(std::string("unexpected character '") + c + "'", l, cl);
      }
    }
    out.push_back({t, std::string(s.substr(i, n)), l, cl});
    adv(n);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

bool is_keyword(const std::string& s) {
  return s == "relation" || s == "prob" || s == "def" || s == "forall" || s == "exists" ||
         s == "true" || s == "false";
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(lex(text)) {}

  const Token& peek(size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at(Tok t) const { return peek().kind == t; }
  bool at_word(const char* w) const { return at(Tok::Ident) && peek().text == w; }

  [[noreturn]] void fail(const std::string& expected) const {
    const Token& t = peek();
    std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw FormatError("expected " + expected + ", found " + got, t.line, t.col);
  }

  Token expect(Tok t) {
    if (!at(t)) fail(describe(t));
    return toks_[pos_++];
  }
  bool accept(Tok t) {
    if (!at(t)) return false;
    ++pos_;
    return true;
  }

  std::string name() {
    if (!at(Tok::Ident) || is_keyword(peek().text)) fail("identifier");
    return toks_[pos_++].text;
  }

  long natural() {
    Token t = expect(Tok::Number);
    for (char c : t.text) {
      if (!digit(c)) throw FormatError("expected an individual, found '" + t.text + "'", t.line, t.col);
    }
    long v = std::stol(t.text);
    if (v < 1) throw FormatError("individuals are positive integers", t.line, t.col);
    return v;
  }

  Rational rational() {
    Token t = expect(Tok::Number);
    Rational r;
    if (!Rational::try_parse(t.text, &r)) throw FormatError("bad rational '" + t.text + "'", t.line, t.col);
    return r;
  }

  Term term() {
    if (at(Tok::Number)) return Term::individual(natural());
    return Term::variable(name());
  }

  // name [ "(" [term {"," term}] ")" ]
  std::pair<std::string, std::vector<Term>> atom() {
    std::string rel = name();
    std::vector<Term> args;
    if (accept(Tok::LParen)) {
      if (!at(Tok::RParen)) {
        args.push_back(term());
        while (accept(Tok::Comma)) args.push_back(term());
      }
      expect(Tok::RParen);
    }
    return {rel, args};
  }

  Formula formula() {
    Formula f = imp();
    while (accept(Tok::DArrow)) f = Formula::iff(f, imp());
    return f;
  }

  Formula imp() {
    Formula f = disj();
    if (accept(Tok::Arrow)) return Formula::implies(f, imp());
    return f;
  }

  Formula disj() {
    std::vector<Formula> ks{conj()};
    while (accept(Tok::Bar)) ks.push_back(conj());
    return ks.size() == 1 ? ks[0] : Formula::disj(ks);
  }

  Formula conj() {
    std::vector<Formula> ks{unary()};
    while (accept(Tok::Amp)) ks.push_back(unary());
    return ks.size() == 1 ? ks[0] : Formula::conj(ks);
  }

  Formula quantified(bool all) {
    std::vector<std::string> vars{name()};
    while (accept(Tok::Comma)) vars.push_back(name());
    expect(Tok::Colon);
    Formula body = formula();
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
      body = all ? Formula::forall(*it, body) : Formula::exists(*it, body);
    }
    return body;
  }

  Formula unary() {
    if (accept(Tok::Bang)) return Formula::negate(unary());
    if (accept(Tok::LParen)) {
      Formula f = formula();
      expect(Tok::RParen);
      return f;
    }
    if (at_word("forall")) {
      ++pos_;
      return quantified(true);
    }
    if (at_word("exists")) {
      ++pos_;
      return quantified(false);
    }
    if (at_word("true")) {
      ++pos_;
      return Formula::top();
    }
    if (at_word("false")) {
      ++pos_;
      return Formula::bottom();
    }
    if (at(Tok::Number) || (at(Tok::Ident) && peek(1).kind == Tok::Equals)) {
      Term a = term();
      expect(Tok::Equals);
      return Formula::eq(a, term());
    }
    if (!at(Tok::Ident)) fail("formula");
    auto [rel, args] = atom();
    return Formula::atom(rel, args);
  }

  std::vector<std::string> head_vars(const std::vector<Term>& args, const Token& where) {
    std::vector<std::string> out;
    for (const Term& t : args) {
      if (!t.is_var) throw FormatError("head arguments must be logvars", where.line, where.col);
      out.push_back(t.var);
    }
    return out;
  }

  void note_relation(RelationalSpec& spec, const std::string& name, int arity) {
    const Relation* r = spec.relation(name);
    if (!r) {
      spec.relations.push_back({name, arity});
    } else if (r->arity != arity) {
      // Kept as a second declaration so validate_spec reports the mismatch.
      spec.relations.push_back({name, arity});
    }
  }

  RelationalSpec spec() {
    RelationalSpec s;
    while (!at(Tok::End)) {
      if (at_word("relation")) {
        ++pos_;
        std::string n = name();
        expect(Tok::Slash);
        Token t = expect(Tok::Number);
        int arity = 0;
        try {
          arity = std::stoi(t.text);
        } catch (...) {
          throw FormatError("bad arity '" + t.text + "'", t.line, t.col);
        }
        note_relation(s, n, arity);
        expect(Tok::Dot);
      } else if (at_word("prob")) {
        ++pos_;
        Token where = peek();
        auto [rel, args] = atom();
        head_vars(args, where);
        expect(Tok::Equals);
        Rational p = rational();
        expect(Tok::Dot);
        note_relation(s, rel, static_cast<int>(args.size()));
        s.entries.push_back(Entry::assessment(rel, p));
      } else if (at_word("def")) {
        ++pos_;
        Token where = peek();
        auto [rel, args] = atom();
        auto head = head_vars(args, where);
        expect(Tok::Define);
        Formula body = formula();
        expect(Tok::Dot);
        note_relation(s, rel, static_cast<int>(args.size()));
        s.entries.push_back(Entry::definition(rel, head, body));
      } else {
        fail("'relation', 'prob' or 'def'");
      }
    }
    return s;
  }

  GroundAtom ground_atom() {
    Token where = peek();
    auto [rel, args] = atom();
    GroundAtom a{rel, {}};
    for (const Term& t : args) {
      if (t.is_var) throw FormatError("query atoms take individuals, not logvars", where.line, where.col);
      a.args.push_back(t.ind);
    }
    return a;
  }

  Literal literal() {
    GroundAtom a = ground_atom();
    expect(Tok::Equals);
    Token t = expect(Tok::Number);
    if (t.text != "0" && t.text != "1") throw FormatError("literal value must be 0 or 1", t.line, t.col);
    return {a, t.text == "1"};
  }

  Query query() {
    Query q;
    bool evidence = false;
    auto side = [&]() {
      if (at(Tok::Bar) || at(Tok::Semi) || at(Tok::End)) return;
      do {
        Literal l = literal();
        if (evidence) {
          q.add_evidence(l);
        } else {
          q.add_query(l);
        }
      } while (accept(Tok::Comma));
    };
    side();
    if (accept(Tok::Bar)) {
      evidence = true;
      side();
    }
    if (accept(Tok::Semi)) {
      if (!at_word("gamma")) fail("'gamma'");
      ++pos_;
      expect(Tok::Equals);
      q.gamma = rational();
    }
    if (!at(Tok::End)) fail("',', '|', ';' or end of query");
    return q;
  }

  bool done() const { return at(Tok::End); }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
};

std::string render_term(const Term& t) { return t.str(); }

std::string render_atom(const std::string& rel, const std::vector<Term>& args) {
  if (args.empty()) return rel;
  std::string s = rel + "(";
  for (size_t i = 0; i < args.size(); ++i) {
    if (i) s += ",";
    s += render_term(args[i]);
  }
  return s + ")";
}

bool bare_in(Op parent, const Formula& k) {
  if (k.is_atomic() || k.op() == Op::Not) return true;
  switch (parent) {
    case Op::Or: return k.op() == Op::And;
    case Op::Implies:
    case Op::Iff: return k.op() == Op::And || k.op() == Op::Or;
    default: return false;
  }
}

std::string render_child(Op parent, const Formula& k) {
  std::string s = render_formula(k);
  return bare_in(parent, k) ? s : "(" + s + ")";
}

std::string default_vars(size_t arity, size_t i) {
  if (arity <= 3) return std::string(1, "xyz"[i]);
  return "x" + std::to_string(i + 1);
}

}  // namespace

std::string render_formula(const Formula& f) {
  switch (f.op()) {
    case Op::True: return "true";
    case Op::False: return "false";
    case Op::Eq: return render_term(f.terms()[0]) + " = " + render_term(f.terms()[1]);
    case Op::Atom: return render_atom(f.name(), f.terms());
    case Op::Not: {
      const Formula& k = f.kid(0);
      std::string s = render_formula(k);
      return (k.is_atomic() && k.op() != Op::Eq) || k.op() == Op::Not ? "!" + s : "!(" + s + ")";
    }
    case Op::And:
    case Op::Or: {
      if (f.kids().empty()) return f.op() == Op::And ? "true" : "false";
      if (f.kids().size() == 1) {
        // A one-element junction has no surface syntax of its own.
        return render_formula(f.kid(0));
      }
      std::string s, sep = f.op() == Op::And ? " & " : " | ";
      for (size_t i = 0; i < f.kids().size(); ++i) {
        if (i) s += sep;
        s += render_child(f.op(), f.kid(i));
      }
      return s;
    }
    case Op::Implies:
      return render_child(Op::Implies, f.kid(0)) + " -> " + render_child(Op::Implies, f.kid(1));
    case Op::Iff:
      return render_child(Op::Iff, f.kid(0)) + " <-> " + render_child(Op::Iff, f.kid(1));
    case Op::ForAll:
      return "forall " + f.name() + ": " + render_formula(f.kid(0));
    case Op::Exists:
      return "exists " + f.name() + ": " + render_formula(f.kid(0));
  }
  return "?";
}

RelationalSpec parse_spec(std::string_view text) {
  Parser p(text);
  return p.spec();
}

Formula parse_formula(std::string_view text) {
  Parser p(text);
  Formula f = p.formula();
  if (!p.done()) p.fail("end of formula");
  return f;
}

Query parse_query(std::string_view text) {
  Parser p(text);
  return p.query();
}

std::string render_spec(const RelationalSpec& spec) {
  std::ostringstream os;
  for (const Relation& r : spec.relations) {
    if (!spec.entry(r.name)) os << "relation " << r.name << "/" << r.arity << ".\n";
  }
  for (const Entry& e : spec.entries) {
    if (e.is_definition()) {
      std::vector<Term> head;
      for (const std::string& v : e.head) head.push_back(Term::variable(v));
      os << "def " << render_atom(e.rel, head) << " := " << render_formula(e.body) << ".\n";
    } else {
      const Relation* r = spec.relation(e.rel);
      size_t arity = r ? r->arity : 0;
      std::vector<Term> args;
      for (size_t i = 0; i < arity; ++i) args.push_back(Term::variable(default_vars(arity, i)));
      os << "prob " << render_atom(e.rel, args) << " = " << e.prob.str() << ".\n";
    }
  }
  return os.str();
}

std::string render_query(const Query& q) {
  auto side = [](const std::vector<Literal>& ls) {
    std::string s;
    for (size_t i = 0; i < ls.size(); ++i) {
      if (i) s += ", ";
      s += ls[i].atom.str() + "=" + (ls[i].value ? "1" : "0");
    }
    return s;
  };
  std::string s = side(q.q);
  if (!q.e.empty()) s += " | " + side(q.e);
  if (q.gamma) s += " ; gamma=" + q.gamma->str();
  return s;
}

std::string render_network(const GroundNetwork& net) {
  std::ostringstream os;
  os << "domain " << net.domain_size << "\n";
  for (const GroundNode& n : net.nodes()) {
    if (n.root) {
      os << "root " << n.atom.str() << " " << n.prob.str() << "\n";
    } else {
      os << "def " << n.atom.str() << " := " << render_formula(n.body) << "\n";
    }
  }
  return os.str();
}

GroundNetwork parse_network(std::string_view text) {
  GroundNetwork net;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    std::string rest;
    std::getline(ls, rest);
    try {
      if (kw == "domain") {
        net.domain_size = std::stol(rest);
      } else if (kw == "root") {
        auto sp = rest.find_last_of(" \t");
        if (sp == std::string::npos) throw FormatError("expected 'root atom p/q'");
        Parser p(rest.substr(0, sp));
        GroundAtom a = p.ground_atom();
        net.add_root(a, Rational::parse(rest.substr(sp + 1)));
      } else if (kw == "def") {
        auto def = rest.find(":=");
        if (def == std::string::npos) throw FormatError("expected ':='");
        Parser p(rest.substr(0, def));
        GroundAtom a = p.ground_atom();
        net.add_defined(a, parse_formula(rest.substr(def + 2)));
      } else {
        throw FormatError("expected 'domain', 'root' or 'def'");
      }
    } catch (const FormatError& e) {
      throw FormatError(std::string(e.what()), lineno, 1);
    } catch (const std::logic_error&) {
      throw FormatError("bad domain size", lineno, 1);
    }
  }
  return net;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path);
  out << text;
}

}  // namespace relbn
