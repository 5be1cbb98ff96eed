#pragma once

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace relbn {

// A logvar or a domain individual (individuals are 1..N).
struct Term {
  bool is_var = true;
  std::string var;
  long ind = 0;

  static Term variable(std::string name) { return Term{true, std::move(name), 0}; }
  static Term individual(long i) { return Term{false, {}, i}; }

  std::string str() const { return is_var ? var : std::to_string(ind); }
  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term&, const Term&) = default;
};

enum class Op { True, False, Eq, Atom, Not, And, Or, Implies, Iff, ForAll, Exists };

// Immutable formula tree with shared structure.
class Formula {
 public:
  Formula();  // True

  static Formula top();
  static Formula bottom();
  static Formula constant(bool b) { return b ? top() : bottom(); }
  static Formula eq(Term a, Term b);
  static Formula atom(std::string rel, std::vector<Term> args = {});
  static Formula negate(Formula f);
  static Formula conj(std::vector<Formula> kids);
  static Formula disj(std::vector<Formula> kids);
  static Formula implies(Formula a, Formula b);
  static Formula iff(Formula a, Formula b);
  static Formula forall(std::string var, Formula body);
  static Formula exists(std::string var, Formula body);

  Op op() const;
  // Relation name for atoms, bound variable for quantifiers.
  const std::string& name() const;
  // Atom arguments; the two sides of an equality.
  const std::vector<Term>& terms() const;
  // Not: one kid; And/Or: any; Implies/Iff: two; quantifiers: the body.
  const std::vector<Formula>& kids() const;
  const Formula& kid(size_t i) const { return kids()[i]; }

  bool is_constant() const { return op() == Op::True || op() == Op::False; }
  bool is_atomic() const { return op() <= Op::Atom; }

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

using Binding = std::map<std::string, long>;

std::set<std::string> free_logvars(const Formula& f);
// Every logvar symbol occurring anywhere, bound or free.
std::set<std::string> logvar_symbols(const Formula& f);
std::set<std::string> relations_in(const Formula& f);
bool has_quantifier(const Formula& f);
size_t formula_size(const Formula& f);

// Evaluates a formula under a binding over domain 1..N, with `interp`
// giving the truth value of each ground atom (relation, args).
using Interpretation = std::function<bool(const std::string&, const std::vector<long>&)>;
bool evaluate(const Formula& f, const Binding& binding, long n, const Interpretation& interp);

// Renames free occurrences of logvars according to `sub`.
Formula substitute(const Formula& f, const std::map<std::string, Term>& sub);

// Folds constants into And/Or/Not/Implies/Iff (absorption).
Formula simplify(const Formula& f);

}  // namespace relbn
