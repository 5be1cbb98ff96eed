#pragma once

#include <string>
#include <vector>

#include "relbn/edgecover.hpp"
#include "relbn/model.hpp"

namespace relbn {

struct ParentRef {
  std::string rel;
  std::vector<std::string> args;  // logvars
};

// P(child = 1 | parents). Table index: parent bits with the first parent
// most significant, so entry 0 is "all parents false".
struct Cpt {
  std::string child;
  std::vector<std::string> logvars;
  std::vector<ParentRef> parents;
  std::vector<Rational> table;
};

// Fresh roots are named prefix+bits (Z0, Z01, ...) unless `numbered`, in
// which case they are prefix+counter (A1, A2, ...).
struct CptNaming {
  std::string prefix = "Z";
  bool numbered = false;
  int next = 1;
};

// Appends the child axiom X == Or_cfg (literals(cfg) & Z_cfg) and one fresh
// assessment per configuration. A parent logvar missing from the child's
// logvars is aggregated with an existential.
void append_cpt(RelationalSpec& spec, const Cpt& cpt, CptNaming& naming);
void append_cpt(RelationalSpec& spec, const Cpt& cpt);

// Fragment holding only the child axiom and its fresh roots; parents are
// declared but carry no entries.
RelationalSpec cpt_to_axioms(const Cpt& cpt);

// X == Or_i (Y_i & W_i) with P(W_i = 1) = probs[i].
void append_noisy_or(RelationalSpec& spec, const std::string& child, const std::vector<std::string>& logvars,
                     const std::vector<ParentRef>& parents, const std::vector<Rational>& probs);

// Plate model: `plate Name x` declares a logvar; each variable line is
// `Child(x,y) [| P(x), Q(y)] = p1 p2 ...` with 2^k table entries.
struct PlateModel {
  struct Plate {
    std::string name;
    std::string logvar;
  };
  std::vector<Plate> plates;
  std::vector<Cpt> vars;
};

PlateModel parse_plate(const std::string& text);
RelationalSpec plate_to_spec(const PlateModel& model);

// At domain size 1 every parvariable has one grounding, so the plate model
// is an ordinary network; compares its marginals with inference on the
// encoding and returns one message per mismatch.
std::vector<std::string> verify_plate(const PlateModel& model);

// PRM: classes, associations between classes, and attributes whose parents
// are attributes of the same object or reached through one association.
//
//   class Course x
//   assoc courseOf Course Registration
//   attr Difficult?(Course) = 3/10
//   attr Failed?(Registration) | courseOf.Difficult?, studentOf.Committed? = ...
struct Prm {
  struct Class {
    std::string name;
    std::string logvar;
  };
  struct Assoc {
    std::string name;
    std::string from, to;  // classes of the first and second argument
  };
  struct Parent {
    std::string via;  // association, empty for the same object
    std::string attr;
  };
  struct Attr {
    std::string name;
    std::string cls;
    std::vector<Parent> parents;
    std::vector<Rational> table;
  };
  std::vector<Class> classes;
  std::vector<Assoc> assocs;
  std::vector<Attr> attrs;
};

// Explicit groundings of the guards: `Course 1`, `courseOf 1 3`.
struct Skeleton {
  std::vector<std::pair<std::string, long>> members;
  std::vector<std::pair<std::string, std::pair<long, long>>> links;
};

struct PrmEncoding {
  RelationalSpec spec;
  std::vector<Literal> evidence;  // every guard grounding, absent ones false
  long n = 1;
};

Prm parse_prm(const std::string& text);
Skeleton parse_skeleton(const std::string& text);
PrmEncoding prm_to_spec(const Prm& prm, const Skeleton& skeleton);

// CNF over propositions 1..num_vars; literals are signed DIMACS integers.
struct Cnf {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;
  friend bool operator==(const Cnf&, const Cnf&) = default;
};

Cnf parse_dimacs(const std::string& text);
std::string render_dimacs(const Cnf& cnf);

constexpr int kDefaultVarGuard = 27;

BigInt count_models(const Cnf& cnf, int guard = kDefaultVarGuard);
// Assignments giving every clause exactly one true literal.
BigInt count_one_in_three(const Cnf& cnf);

// Each clause (L1,L2,L3) becomes !L1|B1|B2, L2|B2|B3, !L3|B3|B4, B1|B3|B5
// over five fresh propositions; then #(1-in-3)(gadget(phi)) = #models(phi).
Cnf one_in_three_gadget(const Cnf& phi);

// Rows 1..m must contain a 1 among N columns, columns 1..n a 1 among M
// rows. Proposition A_ij is (i-1)*N + j; cells outside both stay free.
Cnf matrix_problem_to_formula(long m, long n, long M, long N);
BigInt matrix_count_bruteforce(long m, long n, long M, long N);

// Clause pairs sharing a proposition.
std::vector<std::pair<size_t, size_t>> intersection_graph(const Cnf& cnf);

// Layers (s_L - |R|, |L|, |R|, s_R - |L|); unused propositions become free edges.
ClassB linmoncbpc_to_bwgraph(const Cnf& phi);

}  // namespace relbn
