#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "relbn/formula.hpp"
#include "relbn/rational.hpp"

namespace relbn {

struct Relation {
  std::string name;
  int arity = 0;
  friend bool operator==(const Relation&, const Relation&) = default;
  friend auto operator<=>(const Relation&, const Relation&) = default;
};

// Either a definition axiom `rel(head) == body` or an assessment P(rel)=prob.
struct Entry {
  enum class Kind { Definition, Assessment };
  Kind kind = Kind::Assessment;
  std::string rel;
  std::vector<std::string> head;
  Formula body;
  Rational prob;

  static Entry definition(std::string rel, std::vector<std::string> head, Formula body);
  static Entry assessment(std::string rel, Rational prob);
  bool is_definition() const { return kind == Kind::Definition; }
  friend bool operator==(const Entry& a, const Entry& b);
};

class RelationalSpec {
 public:
  std::vector<Relation> relations;
  std::vector<Entry> entries;

  // Adds the relation unless a relation with that name is already present.
  void declare(const std::string& name, int arity);
  void add(Entry e, int arity);

  const Relation* relation(const std::string& name) const;
  const Entry* entry(const std::string& name) const;
  bool is_root(const std::string& name) const;
  bool has(const std::string& name) const { return relation(name) != nullptr; }

  // Relations compared as sets, entries keyed by relation.
  friend bool operator==(const RelationalSpec& a, const RelationalSpec& b);
};

struct GroundAtom {
  std::string rel;
  std::vector<long> args;

  std::string str() const;
  friend bool operator==(const GroundAtom&, const GroundAtom&) = default;
  friend auto operator<=>(const GroundAtom&, const GroundAtom&) = default;
};

struct GroundAtomHash {
  size_t operator()(const GroundAtom& a) const;
};

struct GroundNode {
  GroundAtom atom;
  bool root = true;
  Rational prob;
  Formula body;  // ground, logvar-free; unused for roots
};

class GroundNetwork {
 public:
  long domain_size = 1;

  size_t size() const { return nodes_.size(); }
  const std::vector<GroundNode>& nodes() const { return nodes_; }
  const GroundNode& node(size_t i) const { return nodes_[i]; }
  std::optional<size_t> find(const GroundAtom& a) const;

  size_t add_root(GroundAtom a, Rational p);
  size_t add_defined(GroundAtom a, Formula body);

  // Indices of the atoms referenced by node i's body, deduplicated, in first-occurrence order.
  std::vector<size_t> parents(size_t i) const;
  // Throws ValidationError on cycles or dangling references.
  std::vector<size_t> topological_order() const;
  size_t root_count() const;
  size_t edge_count() const;

  // Node maps compared regardless of insertion order.
  friend bool operator==(const GroundNetwork& a, const GroundNetwork& b);

 private:
  std::vector<GroundNode> nodes_;
  std::unordered_map<GroundAtom, size_t, GroundAtomHash> index_;
};

struct Literal {
  GroundAtom atom;
  bool value = true;
  friend bool operator==(const Literal&, const Literal&) = default;
};

struct Query {
  std::vector<Literal> q;
  std::vector<Literal> e;
  std::optional<Rational> gamma;

  // Equal duplicates merge; a conflicting value throws ValidationError.
  void add_query(Literal l);
  void add_evidence(Literal l);
  std::vector<GroundAtom> atoms() const;
};

struct FragmentLabel {
  enum class Kind {
    PropAnd, PropOr, PropAndNot, DLLiteNF, DLLiteNFWithPrimitiveNegation,
    EL, ALC, QF, FFFOk, FFFO
  };
  Kind kind = Kind::FFFO;
  int k = 0;  // only for FFFOk

  std::string str() const;
  friend bool operator==(const FragmentLabel&, const FragmentLabel&) = default;
};

struct Violation {
  enum class Kind {
    Cycle, UndeclaredRelation, ArityMismatch, DuplicateEntry, StrayLogvar,
    HeadLogvars, MissingEntry, BadProbability
  };
  Kind kind;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  size_t count(Violation::Kind k) const;
  std::string str() const;
};

ValidationReport validate_spec(const RelationalSpec& spec);
void require_valid(const RelationalSpec& spec);

struct DirectedGraph {
  std::vector<std::string> nodes;
  std::set<std::pair<std::string, std::string>> edges;  // (from, to)
  bool has_edge(const std::string& from, const std::string& to) const {
    return edges.count({from, to}) > 0;
  }
  std::vector<std::string> roots() const;
};

// Edge Y -> X iff Y occurs in X's definition body.
DirectedGraph parvariable_graph(const RelationalSpec& spec);

// First match wins: PropAnd, PropOr, PropAndNot, DLLiteNF,
// DLLiteNFWithPrimitiveNegation, EL, ALC, QF, FFFOk (k <= fffo_bound), FFFO.
FragmentLabel classify_fragment(const RelationalSpec& spec, int fffo_bound = 3);

// Every definition body is a conjunction (junction = And) or disjunction
// (junction = Or) of atoms and negated root atoms.
bool junction_shape(const RelationalSpec& spec, Op junction);

// Largest number of distinct logvar symbols in any definition (head plus body).
int max_logvar_count(const RelationalSpec& spec);

}  // namespace relbn
