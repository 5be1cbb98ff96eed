#pragma once

#include <vector>

#include "relbn/model.hpp"

namespace relbn {

struct GroundOptions {
  unsigned long long node_cap = 1000000;
};

// Replaces logvars by individuals; forall/exists become And/Or over 1..n
// (children in individual order) and ground equalities fold to true/false.
// Constants are not absorbed into the surrounding connectives.
Formula ground_formula(const Formula& body, const Binding& binding, long n);

// One node per grounding of each relation, in relation order, arguments
// in lexicographic order.
GroundNetwork ground_spec(const RelationalSpec& spec, long n, const GroundOptions& opts = {});

// Induced subnetwork on the ancestor closure of the given atoms.
GroundNetwork relevant_subnetwork(const GroundNetwork& net, const std::vector<GroundAtom>& atoms);
GroundNetwork relevant_subnetwork(const GroundNetwork& net, const Query& query);

// Grounds only the ancestor closure of `atoms`, without materializing the
// full network. Equals relevant_subnetwork(ground_spec(spec, n), atoms).
GroundNetwork ground_for_query(const RelationalSpec& spec, long n, const std::vector<GroundAtom>& atoms,
                               const GroundOptions& opts = {});

// Throws ValidationError unless the atom names a relation with matching
// arity and arguments in 1..n.
void check_atom(const RelationalSpec& spec, long n, const GroundAtom& a);

}  // namespace relbn
