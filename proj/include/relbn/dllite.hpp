#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "relbn/model.hpp"

namespace relbn {

// A DLLite spec whose existential restrictions have been replaced by
// auxiliary concepts e_r(x) := exists y: r(x,y) and e_r_inv(x) := exists y: r(y,x).
struct NormalizedDllite {
  RelationalSpec spec;
  std::vector<std::string> roles;
  std::map<std::string, std::pair<std::string, std::string>> aux;  // role -> (e_r, e_r_inv)
};

// Requires a DLLiteNF or DLLiteNFWithPrimitiveNegation spec. Idempotent:
// auxiliary concepts already present with the expected body are reused.
NormalizedDllite normalize(const RelationalSpec& spec);

// Demands on one role after evidence propagation.
struct RoleReduction {
  std::string role;
  Rational alpha;
  std::set<long> demand;                    // individuals a with e_r(a) required
  std::set<long> demand_inv;                // individuals a with e_r_inv(a) required
  std::set<std::pair<long, long>> forced;   // role groundings fixed true by evidence
};

// alpha^|forced| times the probability that the remaining demands are met,
// computed through the four-layer edge-cover partition function.
Rational role_factor(const RoleReduction& r, long n);

// True when the spec is in a DLLite fragment and every assignment is one
// the polynomial engine admits (no negative defined or role atoms).
bool dllite_applies(const RelationalSpec& spec, const std::vector<Literal>& literals);

// P(Q|E) for DLLite specs; query atoms may name the auxiliary concepts.
Rational infer_positive(const RelationalSpec& spec, long n, const Query& query,
                        unsigned long long* work = nullptr);

struct MpeResult {
  std::map<GroundAtom, bool> assignment;  // every atom of the normalized grounding
  Rational prob;                          // P(assignment), which includes E
  bool inconsistent = false;
};

MpeResult mpe(const RelationalSpec& spec, long n, const std::vector<Literal>& evidence);

}  // namespace relbn
