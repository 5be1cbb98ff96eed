#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "relbn/ground.hpp"
#include "relbn/model.hpp"

namespace relbn {

// 24 unless the RELBN_ROOT_CAP environment variable holds a number.
size_t default_root_cap();

enum class Engine { Auto, BruteForce, PositiveProduct, QfPruned, DLLite };

Engine parse_engine(const std::string& name);
std::string engine_name(Engine e);

struct InferOptions {
  size_t root_cap = default_root_cap();
  GroundOptions ground;
  int fffo_bound = 3;
};

struct InferResult {
  Rational value;
  Engine engine = Engine::Auto;
  unsigned long long work = 0;  // engine-specific step counter
  std::optional<bool> decision;  // P(Q|E) > gamma, when gamma is given
};

// Product of root factors when every defined node agrees with its body; 0 otherwise.
// `values` is indexed like net.nodes().
Rational joint_probability(const GroundNetwork& net, const std::vector<bool>& values);
Rational joint_probability(const GroundNetwork& net, const std::map<GroundAtom, bool>& values);

struct Mass {
  Rational joint;     // P(Q, E)
  Rational evidence;  // P(E)
  unsigned long long leaves = 0;
};

// Sums joint probabilities over every assignment of the network's roots
// (defined nodes are forced). Roots fixed by evidence are not branched on;
// the remaining root count must not exceed `root_cap`.
Mass enumerate_mass(const GroundNetwork& net, const Query& query, size_t root_cap = default_root_cap());

// P(Q|E) by enumeration; P(Q) when E is empty. Throws ZeroEvidence when P(E)=0.
Rational query_probability(const GroundNetwork& net, const Query& query, size_t root_cap = default_root_cap());

// Polynomial path for Prop(and) with positive assignments and, dually,
// Prop(or) with negative assignments. `work` counts visited literals.
Rational positive_query_product(const RelationalSpec& spec, const Query& query,
                                unsigned long long* work = nullptr);
bool positive_product_applies(const RelationalSpec& spec, const Query& query);

// Demand-driven grounding, conditioning on evidenced roots, constant
// folding, ancestor pruning, then enumeration of what is left.
Rational pruned_query_probability(const RelationalSpec& spec, long n, const Query& query,
                                  const InferOptions& opts = {}, unsigned long long* work = nullptr);

InferResult infer(const RelationalSpec& spec, long n, const Query& query, Engine engine = Engine::Auto,
                  const InferOptions& opts = {});

// True iff P(Q|E) > gamma, exactly. Requires query.gamma.
bool decide_threshold(const RelationalSpec& spec, long n, const Query& query, const InferOptions& opts = {});

// Replaces the given ground atoms by constants and folds the result.
Formula condition_formula(const Formula& f, const std::map<GroundAtom, bool>& fixed);

}  // namespace relbn
