#include <gtest/gtest.h>

#include "gen.hpp"
#include "relbn/dllite.hpp"
#include "relbn/errors.hpp"
#include "relbn/ground.hpp"
#include "relbn/infer.hpp"
#include "relbn/lang.hpp"

using namespace relbn;

namespace {

std::string data(const std::string& name) { return read_file(std::string(RELBN_DATA_DIR) + "/" + name); }

RelationalSpec exists_spec(const std::string& p) {
  return parse_spec("prob r(x,y) = " + p + ". def a(x) := exists y: r(x,y).");
}

// Largest P(assignment) over every assignment of the roots consistent with evidence.
Rational exhaustive_mpe(const RelationalSpec& spec, long n, const std::vector<Literal>& evidence) {
  GroundNetwork net = ground_spec(normalize(spec).spec, n);
  std::vector<size_t> order = net.topological_order();
  std::vector<size_t> roots;
  for (size_t i = 0; i < net.size(); ++i) {
    if (net.node(i).root) roots.push_back(i);
  }
  Rational best(0);
  for (unsigned long long m = 0; m < (1ULL << roots.size()); ++m) {
    std::vector<bool> v(net.size());
    for (size_t j = 0; j < roots.size(); ++j) v[roots[j]] = (m >> j) & 1;
    for (size_t i : order) {
      if (net.node(i).root) continue;
      v[i] = evaluate(net.node(i).body, {}, n, [&](const std::string& rel, const std::vector<long>& args) {
        return static_cast<bool>(v[*net.find({rel, args})]);
      });
    }
    bool ok = true;
    for (const Literal& l : evidence) ok &= v[*net.find(l.atom)] == l.value;
    if (ok) best = std::max(best, joint_probability(net, v));
  }
  return best;
}

}  // namespace

TEST(Normalize, FamilyAuxiliaries) {
  NormalizedDllite nd = normalize(parse_spec(data("family.rbn")));
  ASSERT_EQ(nd.roles, (std::vector<std::string>{"parentOf"}));
  EXPECT_EQ(nd.aux.at("parentOf"), (std::pair<std::string, std::string>{"e_parentOf", "e_parentOf_inv"}));
  EXPECT_EQ(render_formula(nd.spec.entry("father")->body), "male(x) & e_parentOf(x)");
  EXPECT_EQ(render_formula(nd.spec.entry("son")->body), "male(x) & e_parentOf_inv(x)");
  EXPECT_EQ(render_formula(nd.spec.entry("e_parentOf")->body), "exists y: parentOf(x,y)");
  EXPECT_EQ(normalize(nd.spec).spec, nd.spec);
}

TEST(Normalize, NoRolesUnchanged) {
  RelationalSpec s = parse_spec("prob a(x) = 1/2. def b(x) := a(x).");
  EXPECT_EQ(normalize(s).spec, s);
  EXPECT_TRUE(normalize(s).roles.empty());
}

TEST(Normalize, NameCollisionsGetSuffix) {
  NormalizedDllite nd = normalize(parse_spec("prob e_r(x) = 1/2. prob r(x,y) = 1/2. def a(x) := e_r(x) & exists y: r(x,y)."));
  EXPECT_EQ(nd.aux.at("r").first, "e_r_1");
}

TEST(Normalize, RejectsOtherFragments) {
  EXPECT_THROW(normalize(parse_spec(data("friends.rbn"))), UnsupportedError);
}

TEST(InferPositive, WorkedExamples) {
  RelationalSpec s = exists_spec("1/2");
  EXPECT_EQ(infer_positive(s, 2, parse_query("a(1)=1")), Rational(3, 4));
  EXPECT_EQ(infer_positive(s, 2, parse_query("e_r(1)=1, e_r_inv(2)=1")), Rational(5, 8));
  EXPECT_EQ(infer_positive(s, 2, parse_query("a(1)=1 | r(1,2)=1")), Rational(1));
}

TEST(InferPositive, NegativeDefinedRejected) {
  EXPECT_THROW(infer_positive(exists_spec("1/2"), 2, parse_query("a(1)=0")), UnsupportedError);
  EXPECT_THROW(infer_positive(exists_spec("1/2"), 2, parse_query("a(1)=1 | r(1,2)=0")), UnsupportedError);
  EXPECT_FALSE(dllite_applies(exists_spec("1/2"), parse_query("a(1)=0").q));
}

TEST(InferPositive, FamilyWithNegatedPrimitive) {
  RelationalSpec s = parse_spec(data("family.rbn"));
  for (const char* q : {"mother(1)=1", "daughter(2)=1 | male(1)=0", "father(1)=1, son(2)=1", "female(1)=1 | male(2)=1"}) {
    Query query = parse_query(q);
    EXPECT_EQ(infer_positive(s, 2, query), infer(s, 2, query, Engine::BruteForce).value) << q;
  }
}

TEST(InferPositive, ExtremeProbabilities) {
  EXPECT_EQ(infer_positive(exists_spec("0"), 3, parse_query("a(1)=1")), Rational(0));
  EXPECT_EQ(infer_positive(exists_spec("1"), 3, parse_query("a(1)=1")), Rational(1));
  EXPECT_THROW(infer_positive(exists_spec("0"), 3, parse_query("a(2)=1 | a(1)=1")), ZeroEvidence);
}

TEST(InferPositive, MatchesEnumeration) {
  gen::Rng rng(99);
  int checked = 0;
  while (checked < 60) {
    gen::DlInstance inst = gen::dllite_spec(rng, static_cast<int>(gen::uniform(rng, 1, 2)));
    long n = gen::uniform(rng, 1, 3);
    Query q;
    q.add_query({{gen::pick(rng, inst.defined), {gen::uniform(rng, 1, n)}}, true});
    if (gen::coin(rng)) q.add_evidence({{gen::pick(rng, inst.primitives), {gen::uniform(rng, 1, n)}}, gen::coin(rng)});
    GroundNetwork net = ground_spec(inst.spec, n);
    if (relevant_subnetwork(net, q).root_count() > 18) continue;
    Rational want;
    bool zero = false;
    try {
      want = query_probability(relevant_subnetwork(net, q), q);
    } catch (const ZeroEvidence&) {
      zero = true;
    }
    if (zero) {
      EXPECT_THROW(infer_positive(inst.spec, n, q), ZeroEvidence);
    } else {
      EXPECT_EQ(infer_positive(inst.spec, n, q), want) << render_spec(inst.spec) << render_query(q);
    }
    ++checked;
  }
}

TEST(RoleFactor, ForcedEdgesAndDemands) {
  RoleReduction r{"r", Rational(1, 2), {1}, {}, {}};
  EXPECT_EQ(role_factor(r, 2), Rational(3, 4));
  r.forced = {{1, 2}};
  EXPECT_EQ(role_factor(r, 2), Rational(1, 2));
  RoleReduction both{"r", Rational(1, 2), {1}, {2}, {}};
  EXPECT_EQ(role_factor(both, 2), Rational(5, 8));
}

TEST(Mpe, WorkedExamples) {
  std::vector<Literal> e = parse_query("a(1)=1, a(2)=1").q;
  MpeResult low = mpe(exists_spec("1/4"), 2, e);
  EXPECT_EQ(low.prob, Rational(9, 256));
  EXPECT_TRUE(low.assignment.at({"r", {1, 1}}));
  EXPECT_TRUE(low.assignment.at({"r", {2, 1}}));
  EXPECT_FALSE(low.assignment.at({"r", {1, 2}}));
  EXPECT_FALSE(low.assignment.at({"r", {2, 2}}));

  MpeResult high = mpe(exists_spec("3/4"), 2, e);
  EXPECT_EQ(high.prob, Rational(81, 256));
  for (long a = 1; a <= 2; ++a) {
    for (long b = 1; b <= 2; ++b) EXPECT_TRUE(high.assignment.at({"r", {a, b}}));
  }
}

TEST(Mpe, MajorityWithoutDemands) {
  RelationalSpec s = parse_spec("prob a(x) = 1/3. prob b(x) = 3/4. def c(x) := a(x) & b(x).");
  MpeResult r = mpe(s, 2, {});
  EXPECT_FALSE(r.assignment.at({"a", {1}}));
  EXPECT_TRUE(r.assignment.at({"b", {2}}));
  EXPECT_FALSE(r.assignment.at({"c", {1}}));
  EXPECT_EQ(r.prob, Rational(2 * 2 * 3 * 3, 3 * 3 * 4 * 4));
}

TEST(Mpe, InconsistentEvidence) {
  RelationalSpec s = parse_spec("prob a(x) = 1/3. def b(x) := !a(x).");
  MpeResult r = mpe(s, 1, parse_query("b(1)=1, a(1)=1").q);
  EXPECT_TRUE(r.inconsistent);
  EXPECT_EQ(r.prob, Rational(0));
}

TEST(Mpe, MatchesExhaustiveMaximum) {
  gen::Rng rng(17);
  int checked = 0;
  while (checked < 40) {
    gen::DlInstance inst = gen::dllite_spec(rng, 1);
    long n = gen::uniform(rng, 1, 3);
    std::vector<Literal> e;
    e.push_back({{gen::pick(rng, inst.defined), {gen::uniform(rng, 1, n)}}, true});
    if (gen::coin(rng)) e.push_back({{gen::pick(rng, inst.primitives), {gen::uniform(rng, 1, n)}}, gen::coin(rng)});
    if (ground_spec(inst.spec, n).root_count() > 16) continue;
    MpeResult r = mpe(inst.spec, n, e);
    Rational best = exhaustive_mpe(inst.spec, n, e);
    EXPECT_EQ(r.prob, best) << render_spec(inst.spec);
    EXPECT_EQ(r.inconsistent, best.is_zero());
    ++checked;
  }
}
