#include <doctest.h>

#include <cmath>
#include <random>

#include "doxa/compare.hpp"
#include "doxa/methods.hpp"
#include "doxa/parse.hpp"

using namespace doxa;

namespace {

const char* kBirdBase =
    "pred Red Cardinal. const b.\n"
    "prop(Cardinal(x); not Red(x)) ~= 0.1\n"
    "prop(Cardinal(x); Red(x)) ~= 0.7\n";

KnowledgeBase birdwatcher() {
  return parse_knowledge_base(std::string(kBirdBase) + "bel(Red(b)) = 0.8\n");
}

/// A stub process with handpicked conditionals, for checking the mixture
/// arithmetic without any world machinery.
InferenceProcess stub_bird_process() {
  InferenceProcess p;
  p.name = "stub";
  p.evaluate = [](const Formula& q, const KnowledgeBase& kb) {
    EvalResult r;
    const Vocabulary& v = kb.vocabulary;
    const Formula red_b = Formula::pred(*v.predicate_index("Red"), Term::con(0));
    const Formula card_b = Formula::pred(*v.predicate_index("Cardinal"), Term::con(0));
    const bool given_red = kb.facts_conjunction().equals(red_b);
    const bool given_notred = kb.facts_conjunction().equals(Formula::negation(red_b));
    if (q.equals(red_b)) {
      r.value = 0.571;
      return r;
    }
    if (q.equals(Formula::negation(red_b))) {
      r.value = 0.429;
      return r;
    }
    if (q.equals(card_b)) {
      r.value = given_red ? 0.7 : (given_notred ? 0.1 : 0.0);
      return r;
    }
    r.value = 0.5;
    return r;
  };
  return p;
}

}  // namespace

TEST_CASE("cef mixes the conditioned answers with projected weights") {
  const KnowledgeBase kb = birdwatcher();
  const Formula card_b = Formula::pred(1, Term::con(0));
  const MethodResult r = cef(stub_bird_process(), card_b, kb);
  REQUIRE(r.defined());
  CHECK(*r.value == doctest::Approx(0.8 * 0.7 + 0.2 * 0.1).epsilon(1e-9));
  REQUIRE(r.atom_distribution.has_value());
  CHECK((*r.atom_distribution)[1] == doctest::Approx(0.8).epsilon(1e-9));
}

TEST_CASE("cef with no beliefs is the process itself") {
  const KnowledgeBase kb = parse_knowledge_base(kBirdBase);
  const Formula red_b = Formula::pred(0, Term::con(0));
  const MethodResult r = cef(stub_bird_process(), red_b, kb);
  REQUIRE(r.defined());
  CHECK(*r.value == doctest::Approx(0.571));
}

TEST_CASE("cew extends conditioning exactly on objective bases") {
  std::mt19937 rng(31);
  std::uniform_int_distribution<int> nd(4, 24), bd(1, 9), dd(3, 6);
  for (int t = 0; t < 30; ++t) {
    KnowledgeBase kb;
    kb.vocabulary = Vocabulary({"P", "Q"}, {"c"});
    ProportionConstraint pc;
    pc.numerator = Formula::pred(0, Term::x());
    pc.cmp = t % 2 ? ProportionConstraint::Cmp::ApproxEq : ProportionConstraint::Cmp::ApproxLe;
    pc.bound = Rational(bd(rng), 10);
    kb.statistical.push_back(pc);
    if (t % 3 == 0) kb.facts.push_back(Formula::pred(1, Term::con(0)));
    const Formula query = Formula::pred(t % 2, Term::con(0));
    const int n = nd(rng);
    const Rational tau(1, dd(rng));
    const InferenceProcess I = finite_rw_process(n, tau);
    const EvalResult direct = I.evaluate(query, kb);
    const MethodResult viacew = cew(I, query, kb);
    if (!direct.defined() || direct.vacuous) {
      CHECK(viacew.reason == Reason::VacuousConditioning);
      continue;
    }
    REQUIRE(viacew.defined());
    CHECK(*viacew.value == doctest::Approx(*direct.value).epsilon(1e-8).scale(1.0));
  }
}

TEST_CASE("cew reproduces the jeffrey mixture on partition bases") {
  std::mt19937 rng(32);
  std::uniform_int_distribution<int> nd(6, 20), ad(1, 9);
  for (int t = 0; t < 25; ++t) {
    KnowledgeBase kb;
    kb.vocabulary = Vocabulary({"P", "Q"}, {"c"});
    const Formula p_c = Formula::pred(0, Term::con(0));
    const int a = ad(rng);
    BeliefConstraint b1{p_c, Formula::truth(), BeliefConstraint::Cmp::Eq, Rational(a, 10)};
    BeliefConstraint b2{Formula::negation(p_c), Formula::truth(), BeliefConstraint::Cmp::Eq,
                        Rational(10 - a, 10)};
    kb.beliefs = {b1, b2};
    const Formula query = Formula::pred(1, Term::con(0));
    const int n = nd(rng);
    const Rational tau(1, 4);
    const InferenceProcess I = finite_rw_process(n, tau);

    const MethodResult r = cew(I, query, kb);
    REQUIRE(r.defined());

    KnowledgeBase kb_pos = kb.objective_part();
    kb_pos.facts.push_back(p_c);
    KnowledgeBase kb_neg = kb.objective_part();
    kb_neg.facts.push_back(Formula::negation(p_c));
    const double mixture = (a / 10.0) * *I.evaluate(query, kb_pos).value +
                           ((10 - a) / 10.0) * *I.evaluate(query, kb_neg).value;
    CHECK(*r.value == doctest::Approx(mixture).epsilon(1e-8).scale(1.0));
  }
}

TEST_CASE("cew and cef agree for world-based processes") {
  std::mt19937 rng(33);
  std::uniform_int_distribution<int> nd(6, 18), ad(1, 9), dd(3, 6);
  int checked = 0;
  for (int t = 0; t < 40; ++t) {
    KnowledgeBase kb;
    kb.vocabulary = Vocabulary({"P", "Q"}, {"c"});
    ProportionConstraint pc;
    pc.numerator = Formula::pred(0, Term::x());
    pc.cmp = ProportionConstraint::Cmp::ApproxEq;
    pc.bound = Rational(ad(rng), 10);
    kb.statistical.push_back(pc);
    const Formula p_c = Formula::pred(0, Term::con(0));
    const Formula q_c = Formula::pred(1, Term::con(0));
    BeliefConstraint b1{p_c, Formula::truth(),
                        t % 2 ? BeliefConstraint::Cmp::Eq : BeliefConstraint::Cmp::Le,
                        Rational(ad(rng), 10)};
    kb.beliefs = {b1};
    if (t % 3 == 0) {
      BeliefConstraint b2{Formula::conjunction(p_c, q_c), Formula::truth(),
                          BeliefConstraint::Cmp::Le, Rational(ad(rng), 10)};
      kb.beliefs.push_back(b2);
    }
    const InferenceProcess I = finite_rw_process(nd(rng), Rational(1, dd(rng)));
    const MethodResult a = cew(I, q_c, kb);
    const MethodResult b = cef(I, q_c, kb);
    if (!a.defined() || !b.defined()) {
      CHECK(a.defined() == b.defined());
      continue;
    }
    ++checked;
    CHECK(*a.value == doctest::Approx(*b.value).epsilon(1e-8).scale(1.0));
  }
  CHECK(checked >= 20);
}

TEST_CASE("the tweety example is undefined directly but defined in the limit") {
  const KnowledgeBase kb = parse_knowledge_base(
      "pred Fly Red Bird. const Tweety.\n"
      "prop(Fly(x); Bird(x)) ~= 1\nBird(Tweety)\n"
      "bel(Fly(Tweety)) = 0\nbel(Red(Tweety)) = 1\n");
  const Formula red = Formula::pred(1, Term::con(0));

  SUBCASE("on the limit process the projection has no finite target") {
    const MethodResult r = cef(rw_limit_process(SweepSchedule::quick()), red, kb);
    CHECK_FALSE(r.defined());
    CHECK(r.reason == Reason::InfiniteCrossEntropy);
  }
  SUBCASE("swept at finite sizes the value is exactly one") {
    SweepSchedule s = SweepSchedule::quick();
    const MethodResult r = cef_limit(red, kb, s);
    REQUIRE(r.defined());
    CHECK(*r.value == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("the me process reproduces the worked values") {
  SUBCASE("conditioning on the red sighting pins the conditional") {
    const auto kb = parse_knowledge_base(std::string(kBirdBase) + "Red(b)\n");
    const MethodResult r = me_process(Formula::pred(1, Term::con(0)), kb);
    REQUIRE(r.defined());
    CHECK(*r.value == doctest::Approx(0.7).epsilon(1e-9));
  }
  SUBCASE("marginal of red without facts") {
    const auto kb = parse_knowledge_base(kBirdBase);
    const MethodResult r = me_process(Formula::pred(0, Term::con(0)), kb);
    REQUIRE(r.defined());
    CHECK(*r.value == doctest::Approx(0.570963).epsilon(1e-4));
  }
  SUBCASE("no constraints gives the even bet") {
    const auto kb = parse_knowledge_base("pred P. const c.\ntrue\n");
    const MethodResult r = me_process(Formula::pred(0, Term::con(0)), kb);
    REQUIRE(r.defined());
    CHECK(*r.value == doctest::Approx(0.5).epsilon(1e-10));
  }
  SUBCASE("subjective bases are rejected") {
    const MethodResult r = me_process(Formula::pred(0, Term::con(0)), birdwatcher());
    CHECK(r.reason == Reason::NotSimpleKB);
  }
  SUBCASE("facts about a different constant are rejected") {
    const auto kb = parse_knowledge_base("pred P. const c d.\nP(d)\n");
    const MethodResult r = me_process(Formula::pred(0, Term::con(0)), kb);
    CHECK(r.reason == Reason::NotSimpleKB);
  }
}

TEST_CASE("rs rewrites and sweeps to the stated belief") {
  const KnowledgeBase kb = parse_knowledge_base("pred Red. const c.\nbel(Red(c)) = 0.8\n");
  SweepSchedule s;
  s.domain_sizes = {50, 100, 200, 400, 800};
  s.tolerances = {Rational(1, 10), Rational(1, 20)};
  s.epsilon = 1e-2;
  s.tau_stability = 0.1;
  const MethodResult r = rs_limit(Formula::pred(0, Term::con(0)), kb, s);
  REQUIRE(r.defined());
  CHECK(*r.value == doctest::Approx(0.8).epsilon(0.05));
  CHECK(r.note.find("prop(Red(x); S(x)) ~= 4/5") != std::string::npos);
  CHECK(r.note.find("prop(S(x)) ~= 0") != std::string::npos);
}

TEST_CASE("rs with an empty belief base reports the conditioned query as-is") {
  const KnowledgeBase kb = parse_knowledge_base("pred Red. const c.\ntrue\n");
  const InferenceProcess I = finite_rw_process(40, Rational(1, 10));
  const MethodResult r = rs(I, Formula::pred(0, Term::con(0)), kb);
  REQUIRE(r.defined());
  CHECK(r.note.find("prop(S(x)) ~= 0") != std::string::npos);
  CHECK(r.note.find("S(c)") != std::string::npos);
}

TEST_CASE("rs refuses belief bases about several constants") {
  const KnowledgeBase kb =
      parse_knowledge_base("pred Red. const c d.\nbel(Red(c)) = 0.5 & bel(Red(d)) = 0.5\n");
  const MethodResult r = rs(finite_rw_process(20, Rational(1, 10)),
                            Formula::pred(0, Term::con(0)), kb);
  CHECK(r.reason == Reason::NotAboutConstant);
}

TEST_CASE("sequential updating") {
  const KnowledgeBase objective = parse_knowledge_base(kBirdBase);
  const Formula red_b = Formula::pred(0, Term::con(0));
  const Formula card_b = Formula::pred(1, Term::con(0));
  const InferenceProcess I = stub_bird_process();

  SUBCASE("a single constraint matches the concurrent update") {
    BeliefConstraint b{red_b, Formula::truth(), BeliefConstraint::Cmp::Eq, Rational(4, 5)};
    KnowledgeBase kb = objective;
    kb.beliefs = {b};
    const MethodResult seq = sequential_update(I, card_b, objective, {b});
    const MethodResult conc = cef(I, card_b, kb);
    REQUIRE(seq.defined());
    REQUIRE(conc.defined());
    CHECK(*seq.value == doctest::Approx(*conc.value).epsilon(1e-9));
  }

  SUBCASE("conditioning-style steps commute") {
    const InferenceProcess W = finite_rw_process(16, Rational(1, 4));
    const KnowledgeBase plain = parse_knowledge_base("pred P Q. const c.\ntrue\n");
    const Formula p_c = Formula::pred(0, Term::con(0));
    const Formula q_c = Formula::pred(1, Term::con(0));
    BeliefConstraint cert_p{p_c, Formula::truth(), BeliefConstraint::Cmp::Eq, Rational(1)};
    BeliefConstraint cert_q{q_c, Formula::truth(), BeliefConstraint::Cmp::Eq, Rational(1)};
    const Formula query = Formula::conjunction(p_c, q_c);
    const MethodResult ab = sequential_update(W, query, plain, {cert_p, cert_q});
    const MethodResult ba = sequential_update(W, query, plain, {cert_q, cert_p});
    KnowledgeBase both = plain;
    both.beliefs = {cert_p, cert_q};
    const MethodResult conc = cef(W, query, both);
    REQUIRE(ab.defined());
    REQUIRE(ba.defined());
    REQUIRE(conc.defined());
    CHECK(*ab.value == doctest::Approx(*ba.value).epsilon(1e-9));
    CHECK(*ab.value == doctest::Approx(*conc.value).epsilon(1e-8));
  }

  SUBCASE("overlapping soft constraints are order dependent") {
    const InferenceProcess W = finite_rw_process(16, Rational(1, 4));
    const KnowledgeBase plain = parse_knowledge_base("pred P Q. const c.\ntrue\n");
    const Formula p_c = Formula::pred(0, Term::con(0));
    const Formula pq = Formula::conjunction(p_c, Formula::pred(1, Term::con(0)));
    BeliefConstraint soft_p{p_c, Formula::truth(), BeliefConstraint::Cmp::Eq, Rational(9, 10)};
    BeliefConstraint soft_pq{pq, Formula::truth(), BeliefConstraint::Cmp::Eq, Rational(1, 10)};
    const Formula query = Formula::pred(1, Term::con(0));
    const MethodResult ab = sequential_update(W, query, plain, {soft_p, soft_pq});
    const MethodResult ba = sequential_update(W, query, plain, {soft_pq, soft_p});
    REQUIRE(ab.defined());
    REQUIRE(ba.defined());
    CHECK(std::abs(*ab.value - *ba.value) > 1e-4);
  }
}

TEST_CASE("comparison on an objective base marks everything equal to conditioning") {
  const KnowledgeBase kb = parse_knowledge_base("pred P. const c.\nprop(P(x)) ~= 0.6\n");
  SweepSchedule s = SweepSchedule::quick();
  const MethodComparison cmp = compare_methods(Formula::pred(0, Term::con(0)), kb, s, 0.05);
  CHECK(cmp.all_pass());
  const MethodResult* rs_row = cmp.find("rs");
  REQUIRE(rs_row != nullptr);
  CHECK(rs_row->reason == Reason::Inapplicable);
}

TEST_CASE("skipping zero-weight mixture terms never changes the value") {
  // beliefs pin all mass on one atom; the skipped terms are still evaluable
  const KnowledgeBase kb = parse_knowledge_base(
      "pred Red Cardinal. const b.\n"
      "prop(Cardinal(x); not Red(x)) ~= 0.1\nprop(Cardinal(x); Red(x)) ~= 0.7\n"
      "bel(Red(b)) = 1\n");
  const Formula card = Formula::pred(1, Term::con(0));
  const InferenceProcess I = finite_rw_process(40, Rational(1, 10));
  const MethodResult r = cef(I, card, kb);
  REQUIRE(r.defined());

  // full mixture including the zero-weight terms, computed by hand
  const AtomSet atoms = atoms_over({Formula::pred(0, Term::con(0))});
  double full = 0.0;
  for (int j = 0; j < atoms.atom_count(); ++j) {
    const double w = (*r.atom_distribution)[j];
    const KnowledgeBase cond = kb.objective_part().with_facts({atoms.atom_formula(j)});
    const EvalResult term = I.evaluate(card, cond);
    REQUIRE(term.defined());
    full += w * *term.value;
  }
  CHECK(*r.value == doctest::Approx(full).epsilon(1e-12));
}
