#include <doctest.h>

#include <cmath>
#include <random>

#include "doxa/parse.hpp"
#include "doxa/structured.hpp"

using namespace doxa;

namespace {

// Runs both weighing backends and checks bucket-for-bucket agreement.
void check_engines_agree(const CountQuery& q, int domain_size, double rel = 1e-9) {
  EngineOptions classes_only;
  classes_only.allow_structured = false;
  const BucketWeights a = detail::weigh_buckets_classes(q, domain_size, classes_only);

  auto plan = detail::plan_structured(q, domain_size);
  REQUIRE_MESSAGE(plan.has_value(), "structured plan expected for this shape");
  detail::StructuredRun run(*plan, 1'000'000'000);
  const BucketWeights b = run.run();

  REQUIRE(a.log_weight.size() == b.log_weight.size());
  for (std::size_t i = 0; i < a.log_weight.size(); ++i) {
    INFO("bucket ", i, ": classes=", a.log_weight[i], " structured=", b.log_weight[i]);
    if (a.log_weight[i] == kNegInf) {
      CHECK(b.log_weight[i] == kNegInf);
    } else {
      REQUIRE(b.log_weight[i] != kNegInf);
      CHECK(std::abs(a.log_weight[i] - b.log_weight[i]) <=
            rel * (1.0 + std::abs(a.log_weight[i])));
    }
  }
}

CountQuery query_from(const std::string& kb_text, const std::string& query_text,
                      const Rational& tau) {
  const KnowledgeBase kb = parse_knowledge_base(kb_text);
  const KnowledgeBase qkb = parse_knowledge_base(
      kb_text.substr(0, kb_text.find('\n') + 1) + query_text + "\n");
  CountQuery q;
  q.vocabulary = kb.vocabulary;
  q.statistical = kb.statistical;
  q.tau = tau;
  q.tracked = {kb.facts_conjunction(), qkb.facts.front()};
  return q;
}

}  // namespace

TEST_CASE("engines agree on the bird base") {
  CountQuery q = query_from(
      "pred Red Cardinal. const b.\n"
      "prop(Cardinal(x); not Red(x)) ~= 0.1\nprop(Cardinal(x); Red(x)) ~= 0.7\n",
      "Cardinal(b) and Red(b)", Rational(1, 10));
  for (int n : {5, 12, 23}) check_engines_agree(q, n);
}

TEST_CASE("engines agree on an unconditional window") {
  CountQuery q = query_from("pred P Q. const c.\nprop(P(x)) ~= 0.4\n", "Q(c)", Rational(1, 5));
  for (int n : {4, 9, 17}) check_engines_agree(q, n);
}

TEST_CASE("engines agree on two crossing unconditional windows") {
  CountQuery q = query_from("pred P Q. const c.\nprop(P(x)) ~= 0.4\nprop(Q(x)) <~ 0.3\n",
                            "P(c) and not Q(c)", Rational(1, 7));
  for (int n : {6, 11, 19}) check_engines_agree(q, n);
}

TEST_CASE("engines agree on the representative-set shape") {
  // the rewritten birdwatcher base: a near-zero class S with a window on it
  CountQuery q = query_from(
      "pred Red Cardinal S. const b.\n"
      "prop(Cardinal(x); not Red(x)) ~= 0.1\n"
      "prop(Cardinal(x); Red(x)) ~= 0.7\n"
      "prop(Red(x); S(x)) ~= 0.8\n"
      "prop(S(x)) ~= 0\n"
      "S(b)\n",
      "Cardinal(b)", Rational(1, 4));
  for (int n : {8, 13, 21}) check_engines_agree(q, n);
}

TEST_CASE("engines agree with no constants") {
  CountQuery q;
  const KnowledgeBase kb =
      parse_knowledge_base("pred P Q. const.\nprop(Q(x); P(x)) ~= 0.5\n");
  q.vocabulary = kb.vocabulary;
  q.statistical = kb.statistical;
  q.tau = Rational(1, 6);
  q.tracked = {Formula::truth()};
  for (int n : {3, 10, 18}) check_engines_agree(q, n);
}

TEST_CASE("engines agree on vacuous windows") {
  // impossible window: proportion of P must be within 1/50 of both 0 and 1
  CountQuery q = query_from("pred P. const c.\nprop(P(x)) ~= 0\nprop(P(x)) ~= 1\n", "P(c)",
                            Rational(1, 50));
  for (int n : {3, 7}) check_engines_agree(q, n);
}

TEST_CASE("engines agree across random supported shapes") {
  std::mt19937 rng(555);
  std::uniform_int_distribution<int> kd(1, 3), nd(3, 16), bound(1, 9), taud(3, 9);
  int done = 0;
  for (int trial = 0; trial < 200 && done < 60; ++trial) {
    const int k = kd(rng);
    std::vector<std::string> preds;
    for (int i = 0; i < k; ++i) preds.push_back("P" + std::to_string(i));
    const Vocabulary vocab(preds, {"c"});
    CountQuery q;
    q.vocabulary = vocab;
    q.tau = Rational(1, taud(rng));

    // one unconditional window on P0, optionally one conditional window
    // whose condition is P0 or its complement
    ProportionConstraint pc;
    pc.numerator = Formula::pred(0, Term::x());
    pc.cmp = trial % 2 ? ProportionConstraint::Cmp::ApproxEq : ProportionConstraint::Cmp::ApproxLe;
    pc.bound = Rational(bound(rng), 10);
    q.statistical.push_back(pc);
    if (k >= 2) {
      ProportionConstraint cc;
      cc.numerator = Formula::pred(1, Term::x());
      cc.denominator = trial % 3 ? Formula::pred(0, Term::x())
                                 : Formula::negation(Formula::pred(0, Term::x()));
      cc.cmp = trial % 2 ? ProportionConstraint::Cmp::ApproxLe : ProportionConstraint::Cmp::ApproxEq;
      cc.bound = Rational(bound(rng), 10);
      q.statistical.push_back(cc);
    }
    q.tracked = {Formula::truth(), Formula::pred(rng() % k, Term::con(0))};

    const int n = nd(rng);
    if (!detail::plan_structured(q, n)) continue;
    ++done;
    check_engines_agree(q, n);
  }
  CHECK(done >= 40);
}

TEST_CASE("structured engine declines unsupported shapes") {
  // overlapping conditions cannot be grouped
  const KnowledgeBase kb = parse_knowledge_base(
      "pred P Q R. const.\n"
      "prop(R(x); P(x)) ~= 0.5\nprop(R(x); P(x) or Q(x)) ~= 0.5\n");
  CountQuery q;
  q.vocabulary = kb.vocabulary;
  q.statistical = kb.statistical;
  q.tau = Rational(1, 10);
  q.tracked = {Formula::truth()};
  CHECK_FALSE(detail::plan_structured(q, 10).has_value());
  // the dispatcher falls back to class enumeration
  const BucketWeights w = weigh_buckets(q, 10);
  CHECK(w.engine == "classes");
}
