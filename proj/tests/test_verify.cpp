#include "doctest.h"
#include "locdiag/verify.hpp"

using namespace locdiag;

TEST_CASE("conjugation identities hold and corruption is caught") {
  for (const auto& id : conjugation_identity_ids()) {
    CAPTURE(id);
    Report ok = verify_conjugation_identity(id);
    CHECK(ok.verdict == Verdict::pass);
    CHECK(ok.witness.at("entries").get<int>() > 0);
    Report bad = verify_conjugation_identity(id, true);
    CHECK(bad.verdict == Verdict::fail);
    auto w = bad.witness.at("counterexample");
    CHECK(w.at("mode") == "symbolic");
    CHECK(w.contains("row"));
    CHECK(w.at("expected") != w.at("actual"));
  }
  CHECK_THROWS_AS(verify_conjugation_identity("E8"), std::invalid_argument);
}

TEST_CASE("char2 examples") {
  auto a3 = verify_char2('a', FieldSpec::gf(3), 2);
  CHECK(a3.verdict == Verdict::pass);
  CHECK(a3.witness.at("covered") == 81);
  CHECK(verify_char2('a', FieldSpec::qq(), 3, 10).verdict == Verdict::statistical_pass);
  CHECK_THROWS_AS(verify_char2('a', FieldSpec::gf(2), 2), std::invalid_argument);
  for (int n = 2; n <= 5; ++n) {
    auto b = verify_char2('b', FieldSpec::gf(2), n);
    CAPTURE(n);
    CHECK(b.verdict == Verdict::pass);
    CHECK(b.witness.at("rank") == n * n - 1);
    CHECK(b.witness.at("incidence_matches_derivative") == true);
  }
}

TEST_CASE("commutator plus scalar") {
  auto g3 = verify_commutator_scalar(FieldSpec::gf(3), 2);
  CHECK(g3.verdict == Verdict::pass);
  CHECK(g3.witness.at("covered") == 81);
  CHECK(verify_commutator_scalar(FieldSpec::gf(5), 3, 20).verdict == Verdict::statistical_pass);
  CHECK(verify_commutator_scalar(FieldSpec::qq(), 2, 20).verdict == Verdict::statistical_pass);
  // trace obstruction when the characteristic divides m
  auto g2 = verify_commutator_scalar(FieldSpec::gf(2), 2);
  CHECK(g2.verdict == Verdict::fail);
  CHECK(g2.witness.at("covered") == 8);
  Matrix c = matrix_from_json(g2.witness.at("counterexample"), FieldSpec::gf(2));
  CHECK_FALSE(c.trace().is_zero());
}

TEST_CASE("rank bound searches") {
  RankBoundParams p;
  p.trials = 5;
  for (std::string lemma : {"sp", "od", "b"}) {
    CAPTURE(lemma);
    p.lemma = lemma;
    p.n = lemma == "sp" ? 8 : lemma == "od" ? 22 : 6;
    auto r = verify_rank_bound_samples(p, 3);
    CHECK(r.verdict == Verdict::statistical_pass);
    CHECK(r.witness.at("rate").get<double>() >= 0.95);
  }
  p.lemma = "sp";
  p.n = 6;
  CHECK_THROWS_AS(verify_rank_bound_samples(p), std::invalid_argument);
  p.n = 8;
  p.field = FieldSpec::gf(2);
  CHECK_THROWS_AS(verify_rank_bound_samples(p), std::invalid_argument);
}

TEST_CASE("equivariance") {
  auto r = verify(std::string("equivariance"), json{{"type", "B"}, {"trials", 20}}, 1);
  CHECK(r.verdict == Verdict::pass);
  CHECK(r.witness.at("checks") == 40);
}

TEST_CASE("dispatch, reports and suite") {
  CHECK_THROWS_AS(verify("nope", json::object(), 0), std::invalid_argument);
  CHECK_THROWS_AS(verify("char2b", json{{"n", "x"}}, 0), std::invalid_argument);
  Report r = verify("identity-C", json::object(), 5);
  Report back = report_from_json(json::parse(to_json(r).dump()));
  CHECK(back.lemma == r.lemma);
  CHECK(back.verdict == r.verdict);
  CHECK(back.witness == r.witness);
  CHECK(exit_code(r) == 0);

  Report empty = run_suite(json::object(), 0);
  CHECK(empty.verdict == Verdict::pass);
  CHECK(empty.witness.at("reports").empty());

  json cfg = {{"checks", {{{"lemma", "char2b"}, {"params", {{"n", 4}}}}, {{"lemma", "rankbound-sp"}, {"params", {{"trials", 3}}}}}}};
  Report s1 = run_suite(cfg, 9), s2 = run_suite(cfg, 9);
  CHECK(s1.verdict == Verdict::statistical_pass);
  auto strip = [](json j) {
    for (auto& x : j.at("reports")) x.erase("ms");
    return j;
  };
  CHECK(strip(s1.witness) == strip(s2.witness));
  CHECK(default_suite_config().at("checks").size() > 20);
}

TEST_CASE("acceptance checks at small sizes") {
  CHECK(verify_tuple_rank_oracle(FieldSpec::gf(2), 2).verdict == Verdict::pass);
  CHECK(verify_topleft(10, 1).verdict == Verdict::pass);
  CHECK(verify_raise_rank(10, 1).verdict == Verdict::pass);
  CHECK(verify_descriptor_lattice(50, 1).verdict == Verdict::pass);
  CHECK(verify_degeneration(3, 1, 2, 1).verdict == Verdict::pass);
}
