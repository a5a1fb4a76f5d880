#include "doctest.h"
#include "locdiag/polys.hpp"

using namespace locdiag;

namespace {

const FieldSpec Q = FieldSpec::qq(), F5 = FieldSpec::gf(5), F7 = FieldSpec::gf(7);

Matrix M(FieldSpec f, std::vector<std::vector<long>> rows) { return Matrix::from_ints(f, rows); }

CoordPoly P(FieldSpec f, const std::string& s) { return CoordPoly::parse(f, s); }

// every canonical coordinate of a context
std::vector<CoordVar> coordinates(const PolyContext& ctx) {
  std::vector<CoordVar> out;
  int n = ctx.n;
  for (char fam : std::string(ctx.letter == 'A' ? "p" : ctx.letter == 'B' ? "pqrvw" : "pqr")) {
    if (fam == 'v' || fam == 'w') {
      for (int i = 0; i < n; ++i) out.push_back({fam, i});
      continue;
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        CoordVar v{fam, i, j};
        try {
          ctx.check_var(v);
          out.push_back(v);
        } catch (const std::invalid_argument&) {
        }
      }
  }
  return out;
}

CoordPoly random_poly(const FieldSpec& f, const std::vector<CoordVar>& vars, Rng& rng, int terms, int max_deg) {
  CoordPoly out(f);
  for (int t = 0; t < terms; ++t) {
    CoordPoly term = CoordPoly::constant(Scalar::from_int(f, rng.range(1, 6)));
    int deg = static_cast<int>(rng.range(0, max_deg));
    for (int k = 0; k < deg; ++k) term = term * CoordPoly::var(f, vars[rng.range(0, static_cast<long>(vars.size()) - 1)]);
    out += term;
  }
  return out;
}

// plain dense evaluation of f at a Lie algebra element, reading coordinates off the matrix
Scalar eval_at_matrix(const CoordPoly& f, const PolyContext& ctx, const Matrix& m) {
  return f.evaluate([&](const CoordVar& v) {
    auto [r, c] = ctx.position(v);
    return m(r, c);
  });
}

}  // namespace

TEST_CASE("evaluate examples") {
  PolyContext gl2{'A', 2};
  CHECK(evaluate(P(Q, "p[1,2]"), gl2, {{'p', M(Q, {{0, 3}, {0, 0}})}}) == Scalar::from_int(Q, 3));
  CHECK(evaluate(P(Q, "p[1,1]*p[2,2] - p[1,2]*p[2,1]"), gl2, {{'p', Matrix::identity(Q, 2)}}) == Scalar::one(Q));
  PolyContext c2{'C', 2};
  CHECK(evaluate(P(Q, "q[1,2]"), c2, {{'q', M(Q, {{0, 5}, {5, 0}})}}) == Scalar::from_int(Q, 5));
  CHECK_THROWS_AS(evaluate(P(Q, "q[1,2]"), c2, {{'q', M(Q, {{0, 5}, {4, 0}})}}), std::invalid_argument);
  CHECK_THROWS_AS(evaluate(P(Q, "q[1,2]"), c2, {{'p', M(Q, {{0, 5}, {4, 0}})}}), std::invalid_argument);
  PolyContext d2{'D', 2};
  CHECK_THROWS_AS(evaluate(P(Q, "q[1,1]"), d2, {{'q', M(Q, {{0, 1}, {-1, 0}})}}), std::invalid_argument);
  CHECK(evaluate(P(Q, "q[1,2]"), d2, {{'q', M(Q, {{0, 1}, {-1, 0}})}}) == Scalar::one(Q));
}

TEST_CASE("text format round trip") {
  auto f = P(Q, "3*p[1,2]*q[2,3] - 1/2*w[4]");
  CHECK(f.to_string() == "3*p[1,2]*q[2,3] - 1/2*w[4]");
  CHECK(P(Q, f.to_string()) == f);
  CHECK(P(Q, "p[1,1]^2 + 2*p[1,1]*p[2,2] + p[2,2]^2") == P(Q, "p[1,1] + p[2,2]").pow(2));
  CHECK(P(Q, "-p[1,2] + p[1,2]").is_zero());
  CHECK(P(Q, "0").to_string() == "0");
  CHECK(P(F5, "7*p[1,1]").to_string() == "2*p[1,1]");
  auto g = CoordPoly::parse(FieldSpec::qq_t(), "(t + 1)*p[1,1] - 2*x[1]");
  CHECK(CoordPoly::parse(FieldSpec::qq_t(), g.to_string()) == g);
  CHECK_THROWS_AS(P(Q, "p[1,2"), std::invalid_argument);
  CHECK_THROWS_AS(P(Q, "p[0,2]"), std::invalid_argument);
  CHECK_THROWS_AS(P(Q, "3 p[1,2]"), std::invalid_argument);

  Rng rng(11);
  PolyContext b2{'B', 2};
  auto vars = coordinates(b2);
  for (int t = 0; t < 40; ++t) {
    auto h = random_poly(Q, vars, rng, 5, 3) * Scalar::parse(Q, "-3/7");
    CHECK(P(Q, h.to_string()) == h);
    CHECK(P(Q, h.to_string()).to_string() == h.to_string());
  }
}

TEST_CASE("monomial order is degrevlex with p[1,1] largest") {
  auto f = P(Q, "p[2,2] + p[1,1] + p[1,1]*p[2,2] + p[1,2]^2 + 1");
  CHECK(f.to_string() == "p[1,2]^2 + p[1,1]*p[2,2] + p[1,1] + p[2,2] + 1");
}

TEST_CASE("group action") {
  PolyContext gl2{'A', 2};
  Matrix swap = M(Q, {{0, 1}, {1, 0}});
  CHECK(group_act(P(Q, "p[1,2]"), gl2, swap) == P(Q, "p[2,1]"));
  CHECK_THROWS_AS(group_act(P(Q, "p[1,2]"), gl2, M(Q, {{1, 1}, {1, 1}})), not_member);

  Rng rng(5);
  PolyContext gl3{'A', 3};
  auto tr = P(F5, "p[1,1] + p[2,2] + p[3,3]");
  for (int t = 0; t < 10; ++t) CHECK(group_act(tr, gl3, random_group_element({'A', 3}, F5, rng, 6)) == tr);

  auto vars = coordinates(gl3);
  for (int t = 0; t < 20; ++t) {
    auto f = random_poly(F5, vars, rng, 4, 3);
    Matrix g = random_group_element({'A', 3}, F5, rng, 6), h = random_group_element({'A', 3}, F5, rng, 6);
    CHECK(group_act(group_act(f, gl3, h), gl3, g) == group_act(f, gl3, g * h));
  }

  PolyContext c2{'C', 2};
  CHECK_THROWS_AS(group_act(P(Q, "p[1,2]"), c2, Matrix::diag({M(Q, {{2}}), Matrix::identity(Q, 3)})), not_member);
}

TEST_CASE("group action agrees with evaluation in every context") {
  Rng rng(17);
  for (auto g : {GroupType{'A', 3}, GroupType{'B', 2}, GroupType{'C', 2}, GroupType{'D', 2}}) {
    PolyContext ctx = PolyContext::of(g);
    auto vars = coordinates(ctx);
    for (int t = 0; t < 15; ++t) {
      auto f = random_poly(F7, vars, rng, 4, 3);
      Matrix x = g.letter == 'A' ? Matrix::random(F7, 3, 3, rng) : random_dual_element(g, F7, rng);
      Matrix h = random_group_element(g, F7, rng, 5);
      Matrix moved = inverse(h) * x * h;
      auto acted = group_act(f, ctx, h);
      CHECK(evaluate(acted, ctx, point_from_matrix(ctx, x)) == evaluate(f, ctx, point_from_matrix(ctx, moved)));
      CHECK(eval_at_matrix(acted, ctx, x) == eval_at_matrix(f, ctx, moved));
      CHECK(acted.degree() <= f.degree());
      CHECK(group_act(acted, ctx, inverse(h)) == f);
    }
  }
}

TEST_CASE("Levi elements preserve grad") {
  Rng rng(23);
  for (auto g : {GroupType{'B', 2}, GroupType{'C', 2}, GroupType{'D', 3}}) {
    PolyContext ctx = PolyContext::of(g);
    auto vars = coordinates(ctx);
    auto w = GradingWeights::grad();
    for (int t = 0; t < 10; ++t) {
      Matrix h = random_group_element({'A', g.n}, F7, rng, 5);
      Matrix hit = inverse(h).transpose();
      Matrix levi = g.letter == 'B' ? Matrix::diag({h, Matrix::identity(F7, 1), hit}) : Matrix::diag({h, hit});
      REQUIRE(group_membership(g, levi));
      auto f = random_poly(F7, vars, rng, 4, 3);
      auto top = graded_part(f, w);
      int d = 0;
      for (const auto& [m, c] : top.terms()) d = w.degree(m);
      auto acted = group_act(f, ctx, levi);
      CHECK(graded_part(acted, w, d) == group_act(top, ctx, levi));
    }
  }
}

TEST_CASE("pullback along dual projections") {
  ChainSpec a1{'A', 1, {}, {{2, 0, 0}}};
  CHECK(pullback_projection(P(Q, "p[1,1]"), a1, 1) == P(Q, "p[1,1] + p[2,2]"));
  ChainSpec a2{'A', 2, {}, {{1, 1, 0}}};
  CHECK(pullback_projection(P(Q, "p[1,2]"), a2, 1) == P(Q, "p[1,2] - p[4,3]"));
  CHECK_THROWS_AS(pullback_projection(P(Q, "p[1,2]"), a2, 0), std::out_of_range);

  // C: (1,0,1) takes Sp_2 to Sp_4; the pulled back coordinate is read off the first copy
  ChainSpec c1{'C', 1, {}, {{1, 0, 1}}};
  CHECK(pullback_projection(P(Q, "q[1,1]"), c1, 1) == P(Q, "q[1,1]"));

  Rng rng(31);
  std::vector<ChainSpec> chains = {a2, {'A', 2, {}, {{2, 1, 1}}}, {'C', 1, {}, {{2, 0, 1}}}, {'D', 2, {}, {{2, 0, 1}}},
                                   {'B', 1, {}, {{1, 0, 2}}}, {'B', 1, {}, {{3, 0, 0}}}, {'B', 1, {}, {{2, 0, 1}}}};
  for (const auto& c : chains) {
    PolyContext ctx = PolyContext::of(c.group(1)), up = PolyContext::of(c.group(2));
    auto vars = coordinates(ctx);
    Embedding e = chain_embedding(c, 1);
    std::vector<CoordPoly> seen, pulled;
    for (int t = 0; t < 8; ++t) {
      auto f = random_poly(Q, vars, rng, 4, 3);
      auto g = pullback_projection(f, c, 1);
      CHECK(g.degree() == f.degree());
      // grad survives for C, D and the single-copy B embeddings
      bool graded = c.type == 'C' || c.type == 'D' || (c.type == 'B' && c.signature(1).l + c.signature(1).r == 1);
      if (graded) CHECK(graded_part(g, GradingWeights::grad()) == pullback_projection(graded_part(f, GradingWeights::grad()), c, 1));
      // f(pr(X)) = pr^*f(X)
      Matrix x = c.type == 'A' ? Matrix::random(Q, up.n, up.n, rng) : random_dual_element(c.group(2), Q, rng);
      CHECK(eval_at_matrix(g, up, x) == eval_at_matrix(f, ctx, project_dual(e, x)));
      for (std::size_t k = 0; k < seen.size(); ++k)
        if (seen[k] != f) CHECK(pulled[k] != g);
      seen.push_back(f);
      pulled.push_back(g);
    }
  }
}

TEST_CASE("Vandermonde coefficients") {
  PolyContext gl2{'A', 2};
  auto f = P(Q, "p[1,1]*p[2,2]");
  auto family = [&](const Scalar& lam) {
    return f.substitute([&](const CoordVar& v) -> std::optional<CoordPoly> {
      return CoordPoly::var(Q, v) + CoordPoly::var(Q, 'r', v.i, v.j) * lam;
    });
  };
  std::vector<Scalar> pts = {Scalar::from_int(Q, 0), Scalar::from_int(Q, 1), Scalar::from_int(Q, -1)};
  auto cs = vandermonde_coefficients(family, 2, pts);
  REQUIRE(cs.size() == 3);
  CHECK(cs[0] == f);
  CHECK(cs[1] == P(Q, "p[1,1]*r[2,2] + p[2,2]*r[1,1]"));
  CHECK(cs[2] == P(Q, "r[1,1]*r[2,2]"));
  // reconstruction at a fresh point
  Scalar l0 = Scalar::parse(Q, "5/3");
  CHECK(cs[0] + cs[1] * l0 + cs[2] * l0.pow(2) == family(l0));

  auto constant = vandermonde_coefficients([&](const Scalar&) { return f; }, 0, {Scalar::from_int(Q, 4)});
  REQUIRE(constant.size() == 1);
  CHECK(constant[0] == f);

  CHECK_THROWS_AS(vandermonde_coefficients(family, 2, {pts[0], pts[1], pts[1]}), std::invalid_argument);
  CHECK_THROWS_AS(vandermonde_coefficients(family, 2, {pts[0], pts[1]}), std::invalid_argument);
  std::vector<Scalar> f2 = {Scalar::from_int(FieldSpec::gf(2), 0), Scalar::from_int(FieldSpec::gf(2), 1),
                            Scalar::from_int(FieldSpec::gf(2), 1)};
  CHECK_THROWS_AS(vandermonde_coefficients([](const Scalar& s) { return CoordPoly::constant(s); }, 2, f2),
                  unsupported_field);
}

TEST_CASE("graded parts") {
  auto w = GradingWeights::grad();
  CHECK(graded_part(P(Q, "p[1,1] + q[1,2]"), w) == P(Q, "q[1,2]"));
  auto h = P(Q, "p[1,1]*r[1,2] + v[1]*w[2]");
  CHECK(graded_part(h, w) == h);
  CHECK(graded_part(P(Q, "p[1,1]^2 + p[1,2]"), GradingWeights::total(), 1) == P(Q, "p[1,2]"));
  CHECK(graded_part(CoordPoly(Q), w).is_zero());

  Rng rng(41);
  auto vars = coordinates(PolyContext{'B', 2});
  for (int t = 0; t < 30; ++t) {
    auto f = random_poly(Q, vars, rng, 4, 3), g = random_poly(Q, vars, rng, 4, 3);
    for (int d = 0; d <= 6; ++d) CHECK(graded_part(f + g, w, d) == graded_part(f, w, d) + graded_part(g, w, d));
    if (!f.is_zero()) CHECK(!graded_part(f, w).is_zero());
  }
}

TEST_CASE("off-diagonal test") {
  auto r = off_diagonal_test(P(Q, "p[1,3]*p[1,3]"), 3);
  REQUIRE(r);
  CHECK(r->rows == std::vector<int>{0});
  CHECK(r->cols == std::vector<int>{2});
  CHECK(!off_diagonal_test(P(Q, "p[1,1]"), 3));
  CHECK(!off_diagonal_test(P(Q, "p[1,2]"), 2));
  CHECK(!off_diagonal_test(P(Q, "p[1,2] + p[2,3]"), 5));
  CHECK(off_diagonal_test(P(Q, "p[1,4]*p[2,3] - p[1,3]*p[2,4]"), 5));
  CHECK(!off_diagonal_test(P(Q, "p[1,4]*p[2,3] - p[1,3]*p[2,4]"), 5, 1));
}

TEST_CASE("shift invariance") {
  CHECK(is_shift_invariant(P(Q, "p[1,2]*p[2,1]"), 2));
  CHECK(is_shift_invariant(P(Q, "p[1,1] - p[2,2]"), 2));
  CHECK(!is_shift_invariant(P(Q, "p[1,1]"), 2));
  CHECK(!is_shift_invariant(P(Q, "p[1,1]*p[2,2] - p[1,2]*p[2,1]"), 2));
  CHECK(is_shift_invariant(P(Q, "p[1,1]*x[1] - p[2,2]*x[1]").pow(2), 2));
}
