#include "doctest.h"
#include "locdiag/pencil.hpp"
#include "oracles.hpp"

using namespace locdiag;

namespace {

const FieldSpec F2 = FieldSpec::gf(2), F3 = FieldSpec::gf(3);

Matrix M(FieldSpec f, std::vector<std::vector<long>> rows) { return Matrix::from_ints(f, rows); }

int min_shift_rank_bruteforce(const Matrix& p) {
  int best = p.rows();
  for (const Scalar& lam : field_elements(p.field())) best = std::min(best, rank(p - Matrix::identity(p.field(), p.rows()) * lam));
  return best;
}

// independent check: run over every invertible g found by determinant filtering
bool offdiag_bruteforce(const Matrix& p, int k, int m) {
  int n = p.rows();
  bool holds = true;
  oracle::all_matrices(p.field(), n, n, [&](const Matrix& g) {
    if (!holds || oracle::laplace_det(g).is_zero()) return;
    Matrix q = g * p * inverse(g);
    if (rank(q.block(0, m, m, m)) > k) holds = false;
  });
  return holds;
}

}  // namespace

TEST_CASE("shift rank examples") {
  FieldSpec Q = FieldSpec::qq();
  auto a = shift_rank(M(Q, {{5, 0, 0}, {0, 5, 0}, {0, 0, 7}}));
  CHECK(a.lambda->to_string() == "5");
  CHECK(a.rank == 1);
  auto b = shift_rank(M(Q, {{0, 1, 0}, {0, 0, 1}, {0, 0, 0}}));
  CHECK(b.lambda->is_zero());
  CHECK(b.rank == 2);
  auto c = shift_rank(M(Q, {{0, -1}, {1, 0}}));
  CHECK(!c.lambda);
  CHECK(c.rank == 2);
  CHECK(tuple_rank_identity(Matrix::identity(Q, 3)) == 0);
  CHECK(tuple_rank_identity(M(F2, {{0, 1}, {0, 0}})) == 1);
  CHECK(tuple_rank_identity(M(Q, {{1, 0, 0}, {0, 2, 0}, {0, 0, 3}})) == 2);
  // ties prefer lambda = 0
  auto d = shift_rank(M(Q, {{0, 0}, {0, -4}}));
  CHECK(d.lambda->is_zero());
  CHECK_THROWS_AS(shift_rank(Matrix::identity(FieldSpec::qq_t(), 2)), unsupported_field);
}

TEST_CASE("shift rank against enumeration over GF(2) and GF(3)") {
  for (FieldSpec f : {F2, F3})
    for (int n = 1; n <= 3; ++n) {
      if (f.p == 3 && n == 3) continue;
      oracle::all_matrices(f, n, n, [&](const Matrix& p) {
        ShiftRank s = shift_rank(p);
        CHECK(s.rank == min_shift_rank_bruteforce(p));
        CHECK(tuple_rank_identity(p) == pencil_rank_enumerate({p, Matrix::identity(f, n)}).rank);
        if (2 * s.rank < n) {
          int minimizers = 0;
          for (const Scalar& lam : field_elements(f))
            if (rank(p - Matrix::identity(f, n) * lam) == s.rank) ++minimizers;
          CHECK(minimizers == 1);
        }
      });
    }
}

TEST_CASE("tuple rank invariance") {
  oracle::all_matrices(F3, 2, 2, [&](const Matrix& p) {
    int base = tuple_rank_identity(p);
    for (const Scalar& lam : field_elements(F3)) CHECK(tuple_rank_identity(p + Matrix::identity(F3, 2) * lam) == base);
  });
  Rng rng(7);
  for (FieldSpec f : {FieldSpec::gf(5), FieldSpec::qq()})
    for (int trial = 0; trial < 50; ++trial) {
      Matrix p = Matrix::random(f, 4, 4, rng);
      if (trial % 2) p = Matrix::diag({Matrix::identity(f, 3) * rng.scalar(f), Matrix::random(f, 1, 1, rng)});
      Matrix g = random_invertible(f, 4, rng);
      CHECK(tuple_rank_identity(g * p * inverse(g)) == tuple_rank_identity(p));
    }
}

TEST_CASE("pencil enumeration") {
  CHECK(pencil_rank_enumerate({Matrix(F2, 2, 2), Matrix(F2, 2, 2)}).rank == 0);
  auto r = pencil_rank_enumerate({Matrix::identity(F3, 2), M(F3, {{1, 0}, {0, 0}})});
  CHECK(r.rank == 1);
  REQUIRE(r.witness.size() == 2);
  CHECK(r.witness[0].is_one());
  CHECK(r.witness[1].to_string() == "2");
  int points = 0;
  for_each_projective_point(FieldSpec::gf(5), 3, [&](const std::vector<Scalar>&) { return ++points, true; });
  CHECK(points == 31);
  CHECK_THROWS_AS(pencil_rank_enumerate({Matrix::identity(FieldSpec::qq(), 2)}), unsupported_field);
  std::vector<Matrix> big(10, Matrix::identity(FieldSpec::gf(7), 1));
  CHECK_THROWS_AS(pencil_rank_enumerate(big), std::length_error);
}

TEST_CASE("off-diagonal criterion") {
  auto a = offdiag_exhaustive(Matrix::identity(F2, 2), 0, 1);
  CHECK(a.holds);
  auto b = offdiag_exhaustive(M(F3, {{1, 0}, {0, 2}}), 0, 1);
  CHECK(!b.holds);
  REQUIRE(b.witness);
  Matrix q = b.witness->g * M(F3, {{1, 0}, {0, 2}}) * inverse(b.witness->g);
  CHECK(!q(0, 1).is_zero());
  Matrix g = M(F3, {{1, 1}, {0, 1}});
  CHECK(!(g * M(F3, {{1, 0}, {0, 2}}) * inverse(g))(0, 1).is_zero());
  CHECK_THROWS_AS(offdiag_exhaustive(Matrix::identity(F2, 3), 1, 1), std::invalid_argument);

  for (int n = 2; n <= 3; ++n) {
    GLTable table = GLTable::build(F2, n);
    oracle::all_matrices(F2, n, n, [&](const Matrix& p) {
      auto res = offdiag_exhaustive(p, 0, 1, &table);
      CHECK(res.holds == (tuple_rank_identity(p) <= 0));
      CHECK(res.holds == offdiag_bruteforce(p, 0, 1));
    });
  }
  GLTable t4 = GLTable::build(F2, 4);
  CHECK(t4.elements.size() == 20160);
  Rng rng(1);
  for (int trial = 0; trial < 6; ++trial) {
    Matrix p = Matrix::random(F2, 4, 4, rng);
    if (trial < 3) p = Matrix::diag({Matrix::identity(F2, 3) * Scalar::from_int(F2, trial % 2), Matrix::random(F2, 1, 1, rng)});
    for (auto [k, m] : {std::pair{0, 1}, {0, 2}, {1, 2}}) {
      auto res = offdiag_exhaustive(p, k, m, &t4);
      CHECK(res.holds == (tuple_rank_identity(p) <= k));
      if (!res.holds) {
        Matrix q = res.witness->g * p * inverse(res.witness->g);
        CHECK(rank(q.select(res.witness->rows, res.witness->cols)) > k);
      }
    }
  }
  // sampled mode: failures are certified, passes on central elements
  auto s = offdiag_sampled(Matrix::identity(FieldSpec::qq(), 4) * Scalar::from_int(FieldSpec::qq(), 3), 0, 2, 20, rng);
  CHECK(s.holds);
  auto s2 = offdiag_sampled(M(FieldSpec::qq(), {{1, 0, 0, 0}, {0, 2, 0, 0}, {0, 0, 3, 0}, {0, 0, 0, 4}}), 1, 2, 50, rng);
  CHECK(!s2.holds);
  Matrix q2 = s2.witness->g * M(FieldSpec::qq(), {{1, 0, 0, 0}, {0, 2, 0, 0}, {0, 0, 3, 0}, {0, 0, 0, 4}}) * inverse(s2.witness->g);
  CHECK(rank(q2.select(s2.witness->rows, s2.witness->cols)) == s2.witness->block_rank);
}

TEST_CASE("projection stabilization") {
  Matrix e33 = M(F2, {{0, 0, 0}, {0, 0, 0}, {0, 0, 1}});
  CHECK(projection_stabilization({e33}, 3) == std::vector<int>{0, 0, 1});
  CHECK(projection_stabilization({Matrix::identity(F2, 3)}, 3) == std::vector<int>{1, 2, 3});
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    auto ranks = projection_stabilization({Matrix::random(F2, 4, 4, rng), Matrix::random(F2, 4, 4, rng)}, 4);
    CHECK(std::is_sorted(ranks.begin(), ranks.end()));
  }
}
