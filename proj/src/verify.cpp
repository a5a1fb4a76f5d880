#include "locdiag/verify.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <set>
#include <stdexcept>

#include "locdiag/graph.hpp"
#include "locdiag/orbits.hpp"
#include "locdiag/pencil.hpp"
#include "locdiag/polys.hpp"

namespace locdiag {

namespace {

using Clock = std::chrono::steady_clock;

struct Timer {
  Clock::time_point start = Clock::now();
  std::int64_t ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
  }
};

Report make_report(const std::string& lemma, json params, Verdict v, json witness, const Timer& t) {
  return {lemma, std::move(params), v, std::move(witness), t.ms()};
}

Matrix conj(const Matrix& g, const Matrix& p) { return g * p * inverse(g); }

Matrix random_rank(const FieldSpec& f, int n, int r, Rng& rng) {
  if (r == 0) return Matrix(f, n, n);
  for (;;) {
    Matrix m = Matrix::random(f, n, r, rng) * Matrix::random(f, r, n, rng);
    if (rank(m) == r) return m;
  }
}

Matrix random_skew(const FieldSpec& f, int n, int r, Rng& rng) {
  if (r == 0) return Matrix(f, n, n);
  for (;;) {
    Matrix a = Matrix::random(f, n, r / 2, rng), b = Matrix::random(f, n, r / 2, rng);
    Matrix m = a * b.transpose() - b * a.transpose();
    if (rank(m) == r) return m;
  }
}

Matrix vec(const Matrix& m) {
  Matrix v(m.field(), m.rows() * m.cols(), 1);
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) v(i * m.cols() + j, 0) = m(i, j);
  return v;
}

// all matrices of gl_n(F_p) as residue vectors, in lexicographic order
std::vector<std::vector<std::uint32_t>> all_residue_matrices(std::uint32_t p, int n, std::uint64_t budget) {
  std::uint64_t count = 1;
  for (int i = 0; i < n * n; ++i) {
    count *= p;
    if (count > budget) throw std::length_error("enumeration exceeds budget");
  }
  std::vector<std::vector<std::uint32_t>> out(count, std::vector<std::uint32_t>(n * n));
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    std::uint64_t x = idx;
    for (int e = n * n - 1; e >= 0; --e) {
      out[idx][e] = static_cast<std::uint32_t>(x % p);
      x /= p;
    }
  }
  return out;
}

std::uint64_t encode(const std::vector<std::uint32_t>& a, std::uint32_t p) {
  std::uint64_t x = 0;
  for (auto v : a) x = x * p + v;
  return x;
}

Matrix residue_matrix(const FieldSpec& f, const std::vector<std::uint32_t>& a, int n) {
  Matrix m(f, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Scalar::from_int(f, a[i * n + j]);
  return m;
}

FieldSpec field_param(const json& p, const char* key, const FieldSpec& dflt) {
  return p.contains(key) ? FieldSpec::parse(p.at(key).get<std::string>()) : dflt;
}

// ---------------------------------------------------------------- char 2 lemma

Report char2a_enumerate(const FieldSpec& f, int n, json params, const Timer& t) {
  std::uint32_t p = f.p;
  auto mats = all_residue_matrices(p, n, 100000);
  if (static_cast<double>(mats.size()) * mats.size() > 5e7) throw std::length_error("enumeration exceeds budget");
  std::vector<char> hit(mats.size(), 0);
  std::vector<std::uint32_t> out(n * n);
  for (const auto& a : mats)
    for (const auto& b : mats) {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          std::uint64_t s = 0;
          for (int k = 0; k < n; ++k) s += std::uint64_t{a[i * n + k]} * b[k * n + j] + std::uint64_t{a[k * n + i]} * b[j * n + k];
          out[i * n + j] = static_cast<std::uint32_t>(s % p);
        }
      hit[encode(out, p)] = 1;
    }
  std::size_t covered = 0;
  for (char h : hit) covered += h;
  json w = {{"pairs", mats.size() * mats.size()}, {"targets", mats.size()}, {"covered", covered}};
  if (covered == mats.size()) return make_report("char2a", params, Verdict::pass, w, t);
  for (std::size_t i = 0; i < hit.size(); ++i)
    if (!hit[i]) {
      w["counterexample"] = matrix_to_json(residue_matrix(f, mats[i], n));
      break;
    }
  return make_report("char2a", params, Verdict::fail, w, t);
}

// T = S1 S2 with S1, S2 symmetric: S2 = W T for a symmetric invertible W with T^T W = W T.
// Then P = S1 / 2 and Q = S2 give PQ + P^T Q^T = T.
std::optional<std::pair<Matrix, Matrix>> symmetric_factor(const Matrix& target, Rng& rng) {
  const FieldSpec& f = target.field();
  int n = target.rows();
  std::vector<Matrix> basis;  // symmetric matrices E_ij + E_ji
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Matrix e = Matrix::elementary(f, n, n, i, j);
      basis.push_back(i == j ? e : e + e.transpose());
    }
  std::vector<Matrix> cols;
  for (const auto& b : basis) cols.push_back(vec(target.transpose() * b - b * target));
  Matrix ker = kernel(hstack(cols));
  if (ker.cols() == 0) return std::nullopt;
  Scalar half = Scalar::from_int(f, 2).inverse();
  for (int attempt = 0; attempt < 30; ++attempt) {
    Matrix w(f, n, n);
    for (int c = 0; c < ker.cols(); ++c) {
      Scalar coef = rng.scalar(f);
      for (std::size_t b = 0; b < basis.size(); ++b) w = w + basis[b] * (ker(static_cast<int>(b), c) * coef);
    }
    if (!is_invertible(w)) continue;
    return std::pair{inverse(w) * half, w * target};
  }
  return std::nullopt;
}

Report char2a_sample(const FieldSpec& f, int n, int trials, json params, Rng& rng, const Timer& t) {
  for (int trial = 0; trial < trials; ++trial) {
    Matrix target = Matrix::random(f, n, n, rng);
    auto pq = symmetric_factor(target, rng);
    if (!pq)
      return make_report("char2a", params, Verdict::fail,
                         {{"counterexample", matrix_to_json(target)}, {"reason", "no preimage found"}}, t);
    const auto& [p, q] = *pq;
    if (p * q + p.transpose() * q.transpose() != target) throw std::logic_error("char2a factorization mismatch");
  }
  return make_report("char2a", params, Verdict::statistical_pass, {{"targets", trials}}, t);
}

// derivative of (P, Q) -> PQ + P^T Q^T mod E_nn at the nilpotent Jordan block R and anti-diagonal S
Matrix char2_derivative(int n) {
  FieldSpec f = FieldSpec::gf(2);
  Matrix r(f, n, n), s(f, n, n);
  for (int i = 0; i + 1 < n; ++i) r(i, i + 1) = Scalar::one(f);
  for (int i = 0; i < n; ++i) s(i, n - 1 - i) = Scalar::one(f);
  Matrix d(f, n * n - 1, 2 * n * n);
  auto column = [&](const Matrix& img, int c) {
    for (int i = 0, row = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != n - 1 || j != n - 1) d(row++, c) = img(i, j);
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Matrix e = Matrix::elementary(f, n, n, i, j);
      column(e * s + e.transpose() * s.transpose(), i * n + j);
      column(r * e + r.transpose() * e.transpose(), n * n + i * n + j);
    }
  return d;
}

Report char2b(int n, json params, const Timer& t) {
  Matrix d = char2_derivative(n);
  int rk = rank(d);
  Multigraph g = char2_gamma(n);
  auto red = reduce(g);
  bool certified = std::holds_alternative<ReductionCertificate>(red) && replay(g, std::get<ReductionCertificate>(red));
  std::vector<Matrix> nonzero;
  for (int c = 0; c < d.cols(); ++c)
    if (!d.column(c).is_zero()) nonzero.push_back(d.column(c));
  IncidenceCheck inc = incidence_rank_check(g, FieldSpec::gf(2));
  bool same_map = !nonzero.empty() && hstack(nonzero) == inc.matrix;
  bool full = rk == n * n - 1;
  json w = {{"rank", rk},
            {"target_dim", n * n - 1},
            {"certificate", certified},
            {"certificate_steps", certified ? std::get<ReductionCertificate>(red).size() : 0},
            {"incidence_matches_derivative", same_map}};
  bool ok = full && certified && same_map && inc.surjective;
  if (!ok) w["counterexample"] = {{"n", n}};
  return make_report("char2b", params, ok ? Verdict::pass : Verdict::fail, w, t);
}

// ---------------------------------------------------------------- commutators

Report commutator_enumerate(const FieldSpec& f, int m, json params, const Timer& t) {
  std::uint32_t p = f.p;
  auto mats = all_residue_matrices(p, m, 100000);
  if (static_cast<double>(mats.size()) * mats.size() > 5e7) throw std::length_error("enumeration exceeds budget");
  std::vector<char> hit(mats.size(), 0);
  std::vector<std::uint32_t> out(m * m);
  for (const auto& x : mats)
    for (const auto& y : mats) {
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          std::uint64_t s = 0;
          for (int k = 0; k < m; ++k) s += std::uint64_t{x[i * m + k]} * y[k * m + j] + std::uint64_t{p - y[i * m + k]} * x[k * m + j];
          out[i * m + j] = static_cast<std::uint32_t>(s % p);
        }
      for (std::uint32_t lambda = 0; lambda < p; ++lambda) {
        auto shifted = out;
        for (int i = 0; i < m; ++i) shifted[i * m + i] = (shifted[i * m + i] + lambda) % p;
        hit[encode(shifted, p)] = 1;
      }
    }
  std::size_t covered = 0;
  for (char h : hit) covered += h;
  json w = {{"pairs", mats.size() * mats.size()}, {"targets", mats.size()}, {"covered", covered}};
  if (covered == mats.size()) return make_report("commutator", params, Verdict::pass, w, t);
  for (std::size_t i = 0; i < hit.size(); ++i)
    if (!hit[i]) {
      Matrix target = residue_matrix(f, mats[i], m);
      w["counterexample"] = matrix_to_json(target);
      if (p && m % p == 0 && !target.trace().is_zero())
        w["reason"] = "trace of [X,Y] + lambda I is m lambda = 0, but the target has nonzero trace";
      break;
    }
  return make_report("commutator", params, Verdict::fail, w, t);
}

// B with B^{-1} A B zero on the diagonal, for traceless A; nullopt if a nonzero scalar block appears
std::optional<Matrix> zero_diagonal_basis(const Matrix& a) {
  const FieldSpec& f = a.field();
  int k = a.rows();
  if (a.is_scalar()) {
    if (!a(0, 0).is_zero()) return std::nullopt;
    return Matrix::identity(f, k);
  }
  std::optional<Matrix> v;
  for (int i = 0; i < k && !v; ++i)
    for (int j = i; j < k && !v; ++j) {
      Matrix x = Matrix::identity(f, k).column(i);
      if (j > i) x = x + Matrix::identity(f, k).column(j);
      if (rank(hstack({x, a * x})) == 2) v = x;
    }
  Matrix c = extend_to_basis(hstack({*v, a * *v}), k);
  Matrix rest = (inverse(c) * a * c).block(1, 1, k - 1, k - 1);
  auto inner = zero_diagonal_basis(rest);
  if (!inner) return std::nullopt;
  return c * Matrix::diag({Matrix::identity(f, 1), *inner});
}

// [X, Y] = T for traceless T: move T to zero diagonal, then X = diag(0, 1, ..., m-1)
std::optional<std::pair<Matrix, Matrix>> commutator_preimage(const Matrix& target) {
  const FieldSpec& f = target.field();
  int m = target.rows();
  if (f.is_finite() && f.p < static_cast<std::uint32_t>(m)) return std::nullopt;
  auto b = zero_diagonal_basis(target);
  if (!b) return std::nullopt;
  Matrix d = inverse(*b) * target * *b;
  Matrix x(f, m, m), y(f, m, m);
  for (int i = 0; i < m; ++i) x(i, i) = Scalar::from_int(f, i);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j) y(i, j) = d(i, j) / Scalar::from_int(f, i - j);
  return std::pair{*b * x * inverse(*b), *b * y * inverse(*b)};
}

Report commutator_sample(const FieldSpec& f, int m, int trials, json params, Rng& rng, const Timer& t) {
  Scalar mm = Scalar::from_int(f, m);
  for (int trial = 0; trial < trials; ++trial) {
    Matrix target = Matrix::random(f, m, m, rng);
    if (mm.is_zero()) {
      if (!target.trace().is_zero())
        return make_report("commutator", params, Verdict::fail,
                           {{"counterexample", matrix_to_json(target)},
                            {"reason", "trace of [X,Y] + lambda I is m lambda = 0, but the target has nonzero trace"}},
                           t);
      continue;
    }
    Scalar lambda = target.trace() / mm;
    auto xy = commutator_preimage(target - Matrix::identity(f, m) * lambda);
    if (!xy)
      return make_report("commutator", params, Verdict::fail,
                         {{"counterexample", matrix_to_json(target)}, {"reason", "no preimage found"}}, t);
    const auto& [x, y] = *xy;
    if (x * y - y * x + Matrix::identity(f, m) * lambda != target) throw std::logic_error("commutator preimage mismatch");
  }
  return make_report("commutator", params, Verdict::statistical_pass, {{"targets", trials}}, t);
}

// ---------------------------------------------------------------- conjugation identities

const FieldSpec QQ = FieldSpec::qq();

struct Claim {
  std::string label;
  std::function<PolyMatrix(const PolyMatrix&)> actual;    // read off the conjugate
  std::function<PolyMatrix(const PolyMatrix&)> expected;  // in terms of H
};

struct IdentityCase {
  json params;
  PolyMatrix h, n;  // A = I + N with N^2 = 0
  std::optional<Matrix> form;  // A^T J A = J; otherwise det A = 1
  std::vector<Claim> claims;
};

PolyMatrix pm_identity(int n) { return PolyMatrix(Matrix::identity(QQ, n)); }
CoordPoly lam() { return CoordPoly::var(QQ, 'x', 0); }
CoordPoly cst(long v) { return CoordPoly::constant(Scalar::from_int(QQ, v)); }

void place(PolyMatrix& n, int r0, int c0, int size, const CoordPoly& v) {
  for (int i = 0; i < size; ++i) n(r0 + i, c0 + i) = v;
}

std::function<PolyMatrix(const PolyMatrix&)> blk(int r0, int c0, int h, int w) {
  return [=](const PolyMatrix& x) { return x.block(r0, c0, h, w); };
}

IdentityCase case_2() {
  int m = 1, l = 2, r = 1, z = 1, n = (l + r) * m + z;
  IdentityCase c;
  c.params = {{"m", m}, {"l", l}, {"r", r}, {"z", z}};
  c.h = PolyMatrix::symbols(QQ, 'p', n, n);
  c.n = PolyMatrix(QQ, n, n);
  place(c.n, 0, (l + r) * m, m, lam());
  int zr = (l + r) * m;
  c.claims.push_back({"P11' = P11 + lambda R1", blk(0, 0, m, m),
                      [=](const PolyMatrix& h) { return h.block(0, 0, m, m) + h.block(zr, 0, m, m) * lam(); }});
  for (int j = 1; j < l; ++j)
    c.claims.push_back({"P" + std::to_string(j + 1) + std::to_string(j + 1) + "' unchanged", blk(j * m, j * m, m, m),
                        blk(j * m, j * m, m, m)});
  for (int k = 0; k < r; ++k) {
    int o = (l + k) * m;
    c.claims.push_back({"Q" + std::to_string(k + 1) + std::to_string(k + 1) + "' unchanged", blk(o, o, m, m), blk(o, o, m, m)});
  }
  return c;
}

IdentityCase case_3a() {
  int m = 2, l = 2, r = 1, n = (l + r) * m;
  IdentityCase c;
  c.params = {{"m", m}, {"l", l}, {"r", r}};
  c.h = PolyMatrix::symbols(QQ, 'p', n, n);
  PolyMatrix big = PolyMatrix::symbols(QQ, 's', m, m);
  c.n = PolyMatrix(QQ, n, n);
  c.n.set_block(0, l * m, big);
  int q = l * m;
  c.claims.push_back({"P11' = P11 + Lambda R11", blk(0, 0, m, m),
                      [=](const PolyMatrix& h) { return h.block(0, 0, m, m) + big * h.block(q, 0, m, m); }});
  for (int j = 1; j < l; ++j)
    c.claims.push_back({"P" + std::to_string(j + 1) + std::to_string(j + 1) + "' unchanged", blk(j * m, j * m, m, m),
                        blk(j * m, j * m, m, m)});
  c.claims.push_back({"Q11' = Q11 - R11 Lambda", blk(q, q, m, m),
                      [=](const PolyMatrix& h) { return h.block(q, q, m, m) - h.block(q, 0, m, m) * big; }});
  for (int k = 1; k < r; ++k) {
    int o = q + k * m;
    c.claims.push_back({"Q" + std::to_string(k + 1) + std::to_string(k + 1) + "' unchanged", blk(o, o, m, m), blk(o, o, m, m)});
  }
  return c;
}

IdentityCase case_4a() {
  int m = 2, l = 3, n = l * m;
  IdentityCase c;
  c.params = {{"m", m}, {"l", l}};
  c.h = PolyMatrix::symbols(QQ, 'p', n, n);
  PolyMatrix big = PolyMatrix::symbols(QQ, 's', m, m);
  c.n = PolyMatrix(QQ, n, n);
  c.n.set_block(0, m, big);
  c.claims.push_back({"P11' = P11 + Lambda P21", blk(0, 0, m, m),
                      [=](const PolyMatrix& h) { return h.block(0, 0, m, m) + big * h.block(m, 0, m, m); }});
  c.claims.push_back({"P22' = P22 - P21 Lambda", blk(m, m, m, m),
                      [=](const PolyMatrix& h) { return h.block(m, m, m, m) - h.block(m, 0, m, m) * big; }});
  for (int j = 2; j < l; ++j)
    c.claims.push_back({"P" + std::to_string(j + 1) + std::to_string(j + 1) + "' unchanged", blk(j * m, j * m, m, m),
                        blk(j * m, j * m, m, m)});
  return c;
}

// sp (sign = +1) and o (sign = -1) on K^{2n}, n = l m + z
IdentityCase case_cd(char letter) {
  int m = 1, l = 3, z = 0, n = l * m + z;
  long sg = letter == 'C' ? 1 : -1;
  IdentityCase c;
  c.params = {{"m", m}, {"l", l}, {"z", z}};
  c.h = PolyMatrix::symbols(QQ, 'p', 2 * n, 2 * n);
  c.n = PolyMatrix(QQ, 2 * n, 2 * n);
  place(c.n, 0, n + m, m, lam());
  place(c.n, m, n, m, lam() * cst(sg));
  c.form = form_matrix({letter, n}, QQ);
  auto P = [=](const PolyMatrix& h, int k, int j) { return h.block((k - 1) * m, (j - 1) * m, m, m); };
  auto Qb = [=](const PolyMatrix& h, int k, int j) { return h.block((k - 1) * m, n + (j - 1) * m, m, m); };
  auto R = [=](const PolyMatrix& h, int k, int j) { return h.block(n + (k - 1) * m, (j - 1) * m, m, m); };
  auto S = [=](const PolyMatrix& h, int k, int j) { return h.block(n + (k - 1) * m, n + (j - 1) * m, m, m); };
  CoordPoly l1 = lam(), l2 = lam() * lam();
  if (letter == 'C') {
    c.claims.push_back({"P11' = P11 + lambda R21", [=](const PolyMatrix& x) { return P(x, 1, 1); },
                        [=](const PolyMatrix& h) { return P(h, 1, 1) + R(h, 2, 1) * l1; }});
    c.claims.push_back({"P22' = P22 + lambda R12", [=](const PolyMatrix& x) { return P(x, 2, 2); },
                        [=](const PolyMatrix& h) { return P(h, 2, 2) + R(h, 1, 2) * l1; }});
    c.claims.push_back({"Q11' = Q11 + lambda (S21 - P12) - lambda^2 R22", [=](const PolyMatrix& x) { return Qb(x, 1, 1); },
                        [=](const PolyMatrix& h) {
                          return Qb(h, 1, 1) + (S(h, 2, 1) - P(h, 1, 2)) * l1 - R(h, 2, 2) * l2;
                        }});
    c.claims.push_back({"Q22' = Q22 + lambda (S12 - P21) - lambda^2 R11", [=](const PolyMatrix& x) { return Qb(x, 2, 2); },
                        [=](const PolyMatrix& h) {
                          return Qb(h, 2, 2) + (S(h, 1, 2) - P(h, 2, 1)) * l1 - R(h, 1, 1) * l2;
                        }});
  } else {
    c.claims.push_back({"P11' = P11 + lambda R21", [=](const PolyMatrix& x) { return P(x, 1, 1); },
                        [=](const PolyMatrix& h) { return P(h, 1, 1) + R(h, 2, 1) * l1; }});
    c.claims.push_back({"P22' = P22 - lambda R12", [=](const PolyMatrix& x) { return P(x, 2, 2); },
                        [=](const PolyMatrix& h) { return P(h, 2, 2) - R(h, 1, 2) * l1; }});
    c.claims.push_back({"Q11' = Q11 + lambda (S21 + P12) + lambda^2 R22", [=](const PolyMatrix& x) { return Qb(x, 1, 1); },
                        [=](const PolyMatrix& h) {
                          return Qb(h, 1, 1) + (S(h, 2, 1) + P(h, 1, 2)) * l1 + R(h, 2, 2) * l2;
                        }});
    c.claims.push_back({"Q22' = Q22 - lambda (S12 + P21) + lambda^2 R11", [=](const PolyMatrix& x) { return Qb(x, 2, 2); },
                        [=](const PolyMatrix& h) {
                          return Qb(h, 2, 2) - (S(h, 1, 2) + P(h, 2, 1)) * l1 + R(h, 1, 1) * l2;
                        }});
  }
  for (int k = 3; k <= l; ++k) {
    c.claims.push_back({"P" + std::to_string(k) + std::to_string(k) + "' unchanged",
                        [=](const PolyMatrix& x) { return P(x, k, k); }, [=](const PolyMatrix& h) { return P(h, k, k); }});
    c.claims.push_back({"Q" + std::to_string(k) + std::to_string(k) + "' unchanged",
                        [=](const PolyMatrix& x) { return Qb(x, k, k); }, [=](const PolyMatrix& h) { return Qb(h, k, k); }});
  }
  c.claims.push_back({"R' unchanged", blk(n, 0, l * m, l * m), blk(n, 0, l * m, l * m)});
  return c;
}

// H-form layout: P part l blocks of n, U part l single coordinates, S part l blocks of n
struct HLayout {
  int n, l;
  int p(int k) const { return (k - 1) * n; }
  int u(int j) const { return l * n + (j - 1); }
  int s(int k) const { return l * n + l + (k - 1) * n; }
  int size() const { return l * (2 * n + 1); }
  PolyMatrix P(const PolyMatrix& x, int k, int j) const { return x.block(p(k), p(j), n, n); }
  PolyMatrix Q(const PolyMatrix& x, int k, int j) const { return x.block(p(k), s(j), n, n); }
  PolyMatrix R(const PolyMatrix& x, int k, int j) const { return x.block(s(k), p(j), n, n); }
  PolyMatrix S(const PolyMatrix& x, int k, int j) const { return x.block(s(k), s(j), n, n); }
  PolyMatrix V(const PolyMatrix& x, int k, int j) const { return x.block(p(k), u(j), n, 1); }
  PolyMatrix W(const PolyMatrix& x, int k, int j) const { return x.block(s(k), u(j), n, 1); }
  // the arguments the type B pullback feeds to f
  PolyMatrix psum(const PolyMatrix& x) const {
    PolyMatrix out = P(x, 1, 1);
    for (int k = 2; k <= l; ++k) out = out + P(x, k, k);
    return out;
  }
  PolyMatrix anti(const PolyMatrix& x, PolyMatrix (HLayout::*get)(const PolyMatrix&, int, int) const) const {
    PolyMatrix out = (this->*get)(x, 1, l);
    for (int k = 2; k <= l; ++k) out = out + (this->*get)(x, k, l + 1 - k);
    return out;
  }
  PolyMatrix vsum(const PolyMatrix& x) const {
    PolyMatrix out = V(x, 1, 1);
    for (int k = 2; k <= l; ++k) out = out + V(x, k, k);
    return out;
  }
};

IdentityCase case_b1() {
  HLayout L{1, 3};
  int n = L.n, l = L.l;
  IdentityCase c;
  c.params = {{"n", n}, {"l", l}};
  c.h = PolyMatrix::symbols(QQ, 'p', L.size(), L.size());
  c.n = PolyMatrix(QQ, L.size(), L.size());
  place(c.n, L.p(1), L.s(l), n, -lam());
  place(c.n, L.p(l), L.s(1), n, lam());
  c.form = h_form(n, l, QQ);
  CoordPoly l1 = lam(), l2 = lam() * lam();
  c.claims.push_back({"sum P' = sum P + lambda (R1l - Rl1)", [=](const PolyMatrix& x) { return L.psum(x); },
                      [=](const PolyMatrix& h) { return L.psum(h) + (L.R(h, 1, l) - L.R(h, l, 1)) * l1; }});
  c.claims.push_back({"sum Q' = sum Q + lambda (P11 - Pll + S11 - Sll) - lambda^2 (R1l + Rl1)",
                      [=](const PolyMatrix& x) { return L.anti(x, &HLayout::Q); },
                      [=](const PolyMatrix& h) {
                        return L.anti(h, &HLayout::Q) + (L.P(h, 1, 1) - L.P(h, l, l) + L.S(h, 1, 1) - L.S(h, l, l)) * l1 -
                               (L.R(h, 1, l) + L.R(h, l, 1)) * l2;
                      }});
  c.claims.push_back({"sum R' = sum R", [=](const PolyMatrix& x) { return L.anti(x, &HLayout::R); },
                      [=](const PolyMatrix& h) { return L.anti(h, &HLayout::R); }});
  c.claims.push_back({"sum V' = sum V + lambda (W1l - Wl1)", [=](const PolyMatrix& x) { return L.vsum(x); },
                      [=](const PolyMatrix& h) { return L.vsum(h) + (L.W(h, 1, l) - L.W(h, l, 1)) * l1; }});
  c.claims.push_back({"sum W' = sum W", [=](const PolyMatrix& x) { return L.anti(x, &HLayout::W); },
                      [=](const PolyMatrix& h) { return L.anti(h, &HLayout::W); }});
  return c;
}

IdentityCase case_b2() {
  HLayout L{1, 5};
  int n = L.n, l = L.l;
  IdentityCase c;
  c.params = {{"n", n}, {"l", l}};
  c.h = PolyMatrix::symbols(QQ, 'p', L.size(), L.size());
  c.n = PolyMatrix(QQ, L.size(), L.size());
  c.n(L.u(2), L.u(1)) = lam();
  c.n(L.u(l), L.u(l - 1)) = -lam();
  c.form = h_form(n, l, QQ);
  CoordPoly mu = lam();
  c.claims.push_back({"W'_{k,1} = W_{k,1} - mu W_{k,2}", [=](const PolyMatrix& x) { return x.block(L.s(1), L.u(1), l * n, 1); },
                      [=](const PolyMatrix& h) {
                        return h.block(L.s(1), L.u(1), l * n, 1) - h.block(L.s(1), L.u(2), l * n, 1) * mu;
                      }});
  c.claims.push_back({"W'_{k,l-1} = W_{k,l-1} + mu W_{k,l}",
                      [=](const PolyMatrix& x) { return x.block(L.s(1), L.u(l - 1), l * n, 1); },
                      [=](const PolyMatrix& h) {
                        return h.block(L.s(1), L.u(l - 1), l * n, 1) + h.block(L.s(1), L.u(l), l * n, 1) * mu;
                      }});
  c.claims.push_back({"V'_{k,1} = V_{k,1} - mu V_{k,2}", [=](const PolyMatrix& x) { return x.block(0, L.u(1), l * n, 1); },
                      [=](const PolyMatrix& h) { return h.block(0, L.u(1), l * n, 1) - h.block(0, L.u(2), l * n, 1) * mu; }});
  c.claims.push_back({"V'_{k,l-1} = V_{k,l-1} + mu V_{k,l}",
                      [=](const PolyMatrix& x) { return x.block(0, L.u(l - 1), l * n, 1); },
                      [=](const PolyMatrix& h) {
                        return h.block(0, L.u(l - 1), l * n, 1) + h.block(0, L.u(l), l * n, 1) * mu;
                      }});
  for (int j : {2, 3, l}) {
    if (j == l - 1) continue;
    c.claims.push_back({"W and V column " + std::to_string(j) + " unchanged",
                        [=](const PolyMatrix& x) { return x.block(0, L.u(j), L.size(), 1).block(0, 0, l * n, 1); },
                        [=](const PolyMatrix& h) { return h.block(0, L.u(j), l * n, 1); }});
  }
  c.claims.push_back({"P, Q, R, S unchanged",
                      [=](const PolyMatrix& x) { return x.block(0, 0, l * n, l * n); },
                      [=](const PolyMatrix& h) { return h.block(0, 0, l * n, l * n); }});
  c.claims.push_back({"S part unchanged", blk(L.s(1), 0, l * n, l * n), blk(L.s(1), 0, l * n, l * n)});
  c.claims.push_back({"S part unchanged (right)", blk(L.s(1), L.s(1), l * n, l * n), blk(L.s(1), L.s(1), l * n, l * n)});
  c.claims.push_back({"Q part unchanged", blk(0, L.s(1), l * n, l * n), blk(0, L.s(1), l * n, l * n)});
  c.claims.push_back({"v argument W1l - Wl1 gains mu W_{l,2}",
                      [=](const PolyMatrix& x) { return L.W(x, 1, l) - L.W(x, l, 1); },
                      [=](const PolyMatrix& h) { return L.W(h, 1, l) - L.W(h, l, 1) + L.W(h, l, 2) * mu; }});
  c.claims.push_back({"w argument gains mu (W_{2,l} - W_{l,2})", [=](const PolyMatrix& x) { return L.anti(x, &HLayout::W); },
                      [=](const PolyMatrix& h) { return L.anti(h, &HLayout::W) + (L.W(h, 2, l) - L.W(h, l, 2)) * mu; }});
  c.claims.push_back({"sum V' = sum V + mu (V_{l-1,l} - V_{1,2})", [=](const PolyMatrix& x) { return L.vsum(x); },
                      [=](const PolyMatrix& h) { return L.vsum(h) + (L.V(h, l - 1, l) - L.V(h, 1, 2)) * mu; }});
  return c;
}

IdentityCase identity_case(const std::string& id) {
  if (id == "2") return case_2();
  if (id == "3a") return case_3a();
  if (id == "4a") return case_4a();
  if (id == "C") return case_cd('C');
  if (id == "D") return case_cd('D');
  if (id == "B1") return case_b1();
  if (id == "B2") return case_b2();
  throw std::invalid_argument("unknown identity case " + id);
}

CoordPoly negate_parameters(const CoordPoly& f) {
  return f.substitute([&](const CoordVar& v) -> std::optional<CoordPoly> {
    if (v.family == 'x' || v.family == 's') return -CoordPoly::var(QQ, v);
    return std::nullopt;
  });
}

std::optional<json> first_mismatch(const std::string& label, const PolyMatrix& expected, const PolyMatrix& actual,
                                   const char* mode) {
  if (expected.rows() != actual.rows() || expected.cols() != actual.cols())
    return json{{"claim", label}, {"mode", mode}, {"reason", "shape mismatch"}};
  for (int i = 0; i < expected.rows(); ++i)
    for (int j = 0; j < expected.cols(); ++j)
      if (expected(i, j) != actual(i, j))
        return json{{"claim", label},
                    {"mode", mode},
                    {"row", i},
                    {"col", j},
                    {"expected", expected(i, j).to_string()},
                    {"actual", actual(i, j).to_string()}};
  return std::nullopt;
}

// ---------------------------------------------------------------- rank bounds

Matrix random_symmetric(const FieldSpec& f, int n, Rng& rng) {
  Matrix y = Matrix::random(f, n, n, rng);
  return y + y.transpose();
}
Matrix random_skew_full(const FieldSpec& f, int n, Rng& rng) {
  Matrix y = Matrix::random(f, n, n, rng);
  return y - y.transpose();
}

struct RankSearch {
  Matrix sample;
  std::function<Matrix(int attempt)> generator;
  std::function<bool(const Matrix& conj)> breaks_hypothesis;
};

// ---------------------------------------------------------------- descriptors

ClosedSetDescriptor random_descriptor(const FieldSpec& f, Rng& rng) {
  ClosedSetDescriptor d{f, static_cast<int>(rng.range(-1, 4)), {}};
  int strata = static_cast<int>(rng.range(0, 5));
  for (int i = 0; i < strata; ++i) {
    Scalar l = f.is_finite() ? rng.scalar(f)
                             : Scalar::parse(f, std::to_string(rng.range(-3, 3)) + "/" + std::to_string(rng.range(1, 2)));
    d.exceptional[l] = static_cast<int>(rng.range(0, 8));
  }
  return descriptor_canonicalize(d);
}

}  // namespace

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::statistical_pass: return "statistical-pass";
  }
  return "";
}

Verdict verdict_from_name(const std::string& s) {
  if (s == "pass") return Verdict::pass;
  if (s == "fail") return Verdict::fail;
  if (s == "statistical-pass") return Verdict::statistical_pass;
  throw std::invalid_argument("unknown verdict " + s);
}

json to_json(const Report& r) {
  return {{"lemma", r.lemma}, {"params", r.params}, {"verdict", verdict_name(r.verdict)}, {"witness", r.witness}, {"ms", r.ms}};
}

Report report_from_json(const json& j) {
  return {j.at("lemma").get<std::string>(), j.at("params"), verdict_from_name(j.at("verdict").get<std::string>()),
          j.at("witness"), j.value("ms", std::int64_t{0})};
}

Report verify_char2(char part, const FieldSpec& f, int n, std::optional<int> trials, std::uint64_t seed) {
  Timer t;
  if (n < 1) throw std::invalid_argument("char2 needs n >= 1");
  json params = {{"part", std::string(1, part)}, {"field", f.to_string()}, {"n", n}, {"seed", seed}};
  if (trials) params["trials"] = *trials;
  if (part == 'a') {
    if (f.characteristic() == 2) throw std::invalid_argument("char2a needs characteristic other than 2");
    Rng rng = Rng::derive(seed, "char2a");
    if (!trials && f.is_finite()) {
      try {
        return char2a_enumerate(f, n, params, t);
      } catch (const std::length_error&) {
        params["trials"] = 100;
        return char2a_sample(f, n, 100, params, rng, t);
      }
    }
    int tr = trials.value_or(100);
    params["trials"] = tr;
    return char2a_sample(f, n, tr, params, rng, t);
  }
  if (part == 'b') {
    if (!(f == FieldSpec::gf(2))) throw std::invalid_argument("char2b runs over gf:2");
    if (n < 2) throw std::invalid_argument("char2b needs n >= 2");
    return char2b(n, params, t);
  }
  throw std::invalid_argument("char2 part must be a or b");
}

Report verify_commutator_scalar(const FieldSpec& f, int m, std::optional<int> trials, std::uint64_t seed) {
  Timer t;
  if (m < 1) throw std::invalid_argument("commutator needs m >= 1");
  json params = {{"field", f.to_string()}, {"m", m}, {"seed", seed}};
  Rng rng = Rng::derive(seed, "commutator");
  if (!trials && f.is_finite()) {
    try {
      return commutator_enumerate(f, m, params, t);
    } catch (const std::length_error&) {
    }
  }
  int tr = trials.value_or(100);
  params["trials"] = tr;
  return commutator_sample(f, m, tr, params, rng, t);
}

std::vector<std::string> conjugation_identity_ids() { return {"2", "3a", "4a", "C", "D", "B1", "B2"}; }

Report verify_conjugation_identity(const std::string& id, bool corrupt, std::uint64_t seed) {
  Timer t;
  IdentityCase c = identity_case(id);
  json params = c.params;
  params["case"] = id;
  params["seed"] = seed;
  if (corrupt) params["corrupt"] = true;
  const std::string lemma = "identity-" + id;
  int size = c.h.rows();
  PolyMatrix a = pm_identity(size) + c.n, ainv = pm_identity(size) - c.n;
  if (a * ainv != pm_identity(size))
    return make_report(lemma, params, Verdict::fail, {{"counterexample", {{"reason", "I - N is not the inverse"}}}}, t);
  if (c.form) {
    PolyMatrix j(*c.form);
    if (a.transpose() * j * a != j)
      return make_report(lemma, params, Verdict::fail, {{"counterexample", {{"reason", "A is not in the group"}}}}, t);
  }
  PolyMatrix conjugate = a * c.h * ainv;

  auto expected_of = [&](std::size_t i, const PolyMatrix& h) {
    PolyMatrix e = c.claims[i].expected(h);
    if (corrupt && i == 0)
      for (int r = 0; r < e.rows(); ++r)
        for (int col = 0; col < e.cols(); ++col) e(r, col) = negate_parameters(e(r, col));
    return e;
  };

  int entries = 0;
  for (std::size_t i = 0; i < c.claims.size(); ++i) {
    PolyMatrix exp = expected_of(i, c.h), act = c.claims[i].actual(conjugate);
    entries += exp.rows() * exp.cols();
    if (auto bad = first_mismatch(c.claims[i].label, exp, act, "symbolic"))
      return make_report(lemma, params, Verdict::fail, {{"counterexample", *bad}}, t);
  }

  // independent numeric check: random integer point, inverse computed by elimination
  Rng rng = Rng::derive(seed, lemma);
  std::map<CoordVar, Scalar> point;
  auto value = [&](const CoordVar& v) {
    auto it = point.find(v);
    if (it == point.end()) it = point.emplace(v, Scalar::from_int(QQ, rng.range(-9, 9))).first;
    return it->second;
  };
  Matrix hn = c.h.evaluate(value), an = a.evaluate(value);
  if (!c.form && !determinant(an).is_one())
    return make_report(lemma, params, Verdict::fail, {{"counterexample", {{"reason", "det A != 1"}}}}, t);
  PolyMatrix numeric(an * hn * inverse(an));
  for (std::size_t i = 0; i < c.claims.size(); ++i) {
    PolyMatrix exp(expected_of(i, c.h).evaluate(value)), act = c.claims[i].actual(numeric);
    if (auto bad = first_mismatch(c.claims[i].label, exp, act, "numeric")) {
      json pt = json::object();
      for (const auto& [v, s] : point) pt[v.to_string()] = s.to_string();
      (*bad)["point"] = pt;
      return make_report(lemma, params, Verdict::fail, {{"counterexample", *bad}}, t);
    }
  }
  json labels = json::array();
  for (const auto& cl : c.claims) labels.push_back(cl.label);
  return make_report(lemma, params, Verdict::pass, {{"claims", labels}, {"entries", entries}, {"size", size}}, t);
}

Report verify_rank_bound_samples(const RankBoundParams& p, std::uint64_t seed) {
  Timer t;
  const FieldSpec& f = p.field;
  if (f.characteristic() == 2) throw std::invalid_argument("rank bound searches need characteristic other than 2");
  if (p.m < 0 || p.trials < 1 || p.attempts < 1) throw std::invalid_argument("bad rank bound parameters");
  json params = {{"lemma", p.lemma}, {"n", p.n}, {"m", p.m}, {"trials", p.trials}, {"attempts", p.attempts},
                 {"field", f.to_string()}, {"min_rate", p.min_rate}, {"seed", seed}};
  const std::string lemma = "rankbound-" + p.lemma;
  Rng rng = Rng::derive(seed, lemma);
  int n = p.n, m = p.m;

  std::function<RankSearch()> make;
  int bound = 0;
  if (p.lemma == "sp" || p.lemma == "od") {
    bool sp = p.lemma == "sp";
    if (sp && n <= 6 * m) throw std::invalid_argument("the sp bound needs n > 6m");
    if (!sp && n < 20 * m + 2) throw std::invalid_argument("the od bound needs n >= 20m + 2");
    bound = sp ? 5 * m : 10 * m;
    int hyp = sp ? m : 2 * m;
    GroupType g{sp ? 'C' : 'D', n};
    params["bound"] = bound;
    params["hypothesis"] = "rk(R) <= " + std::to_string(hyp);
    make = [&, sp, hyp, g]() {
      RankSearch s;
      for (int tries = 0;; ++tries) {
        if (tries > 100) throw std::runtime_error("could not sample above the rank bound");
        Matrix pm = Matrix::random(f, n, n, rng);
        Matrix q = sp ? random_symmetric(f, n, rng) : random_skew_full(f, n, rng);
        Matrix mm(f, 2 * n, 2 * n);
        mm.set_block(0, 0, pm);
        mm.set_block(0, n, q);
        mm.set_block(n, n, -pm.transpose());
        if (!algebra_membership(g, mm)) throw std::logic_error("sampled element outside the algebra");
        if (rank(mm) > bound) {
          s.sample = mm;
          break;
        }
      }
      s.generator = [&, sp, g](int attempt) {
        Matrix a = sp ? random_symmetric(f, n, rng) : random_skew_full(f, n, rng);
        Matrix x(f, 2 * n, 2 * n);
        x.set_block(0, n, Matrix::identity(f, n));
        x.set_block(n, 0, sp ? -Matrix::identity(f, n) : Matrix::identity(f, n));
        x.set_block(n, n, a);
        if (attempt > 0) {
          Matrix h = random_invertible(f, n, rng);
          x = x * Matrix::diag({h, inverse(h).transpose()});
        }
        if (!group_membership(g, x)) throw std::logic_error("generator outside the group");
        return x;
      };
      s.breaks_hypothesis = [n, hyp](const Matrix& c) { return rank(c.block(n, 0, n, n)) > hyp; };
      return s;
    };
  } else if (p.lemma == "b") {
    int l = p.l;
    if (l < 1 || l % 2 == 0) throw std::invalid_argument("the H-form needs odd l");
    if (n < m + 5) throw std::invalid_argument("the b search needs n >= m + 5");
    params["l"] = l;
    bound = m + 4;
    params["bound"] = "rk(R) <= m + 4";
    params["hypothesis"] = "rk(R) <= m or first and last columns of W dependent";
    int big = l * (2 * n + 1), ln = l * n;
    Matrix jh = h_form(n, l, f);
    Matrix k(f, l, l);
    for (int u = 0; u < l; ++u) k(u, l - 1 - u) = Scalar::one(f);
    Scalar half = Scalar::from_int(f, 2).inverse();
    make = [&, l, big, ln, jh, k, half]() {
      RankSearch s;
      for (int tries = 0;; ++tries) {
        if (tries > 100) throw std::runtime_error("could not sample above the rank bound");
        Matrix y = Matrix::random(f, big, big, rng);
        y.set_block(ln + l, ln, Matrix(f, ln, l));  // (S, U)
        y.set_block(ln, 0, Matrix(f, l, ln));       // (U, P)
        Matrix x = y - jh * y.transpose() * jh;
        if (x.transpose() * jh + jh * x != Matrix(f, big, big)) throw std::logic_error("sampled element outside h");
        if (rank(x.block(ln + l, 0, ln, ln)) > bound) {
          s.sample = x;
          break;
        }
      }
      s.generator = [&, l, big, ln, jh, k, half](int attempt) {
        Matrix a = attempt == 0 ? Matrix(f, ln, l) : Matrix::random(f, ln, l, rng);
        Matrix g = Matrix::identity(f, big);
        g.set_block(0, ln, a);
        g.set_block(0, ln + l, -(a * k * a.transpose()) * half);
        g.set_block(ln, ln + l, -(k * a.transpose()));
        if (g.transpose() * jh * g != jh) throw std::logic_error("generator outside H");
        return inverse(g);  // the search conjugates by g^{-1} ... g
      };
      s.breaks_hypothesis = [&, l, ln](const Matrix& c) {
        if (rank(c.block(ln + l, 0, ln, ln)) <= m) return false;
        Matrix w = c.block(ln + l, ln, ln, l);
        return rank(hstack({w.column(0), w.column(l - 1)})) == 2;
      };
      return s;
    };
  } else {
    throw std::invalid_argument("rank bound lemma must be sp, od or b");
  }

  int found = 0;
  json example, missing;
  for (int trial = 0; trial < p.trials; ++trial) {
    RankSearch s = make();
    bool ok = false;
    for (int attempt = 0; attempt < p.attempts && !ok; ++attempt) {
      Matrix g = s.generator(attempt);
      Matrix c = conj(g, s.sample);
      if (s.breaks_hypothesis(c)) {
        ok = true;
        if (example.is_null()) example = {{"sample", matrix_to_json(s.sample)}, {"g", matrix_to_json(g)}, {"attempt", attempt}};
      }
    }
    if (ok) ++found;
    else if (missing.is_null()) missing = matrix_to_json(s.sample);
  }
  double rate = static_cast<double>(found) / p.trials;
  json w = {{"samples", p.trials}, {"witnessed", found}, {"rate", rate}};
  if (rate >= p.min_rate) {
    w["example"] = example;
    return make_report(lemma, params, Verdict::statistical_pass, w, t);
  }
  w["counterexample"] = {{"sample", missing}, {"reason", "no hypothesis-breaking conjugate found"}};
  return make_report(lemma, params, Verdict::fail, w, t);
}

Report verify_equivariance(const ChainSpec& c, int levels, int trials, const FieldSpec& f, std::uint64_t seed) {
  Timer t;
  c.validate();
  json params = {{"chain", chain_to_json(c)}, {"levels", levels}, {"trials", trials}, {"field", f.to_string()}, {"seed", seed}};
  Rng rng = Rng::derive(seed, "equivariance");
  int checks = 0;
  for (int level = 1; level <= levels; ++level) {
    Embedding e = chain_embedding(c, level);
    for (int trial = 0; trial < trials; ++trial) {
      Matrix g = trial == 0 ? Matrix::identity(f, e.source.size()) : random_group_element(e.source, f, rng, 3);
      Matrix m = random_dual_element(e.target, f, rng);
      Matrix eg = embed_group(e, g);
      Matrix lhs = project_dual(e, eg * m * inverse(eg)), rhs = g * project_dual(e, m) * inverse(g);
      ++checks;
      if (!dual_equal(e.source, lhs, rhs))
        return make_report("equivariance", params, Verdict::fail,
                           {{"counterexample", {{"level", level}, {"g", matrix_to_json(g)}, {"m", matrix_to_json(m)}}}}, t);
    }
  }
  return make_report("equivariance", params, Verdict::pass, {{"checks", checks}}, t);
}

Report verify_tuple_rank_oracle(const FieldSpec& f, int n_max) {
  Timer t;
  json params = {{"field", f.to_string()}, {"n_max", n_max}};
  if (!f.is_finite()) throw std::invalid_argument("tuple rank oracle enumerates a finite field");
  int checks = 0;
  for (int n = 1; n <= n_max; ++n)
    for (const auto& a : all_residue_matrices(f.p, n, 1000000)) {
      Matrix p = residue_matrix(f, a, n);
      int lhs = tuple_rank_identity(p), rhs = pencil_rank_enumerate({p, Matrix::identity(f, n)}).rank;
      ++checks;
      if (lhs != rhs)
        return make_report("tuplerank-oracle", params, Verdict::fail,
                           {{"counterexample", {{"p", matrix_to_json(p)}, {"tuple_rank", lhs}, {"pencil_rank", rhs}}}}, t);
    }
  return make_report("tuplerank-oracle", params, Verdict::pass, {{"checks", checks}}, t);
}

Report verify_offdiag_criterion(int samples, std::uint64_t seed) {
  Timer t;
  const FieldSpec f = FieldSpec::gf(2);
  const int n = 4, k = 1, m = 2;
  json params = {{"field", f.to_string()}, {"n", n}, {"k", k}, {"m", m}, {"samples", samples}, {"seed", seed}};
  Rng rng = Rng::derive(seed, "offdiag");
  GLTable table = GLTable::build(f, n);
  int agree = 0, low = 0;
  for (int s = 0; s < samples; ++s) {
    // alternate uniform matrices with scalar plus rank one, so both verdicts occur
    Matrix p = Matrix::random(f, n, n, rng);
    if (s % 2) p = Matrix::identity(f, n) * rng.scalar(f) + Matrix::random(f, n, 1, rng) * Matrix::random(f, 1, n, rng);
    bool expected = tuple_rank_identity(p) <= k;
    low += expected;
    OffdiagResult r = offdiag_exhaustive(p, k, m, &table);
    if (r.holds != expected)
      return make_report("offdiag", params, Verdict::fail,
                         {{"counterexample", {{"p", matrix_to_json(p)}, {"criterion", r.holds}, {"tuple_rank", tuple_rank_identity(p)}}}},
                         t);
    ++agree;
  }
  return make_report("offdiag", params, Verdict::pass, {{"agreements", agree}, {"low_tuple_rank", low}, {"group_order", table.elements.size()}}, t);
}

Report verify_topleft(int instances, std::uint64_t seed) {
  Timer t;
  json params = {{"instances", instances}, {"fields", {"gf:5", "qq"}}, {"n_max", 3}, {"seed", seed}};
  Rng rng = Rng::derive(seed, "topleft");
  int checks = 0;
  for (FieldSpec f : {FieldSpec::gf(5), FieldSpec::qq()})
    for (int i = 0; i < instances; ++i) {
      int n = static_cast<int>(rng.range(1, 3));
      int k = static_cast<int>(rng.range(0, n - 1));
      Matrix p = conj(random_invertible(f, 2 * n, rng), random_rank(f, 2 * n, k, rng));
      Matrix q = random_rank(f, n, static_cast<int>(rng.range(0, k)), rng);
      Matrix g = topleft_realization(p, q);
      Matrix c = conj(g, p);
      ++checks;
      if (c.block(0, 0, n, n) != q || rank(c) != k)
        return make_report("topleft", params, Verdict::fail,
                           {{"counterexample", {{"p", matrix_to_json(p)}, {"q", matrix_to_json(q)}, {"g", matrix_to_json(g)}}}}, t);
    }
  return make_report("topleft", params, Verdict::pass, {{"checks", checks}}, t);
}

Report verify_raise_rank(int instances, std::uint64_t seed) {
  Timer t;
  const FieldSpec f = FieldSpec::qq();
  const int n = 6, k = 1;
  json params = {{"instances", instances}, {"field", f.to_string()}, {"n", n}, {"k", k}, {"l_max", 4}, {"seed", seed}};
  Rng rng = Rng::derive(seed, "raise-rank");
  for (int i = 0; i < instances; ++i) {
    int l = static_cast<int>(rng.range(2, 4));
    std::vector<Matrix> ps;
    for (int j = 0; j < l; ++j) ps.push_back(random_rank(f, n, k, rng));
    auto gs = raise_sum_rank(ps);
    Matrix sum(f, n, n);
    for (int j = 0; j < l; ++j) sum = sum + conj(gs[j], ps[j]);
    int s = rank(sum);
    if (!(k < s && s <= 3 * k && tuple_rank_identity(sum) == s)) {
      json inputs = json::array();
      for (const auto& q : ps) inputs.push_back(matrix_to_json(q));
      return make_report("raise-rank", params, Verdict::fail,
                         {{"counterexample", {{"inputs", inputs}, {"rank", s}, {"tuple_rank", tuple_rank_identity(sum)}}}}, t);
    }
  }
  return make_report("raise-rank", params, Verdict::pass, {{"checks", instances}}, t);
}

Report verify_descriptor_lattice(int cases, std::uint64_t seed) {
  Timer t;
  json params = {{"cases", cases}, {"fields", {"gf:7", "qq"}}, {"seed", seed}};
  Rng rng = Rng::derive(seed, "descriptor-lattice");
  auto fail = [&](const std::string& law, const std::vector<ClosedSetDescriptor>& ds) {
    json arr = json::array();
    for (const auto& d : ds) arr.push_back(to_json(d));
    return make_report("descriptor-lattice", params, Verdict::fail, {{"counterexample", {{"law", law}, {"descriptors", arr}}}}, t);
  };
  for (int i = 0; i < cases; ++i) {
    FieldSpec f = i % 2 ? FieldSpec::qq() : FieldSpec::gf(7);
    auto a = random_descriptor(f, rng), b = random_descriptor(f, rng), c = random_descriptor(f, rng);
    auto U = descriptor_union, I = descriptor_intersect;
    auto C = descriptor_contains;
    if (!(U(a, a) == a && I(a, a) == a)) return fail("idempotence", {a});
    if (!(U(a, b) == U(b, a) && I(a, b) == I(b, a))) return fail("commutativity", {a, b});
    if (!(U(a, U(b, c)) == U(U(a, b), c) && I(a, I(b, c)) == I(I(a, b), c))) return fail("associativity", {a, b, c});
    if (!(U(a, I(a, b)) == a && I(a, U(a, b)) == a)) return fail("absorption", {a, b});
    if (!C(a, a)) return fail("reflexivity", {a});
    if (C(a, b) && C(b, a) && !(a == b)) return fail("antisymmetry", {a, b});
    if (C(a, b) && C(b, c) && !C(a, c)) return fail("transitivity", {a, b, c});
    if (C(a, b) != (U(a, b) == a)) return fail("order matches union", {a, b});
  }
  // strictly descending chains with a constant tail stabilize at the strict step count
  int chains = 0;
  for (int i = 0; i < cases; ++i) {
    FieldSpec f = i % 2 ? FieldSpec::qq() : FieldSpec::gf(7);
    std::vector<ClosedSetDescriptor> chain = {random_descriptor(f, rng)};
    std::size_t strict = 0, steps = rng.below(8);
    for (std::size_t step = 0; step < steps; ++step) {
      ClosedSetDescriptor next = chain.back();
      if (!next.exceptional.empty() && (next.k < 0 || rng.range(0, 1))) {
        auto it = next.exceptional.begin();
        std::advance(it, rng.below(next.exceptional.size()));
        --it->second;
      } else if (next.k >= 0) {
        --next.k;
      } else {
        break;
      }
      next = descriptor_canonicalize(next);
      chain.push_back(next);
      ++strict;
    }
    for (std::uint64_t tail = rng.below(5); tail > 0; --tail) chain.push_back(chain.back());
    ++chains;
    if (chain_stabilization(chain) != strict) return fail("chain stabilization", chain);
  }
  return make_report("descriptor-lattice", params, Verdict::pass, {{"cases", cases}, {"chains", chains}}, t);
}

Report verify_degeneration(int n_max, int k_max, int targets, std::uint64_t seed) {
  Timer t;
  const FieldSpec Q = FieldSpec::qq(), QT = FieldSpec::qq_t();
  json params = {{"n_max", n_max}, {"k_max", k_max}, {"targets", targets}, {"seed", seed}};
  Rng rng = Rng::derive(seed, "degeneration");
  int checks = 0;
  json shapes = json::array();
  for (int n = 1; n <= n_max; ++n)
    for (int k = 0; k <= k_max && 2 * k <= n; ++k)
      for (int rr = std::max(2, 2 * k); rr <= n; rr += 2) {
        shapes.push_back({n, k, rr});
        for (int i = 0; i < targets; ++i) {
          Matrix r = random_skew(Q, n, rr, rng);
          Matrix w = random_rank(Q, n, k, rng).block(0, 0, n, k);
          if (rank(w) != k) {
            --i;
            continue;
          }
          Matrix q = random_skew(Q, n, 2 * static_cast<int>(rng.range(0, (rr - 2 * k) / 2)), rng);
          Matrix v = Matrix::random(Q, n, k, rng);
          Matrix g = degeneration_witness(r, w, q, v);
          ++checks;
          bool ok = is_invertible(g);
          try {
            ok = ok && limit_at_zero(g * to_field(r, QT) * g.transpose()) == q && limit_at_zero(g * to_field(w, QT)) == v;
          } catch (const pole_error&) {
            ok = false;
          }
          if (!ok)
            return make_report("degeneration", params, Verdict::fail,
                               {{"counterexample",
                                 {{"r", matrix_to_json(r)}, {"w", matrix_to_json(w)}, {"q", matrix_to_json(q)}, {"v", matrix_to_json(v)}}}},
                               t);
        }
      }
  return make_report("degeneration", params, Verdict::pass, {{"checks", checks}, {"shapes", shapes}}, t);
}

std::vector<std::string> lemma_ids() {
  std::vector<std::string> ids = {"char2a", "char2b", "commutator"};
  for (const auto& c : conjugation_identity_ids()) ids.push_back("identity-" + c);
  for (const auto& s : {"rankbound-sp", "rankbound-od", "rankbound-b", "equivariance", "tuplerank-oracle", "offdiag",
                        "topleft", "raise-rank", "descriptor-lattice", "degeneration"})
    ids.push_back(s);
  return ids;
}

namespace {

ChainSpec default_chain(char type) {
  switch (type) {
    case 'A': return {'A', 2, {}, {{1, 1, 1}}};
    case 'B': return {'B', 1, {}, {{1, 0, 2}}};
    case 'C': return {'C', 1, {}, {{1, 0, 1}}};
    case 'D': return {'D', 1, {}, {{1, 0, 1}}};
  }
  throw std::invalid_argument("chain type must be A, B, C or D");
}

std::optional<int> opt_int(const json& p, const char* key) {
  if (!p.contains(key)) return std::nullopt;
  return p.at(key).get<int>();
}

}  // namespace

Report verify(const std::string& id, const json& params_in, std::uint64_t seed) {
  const json p = params_in.is_null() ? json::object() : params_in;
  if (!p.is_object()) throw std::invalid_argument("params must be a JSON object");
  try {
    if (id == "char2a") return verify_char2('a', field_param(p, "field", FieldSpec::gf(3)), p.value("n", 2), opt_int(p, "trials"), seed);
    if (id == "char2b") return verify_char2('b', field_param(p, "field", FieldSpec::gf(2)), p.value("n", 3), std::nullopt, seed);
    if (id == "commutator")
      return verify_commutator_scalar(field_param(p, "field", FieldSpec::gf(3)), p.value("m", 2), opt_int(p, "trials"), seed);
    if (id == "identity") return verify_conjugation_identity(p.at("case").get<std::string>(), p.value("corrupt", false), seed);
    if (id.rfind("identity-", 0) == 0) return verify_conjugation_identity(id.substr(9), p.value("corrupt", false), seed);
    if (id.rfind("rankbound-", 0) == 0) {
      RankBoundParams r;
      r.lemma = id.substr(10);
      r.n = p.value("n", r.lemma == "sp" ? 8 : r.lemma == "od" ? 22 : 6);
      r.m = p.value("m", 1);
      r.l = p.value("l", 3);
      r.trials = p.value("trials", 20);
      r.attempts = p.value("attempts", 40);
      r.field = field_param(p, "field", FieldSpec::gf(101));
      r.min_rate = p.value("min_rate", 0.95);
      return verify_rank_bound_samples(r, seed);
    }
    if (id == "equivariance") {
      ChainSpec c = p.contains("chain") ? chain_from_json(p.at("chain")) : default_chain(p.value("type", std::string("A")).at(0));
      return verify_equivariance(c, p.value("levels", 2), p.value("trials", 200), field_param(p, "field", FieldSpec::gf(7)), seed);
    }
    if (id == "tuplerank-oracle") return verify_tuple_rank_oracle(field_param(p, "field", FieldSpec::gf(2)), p.value("n_max", 3));
    if (id == "offdiag") return verify_offdiag_criterion(p.value("samples", 50), seed);
    if (id == "topleft") return verify_topleft(p.value("instances", 100), seed);
    if (id == "raise-rank") return verify_raise_rank(p.value("instances", 100), seed);
    if (id == "descriptor-lattice") return verify_descriptor_lattice(p.value("cases", 1000), seed);
    if (id == "degeneration") return verify_degeneration(p.value("n_max", 4), p.value("k_max", 1), p.value("targets", 20), seed);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad params: ") + e.what());
  }
  throw std::invalid_argument("unknown lemma id " + id);
}

json default_suite_config() {
  json checks = json::array();
  auto add = [&](const std::string& id, json params) { checks.push_back({{"lemma", id}, {"params", std::move(params)}}); };
  add("tuplerank-oracle", {{"field", "gf:2"}, {"n_max", 3}});
  add("offdiag", {{"samples", 50}});
  add("topleft", {{"instances", 100}});
  add("raise-rank", {{"instances", 100}});
  add("descriptor-lattice", {{"cases", 1000}});
  for (int n = 2; n <= 8; ++n) add("char2b", {{"n", n}});
  add("char2a", {{"field", "gf:3"}, {"n", 2}});
  add("char2a", {{"field", "gf:5"}, {"n", 2}});
  add("char2a", {{"field", "gf:7"}, {"n", 2}});
  add("commutator", {{"field", "gf:3"}, {"m", 2}});
  add("commutator", {{"field", "gf:5"}, {"m", 2}});
  add("commutator", {{"field", "gf:7"}, {"m", 2}});
  for (const auto& c : conjugation_identity_ids()) add("identity-" + c, json::object());
  add("rankbound-sp", {{"n", 8}, {"m", 1}});
  add("rankbound-od", {{"n", 22}, {"m", 1}});
  add("rankbound-b", {{"n", 6}, {"l", 3}, {"m", 1}});
  for (const char* type : {"A", "B", "C", "D"}) add("equivariance", {{"type", type}, {"trials", 200}});
  add("degeneration", {{"n_max", 4}, {"k_max", 1}, {"targets", 20}});
  return {{"checks", checks}};
}

Report run_suite(const json& config, std::uint64_t seed) {
  Timer t;
  if (!config.is_object()) throw std::invalid_argument("suite config must be a JSON object");
  json checks = config.value("checks", json::array());
  if (!checks.is_array()) throw std::invalid_argument("suite config checks must be an array");
  json reports = json::array();
  Verdict overall = Verdict::pass;
  int fails = 0, statistical = 0;
  for (const auto& c : checks) {
    if (!c.is_object() || !c.contains("lemma")) throw std::invalid_argument("each check needs a lemma id");
    Report r = verify(c.at("lemma").get<std::string>(), c.value("params", json::object()), seed);
    if (r.verdict == Verdict::fail) ++fails, overall = Verdict::fail;
    if (r.verdict == Verdict::statistical_pass) {
      ++statistical;
      if (overall == Verdict::pass) overall = Verdict::statistical_pass;
    }
    reports.push_back(to_json(r));
  }
  std::stable_sort(reports.begin(), reports.end(),
                   [](const json& a, const json& b) { return a.at("lemma").get<std::string>() < b.at("lemma").get<std::string>(); });
  return make_report("suite", {{"seed", seed}, {"checks", checks.size()}}, overall,
                     {{"reports", reports}, {"fails", fails}, {"statistical", statistical}}, t);
}

}  // namespace locdiag
