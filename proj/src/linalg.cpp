#include "locdiag/linalg.hpp"

#include <algorithm>
#include <map>

namespace locdiag {

RrefResult rank_and_rref(const Matrix& m) {
  const FieldSpec& f = m.field();
  int rows = m.rows(), cols = m.cols();
  Matrix a = m, t = Matrix::identity(f, rows);
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int p = -1;
    for (int i = r; i < rows; ++i)
      if (!a(i, c).is_zero()) {
        p = i;
        break;
      }
    if (p < 0) continue;
    if (p != r)
      for (int j = 0; j < std::max(cols, rows); ++j) {
        if (j < cols) std::swap(a(p, j), a(r, j));
        if (j < rows) std::swap(t(p, j), t(r, j));
      }
    Scalar inv = a(r, c).inverse();
    for (int j = 0; j < cols; ++j) a(r, j) *= inv;
    for (int j = 0; j < rows; ++j) t(r, j) *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || a(i, c).is_zero()) continue;
      Scalar fct = a(i, c);
      for (int j = 0; j < cols; ++j)
        if (!a(r, j).is_zero()) a(i, j) -= fct * a(r, j);
      for (int j = 0; j < rows; ++j)
        if (!t(r, j).is_zero()) t(i, j) -= fct * t(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return {r, a, t, pivots};
}

int rank(const Matrix& m) {
  // plain elimination without the transform
  Matrix a = m;
  int rows = a.rows(), cols = a.cols(), r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int p = -1;
    for (int i = r; i < rows; ++i)
      if (!a(i, c).is_zero()) {
        p = i;
        break;
      }
    if (p < 0) continue;
    if (p != r)
      for (int j = c; j < cols; ++j) std::swap(a(p, j), a(r, j));
    Scalar inv = a(r, c).inverse();
    for (int i = r + 1; i < rows; ++i) {
      if (a(i, c).is_zero()) continue;
      Scalar fct = a(i, c) * inv;
      for (int j = c; j < cols; ++j)
        if (!a(r, j).is_zero()) a(i, j) -= fct * a(r, j);
    }
    ++r;
  }
  return r;
}

Scalar determinant(const Matrix& m) {
  if (!m.square()) throw std::invalid_argument("determinant of non-square matrix");
  Matrix a = m;
  int n = a.rows();
  Scalar det = Scalar::one(m.field());
  for (int c = 0; c < n; ++c) {
    int p = -1;
    for (int i = c; i < n; ++i)
      if (!a(i, c).is_zero()) {
        p = i;
        break;
      }
    if (p < 0) return Scalar::zero(m.field());
    if (p != c) {
      for (int j = c; j < n; ++j) std::swap(a(p, j), a(c, j));
      det = -det;
    }
    det *= a(c, c);
    Scalar inv = a(c, c).inverse();
    for (int i = c + 1; i < n; ++i) {
      if (a(i, c).is_zero()) continue;
      Scalar fct = a(i, c) * inv;
      for (int j = c; j < n; ++j) a(i, j) -= fct * a(c, j);
    }
  }
  return det;
}

Matrix inverse(const Matrix& m) {
  if (!m.square()) throw std::invalid_argument("inverse of non-square matrix");
  RrefResult r = rank_and_rref(m);
  if (r.rank != m.rows()) throw division_by_zero("matrix is singular");
  return r.transform;
}

bool is_invertible(const Matrix& m) { return m.square() && rank(m) == m.rows(); }

Matrix kernel(const Matrix& m) {
  RrefResult r = rank_and_rref(m);
  int cols = m.cols();
  std::vector<bool> is_pivot(cols, false);
  for (int p : r.pivots) is_pivot[p] = true;
  std::vector<int> free;
  for (int j = 0; j < cols; ++j)
    if (!is_pivot[j]) free.push_back(j);
  Matrix k(m.field(), cols, static_cast<int>(free.size()));
  for (std::size_t s = 0; s < free.size(); ++s) {
    int fj = free[s];
    k(fj, s) = Scalar::one(m.field());
    for (std::size_t i = 0; i < r.pivots.size(); ++i) k(r.pivots[i], s) = -r.rref(i, fj);
  }
  return k;
}

std::optional<Matrix> solve(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("solve: row mismatch");
  RrefResult r = rank_and_rref(a);
  Matrix tb = r.transform * b;
  for (int i = r.rank; i < a.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j)
      if (!tb(i, j).is_zero()) return std::nullopt;
  Matrix x(a.field(), a.cols(), b.cols());
  for (int i = 0; i < r.rank; ++i)
    for (int j = 0; j < b.cols(); ++j) x(r.pivots[i], j) = tb(i, j);
  return x;
}

Matrix independent_columns(const Matrix& v) {
  RrefResult r = rank_and_rref(v);
  return v.select([&] {
    std::vector<int> all(v.rows());
    for (int i = 0; i < v.rows(); ++i) all[i] = i;
    return all;
  }(), r.pivots);
}

Matrix extend_to_basis(const Matrix& v, int n) {
  Matrix basis = v.cols() ? independent_columns(v) : Matrix(v.field(), n, 0);
  int have = basis.cols();
  for (int i = 0; i < n && have < n; ++i) {
    Matrix cand = basis.cols() ? hstack({basis, Matrix::elementary(v.field(), n, 1, i, 0)})
                               : Matrix::elementary(v.field(), n, 1, i, 0);
    if (rank(cand) == have + 1) {
      basis = cand;
      ++have;
    }
  }
  return basis;
}

UniPoly char_poly(const Matrix& m) {
  if (!m.square()) throw std::invalid_argument("char_poly of non-square matrix");
  const FieldSpec& f = m.field();
  int n = m.rows();
  if (n == 0) return {f, {Scalar::one(f)}};
  // v holds coefficients from the top degree down
  std::vector<Scalar> v = {Scalar::one(f), -m(0, 0)};
  for (int r = 1; r < n; ++r) {
    // leading (r+1)x(r+1) block: [[A, C], [R, a]]
    std::vector<Scalar> col;  // first column of the Toeplitz matrix
    col.push_back(Scalar::one(f));
    col.push_back(-m(r, r));
    std::vector<Scalar> power(r);  // A^k C
    for (int i = 0; i < r; ++i) power[i] = m(i, r);
    for (int k = 0; k < r; ++k) {
      Scalar s = Scalar::zero(f);
      for (int i = 0; i < r; ++i) s += m(r, i) * power[i];
      col.push_back(-s);
      if (k + 1 < r) {
        std::vector<Scalar> next(r, Scalar::zero(f));
        for (int i = 0; i < r; ++i)
          for (int j = 0; j < r; ++j)
            if (!power[j].is_zero()) next[i] += m(i, j) * power[j];
        power = std::move(next);
      }
    }
    std::vector<Scalar> w(r + 2, Scalar::zero(f));
    for (int i = 0; i < r + 2; ++i)
      for (int j = 0; j <= std::min(i, r); ++j) w[i] += col[i - j] * v[j];
    v = std::move(w);
  }
  std::reverse(v.begin(), v.end());
  return {f, v};
}

namespace {

std::vector<mpz_class> prime_factors(mpz_class n) {
  std::vector<mpz_class> out;
  if (n < 0) n = -n;
  for (unsigned long d = 2; d < 100000 && mpz_class(d) * d <= n; ++d) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), d)) {
      out.push_back(d);
      while (mpz_divisible_ui_p(n.get_mpz_t(), d)) n /= d;
    }
  }
  if (n == 1) return out;
  // Pollard rho on what is left
  std::vector<mpz_class> stack = {n};
  while (!stack.empty()) {
    mpz_class x = stack.back();
    stack.pop_back();
    if (x == 1) continue;
    if (mpz_probab_prime_p(x.get_mpz_t(), 30)) {
      out.push_back(x);
      continue;
    }
    mpz_class factor = x;
    for (unsigned long c = 1; factor == x; ++c) {
      mpz_class a = 2, b = 2, g = 1;
      while (g == 1) {
        a = (a * a + c) % x;
        b = (b * b + c) % x;
        b = (b * b + c) % x;
        mpz_class diff = a - b;
        if (diff < 0) diff = -diff;
        mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), x.get_mpz_t());
      }
      if (g != x) factor = g;
    }
    stack.push_back(factor);
    stack.push_back(x / factor);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<mpz_class> divisors(mpz_class n) {
  if (n < 0) n = -n;
  std::vector<mpz_class> divs = {1};
  for (const mpz_class& p : prime_factors(n)) {
    std::size_t base = divs.size();
    mpz_class pk = 1, rest = n;
    while (mpz_divisible_p(rest.get_mpz_t(), p.get_mpz_t())) {
      rest /= p;
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pk);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

std::vector<mpq_class> rational_roots(const std::vector<mpq_class>& c) {
  std::vector<mpq_class> roots;
  std::vector<mpz_class> z;
  mpz_class l = 1;
  for (const auto& x : c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den().get_mpz_t());
  for (const auto& x : c) z.push_back(mpz_class(x * l));
  while (!z.empty() && z.back() == 0) z.pop_back();
  std::size_t lo = 0;
  while (lo < z.size() && z[lo] == 0) ++lo;
  if (lo > 0) roots.push_back(0);
  if (z.size() - lo <= 1) return roots;
  std::vector<mpz_class> poly(z.begin() + lo, z.end());
  auto is_root = [&](const mpq_class& r) {
    mpq_class acc = 0;
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) acc = acc * r + *it;
    return acc == 0;
  };
  for (const mpz_class& p : divisors(poly.front()))
    for (const mpz_class& q : divisors(poly.back()))
      for (int sign : {1, -1}) {
        mpq_class r(sign * p, q);
        r.canonicalize();
        if (std::find(roots.begin(), roots.end(), r) == roots.end() && is_root(r)) roots.push_back(r);
      }
  return roots;
}

// ---- roots over GF(p) through polynomial arithmetic mod p

using ModPoly = std::vector<std::uint64_t>;

void trim(ModPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1;
  b %= p;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

ModPoly poly_mod(ModPoly a, const ModPoly& m, std::uint64_t p) {
  trim(a);
  std::uint64_t inv = powmod(m.back(), p - 2, p);
  int dm = static_cast<int>(m.size()) - 1;
  for (int k = static_cast<int>(a.size()) - 1; k >= dm; --k) {
    std::uint64_t f = a[k] * inv % p;
    if (!f) continue;
    for (int j = 0; j <= dm; ++j) a[k - dm + j] = (a[k - dm + j] + p - f * m[j] % p) % p;
  }
  trim(a);
  return a;
}

ModPoly poly_mulmod(const ModPoly& a, const ModPoly& b, const ModPoly& m, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  ModPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  return poly_mod(r, m, p);
}

ModPoly poly_powmod(ModPoly base, std::uint64_t e, const ModPoly& m, std::uint64_t p) {
  ModPoly r = {1};
  base = poly_mod(base, m, p);
  while (e) {
    if (e & 1) r = poly_mulmod(r, base, m, p);
    base = poly_mulmod(base, base, m, p);
    e >>= 1;
  }
  return r;
}

ModPoly poly_gcd(ModPoly a, ModPoly b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    ModPoly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    std::uint64_t inv = powmod(a.back(), p - 2, p);
    for (auto& x : a) x = x * inv % p;
  }
  return a;
}

ModPoly poly_sub(ModPoly a, const ModPoly& b, std::uint64_t p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
  trim(a);
  return a;
}

void split_roots(const ModPoly& g, std::uint64_t p, std::vector<std::uint64_t>& out) {
  int d = static_cast<int>(g.size()) - 1;
  if (d <= 0) return;
  if (d == 1) {
    out.push_back((p - g[0] * powmod(g[1], p - 2, p) % p) % p);
    return;
  }
  for (std::uint64_t a = 0;; ++a) {
    ModPoly h = poly_powmod({a % p, 1}, (p - 1) / 2, g, p);
    ModPoly c = poly_gcd(g, poly_sub(h, {1}, p), p);
    int dc = static_cast<int>(c.size()) - 1;
    if (dc > 0 && dc < d) {
      split_roots(c, p, out);
      // g / c by long division
      ModPoly quo(d - dc + 1, 0), work = g;
      for (int k = d; k >= dc; --k) {
        std::uint64_t f = work[k];
        quo[k - dc] = f;
        if (!f) continue;
        for (int j = 0; j <= dc; ++j) work[k - dc + j] = (work[k - dc + j] + p - f * c[j] % p) % p;
      }
      trim(quo);
      split_roots(quo, p, out);
      return;
    }
  }
}

std::vector<std::uint64_t> gf_roots(const UniPoly& f) {
  std::uint64_t p = f.field.p;
  ModPoly a;
  for (const auto& c : f.coeffs) a.push_back(c.residue());
  trim(a);
  std::vector<std::uint64_t> roots;
  if (a.size() <= 1) return roots;
  if (p <= (1u << 16)) {
    for (std::uint64_t x = 0; x < p; ++x) {
      std::uint64_t acc = 0;
      for (auto it = a.rbegin(); it != a.rend(); ++it) acc = (acc * x + *it) % p;
      if (acc == 0) roots.push_back(x);
    }
    return roots;
  }
  // gcd with x^p - x isolates the distinct linear factors
  ModPoly xp = poly_powmod({0, 1}, p, a, p);
  ModPoly g = poly_gcd(a, poly_sub(xp, {0, 1}, p), p);
  if (g.size() >= 2 && g[0] == 0) {
    roots.push_back(0);
    // divide out x
    g.erase(g.begin());
  }
  split_roots(g, p, roots);
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace

std::vector<EigenEntry> eigen_data(const Matrix& m) {
  if (!m.square()) throw std::invalid_argument("eigen_data of non-square matrix");
  const FieldSpec& f = m.field();
  if (f.kind == FieldKind::rational_functions) throw unsupported_field("eigen_data is not available over Q(t)");
  int n = m.rows();
  UniPoly cp = char_poly(m);
  std::vector<Scalar> roots;
  if (f.is_finite()) {
    for (std::uint64_t r : gf_roots(cp)) roots.push_back(Scalar::from_int(f, static_cast<long>(r)));
  } else {
    std::vector<mpq_class> c;
    for (const auto& s : cp.coeffs) c.push_back(s.rational());
    for (const auto& r : rational_roots(c)) roots.push_back(Scalar::from_rational(f, r));
  }
  std::sort(roots.begin(), roots.end());
  std::vector<EigenEntry> out;
  for (const Scalar& lam : roots) {
    Matrix shifted = m - Matrix::identity(f, n) * lam;
    int geo = n - rank(shifted);
    // algebraic multiplicity: repeated synthetic division by (x - lam)
    int alg = 0;
    std::vector<Scalar> c = cp.coeffs;
    while (c.size() > 1) {
      std::vector<Scalar> q(c.size() - 1, Scalar::zero(f));
      Scalar carry = Scalar::zero(f);
      for (int k = static_cast<int>(c.size()) - 1; k >= 1; --k) {
        carry = c[k] + carry * lam;
        q[k - 1] = carry;
      }
      Scalar rem = c[0] + carry * lam;
      if (!rem.is_zero()) break;
      ++alg;
      c = std::move(q);
    }
    out.push_back({lam, geo, alg});
  }
  return out;
}

Matrix transform(const Matrix& g, const Matrix& m, TransformKind kind) {
  if (!g.square() || g.rows() != m.rows() || !m.square()) throw std::invalid_argument("transform: shape mismatch");
  if (kind == TransformKind::similarity) return g * m * inverse(g);
  return g * m * g.transpose();
}

pole_error::pole_error(int r, int c)
    : std::domain_error("pole at t = 0 in entry (" + std::to_string(r + 1) + "," + std::to_string(c + 1) + ")"), row(r), col(c) {}

Matrix limit_at_zero(const Matrix& m) {
  if (m.field().kind != FieldKind::rational_functions) throw unsupported_field("limit_at_zero needs a Q(t) matrix");
  Matrix out(FieldSpec::qq(), m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      const RatFunc& r = m(i, j).ratfunc();
      mpq_class d = r.den().eval(0);
      if (d == 0) throw pole_error(i, j);
      out(i, j) = Scalar::from_rational(FieldSpec::qq(), r.num().eval(0) / d);
    }
  return out;
}

int pole_order(const Matrix& m) {
  int worst = 0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) worst = std::max(worst, -m(i, j).ratfunc().valuation());
  return worst;
}

Matrix substitute_power(const Matrix& m, unsigned n) {
  return m.map_entries([n](const Scalar& s) { return Scalar::from_ratfunc(s.ratfunc().substitute_power(n)); });
}

Matrix random_invertible(const FieldSpec& f, int n, Rng& rng) {
  for (;;) {
    Matrix g = Matrix::random(f, n, n, rng);
    if (is_invertible(g)) return g;
  }
}

std::uint64_t gl_order(std::uint32_t q, int n) {
  long double total = 1;
  std::uint64_t exact = 1;
  long double qn = 1;
  for (int i = 0; i < n; ++i) qn *= q;
  long double qi = 1;
  for (int i = 0; i < n; ++i) {
    total *= (qn - qi);
    qi *= q;
  }
  if (total > 1.8e19L) return ~std::uint64_t(0);
  qi = 1;
  std::uint64_t qn_int = static_cast<std::uint64_t>(qn), qi_int = 1;
  for (int i = 0; i < n; ++i) {
    exact *= (qn_int - qi_int);
    qi_int *= q;
  }
  return exact;
}

void for_each_gl(const FieldSpec& f, int n, std::uint64_t budget, const std::function<bool(const Matrix&)>& visit) {
  if (!f.is_finite()) throw unsupported_field("GL enumeration needs a finite field");
  std::uint64_t order = gl_order(f.p, n);
  if (order > budget) throw std::length_error("GL_" + std::to_string(n) + " over " + f.to_string() + " has " + std::to_string(order) + " elements, over budget");
  // rows are chosen one at a time outside the span of the previous rows
  std::uint64_t q = f.p, vectors = 1;
  for (int i = 0; i < n; ++i) vectors *= q;
  std::vector<Matrix> candidates;
  candidates.reserve(vectors);
  for (std::uint64_t code = 0; code < vectors; ++code) {
    Matrix row(f, 1, n);
    std::uint64_t c = code;
    for (int j = n - 1; j >= 0; --j) {
      row(0, j) = Scalar::from_int(f, static_cast<long>(c % q));
      c /= q;
    }
    candidates.push_back(row);
  }
  Matrix g(f, n, n);
  bool stop = false;
  std::function<void(int)> rec = [&](int i) {
    if (stop) return;
    if (i == n) {
      if (!visit(g)) stop = true;
      return;
    }
    for (const Matrix& row : candidates) {
      g.set_block(i, 0, row);
      if (rank(g.block(0, 0, i + 1, n)) == i + 1) rec(i + 1);
      if (stop) return;
    }
  };
  if (n == 0) {
    visit(g);
    return;
  }
  rec(0);
}

Matrix to_field(const Matrix& m, const FieldSpec& f) {
  if (m.field() == f) return m;
  if (m.field().kind != FieldKind::rationals) throw field_mismatch("can only reduce rational matrices");
  Matrix out(f, m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = Scalar::from_rational(f, m(i, j).rational());
  return out;
}

}  // namespace locdiag
