#include "locdiag/orbits.hpp"

#include <algorithm>

namespace locdiag {

namespace {

bool in_span(const Matrix& s, const Matrix& v) {
  if (s.cols() == 0) return v.is_zero();
  return rank(hstack({s, v})) == rank(s);
}

Matrix cols_or_empty(const FieldSpec& f, int n, const std::vector<Matrix>& cols) {
  return cols.empty() ? Matrix(f, n, 0) : hstack(cols);
}

// a standard vector, or a sum of two, outside both subspaces (a union of two proper subspaces never covers)
Matrix outside(const Matrix& s1, const Matrix& s2, int n, const FieldSpec& f) {
  std::optional<Matrix> a, b;
  for (int i = 0; i < n; ++i) {
    Matrix e = Matrix::elementary(f, n, 1, i, 0);
    bool o1 = !in_span(s1, e), o2 = !in_span(s2, e);
    if (o1 && o2) return e;
    if (o1 && !a) a = e;
    if (o2 && !b) b = e;
  }
  if (!a || !b) throw std::logic_error("outside: subspace is not proper");
  return *a + *b;
}

// d vectors X with X + ker P = V and X meeting im P trivially; needs rk(P) <= d and d + rk(P) <= n
Matrix adapted_columns(const Matrix& p, int d) {
  const FieldSpec& f = p.field();
  int n = p.rows(), r = rank(p);
  if (d < r || d + r > n) throw std::invalid_argument("adapted_columns: dimension out of range");
  Matrix ker = kernel(p), im = independent_columns(p);
  std::vector<Matrix> xs;
  for (int j = 0; j < d; ++j) {
    Matrix x = cols_or_empty(f, n, xs);
    Matrix with_im = hstack({x, im});
    Matrix v = j < r ? outside(hstack({x, ker}), with_im, n, f) : outside(with_im, with_im, n, f);
    xs.push_back(v);
  }
  return cols_or_empty(f, n, xs);
}

Matrix drop_leading(const Matrix& m, int c) { return m.block(0, c, m.rows(), m.cols() - c); }

// basis [W | U] with B^{-1} P B = [[*, 0], [R, 0]], W of size m, rk(R) = rk(P)
Matrix form_a_basis(const Matrix& p, int m) {
  Matrix w = adapted_columns(p, m);
  Matrix all = independent_columns(hstack({w, kernel(p)}));
  if (all.cols() != p.rows()) throw std::logic_error("form_a_basis: W + ker P is not everything");
  return all;
}

// basis [W | U] with B^{-1} P B = [[*, R], [0, 0]], W of size m, rk(R) = rk(P)
Matrix form_b_basis(const Matrix& p, int m) {
  int n = p.rows();
  Matrix u = adapted_columns(p, n - m);
  Matrix cols = independent_columns(hstack({u, independent_columns(p), Matrix::identity(p.field(), n)}));
  return hstack({drop_leading(cols, n - m), u});
}

Matrix conj(const Matrix& g, const Matrix& p) { return g * p * inverse(g); }

std::pair<Matrix, Matrix> claim_sum(const Matrix& a, const Matrix& b) {
  int m = std::max(rank(a), rank(b));
  return {inverse(form_a_basis(a, m)), inverse(form_b_basis(b, m))};
}

std::pair<Matrix, Matrix> claim_max(const Matrix& a, const Matrix& b) {
  int m = std::max(rank(a), rank(b));
  return {inverse(form_a_basis(a, m)), inverse(form_a_basis(b, m))};
}

// the basis v first, with v moved to the last position
Matrix basis_ending_with(const Matrix& v, int n) {
  Matrix b = extend_to_basis(v, n);
  return hstack({drop_leading(b, 1), b.column(0)});
}

void require_skew(const Matrix& m, const char* name) {
  if (!m.square() || m.transpose() != -m) throw std::invalid_argument(std::string(name) + " must be skew-symmetric");
  for (int i = 0; i < m.rows(); ++i)
    if (!m(i, i).is_zero()) throw std::invalid_argument(std::string(name) + " must have zero diagonal");
}

Matrix lift_t(const Matrix& m) { return to_field(m, FieldSpec::qq_t()); }

Matrix diag_t(int n, const std::vector<std::pair<int, Scalar>>& entries) {
  Matrix d = Matrix::identity(FieldSpec::qq_t(), n);
  for (const auto& [i, v] : entries) d(i, i) = v;
  return d;
}

// g(t) with lim (g R g^T, g W) = (Diag(J,..,J,0) with s blocks, [0; I_k])
Matrix reach_canonical(const Matrix& r, const Matrix& w, int s) {
  const FieldSpec& f = r.field();
  const Scalar t = Scalar::t();
  int n = r.rows(), k = w.cols();
  if (k == 0) {
    Matrix hinv = lift_t(inverse(skew_normal_form(r)));
    std::vector<std::pair<int, Scalar>> d;
    for (int i = 2 * s; i < n; ++i) d.push_back({i, t});
    return diag_t(n, d) * hinv;
  }
  // last column of W becomes e_n
  Matrix h0 = inverse(basis_ending_with(w.column(k - 1), n));
  Matrix r1 = h0 * r * h0.transpose(), w1 = h0 * w;
  // a row operation pushing the last column of R outside im W
  Matrix l = Matrix::identity(f, n);
  for (int i = -1; i < n - 1; ++i) {
    Matrix a = Matrix::elementary(f, n, 1, n - 1, 0);
    if (i >= 0) a(i, 0) = Scalar::one(f);
    if (!in_span(w1, r1 * a)) {
      for (int j = 0; j < n - 1; ++j) l(n - 1, j) = a(j, 0);
      break;
    }
    if (i == n - 2) throw std::logic_error("degeneration: rank(R) <= k");
  }
  Matrix r2 = l * r1 * l.transpose(), w2 = l * w1;
  Matrix c = r2.block(0, n - 1, n - 1, 1);
  Matrix g = Matrix::diag({inverse(basis_ending_with(c, n - 1)), Matrix::identity(f, 1)});
  Matrix r3 = g * r2 * g.transpose(), w3 = g * w2;
  if (!(r3(n - 2, n - 1) == Scalar::one(f))) throw std::logic_error("degeneration: normalization failed");
  Matrix constant = g * l * h0;

  Matrix rp = r3.block(0, 0, n - 2, n - 2), wp = w3.block(0, 0, n - 2, k - 1);
  Matrix u = w3.block(n - 1, 0, 1, k - 1);
  Matrix sub = reach_canonical(rp, wp, s);

  // move the emptied row n-1 in front of the identity block, then clear u
  Matrix perm(f, n, n);
  for (int i = 0; i < n; ++i) {
    int to = i;
    if (i >= n - k - 1 && i <= n - 3) to = i + 1;
    if (i == n - 2) to = n - k - 1;
    perm(to, i) = Scalar::one(f);
  }
  Matrix clear = Matrix::identity(f, n);
  for (int j = 0; j < k - 1; ++j) clear(n - 1, n - k + j) = -u(0, j);
  Matrix outer = lift_t(clear * perm) * Matrix::diag({sub, Matrix::identity(FieldSpec::qq_t(), 2)});
  auto exponent = static_cast<unsigned>(2 * pole_order(outer) + 1);
  Matrix squeeze = diag_t(n, {{n - 2, t}}) * lift_t(constant);
  return outer * substitute_power(squeeze, exponent);
}

}  // namespace

Matrix topleft_realization(const Matrix& p, const Matrix& q) {
  if (!p.square() || !q.square() || p.rows() != 2 * q.rows()) throw std::invalid_argument("topleft: need P in gl_2n and Q in gl_n");
  if (!(p.field() == q.field())) throw field_mismatch("topleft: field mismatch");
  const FieldSpec& f = p.field();
  int n = q.rows(), k = rank(p);
  if (k >= n) throw std::invalid_argument("topleft: need rk(P) < n");
  if (rank(q) > k) throw std::invalid_argument("topleft: need rk(Q) <= rk(P)");
  Matrix binv = inverse(form_a_basis(p, n));
  Matrix m1 = conj(binv, p);
  Matrix rr = m1.block(n, 0, n, n);
  // h ker R inside ker Q
  Matrix kr = kernel(rr), kq = kernel(q);
  Matrix h = Matrix::identity(f, n);
  if (kr.cols() > 0) {
    Matrix target = kq.block(0, 0, n, kr.cols());
    h = extend_to_basis(target, n) * inverse(extend_to_basis(kr, n));
  }
  Matrix dh = Matrix::diag({h, Matrix::identity(f, n)});
  Matrix m2 = conj(dh, m1);
  Matrix r2 = m2.block(n, 0, n, n), tl = m2.block(0, 0, n, n);
  auto tt = solve(r2.transpose(), tl.transpose());
  auto st = solve(r2.transpose(), q.transpose());
  if (!tt || !st) throw std::logic_error("topleft: row spaces do not line up");
  Matrix uni = Matrix::identity(f, 2 * n);
  uni.set_block(0, n, st->transpose() - tt->transpose());
  Matrix g = uni * dh * binv;
  if (conj(g, p).block(0, 0, n, n) != q) throw std::logic_error("topleft: verification failed");
  return g;
}

std::vector<Matrix> raise_sum_rank(const std::vector<Matrix>& ps) {
  if (ps.size() < 2) throw std::invalid_argument("raise_sum_rank: need at least two matrices");
  const FieldSpec& f = ps[0].field();
  int n = ps[0].rows(), k = rank(ps[0]);
  for (const auto& p : ps) {
    if (!p.square() || p.rows() != n || !(p.field() == f)) throw std::invalid_argument("raise_sum_rank: shapes differ");
    if (rank(p) != k) throw std::invalid_argument("raise_sum_rank: ranks differ");
  }
  if (k < 1) throw std::invalid_argument("raise_sum_rank: need rank k >= 1");
  if (n < 6 * k) throw std::invalid_argument("raise_sum_rank: need n >= 6k");

  auto [g1, g2] = claim_sum(ps[0], ps[1]);
  std::vector<Matrix> gs = {g1, g2};
  Matrix sum = conj(g1, ps[0]) + conj(g2, ps[1]);
  for (std::size_t i = 2; i < ps.size(); ++i) {
    auto [ga, gb] = rank(sum) <= 2 * k ? claim_sum(sum, ps[i]) : claim_max(sum, ps[i]);
    for (auto& g : gs) g = ga * g;
    gs.push_back(gb);
    sum = conj(ga, sum) + conj(gb, ps[i]);
  }
  int s = rank(sum);
  if (s <= k || s > 3 * k || tuple_rank_identity(sum) != s) throw std::logic_error("raise_sum_rank: verification failed");
  return gs;
}

bool minor_vanishing_test(const Matrix& p, int k, SearchMode mode, int trials, Rng* rng, std::uint64_t budget) {
  if (!p.square()) throw std::invalid_argument("minor test needs a square matrix");
  int n = p.rows();
  if (k < 1 || k > n) throw std::invalid_argument("minor test needs 1 <= k <= n");
  auto vanishes = [&](const Matrix& g, const Matrix& ginv) {
    return determinant((g * p * ginv).block(0, 0, k, k)).is_zero();
  };
  if (mode == SearchMode::exhaustive) {
    if (!p.field().is_finite()) throw unsupported_field("exhaustive mode needs a finite field");
    if (gl_order(p.field().p, n) > budget) throw std::length_error("minor test: GL_n exceeds the budget");
    bool all = true;
    for_each_gl(p.field(), n, budget, [&](const Matrix& g) {
      all = vanishes(g, inverse(g));
      return all;
    });
    if (all != (rank(p) < k)) throw std::logic_error("minor test disagrees with the rank");
    return all;
  }
  if (!rng) throw std::invalid_argument("sampled mode needs an rng");
  if (trials < 0 || static_cast<std::uint64_t>(trials) > budget) throw std::length_error("minor test: trials exceed the budget");
  if (!vanishes(Matrix::identity(p.field(), n), Matrix::identity(p.field(), n))) return false;
  for (int i = 0; i < trials; ++i) {
    Matrix g = random_invertible(p.field(), n, *rng);
    if (!vanishes(g, inverse(g))) return false;
  }
  return true;
}

OrbitClosure classify_orbit_closure(const Matrix& p) {
  if (!p.square()) throw std::invalid_argument("classify needs a square matrix");
  OrbitClosure o;
  o.level = o.regime = p.rows();
  ShiftRank sr = shift_rank(p);
  if (sr.lambda && 2 * sr.rank < p.rows()) {
    o.dense = false;
    o.lambda = sr.lambda;
    o.rank = sr.rank;
  }
  return o;
}

json to_json(const OrbitClosure& o) {
  json j;
  j["kind"] = o.dense ? "dense" : "stratum";
  if (!o.dense) {
    j["lambda"] = o.lambda->to_string();
    j["rank"] = o.rank;
  }
  j["level"] = o.level;
  j["regime"] = "rank < " + std::to_string(o.regime) + "/2";
  return j;
}

int ClosedSetDescriptor::bound(const Scalar& lambda) const {
  auto it = exceptional.find(lambda);
  return it == exceptional.end() ? k : std::max(k, it->second);
}

namespace {

void check_descriptor(const ClosedSetDescriptor& a) {
  if (a.k < -1) throw std::invalid_argument("descriptor k must be at least -1");
  for (const auto& [l, b] : a.exceptional)
    if (!(l.field() == a.field)) throw field_mismatch("descriptor scalar over the wrong field");
}

void check_pair(const ClosedSetDescriptor& a, const ClosedSetDescriptor& b) {
  check_descriptor(a);
  check_descriptor(b);
  if (!(a.field == b.field)) throw field_mismatch("descriptors over different fields");
}

}  // namespace

ClosedSetDescriptor descriptor_canonicalize(const ClosedSetDescriptor& a) {
  check_descriptor(a);
  ClosedSetDescriptor out{a.field, a.k, {}};
  for (const auto& [l, b] : a.exceptional)
    if (b > a.k) out.exceptional.emplace(l, b);
  return out;
}

ClosedSetDescriptor descriptor_union(const ClosedSetDescriptor& a, const ClosedSetDescriptor& b) {
  check_pair(a, b);
  ClosedSetDescriptor out{a.field, std::max(a.k, b.k), a.exceptional};
  for (const auto& [l, v] : b.exceptional) {
    auto [it, fresh] = out.exceptional.emplace(l, v);
    if (!fresh) it->second = std::max(it->second, v);
  }
  return descriptor_canonicalize(out);
}

ClosedSetDescriptor descriptor_intersect(const ClosedSetDescriptor& a, const ClosedSetDescriptor& b) {
  check_pair(a, b);
  ClosedSetDescriptor out{a.field, std::min(a.k, b.k), {}};
  for (const auto* d : {&a, &b})
    for (const auto& [l, v] : d->exceptional) out.exceptional[l] = std::min(a.bound(l), b.bound(l));
  return descriptor_canonicalize(out);
}

bool descriptor_contains(const ClosedSetDescriptor& a, const ClosedSetDescriptor& b) {
  check_pair(a, b);
  if (b.k > a.k) return false;
  for (const auto& [l, v] : b.exceptional)
    if (v > a.bound(l)) return false;
  return true;
}

json to_json(const ClosedSetDescriptor& d) {
  json ex = json::array();
  for (const auto& [l, b] : d.exceptional) ex.push_back({{"lambda", l.to_string()}, {"bound", b}});
  return {{"k", d.k}, {"exceptional", ex}};
}

ClosedSetDescriptor descriptor_from_json(const json& j, const FieldSpec& f) {
  if (!j.is_object() || !j.contains("k")) throw std::invalid_argument("descriptor JSON needs a \"k\" field");
  ClosedSetDescriptor d{f, j.at("k").get<int>(), {}};
  if (j.contains("exceptional"))
    for (const auto& e : j.at("exceptional")) {
      Scalar l = Scalar::parse(f, e.at("lambda").is_string() ? e.at("lambda").get<std::string>() : e.at("lambda").dump());
      if (!d.exceptional.emplace(l, e.at("bound").get<int>()).second)
        throw std::invalid_argument("descriptor lists lambda " + l.to_string() + " twice");
    }
  check_descriptor(d);
  return d;
}

std::size_t chain_stabilization(const std::vector<ClosedSetDescriptor>& chain) {
  std::vector<ClosedSetDescriptor> c;
  for (const auto& d : chain) c.push_back(descriptor_canonicalize(d));
  std::size_t last = 0;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    if (!descriptor_contains(c[i], c[i + 1])) throw std::invalid_argument("chain is not descending at index " + std::to_string(i + 1));
    if (c[i] != c[i + 1]) last = i + 1;
  }
  return last;
}

TupleRankLift tuple_rank_lift(const ChainSpec& c, int level, const Matrix& p, Rng& rng, int attempts) {
  c.validate();
  if (c.type != 'A') throw std::invalid_argument("tuple_rank_lift: type A chains only");
  if (level < 1) throw std::out_of_range("levels start at 1");
  Signature s = c.signature(level);
  if (s.l + s.r < 2) throw std::invalid_argument("tuple_rank_lift: need l + r >= 2");
  int ni = c.n(level), big = c.n(level + 1);
  if (!p.square() || p.rows() != big) throw std::invalid_argument("tuple_rank_lift: P must live at level i+1");
  const FieldSpec& f = p.field();
  ShiftRank sr = shift_rank(p);
  int k = tuple_rank_identity(p);
  if (k < 1) throw std::invalid_argument("tuple_rank_lift: P is scalar, its class mod I is zero");
  if (6 * k > ni) throw std::invalid_argument("tuple_rank_lift: need n_i >= 6k");
  Matrix p0 = p - Matrix::identity(f, big) * *sr.lambda;

  Embedding e = chain_embedding(c, level);
  auto blocks_of = [&](const Matrix& m) {
    std::vector<Matrix> out;
    for (const auto& cp : e.copies) {
      Matrix b = m.select(cp.pos, cp.pos);
      out.push_back(cp.dual ? -b.transpose() : b);
    }
    return out;
  };
  for (int a = 0; a < attempts; ++a) {
    Matrix g0 = a == 0 ? Matrix::identity(f, big) : random_invertible(f, big, rng);
    auto blocks = blocks_of(conj(g0, p0));
    if (!std::all_of(blocks.begin(), blocks.end(), [&](const Matrix& b) { return rank(b) == k; })) continue;
    auto gs = raise_sum_rank(blocks);
    Matrix g = Matrix::identity(f, big);
    for (std::size_t j = 0; j < e.copies.size(); ++j) {
      const auto& cp = e.copies[j];
      Matrix h = cp.dual ? inverse(gs[j]).transpose() : gs[j];
      for (int x = 0; x < ni; ++x)
        for (int y = 0; y < ni; ++y) g(cp.pos[x], cp.pos[y]) = h(x, y);
    }
    g = g * g0;
    TupleRankLift out{g, project_dual(e, conj(g, p)), k, 0};
    out.lifted = tuple_rank_identity(out.projected);
    if (out.lifted <= k) throw std::logic_error("tuple_rank_lift: verification failed");
    return out;
  }
  throw std::runtime_error("tuple_rank_lift: no conjugate with all diagonal blocks of rank " + std::to_string(k) +
                           " after " + std::to_string(attempts) + " attempts");
}

Matrix skew_normal_form(const Matrix& q) {
  require_skew(q, "Q");
  const FieldSpec& f = q.field();
  int n = q.rows();
  auto form = [&](const Matrix& x, const Matrix& y) { return (x.transpose() * q * y)(0, 0); };
  std::vector<Matrix> rest, basis;
  for (int i = 0; i < n; ++i) rest.push_back(Matrix::elementary(f, n, 1, i, 0));
  for (;;) {
    std::optional<std::pair<std::size_t, std::size_t>> hit;
    for (std::size_t i = 0; i < rest.size() && !hit; ++i)
      for (std::size_t j = i + 1; j < rest.size() && !hit; ++j)
        if (!form(rest[i], rest[j]).is_zero()) hit = {i, j};
    if (!hit) break;
    Matrix x = rest[hit->first];
    Matrix y = rest[hit->second] * form(x, rest[hit->second]).inverse();
    std::vector<Matrix> next;
    for (std::size_t i = 0; i < rest.size(); ++i) {
      if (i == hit->first || i == hit->second) continue;
      const Matrix& z = rest[i];
      next.push_back(z - x * form(z, y) + y * form(z, x));
    }
    basis.push_back(x);
    basis.push_back(y);
    rest = next;
  }
  for (auto& z : rest) basis.push_back(z);
  if (basis.empty()) return Matrix(f, 0, 0);
  Matrix pm = hstack(basis);
  return inverse(pm).transpose();
}

Matrix degeneration_witness(const Matrix& r, const Matrix& w, const Matrix& q, const Matrix& v) {
  if (r.field().kind != FieldKind::rationals) throw unsupported_field("degeneration_witness works over Q");
  for (const Matrix* m : {&w, &q, &v})
    if (!(m->field() == r.field())) throw field_mismatch("degeneration_witness: field mismatch");
  require_skew(r, "R");
  require_skew(q, "Q");
  int n = r.rows(), k = w.cols();
  if (w.rows() != n || q.rows() != n || v.rows() != n || v.cols() != k) throw std::invalid_argument("degeneration_witness: shape mismatch");
  if (rank(w) != k) throw std::invalid_argument("degeneration_witness: W must have rank k");
  int rq = rank(q);
  if (rq > rank(r) - 2 * k) throw std::invalid_argument("degeneration_witness: need rk(Q) <= rk(R) - 2k");

  Matrix canon = reach_canonical(r, w, rq / 2);
  // (Diag(J..,0), [0; I_k]) -> (Q, V)
  Matrix h = skew_normal_form(q);
  Matrix vp = inverse(h) * v;
  Matrix spread = Matrix::identity(FieldSpec::qq_t(), n);
  for (int i = n - k; i < n; ++i) spread(i, i) = Scalar::t();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) spread(i, n - k + j) += Scalar::from_rational(FieldSpec::qq_t(), vp(i, j).rational());
  Matrix outer = lift_t(h) * spread;
  Matrix g = outer * substitute_power(canon, static_cast<unsigned>(2 * pole_order(outer) + 1));

  Matrix lr = limit_at_zero(g * lift_t(r) * g.transpose()), lw = limit_at_zero(g * lift_t(w));
  if (lr != q || lw != v) throw std::logic_error("degeneration_witness: limit mismatch");
  if (!is_invertible(g)) throw std::logic_error("degeneration_witness: curve is not invertible");
  return g;
}

}  // namespace locdiag
