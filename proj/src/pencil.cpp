#include "locdiag/pencil.hpp"

#include <numeric>

namespace locdiag {

ShiftRank shift_rank(const Matrix& p) {
  if (!p.square()) throw std::invalid_argument("shift_rank needs a square matrix");
  int n = p.rows();
  auto eig = eigen_data(p);
  if (eig.empty()) return {std::nullopt, std::min(n, rank(p))};
  const EigenEntry* best = nullptr;
  for (const auto& e : eig) {
    if (!best || e.geometric_multiplicity > best->geometric_multiplicity) {
      best = &e;
      continue;
    }
    if (e.geometric_multiplicity == best->geometric_multiplicity && e.lambda.is_zero() && !best->lambda.is_zero()) best = &e;
  }
  return {best->lambda, n - best->geometric_multiplicity};
}

int tuple_rank_identity(const Matrix& p) { return std::min(p.rows(), shift_rank(p).rank); }

void for_each_projective_point(const FieldSpec& f, int k, const std::function<bool(const std::vector<Scalar>&)>& visit) {
  if (!f.is_finite()) throw unsupported_field("projective enumeration needs a finite field");
  std::vector<Scalar> pt(k, Scalar::zero(f));
  for (int lead = 0; lead < k; ++lead) {
    std::fill(pt.begin(), pt.end(), Scalar::zero(f));
    pt[lead] = Scalar::one(f);
    std::vector<std::uint32_t> digits(k - lead - 1, 0);
    for (;;) {
      for (std::size_t d = 0; d < digits.size(); ++d) pt[lead + 1 + d] = Scalar::from_int(f, digits[d]);
      if (!visit(pt)) return;
      int pos = static_cast<int>(digits.size()) - 1;
      while (pos >= 0 && digits[pos] == f.p - 1) digits[pos--] = 0;
      if (pos < 0) break;
      ++digits[pos];
    }
  }
}

PencilRank pencil_rank_enumerate(const std::vector<Matrix>& tuple, std::uint64_t budget) {
  if (tuple.empty()) throw std::invalid_argument("empty tuple");
  const FieldSpec& f = tuple[0].field();
  for (const auto& m : tuple)
    if (m.rows() != tuple[0].rows() || m.cols() != tuple[0].cols() || !(m.field() == f))
      throw std::invalid_argument("tuple entries must share shape and field");
  if (!f.is_finite()) throw unsupported_field("pencil enumeration needs a finite field");
  int k = static_cast<int>(tuple.size());
  long double count = 1;
  for (int i = 0; i < k; ++i) count *= f.p;
  count = (count - 1) / (f.p - 1);
  if (count > static_cast<long double>(budget)) throw std::length_error("projective space too large to enumerate");
  PencilRank best{std::numeric_limits<int>::max(), {}};
  for_each_projective_point(f, k, [&](const std::vector<Scalar>& pt) {
    Matrix sum(f, tuple[0].rows(), tuple[0].cols());
    for (int i = 0; i < k; ++i)
      if (!pt[i].is_zero()) sum = sum + tuple[i] * pt[i];
    int r = rank(sum);
    if (r < best.rank) best = {r, pt};
    return best.rank > 0;
  });
  return best;
}

GLTable GLTable::build(const FieldSpec& f, int n, std::uint64_t budget) {
  GLTable t{f, n, {}, {}};
  for_each_gl(f, n, budget, [&](const Matrix& g) {
    t.elements.push_back(g);
    t.inverses.push_back(inverse(g));
    return true;
  });
  return t;
}

namespace {

void check_offdiag_pre(const Matrix& p, int k, int m) {
  if (!p.square()) throw std::invalid_argument("offdiag check needs a square matrix");
  if (k < 0 || m < k + 1 || 2 * m > p.rows())
    throw std::invalid_argument("offdiag check needs n >= 2m >= 2(k+1)");
}

// rows K and columns L of g P g^{-1}
Matrix conjugate_block(const Matrix& g, const Matrix& ginv, const Matrix& p, const std::vector<int>& rows, const std::vector<int>& cols) {
  std::vector<int> all(p.rows());
  std::iota(all.begin(), all.end(), 0);
  return g.select(rows, all) * p * ginv.select(all, cols);
}

}  // namespace

OffdiagResult offdiag_exhaustive(const Matrix& p, int k, int m, const GLTable* table) {
  check_offdiag_pre(p, k, m);
  if (!p.field().is_finite()) throw unsupported_field("exhaustive mode needs a finite field");
  GLTable local;
  if (!table || table->n != p.rows() || !(table->field == p.field())) {
    local = GLTable::build(p.field(), p.rows());
    table = &local;
  }
  std::vector<int> rows(m), cols(m);
  std::iota(rows.begin(), rows.end(), 0);
  std::iota(cols.begin(), cols.end(), m);
  OffdiagResult res;
  for (std::size_t i = 0; i < table->elements.size(); ++i) {
    ++res.checked;
    int r = rank(conjugate_block(table->elements[i], table->inverses[i], p, rows, cols));
    if (r > k) {
      res.holds = false;
      res.witness = OffdiagWitness{table->elements[i], rows, cols, r};
      return res;
    }
  }
  return res;
}

OffdiagResult offdiag_sampled(const Matrix& p, int k, int m, int trials, Rng& rng) {
  check_offdiag_pre(p, k, m);
  int n = p.rows();
  OffdiagResult res;
  for (int t = 0; t < trials; ++t) {
    Matrix g = random_invertible(p.field(), n, rng);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
    std::vector<int> rows(perm.begin(), perm.begin() + m), cols(perm.begin() + m, perm.begin() + 2 * m);
    std::sort(rows.begin(), rows.end());
    std::sort(cols.begin(), cols.end());
    ++res.checked;
    int r = rank(conjugate_block(g, inverse(g), p, rows, cols));
    if (r > k) {
      res.holds = false;
      res.witness = OffdiagWitness{g, rows, cols, r};
      return res;
    }
  }
  return res;
}

std::vector<int> projection_stabilization(const std::vector<Matrix>& tuple, int n_max) {
  if (tuple.empty()) throw std::invalid_argument("empty tuple");
  for (const auto& m : tuple)
    if (m.rows() < n_max || m.cols() < n_max) throw std::invalid_argument("matrices smaller than n_max");
  std::vector<int> out;
  for (int j = 1; j <= n_max; ++j) {
    std::vector<Matrix> trunc;
    for (const auto& m : tuple) trunc.push_back(m.block(0, 0, j, j));
    int r = pencil_rank_enumerate(trunc).rank;
    if (!out.empty() && r < out.back()) throw std::logic_error("pencil rank decreased under truncation");
    out.push_back(r);
  }
  return out;
}

json to_json(const ShiftRank& r) {
  json j = {{"rank", r.rank}};
  if (r.lambda) j["lambda"] = r.lambda->to_string();
  return j;
}

json to_json(const PencilRank& r) { return {{"rank", r.rank}, {"witness", scalars_to_json(r.witness)}}; }

json to_json(const OffdiagResult& r) {
  json j = {{"holds", r.holds}, {"checked", r.checked}};
  if (r.witness) {
    json rows = json::array(), cols = json::array();
    for (int i : r.witness->rows) rows.push_back(i + 1);
    for (int i : r.witness->cols) cols.push_back(i + 1);
    j["witness"] = {{"g", matrix_to_json(r.witness->g)}, {"rows", rows}, {"cols", cols}, {"block_rank", r.witness->block_rank}};
  }
  return j;
}

}  // namespace locdiag
