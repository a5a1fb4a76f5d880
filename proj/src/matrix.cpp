#include "locdiag/matrix.hpp"

#include <sstream>

namespace locdiag {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

Rng Rng::derive(std::uint64_t seed, const std::string& tag) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : tag) h = (h ^ c) * 0x100000001b3ull;
  return Rng(splitmix(seed ^ splitmix(h)));
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::below(0)");
  std::uint64_t limit = ~std::uint64_t(0) - (~std::uint64_t(0) % n);
  std::uint64_t x;
  do x = eng_();
  while (x >= limit);
  return x % n;
}

long Rng::range(long lo, long hi) { return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1))); }

Scalar Rng::scalar(const FieldSpec& f) {
  switch (f.kind) {
    case FieldKind::finite: return Scalar::from_int(f, static_cast<long>(below(f.p)));
    case FieldKind::rationals: {
      long num = range(-9, 9), den = 0;
      while (den == 0) den = range(-9, 9);
      mpq_class q(num, den);
      q.canonicalize();
      return Scalar::from_rational(f, q);
    }
    default: {
      Scalar c = scalar(FieldSpec::qq()), d = scalar(FieldSpec::qq());
      return Scalar::from_ratfunc(RatFunc::constant(c.rational()) + RatFunc::constant(d.rational()) * RatFunc::t());
    }
  }
}

Scalar Rng::nonzero_scalar(const FieldSpec& f) {
  for (;;) {
    Scalar s = scalar(f);
    if (!s.is_zero()) return s;
  }
}

Matrix::Matrix(FieldSpec f, int rows, int cols) : f_(f), r_(rows), c_(cols) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix dimension");
  a_.assign(static_cast<std::size_t>(rows) * cols, Scalar::zero(f));
}

Matrix Matrix::identity(FieldSpec f, int n) {
  Matrix m(f, n, n);
  for (int i = 0; i < n; ++i) m(i, i) = Scalar::one(f);
  return m;
}

Matrix Matrix::from_ints(FieldSpec f, const std::vector<std::vector<long>>& rows) {
  int r = static_cast<int>(rows.size()), c = r ? static_cast<int>(rows[0].size()) : 0;
  Matrix m(f, r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[i].size()) != c) throw std::invalid_argument("ragged matrix");
    for (int j = 0; j < c; ++j) m(i, j) = Scalar::from_int(f, rows[i][j]);
  }
  return m;
}

Matrix Matrix::from_strings(FieldSpec f, const std::vector<std::vector<std::string>>& rows) {
  int r = static_cast<int>(rows.size()), c = r ? static_cast<int>(rows[0].size()) : 0;
  Matrix m(f, r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[i].size()) != c) throw std::invalid_argument("ragged matrix");
    for (int j = 0; j < c; ++j) m(i, j) = Scalar::parse(f, rows[i][j]);
  }
  return m;
}

Matrix Matrix::elementary(FieldSpec f, int rows, int cols, int i, int j) {
  Matrix m(f, rows, cols);
  m(i, j) = Scalar::one(f);
  return m;
}

Matrix Matrix::diag(const std::vector<Matrix>& blocks) {
  if (blocks.empty()) throw std::invalid_argument("diag of nothing");
  int r = 0, c = 0;
  for (const auto& b : blocks) r += b.rows(), c += b.cols();
  Matrix m(blocks[0].field(), r, c);
  int i = 0, j = 0;
  for (const auto& b : blocks) {
    m.set_block(i, j, b);
    i += b.rows();
    j += b.cols();
  }
  return m;
}

Matrix Matrix::random(FieldSpec f, int rows, int cols, Rng& rng) {
  Matrix m(f, rows, cols);
  for (auto& x : m.a_) x = rng.scalar(f);
  return m;
}

Matrix Matrix::operator+(const Matrix& o) const {
  if (r_ != o.r_ || c_ != o.c_) throw std::invalid_argument("shape mismatch in +");
  Matrix m = *this;
  for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] += o.a_[k];
  return m;
}

Matrix Matrix::operator-(const Matrix& o) const {
  if (r_ != o.r_ || c_ != o.c_) throw std::invalid_argument("shape mismatch in -");
  Matrix m = *this;
  for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] -= o.a_[k];
  return m;
}

Matrix Matrix::operator-() const {
  Matrix m = *this;
  for (auto& x : m.a_) x = -x;
  return m;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (c_ != o.r_) throw std::invalid_argument("shape mismatch in *");
  if (!(f_ == o.f_)) throw field_mismatch("field mismatch in matrix product");
  Matrix m(f_, r_, o.c_);
  for (int i = 0; i < r_; ++i)
    for (int k = 0; k < c_; ++k) {
      const Scalar& a = (*this)(i, k);
      if (a.is_zero()) continue;
      for (int j = 0; j < o.c_; ++j)
        if (!o(k, j).is_zero()) m(i, j) += a * o(k, j);
    }
  return m;
}

Matrix Matrix::operator*(const Scalar& s) const {
  Matrix m = *this;
  for (auto& x : m.a_) x *= s;
  return m;
}

bool Matrix::operator==(const Matrix& o) const {
  return r_ == o.r_ && c_ == o.c_ && f_ == o.f_ && a_ == o.a_;
}

Matrix Matrix::transpose() const {
  Matrix m(f_, c_, r_);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < c_; ++j) m(j, i) = (*this)(i, j);
  return m;
}

Matrix Matrix::block(int r0, int c0, int h, int w) const {
  if (r0 < 0 || c0 < 0 || r0 + h > r_ || c0 + w > c_) throw std::out_of_range("block out of range");
  Matrix m(f_, h, w);
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j) m(i, j) = (*this)(r0 + i, c0 + j);
  return m;
}

Matrix Matrix::select(const std::vector<int>& rows, const std::vector<int>& cols) const {
  Matrix m(f_, static_cast<int>(rows.size()), static_cast<int>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) m(i, j) = (*this)(rows[i], cols[j]);
  return m;
}

void Matrix::set_block(int r0, int c0, const Matrix& b) {
  if (r0 < 0 || c0 < 0 || r0 + b.rows() > r_ || c0 + b.cols() > c_) throw std::out_of_range("set_block out of range");
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

Scalar Matrix::trace() const {
  if (!square()) throw std::invalid_argument("trace of non-square matrix");
  Scalar s = Scalar::zero(f_);
  for (int i = 0; i < r_; ++i) s += (*this)(i, i);
  return s;
}

bool Matrix::is_zero() const {
  for (const auto& x : a_)
    if (!x.is_zero()) return false;
  return true;
}

bool Matrix::is_scalar() const {
  if (!square()) return false;
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < c_; ++j) {
      if (i != j && !(*this)(i, j).is_zero()) return false;
      if (i == j && (*this)(i, i) != (*this)(0, 0)) return false;
    }
  return true;
}

Matrix Matrix::map_entries(const std::function<Scalar(const Scalar&)>& fn) const {
  if (a_.empty()) return *this;
  std::vector<Scalar> out;
  out.reserve(a_.size());
  for (const auto& x : a_) out.push_back(fn(x));
  Matrix m(out[0].field(), r_, c_);
  m.a_ = std::move(out);
  return m;
}

std::string Matrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < r_; ++i) {
    if (i) os << "; ";
    for (int j = 0; j < c_; ++j) os << (j ? ", " : "") << (*this)(i, j).to_string();
  }
  os << "]";
  return os.str();
}

Matrix hstack(const std::vector<Matrix>& ms) {
  if (ms.empty()) throw std::invalid_argument("hstack of nothing");
  int c = 0;
  for (const auto& m : ms) {
    if (m.rows() != ms[0].rows()) throw std::invalid_argument("hstack row mismatch");
    c += m.cols();
  }
  Matrix out(ms[0].field(), ms[0].rows(), c);
  int j = 0;
  for (const auto& m : ms) {
    out.set_block(0, j, m);
    j += m.cols();
  }
  return out;
}

Matrix vstack(const std::vector<Matrix>& ms) {
  if (ms.empty()) throw std::invalid_argument("vstack of nothing");
  int r = 0;
  for (const auto& m : ms) {
    if (m.cols() != ms[0].cols()) throw std::invalid_argument("vstack column mismatch");
    r += m.rows();
  }
  Matrix out(ms[0].field(), r, ms[0].cols());
  int i = 0;
  for (const auto& m : ms) {
    out.set_block(i, 0, m);
    i += m.rows();
  }
  return out;
}

int UniPoly::degree() const {
  for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i)
    if (!coeffs[i].is_zero()) return i;
  return -1;
}

Scalar UniPoly::eval(const Scalar& x) const {
  Scalar acc = Scalar::zero(field);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::string UniPoly::to_string() const {
  std::string out;
  for (int k = degree(); k >= 0; --k) {
    if (coeffs[k].is_zero()) continue;
    std::string c = coeffs[k].to_string();
    bool paren = field.kind == FieldKind::rational_functions && c.find('t') != std::string::npos;
    if (paren) c = "(" + c + ")";
    std::string term;
    std::string mono = k == 0 ? "" : (k == 1 ? "x" : "x^" + std::to_string(k));
    if (k == 0) term = c;
    else if (coeffs[k].is_one()) term = mono;
    else if ((-coeffs[k]).is_one()) term = "-" + mono;
    else term = c + "*" + mono;
    if (!out.empty() && term[0] != '-') out += "+";
    out += term;
  }
  return out.empty() ? "0" : out;
}

bool UniPoly::operator==(const UniPoly& o) const {
  int d = degree();
  if (d != o.degree()) return false;
  for (int i = 0; i <= d; ++i)
    if (coeffs[i] != o.coeffs[i]) return false;
  return true;
}

}  // namespace locdiag
