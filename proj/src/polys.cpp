#include "locdiag/polys.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace locdiag {

namespace {

const std::string kFamilies = "pqrsvwx";

int family_rank(char c) {
  auto k = kFamilies.find(c);
  if (k == std::string::npos) throw std::invalid_argument(std::string("unknown coordinate family ") + c);
  return static_cast<int>(k);
}

int total_degree(const Monomial& m) {
  int d = 0;
  for (const auto& [v, e] : m) d += e;
  return d;
}

Monomial multiply(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) out.push_back(a[i++]);
    else if (i == a.size() || b[j].first < a[i].first) out.push_back(b[j++]);
    else {
      out.push_back({a[i].first, a[i].second + b[j].second});
      ++i, ++j;
    }
  }
  return out;
}

struct Parser {
  const FieldSpec& f;
  const std::string& s;
  std::size_t k = 0;

  void ws() {
    while (k < s.size() && std::isspace(static_cast<unsigned char>(s[k]))) ++k;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("polynomial parse error at " + std::to_string(k) + ": " + what + " in \"" + s + "\"");
  }
  long integer() {
    ws();
    std::size_t start = k;
    while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
    if (start == k) fail("expected an integer");
    return std::stol(s.substr(start, k - start));
  }
  bool at_var() {
    ws();
    return k < s.size() && kFamilies.find(s[k]) != std::string::npos && k + 1 < s.size() && s[k + 1] == '[';
  }
  CoordVar var() {
    CoordVar v;
    v.family = s[k];
    k += 2;
    v.i = static_cast<int>(integer()) - 1;
    ws();
    if (k < s.size() && s[k] == ',') {
      ++k;
      v.j = static_cast<int>(integer()) - 1;
    }
    ws();
    if (k >= s.size() || s[k] != ']') fail("expected ]");
    ++k;
    if (v.i < 0 || (v.j < -1)) fail("indices start at 1");
    return v;
  }
  Scalar coefficient() {
    ws();
    if (k < s.size() && s[k] == '(') {
      int depth = 0;
      std::size_t start = k;
      for (; k < s.size(); ++k) {
        if (s[k] == '(') ++depth;
        if (s[k] == ')' && --depth == 0) break;
      }
      if (k >= s.size()) fail("unbalanced parenthesis");
      ++k;
      return Scalar::parse(f, s.substr(start + 1, k - start - 2));
    }
    std::size_t start = k;
    while (k < s.size() && (std::isdigit(static_cast<unsigned char>(s[k])) || s[k] == '/')) ++k;
    if (start == k) fail("expected a coefficient");
    return Scalar::parse(f, s.substr(start, k - start));
  }
  CoordPoly term() {
    CoordPoly t = CoordPoly::constant(Scalar::one(f));
    bool need_factor = true;
    if (!at_var()) {
      t = CoordPoly::constant(coefficient());
      ws();
      if (k < s.size() && s[k] == '*') ++k;
      else need_factor = false;
    }
    while (need_factor) {
      if (!at_var()) fail("expected a variable");
      CoordVar v = var();
      int e = 1;
      ws();
      if (k < s.size() && s[k] == '^') {
        ++k;
        e = static_cast<int>(integer());
      }
      t = t * CoordPoly::var(f, v).pow(e);
      ws();
      if (k < s.size() && s[k] == '*') ++k;
      else need_factor = false;
    }
    return t;
  }
  CoordPoly poly() {
    CoordPoly out(f);
    ws();
    bool first = true;
    while (k < s.size()) {
      bool neg = false;
      if (s[k] == '+' || s[k] == '-') {
        neg = s[k] == '-';
        ++k;
      } else if (!first) {
        fail("expected + or -");
      }
      CoordPoly t = term();
      out = neg ? out - t : out + t;
      first = false;
      ws();
    }
    if (first) fail("empty polynomial");
    return out;
  }
};

}  // namespace

std::string CoordVar::to_string() const {
  std::string out = std::string(1, family) + "[" + std::to_string(i + 1);
  if (j >= 0) out += "," + std::to_string(j + 1);
  return out + "]";
}

bool CoordVar::operator<(const CoordVar& o) const {
  int a = family_rank(family), b = family_rank(o.family);
  if (a != b) return a < b;
  if (i != o.i) return i < o.i;
  return j < o.j;
}

bool MonomialLess::operator()(const Monomial& a, const Monomial& b) const {
  int da = total_degree(a), db = total_degree(b);
  if (da != db) return da < db;
  // scan from the smallest variable: a larger exponent there means a smaller monomial
  auto ia = a.rbegin(), ib = b.rbegin();
  while (ia != a.rend() || ib != b.rend()) {
    if (ib == b.rend() || (ia != a.rend() && ib->first < ia->first)) return true;
    if (ia == a.rend() || ia->first < ib->first) return false;
    if (ia->second != ib->second) return ia->second > ib->second;
    ++ia, ++ib;
  }
  return false;
}

CoordPoly CoordPoly::constant(const Scalar& c) {
  CoordPoly p(c.field());
  p.add_term({}, c);
  return p;
}

CoordPoly CoordPoly::var(const FieldSpec& f, const CoordVar& v) {
  family_rank(v.family);
  CoordPoly p(f);
  p.add_term({{v, 1}}, Scalar::one(f));
  return p;
}

void CoordPoly::add_term(const Monomial& m, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = t_.try_emplace(m, c);
  if (inserted) return;
  it->second += c;
  if (it->second.is_zero()) t_.erase(it);
}

int CoordPoly::degree() const { return t_.empty() ? -1 : total_degree(t_.rbegin()->first); }

std::vector<CoordVar> CoordPoly::variables() const {
  std::set<CoordVar> vs;
  for (const auto& [m, c] : t_)
    for (const auto& [v, e] : m) vs.insert(v);
  return {vs.begin(), vs.end()};
}

Scalar CoordPoly::coefficient(const Monomial& m) const {
  auto it = t_.find(m);
  return it == t_.end() ? Scalar::zero(f_) : it->second;
}

CoordPoly CoordPoly::operator+(const CoordPoly& o) const {
  if (!(f_ == o.f_)) throw field_mismatch("field mismatch in polynomial sum");
  CoordPoly out = *this;
  for (const auto& [m, c] : o.t_) out.add_term(m, c);
  return out;
}

CoordPoly CoordPoly::operator-(const CoordPoly& o) const { return *this + (-o); }

CoordPoly CoordPoly::operator-() const {
  CoordPoly out = *this;
  for (auto& [m, c] : out.t_) c = -c;
  return out;
}

CoordPoly CoordPoly::operator*(const CoordPoly& o) const {
  if (!(f_ == o.f_)) throw field_mismatch("field mismatch in polynomial product");
  CoordPoly out(f_);
  for (const auto& [ma, ca] : t_)
    for (const auto& [mb, cb] : o.t_) out.add_term(multiply(ma, mb), ca * cb);
  return out;
}

CoordPoly CoordPoly::operator*(const Scalar& s) const {
  CoordPoly out(f_);
  for (const auto& [m, c] : t_) out.add_term(m, c * s);
  return out;
}

CoordPoly CoordPoly::pow(int e) const {
  if (e < 0) throw std::invalid_argument("negative exponent");
  CoordPoly out = constant(Scalar::one(f_)), base = *this;
  for (; e; e >>= 1) {
    if (e & 1) out = out * base;
    if (e > 1) base = base * base;
  }
  return out;
}

CoordPoly CoordPoly::substitute(const std::function<std::optional<CoordPoly>(const CoordVar&)>& fn) const {
  std::map<CoordVar, std::optional<CoordPoly>> cache;
  CoordPoly out(f_);
  for (const auto& [m, c] : t_) {
    CoordPoly term = constant(c);
    Monomial kept;
    for (const auto& [v, e] : m) {
      auto it = cache.find(v);
      if (it == cache.end()) it = cache.emplace(v, fn(v)).first;
      if (it->second) term = term * it->second->pow(e);
      else kept.push_back({v, e});
    }
    if (!kept.empty()) {
      CoordPoly mono(f_);
      mono.add_term(kept, Scalar::one(f_));
      term = term * mono;
    }
    out += term;
  }
  return out;
}

Scalar CoordPoly::evaluate(const std::function<Scalar(const CoordVar&)>& value) const {
  std::map<CoordVar, Scalar> cache;
  Scalar acc = Scalar::zero(f_);
  for (const auto& [m, c] : t_) {
    Scalar t = c;
    for (const auto& [v, e] : m) {
      auto it = cache.find(v);
      if (it == cache.end()) it = cache.emplace(v, value(v)).first;
      t *= it->second.pow(static_cast<unsigned long>(e));
    }
    acc += t;
  }
  return acc;
}

std::map<Monomial, CoordPoly, MonomialLess> CoordPoly::split(const std::function<bool(const CoordVar&)>& selected) const {
  std::map<Monomial, CoordPoly, MonomialLess> out;
  for (const auto& [m, c] : t_) {
    Monomial sel, rest;
    for (const auto& ve : m) (selected(ve.first) ? sel : rest).push_back(ve);
    auto it = out.try_emplace(sel, CoordPoly(f_)).first;
    it->second.add_term(rest, c);
    if (it->second.is_zero()) out.erase(it);
  }
  return out;
}

std::string CoordPoly::to_string() const {
  if (t_.empty()) return "0";
  std::string out;
  for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
    const auto& [m, c] = *it;
    std::string mono;
    for (const auto& [v, e] : m) {
      if (!mono.empty()) mono += "*";
      mono += v.to_string();
      if (e > 1) mono += "^" + std::to_string(e);
    }
    std::string coef = c.to_string();
    bool neg = false;
    if (coef.find('t') != std::string::npos) {
      coef = "(" + coef + ")";
    } else if (coef[0] == '-') {
      neg = true;
      coef = coef.substr(1);
    }
    std::string body;
    if (mono.empty()) body = coef;
    else if (coef == "1") body = mono;
    else body = coef + "*" + mono;
    if (out.empty()) out = (neg ? "-" : "") + body;
    else out += (neg ? " - " : " + ") + body;
  }
  return out;
}

CoordPoly CoordPoly::parse(const FieldSpec& f, const std::string& s) {
  Parser p{f, s};
  return p.poly();
}

GradingWeights GradingWeights::grad() { return {{{'p', 1}, {'q', 2}, {'r', 0}, {'s', 1}, {'v', 1}, {'w', 0}, {'x', 0}}}; }

GradingWeights GradingWeights::total() {
  GradingWeights w;
  for (char c : kFamilies) w.weight[c] = 1;
  return w;
}

int GradingWeights::of(char family) const {
  auto it = weight.find(family);
  if (it == weight.end()) throw std::invalid_argument(std::string("no weight for family ") + family);
  return it->second;
}

int GradingWeights::degree(const Monomial& m) const {
  int d = 0;
  for (const auto& [v, e] : m) d += of(v.family) * e;
  return d;
}

CoordPoly graded_part(const CoordPoly& f, const GradingWeights& w, std::optional<int> degree) {
  if (f.is_zero()) return f;
  int target = 0;
  if (degree) {
    target = *degree;
  } else {
    target = std::numeric_limits<int>::min();
    for (const auto& [m, c] : f.terms()) target = std::max(target, w.degree(m));
  }
  CoordPoly out(f.field());
  for (const auto& [m, c] : f.terms())
    if (w.degree(m) == target) {
      CoordPoly t = CoordPoly::constant(c);
      for (const auto& [v, e] : m) t = t * CoordPoly::var(f.field(), v).pow(e);
      out += t;
    }
  return out;
}

PolyMatrix::PolyMatrix(FieldSpec f, int rows, int cols) : f_(f), r_(rows), c_(cols) {
  a_.assign(static_cast<std::size_t>(rows) * cols, CoordPoly(f));
}

PolyMatrix::PolyMatrix(const Matrix& m) : PolyMatrix(m.field(), m.rows(), m.cols()) {
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < c_; ++j) (*this)(i, j) = CoordPoly::constant(m(i, j));
}

PolyMatrix PolyMatrix::symbols(const FieldSpec& f, char family, int rows, int cols, int row0, int col0) {
  PolyMatrix m(f, rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = CoordPoly::var(f, family, row0 + i, col0 + j);
  return m;
}

PolyMatrix PolyMatrix::operator+(const PolyMatrix& o) const {
  if (r_ != o.r_ || c_ != o.c_) throw std::invalid_argument("shape mismatch in +");
  PolyMatrix out = *this;
  for (std::size_t k = 0; k < a_.size(); ++k) out.a_[k] += o.a_[k];
  return out;
}

PolyMatrix PolyMatrix::operator-(const PolyMatrix& o) const { return *this + (-o); }

PolyMatrix PolyMatrix::operator-() const {
  PolyMatrix out = *this;
  for (auto& x : out.a_) x = -x;
  return out;
}

PolyMatrix PolyMatrix::operator*(const PolyMatrix& o) const {
  if (c_ != o.r_) throw std::invalid_argument("shape mismatch in *");
  PolyMatrix out(f_, r_, o.c_);
  for (int i = 0; i < r_; ++i)
    for (int k = 0; k < c_; ++k) {
      const CoordPoly& a = (*this)(i, k);
      if (a.is_zero()) continue;
      for (int j = 0; j < o.c_; ++j)
        if (!o(k, j).is_zero()) out(i, j) += a * o(k, j);
    }
  return out;
}

PolyMatrix PolyMatrix::operator*(const CoordPoly& s) const {
  PolyMatrix out = *this;
  for (auto& x : out.a_) x = x * s;
  return out;
}

bool PolyMatrix::operator==(const PolyMatrix& o) const { return r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }

PolyMatrix PolyMatrix::transpose() const {
  PolyMatrix out(f_, c_, r_);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < c_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

PolyMatrix PolyMatrix::block(int r0, int c0, int h, int w) const {
  if (r0 < 0 || c0 < 0 || r0 + h > r_ || c0 + w > c_) throw std::out_of_range("block out of range");
  PolyMatrix out(f_, h, w);
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j) out(i, j) = (*this)(r0 + i, c0 + j);
  return out;
}

void PolyMatrix::set_block(int r0, int c0, const PolyMatrix& b) {
  if (r0 < 0 || c0 < 0 || r0 + b.r_ > r_ || c0 + b.c_ > c_) throw std::out_of_range("set_block out of range");
  for (int i = 0; i < b.r_; ++i)
    for (int j = 0; j < b.c_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

bool PolyMatrix::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](const CoordPoly& x) { return x.is_zero(); });
}

PolyMatrix PolyMatrix::substitute(const std::function<std::optional<CoordPoly>(const CoordVar&)>& fn) const {
  PolyMatrix out = *this;
  for (auto& x : out.a_) x = x.substitute(fn);
  return out;
}

Matrix PolyMatrix::evaluate(const std::function<Scalar(const CoordVar&)>& value) const {
  Matrix out(f_, r_, c_);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < c_; ++j) out(i, j) = (*this)(i, j).evaluate(value);
  return out;
}

std::string PolyMatrix::to_string() const {
  std::string out = "[";
  for (int i = 0; i < r_; ++i) {
    if (i) out += "; ";
    for (int j = 0; j < c_; ++j) out += (j ? ", " : "") + (*this)(i, j).to_string();
  }
  return out + "]";
}

void PolyContext::check_var(const CoordVar& v) const {
  auto bad = [&](const std::string& why) { throw std::invalid_argument(v.to_string() + ": " + why); };
  if (v.family == 'x') {
    if (v.i < 0 || v.j < -1) bad("negative index");
    return;
  }
  bool matrix_family = v.family == 'p' || v.family == 'q' || v.family == 'r' || v.family == 's';
  if (letter == 'A') {
    if (!matrix_family) bad("gl_n coordinates are p, q, r, s");
  } else {
    if (v.family == 's') bad("s is not a coordinate outside type A");
    if ((v.family == 'v' || v.family == 'w') && letter != 'B') bad("vector coordinates exist only in type B");
  }
  if (matrix_family) {
    if (v.i < 0 || v.i >= n || v.j < 0 || v.j >= n) bad("index out of range");
    if (letter != 'A' && v.family != 'p') {
      if (letter == 'C' && v.i > v.j) bad("type C stores k <= l");
      if (letter != 'C' && v.i >= v.j) bad("skew coordinates store k < l");
    }
  } else if (v.i < 0 || v.i >= n || v.j != -1) {
    bad("index out of range");
  }
}

PolyMatrix PolyContext::generic(const FieldSpec& f, char family) const {
  if (letter == 'A') return PolyMatrix::symbols(f, family, n, n);
  int off = letter == 'B' ? n + 1 : n, size = letter == 'B' ? 2 * n + 1 : 2 * n;
  PolyMatrix m(f, size, size);
  auto sym = [&](char fam, int a, int b) {
    if (letter == 'C') return CoordPoly::var(f, fam, std::min(a, b), std::max(a, b));
    if (a == b) return CoordPoly(f);
    return a < b ? CoordPoly::var(f, fam, a, b) : -CoordPoly::var(f, fam, b, a);
  };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      m(a, b) = CoordPoly::var(f, 'p', a, b);
      m(off + a, off + b) = -CoordPoly::var(f, 'p', b, a);
      m(a, off + b) = sym('q', a, b);
      m(off + a, b) = sym('r', a, b);
    }
  if (letter == 'B')
    for (int a = 0; a < n; ++a) {
      m(a, n) = CoordPoly::var(f, 'v', a);
      m(off + a, n) = CoordPoly::var(f, 'w', a);
      m(n, a) = -CoordPoly::var(f, 'w', a);
      m(n, off + a) = -CoordPoly::var(f, 'v', a);
    }
  return m;
}

std::pair<int, int> PolyContext::position(const CoordVar& v) const {
  check_var(v);
  if (v.family == 'x') throw std::invalid_argument("parameters have no matrix position");
  if (letter == 'A') return {v.i, v.j};
  int off = letter == 'B' ? n + 1 : n;
  switch (v.family) {
    case 'p': return {v.i, v.j};
    case 'q': return {v.i, off + v.j};
    case 'r': return {off + v.i, v.j};
    case 'v': return {v.i, n};
    default: return {off + v.i, n};
  }
}

Scalar evaluate(const CoordPoly& f, const PolyContext& ctx, const Point& point) {
  for (const auto& [fam, m] : point) {
    if (fam == 'x') continue;
    bool vec = fam == 'v' || fam == 'w';
    if (m.rows() != ctx.n || m.cols() != (vec ? 1 : ctx.n))
      throw std::invalid_argument(std::string("wrong shape for family ") + fam);
    if (ctx.letter != 'A' && (fam == 'q' || fam == 'r')) {
      Matrix t = m.transpose();
      if (ctx.letter == 'C' ? t != m : t != -m)
        throw std::invalid_argument(std::string("family ") + fam + (ctx.letter == 'C' ? " must be symmetric" : " must be skew"));
    }
  }
  return f.evaluate([&](const CoordVar& v) {
    ctx.check_var(v);
    auto it = point.find(v.family);
    if (it == point.end()) throw std::invalid_argument(std::string("point has no family ") + v.family);
    int j = std::max(v.j, 0);
    if (v.i >= it->second.rows() || j >= it->second.cols()) throw std::invalid_argument(v.to_string() + " outside the supplied block");
    return it->second(v.i, j);
  });
}

Point point_from_matrix(const PolyContext& ctx, const Matrix& m) {
  if (ctx.letter == 'A') return {{'p', m}};
  GroupType g{ctx.letter, ctx.n};
  if (!algebra_membership(g, m)) throw std::invalid_argument("matrix is not in the Lie algebra of " + g.to_string());
  int n = ctx.n, off = ctx.letter == 'B' ? n + 1 : n;
  Point p{{'p', m.block(0, 0, n, n)}, {'q', m.block(0, off, n, n)}, {'r', m.block(off, 0, n, n)}};
  if (ctx.letter == 'B') {
    p['v'] = m.block(0, n, n, 1);
    p['w'] = m.block(off, n, n, 1);
  }
  return p;
}

CoordPoly group_act(const CoordPoly& f, const PolyContext& ctx, const Matrix& g) {
  const FieldSpec& fld = f.field();
  GroupType gt{ctx.letter, ctx.n};
  if (ctx.letter == 'A') {
    if (g.rows() != ctx.n || !g.square() || !is_invertible(g)) throw not_member("g must be invertible of size n");
  } else if (!group_membership(gt, g)) {
    throw not_member("g does not preserve the form of " + gt.to_string());
  }
  PolyMatrix gi(inverse(g)), gg(g);
  std::map<char, PolyMatrix> moved;
  auto conj = [&](char fam) -> const PolyMatrix& {
    auto it = moved.find(fam);
    if (it == moved.end()) it = moved.emplace(fam, gi * ctx.generic(fld, fam) * gg).first;
    return it->second;
  };
  return f.substitute([&](const CoordVar& v) -> std::optional<CoordPoly> {
    if (v.family == 'x') return std::nullopt;
    auto [r, c] = ctx.position(v);
    return conj(ctx.letter == 'A' ? v.family : 'p')(r, c);
  });
}

CoordPoly pullback_projection(const CoordPoly& f, const Embedding& e) {
  const FieldSpec& fld = f.field();
  PolyContext src = PolyContext::of(e.source), dst = PolyContext::of(e.target);
  std::map<char, PolyMatrix> generic;
  auto entry = [&](char fam, int a, int b) {
    char key = src.letter == 'A' ? fam : 'p';
    auto it = generic.find(key);
    if (it == generic.end()) it = generic.emplace(key, dst.generic(fld, key)).first;
    CoordPoly out(fld);
    for (const auto& c : e.copies)
      out += c.dual ? -it->second(c.pos[b], c.pos[a]) : it->second(c.pos[a], c.pos[b]);
    return out;
  };
  return f.substitute([&](const CoordVar& v) -> std::optional<CoordPoly> {
    if (v.family == 'x') return std::nullopt;
    auto [r, c] = src.position(v);
    return entry(v.family, r, c);
  });
}

CoordPoly pullback_projection(const CoordPoly& f, const ChainSpec& c, int level) {
  c.validate();
  if (level < 1) throw std::out_of_range("levels start at 1");
  return pullback_projection(f, chain_embedding(c, level));
}

std::vector<CoordPoly> vandermonde_coefficients(const std::function<CoordPoly(const Scalar&)>& family, int d,
                                                const std::vector<Scalar>& points) {
  if (d < 0) throw std::invalid_argument("negative degree bound");
  if (static_cast<int>(points.size()) != d + 1) throw std::invalid_argument("need exactly d+1 sample points");
  const FieldSpec& f = points[0].field();
  if (f.is_finite() && f.p < static_cast<std::uint32_t>(d + 1)) throw unsupported_field("field has fewer than d+1 elements");
  for (std::size_t a = 0; a < points.size(); ++a)
    for (std::size_t b = a + 1; b < points.size(); ++b)
      if (points[a] == points[b]) throw std::invalid_argument("repeated sample point " + points[a].to_string());
  Matrix v(f, d + 1, d + 1);
  for (int k = 0; k <= d; ++k)
    for (int j = 0; j <= d; ++j) v(k, j) = points[k].pow(static_cast<unsigned long>(j));
  Matrix vi = inverse(v);
  std::vector<CoordPoly> values;
  for (const auto& pt : points) values.push_back(family(pt));
  std::vector<CoordPoly> out;
  for (int j = 0; j <= d; ++j) {
    CoordPoly c(values[0].field());
    for (int k = 0; k <= d; ++k) c += values[k] * vi(j, k);
    out.push_back(c);
  }
  return out;
}

std::optional<OffDiagonalSets> off_diagonal_test(const CoordPoly& f, int n, std::optional<int> m) {
  int bound = (n - 1) / 2;
  if (m) bound = std::min(bound, *m);
  std::set<int> rows, cols;
  for (const auto& v : f.variables()) {
    if (v.family != 'p' || v.j < 0) return std::nullopt;
    rows.insert(v.i);
    cols.insert(v.j);
  }
  for (int r : rows)
    if (cols.count(r)) return std::nullopt;
  if (static_cast<int>(rows.size()) > bound || static_cast<int>(cols.size()) > bound) return std::nullopt;
  return OffDiagonalSets{{rows.begin(), rows.end()}, {cols.begin(), cols.end()}};
}

bool is_shift_invariant(const CoordPoly& f, int n) {
  int fresh = 0;
  for (const auto& v : f.variables())
    if (v.family == 'x') fresh = std::max(fresh, v.i + 1);
  CoordPoly lambda = CoordPoly::var(f.field(), 'x', fresh);
  CoordPoly shifted = f.substitute([&](const CoordVar& v) -> std::optional<CoordPoly> {
    if (v.family == 'p' && v.j == v.i && v.i < n) return CoordPoly::var(f.field(), v) + lambda;
    return std::nullopt;
  });
  return shifted == f;
}

}  // namespace locdiag
