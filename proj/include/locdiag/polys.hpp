#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "locdiag/chains.hpp"

namespace locdiag {

// Coordinate on a matrix family: p, q, r, s (matrices), v, w (vectors), x (free parameters).
// Indices are 0-based; j < 0 marks a single-index coordinate. Printed 1-based: p[1,2], w[4].
struct CoordVar {
  char family = 'p';
  int i = 0, j = -1;

  std::string to_string() const;
  bool operator==(const CoordVar&) const = default;
  bool operator<(const CoordVar& o) const;  // family order p q r s v w x, then indices
};

using Monomial = std::vector<std::pair<CoordVar, int>>;  // sorted, positive exponents

// degrevlex with p[1,1] the largest variable
struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

class CoordPoly {
 public:
  using Terms = std::map<Monomial, Scalar, MonomialLess>;

  CoordPoly() = default;
  explicit CoordPoly(FieldSpec f) : f_(f) {}
  static CoordPoly constant(const Scalar& c);
  static CoordPoly var(const FieldSpec& f, const CoordVar& v);
  static CoordPoly var(const FieldSpec& f, char family, int i, int j = -1) { return var(f, {family, i, j}); }

  const FieldSpec& field() const { return f_; }
  const Terms& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  int degree() const;  // -1 for zero
  std::vector<CoordVar> variables() const;
  Scalar coefficient(const Monomial& m) const;

  CoordPoly operator+(const CoordPoly& o) const;
  CoordPoly operator-(const CoordPoly& o) const;
  CoordPoly operator-() const;
  CoordPoly operator*(const CoordPoly& o) const;
  CoordPoly operator*(const Scalar& s) const;
  CoordPoly& operator+=(const CoordPoly& o) { return *this = *this + o; }
  CoordPoly& operator-=(const CoordPoly& o) { return *this = *this - o; }
  CoordPoly pow(int e) const;
  bool operator==(const CoordPoly& o) const { return f_ == o.f_ && t_ == o.t_; }
  bool operator!=(const CoordPoly& o) const { return !(*this == o); }

  // variables mapped to nullopt stay in place
  CoordPoly substitute(const std::function<std::optional<CoordPoly>(const CoordVar&)>& fn) const;
  Scalar evaluate(const std::function<Scalar(const CoordVar&)>& value) const;
  // group by the monomial in the selected variables; values are the remaining cofactors
  std::map<Monomial, CoordPoly, MonomialLess> split(const std::function<bool(const CoordVar&)>& selected) const;

  std::string to_string() const;
  static CoordPoly parse(const FieldSpec& f, const std::string& s);

 private:
  void add_term(const Monomial& m, const Scalar& c);
  FieldSpec f_;
  Terms t_;
};

struct GradingWeights {
  std::map<char, int> weight;
  static GradingWeights grad();   // r, w -> 0; p, v -> 1; q -> 2
  static GradingWeights total();  // all 1
  int of(char family) const;
  int degree(const Monomial& m) const;
};

// top weighted part, or the part of exactly the given weighted degree
CoordPoly graded_part(const CoordPoly& f, const GradingWeights& w, std::optional<int> degree = std::nullopt);

class PolyMatrix {
 public:
  PolyMatrix() = default;
  PolyMatrix(FieldSpec f, int rows, int cols);
  explicit PolyMatrix(const Matrix& m);
  // n x n matrix of the family's coordinates
  static PolyMatrix symbols(const FieldSpec& f, char family, int rows, int cols, int row0 = 0, int col0 = 0);

  const FieldSpec& field() const { return f_; }
  int rows() const { return r_; }
  int cols() const { return c_; }
  CoordPoly& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * c_ + j]; }
  const CoordPoly& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * c_ + j]; }

  PolyMatrix operator+(const PolyMatrix& o) const;
  PolyMatrix operator-(const PolyMatrix& o) const;
  PolyMatrix operator-() const;
  PolyMatrix operator*(const PolyMatrix& o) const;
  PolyMatrix operator*(const CoordPoly& s) const;
  bool operator==(const PolyMatrix& o) const;
  bool operator!=(const PolyMatrix& o) const { return !(*this == o); }

  PolyMatrix transpose() const;
  PolyMatrix block(int r0, int c0, int h, int w) const;
  void set_block(int r0, int c0, const PolyMatrix& b);
  bool is_zero() const;
  PolyMatrix substitute(const std::function<std::optional<CoordPoly>(const CoordVar&)>& fn) const;
  Matrix evaluate(const std::function<Scalar(const CoordVar&)>& value) const;
  std::string to_string() const;

 private:
  FieldSpec f_;
  int r_ = 0, c_ = 0;
  std::vector<CoordPoly> a_;
};

// Coordinate ring of gl_n (letter A, families p q r s all free) or of the
// Lie algebra of type B, C, D (families p q r [v w]; q, r stored canonically).
struct PolyContext {
  char letter = 'A';
  int n = 1;
  static PolyContext of(const GroupType& g) { return {g.letter, g.n}; }
  void check_var(const CoordVar& v) const;  // throws on out-of-range or non-canonical
  // generic point: the family matrix (A) or the full Lie algebra element (B, C, D)
  PolyMatrix generic(const FieldSpec& f, char family = 'p') const;
  std::pair<int, int> position(const CoordVar& v) const;  // inside generic(f, v.family)
};

using Point = std::map<char, Matrix>;  // family -> block (vectors as columns, x as a column)

Scalar evaluate(const CoordPoly& f, const PolyContext& ctx, const Point& point);
Point point_from_matrix(const PolyContext& ctx, const Matrix& m);
// (g.f)(P) = f(g^{-1} P g)
CoordPoly group_act(const CoordPoly& f, const PolyContext& ctx, const Matrix& g);
CoordPoly pullback_projection(const CoordPoly& f, const Embedding& e);
CoordPoly pullback_projection(const CoordPoly& f, const ChainSpec& c, int level);

// c_0..c_d with family(lambda) = sum c_j lambda^j, from d+1 distinct samples
std::vector<CoordPoly> vandermonde_coefficients(const std::function<CoordPoly(const Scalar&)>& family, int d,
                                                const std::vector<Scalar>& points);

struct OffDiagonalSets {
  std::vector<int> rows, cols;  // 0-based
};
// smallest disjoint index sets carrying f, of size at most min(m, (n-1)/2)
std::optional<OffDiagonalSets> off_diagonal_test(const CoordPoly& f, int n, std::optional<int> m = std::nullopt);
// f(P + lambda I) = f(P) as polynomials, for the p family on gl_n
bool is_shift_invariant(const CoordPoly& f, int n);

}  // namespace locdiag
