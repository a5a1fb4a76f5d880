#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "locdiag/matrix.hpp"

namespace locdiag {

struct RrefResult {
  int rank = 0;
  Matrix rref;
  Matrix transform;  // transform * M == rref, transform invertible
  std::vector<int> pivots;
};

RrefResult rank_and_rref(const Matrix& m);
int rank(const Matrix& m);
Scalar determinant(const Matrix& m);
Matrix inverse(const Matrix& m);  // throws division_by_zero when singular
bool is_invertible(const Matrix& m);

// columns form a basis of {x : m x = 0}, free variables set to unit vectors in order
Matrix kernel(const Matrix& m);
// some X with a X = b, free variables zero; nullopt if inconsistent
std::optional<Matrix> solve(const Matrix& a, const Matrix& b);
// extend the independent columns of v by standard basis vectors e_1, e_2, ... in order
Matrix extend_to_basis(const Matrix& v, int n);
// independent subset of the columns, kept greedily left to right
Matrix independent_columns(const Matrix& v);

// det(xI - m), coefficients low to high, division free
UniPoly char_poly(const Matrix& m);

struct EigenEntry {
  Scalar lambda;
  int geometric_multiplicity;
  int algebraic_multiplicity;
};
std::vector<EigenEntry> eigen_data(const Matrix& m);

enum class TransformKind { similarity, congruence };
Matrix transform(const Matrix& g, const Matrix& m, TransformKind kind);

// entrywise t -> 0; throws pole_error naming the first offending entry
struct pole_error : std::domain_error {
  int row, col;
  pole_error(int r, int c);
};
Matrix limit_at_zero(const Matrix& m);
int pole_order(const Matrix& m);  // max pole order at t = 0 over the entries
Matrix substitute_power(const Matrix& m, unsigned n);  // t -> t^n

Matrix random_invertible(const FieldSpec& f, int n, Rng& rng);

// Visit all of GL_n(F_q) in lexicographic order of the row-major entry vector.
// Returns the number of elements; throws if more than budget.
std::uint64_t gl_order(std::uint32_t q, int n);
void for_each_gl(const FieldSpec& f, int n, std::uint64_t budget, const std::function<bool(const Matrix&)>& visit);

Matrix to_field(const Matrix& m, const FieldSpec& f);  // Q entries reduced into f

}  // namespace locdiag
