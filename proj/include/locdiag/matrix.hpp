#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "locdiag/scalar.hpp"

namespace locdiag {

class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : eng_(seed) {}
  // independent stream per (seed, tag)
  static Rng derive(std::uint64_t seed, const std::string& tag);

  std::uint64_t next() { return eng_(); }
  std::uint64_t below(std::uint64_t n);
  long range(long lo, long hi);  // inclusive
  Scalar scalar(const FieldSpec& f);
  Scalar nonzero_scalar(const FieldSpec& f);

 private:
  std::mt19937_64 eng_;
};

class Matrix {
 public:
  Matrix() = default;
  Matrix(FieldSpec f, int rows, int cols);
  static Matrix identity(FieldSpec f, int n);
  static Matrix from_ints(FieldSpec f, const std::vector<std::vector<long>>& rows);
  static Matrix from_strings(FieldSpec f, const std::vector<std::vector<std::string>>& rows);
  static Matrix elementary(FieldSpec f, int rows, int cols, int i, int j);  // E_ij, 0-based
  static Matrix diag(const std::vector<Matrix>& blocks);
  static Matrix random(FieldSpec f, int rows, int cols, Rng& rng);

  const FieldSpec& field() const { return f_; }
  int rows() const { return r_; }
  int cols() const { return c_; }
  bool square() const { return r_ == c_; }

  Scalar& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * c_ + j]; }
  const Scalar& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * c_ + j]; }

  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix operator-() const;
  Matrix operator*(const Matrix& o) const;
  Matrix operator*(const Scalar& s) const;
  bool operator==(const Matrix& o) const;
  bool operator!=(const Matrix& o) const { return !(*this == o); }

  Matrix transpose() const;
  Matrix block(int r0, int c0, int h, int w) const;
  Matrix select(const std::vector<int>& rows, const std::vector<int>& cols) const;
  void set_block(int r0, int c0, const Matrix& b);
  Matrix column(int j) const { return block(0, j, r_, 1); }
  Scalar trace() const;
  bool is_zero() const;
  bool is_scalar() const;
  Matrix map_entries(const std::function<Scalar(const Scalar&)>& fn) const;

  std::string to_string() const;  // rows separated by ';', entries by ','

 private:
  FieldSpec f_;
  int r_ = 0, c_ = 0;
  std::vector<Scalar> a_;
};

Matrix hstack(const std::vector<Matrix>& ms);
Matrix vstack(const std::vector<Matrix>& ms);

// Univariate polynomial over a field, coefficients low to high.
struct UniPoly {
  FieldSpec field;
  std::vector<Scalar> coeffs;

  int degree() const;
  Scalar eval(const Scalar& x) const;
  std::string to_string() const;
  bool operator==(const UniPoly& o) const;
};

}  // namespace locdiag
