#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace locdiag {

enum class FieldKind { finite, rationals, rational_functions };

struct FieldSpec {
  FieldKind kind = FieldKind::rationals;
  std::uint32_t p = 0;

  static FieldSpec gf(std::uint32_t p);
  static FieldSpec qq() { return {FieldKind::rationals, 0}; }
  static FieldSpec qq_t() { return {FieldKind::rational_functions, 0}; }
  static FieldSpec parse(const std::string& s);

  std::uint32_t characteristic() const { return kind == FieldKind::finite ? p : 0; }
  bool is_finite() const { return kind == FieldKind::finite; }
  std::string to_string() const;
  bool operator==(const FieldSpec&) const = default;
};

struct field_mismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct unsupported_field : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct division_by_zero : std::domain_error {
  using std::domain_error::domain_error;
};

// Dense polynomial over Q, coefficients low to high, no trailing zeros.
class QPoly {
 public:
  QPoly() = default;
  explicit QPoly(std::vector<mpq_class> c);
  static QPoly constant(const mpq_class& c);
  static QPoly x();

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<mpq_class>& coeffs() const { return c_; }
  mpq_class coeff(int i) const;
  mpq_class lead() const { return c_.empty() ? mpq_class(0) : c_.back(); }
  mpq_class eval(const mpq_class& x) const;
  int valuation() const;  // order of vanishing at 0, -1 for zero

  QPoly operator+(const QPoly& o) const;
  QPoly operator-(const QPoly& o) const;
  QPoly operator-() const;
  QPoly operator*(const QPoly& o) const;
  QPoly scaled(const mpq_class& s) const;
  QPoly monic() const;
  QPoly compose_power(unsigned n) const;  // f(x^n)
  static void divmod(const QPoly& a, const QPoly& b, QPoly& q, QPoly& r);
  static QPoly gcd(QPoly a, QPoly b);

  bool operator==(const QPoly& o) const { return c_ == o.c_; }

  // integer-coefficient text in variable t, e.g. "2*t^2-t+3"
  std::string to_string(const std::string& var = "t") const;
  static QPoly parse(const std::string& s, const std::string& var = "t");

 private:
  void trim();
  std::vector<mpq_class> c_;
};

// Element of Q(t): reduced, denominator monic.
class RatFunc {
 public:
  RatFunc() : num_(), den_(QPoly::constant(1)) {}
  RatFunc(QPoly num, QPoly den);
  static RatFunc constant(const mpq_class& c) { return RatFunc(QPoly::constant(c), QPoly::constant(1)); }
  static RatFunc t() { return RatFunc(QPoly::x(), QPoly::constant(1)); }

  const QPoly& num() const { return num_; }
  const QPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  int valuation() const;  // at t = 0; large for zero

  RatFunc operator+(const RatFunc& o) const;
  RatFunc operator-(const RatFunc& o) const;
  RatFunc operator-() const;
  RatFunc operator*(const RatFunc& o) const;
  RatFunc operator/(const RatFunc& o) const;
  RatFunc substitute_power(unsigned n) const;
  bool operator==(const RatFunc& o) const { return num_ == o.num_ && den_ == o.den_; }

  std::string to_string() const;
  static RatFunc parse(const std::string& s);

 private:
  QPoly num_, den_;
};

class Scalar {
 public:
  Scalar() : f_(FieldSpec::qq()), v_(mpq_class(0)) {}
  static Scalar zero(const FieldSpec& f);
  static Scalar one(const FieldSpec& f);
  static Scalar from_int(const FieldSpec& f, long v);
  static Scalar from_rational(const FieldSpec& f, const mpq_class& q);
  static Scalar from_ratfunc(const RatFunc& r);
  static Scalar t();
  static Scalar parse(const FieldSpec& f, const std::string& s);

  const FieldSpec& field() const { return f_; }
  bool is_zero() const;
  bool is_one() const;

  std::uint32_t residue() const { return std::get<std::uint32_t>(v_); }
  const mpq_class& rational() const { return std::get<mpq_class>(v_); }
  const RatFunc& ratfunc() const { return std::get<RatFunc>(v_); }

  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator-() const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator/(const Scalar& o) const;
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  Scalar inverse() const;
  Scalar pow(unsigned long e) const;

  bool operator==(const Scalar& o) const;
  bool operator!=(const Scalar& o) const { return !(*this == o); }
  // canonical order: residues ascending, rationals by value, Q(t) structurally
  bool operator<(const Scalar& o) const;

  std::string to_string() const;

 private:
  Scalar(FieldSpec f, std::variant<std::uint32_t, mpq_class, RatFunc> v) : f_(f), v_(std::move(v)) {}
  void check(const Scalar& o) const;

  FieldSpec f_;
  std::variant<std::uint32_t, mpq_class, RatFunc> v_;
};

std::vector<Scalar> field_elements(const FieldSpec& f);  // finite fields only

}  // namespace locdiag
