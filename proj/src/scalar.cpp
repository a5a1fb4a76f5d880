#include "locdiag/scalar.hpp"

#include <algorithm>
#include <cctype>

namespace locdiag {

namespace {

bool is_prime(std::uint32_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

std::uint32_t mod_from_rational(const mpq_class& q, std::uint32_t p) {
  mpz_class n = q.get_num() % p;
  if (n < 0) n += p;
  mpz_class d = q.get_den() % p;
  if (d == 0) throw division_by_zero("denominator divisible by the characteristic");
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), d.get_mpz_t(), mpz_class(p).get_mpz_t());
  return static_cast<std::uint32_t>(mpz_class((n * inv) % p).get_ui());
}

std::string strip(const std::string& s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  return out;
}

mpq_class parse_rational(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty number");
  std::string body = s[0] == '+' ? s.substr(1) : s;
  for (std::size_t i = 0; i < body.size(); ++i) {
    char c = body[i];
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '/' || (c == '-' && i == 0)))
      throw std::invalid_argument("bad number: " + s);
  }
  mpq_class q;
  if (q.set_str(body, 10) != 0) throw std::invalid_argument("bad number: " + s);
  if (q.get_den() == 0) throw division_by_zero("zero denominator: " + s);
  q.canonicalize();
  return q;
}

}  // namespace

FieldSpec FieldSpec::gf(std::uint32_t p) {
  if (!is_prime(p) || p >= (1u << 31)) throw std::invalid_argument("gf: need a prime below 2^31, got " + std::to_string(p));
  return {FieldKind::finite, p};
}

FieldSpec FieldSpec::parse(const std::string& s) {
  if (s == "qq") return qq();
  if (s == "qq_t") return qq_t();
  if (s.rfind("gf:", 0) == 0) {
    std::string rest = s.substr(3);
    if (rest.empty() || !std::all_of(rest.begin(), rest.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      throw std::invalid_argument("bad field: " + s);
    unsigned long long p = std::stoull(rest);
    if (p >= (1ull << 31)) throw std::invalid_argument("bad field: " + s);
    return gf(static_cast<std::uint32_t>(p));
  }
  throw std::invalid_argument("unknown field: " + s);
}

std::string FieldSpec::to_string() const {
  switch (kind) {
    case FieldKind::finite: return "gf:" + std::to_string(p);
    case FieldKind::rationals: return "qq";
    default: return "qq_t";
  }
}

// ---------------------------------------------------------------- QPoly

QPoly::QPoly(std::vector<mpq_class> c) : c_(std::move(c)) { trim(); }

QPoly QPoly::constant(const mpq_class& c) { return QPoly(std::vector<mpq_class>{c}); }
QPoly QPoly::x() { return QPoly(std::vector<mpq_class>{0, 1}); }

void QPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

mpq_class QPoly::coeff(int i) const { return i >= 0 && i < static_cast<int>(c_.size()) ? c_[i] : mpq_class(0); }

mpq_class QPoly::eval(const mpq_class& x) const {
  mpq_class acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

int QPoly::valuation() const {
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (c_[i] != 0) return static_cast<int>(i);
  return -1;
}

QPoly QPoly::operator+(const QPoly& o) const {
  std::vector<mpq_class> r(std::max(c_.size(), o.c_.size()));
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = coeff(i) + o.coeff(i);
  return QPoly(std::move(r));
}

QPoly QPoly::operator-(const QPoly& o) const { return *this + (-o); }

QPoly QPoly::operator-() const {
  std::vector<mpq_class> r(c_);
  for (auto& x : r) x = -x;
  return QPoly(std::move(r));
}

QPoly QPoly::operator*(const QPoly& o) const {
  if (is_zero() || o.is_zero()) return {};
  std::vector<mpq_class> r(c_.size() + o.c_.size() - 1);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  }
  return QPoly(std::move(r));
}

QPoly QPoly::scaled(const mpq_class& s) const {
  std::vector<mpq_class> r(c_);
  for (auto& x : r) x *= s;
  return QPoly(std::move(r));
}

QPoly QPoly::monic() const { return is_zero() ? *this : scaled(1 / lead()); }

QPoly QPoly::compose_power(unsigned n) const {
  if (n == 1 || is_zero()) return *this;
  std::vector<mpq_class> r((c_.size() - 1) * n + 1);
  for (std::size_t i = 0; i < c_.size(); ++i) r[i * n] = c_[i];
  return QPoly(std::move(r));
}

void QPoly::divmod(const QPoly& a, const QPoly& b, QPoly& q, QPoly& r) {
  if (b.is_zero()) throw division_by_zero("polynomial division by zero");
  std::vector<mpq_class> rem(a.c_);
  int db = b.degree();
  std::vector<mpq_class> quo(std::max(0, a.degree() - db + 1));
  mpq_class lb = b.lead();
  for (int k = a.degree(); k >= db; --k) {
    if (rem[k] == 0) continue;
    mpq_class f = rem[k] / lb;
    quo[k - db] = f;
    for (int j = 0; j <= db; ++j) rem[k - db + j] -= f * b.c_[j];
  }
  q = QPoly(std::move(quo));
  r = QPoly(std::move(rem));
}

QPoly QPoly::gcd(QPoly a, QPoly b) {
  while (!b.is_zero()) {
    QPoly q, r;
    divmod(a, b, q, r);
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

std::string QPoly::to_string(const std::string& var) const {
  if (is_zero()) return "0";
  std::string out;
  for (int k = degree(); k >= 0; --k) {
    const mpq_class& c = c_[k];
    if (c == 0) continue;
    std::string term;
    if (k == 0) {
      term = c.get_str();
    } else {
      std::string mono = k == 1 ? var : var + "^" + std::to_string(k);
      if (c == 1) term = mono;
      else if (c == -1) term = "-" + mono;
      else term = c.get_str() + "*" + mono;
    }
    if (!out.empty() && term[0] != '-') out += "+";
    out += term;
  }
  return out;
}

QPoly QPoly::parse(const std::string& raw, const std::string& var) {
  std::string s = strip(raw);
  if (s.empty()) throw std::invalid_argument("empty polynomial");
  std::vector<std::string> terms;
  std::string cur;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if ((c == '+' || c == '-') && i > 0 && s[i - 1] != '^') {
      terms.push_back(cur);
      cur.clear();
    }
    cur += c;
  }
  terms.push_back(cur);
  std::vector<mpq_class> coeffs;
  for (const std::string& term : terms) {
    if (term.empty() || term == "+" || term == "-") throw std::invalid_argument("bad polynomial: " + raw);
    std::size_t pos = term.find(var);
    mpq_class coef;
    int deg = 0;
    if (pos == std::string::npos) {
      coef = parse_rational(term);
    } else {
      std::string head = term.substr(0, pos);
      std::string tail = term.substr(pos + var.size());
      if (!head.empty() && head.back() == '*') head.pop_back();
      if (head.empty() || head == "+") coef = 1;
      else if (head == "-") coef = -1;
      else coef = parse_rational(head);
      if (tail.empty()) deg = 1;
      else if (tail[0] == '^' && tail.size() > 1 && std::all_of(tail.begin() + 1, tail.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        deg = std::stoi(tail.substr(1));
      else throw std::invalid_argument("bad polynomial term: " + term);
    }
    if (static_cast<int>(coeffs.size()) <= deg) coeffs.resize(deg + 1);
    coeffs[deg] += coef;
  }
  return QPoly(std::move(coeffs));
}

// ---------------------------------------------------------------- RatFunc

RatFunc::RatFunc(QPoly num, QPoly den) {
  if (den.is_zero()) throw division_by_zero("rational function with zero denominator");
  if (num.is_zero()) {
    num_ = QPoly();
    den_ = QPoly::constant(1);
    return;
  }
  QPoly g = QPoly::gcd(num, den);
  QPoly r;
  QPoly::divmod(num, g, num_, r);
  QPoly::divmod(den, g, den_, r);
  mpq_class l = den_.lead();
  num_ = num_.scaled(1 / l);
  den_ = den_.scaled(1 / l);
}

int RatFunc::valuation() const {
  if (is_zero()) return 1 << 20;
  return num_.valuation() - den_.valuation();
}

RatFunc RatFunc::operator+(const RatFunc& o) const {
  if (den_ == o.den_) return RatFunc(num_ + o.num_, den_);
  return RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}
RatFunc RatFunc::operator-(const RatFunc& o) const { return *this + (-o); }
RatFunc RatFunc::operator-() const {
  RatFunc r = *this;
  r.num_ = -r.num_;
  return r;
}
RatFunc RatFunc::operator*(const RatFunc& o) const {
  if (is_zero() || o.is_zero()) return {};
  return RatFunc(num_ * o.num_, den_ * o.den_);
}
RatFunc RatFunc::operator/(const RatFunc& o) const {
  if (o.is_zero()) throw division_by_zero("division by zero in Q(t)");
  return RatFunc(num_ * o.den_, den_ * o.num_);
}

RatFunc RatFunc::substitute_power(unsigned n) const {
  return RatFunc(num_.compose_power(n), den_.compose_power(n));
}

std::string RatFunc::to_string() const {
  if (num_.degree() <= 0 && den_.degree() == 0) return mpq_class(num_.coeff(0) / den_.lead()).get_str();
  // scale numerator and denominator to primitive integer coefficients
  mpz_class l = 1;
  for (const QPoly* p : {&num_, &den_})
    for (const auto& c : p->coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den().get_mpz_t());
  QPoly n = num_.scaled(mpq_class(l)), d = den_.scaled(mpq_class(l));
  mpz_class g = 0;
  for (const QPoly* p : {&n, &d})
    for (const auto& c : p->coeffs()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num().get_mpz_t());
  if (g != 0 && g != 1) {
    n = n.scaled(mpq_class(1, g));
    d = d.scaled(mpq_class(1, g));
  }
  if (d.degree() == 0 && d.lead() == 1) return n.to_string();
  return "(" + n.to_string() + ")/(" + d.to_string() + ")";
}

RatFunc RatFunc::parse(const std::string& raw) {
  std::string s = strip(raw);
  if (s.empty()) throw std::invalid_argument("empty rational function");
  if (s[0] == '(') {
    std::size_t close = s.find(')');
    if (close == std::string::npos) throw std::invalid_argument("bad rational function: " + raw);
    QPoly n = QPoly::parse(s.substr(1, close - 1));
    std::string rest = s.substr(close + 1);
    if (rest.empty()) return RatFunc(n, QPoly::constant(1));
    if (rest.size() < 4 || rest[0] != '/' || rest[1] != '(' || rest.back() != ')')
      throw std::invalid_argument("bad rational function: " + raw);
    return RatFunc(n, QPoly::parse(rest.substr(2, rest.size() - 3)));
  }
  if (s.find('t') == std::string::npos) return constant(parse_rational(s));
  return RatFunc(QPoly::parse(s), QPoly::constant(1));
}

// ---------------------------------------------------------------- Scalar

Scalar Scalar::zero(const FieldSpec& f) { return from_int(f, 0); }
Scalar Scalar::one(const FieldSpec& f) { return from_int(f, 1); }

Scalar Scalar::from_int(const FieldSpec& f, long v) {
  switch (f.kind) {
    case FieldKind::finite: {
      long r = v % static_cast<long>(f.p);
      if (r < 0) r += f.p;
      return Scalar(f, static_cast<std::uint32_t>(r));
    }
    case FieldKind::rationals: return Scalar(f, mpq_class(v));
    default: return Scalar(f, RatFunc::constant(mpq_class(v)));
  }
}

Scalar Scalar::from_rational(const FieldSpec& f, const mpq_class& q) {
  switch (f.kind) {
    case FieldKind::finite: return Scalar(f, mod_from_rational(q, f.p));
    case FieldKind::rationals: return Scalar(f, q);
    default: return Scalar(f, RatFunc::constant(q));
  }
}

Scalar Scalar::from_ratfunc(const RatFunc& r) { return Scalar(FieldSpec::qq_t(), r); }
Scalar Scalar::t() { return from_ratfunc(RatFunc::t()); }

Scalar Scalar::parse(const FieldSpec& f, const std::string& s) {
  if (f.kind == FieldKind::rational_functions) return from_ratfunc(RatFunc::parse(s));
  return from_rational(f, parse_rational(strip(s)));
}

bool Scalar::is_zero() const {
  switch (v_.index()) {
    case 0: return std::get<0>(v_) == 0;
    case 1: return std::get<1>(v_) == 0;
    default: return std::get<2>(v_).is_zero();
  }
}

bool Scalar::is_one() const { return *this == one(f_); }

void Scalar::check(const Scalar& o) const {
  if (!(f_ == o.f_)) throw field_mismatch("field mismatch: " + f_.to_string() + " vs " + o.f_.to_string());
}

Scalar Scalar::operator+(const Scalar& o) const {
  check(o);
  switch (v_.index()) {
    case 0: {
      std::uint64_t s = std::uint64_t(std::get<0>(v_)) + std::get<0>(o.v_);
      return Scalar(f_, static_cast<std::uint32_t>(s % f_.p));
    }
    case 1: return Scalar(f_, mpq_class(std::get<1>(v_) + std::get<1>(o.v_)));
    default: return Scalar(f_, std::get<2>(v_) + std::get<2>(o.v_));
  }
}

Scalar Scalar::operator-() const {
  switch (v_.index()) {
    case 0: {
      std::uint32_t a = std::get<0>(v_);
      return Scalar(f_, a == 0 ? 0u : f_.p - a);
    }
    case 1: return Scalar(f_, mpq_class(-std::get<1>(v_)));
    default: return Scalar(f_, -std::get<2>(v_));
  }
}

Scalar Scalar::operator-(const Scalar& o) const { return *this + (-o); }

Scalar Scalar::operator*(const Scalar& o) const {
  check(o);
  switch (v_.index()) {
    case 0: {
      std::uint64_t s = std::uint64_t(std::get<0>(v_)) * std::get<0>(o.v_);
      return Scalar(f_, static_cast<std::uint32_t>(s % f_.p));
    }
    case 1: return Scalar(f_, mpq_class(std::get<1>(v_) * std::get<1>(o.v_)));
    default: return Scalar(f_, std::get<2>(v_) * std::get<2>(o.v_));
  }
}

Scalar Scalar::pow(unsigned long e) const {
  Scalar base = *this, acc = one(f_);
  while (e) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw division_by_zero("inverse of zero");
  switch (v_.index()) {
    case 0: return pow(f_.p - 2);
    case 1: return Scalar(f_, mpq_class(1 / std::get<1>(v_)));
    default: return Scalar(f_, RatFunc::constant(1) / std::get<2>(v_));
  }
}

Scalar Scalar::operator/(const Scalar& o) const {
  check(o);
  return *this * o.inverse();
}

bool Scalar::operator==(const Scalar& o) const {
  if (!(f_ == o.f_)) return false;
  switch (v_.index()) {
    case 0: return std::get<0>(v_) == std::get<0>(o.v_);
    case 1: return std::get<1>(v_) == std::get<1>(o.v_);
    default: return std::get<2>(v_) == std::get<2>(o.v_);
  }
}

bool Scalar::operator<(const Scalar& o) const {
  check(o);
  switch (v_.index()) {
    case 0: return std::get<0>(v_) < std::get<0>(o.v_);
    case 1: return std::get<1>(v_) < std::get<1>(o.v_);
    default: {
      const RatFunc &a = std::get<2>(v_), &b = std::get<2>(o.v_);
      auto key = [](const RatFunc& r) { return std::make_pair(r.den().degree(), r.num().degree()); };
      if (key(a) != key(b)) return key(a) < key(b);
      for (const auto& pr : {std::make_pair(&a.num(), &b.num()), std::make_pair(&a.den(), &b.den())}) {
        for (int i = pr.first->degree(); i >= 0; --i) {
          mpq_class x = pr.first->coeff(i), y = pr.second->coeff(i);
          if (x != y) return x < y;
        }
      }
      return false;
    }
  }
}

std::string Scalar::to_string() const {
  switch (v_.index()) {
    case 0: return std::to_string(std::get<0>(v_));
    case 1: return std::get<1>(v_).get_str();
    default: return std::get<2>(v_).to_string();
  }
}

std::vector<Scalar> field_elements(const FieldSpec& f) {
  if (!f.is_finite()) throw unsupported_field("cannot enumerate an infinite field");
  std::vector<Scalar> out;
  out.reserve(f.p);
  for (std::uint32_t a = 0; a < f.p; ++a) out.push_back(Scalar::from_int(f, a));
  return out;
}

}  // namespace locdiag
