#include "locdiag/chains.hpp"

#include <numeric>

namespace locdiag {

namespace {

void check_letter(char c) {
  if (c != 'A' && c != 'B' && c != 'C' && c != 'D') throw std::invalid_argument(std::string("unknown group type ") + c);
}

void check_size(const GroupType& g, const Matrix& m) {
  if (m.rows() != g.size() || m.cols() != g.size())
    throw std::invalid_argument("expected a " + std::to_string(g.size()) + "x" + std::to_string(g.size()) + " matrix for " + g.to_string());
}

Scalar half(const FieldSpec& f) {
  if (f.characteristic() == 2) throw unsupported_field("types B and D need odd characteristic");
  return Scalar::from_int(f, 2).inverse();
}

Matrix random_symmetric(const FieldSpec& f, int n, Rng& rng, bool skew) {
  Matrix m(f, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      if (i == j && skew) continue;
      m(i, j) = rng.scalar(f);
      m(j, i) = skew ? -m(i, j) : m(i, j);
    }
  return m;
}

// exp of a square-zero or cube-zero nilpotent
Matrix unipotent(const Matrix& x) {
  const FieldSpec& f = x.field();
  Matrix x2 = x * x;
  Matrix g = Matrix::identity(f, x.rows()) + x;
  if (!x2.is_zero()) g = g + x2 * half(f);
  return g;
}

Matrix copy_matrix(const FieldSpec& f, int target, const std::vector<int>& pos) {
  Matrix e(f, target, static_cast<int>(pos.size()));
  for (std::size_t a = 0; a < pos.size(); ++a) e(pos[a], static_cast<int>(a)) = Scalar::one(f);
  return e;
}

void check_signature(char type, const Signature& s) {
  if (s.l < 0 || s.r < 0 || s.z < 0) throw std::invalid_argument("negative signature entry");
  if (s.l + s.r < 1) throw std::invalid_argument("signature needs l + r >= 1");
  if (type != 'A' && s.r != 0) throw std::invalid_argument("r must be 0 outside type A");
  if (type == 'B' && (s.l + s.z) % 2 == 0) throw std::invalid_argument("type B needs l(2n+1)+z odd");
}

}  // namespace

int GroupType::size() const {
  switch (letter) {
    case 'A': return n;
    case 'B': return 2 * n + 1;
    case 'C':
    case 'D': return 2 * n;
  }
  throw std::invalid_argument(std::string("unknown group type ") + letter);
}

std::string GroupType::to_string() const { return std::string(1, letter) + "(" + std::to_string(n) + ")"; }

Matrix form_matrix(const GroupType& g, const FieldSpec& f) {
  int n = g.n;
  Matrix j(f, g.size(), g.size());
  Scalar one = Scalar::one(f);
  switch (g.letter) {
    case 'B':
      for (int a = 0; a < n; ++a) j(a, n + 1 + a) = j(n + 1 + a, a) = one;
      j(n, n) = one;
      return j;
    case 'C':
      for (int a = 0; a < n; ++a) j(a, n + a) = one, j(n + a, a) = -one;
      return j;
    case 'D':
      for (int a = 0; a < n; ++a) j(a, n + a) = j(n + a, a) = one;
      return j;
  }
  throw std::invalid_argument("type A has no form");
}

Matrix form_involution(const GroupType& g, const Matrix& x) {
  Matrix j = form_matrix(g, x.field());
  return -(j * x.transpose() * inverse(j));
}

bool algebra_membership(const GroupType& g, const Matrix& m) {
  check_size(g, m);
  if (g.letter == 'A') return m.trace().is_zero();
  Matrix j = form_matrix(g, m.field());
  return (m * j + j * m.transpose()).is_zero();
}

bool group_membership(const GroupType& g, const Matrix& m) {
  check_size(g, m);
  if (g.letter == 'A') return determinant(m).is_one();
  Matrix j = form_matrix(g, m.field());
  return m * j * m.transpose() == j;
}

Matrix random_group_element(const GroupType& g, const FieldSpec& f, Rng& rng, int word_length) {
  check_letter(g.letter);
  if (f.kind == FieldKind::rational_functions) throw unsupported_field("random group elements need GF(p) or Q");
  if ((g.letter == 'B' || g.letter == 'D') && f.characteristic() == 2) throw unsupported_field("types B and D need odd characteristic");
  int size = g.size(), n = g.n;
  Matrix out = Matrix::identity(f, size);
  for (int step = 0; step < word_length; ++step) {
    Matrix s = Matrix::identity(f, size);
    if (g.letter == 'A') {
      if (n < 2) continue;
      int i = static_cast<int>(rng.below(n)), j = static_cast<int>(rng.below(n - 1));
      if (j >= i) ++j;
      if (rng.below(2)) {
        s(i, j) = rng.scalar(f);
      } else {
        Scalar c = rng.nonzero_scalar(f);
        s(i, i) = c;
        s(j, j) = c.inverse();
      }
    } else if (n > 0) {
      bool skew = g.letter != 'C';
      int off = g.letter == 'B' ? n + 1 : n;
      switch (rng.below(4)) {
        case 0:
        case 1: {
          Matrix x(f, size, size);
          x.set_block(0, off, random_symmetric(f, n, rng, skew));
          if (g.letter == 'B') {
            Matrix v = Matrix::random(f, n, 1, rng);
            x.set_block(0, n, v);
            x.set_block(n, off, -v.transpose());
          }
          s = unipotent(x);
          if (rng.below(2)) s = s.transpose();
          break;
        }
        case 2: {
          Matrix h = random_invertible(f, n, rng);
          s.set_block(0, 0, h);
          s.set_block(off, off, inverse(h).transpose());
          break;
        }
        default: {
          Matrix e = Matrix::identity(f, n);
          s = Matrix(f, size, size);
          s.set_block(0, off, e);
          s.set_block(off, 0, g.letter == 'C' ? -e : e);
          if (g.letter == 'B') s(n, n) = -Scalar::one(f);
        }
      }
    }
    out = out * s;
  }
  return out;
}

Matrix random_dual_element(const GroupType& g, const FieldSpec& f, Rng& rng) {
  check_letter(g.letter);
  int n = g.n;
  if (g.letter == 'A') return Matrix::random(f, n, n, rng);
  bool skew = g.letter != 'C';
  int off = g.letter == 'B' ? n + 1 : n;
  Matrix m(f, g.size(), g.size());
  Matrix p = Matrix::random(f, n, n, rng);
  m.set_block(0, 0, p);
  m.set_block(off, off, -p.transpose());
  m.set_block(0, off, random_symmetric(f, n, rng, skew));
  m.set_block(off, 0, random_symmetric(f, n, rng, skew));
  if (g.letter == 'B') {
    Matrix v = Matrix::random(f, n, 1, rng), w = Matrix::random(f, n, 1, rng);
    m.set_block(0, n, v);
    m.set_block(off, n, w);
    m.set_block(n, 0, -w.transpose());
    m.set_block(n, off, -v.transpose());
  }
  return m;
}

bool dual_equal(const GroupType& g, const Matrix& a, const Matrix& b) {
  if (g.letter == 'A') return (a - b).is_scalar();
  return a == b;
}

Signature compose(const Signature& o, const Signature& i) {
  return {o.l * i.l + o.r * i.r, o.l * i.r + o.r * i.l, o.l * i.z + o.r * i.z + o.z};
}

int ChainSpec::next_n(char type, int n, const Signature& s) {
  check_signature(type, s);
  switch (type) {
    case 'A': return (s.l + s.r) * n + s.z;
    case 'B': return (s.l * (2 * n + 1) + s.z - 1) / 2;
    case 'C':
    case 'D': return s.l * n + s.z;
  }
  throw std::invalid_argument(std::string("unknown group type ") + type);
}

Signature ChainSpec::signature(int level) const {
  if (level < 1) throw std::out_of_range("levels start at 1");
  std::size_t i = static_cast<std::size_t>(level - 1);
  if (i < prefix.size()) return prefix[i];
  if (repeat.empty()) throw std::out_of_range("level " + std::to_string(level) + " beyond a finite chain");
  return repeat[(i - prefix.size()) % repeat.size()];
}

int ChainSpec::n(int level) const {
  int n = n1;
  for (int i = 1; i < level; ++i) n = next_n(type, n, signature(i));
  return n;
}

void ChainSpec::validate() const {
  check_letter(type);
  if (n1 < 1) throw std::invalid_argument("n1 must be positive");
  for (const auto& s : prefix) check_signature(type, s);
  for (const auto& s : repeat) check_signature(type, s);
}

json chain_to_json(const ChainSpec& c) {
  auto sigs = [](const std::vector<Signature>& v) {
    json a = json::array();
    for (const auto& s : v) a.push_back({s.l, s.r, s.z});
    return a;
  };
  return {{"type", std::string(1, c.type)}, {"n1", c.n1}, {"prefix", sigs(c.prefix)}, {"repeat", sigs(c.repeat)}};
}

ChainSpec chain_from_json(const json& j) {
  ChainSpec c;
  std::string t = j.at("type").get<std::string>();
  if (t.size() != 1) throw std::invalid_argument("bad chain type " + t);
  c.type = t[0];
  c.n1 = j.at("n1").get<int>();
  auto sigs = [](const json& a) {
    std::vector<Signature> v;
    for (const auto& s : a) {
      if (s.size() != 3) throw std::invalid_argument("signature must be [l,r,z]");
      v.push_back({s[0].get<int>(), s[1].get<int>(), s[2].get<int>()});
    }
    return v;
  };
  if (j.contains("prefix")) c.prefix = sigs(j["prefix"]);
  if (j.contains("repeat")) c.repeat = sigs(j["repeat"]);
  c.validate();
  return c;
}

Signature Embedding::signature() const {
  Signature s{0, 0, target.size()};
  for (const auto& c : copies) {
    (c.dual ? s.r : s.l)++;
    s.z -= static_cast<int>(c.pos.size());
  }
  // C and D count trivial summands in pairs
  if (target.letter == 'C' || target.letter == 'D') s.z /= 2;
  return s;
}

Embedding standard_embedding(const GroupType& source, const Signature& s) {
  check_letter(source.letter);
  int n = source.n;
  Embedding e;
  e.source = source;
  e.target = {source.letter, ChainSpec::next_n(source.letter, n, s)};
  auto add = [&](bool dual, std::vector<int> pos) { e.copies.push_back({dual, std::move(pos)}); };
  switch (source.letter) {
    case 'A':
      for (int j = 0; j < s.l + s.r; ++j) {
        std::vector<int> pos(n);
        std::iota(pos.begin(), pos.end(), j * n);
        add(j >= s.l, pos);
      }
      break;
    case 'C':
    case 'D': {
      int big = e.target.n;
      for (int j = 0; j < s.l; ++j) {
        std::vector<int> pos(2 * n);
        for (int a = 0; a < n; ++a) pos[a] = j * n + a, pos[n + a] = big + j * n + a;
        add(false, pos);
      }
      break;
    }
    case 'B': {
      int l = s.l;
      if (l % 2 == 1) {
        // H-form copies, then the permutation to the B form, then the (1, z) padding
        int k = (l - 1) / 2, mid = l * n + k, pad = s.z / 2;
        auto to_b = [&](int h) {
          if (h <= mid) return h;
          if (h < l * n + l) return mid + l * n + l - (h - l * n);
          return mid + 1 + (h - l * n - l);
        };
        auto pad_map = [&](int q) { return q < mid ? q : q + pad; };
        for (int j = 0; j < l; ++j) {
          std::vector<int> pos(2 * n + 1);
          for (int a = 0; a < n; ++a) {
            pos[a] = pad_map(to_b(j * n + a));
            pos[n + 1 + a] = pad_map(to_b(l * n + l + (l - 1 - j) * n + a));
          }
          pos[n] = pad_map(to_b(l * n + j));
          add(false, pos);
        }
      } else {
        // anti-diagonal form copies, then the D form, then the (1, z) padding
        int big = l * (2 * n + 1), half_size = big / 2, k = (s.z - 1) / 2;
        auto rho = [&](int a) { return a <= n ? a : 3 * n + 1 - a; };
        auto to_d = [&](int p) { return p < half_size ? p : half_size + (big - 1 - p); };
        auto pad_map = [&](int q) { return q < half_size ? q : q + k + 1; };
        for (int j = 0; j < l; ++j) {
          std::vector<int> pos(2 * n + 1);
          for (int a = 0; a <= 2 * n; ++a) pos[a] = pad_map(to_d(j * (2 * n + 1) + rho(a)));
          add(false, pos);
        }
      }
      break;
    }
  }
  return e;
}

Embedding compose(const Embedding& outer, const Embedding& inner) {
  if (!(outer.source == inner.target)) throw std::invalid_argument("embeddings do not compose");
  Embedding e;
  e.source = inner.source;
  e.target = outer.target;
  for (const auto& d : outer.copies)
    for (const auto& c : inner.copies) {
      Embedding::Copy x;
      x.dual = c.dual != d.dual;
      for (int p : c.pos) x.pos.push_back(d.pos[p]);
      e.copies.push_back(std::move(x));
    }
  return e;
}

Matrix embed_group(const Embedding& e, const Matrix& g) {
  if (!group_membership(e.source, g)) throw not_member("not an element of " + e.source.to_string());
  Matrix out = Matrix::identity(g.field(), e.target.size());
  std::optional<Matrix> dual;
  for (const auto& c : e.copies) {
    if (c.dual && !dual) dual = inverse(g).transpose();
    const Matrix& src = c.dual ? *dual : g;
    int s = static_cast<int>(c.pos.size());
    for (int a = 0; a < s; ++a)
      for (int b = 0; b < s; ++b) out(c.pos[a], c.pos[b]) = src(a, b);
  }
  return out;
}

Matrix embed_algebra(const Embedding& e, const Matrix& x) {
  check_size(e.source, x);
  Matrix out(x.field(), e.target.size(), e.target.size());
  for (const auto& c : e.copies) {
    int s = static_cast<int>(c.pos.size());
    for (int a = 0; a < s; ++a)
      for (int b = 0; b < s; ++b) out(c.pos[a], c.pos[b]) = c.dual ? -x(b, a) : x(a, b);
  }
  return out;
}

Matrix project_dual(const Embedding& e, const Matrix& m) {
  check_size(e.target, m);
  if (e.target.letter != 'A' && !algebra_membership(e.target, m))
    throw std::invalid_argument("matrix is not in the Lie algebra of " + e.target.to_string());
  int s = e.source.size();
  Matrix out(m.field(), s, s);
  for (const auto& c : e.copies)
    for (int a = 0; a < s; ++a)
      for (int b = 0; b < s; ++b) {
        if (c.dual) out(a, b) -= m(c.pos[b], c.pos[a]);
        else out(a, b) += m(c.pos[a], c.pos[b]);
      }
  return out;
}

Matrix lift_dual(const Embedding& e, const Matrix& m) {
  check_size(e.source, m);
  if (e.copies.empty()) throw std::invalid_argument("embedding without copies");
  const auto& c = e.copies[0];
  Matrix x = copy_matrix(m.field(), e.target.size(), c.pos);
  Matrix out = x * (c.dual ? -m.transpose() : m) * x.transpose();
  if (e.target.letter == 'A' || algebra_membership(e.target, out)) return out;
  return (out + form_involution(e.target, out)) * half(m.field());
}

Matrix h_form(int n, int l, const FieldSpec& f) {
  int big = l * (2 * n + 1);
  Matrix j(f, big, big);
  for (int a = 0; a < l * n; ++a) j(a, l * n + l + a) = j(l * n + l + a, a) = Scalar::one(f);
  for (int u = 0; u < l; ++u) j(l * n + u, l * n + l - 1 - u) = Scalar::one(f);
  return j;
}

Matrix h_form_permutation(int n, int l, const FieldSpec& f) {
  if (l % 2 == 0) throw std::invalid_argument("the H-form needs odd l");
  int big = l * (2 * n + 1), k = (l - 1) / 2, mid = l * n + k;
  Matrix p(f, big, big);
  for (int h = 0; h < big; ++h) {
    int q;
    if (h <= mid) q = h;
    else if (h < l * n + l) q = mid + l * n + l - (h - l * n);
    else q = mid + 1 + (h - l * n - l);
    p(q, h) = Scalar::one(f);
  }
  return p;
}

std::string count_to_string(const std::optional<int>& c) { return c ? std::to_string(*c) : "inf"; }

CaseTag classify_case(const ChainSpec& c, std::uint32_t characteristic) {
  c.validate();
  if (c.type != 'A') throw std::invalid_argument("case classification is for type A chains");
  if (c.repeat.empty()) throw std::invalid_argument("case classification needs a repeating block");
  auto count = [&](auto pred) -> std::optional<int> {
    for (const auto& s : c.repeat)
      if (pred(s)) return std::nullopt;
    int k = 0;
    for (const auto& s : c.prefix) k += pred(s) ? 1 : 0;
    return k;
  };
  CaseTag t;
  t.alpha = count([](const Signature& s) { return s.l > 1; });
  t.beta = count([](const Signature& s) { return s.r > 0; });
  t.gamma = count([](const Signature& s) { return s.z > 0; });
  if (t.alpha && t.beta && t.gamma) throw std::invalid_argument("the limit is finite-dimensional");
  // with finitely many z_i > 0, n_i mod p is eventually constant in its vanishing
  auto eventually_divides = [&](std::uint32_t p) {
    if (p == 0) return false;
    std::uint64_t r = static_cast<std::uint64_t>(c.n1) % p;
    std::size_t len = c.prefix.size() + c.repeat.size();
    for (std::size_t i = 1; i <= len; ++i) {
      Signature s = c.signature(static_cast<int>(i));
      r = (static_cast<std::uint64_t>(s.l + s.r) * r + static_cast<std::uint64_t>(s.z)) % p;
    }
    return r == 0;
  };
  if (t.alpha && t.beta) t.tag = "1";
  else if (!t.gamma) t.tag = "2";
  else if (!t.beta) t.tag = characteristic == 2 && eventually_divides(2) ? "3b" : "3a";
  else t.tag = eventually_divides(characteristic) ? "4b" : "4a";
  return t;
}

NormalizedChain normalize_signatures(const ChainSpec& c) {
  c.validate();
  if (c.type != 'A') throw std::invalid_argument("signature normalization is for type A chains");
  NormalizedChain out;
  out.chain = c;
  out.chain.prefix.clear();
  out.chain.repeat.clear();
  int k = 0;
  out.flips.push_back(k);
  auto step = [&](Signature s) {
    if (s.l < s.r) {
      s = flip(s);
      k ^= 1;
    }
    out.flips.push_back(k);
    return s;
  };
  for (const auto& s : c.prefix) out.chain.prefix.push_back(step(s));
  for (const auto& s : c.repeat) out.chain.repeat.push_back(step(s));
  return out;
}

bool check_point(const TruncatedPoint& p) {
  try {
    for (std::size_t i = 0; i < p.levels.size(); ++i) {
      GroupType g = p.chain.group(static_cast<int>(i) + 1);
      if (p.levels[i].rows() != g.size() || p.levels[i].cols() != g.size()) return false;
      if (g.letter != 'A' && !algebra_membership(g, p.levels[i])) return false;
      if (i == 0) continue;
      Embedding e = chain_embedding(p.chain, static_cast<int>(i));
      if (!dual_equal(e.source, project_dual(e, p.levels[i]), p.levels[i - 1])) return false;
    }
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

Scalar trace_invariant(const TruncatedPoint& p) {
  if (p.chain.type != 'A') throw std::invalid_argument("the trace invariant is for type A chains");
  if (p.levels.empty()) throw std::invalid_argument("empty point");
  if (!check_point(p)) throw std::invalid_argument("incompatible point");
  const FieldSpec& f = p.levels[0].field();
  std::uint32_t ch = f.characteristic();
  bool defined = ch != 0 && !p.chain.repeat.empty();
  for (const auto& s : p.chain.repeat)
    if (s.z != 0 || (ch != 2 && s.r != 0)) defined = false;
  if (defined) {
    ChainSpec probe = p.chain;
    std::uint64_t r = static_cast<std::uint64_t>(probe.n1) % ch;
    std::size_t len = probe.prefix.size() + probe.repeat.size();
    for (std::size_t i = 1; i <= len; ++i) {
      Signature s = probe.signature(static_cast<int>(i));
      r = (static_cast<std::uint64_t>(s.l + s.r) * r + static_cast<std::uint64_t>(s.z)) % ch;
    }
    defined = r == 0;
  }
  if (!defined) return Scalar::zero(f);
  std::optional<Scalar> tr;
  for (std::size_t i = p.chain.prefix.size(); i < p.levels.size(); ++i) {
    if (p.chain.n(static_cast<int>(i) + 1) % static_cast<int>(ch) != 0) continue;
    Scalar t = p.levels[i].trace();
    if (tr && *tr != t) throw std::logic_error("trace is not stable along the point");
    tr = t;
  }
  if (!tr) throw std::invalid_argument("point too short to reach the stable levels");
  return *tr;
}

}  // namespace locdiag
