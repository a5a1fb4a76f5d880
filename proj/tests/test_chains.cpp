#include "doctest.h"
#include "locdiag/chains.hpp"

using namespace locdiag;

namespace {

const FieldSpec Q = FieldSpec::qq(), F5 = FieldSpec::gf(5), F7 = FieldSpec::gf(7);

Matrix M(FieldSpec f, std::vector<std::vector<long>> rows) { return Matrix::from_ints(f, rows); }

struct Case {
  GroupType g;
  Signature s;
};

std::vector<Case> embedding_cases() {
  return {{{'A', 2}, {2, 0, 0}}, {{'A', 2}, {1, 1, 1}}, {{'A', 1}, {0, 2, 1}}, {{'A', 2}, {2, 1, 0}},
          {{'C', 1}, {1, 0, 1}}, {{'C', 2}, {3, 0, 0}}, {{'C', 1}, {2, 0, 2}}, {{'D', 1}, {2, 0, 1}},
          {{'D', 2}, {3, 0, 0}}, {{'B', 1}, {1, 0, 2}}, {{'B', 1}, {3, 0, 0}}, {{'B', 1}, {3, 0, 2}},
          {{'B', 2}, {3, 0, 4}}, {{'B', 1}, {2, 0, 1}}, {{'B', 1}, {2, 0, 3}}, {{'B', 0}, {4, 0, 1}},
          {{'B', 1}, {5, 0, 0}}};
}

// block (i,j) of an H-form matrix, blocks X_1..X_l (size n), U_1..U_l (size 1), Z_1..Z_l (size n)
struct HBlocks {
  int n, l;
  int start(char part, int i) const {
    if (part == 'X') return i * n;
    if (part == 'U') return l * n + i;
    return l * n + l + i * n;
  }
  int len(char part) const { return part == 'U' ? 1 : n; }
  Matrix get(const Matrix& m, char rp, int i, char cp, int j) const {
    return m.block(start(rp, i), start(cp, j), len(rp), len(cp));
  }
};

// the displayed block-sum map h_{2n+1,l} -> o_{2n+1}
Matrix h_projection_oracle(const Matrix& m, int n, int l) {
  HBlocks hb{n, l};
  const FieldSpec& f = m.field();
  Matrix out(f, 2 * n + 1, 2 * n + 1);
  const char parts[3] = {'X', 'U', 'Z'};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      Matrix acc(f, hb.len(parts[a]), hb.len(parts[b]));
      for (int j = 0; j < l; ++j) {
        // diagonal sums, except where exactly one side is Z: anti-diagonal
        bool anti = (parts[a] == 'Z') != (parts[b] == 'Z');
        int i = j, k = anti ? l - 1 - j : j;
        if (parts[a] == 'Z' && anti) std::swap(i, k);
        acc = acc + hb.get(m, parts[a], i, parts[b], k);
      }
      out.set_block(a == 0 ? 0 : (a == 1 ? n : n + 1), b == 0 ? 0 : (b == 1 ? n : n + 1), acc);
    }
  return out;
}

}  // namespace

TEST_CASE("membership examples") {
  CHECK(algebra_membership({'A', 2}, M(Q, {{1, 0}, {0, -1}})));
  CHECK(!algebra_membership({'A', 2}, Matrix::identity(Q, 2)));
  Matrix sp = M(Q, {{1, 2, 3, 4}, {5, 6, 4, 7}, {8, 9, -1, -5}, {9, 1, -2, -6}});
  CHECK(algebra_membership({'C', 2}, sp));
  sp(0, 3) = Scalar::from_int(Q, 0);
  CHECK(!algebra_membership({'C', 2}, sp));
  CHECK(group_membership({'A', 2}, M(Q, {{0, 1}, {-1, 0}})));
  CHECK(!group_membership({'A', 2}, M(Q, {{2, 0}, {0, 1}})));
  CHECK(group_membership({'C', 2}, M(Q, {{1, 0, 2, 3}, {0, 1, 3, 5}, {0, 0, 1, 0}, {0, 0, 0, 1}})));
  CHECK(!group_membership({'C', 2}, M(Q, {{1, 0, 2, 3}, {0, 1, 4, 5}, {0, 0, 1, 0}, {0, 0, 0, 1}})));
  CHECK(group_membership({'D', 2}, M(Q, {{1, 0, 0, 3}, {0, 1, -3, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}})));
  CHECK_THROWS_AS(algebra_membership({'A', 3}, Matrix::identity(Q, 2)), std::invalid_argument);
  CHECK(form_matrix({'B', 1}, Q) == M(Q, {{0, 0, 1}, {0, 1, 0}, {1, 0, 0}}));
}

TEST_CASE("random group elements") {
  Rng rng(3);
  CHECK(random_group_element({'C', 2}, F5, rng, 0) == Matrix::identity(F5, 4));
  for (int i = 0; i < 500; ++i) {
    Matrix g = random_group_element({'C', 2}, F5, rng, 6);
    CHECK(group_membership({'C', 2}, g));
  }
  for (char t : {'A', 'B', 'C', 'D'})
    for (int n = 1; n <= 3; ++n)
      for (FieldSpec f : {F5, F7, Q}) {
        GroupType g{t, n};
        Matrix x = random_group_element(g, f, rng, 5);
        CHECK(group_membership(g, x));
        CHECK(group_membership(g, inverse(x)));
        if (t != 'A') {
          CHECK(algebra_membership(g, random_dual_element(g, f, rng)));
          Matrix y = Matrix::random(f, g.size(), g.size(), rng);
          CHECK(algebra_membership(g, y + form_involution(g, y)));
        }
      }
  CHECK_THROWS_AS(random_group_element({'D', 2}, FieldSpec::gf(2), rng, 3), unsupported_field);
  Matrix c2 = random_group_element({'C', 2}, FieldSpec::gf(2), rng, 10);
  CHECK(group_membership({'C', 2}, c2));
}

TEST_CASE("signature composition") {
  CHECK(compose(Signature{2, 1, 3}, Signature{1, 1, 1}) == Signature{3, 3, 6});
  CHECK(compose(Signature{1, 0, 0}, Signature{2, 1, 4}) == Signature{2, 1, 4});
  for (const auto& c : embedding_cases()) CHECK(standard_embedding(c.g, c.s).signature() == c.s);
  CHECK_THROWS_AS(standard_embedding({'B', 1}, {2, 0, 2}), std::invalid_argument);
  CHECK_THROWS_AS(standard_embedding({'C', 1}, {1, 1, 0}), std::invalid_argument);
  CHECK(ChainSpec::next_n('B', 1, {3, 0, 2}) == 5);
  CHECK(ChainSpec::next_n('A', 2, {2, 1, 1}) == 7);
}

TEST_CASE("embeddings are homomorphisms into the target group") {
  Rng rng(11);
  GroupType sl2{'A', 2};
  Matrix a = M(Q, {{2, 1}, {3, 2}});
  Matrix big = embed_group(standard_embedding(sl2, {2, 0, 0}), a);
  CHECK(big == Matrix::diag({a, a}));
  Matrix mixed = embed_group(standard_embedding(sl2, {1, 1, 1}), a);
  CHECK(mixed == Matrix::diag({a, inverse(a).transpose(), Matrix::identity(Q, 1)}));
  CHECK_THROWS_AS(embed_group(standard_embedding(sl2, {2, 0, 0}), M(Q, {{2, 0}, {0, 1}})), not_member);
  for (const auto& c : embedding_cases())
    for (FieldSpec f : {F7, Q}) {
      Embedding e = standard_embedding(c.g, c.s);
      CHECK(embed_group(e, Matrix::identity(f, c.g.size())) == Matrix::identity(f, e.target.size()));
      for (int trial = 0; trial < 10; ++trial) {
        Matrix g = random_group_element(c.g, f, rng, 4), h = random_group_element(c.g, f, rng, 4);
        Matrix eg = embed_group(e, g), eh = embed_group(e, h);
        CHECK(group_membership(e.target, eg));
        CHECK(embed_group(e, g * h) == eg * eh);
        CHECK(embed_group(e, inverse(g)) == inverse(eg));
        Matrix x = random_dual_element(c.g, f, rng);
        if (c.g.letter != 'A') CHECK(algebra_membership(e.target, embed_algebra(e, x)));
      }
    }
}

TEST_CASE("dual projection") {
  Rng rng(5);
  Matrix p = M(Q, {{1, 2}, {3, 4}}), p2 = M(Q, {{0, 5}, {1, 1}});
  Embedding doubling = standard_embedding({'A', 2}, {2, 0, 0});
  CHECK(project_dual(doubling, Matrix::diag({p, p2})) == p + p2);
  Embedding mixed = standard_embedding({'A', 2}, {1, 1, 0});
  Matrix big = Matrix::random(Q, 4, 4, rng);
  Matrix pr = project_dual(mixed, big);
  CHECK(pr(0, 1) == big(0, 1) - big(3, 2));
  CHECK(pr == big.block(0, 0, 2, 2) - big.block(2, 2, 2, 2).transpose());

  Embedding c11 = standard_embedding({'C', 1}, {1, 0, 1});
  Matrix sp4 = random_dual_element({'C', 2}, Q, rng);
  CHECK(project_dual(c11, sp4) == sp4.select({0, 2}, {0, 2}));
  CHECK_THROWS_AS(project_dual(c11, Matrix::identity(Q, 4)), std::invalid_argument);

  for (const auto& c : embedding_cases())
    for (FieldSpec f : {F7, Q}) {
      Embedding e = standard_embedding(c.g, c.s);
      for (int trial = 0; trial < 10; ++trial) {
        Matrix m = random_dual_element(e.target, f, rng);
        Matrix x = project_dual(e, m);
        if (c.g.letter != 'A') CHECK(algebra_membership(c.g, x));
        Matrix y = random_dual_element(c.g, f, rng);
        Matrix lifted = lift_dual(e, y);
        if (c.g.letter != 'A') CHECK(algebra_membership(e.target, lifted));
        CHECK(project_dual(e, lifted) == y);
        // trace adjointness against the Lie algebra map
        Matrix z = random_dual_element(c.g, f, rng);
        CHECK((x * z).trace() == (m * embed_algebra(e, z)).trace());
      }
    }
}

TEST_CASE("equivariance") {
  Rng rng(17);
  for (const auto& c : embedding_cases())
    for (FieldSpec f : {F7, Q}) {
      Embedding e = standard_embedding(c.g, c.s);
      int trials = f == F7 ? 200 : 20;
      for (int trial = 0; trial < trials; ++trial) {
        Matrix g = random_group_element(c.g, f, rng, 3);
        Matrix m = random_dual_element(e.target, f, rng);
        Matrix eg = embed_group(e, g);
        CHECK(project_dual(e, eg * m * inverse(eg)) == g * project_dual(e, m) * inverse(g));
      }
    }
}

TEST_CASE("type B block-sum maps") {
  Rng rng(23);
  for (int n = 1; n <= 2; ++n)
    for (int l : {1, 3, 5}) {
      Matrix jh = h_form(n, l, Q), perm = h_form_permutation(n, l, Q);
      GroupType big{'B', (l * (2 * n + 1) - 1) / 2};
      CHECK(perm * jh * perm.transpose() == form_matrix(big, Q));
      for (int zp : {0, 1, 2}) {
        Embedding e = standard_embedding({'B', n}, {l, 0, 2 * zp});
        for (int trial = 0; trial < 10; ++trial) {
          Matrix m = random_dual_element(e.target, Q, rng);
          // the (1, 2z) projection is a principal selection
          std::vector<int> keep;
          int mid = big.n;
          for (int a = 0; a < mid; ++a) keep.push_back(a);
          keep.push_back(mid + zp);
          for (int a = 0; a < mid; ++a) keep.push_back(mid + zp + 1 + a);
          Matrix o = m.select(keep, keep);
          CHECK(algebra_membership(big, o));
          Matrix h = perm.transpose() * o * perm;
          CHECK((h * jh + jh * h.transpose()).is_zero());
          CHECK(project_dual(e, m) == h_projection_oracle(h, n, l));
        }
      }
    }
}

TEST_CASE("composition of embeddings") {
  Rng rng(29);
  std::vector<std::pair<GroupType, std::pair<Signature, Signature>>> cases = {
      {{'A', 1}, {{2, 1, 1}, {1, 2, 0}}}, {{'C', 1}, {{2, 0, 1}, {3, 0, 0}}}, {{'B', 1}, {{3, 0, 2}, {2, 0, 1}}}};
  for (const auto& [g, sigs] : cases) {
    Embedding e1 = standard_embedding(g, sigs.first);
    Embedding e2 = standard_embedding(e1.target, sigs.second);
    Embedding e = compose(e2, e1);
    CHECK(e.signature() == compose(sigs.second, sigs.first));
    for (int trial = 0; trial < 10; ++trial) {
      Matrix x = random_group_element(g, F7, rng, 4);
      CHECK(embed_group(e, x) == embed_group(e2, embed_group(e1, x)));
      Matrix m = random_dual_element(e.target, F7, rng);
      CHECK(project_dual(e, m) == project_dual(e1, project_dual(e2, m)));
    }
  }
}

TEST_CASE("case classification") {
  ChainSpec c{'A', 1, {}, {{1, 0, 1}}};
  CHECK(classify_case(c, 0).tag == "1");
  c.repeat = {{2, 0, 1}};
  auto t = classify_case(c, 0);
  CHECK(t.tag == "2");
  CHECK((!t.alpha && !t.gamma && t.beta == 0));
  c = {'A', 2, {}, {{2, 1, 0}}};
  CHECK(classify_case(c, 2).tag == "3b");
  CHECK(classify_case(c, 3).tag == "3a");
  c.n1 = 1;
  CHECK(classify_case(c, 2).tag == "3a");
  c = {'A', 1, {}, {{2, 0, 0}}};
  CHECK(classify_case(c, 2).tag == "4b");
  CHECK(classify_case(c, 3).tag == "4a");
  CHECK(classify_case(c, 0).tag == "4a");
  c = {'A', 1, {{1, 0, 1}, {1, 0, 1}}, {{3, 0, 0}}};
  t = classify_case(c, 3);
  CHECK(t.tag == "4b");
  CHECK(t.gamma == 2);
  CHECK_THROWS_AS(classify_case({'A', 1, {{2, 1, 1}}, {{1, 0, 0}}}, 0), std::invalid_argument);
  CHECK_THROWS_AS(classify_case({'C', 1, {}, {{2, 0, 0}}}, 0), std::invalid_argument);

  // dropping a prefix level and merging consecutive repeat entries keep the tag
  Rng rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    ChainSpec r{'A', static_cast<int>(rng.range(1, 4)), {}, {}};
    auto rand_sig = [&] {
      Signature s{static_cast<int>(rng.range(0, 2)), static_cast<int>(rng.range(0, 1)), static_cast<int>(rng.range(0, 1))};
      if (s.l + s.r == 0) s.l = 1;
      return s;
    };
    for (int i = rng.range(0, 2); i > 0; --i) r.prefix.push_back(rand_sig());
    for (int i = 0; i < 2; ++i) r.repeat.push_back(rand_sig());
    r = normalize_signatures(r).chain;
    std::uint32_t ch = std::vector<std::uint32_t>{0, 2, 3}[rng.below(3)];
    CaseTag base;
    try {
      base = classify_case(r, ch);
    } catch (const std::invalid_argument&) {
      continue;
    }
    if (!r.prefix.empty()) {
      ChainSpec d = r;
      d.n1 = r.n(2);
      d.prefix.erase(d.prefix.begin());
      CHECK(classify_case(d, ch).tag == base.tag);
    }
    ChainSpec m = r;
    m.repeat = {compose(r.repeat[1], r.repeat[0])};
    CHECK(classify_case(m, ch).tag == base.tag);
  }
}

TEST_CASE("signature normalization") {
  ChainSpec c{'A', 1, {}, {{0, 1, 0}}};
  auto nc = normalize_signatures(c);
  CHECK(nc.chain.repeat == std::vector<Signature>{{1, 0, 0}});
  ChainSpec done{'A', 2, {{2, 1, 0}}, {{1, 0, 1}, {3, 3, 0}}};
  auto same = normalize_signatures(done);
  CHECK(same.chain.prefix == done.prefix);
  CHECK(same.chain.repeat == done.repeat);
  Rng rng(37);
  for (int trial = 0; trial < 200; ++trial) {
    ChainSpec r{'A', static_cast<int>(rng.range(1, 3)), {}, {}};
    auto rand_sig = [&] {
      Signature s{static_cast<int>(rng.range(0, 2)), static_cast<int>(rng.range(0, 2)), static_cast<int>(rng.range(0, 1))};
      if (s.l + s.r == 0) s.r = 1;
      return s;
    };
    for (int i = rng.range(0, 2); i > 0; --i) r.prefix.push_back(rand_sig());
    for (int i = rng.range(1, 3); i > 0; --i) r.repeat.push_back(rand_sig());
    auto out = normalize_signatures(r);
    std::size_t len = out.chain.prefix.size() + out.chain.repeat.size();
    REQUIRE(out.flips.size() == len + 1);
    for (std::size_t i = 1; i <= 3 * len; ++i) {
      Signature got = out.chain.signature(static_cast<int>(i)), orig = r.signature(static_cast<int>(i));
      CHECK(got.l >= got.r);
      CHECK(got.z == orig.z);
      if (i <= len) CHECK(got == ((out.flips[i - 1] + out.flips[i]) % 2 ? flip(orig) : orig));
      CHECK(out.chain.n(static_cast<int>(i)) == r.n(static_cast<int>(i)));
    }
    auto twice = normalize_signatures(out.chain);
    CHECK(twice.chain.prefix == out.chain.prefix);
    CHECK(twice.chain.repeat == out.chain.repeat);
  }
}

TEST_CASE("truncated points") {
  Rng rng(41);
  for (char t : {'A', 'B', 'C', 'D'}) {
    ChainSpec c{t, 1, {}, {{t == 'A' ? 2 : 3, t == 'A' ? 1 : 0, t == 'B' ? 2 : 1}}};
    TruncatedPoint zero{c, {}};
    for (int lvl = 1; lvl <= 3; ++lvl) zero.levels.push_back(Matrix(F7, c.group(lvl).size(), c.group(lvl).size()));
    CHECK(check_point(zero));
    // project a random top level downwards
    TruncatedPoint p{c, std::vector<Matrix>(3)};
    p.levels[2] = random_dual_element(c.group(3), F7, rng);
    for (int lvl = 2; lvl >= 1; --lvl) p.levels[lvl - 1] = project_dual(chain_embedding(c, lvl), p.levels[lvl]);
    CHECK(check_point(p));
    TruncatedPoint bad = p;
    int s = c.group(2).size();
    Matrix e = Matrix::elementary(F7, s, s, 0, s - 1);
    bad.levels[1] = bad.levels[1] + (t == 'A' ? e : e + form_involution(c.group(2), e));
    CHECK(!check_point(bad));
    if (t == 'A') {
      TruncatedPoint shifted = p;
      shifted.levels[1] = shifted.levels[1] + Matrix::identity(F7, s);
      CHECK(check_point(shifted));
    }
  }
}

TEST_CASE("trace invariant") {
  FieldSpec f2 = FieldSpec::gf(2);
  ChainSpec c{'A', 2, {}, {{2, 0, 0}}};
  TruncatedPoint p{c, {Matrix::elementary(f2, 2, 2, 0, 0)}};
  for (int lvl = 1; lvl <= 3; ++lvl) p.levels.push_back(lift_dual(chain_embedding(c, lvl), p.levels.back()));
  CHECK(check_point(p));
  CHECK(trace_invariant(p).is_one());
  TruncatedPoint zero{c, {Matrix(f2, 2, 2), Matrix(f2, 4, 4)}};
  CHECK(trace_invariant(zero).is_zero());
  ChainSpec padded{'A', 2, {}, {{2, 0, 1}}};
  TruncatedPoint q{padded, {Matrix::elementary(f2, 2, 2, 0, 0)}};
  q.levels.push_back(lift_dual(chain_embedding(padded, 1), q.levels[0]));
  CHECK(trace_invariant(q).is_zero());
  TruncatedPoint broken = p;
  broken.levels[2](0, 1) += Scalar::one(f2);
  CHECK_THROWS_AS(trace_invariant(broken), std::invalid_argument);
}

TEST_CASE("chain json") {
  ChainSpec c{'B', 2, {{3, 0, 2}}, {{2, 0, 1}}};
  json j = chain_to_json(c);
  ChainSpec back = chain_from_json(j);
  CHECK(back.type == 'B');
  CHECK(back.prefix == c.prefix);
  CHECK(back.repeat == c.repeat);
  CHECK(chain_to_json(back) == j);
  CHECK_THROWS(chain_from_json(json::parse(R"({"type":"B","n1":1,"repeat":[[2,0,2]]})")));
}
