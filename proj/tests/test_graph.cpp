#include <set>

#include "doctest.h"
#include "locdiag/graph.hpp"

using namespace locdiag;

namespace {

Multigraph random_graph(Rng& rng, int max_vertices, int max_edges) {
  Multigraph g;
  int n = static_cast<int>(rng.range(1, max_vertices));
  for (int i = 0; i < n; ++i) g.vertices.push_back("v" + std::to_string(i));
  int m = static_cast<int>(rng.range(0, max_edges));
  for (int e = 0; e < m; ++e) {
    auto a = g.vertices[rng.below(n)];
    auto b = rng.below(4) == 0 ? a : g.vertices[rng.below(n)];
    g.edges.push_back({a, b});
  }
  return g;
}

using State = std::pair<std::vector<std::string>, std::multiset<std::pair<std::string, std::string>>>;
State key(const Multigraph& g) {
  State s;
  s.first = g.vertices;
  std::sort(s.first.begin(), s.first.end());
  for (const auto& e : g.edges) s.second.insert(std::minmax(e.first, e.second));
  return s;
}

// every graph reachable by the three rules
void reachable(const Multigraph& g, std::set<State>& seen, std::vector<Multigraph>& out) {
  if (!seen.insert(key(g)).second) return;
  out.push_back(g);
  for (const auto& s : applicable_steps(g)) {
    Multigraph h = g;
    REQUIRE(apply_step(h, s));
    reachable(h, seen, out);
  }
}

// GF(2) rank of the incidence map by bitmask elimination
int gf2_incidence_rank(const Multigraph& g) {
  std::vector<std::uint64_t> cols;
  for (const auto& e : g.edges) cols.push_back((std::uint64_t{1} << g.index(e.first)) | (std::uint64_t{1} << g.index(e.second)));
  int r = 0;
  for (int bit = 0; bit < static_cast<int>(g.vertices.size()); ++bit) {
    auto it = std::find_if(cols.begin() + r, cols.end(), [&](std::uint64_t c) { return c >> bit & 1u; });
    if (it == cols.end()) continue;
    std::swap(*it, cols[r]);
    for (std::size_t i = 0; i < cols.size(); ++i)
      if (static_cast<int>(i) != r && (cols[i] >> bit & 1u)) cols[i] ^= cols[r];
    ++r;
  }
  return r;
}

bool has_loop_everywhere(const Multigraph& g) {
  for (const auto& c : g.components())
    if (std::none_of(c.begin(), c.end(), [&](const std::string& v) { return g.has_loop(v); })) return false;
  return true;
}

}  // namespace

TEST_CASE("reduce examples") {
  Multigraph one{{"v"}, {{"v", "v"}}};
  auto r = reduce(one);
  REQUIRE(std::holds_alternative<ReductionCertificate>(r));
  auto cert = std::get<ReductionCertificate>(r);
  REQUIRE(cert.size() == 1);
  CHECK(cert[0].rule == Rule::remove_looped_vertex);
  CHECK(cert[0].vertex == "v");

  Multigraph bare{{"v"}, {}};
  auto o = reduce(bare);
  REQUIRE(std::holds_alternative<Obstruction>(o));
  CHECK(std::get<Obstruction>(o).component == std::vector<std::string>{"v"});

  Multigraph path{{"a", "b", "c", "d"}, {{"a", "a"}, {"a", "b"}, {"b", "c"}, {"c", "d"}, {"d", "d"}}};
  auto p = reduce(path);
  REQUIRE(std::holds_alternative<ReductionCertificate>(p));
  CHECK(replay(path, std::get<ReductionCertificate>(p)));

  Multigraph two{{"a", "b", "c"}, {{"a", "a"}, {"b", "c"}}};
  auto t = reduce(two);
  REQUIRE(std::holds_alternative<Obstruction>(t));
  CHECK(std::get<Obstruction>(t).component == std::vector<std::string>{"b", "c"});

  CHECK_THROWS_AS(reduce(Multigraph{{"a"}, {{"a", "z"}}}), std::invalid_argument);
}

TEST_CASE("replay rejects bad certificates") {
  Multigraph path{{"a", "b", "c"}, {{"a", "a"}, {"a", "b"}, {"b", "c"}}};
  auto cert = std::get<ReductionCertificate>(reduce(path));
  CHECK(replay(path, cert));
  auto truncated = cert;
  truncated.pop_back();
  CHECK_FALSE(replay(path, truncated));
  Multigraph other{{"a", "b", "c"}, {{"c", "c"}, {"a", "b"}, {"b", "c"}}};
  CHECK_FALSE(replay(other, cert));
  // rule 3 refuses to move a loop and needs a loop at the source
  Multigraph g{{"a", "b"}, {{"a", "a"}, {"a", "b"}}};
  CHECK_FALSE(apply_step(g, {Rule::migrate_edge, {"a", "a"}, "a", "a"}));
  CHECK_FALSE(apply_step(g, {Rule::migrate_edge, {"a", "b"}, "b", "a"}));
  CHECK_FALSE(apply_step(g, {Rule::remove_looped_vertex, {}, "b", ""}));
  CHECK(apply_step(g, {Rule::remove_edge, {"b", "a"}, "", ""}));
  CHECK(g.edges.size() == 1);
}

TEST_CASE("certificate and graph json round trip") {
  Rng rng(11);
  for (int t = 0; t < 100; ++t) {
    auto g = random_graph(rng, 6, 10);
    auto g2 = graph_from_json(json::parse(to_json(g).dump()));
    CHECK(g2.vertices == g.vertices);
    CHECK(g2.edges == g.edges);
    auto r = reduce(g);
    if (auto* c = std::get_if<ReductionCertificate>(&r)) {
      auto c2 = certificate_from_json(json::parse(to_json(*c).dump()));
      CHECK(c2 == *c);
      CHECK(replay(g2, c2));
    }
  }
  CHECK(to_json(Multigraph{{"a", "b"}, {{"a", "a"}, {"a", "b"}}}).dump() ==
        R"({"edges":[["a","a"],["a","b"]],"vertices":["a","b"]})");
}

TEST_CASE("incidence rank") {
  auto loop = incidence_rank_check(Multigraph{{"v"}, {{"v", "v"}}}, FieldSpec::gf(2));
  CHECK(loop.surjective);
  CHECK(loop.matrix == Matrix::from_ints(FieldSpec::gf(2), {{1}}));
  auto edge = incidence_rank_check(Multigraph{{"v", "w"}, {{"v", "w"}}}, FieldSpec::gf(2));
  CHECK_FALSE(edge.surjective);
  CHECK(edge.rank == 1);
  CHECK(edge.matrix == Matrix::from_ints(FieldSpec::gf(2), {{1}, {1}}));
}

TEST_CASE("reducible graphs have surjective incidence maps") {
  Rng rng(2024);
  int certified = 0;
  for (int t = 0; t < 500; ++t) {
    auto g = random_graph(rng, 8, 14);
    auto r = reduce(g);
    bool loops = has_loop_everywhere(g);
    CHECK(std::holds_alternative<ReductionCertificate>(r) == loops);
    int r2 = gf2_incidence_rank(g);
    CHECK(incidence_rank_check(g, FieldSpec::gf(2)).rank == r2);
    if (auto* c = std::get_if<ReductionCertificate>(&r)) {
      ++certified;
      CHECK(replay(g, *c));
      CHECK(r2 == static_cast<int>(g.vertices.size()));
      CHECK(incidence_rank_check(g, FieldSpec::gf(3)).surjective);
      CHECK(incidence_rank_check(g, FieldSpec::qq()).surjective);
    } else {
      auto comp = std::get<Obstruction>(r).component;
      CHECK_FALSE(comp.empty());
      for (const auto& v : comp) CHECK_FALSE(g.has_loop(v));
    }
  }
  CHECK(certified > 100);
}

TEST_CASE("loop-free components stay loop-free under every rule sequence") {
  Rng rng(7);
  for (int t = 0; t < 150; ++t) {
    auto g = random_graph(rng, 4, 4);
    std::set<State> seen;
    std::vector<Multigraph> all;
    reachable(g, seen, all);
    bool empty_reachable = std::any_of(all.begin(), all.end(), [](const Multigraph& h) { return h.empty(); });
    CHECK(empty_reachable == has_loop_everywhere(g));
    for (const auto& comp : g.components()) {
      if (std::any_of(comp.begin(), comp.end(), [&](const std::string& v) { return g.has_loop(v); })) continue;
      for (const auto& h : all)
        for (const auto& v : comp)
          CHECK_FALSE(h.has_loop(v));
    }
  }
}

TEST_CASE("char2 gamma") {
  CHECK_THROWS_AS(char2_gamma(1), std::invalid_argument);
  for (int n = 2; n <= 8; ++n) {
    auto g = char2_gamma(n);
    CAPTURE(n);
    CHECK(g.vertices.size() == static_cast<std::size_t>(n * n - 1));
    // every edge of E(Gamma) survives the quotient: (n^2 - n) + (n^2 - 1)
    CHECK(g.edges.size() == static_cast<std::size_t>(2 * n * n - n - 1));
    auto lab = [](int i, int j) { return "E[" + std::to_string(i) + "," + std::to_string(j) + "]"; };
    CHECK(g.has_loop(lab(1, 1)));
    for (int k = 2; k <= n; ++k) CHECK(g.has_loop(lab(k, 1)));
    for (int l = 1; l < n; ++l) CHECK(g.has_loop(lab(l, n)));
    auto r = reduce(g);
    REQUIRE(std::holds_alternative<ReductionCertificate>(r));
    CHECK(replay(g, std::get<ReductionCertificate>(r)));
    CHECK(gf2_incidence_rank(g) == n * n - 1);
    CHECK(incidence_rank_check(g, FieldSpec::gf(2)).surjective);
  }
}
