#include "locdiag/graph.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "locdiag/linalg.hpp"

namespace locdiag {

namespace {

bool same_edge(const std::pair<std::string, std::string>& e, const std::string& a, const std::string& b) {
  return (e.first == a && e.second == b) || (e.first == b && e.second == a);
}

int find_edge(const Multigraph& g, const std::string& a, const std::string& b) {
  for (std::size_t i = 0; i < g.edges.size(); ++i)
    if (same_edge(g.edges[i], a, b)) return static_cast<int>(i);
  return -1;
}

std::string label(int i, int j) { return "E[" + std::to_string(i) + "," + std::to_string(j) + "]"; }

const char* rule_name(Rule r) {
  switch (r) {
    case Rule::remove_edge: return "remove_edge";
    case Rule::remove_looped_vertex: return "remove_looped_vertex";
    case Rule::migrate_edge: return "migrate_edge";
  }
  return "";
}

}  // namespace

int Multigraph::index(const std::string& v) const {
  auto it = std::find(vertices.begin(), vertices.end(), v);
  return it == vertices.end() ? -1 : static_cast<int>(it - vertices.begin());
}

bool Multigraph::has_loop(const std::string& v) const {
  return std::any_of(edges.begin(), edges.end(), [&](const auto& e) { return e.first == v && e.second == v; });
}

void Multigraph::validate() const {
  std::set<std::string> seen(vertices.begin(), vertices.end());
  if (seen.size() != vertices.size()) throw std::invalid_argument("duplicate vertex label");
  for (const auto& e : edges)
    if (!seen.count(e.first) || !seen.count(e.second))
      throw std::invalid_argument("edge endpoint not a vertex: " + e.first + "-" + e.second);
}

std::vector<std::vector<std::string>> Multigraph::components() const {
  std::vector<int> parent(vertices.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : edges) {
    int a = find(index(e.first)), b = find(index(e.second));
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::vector<std::string>> out;
  std::vector<int> slot(vertices.size(), -1);
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    int r = find(static_cast<int>(i));
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(out.size());
      out.emplace_back();
    }
    out[slot[r]].push_back(vertices[i]);
  }
  return out;
}

bool apply_step(Multigraph& g, const ReductionStep& s) {
  switch (s.rule) {
    case Rule::remove_edge: {
      int e = find_edge(g, s.edge.first, s.edge.second);
      if (e < 0) return false;
      g.edges.erase(g.edges.begin() + e);
      return true;
    }
    case Rule::remove_looped_vertex: {
      if (!g.has_vertex(s.vertex) || !g.has_loop(s.vertex)) return false;
      std::erase_if(g.edges, [&](const auto& e) { return e.first == s.vertex || e.second == s.vertex; });
      g.vertices.erase(g.vertices.begin() + g.index(s.vertex));
      return true;
    }
    case Rule::migrate_edge: {
      if (s.vertex == s.target || !g.has_loop(s.vertex)) return false;
      int e = find_edge(g, s.vertex, s.target);
      if (e < 0) return false;
      g.edges[e] = {s.target, s.target};
      return true;
    }
  }
  return false;
}

std::vector<ReductionStep> applicable_steps(const Multigraph& g) {
  std::vector<ReductionStep> out;
  std::set<std::pair<std::string, std::string>> distinct;
  for (const auto& e : g.edges) distinct.insert(std::minmax(e.first, e.second));
  for (const auto& e : distinct) out.push_back({Rule::remove_edge, e, "", ""});
  for (const auto& v : g.vertices) {
    if (!g.has_loop(v)) continue;
    out.push_back({Rule::remove_looped_vertex, {}, v, ""});
    for (const auto& e : distinct) {
      if (e.first == e.second) continue;
      if (e.first == v) out.push_back({Rule::migrate_edge, e, v, e.second});
      if (e.second == v) out.push_back({Rule::migrate_edge, e, v, e.first});
    }
  }
  return out;
}

std::variant<ReductionCertificate, Obstruction> reduce(const Multigraph& g0) {
  g0.validate();
  for (const auto& comp : g0.components())
    if (std::none_of(comp.begin(), comp.end(), [&](const std::string& v) { return g0.has_loop(v); }))
      return Obstruction{comp};

  Multigraph g = g0;
  ReductionCertificate cert;
  auto push = [&](ReductionStep s) {
    if (!apply_step(g, s)) throw std::logic_error("reduce produced an inapplicable step");
    cert.push_back(std::move(s));
  };
  // every component keeps a loop: migrations hand one to each neighbour of a deleted vertex
  while (!g.vertices.empty()) {
    std::string v;
    for (const auto& u : g.vertices)
      if (g.has_loop(u) && (v.empty() || u < v)) v = u;
    if (v.empty()) throw std::logic_error("reduce lost every loop");
    for (;;) {
      auto it = std::find_if(g.edges.begin(), g.edges.end(), [&](const auto& e) {
        return (e.first == v) != (e.second == v);
      });
      if (it == g.edges.end()) break;
      std::string w = it->first == v ? it->second : it->first;
      push({Rule::migrate_edge, std::minmax(v, w), v, w});
    }
    push({Rule::remove_looped_vertex, {}, v, ""});
  }
  return cert;
}

bool replay(const Multigraph& g0, const ReductionCertificate& cert) {
  Multigraph g = g0;
  for (const auto& s : cert)
    if (!apply_step(g, s)) return false;
  return g.empty();
}

IncidenceCheck incidence_rank_check(const Multigraph& g, const FieldSpec& f) {
  g.validate();
  IncidenceCheck out;
  out.matrix = Matrix(f, static_cast<int>(g.vertices.size()), static_cast<int>(g.edges.size()));
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    out.matrix(g.index(g.edges[e].first), static_cast<int>(e)) = Scalar::one(f);
    out.matrix(g.index(g.edges[e].second), static_cast<int>(e)) = Scalar::one(f);
  }
  out.rank = rank(out.matrix);
  out.surjective = out.rank == out.matrix.rows();
  return out;
}

Multigraph char2_gamma(int n) {
  if (n < 2) throw std::invalid_argument("char2_gamma needs n >= 2");
  Multigraph g;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      if (i != n || j != n) g.vertices.push_back(label(i, j));
  auto add = [&](std::vector<std::pair<int, int>> ends) {
    std::erase(ends, std::pair{n, n});
    if (ends.empty()) return;
    if (ends.size() == 2 && ends[0] == ends[1]) return;  // cancels in characteristic 2
    if (ends.size() == 1) ends.push_back(ends[0]);
    g.edges.push_back({label(ends[0].first, ends[0].second), label(ends[1].first, ends[1].second)});
  };
  // (E_ij, 0) -> E_{i,n+1-j} + E_{j,n+1-i}
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      if (i != j) add({{i, n + 1 - j}, {j, n + 1 - i}});
  // (0, E_kl) -> (1 - d_k1) E_{k-1,l} + (1 - d_ln) E_{l+1,k}
  for (int k = 1; k <= n; ++k)
    for (int l = 1; l <= n; ++l) {
      if (k == 1 && l == n) continue;
      std::vector<std::pair<int, int>> ends;
      if (k > 1) ends.push_back({k - 1, l});
      if (l < n) ends.push_back({l + 1, k});
      add(ends);
    }
  return g;
}

json to_json(const Multigraph& g) {
  json edges = json::array();
  for (const auto& e : g.edges) edges.push_back({e.first, e.second});
  return {{"vertices", g.vertices}, {"edges", edges}};
}

Multigraph graph_from_json(const json& j) {
  Multigraph g;
  g.vertices = j.at("vertices").get<std::vector<std::string>>();
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) throw std::invalid_argument("edge must be a pair of labels");
    g.edges.push_back({e[0].get<std::string>(), e[1].get<std::string>()});
  }
  g.validate();
  return g;
}

json to_json(const ReductionCertificate& c) {
  json out = json::array();
  for (const auto& s : c) {
    json step = {{"rule", rule_name(s.rule)}};
    if (s.rule != Rule::remove_looped_vertex) step["edge"] = {s.edge.first, s.edge.second};
    if (s.rule != Rule::remove_edge) step["vertex"] = s.vertex;
    if (s.rule == Rule::migrate_edge) step["to"] = s.target;
    out.push_back(step);
  }
  return out;
}

ReductionCertificate certificate_from_json(const json& j) {
  ReductionCertificate out;
  for (const auto& step : j) {
    ReductionStep s;
    std::string r = step.at("rule").get<std::string>();
    if (r == "remove_edge") s.rule = Rule::remove_edge;
    else if (r == "remove_looped_vertex") s.rule = Rule::remove_looped_vertex;
    else if (r == "migrate_edge") s.rule = Rule::migrate_edge;
    else throw std::invalid_argument("unknown rule " + r);
    if (step.contains("edge")) s.edge = {step["edge"].at(0).get<std::string>(), step["edge"].at(1).get<std::string>()};
    if (step.contains("vertex")) s.vertex = step["vertex"].get<std::string>();
    if (step.contains("to")) s.target = step["to"].get<std::string>();
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace locdiag
