#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "locdiag/io.hpp"

namespace locdiag {

// undirected multigraph, loops allowed; edges refer to vertices by label
struct Multigraph {
  std::vector<std::string> vertices;
  std::vector<std::pair<std::string, std::string>> edges;

  int index(const std::string& v) const;  // -1 when absent
  bool has_vertex(const std::string& v) const { return index(v) >= 0; }
  bool has_loop(const std::string& v) const;
  bool empty() const { return vertices.empty() && edges.empty(); }
  void validate() const;  // throws invalid_argument on dangling endpoints or duplicate labels
  std::vector<std::vector<std::string>> components() const;
};

enum class Rule { remove_edge, remove_looped_vertex, migrate_edge };

// remove_edge: edge = {a, b}
// remove_looped_vertex: vertex = v
// migrate_edge: edge {v, w} at looped v becomes a loop at w (vertex = v, target = w)
struct ReductionStep {
  Rule rule = Rule::remove_edge;
  std::pair<std::string, std::string> edge;
  std::string vertex, target;
  bool operator==(const ReductionStep&) const = default;
};
using ReductionCertificate = std::vector<ReductionStep>;

struct Obstruction {
  std::vector<std::string> component;  // connected, loop-free
};

// false (graph untouched) when the step's precondition fails
bool apply_step(Multigraph& g, const ReductionStep& s);
// every applicable step, one per distinct edge/vertex choice
std::vector<ReductionStep> applicable_steps(const Multigraph& g);

// Looped vertices are cleared in label order: push each non-loop edge at v to a loop at
// its other end (rule 3), then delete v (rule 2). Any loop-free component is an obstruction.
std::variant<ReductionCertificate, Obstruction> reduce(const Multigraph& g);
bool replay(const Multigraph& g, const ReductionCertificate& cert);

struct IncidenceCheck {
  bool surjective = false;
  int rank = 0;
  Matrix matrix;
};
// |V| x |E| matrix of (x_e) -> (sum_{e at v} x_e)_v, loops counted once
IncidenceCheck incidence_rank_check(const Multigraph& g, const FieldSpec& f);

// graph of d_{(R,S)}phi from the char 2 density argument; vertices "E[i,j]", (i,j) != (n,n)
Multigraph char2_gamma(int n);

json to_json(const Multigraph& g);
Multigraph graph_from_json(const json& j);
json to_json(const ReductionCertificate& c);
ReductionCertificate certificate_from_json(const json& j);

}  // namespace locdiag
