#pragma once

#include <optional>
#include <vector>

#include "locdiag/io.hpp"
#include "locdiag/linalg.hpp"

namespace locdiag {

struct ShiftRank {
  std::optional<Scalar> lambda;
  int rank = 0;
};

// min over lambda of rank(P - lambda I); ties go to 0, then to the smaller scalar
ShiftRank shift_rank(const Matrix& p);
// rank of the pencil (P, I)
int tuple_rank_identity(const Matrix& p);

struct PencilRank {
  int rank = 0;
  std::vector<Scalar> witness;  // projective point, first nonzero coordinate 1
};

// Points of P^{k-1}(F_q) in order: leading-one position left to right,
// then the trailing coordinates lexicographically.
void for_each_projective_point(const FieldSpec& f, int k, const std::function<bool(const std::vector<Scalar>&)>& visit);
PencilRank pencil_rank_enumerate(const std::vector<Matrix>& tuple, std::uint64_t budget = 1000000);

struct GLTable {
  FieldSpec field;
  int n = 0;
  std::vector<Matrix> elements, inverses;
  static GLTable build(const FieldSpec& f, int n, std::uint64_t budget = 1000000);
};

struct OffdiagWitness {
  Matrix g;
  std::vector<int> rows, cols;  // 0-based index sets K, L
  int block_rank = 0;
};
struct OffdiagResult {
  bool holds = true;
  std::optional<OffdiagWitness> witness;
  std::uint64_t checked = 0;
};

OffdiagResult offdiag_exhaustive(const Matrix& p, int k, int m, const GLTable* table = nullptr);
OffdiagResult offdiag_sampled(const Matrix& p, int k, int m, int trials, Rng& rng);

// pencil ranks of the leading j x j truncations, j = 1..n_max
std::vector<int> projection_stabilization(const std::vector<Matrix>& tuple, int n_max);

json to_json(const ShiftRank& r);
json to_json(const PencilRank& r);
json to_json(const OffdiagResult& r);

}  // namespace locdiag
