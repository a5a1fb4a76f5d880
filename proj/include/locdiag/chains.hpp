#pragma once

#include <optional>
#include <string>
#include <vector>

#include "locdiag/io.hpp"
#include "locdiag/linalg.hpp"

namespace locdiag {

struct not_member : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// SL_n, O_{2n+1}, Sp_{2n}, O_{2n}
struct GroupType {
  char letter = 'A';
  int n = 1;
  int size() const;
  std::string to_string() const;
  bool operator==(const GroupType&) const = default;
};

// [[0,0,I],[0,1,0],[I,0,0]] for B, [[0,I],[-I,0]] for C, [[0,I],[I,0]] for D
Matrix form_matrix(const GroupType& g, const FieldSpec& f);
// -J X^T J^{-1}; its fixed points are the Lie algebra
Matrix form_involution(const GroupType& g, const Matrix& x);
bool algebra_membership(const GroupType& g, const Matrix& m);
bool group_membership(const GroupType& g, const Matrix& m);
Matrix random_group_element(const GroupType& g, const FieldSpec& f, Rng& rng, int word_length);
// a point of the dual space: any matrix for A, a Lie algebra element otherwise
Matrix random_dual_element(const GroupType& g, const FieldSpec& f, Rng& rng);
// equality in the dual space (modulo scalars for A)
bool dual_equal(const GroupType& g, const Matrix& a, const Matrix& b);

struct Signature {
  int l = 1, r = 0, z = 0;
  bool operator==(const Signature&) const = default;
};
// signature of outer after inner
Signature compose(const Signature& outer, const Signature& inner);
inline Signature flip(const Signature& s) { return {s.r, s.l, s.z}; }

// Eventually periodic chain: levels 1, 2, ... use prefix then repeat forever.
struct ChainSpec {
  char type = 'A';
  int n1 = 1;
  std::vector<Signature> prefix, repeat;

  Signature signature(int level) const;  // of the embedding G_level -> G_{level+1}
  int n(int level) const;
  GroupType group(int level) const { return {type, n(level)}; }
  void validate() const;
  static int next_n(char type, int n, const Signature& s);
};
json chain_to_json(const ChainSpec& c);
ChainSpec chain_from_json(const json& j);

// Copy j sends source coordinate a to target coordinate pos[a];
// uncovered target coordinates carry the trivial summands.
struct Embedding {
  struct Copy {
    bool dual = false;
    std::vector<int> pos;
  };
  GroupType source, target;
  std::vector<Copy> copies;
  Signature signature() const;
};

Embedding standard_embedding(const GroupType& source, const Signature& s);
inline Embedding chain_embedding(const ChainSpec& c, int level) { return standard_embedding(c.group(level), c.signature(level)); }
Embedding compose(const Embedding& outer, const Embedding& inner);

Matrix embed_group(const Embedding& e, const Matrix& g);
Matrix embed_algebra(const Embedding& e, const Matrix& x);
Matrix project_dual(const Embedding& e, const Matrix& m);
// a preimage under project_dual
Matrix lift_dual(const Embedding& e, const Matrix& m);

// J_H for the H-form of size l(2n+1), and the permutation P with P J_H P^T the type B form
Matrix h_form(int n, int l, const FieldSpec& f);
Matrix h_form_permutation(int n, int l, const FieldSpec& f);

struct CaseTag {
  std::string tag;
  std::optional<int> alpha, beta, gamma;  // nullopt is infinity
};
CaseTag classify_case(const ChainSpec& c, std::uint32_t characteristic);
std::string count_to_string(const std::optional<int>& c);

struct NormalizedChain {
  ChainSpec chain;
  std::vector<int> flips;  // k_i for the levels of prefix and one repeat block
};
NormalizedChain normalize_signatures(const ChainSpec& c);

struct TruncatedPoint {
  ChainSpec chain;
  std::vector<Matrix> levels;  // levels 1..size
};
bool check_point(const TruncatedPoint& p);
// the characteristic is that of the level matrices
Scalar trace_invariant(const TruncatedPoint& p);

}  // namespace locdiag
