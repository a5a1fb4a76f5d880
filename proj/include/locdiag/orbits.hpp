#pragma once

#include <map>
#include <optional>
#include <vector>

#include "locdiag/chains.hpp"
#include "locdiag/pencil.hpp"

namespace locdiag {

// g with (g P g^{-1})_{[n],[n]} = Q, for P in gl_{2n} of rank k < n and rk(Q) <= k
Matrix topleft_realization(const Matrix& p, const Matrix& q);

// g_1..g_l with k < rk(sum g_i P_i g_i^{-1}) = rk(sum, I) <= 3k; every P_i of rank k >= 1, n >= 6k
std::vector<Matrix> raise_sum_rank(const std::vector<Matrix>& ps);

enum class SearchMode { exhaustive, sampled };
// true when det((gPg^{-1})_{[k],[k]}) = 0 for every conjugate tried.
// Exhaustive mode walks GL_n(F_q) and cross-checks the verdict against rk(P) < k.
bool minor_vanishing_test(const Matrix& p, int k, SearchMode mode, int trials = 200, Rng* rng = nullptr,
                          std::uint64_t budget = 1000000);

struct OrbitClosure {
  bool dense = true;  // no stratum below n/2 detected at this level
  std::optional<Scalar> lambda;
  int rank = 0;
  int level = 0;   // matrix size the verdict was made at
  int regime = 0;  // strata are reported only for rank < regime / 2
};
OrbitClosure classify_orbit_closure(const Matrix& p);
json to_json(const OrbitClosure& o);

// {P | rk(P, I) <= k} union {P | rk(P - lambda I) <= bound} over the exceptional entries.
// k = -1 with no entries is the empty set.
struct ClosedSetDescriptor {
  FieldSpec field;
  int k = -1;
  std::map<Scalar, int> exceptional;

  static ClosedSetDescriptor empty(const FieldSpec& f) { return {f, -1, {}}; }
  static ClosedSetDescriptor tuple_rank(const FieldSpec& f, int k) { return {f, k, {}}; }
  static ClosedSetDescriptor shift(const Scalar& lambda, int bound) { return {lambda.field(), -1, {{lambda, bound}}}; }
  int bound(const Scalar& lambda) const;  // max(k, exceptional bound)
  bool operator==(const ClosedSetDescriptor& o) const = default;
};

ClosedSetDescriptor descriptor_canonicalize(const ClosedSetDescriptor& a);
ClosedSetDescriptor descriptor_union(const ClosedSetDescriptor& a, const ClosedSetDescriptor& b);
ClosedSetDescriptor descriptor_intersect(const ClosedSetDescriptor& a, const ClosedSetDescriptor& b);
// a contains b
bool descriptor_contains(const ClosedSetDescriptor& a, const ClosedSetDescriptor& b);
json to_json(const ClosedSetDescriptor& d);
ClosedSetDescriptor descriptor_from_json(const json& j, const FieldSpec& f);

// first index after which the descending chain is constant
std::size_t chain_stabilization(const std::vector<ClosedSetDescriptor>& chain);

// Level-(i+1) conjugator g for a type A chain with l_i + r_i >= 2, such that the level-i
// projection of g P g^{-1} has tuple rank above rk(P, I) = k. Needs 1 <= k and 6k <= n_i.
struct TupleRankLift {
  Matrix g;
  Matrix projected;
  int k = 0, lifted = 0;
};
TupleRankLift tuple_rank_lift(const ChainSpec& c, int level, const Matrix& p, Rng& rng, int attempts = 200);

// skew-symmetric normal form: h with Q = h Diag(J, .., J, 0) h^T, J = [[0,1],[-1,0]]
Matrix skew_normal_form(const Matrix& q);

// g over Q(t) with lim_{t->0} (g R g^T, g W) = (Q, V)
Matrix degeneration_witness(const Matrix& r, const Matrix& w, const Matrix& q, const Matrix& v);

}  // namespace locdiag
