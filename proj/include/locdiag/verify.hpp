#pragma once

#include <optional>
#include <string>
#include <vector>

#include "locdiag/chains.hpp"
#include "locdiag/io.hpp"

namespace locdiag {

enum class Verdict { pass, fail, statistical_pass };
std::string verdict_name(Verdict v);
Verdict verdict_from_name(const std::string& s);

// witness: a summary for pass verdicts, {"counterexample": ...} for fail
struct Report {
  std::string lemma;
  json params;
  Verdict verdict = Verdict::pass;
  json witness;
  std::int64_t ms = 0;
};
json to_json(const Report& r);
Report report_from_json(const json& j);
inline int exit_code(const Report& r) { return r.verdict == Verdict::fail ? 1 : 0; }

// part 'a': PQ + P^T Q^T covers gl_n (odd characteristic or Q).
// part 'b': over GF(2), rank of the derivative at (R, S) is n^2 - 1, cross-checked against char2_gamma.
// Sampling (trials set, or enumeration infeasible) solves for Q at random P and random targets.
Report verify_char2(char part, const FieldSpec& f, int n, std::optional<int> trials = std::nullopt,
                    std::uint64_t seed = 0);
// [X, Y] + lambda I covers gl_m
Report verify_commutator_scalar(const FieldSpec& f, int m, std::optional<int> trials = std::nullopt,
                                std::uint64_t seed = 0);

// id in 2, 3a, 4a, C, D, B1, B2; checked symbolically and at a random rational point.
// corrupt flips the sign of the parameter in the first expected block.
Report verify_conjugation_identity(const std::string& id, bool corrupt = false, std::uint64_t seed = 0);
std::vector<std::string> conjugation_identity_ids();

// lemma in sp, od, b: for elements beyond the rank bound, search the group for a conjugate that
// breaks the lemma's hypothesis. statistical-pass when the witness rate reaches min_rate.
struct RankBoundParams {
  std::string lemma = "sp";
  int n = 8, m = 1, l = 3;  // l only for b
  int trials = 20, attempts = 40;
  FieldSpec field = FieldSpec::gf(101);
  double min_rate = 0.95;
};
Report verify_rank_bound_samples(const RankBoundParams& p, std::uint64_t seed = 0);

// project_dual(Ad(embed(g)) M) = Ad(g) project_dual(M) on levels 1..levels
Report verify_equivariance(const ChainSpec& c, int levels, int trials, const FieldSpec& f, std::uint64_t seed = 0);

// The checks below back the remaining acceptance criteria.
Report verify_tuple_rank_oracle(const FieldSpec& f, int n_max);
Report verify_offdiag_criterion(int samples, std::uint64_t seed = 0);
Report verify_topleft(int instances, std::uint64_t seed = 0);
Report verify_raise_rank(int instances, std::uint64_t seed = 0);
Report verify_descriptor_lattice(int cases, std::uint64_t seed = 0);
Report verify_degeneration(int n_max, int k_max, int targets, std::uint64_t seed = 0);

// Dispatch by id with JSON parameters; missing parameters take defaults.
// The rng of each check derives from (seed, id). Throws invalid_argument on unknown ids or bad params.
Report verify(const std::string& id, const json& params, std::uint64_t seed);
std::vector<std::string> lemma_ids();

// config: {"checks":[{"lemma":"char2b","params":{"n":4}}, ...]}; missing "checks" runs nothing
json default_suite_config();
Report run_suite(const json& config, std::uint64_t seed);

}  // namespace locdiag
