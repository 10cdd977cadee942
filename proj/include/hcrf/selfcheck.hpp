#pragma once

#include <string>
#include <vector>

#include "hcrf/chain.hpp"
#include "hcrf/types.hpp"

namespace hcrf {

// Exhaustive reference implementations and the randomized suites built on
// them. Everything here is written as plain enumeration over explicit
// configurations and never calls into the dynamic programs it is used to
// check.

/// log sum over all K^L truth sequences of exp(joint score), observed weak
/// labels fixed. Direct enumeration.
double enum_clamped(const Matrix& emission, const Matrix& transition,
                    const std::vector<Matrix>& weak, const IntMatrix& grid);

/// log sum over all K^L truth sequences and all K^(#observed cells) weak
/// completions. Direct enumeration.
double enum_free(const Matrix& emission, const Matrix& transition,
                 const std::vector<Matrix>& weak, const IntMatrix& grid);

/// Best path by explicit prefix enumeration, reconstructed with the same
/// lowest-index tie rule the decoder documents.
ViterbiResult enum_viterbi(const Matrix& emission, const Matrix& transition);

struct RandomInstance {
  Matrix emission;
  Matrix transition;
  std::vector<Matrix> weak;
  IntMatrix grid;
  int observed_cells = 0;
};

/// Instance with parameters i.i.d. uniform [-2, 2] and per-cell missingness
/// at an instance-level rate drawn from [0.2, 0.8].
RandomInstance random_instance(Rng& rng, int len_min, int len_max, int k_min, int k_max,
                               int j_min, int j_max);

struct SuiteResult {
  std::string name;
  int cases = 0;
  int failures = 0;
  double worst = 0.0;  // largest error seen, in the suite's own units
  std::string detail;

  bool passed() const { return failures == 0 && cases > 0; }
};

/// Forward recursions vs enumeration, |delta| < tol on both terms.
SuiteResult run_dp_suite(int n_instances, std::uint64_t seed, double tol = 1e-8);

/// Every parameter gradient (log-linear backbone weights, transition
/// including the BEGIN row, all weak entries) vs central finite differences.
SuiteResult run_gradient_suite(int n_instances, std::uint64_t seed, double rel_tol = 1e-4,
                               double abs_floor = 1e-7, double fd_step = 1e-5);

/// Decoded path and score vs prefix enumeration, exact equality.
SuiteResult run_viterbi_suite(int n_instances, std::uint64_t seed);

}  // namespace hcrf
