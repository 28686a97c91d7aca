// Two projective measurements applied in sequence to one pure state.
//
// With cos^2(alpha) = ||C psi||^2 >= 1/2 and cos^2(beta) = ||D psi||^2 >= 1/2,
// the probability that both measurements succeed or both fail,
//
//     ||C D psi||^2 + ||(1-C)(1-D) psi||^2,
//
// lies in [cos^2(alpha+beta), cos^2(alpha-beta)]. Its deviation from the
// product of the single-measurement statistics is the complementarity Gamma,
// bounded by sin(2 alpha) sin(2 beta) / 2.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "xorlab/core.hpp"

namespace xorlab::sequential {

inline constexpr double kBoundSlack = 1e-9;

struct SandwichReport {
  double alpha = 0.0;
  double beta = 0.0;
  double observed = 0.0;
  double lower = 0.0;  // cos^2(alpha + beta)
  double upper = 0.0;  // cos^2(alpha - beta)
  double margin_low = 0.0;   // observed - lower
  double margin_high = 0.0;  // upper - observed
  bool in_regime = false;    // both success probabilities >= 1/2

  bool violated() const {
    return margin_low < -kBoundSlack || margin_high < -kBoundSlack;
  }
};

struct GammaReport {
  double gamma = 0.0;
  double bound = 0.0;  // sin(2 beta) sin(2 alpha) / 2
  bool saturated_positive = false;
  bool saturated_negative = false;

  bool violated() const { return std::abs(gamma) > bound + kBoundSlack; }
};

// Computes the report without checking the success-probability precondition.
SandwichReport measure_sandwich(const PureState& psi, const Projector& c,
                                const Projector& d);

// Throws PreconditionError when ||C psi||^2 < 1/2 or ||D psi||^2 < 1/2.
SandwichReport sandwich_check(const PureState& psi, const Projector& c,
                              const Projector& d);
GammaReport gamma(const PureState& psi, const Projector& c, const Projector& d);

// ---------------------------------------------------------------------------
// Randomized sweep over Haar triples (psi, C, D)

struct SweepConfig {
  std::vector<std::size_t> dims{2, 4, 8};
  std::size_t samples = 10000;  // accepted samples per dimension
  std::uint64_t seed = 1;
  std::size_t shards = 8;  // per dimension; fixes the generator layout
};

struct SweepRecord {
  std::size_t dim = 0;
  std::size_t shard = 0;
  std::size_t index = 0;  // accepted-sample index within the shard
  std::size_t rank_c = 0;
  std::size_t rank_d = 0;
  SandwichReport sandwich;
  SandwichReport swapped;  // (psi, D, C)
  GammaReport gamma;
  bool pass = true;
  // Set only when pass is false so the triple can be reproduced.
  std::optional<PureState> psi;
  std::optional<Projector> c;
  std::optional<Projector> d;
};

struct DimSummary {
  std::size_t dim = 0;
  std::size_t accepted = 0;
  std::size_t attempted = 0;
  std::size_t sandwich_violations = 0;
  std::size_t gamma_violations = 0;
  std::size_t symmetry_violations = 0;
  // Samples outside the regime are recorded, never asserted.
  std::size_t outside_regime = 0;
  std::size_t outside_regime_out_of_bounds = 0;

  double acceptance_rate() const {
    return attempted == 0 ? 0.0 : static_cast<double>(accepted) / attempted;
  }
};

struct SweepResult {
  std::vector<SweepRecord> records;  // ordered by (dim, shard, index)
  std::vector<DimSummary> summaries;
  std::size_t violations() const;
};

SweepResult run_sweep(const SweepConfig& config);

}  // namespace xorlab::sequential
