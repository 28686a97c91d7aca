// Quantum encodings of string pairs (x0, x1) and how well their parts can be
// learned from one copy.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>

#include "xorlab/core.hpp"

namespace xorlab::encodings {

struct EncodingEntry {
  std::uint64_t x0 = 0;
  std::uint64_t x1 = 0;
  double prior = 0.0;
  DensityOperator state;
};

// Pairs not listed have prior zero.
struct XorEncoding {
  unsigned n = 1;
  std::vector<EncodingEntry> entries;

  std::size_t dim() const;
  // Priors sum to 1 within 1e-12, states share one dimension, labels fit in
  // n bits and are not repeated.
  void validate() const;
};

// Uniform prior over all 4^n pairs; states[x0 + 2^n x1].
XorEncoding uniform_encoding(unsigned n, const std::vector<DensityOperator>& states);

// Label of an entry for a learning task.
using Target = std::function<std::uint64_t(std::uint64_t x0, std::uint64_t x1)>;

Target target_x0();
Target target_x1();
Target target_xor();
Target target_pair(unsigned n);
// (x_c)_i = (x_{c_i})_i
Target target_mixed(std::uint64_t c);

struct LearnResult {
  double value = 0.0;        // achieved by an explicit measurement
  double upper_bound = 0.0;  // equal to value for two labels
  std::size_t labels = 0;    // labels with positive prior
  bool degenerate = false;   // one label only; value is 1
};

// Optimal probability of guessing target(x0, x1): Helstrom for two labels,
// the discrimination program otherwise. Throws sdp::SolverError when the
// program is not solved to `tol`.
LearnResult learn(const XorEncoding& enc, const Target& target, double tol = 1e-7);
double learn_value_prob(const XorEncoding& enc, const Target& target, double tol = 1e-7);

// Measurement achieving learn(): element k guesses label k, for labels in
// [0, label_count). Labels with zero prior get whatever the solver assigns.
Povm optimal_measurement(const XorEncoding& enc, const Target& target,
                         std::size_t label_count, double tol = 1e-7);

// Largest prior mass of a single XOR value.
double xor_baseline(const XorEncoding& enc);
bool hides_xor(const XorEncoding& enc, double tol);

// Optimal two-outcome measurement guessing target x0 (which = 0) or x1
// (which = 1) of a bit encoding; the kernel of the difference goes to label 0.
Povm helstrom_measurement(const XorEncoding& enc, int which);

// Guess x0 + x1 by measuring Q, then P, then Q again: R_{x0,x1} = Q_x1 P_x0 Q_x1.
// Bits only. Q must be projective. Defaults are the Helstrom measurements.
double sequential_xor_strategy(const XorEncoding& enc,
                               const std::optional<Povm>& p_meas = std::nullopt,
                               const std::optional<Povm>& q_meas = std::nullopt);

struct LearningReport {
  unsigned n = 1;
  double p0 = 0.0;
  double p1 = 0.0;
  double c = 0.0;
  double p_xor_optimal = 0.0;
  std::optional<double> p_xor_sequential;  // bits only
  double p_pair = 0.0;
  // Certified upper ends of the two optima; equal to the values for bits.
  double p_xor_upper = 0.0;
  double p_pair_upper = 0.0;
  double bit_bound = 0.0;     // (2c - 1)^2
  double string_bound = 0.0;  // c (2c - 1)^2
  bool bit_ok = true;         // p_xor >= (2c-1)^2, asserted for n = 1
  bool string_ok = true;      // p_xor >= p_pair >= c(2c-1)^2, asserted when c >= 1/2
  bool string_asserted = false;
  bool theorem1_ok = true;
  double solver_gap = 0.0;  // largest certified gap among program solves
};

LearningReport theorem1_check(const XorEncoding& enc);

// The four qubit states Bob holds in the optimal CHSH strategy.
XorEncoding canonical_bbbw_encoding();

// 1/2 + 1/2 sqrt(q^2 + (1-q)^2)
double weighted_decoding_bound(double q);

// ---------------------------------------------------------------------------
// Random encodings

// Random-rank Haar density operators of dimension `dim` with Dirichlet(1)
// priors over all pairs.
XorEncoding sample_encoding(unsigned n, std::size_t dim, Rng& rng);

// Noisy superpositions of |x0> and F|x1> (F the Fourier transform) in
// dimension 2^n, with Dirichlet(1) priors. Both strings tend to be learnable.
XorEncoding sample_structured_encoding(unsigned n, Rng& rng);

// XOR-hiding encoding obtained from a random CHSH_n strategy with local
// dimension `local_dim`. Every XOR value has prior 2^-n.
XorEncoding sample_hiding_encoding(unsigned n, std::size_t local_dim, Rng& rng);

}  // namespace xorlab::encodings
