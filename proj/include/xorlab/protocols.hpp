// Oblivious transfer built from XOR-hiding encodings, the coin-flipping and
// bit-commitment reductions, and the analytic cheating bounds.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "xorlab/encodings.hpp"

namespace xorlab::protocols {

enum class OtMode { bit, string, tensor };
std::string to_string(OtMode m);
OtMode parse_ot_mode(const std::string& s);

// Non-interactive OT: Alice draws (x0, x1) from the encoding and a, d1, d2
// uniformly, outputs
//     z0 = x_a + d1,  z1 = x_{1-a} + d2,
// and sends the quantum state together with (a, d1, d2). Bob learns z_b by
// learning x_{a+b}.
struct OtInstance {
  unsigned n = 1;
  encodings::XorEncoding encoding;
  OtMode mode = OtMode::bit;
  double honest_p = 0.0;
  // Bob's success for choice b, averaged over the masking branches
  // (string/bit modes) or for each choice string c (tensor mode).
  std::vector<double> per_choice;
  // max |P(z0, z1) - 4^-n| over Alice's outputs.
  double output_nonuniformity = 0.0;
};

// Throws PreconditionError unless the encoding hides the XOR within 1e-8.
OtInstance ot_from_encoding(const encodings::XorEncoding& enc);
OtInstance ot_from_encoding(const encodings::XorEncoding& enc, OtMode mode);

struct CheatReport {
  double honest_p = 0.0;
  double a_ot = 0.5;    // Alice guesses b
  double b_ot = 0.0;    // Bob learns z0 + z1
  double b_pair = 0.0;  // Bob learns (z0, z1)
  double theorem2_rhs = 0.0;  // a_ot (sqrt(b_ot) + 1)
  double kitaev_product = 0.0;  // a_ot times the coin-flip ceiling for Bob
  bool theorem2_ok = false;
};

// Bob's probabilities are computed branch by branch over all (a, d1, d2).
CheatReport ot_cheat_probs(const OtInstance& ot);

// Bob's view as one encoding of (z0, z1): the state tensored with a classical
// register holding (a, d1, d2). Dimension grows by 2^(2n+1).
encodings::XorEncoding masked_encoding(const OtInstance& ot);

struct CoinFlipReport {
  double honest_abort = 0.0;
  double a_cf = 0.0;
  double b_cf = 0.0;  // ceiling (sqrt(b_ot) + 1) / 2
  double kitaev_product = 0.0;
  bool kitaev_ok = false;
};

CoinFlipReport coinflip_from_ot(const OtInstance& ot);
CoinFlipReport coinflip_from_ot(const OtInstance& ot, const CheatReport& cheats);

struct TradeoffCurve {
  double t = 0.0;
  double a_bc = 0.0;  // 1/2 + t/2
  double b_bc = 0.0;  // (1 - (1 - 1/sqrt2) t)^2
};
TradeoffCurve tradeoff_curve(double t);

enum class BoundMode { bit, string };
std::string to_string(BoundMode m);
BoundMode parse_bound_mode(const std::string& s);

struct TradeoffBound {
  double bound = 0.0;
  double t_star = 0.0;
  double grid_bound = 0.0;  // grid search at step 1e-5
  double grid_t = 0.0;
};

// min over t in [0, 1] of max{1/2 + t/2, g(B(t))}, with g(B) = (2B-1)^2 for
// bits and B (2B-1)^2 for strings.
TradeoffBound ot_tradeoff_bound(BoundMode mode);
double tradeoff_g(BoundMode mode, double b);

struct BitCommitmentReport {
  double a_bc = 0.0;
  double b_bc_bound = 0.0;  // g^{-1}(b_ot) on [1/2, 1]
  TradeoffCurve curve;      // at t = 2 a_bc - 1
};

BitCommitmentReport bc_from_ot(const OtInstance& ot, BoundMode mode);
BitCommitmentReport bc_from_ot(const CheatReport& cheats, BoundMode mode);

// cos^2(pi/8)^n for tensor mode; 1/2 + 2^-(n+1)/2 for strings, except
// cos^2(pi/8) at n = 1.
double secure_ot_ceiling(unsigned n, OtMode mode);

}  // namespace xorlab::protocols
