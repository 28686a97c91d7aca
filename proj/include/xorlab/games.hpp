// Two-player non-local games of the CHSH family and quantum strategies for
// them.
//
// Inputs and outputs are integer labels. For the string games, label v stands
// for the bit string whose coordinate i is bit i of v. The win predicate is
// tabulated once at construction.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "xorlab/core.hpp"

namespace xorlab::encodings {
struct XorEncoding;
}

namespace xorlab::games {

// A relabelling of Alice's (input, output) pairs and Bob's (input, output)
// pairs that leaves the game invariant. Pair (x, a) has flat index
// x * alice_outputs + a, and likewise for Bob. Games list commuting
// involutions; they generate the symmetry group used by the moment-matrix
// relaxation.
struct GameSymmetry {
  std::vector<std::size_t> alice;
  std::vector<std::size_t> bob;
};

struct TwoPlayerGame {
  std::string name;
  std::vector<double> alice_dist;  // p(x)
  std::vector<double> bob_dist;    // p(y)
  std::size_t alice_outputs = 0;
  std::size_t bob_outputs = 0;
  std::vector<std::uint8_t> table;  // V(x, y, a, b), see win()
  std::vector<GameSymmetry> symmetries;

  using Predicate = std::function<bool(std::size_t x, std::size_t y, std::size_t a,
                                       std::size_t b)>;
  static TwoPlayerGame from_predicate(std::string name, std::vector<double> alice_dist,
                                      std::vector<double> bob_dist,
                                      std::size_t alice_outputs, std::size_t bob_outputs,
                                      const Predicate& predicate);

  std::size_t alice_inputs() const { return alice_dist.size(); }
  std::size_t bob_inputs() const { return bob_dist.size(); }
  bool win(std::size_t x, std::size_t y, std::size_t a, std::size_t b) const {
    return table[((x * bob_inputs() + y) * alice_outputs + a) * bob_outputs + b] != 0;
  }
  // p(x) p(y) V(x, y, a, b)
  double weight(std::size_t x, std::size_t y, std::size_t a, std::size_t b) const {
    return win(x, y, a, b) ? alice_dist[x] * bob_dist[y] : 0.0;
  }

  // Distributions sum to 1 within 1e-12 and the table has the right size.
  void validate() const;
};

TwoPlayerGame make_chsh();
// Alice gets x in {0,1}^n, Bob a bit y; win iff a_i + b_i = y x_i for all i.
TwoPlayerGame make_chsh_n(unsigned n);
// n parallel CHSH games; win iff a_i + b_i = x_i y_i for all i.
TwoPlayerGame make_chsh_tensor(unsigned n);
// CHSH with Bob's input distribution (q, 1 - q).
TwoPlayerGame make_weighted_chsh(double q);

// Same distributions, alphabets and predicate; names and symmetries ignored.
bool structurally_equal(const TwoPlayerGame& a, const TwoPlayerGame& b);

// ---------------------------------------------------------------------------
// Strategies

// Shared pure state on Alice's registers followed by Bob's. Alice's
// measurements act on the leading registers of `system`, Bob's on the rest.
struct QuantumStrategy {
  PureState state;
  SplitSystem system;
  std::vector<Povm> alice;  // one per Alice input
  std::vector<Povm> bob;    // one per Bob input

  std::size_t alice_dim() const;
  std::size_t bob_dim() const;
  // Registers, dimensions and POVM shapes are mutually consistent.
  void validate() const;
};

// P(a, b | x, y) at index ((x * ny + y) * na + a) * nb + b.
std::vector<double> joint_distribution(const QuantumStrategy& s);

// Throws DimensionError when the strategy's labels do not match the game.
double evaluate(const TwoPlayerGame& game, const QuantumStrategy& s);

// Largest change of one party's marginal output distribution under a change
// of the other party's input.
double signaling_defect(const QuantumStrategy& s);

// Bell state; Alice measures Z / X, Bob the eigenbases of (Z + X)/sqrt2 and
// (Z - X)/sqrt2. Wins CHSH with probability cos^2(pi/8).
QuantumStrategy canonical_chsh_strategy();

// Strategy for the product game: part i plays coordinate i. Combined input and
// output labels are mixed-radix numbers with part 0 least significant.
QuantumStrategy parallel_strategy(const std::vector<QuantumStrategy>& parts);

// Product state on one-dimensional registers with fixed outputs per input.
QuantumStrategy deterministic_strategy(std::size_t alice_outputs,
                                       std::size_t bob_outputs,
                                       const std::vector<std::size_t>& alice_choice,
                                       const std::vector<std::size_t>& bob_choice);

// Alice outputs 0, Bob outputs 0 on y = 0 and a guess g on y = 1; the best g
// by enumeration. Wins CHSH_n with probability 1/2 + 2^-(n+1).
QuantumStrategy guessing_strategy_chsh_n(unsigned n);

// Projective measurements in Haar-random bases on a Haar-random state.
QuantumStrategy random_strategy(const TwoPlayerGame& game, std::size_t alice_dim,
                                std::size_t bob_dim, Rng& rng);

// ---------------------------------------------------------------------------
// See-saw

struct SeesawResult {
  QuantumStrategy strategy;
  double value = 0.0;
  std::size_t best_restart = 0;
  std::vector<double> restart_values;
  // Value after every full round of the best restart.
  std::vector<double> trajectory;
};

// Alternating exact maximization over Bob's measurements, Alice's
// measurements and the shared state, from random projective starting points.
// Restarts use generators derived from one draw of `rng`; the best restart
// wins, the lowest index on ties.
SeesawResult seesaw(const TwoPlayerGame& game, std::size_t local_dim, std::size_t restarts,
                    std::size_t iters, Rng& rng);

// ---------------------------------------------------------------------------
// Analytic values

double upper_bound_chsh_n(unsigned n);          // 1/2 + 2^-(n+1)/2
double conjectured_value_chsh_n(unsigned n);    // 1/2 + 2^-n/2 / 2, reference only
double parallel_repetition_value(unsigned n);   // cos^2(pi/8)^n
double guessing_value_chsh_n(unsigned n);       // 1/2 + 2^-(n+1)

// ---------------------------------------------------------------------------
// Games and encodings

// Bob's conditional states after Alice measures input x with outcome a,
// relabelled (x0, x1) = (a, x + a). Branches of weight below 1e-14 are dropped.
encodings::XorEncoding encoding_from_strategy(const QuantumStrategy& s,
                                              const TwoPlayerGame& game);

// Strategy for CHSH_n whose value equals the encoding's average decoding
// probability. Requires the encoding to hide the XOR and to give every XOR
// value the same prior mass.
QuantumStrategy strategy_from_encoding(const encodings::XorEncoding& enc);

}  // namespace xorlab::games
