// Small dense semidefinite programming.
//
// Problems are posed over a block-diagonal Hermitian variable
// X = diag(X_1, ..., X_k), X_i PSD:
//
//     maximize (or minimize)  <C, X>   subject to   <A_j, X> = b_j,
//
// with <A, X> = Re Tr(A X). The solver is an ADMM splitting between the affine
// constraint set and the PSD cone, the cone projection done by eigenvalue
// clipping per block.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "xorlab/core.hpp"

namespace xorlab::games {
struct TwoPlayerGame;
}

namespace xorlab::sdp {

// One entry of a Hermitian coefficient matrix on a given block. Entries are
// given for row <= col; the (col, row) entry is implied as the conjugate.
// Diagonal entries must be real. Repeated entries add up.
struct SparseTerm {
  std::size_t block = 0;
  std::size_t row = 0;
  std::size_t col = 0;
  Complex value;
};

struct SdpConstraint {
  std::vector<SparseTerm> terms;
  double rhs = 0.0;
};

enum class Sense { maximize, minimize };

struct SdpProblem {
  std::vector<std::size_t> blocks;  // block dimensions
  std::vector<SparseTerm> objective;
  std::vector<SdpConstraint> constraints;
  Sense sense = Sense::maximize;
  // All data real; the variable is then restricted to real symmetric blocks.
  bool real = false;

  // Single-block problem; the common case.
  static SdpProblem single_block(std::size_t dim, Sense sense = Sense::maximize);

  // Upper-triangular terms of a dense Hermitian matrix placed on `block`.
  static std::vector<SparseTerm> terms_of(std::size_t block, const ComplexMatrix& m);
  void add_objective(std::size_t block, const ComplexMatrix& m);
  void add_constraint(std::size_t block, const ComplexMatrix& m, double rhs);

  // Throws DimensionError / PreconditionError when malformed.
  void validate() const;
};

enum class SdpStatus { optimal, max_iter, infeasible };
std::string to_string(SdpStatus s);

struct SdpSolution {
  std::vector<ComplexMatrix> primal;  // one PSD matrix per block
  double value = 0.0;                 // objective at `primal`
  double primal_residual = 0.0;       // ||A(X) - b|| / (1 + ||b||)
  double dual_residual = 0.0;
  double dual_value = 0.0;
  double dual_gap = 0.0;  // |primal - dual| / (1 + |primal| + |dual|)
  std::size_t iterations = 0;
  SdpStatus status = SdpStatus::max_iter;
};

struct SolverOptions {
  double tol = 1e-6;
  std::size_t max_iter = 50000;
  // Optional starting point, one matrix per block.
  std::optional<std::vector<ComplexMatrix>> warm_start;
};

SdpSolution solve(const SdpProblem& p, const SolverOptions& options);
SdpSolution solve(const SdpProblem& p, double tol = 1e-6, std::size_t max_iter = 50000);

// ---------------------------------------------------------------------------
// Minimum-error state discrimination

struct DiscriminationResult {
  double value = 0.0;        // success probability of `povm` (achievable)
  double upper_bound = 0.0;  // certified by a feasible dual point
  double pgm_value = 0.0;    // pretty-good measurement, a lower bound
  std::vector<ComplexMatrix> povm;
  SdpStatus status = SdpStatus::max_iter;
  std::size_t iterations = 0;
};

// Optimal success of guessing the label k of an ensemble given as weighted
// operators sigma_k = p_k rho_k (summing to a density operator).
DiscriminationResult discriminate(const std::vector<ComplexMatrix>& weighted,
                                  const SolverOptions& options = {});

// max over POVMs of sum_i priors_i Tr(E_i rho_i). Throws SolverError when the
// solver does not reach `tol`.
double discrimination(const std::vector<DensityOperator>& states,
                      const std::vector<double>& priors, double tol = 1e-6);

class SolverError : public Error {
 public:
  SolverError(const std::string& what, SdpStatus status)
      : Error(what), status_(status) {}
  SdpStatus status() const { return status_; }

 private:
  SdpStatus status_;
};

// Closed-form two-outcome optimum 1/2 (Tr a + Tr b) + 1/2 ||a - b||_1 for
// weighted operators a, b.
double helstrom_value(const ComplexMatrix& a, const ComplexMatrix& b);

// ---------------------------------------------------------------------------
// Level-1 moment-matrix relaxation of a two-player game

struct NpaResult {
  double value = 0.0;
  std::size_t moment_dim = 0;   // 1 + |X||A| + |Y||B|
  std::size_t group_order = 1;  // symmetry group used for block reduction
  std::vector<std::size_t> block_sizes;
  SdpSolution solution;
};

NpaResult npa1(const games::TwoPlayerGame& game, const SolverOptions& options = {});
// Throws SolverError unless the solver converges.
double npa1_value(const games::TwoPlayerGame& game, double tol = 1e-6);

}  // namespace xorlab::sdp
