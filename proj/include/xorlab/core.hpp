// Dense finite-dimensional quantum linear algebra.
//
// Everything here works on small dense complex matrices (dimension at most a
// few hundred). States, projectors and measurements are validated value types:
// constructing one checks its invariants and throws on violation.

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace xorlab {

using Complex = std::complex<double>;
using ComplexMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Rng = std::mt19937_64;

namespace tol {
inline constexpr double kAlgebraic = 1e-12;
inline constexpr double kPsd = 1e-10;
inline constexpr double kSolver = 1e-6;
}  // namespace tol

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// A documented precondition of an operation does not hold for the given input.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Value types

class PureState {
 public:
  // Throws PreconditionError unless the vector has unit norm within 1e-12.
  explicit PureState(ComplexVector amplitudes);

  // Rescales an arbitrary nonzero vector to unit norm.
  static PureState normalized(const ComplexVector& v);
  static PureState basis(std::size_t dim, std::size_t index);

  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
  const ComplexVector& amplitudes() const { return amps_; }

 private:
  ComplexVector amps_;
};

class DensityOperator {
 public:
  // Hermitian within 1e-12, unit trace within 1e-12, min eigenvalue >= -1e-10.
  // The stored matrix is the exact Hermitian part of the input.
  explicit DensityOperator(const ComplexMatrix& m);

  static DensityOperator from_pure(const PureState& psi);
  // Divides a nonzero positive semidefinite operator by its trace.
  static DensityOperator normalized(const ComplexMatrix& m);
  static DensityOperator maximally_mixed(std::size_t dim);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }

 private:
  ComplexMatrix m_;
};

class Projector {
 public:
  // Hermitian and ||M^2 - M||_F <= 1e-10.
  explicit Projector(const ComplexMatrix& m);

  // Orthogonal projector onto the span of the given (not necessarily
  // orthonormal) column vectors.
  static Projector onto_span(const ComplexMatrix& columns);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }
  Projector complement() const;

 private:
  ComplexMatrix m_;
};

class Povm {
 public:
  // Each element PSD within 1e-10, elements summing to identity within 1e-10.
  // Labels default to the outcome index written in decimal.
  explicit Povm(std::vector<ComplexMatrix> elements,
                std::vector<std::string> labels = {});

  static Povm from_projectors(std::span<const Projector> projectors);
  // Projective measurement in the computational basis of `dim`.
  static Povm computational(std::size_t dim);

  std::size_t dim() const;
  std::size_t size() const { return elements_.size(); }
  const ComplexMatrix& operator[](std::size_t k) const { return elements_[k]; }
  const std::vector<ComplexMatrix>& elements() const { return elements_; }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  std::vector<ComplexMatrix> elements_;
  std::vector<std::string> labels_;
};

// Register structure of a multipartite Hilbert space. Registers are numbered
// from 0 in tensor-product order (register 0 is the most significant factor).
class SplitSystem {
 public:
  explicit SplitSystem(std::vector<std::size_t> dims,
                       std::vector<std::size_t> alice_registers = {});

  static SplitSystem bipartite(std::size_t alice_dim, std::size_t bob_dim);

  const std::vector<std::size_t>& dims() const { return dims_; }
  const std::vector<std::size_t>& alice_registers() const { return alice_; }
  std::vector<std::size_t> bob_registers() const;
  std::size_t total_dim() const;
  std::size_t dim_of(std::span<const std::size_t> registers) const;

 private:
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> alice_;
};

// ---------------------------------------------------------------------------
// Checks

bool is_finite(const ComplexMatrix& m);
// max |m - m^dagger| entry.
double hermiticity_defect(const ComplexMatrix& m);
double min_eigenvalue(const ComplexMatrix& m);
// ||U^dagger U - I||_F
double unitarity_defect(const ComplexMatrix& u);
ComplexMatrix hermitian_part(const ComplexMatrix& m);

// ---------------------------------------------------------------------------
// Operations

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector tensor(const ComplexVector& a, const ComplexVector& b);
PureState tensor(const PureState& a, const PureState& b);

// Trace out every register not listed in `keep`. The kept registers appear in
// ascending register order in the result.
ComplexMatrix partial_trace(const ComplexMatrix& m,
                            std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep);
DensityOperator partial_trace(const DensityOperator& rho,
                              const SplitSystem& sys,
                              std::span<const std::size_t> keep);
// Reduced state of a pure state on the kept registers.
DensityOperator reduced_state(const PureState& psi, const SplitSystem& sys,
                              std::span<const std::size_t> keep);

// Reorders tensor factors: register k of the result is register order[k] of
// the input.
ComplexVector permute_registers(const ComplexVector& v,
                                std::span<const std::size_t> dims,
                                std::span<const std::size_t> order);

struct EigenDecomposition {
  RealVector values;      // descending
  ComplexMatrix vectors;  // column k belongs to values[k]
};

// Throws PreconditionError if `m` is not Hermitian within 1e-10.
EigenDecomposition hermitian_eig(const ComplexMatrix& m);

// Projector onto the eigenspaces of a Hermitian matrix with eigenvalue >= 0
// (kernel included) and the positive part of the matrix.
ComplexMatrix nonnegative_eigenprojector(const ComplexMatrix& m);
ComplexMatrix positive_part(const ComplexMatrix& m);
ComplexMatrix psd_sqrt(const ComplexMatrix& m);
// Sum of singular values of a Hermitian matrix.
double trace_norm(const ComplexMatrix& m);

// Ancilla register first, system second.
PureState purify(const DensityOperator& rho);

// Root fidelity Tr sqrt(sqrt(rho) sigma sqrt(rho)); |<psi|phi>| for pure states.
double fidelity(const DensityOperator& rho, const DensityOperator& sigma);

// Unitary on the `act_on` registers (ascending order) transporting phi to psi
// up to global phase. Throws PreconditionError when the reduced states on the
// complementary registers differ by more than 1e-8 in Frobenius norm.
ComplexMatrix uhlmann_unitary(const PureState& phi, const PureState& psi,
                              const SplitSystem& sys,
                              std::span<const std::size_t> act_on);

// Applies an operator on a subset of registers (ascending order) of a pure
// state, identity elsewhere.
ComplexVector apply_on_registers(const ComplexMatrix& op, const ComplexVector& v,
                                 std::span<const std::size_t> dims,
                                 std::span<const std::size_t> registers);

// min over phases of ||a - e^{i theta} b||
double phase_distance(const ComplexVector& a, const ComplexVector& b);

// ---------------------------------------------------------------------------
// Haar sampling. Deterministic for a given generator state.

PureState sample_pure_state(std::size_t dim, Rng& rng);
ComplexMatrix sample_unitary(std::size_t dim, Rng& rng);
Projector sample_projector(std::size_t dim, std::size_t rank, Rng& rng);
// Reduced state of a Haar pure state on dim x rank: a random density operator
// of rank at most `rank`.
DensityOperator sample_density(std::size_t dim, std::size_t rank, Rng& rng);

// Independent generator for task `index` of a run seeded with `master`.
Rng derive_rng(std::uint64_t master, std::uint64_t index);

// ---------------------------------------------------------------------------
// Bit strings. Coordinate i of a string is bit i of the integer; the textual
// form lists coordinates left to right.

std::string bitstring(std::uint64_t value, unsigned width);
std::uint64_t parse_bitstring(const std::string& s);

}  // namespace xorlab
