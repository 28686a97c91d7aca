#include "xorlab/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace xorlab {

namespace {

std::size_t product(std::span<const std::size_t> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                         std::multiplies<>());
}

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionError(std::string(what) + ": expected a nonempty square matrix");
  }
}

void require_finite(const ComplexMatrix& m, const char* what) {
  if (!is_finite(m)) throw PreconditionError(std::string(what) + ": non-finite entry");
}

// Row-major strides of a register layout.
std::vector<std::size_t> strides_of(std::span<const std::size_t> dims) {
  std::vector<std::size_t> s(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) s[k - 1] = s[k] * dims[k];
  return s;
}

std::vector<std::size_t> complement_of(std::span<const std::size_t> keep,
                                       std::size_t count) {
  std::vector<char> kept(count, 0);
  for (auto r : keep) {
    if (r >= count) throw DimensionError("register index out of range");
    if (kept[r]) throw DimensionError("register listed twice");
    kept[r] = 1;
  }
  std::vector<std::size_t> rest;
  for (std::size_t r = 0; r < count; ++r) {
    if (!kept[r]) rest.push_back(r);
  }
  return rest;
}

}  // namespace

// ---------------------------------------------------------------------------

bool is_finite(const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

double hermiticity_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  return (m + m.adjoint()) * 0.5;
}

double min_eigenvalue(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(m),
                                                 Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double unitarity_defect(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) return INFINITY;
  return (u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols())).norm();
}

// ---------------------------------------------------------------------------

PureState::PureState(ComplexVector amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.size() == 0) throw DimensionError("PureState: empty amplitude vector");
  for (Eigen::Index i = 0; i < amps_.size(); ++i) {
    if (!std::isfinite(amps_(i).real()) || !std::isfinite(amps_(i).imag())) {
      throw PreconditionError("PureState: non-finite amplitude");
    }
  }
  if (std::abs(amps_.norm() - 1.0) > tol::kAlgebraic) {
    throw PreconditionError("PureState: amplitudes not normalized");
  }
}

PureState PureState::normalized(const ComplexVector& v) {
  const double n = v.norm();
  if (!(n > 0.0)) throw PreconditionError("PureState: zero vector");
  return PureState(v / n);
}

PureState PureState::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw DimensionError("PureState::basis: index out of range");
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return PureState(std::move(v));
}

DensityOperator::DensityOperator(const ComplexMatrix& m) {
  require_square(m, "DensityOperator");
  require_finite(m, "DensityOperator");
  if (hermiticity_defect(m) > tol::kAlgebraic) {
    throw PreconditionError("DensityOperator: not Hermitian");
  }
  m_ = hermitian_part(m);
  if (std::abs(m_.trace().real() - 1.0) > tol::kAlgebraic) {
    throw PreconditionError("DensityOperator: trace is not 1");
  }
  if (min_eigenvalue(m_) < -tol::kPsd) {
    throw PreconditionError("DensityOperator: not positive semidefinite");
  }
}

DensityOperator DensityOperator::from_pure(const PureState& psi) {
  const auto& a = psi.amplitudes();
  ComplexMatrix m = a * a.adjoint();
  return DensityOperator(m);
}

DensityOperator DensityOperator::normalized(const ComplexMatrix& m) {
  require_square(m, "DensityOperator::normalized");
  ComplexMatrix h = hermitian_part(m);
  const double t = h.trace().real();
  if (!(t > 0.0)) throw PreconditionError("DensityOperator::normalized: zero trace");
  return DensityOperator(h / t);
}

DensityOperator DensityOperator::maximally_mixed(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return DensityOperator(ComplexMatrix::Identity(d, d) / static_cast<double>(dim));
}

Projector::Projector(const ComplexMatrix& m) {
  require_square(m, "Projector");
  require_finite(m, "Projector");
  if (hermiticity_defect(m) > tol::kPsd) throw PreconditionError("Projector: not Hermitian");
  m_ = hermitian_part(m);
  if ((m_ * m_ - m_).norm() > tol::kPsd) {
    throw PreconditionError("Projector: not idempotent");
  }
}

Projector Projector::onto_span(const ComplexMatrix& columns) {
  if (columns.rows() == 0) throw DimensionError("Projector::onto_span: empty space");
  if (columns.cols() == 0) {
    return Projector(ComplexMatrix::Zero(columns.rows(), columns.rows()));
  }
  Eigen::ColPivHouseholderQR<ComplexMatrix> qr(columns);
  qr.setThreshold(1e-12);
  const auto rank = qr.rank();
  ComplexMatrix q = qr.householderQ();
  ComplexMatrix basis = q.leftCols(rank);
  return Projector(basis * basis.adjoint());
}

Projector Projector::complement() const {
  return Projector(ComplexMatrix::Identity(m_.rows(), m_.cols()) - m_);
}

Povm::Povm(std::vector<ComplexMatrix> elements, std::vector<std::string> labels)
    : elements_(std::move(elements)), labels_(std::move(labels)) {
  if (elements_.empty()) throw DimensionError("Povm: no elements");
  const auto d = elements_.front().rows();
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (auto& e : elements_) {
    require_square(e, "Povm element");
    require_finite(e, "Povm element");
    if (e.rows() != d) throw DimensionError("Povm: elements of different dimension");
    if (hermiticity_defect(e) > tol::kPsd) throw PreconditionError("Povm: element not Hermitian");
    e = hermitian_part(e);
    if (min_eigenvalue(e) < -tol::kPsd) throw PreconditionError("Povm: element not PSD");
    sum += e;
  }
  if ((sum - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > tol::kPsd) {
    throw PreconditionError("Povm: elements do not sum to identity");
  }
  if (labels_.empty()) {
    for (std::size_t k = 0; k < elements_.size(); ++k) labels_.push_back(std::to_string(k));
  }
  if (labels_.size() != elements_.size()) {
    throw DimensionError("Povm: label count differs from element count");
  }
}

Povm Povm::from_projectors(std::span<const Projector> projectors) {
  std::vector<ComplexMatrix> el;
  el.reserve(projectors.size());
  for (const auto& p : projectors) el.push_back(p.matrix());
  return Povm(std::move(el));
}

Povm Povm::computational(std::size_t dim) {
  std::vector<ComplexMatrix> el;
  const auto d = static_cast<Eigen::Index>(dim);
  for (Eigen::Index k = 0; k < d; ++k) {
    ComplexMatrix e = ComplexMatrix::Zero(d, d);
    e(k, k) = 1.0;
    el.push_back(std::move(e));
  }
  return Povm(std::move(el));
}

std::size_t Povm::dim() const { return static_cast<std::size_t>(elements_.front().rows()); }

SplitSystem::SplitSystem(std::vector<std::size_t> dims,
                         std::vector<std::size_t> alice_registers)
    : dims_(std::move(dims)), alice_(std::move(alice_registers)) {
  if (dims_.empty()) throw DimensionError("SplitSystem: no registers");
  for (auto d : dims_) {
    if (d == 0) throw DimensionError("SplitSystem: zero-dimensional register");
  }
  std::sort(alice_.begin(), alice_.end());
  complement_of(alice_, dims_.size());  // validates indices
}

SplitSystem SplitSystem::bipartite(std::size_t alice_dim, std::size_t bob_dim) {
  return SplitSystem({alice_dim, bob_dim}, {0});
}

std::vector<std::size_t> SplitSystem::bob_registers() const {
  return complement_of(alice_, dims_.size());
}

std::size_t SplitSystem::total_dim() const { return product(dims_); }

std::size_t SplitSystem::dim_of(std::span<const std::size_t> registers) const {
  std::size_t d = 1;
  for (auto r : registers) d *= dims_.at(r);
  return d;
}

// ---------------------------------------------------------------------------

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_finite(a, "tensor");
  require_finite(b, "tensor");
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexVector tensor(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

PureState tensor(const PureState& a, const PureState& b) {
  return PureState::normalized(tensor(a.amplitudes(), b.amplitudes()));
}

ComplexMatrix partial_trace(const ComplexMatrix& m,
                            std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep) {
  const std::size_t total = product(dims);
  if (m.rows() != m.cols() || static_cast<std::size_t>(m.rows()) != total) {
    throw DimensionError("partial_trace: matrix dimension differs from register product");
  }
  std::vector<std::size_t> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  const auto traced = complement_of(kept, dims.size());

  const auto strides = strides_of(dims);
  std::size_t dk = 1, dt = 1;
  for (auto r : kept) dk *= dims[r];
  for (auto r : traced) dt *= dims[r];

  // full index of (kept multi-index, traced multi-index)
  auto offsets = [&](const std::vector<std::size_t>& regs, std::size_t count) {
    std::vector<std::size_t> off(count, 0);
    for (std::size_t idx = 0; idx < count; ++idx) {
      std::size_t rem = idx, o = 0;
      for (std::size_t k = regs.size(); k-- > 0;) {
        const auto r = regs[k];
        o += (rem % dims[r]) * strides[r];
        rem /= dims[r];
      }
      off[idx] = o;
    }
    return off;
  };
  const auto kept_off = offsets(kept, dk);
  const auto traced_off = offsets(traced, dt);

  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(dk),
                                          static_cast<Eigen::Index>(dk));
  for (std::size_t t = 0; t < dt; ++t) {
    for (std::size_t i = 0; i < dk; ++i) {
      const auto row = static_cast<Eigen::Index>(kept_off[i] + traced_off[t]);
      for (std::size_t j = 0; j < dk; ++j) {
        out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +=
            m(row, static_cast<Eigen::Index>(kept_off[j] + traced_off[t]));
      }
    }
  }
  return out;
}

DensityOperator partial_trace(const DensityOperator& rho, const SplitSystem& sys,
                              std::span<const std::size_t> keep) {
  if (rho.dim() != sys.total_dim()) {
    throw DimensionError("partial_trace: state dimension differs from split system");
  }
  return DensityOperator::normalized(partial_trace(rho.matrix(), sys.dims(), keep));
}

DensityOperator reduced_state(const PureState& psi, const SplitSystem& sys,
                              std::span<const std::size_t> keep) {
  if (psi.dim() != sys.total_dim()) {
    throw DimensionError("reduced_state: state dimension differs from split system");
  }
  std::vector<std::size_t> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  const auto traced = complement_of(kept, sys.dims().size());
  std::vector<std::size_t> order = kept;
  order.insert(order.end(), traced.begin(), traced.end());
  const ComplexVector v = permute_registers(psi.amplitudes(), sys.dims(), order);
  const auto dk = static_cast<Eigen::Index>(sys.dim_of(kept));
  const auto dt = static_cast<Eigen::Index>(sys.dim_of(traced));
  Eigen::Map<const ComplexMatrix> mat(v.data(), dk, dt);
  return DensityOperator::normalized(mat * mat.adjoint());
}

ComplexVector permute_registers(const ComplexVector& v,
                                std::span<const std::size_t> dims,
                                std::span<const std::size_t> order) {
  const std::size_t total = product(dims);
  if (static_cast<std::size_t>(v.size()) != total || order.size() != dims.size()) {
    throw DimensionError("permute_registers: dimension mismatch");
  }
  std::vector<std::size_t> new_dims(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) new_dims[k] = dims[order[k]];
  const auto old_strides = strides_of(dims);
  const auto new_strides = strides_of(new_dims);
  // stride in the new layout of each old register
  std::vector<std::size_t> target(dims.size());
  std::vector<char> seen(dims.size(), 0);
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (order[k] >= dims.size() || seen[order[k]]) {
      throw DimensionError("permute_registers: order is not a permutation");
    }
    seen[order[k]] = 1;
    target[order[k]] = new_strides[k];
  }
  ComplexVector out(v.size());
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t dst = 0;
    for (std::size_t r = 0; r < dims.size(); ++r) {
      dst += ((idx / old_strides[r]) % dims[r]) * target[r];
    }
    out(static_cast<Eigen::Index>(dst)) = v(static_cast<Eigen::Index>(idx));
  }
  return out;
}

ComplexVector apply_on_registers(const ComplexMatrix& op, const ComplexVector& v,
                                 std::span<const std::size_t> dims,
                                 std::span<const std::size_t> registers) {
  std::vector<std::size_t> regs(registers.begin(), registers.end());
  std::sort(regs.begin(), regs.end());
  const auto rest = complement_of(regs, dims.size());
  std::size_t dr = 1;
  for (auto r : regs) dr *= dims[r];
  if (op.rows() != op.cols() || static_cast<std::size_t>(op.rows()) != dr) {
    throw DimensionError("apply_on_registers: operator dimension mismatch");
  }
  std::vector<std::size_t> order = regs;
  order.insert(order.end(), rest.begin(), rest.end());
  ComplexVector w = permute_registers(v, dims, order);
  const auto rows = static_cast<Eigen::Index>(dr);
  const auto cols = w.size() / rows;
  Eigen::Map<ComplexMatrix> mat(w.data(), rows, cols);
  ComplexMatrix applied = op * mat;
  mat = applied;
  // invert the permutation
  std::vector<std::size_t> new_dims(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) new_dims[k] = dims[order[k]];
  std::vector<std::size_t> inverse(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) inverse[order[k]] = k;
  return permute_registers(w, new_dims, inverse);
}

double phase_distance(const ComplexVector& a, const ComplexVector& b) {
  if (a.size() != b.size()) throw DimensionError("phase_distance: size mismatch");
  const Complex overlap = b.dot(a);  // <b|a>
  const double mag = std::abs(overlap);
  const Complex phase = mag > 0.0 ? overlap / mag : Complex(1.0, 0.0);
  return (a - phase * b).norm();
}

// ---------------------------------------------------------------------------

EigenDecomposition hermitian_eig(const ComplexMatrix& m) {
  require_square(m, "hermitian_eig");
  require_finite(m, "hermitian_eig");
  if (hermiticity_defect(m) > tol::kPsd) {
    throw PreconditionError("hermitian_eig: matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(m));
  if (es.info() != Eigen::Success) throw Error("hermitian_eig: eigensolver failed");
  const auto n = m.rows();
  EigenDecomposition out{RealVector(n), ComplexMatrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = es.eigenvalues()(n - 1 - k);
    out.vectors.col(k) = es.eigenvectors().col(n - 1 - k);
  }
  return out;
}

ComplexMatrix nonnegative_eigenprojector(const ComplexMatrix& m) {
  const auto eig = hermitian_eig(m);
  ComplexMatrix p = ComplexMatrix::Zero(m.rows(), m.cols());
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
    if (eig.values(k) >= 0.0) p += eig.vectors.col(k) * eig.vectors.col(k).adjoint();
  }
  return p;
}

ComplexMatrix positive_part(const ComplexMatrix& m) {
  const auto eig = hermitian_eig(m);
  ComplexMatrix p = ComplexMatrix::Zero(m.rows(), m.cols());
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
    if (eig.values(k) > 0.0) {
      p += eig.values(k) * (eig.vectors.col(k) * eig.vectors.col(k).adjoint());
    }
  }
  return p;
}

ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  const auto eig = hermitian_eig(m);
  ComplexMatrix p = ComplexMatrix::Zero(m.rows(), m.cols());
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
    if (eig.values(k) > 0.0) {
      p += std::sqrt(eig.values(k)) * (eig.vectors.col(k) * eig.vectors.col(k).adjoint());
    }
  }
  return p;
}

double trace_norm(const ComplexMatrix& m) {
  return hermitian_eig(m).values.cwiseAbs().sum();
}

PureState purify(const DensityOperator& rho) {
  const auto eig = hermitian_eig(rho.matrix());
  const auto d = static_cast<Eigen::Index>(rho.dim());
  ComplexVector v = ComplexVector::Zero(d * d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const double w = eig.values(k);
    if (w <= 0.0) continue;
    v += std::sqrt(w) * tensor(ComplexVector(eig.vectors.col(k)),
                               ComplexVector(eig.vectors.col(k)));
  }
  return PureState::normalized(v);
}

double fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionError("fidelity: dimension mismatch");
  const ComplexMatrix s = psd_sqrt(rho.matrix());
  const ComplexMatrix inner = hermitian_part(s * sigma.matrix() * s);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(inner, Eigen::EigenvaluesOnly);
  double f = 0.0;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    f += std::sqrt(std::max(0.0, es.eigenvalues()(k)));
  }
  return std::clamp(f, 0.0, 1.0);
}

ComplexMatrix uhlmann_unitary(const PureState& phi, const PureState& psi,
                              const SplitSystem& sys,
                              std::span<const std::size_t> act_on) {
  const auto& dims = sys.dims();
  if (phi.dim() != sys.total_dim() || psi.dim() != sys.total_dim()) {
    throw DimensionError("uhlmann_unitary: state dimension differs from split system");
  }
  std::vector<std::size_t> regs(act_on.begin(), act_on.end());
  std::sort(regs.begin(), regs.end());
  const auto rest = complement_of(regs, dims.size());
  std::vector<std::size_t> order = regs;
  order.insert(order.end(), rest.begin(), rest.end());

  const ComplexVector a = permute_registers(phi.amplitudes(), dims, order);
  const ComplexVector b = permute_registers(psi.amplitudes(), dims, order);
  const auto da = static_cast<Eigen::Index>(sys.dim_of(regs));
  const auto db = static_cast<Eigen::Index>(sys.dim_of(rest));
  Eigen::Map<const ComplexMatrix> from(a.data(), da, db);
  Eigen::Map<const ComplexMatrix> to(b.data(), da, db);

  // The reduced states on the untouched registers are (M^T conj(M)).
  const ComplexMatrix red_from = from.transpose() * from.conjugate();
  const ComplexMatrix red_to = to.transpose() * to.conjugate();
  if ((red_from - red_to).norm() > 1e-8) {
    throw PreconditionError(
        "uhlmann_unitary: reduced states on the complementary registers differ");
  }

  const ComplexMatrix overlap = to * from.adjoint();
  ComplexMatrix u;
  if (da <= 16) {
    Eigen::JacobiSVD<ComplexMatrix> svd(overlap, Eigen::ComputeFullU | Eigen::ComputeFullV);
    u = svd.matrixU() * svd.matrixV().adjoint();
  } else {
    Eigen::BDCSVD<ComplexMatrix> svd(overlap, Eigen::ComputeFullU | Eigen::ComputeFullV);
    u = svd.matrixU() * svd.matrixV().adjoint();
  }
  return u;
}

// ---------------------------------------------------------------------------

namespace {

ComplexMatrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

}  // namespace

PureState sample_pure_state(std::size_t dim, Rng& rng) {
  if (dim == 0) throw DimensionError("sample_pure_state: dim must be positive");
  const ComplexMatrix g = gaussian_matrix(dim, 1, rng);
  return PureState::normalized(g.col(0));
}

ComplexMatrix sample_unitary(std::size_t dim, Rng& rng) {
  if (dim == 0) throw DimensionError("sample_unitary: dim must be positive");
  const ComplexMatrix g = gaussian_matrix(dim, dim, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& r = qr.matrixQR();
  for (Eigen::Index k = 0; k < q.cols(); ++k) {
    const Complex diag = r(k, k);
    const double mag = std::abs(diag);
    if (mag > 0.0) q.col(k) *= diag / mag;
  }
  return q;
}

Projector sample_projector(std::size_t dim, std::size_t rank, Rng& rng) {
  if (dim == 0) throw DimensionError("sample_projector: dim must be positive");
  if (rank > dim) throw PreconditionError("sample_projector: rank exceeds dimension");
  const ComplexMatrix u = sample_unitary(dim, rng);
  const auto r = static_cast<Eigen::Index>(rank);
  const ComplexMatrix cols = u.leftCols(r);
  return Projector(cols * cols.adjoint());
}

DensityOperator sample_density(std::size_t dim, std::size_t rank, Rng& rng) {
  if (rank == 0) throw PreconditionError("sample_density: rank must be positive");
  const ComplexMatrix g = gaussian_matrix(dim, rank, rng);
  return DensityOperator::normalized(g * g.adjoint());
}

Rng derive_rng(std::uint64_t master, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(master),
                    static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

std::string bitstring(std::uint64_t value, unsigned width) {
  std::string s(width, '0');
  for (unsigned i = 0; i < width; ++i) {
    if ((value >> i) & 1u) s[i] = '1';
  }
  return s;
}

std::uint64_t parse_bitstring(const std::string& s) {
  if (s.size() > 63) throw PreconditionError("bit string too long");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1') {
      v |= (std::uint64_t{1} << i);
    } else if (s[i] != '0') {
      throw PreconditionError("bit string contains a character other than 0/1");
    }
  }
  return v;
}

}  // namespace xorlab
