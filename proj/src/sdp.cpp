#include "xorlab/sdp.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Sparse>

namespace xorlab::sdp {

namespace {

const double kSqrt2 = std::sqrt(2.0);

// Coordinates of the vectorized block-diagonal variable. Off-diagonal real and
// imaginary parts carry a factor sqrt(2) so the Euclidean inner product of
// coordinate vectors equals the trace inner product of the matrices.
class Layout {
 public:
  Layout(const std::vector<std::size_t>& blocks, bool real) : blocks_(blocks), real_(real) {
    std::size_t pos = 0;
    for (auto m : blocks_) {
      offsets_.push_back(pos);
      pos += real_ ? m * (m + 1) / 2 : m * m;
    }
    size_ = pos;
  }

  std::size_t size() const { return size_; }
  std::size_t blocks() const { return blocks_.size(); }
  std::size_t block_dim(std::size_t b) const { return blocks_[b]; }
  bool real() const { return real_; }

  // Position of the real part of (r, c), r <= c; the imaginary part (complex
  // layout, r < c) follows it directly.
  std::size_t index(std::size_t b, std::size_t r, std::size_t c) const {
    const std::size_t m = blocks_[b];
    // rows 0..r-1 contribute (m - i) entries each, counting the diagonal once
    if (real_) return offsets_[b] + r * m - r * (r - 1) / 2 + (c - r);
    // complex: row i has 1 + 2 (m - i - 1) coordinates
    const std::size_t before = r * (2 * m - r);  // sum_{i<r} (2(m-i) - 1)
    return offsets_[b] + before + (c == r ? 0 : 1 + 2 * (c - r - 1));
  }

  void add_term(const SparseTerm& t, double scale,
                std::vector<std::pair<std::size_t, double>>& out) const {
    if (t.row == t.col) {
      out.emplace_back(index(t.block, t.row, t.row), scale * t.value.real());
      return;
    }
    const std::size_t r = std::min(t.row, t.col);
    const std::size_t c = std::max(t.row, t.col);
    // (row, col) given with row > col means the conjugate entry at (c, r)
    const Complex v = t.row <= t.col ? t.value : std::conj(t.value);
    const std::size_t i = index(t.block, r, c);
    out.emplace_back(i, scale * kSqrt2 * v.real());
    if (!real_) out.emplace_back(i + 1, scale * kSqrt2 * v.imag());
  }

  ComplexMatrix unpack(std::size_t b, const Eigen::VectorXd& x) const {
    const auto m = blocks_[b];
    ComplexMatrix out(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (std::size_t r = 0; r < m; ++r) {
      out(r, r) = x(index(b, r, r));
      for (std::size_t c = r + 1; c < m; ++c) {
        const std::size_t i = index(b, r, c);
        const Complex v = real_ ? Complex(x(i) / kSqrt2, 0.0)
                                : Complex(x(i), x(i + 1)) / kSqrt2;
        out(r, c) = v;
        out(c, r) = std::conj(v);
      }
    }
    return out;
  }

  void pack(std::size_t b, const ComplexMatrix& m, Eigen::VectorXd& x) const {
    const auto d = blocks_[b];
    for (std::size_t r = 0; r < d; ++r) {
      x(index(b, r, r)) = m(r, r).real();
      for (std::size_t c = r + 1; c < d; ++c) {
        const std::size_t i = index(b, r, c);
        const Complex v = 0.5 * (m(r, c) + std::conj(m(c, r)));
        x(i) = kSqrt2 * v.real();
        if (!real_) x(i + 1) = kSqrt2 * v.imag();
      }
    }
  }

  // In-place Euclidean projection of block b onto the PSD cone.
  void project_block(std::size_t b, Eigen::VectorXd& x) const {
    const auto m = blocks_[b];
    if (m == 1) {
      auto& v = x(offsets_[b]);
      v = std::max(0.0, v);
      return;
    }
    if (real_) {
      Eigen::MatrixXd mat(m, m);
      for (std::size_t r = 0; r < m; ++r) {
        mat(r, r) = x(index(b, r, r));
        for (std::size_t c = r + 1; c < m; ++c) {
          mat(r, c) = mat(c, r) = x(index(b, r, c)) / kSqrt2;
        }
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mat);
      const auto& w = es.eigenvalues();
      if (w(0) >= 0.0) return;
      const auto& v = es.eigenvectors();
      Eigen::Index first = 0;
      while (first < w.size() && w(first) < 0.0) ++first;
      const auto keep = w.size() - first;
      Eigen::MatrixXd proj = Eigen::MatrixXd::Zero(m, m);
      if (keep > 0) {
        const Eigen::MatrixXd vk = v.rightCols(keep);
        proj = vk * w.tail(keep).asDiagonal() * vk.transpose();
      }
      for (std::size_t r = 0; r < m; ++r) {
        x(index(b, r, r)) = proj(r, r);
        for (std::size_t c = r + 1; c < m; ++c) x(index(b, r, c)) = kSqrt2 * proj(r, c);
      }
      return;
    }
    const ComplexMatrix mat = unpack(b, x);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(mat);
    const auto& w = es.eigenvalues();
    if (w(0) >= 0.0) return;
    Eigen::Index first = 0;
    while (first < w.size() && w(first) < 0.0) ++first;
    const auto keep = w.size() - first;
    ComplexMatrix proj = ComplexMatrix::Zero(m, m);
    if (keep > 0) {
      const ComplexMatrix vk = es.eigenvectors().rightCols(keep);
      proj = vk * w.tail(keep).cast<Complex>().asDiagonal() * vk.adjoint();
    }
    pack(b, proj, x);
  }

  void project_cone(Eigen::VectorXd& x) const {
    for (std::size_t b = 0; b < blocks_.size(); ++b) project_block(b, x);
  }

 private:
  std::vector<std::size_t> blocks_;
  std::vector<std::size_t> offsets_;
  std::size_t size_ = 0;
  bool real_ = false;
};

using SparseRows = Eigen::SparseMatrix<double, Eigen::RowMajor>;

Eigen::VectorXd vectorize(const Layout& layout, const std::vector<SparseTerm>& terms,
                          double scale) {
  std::vector<std::pair<std::size_t, double>> entries;
  for (const auto& t : terms) layout.add_term(t, scale, entries);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(layout.size()));
  for (auto [i, val] : entries) v(static_cast<Eigen::Index>(i)) += val;
  return v;
}

// Pseudo-inverse of the Gram matrix A A^T, tolerant of dependent rows.
Eigen::MatrixXd gram_pseudo_inverse(const SparseRows& a) {
  const SparseRows gram_sparse = a * SparseRows(a.transpose());
  const Eigen::MatrixXd gram = Eigen::MatrixXd(gram_sparse);
  const auto m = gram.rows();
  if (m == 0) return Eigen::MatrixXd(0, 0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  const auto& w = es.eigenvalues();
  const double cutoff = std::max(1e-300, w.cwiseAbs().maxCoeff() * 1e-12);
  Eigen::VectorXd inv(m);
  for (Eigen::Index k = 0; k < m; ++k) inv(k) = w(k) > cutoff ? 1.0 / w(k) : 0.0;
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

// ---------------------------------------------------------------------------

std::string to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::optimal:
      return "optimal";
    case SdpStatus::max_iter:
      return "max_iter";
    case SdpStatus::infeasible:
      return "infeasible";
  }
  return "unknown";
}

SdpProblem SdpProblem::single_block(std::size_t dim, Sense sense) {
  SdpProblem p;
  p.blocks = {dim};
  p.sense = sense;
  return p;
}

std::vector<SparseTerm> SdpProblem::terms_of(std::size_t block, const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("SdpProblem: coefficient matrix not square");
  if (hermiticity_defect(m) > tol::kPsd) {
    throw PreconditionError("SdpProblem: coefficient matrix not Hermitian");
  }
  std::vector<SparseTerm> out;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = r; c < m.cols(); ++c) {
      const Complex v = r == c ? Complex(m(r, r).real(), 0.0)
                               : 0.5 * (m(r, c) + std::conj(m(c, r)));
      if (v != Complex(0.0, 0.0)) {
        out.push_back({block, static_cast<std::size_t>(r), static_cast<std::size_t>(c), v});
      }
    }
  }
  return out;
}

void SdpProblem::add_objective(std::size_t block, const ComplexMatrix& m) {
  auto t = terms_of(block, m);
  objective.insert(objective.end(), t.begin(), t.end());
}

void SdpProblem::add_constraint(std::size_t block, const ComplexMatrix& m, double rhs) {
  constraints.push_back({terms_of(block, m), rhs});
}

void SdpProblem::validate() const {
  if (blocks.empty()) throw DimensionError("SdpProblem: no blocks");
  for (auto b : blocks) {
    if (b == 0) throw DimensionError("SdpProblem: empty block");
  }
  auto check = [&](const SparseTerm& t) {
    if (t.block >= blocks.size() || t.row >= blocks[t.block] || t.col >= blocks[t.block]) {
      throw DimensionError("SdpProblem: term outside its block");
    }
    if (t.row > t.col) throw PreconditionError("SdpProblem: term below the diagonal");
    if (!std::isfinite(t.value.real()) || !std::isfinite(t.value.imag())) {
      throw PreconditionError("SdpProblem: non-finite coefficient");
    }
    if (t.row == t.col && std::abs(t.value.imag()) > tol::kPsd) {
      throw PreconditionError("SdpProblem: complex diagonal coefficient");
    }
    if (real && std::abs(t.value.imag()) > tol::kPsd) {
      throw PreconditionError("SdpProblem: complex coefficient in a real problem");
    }
  };
  for (const auto& t : objective) check(t);
  for (const auto& c : constraints) {
    for (const auto& t : c.terms) check(t);
    if (!std::isfinite(c.rhs)) throw PreconditionError("SdpProblem: non-finite rhs");
  }
}

SdpSolution solve(const SdpProblem& p, double tol, std::size_t max_iter) {
  SolverOptions o;
  o.tol = tol;
  o.max_iter = max_iter;
  return solve(p, o);
}

SdpSolution solve(const SdpProblem& p, const SolverOptions& options) {
  p.validate();
  const Layout layout(p.blocks, p.real);
  const auto n = static_cast<Eigen::Index>(layout.size());
  const auto m = static_cast<Eigen::Index>(p.constraints.size());
  const double sign = p.sense == Sense::maximize ? 1.0 : -1.0;

  const Eigen::VectorXd c = vectorize(layout, p.objective, sign);
  Eigen::VectorXd b(m);
  SparseRows a(m, n);
  {
    std::vector<Eigen::Triplet<double>> trips;
    std::vector<std::pair<std::size_t, double>> entries;
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto& con = p.constraints[static_cast<std::size_t>(j)];
      b(j) = con.rhs;
      entries.clear();
      for (const auto& t : con.terms) layout.add_term(t, 1.0, entries);
      for (auto [i, v] : entries) trips.emplace_back(j, static_cast<Eigen::Index>(i), v);
    }
    a.setFromTriplets(trips.begin(), trips.end());
  }
  const SparseRows at = a.transpose();
  const Eigen::MatrixXd gram_inv = gram_pseudo_inverse(a);

  auto project_affine = [&](Eigen::VectorXd& v) {
    if (m == 0) return;
    const Eigen::VectorXd r = a * v - b;
    v -= at * (gram_inv * r);
  };

  Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
  if (options.warm_start) {
    if (options.warm_start->size() != layout.blocks()) {
      throw DimensionError("solve: warm start has the wrong number of blocks");
    }
    for (std::size_t k = 0; k < layout.blocks(); ++k) {
      const auto& w = (*options.warm_start)[k];
      if (static_cast<std::size_t>(w.rows()) != layout.block_dim(k)) {
        throw DimensionError("solve: warm start block has the wrong size");
      }
      layout.pack(k, w, z);
    }
  }
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd x = z;
  Eigen::VectorXd z_old = z;
  double rho = 1.0;
  const double b_norm = b.norm();
  const double c_norm = c.norm();

  SdpSolution sol;
  double best_stall = INFINITY;
  std::size_t stall_mark = 0;

  auto evaluate = [&](std::size_t iter) {
    sol.iterations = iter;
    sol.value = sign * c.dot(z);
    sol.primal_residual = m == 0 ? 0.0 : (a * z - b).norm() / (1.0 + b_norm);
    const Eigen::VectorXd s = -rho * u;
    Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
    if (m > 0) y = gram_inv * (a * (c + s));
    const Eigen::VectorXd slack = (m > 0 ? Eigen::VectorXd(at * y) : Eigen::VectorXd::Zero(n)) - c - s;
    sol.dual_residual = slack.norm() / (1.0 + c_norm);
    sol.dual_value = sign * b.dot(y);
    sol.dual_gap = std::abs(sol.value - sol.dual_value) /
                   (1.0 + std::abs(sol.value) + std::abs(sol.dual_value));
    const double consensus = (x - z).norm() / (1.0 + z.norm());
    return sol.primal_residual <= options.tol && sol.dual_residual <= options.tol &&
           sol.dual_gap <= options.tol && consensus <= options.tol;
  };

  std::size_t iter = 0;
  bool converged = false;
  for (; iter < options.max_iter; ++iter) {
    x = z - u + c / rho;
    project_affine(x);
    z_old = z;
    z = x + u;
    layout.project_cone(z);
    u += x - z;

    if ((iter + 1) % 10 == 0) {
      if (evaluate(iter + 1)) {
        converged = true;
        ++iter;
        break;
      }
    }
    if ((iter + 1) % 50 == 0) {
      const double rp = (x - z).norm();
      const double rd = rho * (z - z_old).norm();
      if (rp > 10.0 * rd && rho < 1e6) {
        rho *= 2.0;
        u /= 2.0;
      } else if (rd > 10.0 * rp && rho > 1e-6) {
        rho /= 2.0;
        u *= 2.0;
      }
    }
    // Stall-based infeasibility heuristic: the distance between the affine
    // set and the cone stops shrinking while staying large.
    if ((iter + 1) % 5000 == 0) {
      const double rp = (x - z).norm() / (1.0 + z.norm());
      if (rp > 1e-4 && rp > 0.99 * best_stall && iter + 1 > stall_mark) {
        sol.status = SdpStatus::infeasible;
        evaluate(iter + 1);
        break;
      }
      best_stall = std::min(best_stall, rp);
      stall_mark = iter + 1;
    }
  }
  if (sol.status != SdpStatus::infeasible) {
    if (!converged) evaluate(iter);
    sol.status = converged ? SdpStatus::optimal : SdpStatus::max_iter;
  }
  sol.primal.reserve(layout.blocks());
  for (std::size_t k = 0; k < layout.blocks(); ++k) sol.primal.push_back(layout.unpack(k, z));
  return sol;
}

// ---------------------------------------------------------------------------

double helstrom_value(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("helstrom_value: dimension mismatch");
  }
  return 0.5 * (a.trace().real() + b.trace().real()) + 0.5 * trace_norm(a - b);
}

namespace {

// Inverse square root on the support.
ComplexMatrix pinv_sqrt(const ComplexMatrix& m) {
  const auto eig = hermitian_eig(hermitian_part(m));
  const double cutoff = std::max(1e-14, 1e-12 * std::abs(eig.values(0)));
  ComplexMatrix out = ComplexMatrix::Zero(m.rows(), m.cols());
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
    if (eig.values(k) > cutoff) {
      out += (1.0 / std::sqrt(eig.values(k))) *
             (eig.vectors.col(k) * eig.vectors.col(k).adjoint());
    }
  }
  return out;
}

// Rescales PSD operators so they sum to the identity; the kernel of their sum
// goes to the first outcome.
std::vector<ComplexMatrix> complete_povm(std::vector<ComplexMatrix> elements) {
  const auto d = elements.front().rows();
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (auto& e : elements) {
    e = positive_part(hermitian_part(e));
    sum += e;
  }
  const ComplexMatrix t = pinv_sqrt(sum);
  for (auto& e : elements) e = hermitian_part(t * e * t);
  ComplexMatrix total = ComplexMatrix::Zero(d, d);
  for (const auto& e : elements) total += e;
  const ComplexMatrix kernel = ComplexMatrix::Identity(d, d) - total;
  elements.front() += hermitian_part(kernel);
  return elements;
}

double success(const std::vector<ComplexMatrix>& povm,
               const std::vector<ComplexMatrix>& weighted) {
  double s = 0.0;
  for (std::size_t k = 0; k < povm.size(); ++k) {
    s += (povm[k] * weighted[k]).trace().real();
  }
  return s;
}

bool all_real(const std::vector<ComplexMatrix>& ms) {
  for (const auto& m : ms) {
    if (m.imag().cwiseAbs().maxCoeff() > 0.0) return false;
  }
  return true;
}

}  // namespace

DiscriminationResult discriminate(const std::vector<ComplexMatrix>& weighted,
                                  const SolverOptions& options) {
  if (weighted.empty()) throw DimensionError("discriminate: no hypotheses");
  const auto d = weighted.front().rows();
  for (const auto& w : weighted) {
    if (w.rows() != d || w.cols() != d) throw DimensionError("discriminate: dimension mismatch");
  }
  DiscriminationResult res;
  const std::size_t k = weighted.size();
  const auto ud = static_cast<std::size_t>(d);
  if (k == 1) {
    res.povm = {ComplexMatrix::Identity(d, d)};
    res.value = res.upper_bound = res.pgm_value = weighted.front().trace().real();
    res.status = SdpStatus::optimal;
    return res;
  }

  // pretty-good measurement
  ComplexMatrix avg = ComplexMatrix::Zero(d, d);
  for (const auto& w : weighted) avg += w;
  const ComplexMatrix root = pinv_sqrt(avg);
  std::vector<ComplexMatrix> pgm;
  for (const auto& w : weighted) pgm.push_back(hermitian_part(root * w * root));
  pgm = complete_povm(std::move(pgm));
  res.pgm_value = success(pgm, weighted);

  SdpProblem p;
  p.blocks.assign(k, ud);
  p.real = all_real(weighted);
  for (std::size_t i = 0; i < k; ++i) p.add_objective(i, weighted[i]);
  for (std::size_t r = 0; r < ud; ++r) {
    for (std::size_t c = r; c < ud; ++c) {
      SdpConstraint re;
      re.rhs = r == c ? 1.0 : 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        re.terms.push_back({i, r, c, Complex(r == c ? 1.0 : 0.5, 0.0)});
      }
      p.constraints.push_back(std::move(re));
      if (r != c && !p.real) {
        SdpConstraint im;
        for (std::size_t i = 0; i < k; ++i) im.terms.push_back({i, r, c, Complex(0.0, 0.5)});
        p.constraints.push_back(std::move(im));
      }
    }
  }
  SolverOptions o = options;
  if (!o.warm_start) o.warm_start = pgm;
  const SdpSolution sol = solve(p, o);
  res.status = sol.status;
  res.iterations = sol.iterations;
  res.povm = complete_povm(sol.primal);
  res.value = success(res.povm, weighted);
  if (res.value < res.pgm_value) {
    res.povm = pgm;
    res.value = res.pgm_value;
  }

  // Dual certificate: Y >= sigma_k for all k bounds every POVM's success by Tr Y.
  ComplexMatrix y = ComplexMatrix::Zero(d, d);
  for (std::size_t i = 0; i < k; ++i) y += weighted[i] * res.povm[i];
  y = hermitian_part(y);
  double shift = 0.0;
  for (const auto& w : weighted) {
    shift = std::max(shift, hermitian_eig(hermitian_part(w - y)).values(0));
  }
  res.upper_bound = y.trace().real() + shift * static_cast<double>(d);
  return res;
}

double discrimination(const std::vector<DensityOperator>& states,
                      const std::vector<double>& priors, double tol) {
  if (states.size() != priors.size() || states.empty()) {
    throw DimensionError("discrimination: states and priors differ in length");
  }
  double total = 0.0;
  for (auto p : priors) {
    if (p < 0.0) throw PreconditionError("discrimination: negative prior");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw PreconditionError("discrimination: priors do not sum to 1");
  std::vector<ComplexMatrix> weighted;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].dim() != states.front().dim()) {
      throw DimensionError("discrimination: states of different dimension");
    }
    weighted.push_back(priors[i] * states[i].matrix());
  }
  SolverOptions o;
  o.tol = std::min(tol, 1e-7);
  const auto res = discriminate(weighted, o);
  if (res.upper_bound - res.value > tol) {
    throw SolverError("discrimination: solver did not certify the optimum to tolerance",
                      res.status);
  }
  return res.value;
}

}  // namespace xorlab::sdp
