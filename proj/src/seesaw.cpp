#include <algorithm>
#include <cmath>

#include "xorlab/games.hpp"
#include "xorlab/parallel.hpp"

namespace xorlab::games {

namespace {

// Measurement elements are kept as factors E = L L^dag; ranks across the
// outcomes of one input add up to the local dimension.
using Factors = std::vector<std::vector<ComplexMatrix>>;  // [input][outcome]

struct Problem {
  const TwoPlayerGame& game;
  std::size_t da;
  std::size_t db;
};

ComplexMatrix element(const ComplexMatrix& l) {
  if (l.cols() == 0) return ComplexMatrix::Zero(l.rows(), l.rows());
  return l * l.adjoint();
}

Factors random_projective(std::size_t inputs, std::size_t outputs, std::size_t dim, Rng& rng) {
  Factors f(inputs);
  const auto d = static_cast<Eigen::Index>(dim);
  for (auto& per_input : f) {
    const ComplexMatrix u = sample_unitary(dim, rng);
    std::vector<std::vector<Eigen::Index>> cols(outputs);
    for (Eigen::Index k = 0; k < d; ++k) cols[static_cast<std::size_t>(k) % outputs].push_back(k);
    for (std::size_t a = 0; a < outputs; ++a) {
      ComplexMatrix l(d, static_cast<Eigen::Index>(cols[a].size()));
      for (std::size_t j = 0; j < cols[a].size(); ++j) l.col(static_cast<Eigen::Index>(j)) = u.col(cols[a][j]);
      per_input.push_back(std::move(l));
    }
  }
  return f;
}

// Exact maximization of Tr(Wa Ea) + Tr(Wb Eb) over Ea + Eb = T fixed:
// Ea = T^1/2 P T^1/2 with P the nonnegative eigenprojector of
// T^1/2 (Wa - Wb) T^1/2, computed inside the range of M = [La Lb]. With
// M^dag M = V S^2 V^dag the range is spanned by M V, so everything reduces to
// the k x k matrix M^dag (Wa - Wb) M.
void pair_update(const ComplexMatrix& wa, const ComplexMatrix& wb, ComplexMatrix& la,
                 ComplexMatrix& lb) {
  const auto ka = la.cols();
  const auto k = ka + lb.cols();
  if (k == 0) return;
  ComplexMatrix m(la.rows(), k);
  m << la, lb;
  const ComplexMatrix h_full = m.adjoint() * ((wa - wb) * m);
  // Tr(Wa Ea) + Tr(Wb Eb) = Tr(Wb T) + Tr((Wa - Wb) Ea); only the second term moves.
  const double before = ka > 0 ? h_full.topLeftCorner(ka, ka).trace().real() : 0.0;

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> gram(m.adjoint() * m);
  const auto& s2 = gram.eigenvalues();  // ascending
  const double cutoff = 1e-14 * std::max(1.0, s2(k - 1));
  Eigen::Index drop = 0;
  while (drop < k && s2(drop) <= cutoff) ++drop;
  const Eigen::Index r = k - drop;
  if (r == 0) return;
  const ComplexMatrix v = gram.eigenvectors().rightCols(r);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(v.adjoint() * h_full * v));
  const auto& w = es.eigenvalues();  // ascending
  Eigen::Index neg = 0;
  while (neg < r && w(neg) < 0.0) ++neg;
  const double after = w.tail(r - neg).sum();
  if (after < before) return;
  const ComplexMatrix y = m * (v * es.eigenvectors());
  la = y.rightCols(r - neg);
  lb = y.leftCols(neg);
}

void improve_measurements(const std::vector<std::vector<ComplexMatrix>>& w, Factors& f) {
  for (std::size_t in = 0; in < f.size(); ++in) {
    const std::size_t outs = f[in].size();
    for (std::size_t a = 0; a < outs; ++a) {
      for (std::size_t b = a + 1; b < outs; ++b) {
        pair_update(w[in][a], w[in][b], f[in][a], f[in][b]);
      }
    }
  }
}

// Bob's operators W_{y,b} = sum_{x,a} weight (Psi^dag A Psi)^T.
std::vector<std::vector<ComplexMatrix>> bob_operators(const Problem& p, const ComplexMatrix& psi,
                                                      const Factors& alice) {
  const auto& g = p.game;
  const auto db = static_cast<Eigen::Index>(p.db);
  std::vector<std::vector<ComplexMatrix>> w(
      g.bob_inputs(), std::vector<ComplexMatrix>(g.bob_outputs, ComplexMatrix::Zero(db, db)));
  for (std::size_t x = 0; x < g.alice_inputs(); ++x) {
    for (std::size_t a = 0; a < g.alice_outputs; ++a) {
      const ComplexMatrix& l = alice[x][a];
      if (l.cols() == 0) continue;
      const ComplexMatrix k = psi.adjoint() * l;
      const ComplexMatrix sigma = k.conjugate() * k.transpose();
      for (std::size_t y = 0; y < g.bob_inputs(); ++y) {
        for (std::size_t b = 0; b < g.bob_outputs; ++b) {
          const double c = g.weight(x, y, a, b);
          if (c != 0.0) w[y][b] += c * sigma;
        }
      }
    }
  }
  return w;
}

// Alice's operators W_{x,a} = sum_{y,b} weight Psi B^T Psi^dag.
std::vector<std::vector<ComplexMatrix>> alice_operators(const Problem& p, const ComplexMatrix& psi,
                                                        const Factors& bob) {
  const auto& g = p.game;
  const auto da = static_cast<Eigen::Index>(p.da);
  std::vector<std::vector<ComplexMatrix>> rho(g.bob_inputs());
  for (std::size_t y = 0; y < g.bob_inputs(); ++y) {
    for (std::size_t b = 0; b < g.bob_outputs; ++b) {
      const ComplexMatrix& l = bob[y][b];
      if (l.cols() == 0) {
        rho[y].push_back(ComplexMatrix::Zero(da, da));
        continue;
      }
      const ComplexMatrix k = psi * l.conjugate();
      rho[y].push_back(k * k.adjoint());
    }
  }
  std::vector<std::vector<ComplexMatrix>> w(
      g.alice_inputs(), std::vector<ComplexMatrix>(g.alice_outputs, ComplexMatrix::Zero(da, da)));
  for (std::size_t x = 0; x < g.alice_inputs(); ++x) {
    for (std::size_t a = 0; a < g.alice_outputs; ++a) {
      for (std::size_t y = 0; y < g.bob_inputs(); ++y) {
        for (std::size_t b = 0; b < g.bob_outputs; ++b) {
          const double c = g.weight(x, y, a, b);
          if (c != 0.0) w[x][a] += c * rho[y][b];
        }
      }
    }
  }
  return w;
}

// The win operator W = sum weight A (x) B acting on Psi (da x db) as
// sum_{y,b} M_{y,b} Psi B_{y,b}^T with M_{y,b} = sum_{x,a} weight A_{x,a}.
class WinOperator {
 public:
  WinOperator(const Problem& p, const Factors& alice, const Factors& bob) {
    const auto& g = p.game;
    const auto da = static_cast<Eigen::Index>(p.da);
    for (std::size_t y = 0; y < g.bob_inputs(); ++y) {
      for (std::size_t b = 0; b < g.bob_outputs; ++b) {
        if (bob[y][b].cols() == 0) continue;
        ComplexMatrix m = ComplexMatrix::Zero(da, da);
        bool any = false;
        for (std::size_t x = 0; x < g.alice_inputs(); ++x) {
          for (std::size_t a = 0; a < g.alice_outputs; ++a) {
            const double c = g.weight(x, y, a, b);
            if (c == 0.0 || alice[x][a].cols() == 0) continue;
            m += c * element(alice[x][a]);
            any = true;
          }
        }
        if (!any) continue;
        // Psi B^T = (Psi conj(L)) L^T with B = L L^dag
        terms_.push_back({std::move(m), bob[y][b].conjugate(), bob[y][b].transpose()});
      }
    }
  }

  ComplexMatrix apply(const ComplexMatrix& psi) const {
    ComplexMatrix out = ComplexMatrix::Zero(psi.rows(), psi.cols());
    for (const auto& t : terms_) out.noalias() += (t.left * (psi * t.right_in)) * t.right_out;
    return out;
  }

  double expectation(const ComplexMatrix& psi) const {
    return psi.conjugate().cwiseProduct(apply(psi)).sum().real();
  }

 private:
  struct Term {
    ComplexMatrix left;
    ComplexMatrix right_in;
    ComplexMatrix right_out;
  };
  std::vector<Term> terms_;
};

double frob_dot(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a.conjugate().cwiseProduct(b).sum().real();
}

// Lanczos with full reorthogonalization started at psi. The top Ritz value
// is at least the Rayleigh quotient of psi, so the update never decreases the
// objective.
ComplexMatrix top_eigenvector(const WinOperator& op, const ComplexMatrix& psi,
                              std::size_t max_steps) {
  std::vector<ComplexMatrix> q;
  q.push_back(psi / psi.norm());
  std::vector<double> alpha;
  std::vector<double> beta;
  const std::size_t dim = static_cast<std::size_t>(psi.size());
  const std::size_t steps = std::min(max_steps, dim);
  for (std::size_t j = 0; j < steps; ++j) {
    ComplexMatrix v = op.apply(q[j]);
    alpha.push_back(frob_dot(q[j], v));
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& qi : q) {
        const Complex c = qi.conjugate().cwiseProduct(v).sum();
        v -= c * qi;
      }
    }
    const double b = v.norm();
    if (j + 1 == steps || b < 1e-12) break;
    beta.push_back(b);
    q.push_back(v / b);
  }
  const auto m = static_cast<Eigen::Index>(alpha.size());
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    t(i, i) = alpha[static_cast<std::size_t>(i)];
    if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
  const Eigen::VectorXd y = es.eigenvectors().col(m - 1);
  ComplexMatrix out = ComplexMatrix::Zero(psi.rows(), psi.cols());
  for (Eigen::Index i = 0; i < m; ++i) out += y(i) * q[static_cast<std::size_t>(i)];
  return out / out.norm();
}

std::vector<Povm> to_povms(const Factors& f) {
  std::vector<Povm> out;
  for (const auto& per_input : f) {
    std::vector<ComplexMatrix> el;
    for (const auto& l : per_input) el.push_back(hermitian_part(element(l)));
    out.emplace_back(std::move(el));
  }
  return out;
}

struct RestartOutput {
  ComplexMatrix psi;
  Factors alice;
  Factors bob;
  std::vector<double> trajectory;
};

RestartOutput run_restart(const Problem& p, std::size_t iters, Rng rng) {
  const auto& g = p.game;
  RestartOutput out;
  const PureState start = sample_pure_state(p.da * p.db, rng);
  out.psi = Eigen::Map<const ComplexMatrix>(start.amplitudes().data(),
                                            static_cast<Eigen::Index>(p.da),
                                            static_cast<Eigen::Index>(p.db));
  out.alice = random_projective(g.alice_inputs(), g.alice_outputs, p.da, rng);
  out.bob = random_projective(g.bob_inputs(), g.bob_outputs, p.db, rng);

  const std::size_t lanczos_steps = 40;
  std::size_t quiet = 0;
  double last = -1.0;
  for (std::size_t it = 0; it < iters; ++it) {
    improve_measurements(bob_operators(p, out.psi, out.alice), out.bob);
    improve_measurements(alice_operators(p, out.psi, out.bob), out.alice);
    const WinOperator op(p, out.alice, out.bob);
    const double before = op.expectation(out.psi);
    ComplexMatrix next = top_eigenvector(op, out.psi, lanczos_steps);
    double value = op.expectation(next);
    if (value >= before) {
      out.psi = std::move(next);
    } else {
      value = before;
    }
    out.trajectory.push_back(value);
    quiet = value - last < 1e-11 ? quiet + 1 : 0;
    last = value;
    if (quiet >= 5) break;
  }
  return out;
}

}  // namespace

SeesawResult seesaw(const TwoPlayerGame& game, std::size_t local_dim, std::size_t restarts,
                    std::size_t iters, Rng& rng) {
  game.validate();
  if (local_dim < 2) throw PreconditionError("seesaw: local dimension must be at least 2");
  if (restarts == 0) throw PreconditionError("seesaw: at least one restart");
  const Problem p{game, local_dim, local_dim};
  const std::uint64_t master = rng();

  std::vector<RestartOutput> outputs(restarts);
  parallel_for(restarts, [&](std::size_t r) {
    outputs[r] = run_restart(p, iters, derive_rng(master, r));
  });

  double best = -1.0;
  std::size_t best_restart = 0;
  std::vector<double> restart_values;
  for (std::size_t r = 0; r < restarts; ++r) {
    const auto& o = outputs[r];
    const double v = o.trajectory.empty() ? 0.0 : o.trajectory.back();
    restart_values.push_back(v);
    if (v > best) {
      best = v;
      best_restart = r;
    }
  }
  auto& win = outputs[best_restart];
  const ComplexVector amps =
      Eigen::Map<const ComplexVector>(win.psi.data(), win.psi.size());
  QuantumStrategy strategy{PureState::normalized(amps),
                           SplitSystem::bipartite(local_dim, local_dim),
                           to_povms(win.alice), to_povms(win.bob)};
  const double value = evaluate(game, strategy);
  return SeesawResult{std::move(strategy), value, best_restart, std::move(restart_values),
                      std::move(win.trajectory)};
}

}  // namespace xorlab::games
