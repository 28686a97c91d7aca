#include "xorlab/games.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "xorlab/encodings.hpp"

namespace xorlab::games {

namespace {

const double kCos2Pi8 = std::pow(std::cos(std::numbers::pi / 8.0), 2);

std::vector<double> uniform(std::size_t n) { return std::vector<double>(n, 1.0 / n); }

// Symmetry generators shared by CHSH_n and CHSH^n: Alice's output flips by r,
// Alice's input by s, Bob's output by r plus a function of (y, s).
std::vector<GameSymmetry> xor_symmetries(
    unsigned n, std::size_t bob_inputs,
    const std::function<std::size_t(std::size_t y, std::size_t s)>& bob_shift) {
  const std::size_t size = std::size_t{1} << n;
  std::vector<GameSymmetry> gens;
  auto make = [&](std::size_t r, std::size_t s) {
    GameSymmetry g;
    g.alice.resize(size * size);
    for (std::size_t x = 0; x < size; ++x) {
      for (std::size_t a = 0; a < size; ++a) g.alice[x * size + a] = (x ^ s) * size + (a ^ r);
    }
    g.bob.resize(bob_inputs * size);
    for (std::size_t y = 0; y < bob_inputs; ++y) {
      for (std::size_t b = 0; b < size; ++b) {
        g.bob[y * size + b] = y * size + (b ^ r ^ bob_shift(y, s));
      }
    }
    return g;
  };
  for (unsigned i = 0; i < n; ++i) gens.push_back(make(std::size_t{1} << i, 0));
  for (unsigned i = 0; i < n; ++i) gens.push_back(make(0, std::size_t{1} << i));
  return gens;
}

Eigen::Map<const ComplexMatrix> as_matrix(const ComplexVector& v, std::size_t da,
                                          std::size_t db) {
  return Eigen::Map<const ComplexMatrix>(v.data(), static_cast<Eigen::Index>(da),
                                         static_cast<Eigen::Index>(db));
}

void check_labels(const TwoPlayerGame& game, const QuantumStrategy& s) {
  if (s.alice.size() != game.alice_inputs() || s.bob.size() != game.bob_inputs()) {
    throw DimensionError("strategy inputs do not match the game");
  }
  for (const auto& p : s.alice) {
    if (p.size() != game.alice_outputs) {
      throw DimensionError("strategy outputs do not match the game");
    }
  }
  for (const auto& p : s.bob) {
    if (p.size() != game.bob_outputs) {
      throw DimensionError("strategy outputs do not match the game");
    }
  }
}

}  // namespace

TwoPlayerGame TwoPlayerGame::from_predicate(std::string name, std::vector<double> alice_dist,
                                            std::vector<double> bob_dist,
                                            std::size_t alice_outputs,
                                            std::size_t bob_outputs,
                                            const Predicate& predicate) {
  TwoPlayerGame g;
  g.name = std::move(name);
  g.alice_dist = std::move(alice_dist);
  g.bob_dist = std::move(bob_dist);
  g.alice_outputs = alice_outputs;
  g.bob_outputs = bob_outputs;
  g.table.resize(g.alice_inputs() * g.bob_inputs() * alice_outputs * bob_outputs);
  for (std::size_t x = 0; x < g.alice_inputs(); ++x) {
    for (std::size_t y = 0; y < g.bob_inputs(); ++y) {
      for (std::size_t a = 0; a < alice_outputs; ++a) {
        for (std::size_t b = 0; b < bob_outputs; ++b) {
          g.table[((x * g.bob_inputs() + y) * alice_outputs + a) * bob_outputs + b] =
              predicate(x, y, a, b) ? 1 : 0;
        }
      }
    }
  }
  g.validate();
  return g;
}

void TwoPlayerGame::validate() const {
  if (alice_dist.empty() || bob_dist.empty() || alice_outputs == 0 || bob_outputs == 0) {
    throw DimensionError("TwoPlayerGame: empty alphabet");
  }
  for (const auto* dist : {&alice_dist, &bob_dist}) {
    double total = 0.0;
    for (double p : *dist) {
      if (!(p >= 0.0)) throw PreconditionError("TwoPlayerGame: negative probability");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) {
      throw PreconditionError("TwoPlayerGame: input distribution does not sum to 1");
    }
  }
  if (table.size() != alice_inputs() * bob_inputs() * alice_outputs * bob_outputs) {
    throw DimensionError("TwoPlayerGame: predicate table has the wrong size");
  }
}

TwoPlayerGame make_chsh_n(unsigned n) {
  if (n == 0 || n > 16) throw PreconditionError("make_chsh_n: n must be in [1, 16]");
  const std::size_t size = std::size_t{1} << n;
  auto g = TwoPlayerGame::from_predicate(
      "CHSH_" + std::to_string(n), uniform(size), uniform(2), size, size,
      [](std::size_t x, std::size_t y, std::size_t a, std::size_t b) {
        return (a ^ b) == (y ? x : 0);
      });
  g.symmetries =
      xor_symmetries(n, 2, [](std::size_t y, std::size_t s) { return y ? s : 0; });
  return g;
}

TwoPlayerGame make_chsh() {
  auto g = make_chsh_n(1);
  g.name = "CHSH";
  return g;
}

TwoPlayerGame make_chsh_tensor(unsigned n) {
  if (n == 0 || n > 8) throw PreconditionError("make_chsh_tensor: n must be in [1, 8]");
  const std::size_t size = std::size_t{1} << n;
  auto g = TwoPlayerGame::from_predicate(
      "CHSH^" + std::to_string(n), uniform(size), uniform(size), size, size,
      [](std::size_t x, std::size_t y, std::size_t a, std::size_t b) {
        return (a ^ b) == (x & y);
      });
  g.symmetries =
      xor_symmetries(n, size, [](std::size_t y, std::size_t s) { return y & s; });
  return g;
}

TwoPlayerGame make_weighted_chsh(double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw PreconditionError("make_weighted_chsh: q outside [0, 1]");
  auto g = make_chsh();
  g.name = "CHSH_q";
  g.bob_dist = {q, 1.0 - q};
  g.validate();
  return g;
}

bool structurally_equal(const TwoPlayerGame& a, const TwoPlayerGame& b) {
  return a.alice_dist == b.alice_dist && a.bob_dist == b.bob_dist &&
         a.alice_outputs == b.alice_outputs && a.bob_outputs == b.bob_outputs &&
         a.table == b.table;
}

// ---------------------------------------------------------------------------

std::size_t QuantumStrategy::alice_dim() const {
  return system.dim_of(system.alice_registers());
}

std::size_t QuantumStrategy::bob_dim() const {
  const auto bob = system.bob_registers();
  return system.dim_of(bob);
}

void QuantumStrategy::validate() const {
  if (state.dim() != system.total_dim()) {
    throw DimensionError("QuantumStrategy: state dimension differs from the split system");
  }
  const auto& regs = system.alice_registers();
  for (std::size_t k = 0; k < regs.size(); ++k) {
    if (regs[k] != k) {
      throw PreconditionError("QuantumStrategy: Alice's registers must come first");
    }
  }
  for (const auto& p : alice) {
    if (p.dim() != alice_dim()) throw DimensionError("QuantumStrategy: Alice POVM dimension");
  }
  for (const auto& p : bob) {
    if (p.dim() != bob_dim()) throw DimensionError("QuantumStrategy: Bob POVM dimension");
  }
}

std::vector<double> joint_distribution(const QuantumStrategy& s) {
  s.validate();
  const std::size_t da = s.alice_dim();
  const std::size_t db = s.bob_dim();
  const auto psi = as_matrix(s.state.amplitudes(), da, db);
  const std::size_t nx = s.alice.size();
  const std::size_t ny = s.bob.size();
  const std::size_t na = nx ? s.alice.front().size() : 0;
  const std::size_t nb = ny ? s.bob.front().size() : 0;
  std::vector<double> out(nx * ny * na * nb, 0.0);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t a = 0; a < na; ++a) {
      // <psi| A (x) B |psi> = sum_jl (Psi^dag A Psi)_jl B_jl
      const ComplexMatrix k = psi.adjoint() * s.alice[x][a] * psi;
      for (std::size_t y = 0; y < ny; ++y) {
        for (std::size_t b = 0; b < nb; ++b) {
          const double p = k.cwiseProduct(s.bob[y][b]).sum().real();
          out[((x * ny + y) * na + a) * nb + b] = std::max(0.0, p);
        }
      }
    }
  }
  return out;
}

double evaluate(const TwoPlayerGame& game, const QuantumStrategy& s) {
  check_labels(game, s);
  const auto p = joint_distribution(s);
  const std::size_t ny = game.bob_inputs();
  const std::size_t na = game.alice_outputs;
  const std::size_t nb = game.bob_outputs;
  double v = 0.0;
  for (std::size_t x = 0; x < game.alice_inputs(); ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      double w = 0.0;
      for (std::size_t a = 0; a < na; ++a) {
        for (std::size_t b = 0; b < nb; ++b) {
          if (game.win(x, y, a, b)) w += p[((x * ny + y) * na + a) * nb + b];
        }
      }
      v += game.alice_dist[x] * game.bob_dist[y] * w;
    }
  }
  return v;
}

double signaling_defect(const QuantumStrategy& s) {
  const auto p = joint_distribution(s);
  const std::size_t nx = s.alice.size();
  const std::size_t ny = s.bob.size();
  const std::size_t na = s.alice.front().size();
  const std::size_t nb = s.bob.front().size();
  auto at = [&](std::size_t x, std::size_t y, std::size_t a, std::size_t b) {
    return p[((x * ny + y) * na + a) * nb + b];
  };
  double worst = 0.0;
  for (std::size_t y = 0; y < ny; ++y) {
    for (std::size_t b = 0; b < nb; ++b) {
      double ref = 0.0;
      for (std::size_t a = 0; a < na; ++a) ref += at(0, y, a, b);
      for (std::size_t x = 1; x < nx; ++x) {
        double m = 0.0;
        for (std::size_t a = 0; a < na; ++a) m += at(x, y, a, b);
        worst = std::max(worst, std::abs(m - ref));
      }
    }
  }
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t a = 0; a < na; ++a) {
      double ref = 0.0;
      for (std::size_t b = 0; b < nb; ++b) ref += at(x, 0, a, b);
      for (std::size_t y = 1; y < ny; ++y) {
        double m = 0.0;
        for (std::size_t b = 0; b < nb; ++b) m += at(x, y, a, b);
        worst = std::max(worst, std::abs(m - ref));
      }
    }
  }
  return worst;
}

QuantumStrategy canonical_chsh_strategy() {
  const double h = 1.0 / std::sqrt(2.0);
  ComplexVector bell = ComplexVector::Zero(4);
  bell(0) = h;
  bell(3) = h;

  auto projective = [](double angle) {
    ComplexVector v(2);
    v << std::cos(angle), std::sin(angle);
    const ComplexMatrix p = v * v.adjoint();
    return Povm({p, ComplexMatrix::Identity(2, 2) - p});
  };
  const double pi = std::numbers::pi;
  return QuantumStrategy{PureState(bell), SplitSystem::bipartite(2, 2),
                         {projective(0.0), projective(pi / 4.0)},
                         {projective(pi / 8.0), projective(-pi / 8.0)}};
}

QuantumStrategy parallel_strategy(const std::vector<QuantumStrategy>& parts) {
  if (parts.empty()) throw DimensionError("parallel_strategy: no parts");
  std::vector<std::size_t> dims;
  std::vector<std::size_t> order;
  ComplexVector state = ComplexVector::Ones(1);
  std::size_t da = 1;
  std::size_t db = 1;
  for (const auto& p : parts) {
    p.validate();
    dims.push_back(p.alice_dim());
    dims.push_back(p.bob_dim());
    da *= p.alice_dim();
    db *= p.bob_dim();
    state = tensor(state, p.state.amplitudes());
  }
  for (std::size_t k = 0; k < parts.size(); ++k) order.push_back(2 * k);
  for (std::size_t k = 0; k < parts.size(); ++k) order.push_back(2 * k + 1);
  state = permute_registers(state, dims, order);

  auto combine = [&](auto side) {
    std::size_t inputs = 1;
    std::size_t outputs = 1;
    for (const auto& p : parts) {
      const auto& povms = side(p);
      inputs *= povms.size();
      outputs *= povms.front().size();
    }
    std::vector<Povm> result;
    for (std::size_t x = 0; x < inputs; ++x) {
      std::vector<ComplexMatrix> elements;
      for (std::size_t a = 0; a < outputs; ++a) {
        ComplexMatrix e = ComplexMatrix::Identity(1, 1);
        std::size_t xr = x;
        std::size_t ar = a;
        for (const auto& p : parts) {
          const auto& povms = side(p);
          const std::size_t ni = povms.size();
          const std::size_t no = povms.front().size();
          e = tensor(e, povms[xr % ni][ar % no]);
          xr /= ni;
          ar /= no;
        }
        elements.push_back(std::move(e));
      }
      result.emplace_back(std::move(elements));
    }
    return result;
  };
  auto alice = combine([](const QuantumStrategy& p) -> const std::vector<Povm>& { return p.alice; });
  auto bob = combine([](const QuantumStrategy& p) -> const std::vector<Povm>& { return p.bob; });
  return QuantumStrategy{PureState::normalized(state), SplitSystem::bipartite(da, db),
                         std::move(alice), std::move(bob)};
}

QuantumStrategy deterministic_strategy(std::size_t alice_outputs, std::size_t bob_outputs,
                                       const std::vector<std::size_t>& alice_choice,
                                       const std::vector<std::size_t>& bob_choice) {
  auto make = [](std::size_t outputs, std::size_t choice) {
    if (choice >= outputs) throw PreconditionError("deterministic_strategy: output out of range");
    std::vector<ComplexMatrix> el(outputs, ComplexMatrix::Zero(1, 1));
    el[choice](0, 0) = 1.0;
    return Povm(std::move(el));
  };
  QuantumStrategy s{PureState::basis(1, 0), SplitSystem::bipartite(1, 1), {}, {}};
  for (auto c : alice_choice) s.alice.push_back(make(alice_outputs, c));
  for (auto c : bob_choice) s.bob.push_back(make(bob_outputs, c));
  return s;
}

QuantumStrategy guessing_strategy_chsh_n(unsigned n) {
  const auto game = make_chsh_n(n);
  const std::size_t size = std::size_t{1} << n;
  std::optional<QuantumStrategy> best;
  double best_value = -1.0;
  for (std::size_t guess = 0; guess < size; ++guess) {
    auto s = deterministic_strategy(size, size, std::vector<std::size_t>(size, 0), {0, guess});
    const double v = evaluate(game, s);
    if (v > best_value) {
      best_value = v;
      best = std::move(s);
    }
  }
  return *best;
}

QuantumStrategy random_strategy(const TwoPlayerGame& game, std::size_t alice_dim,
                                std::size_t bob_dim, Rng& rng) {
  auto random_measurement = [&](std::size_t dim, std::size_t outputs) {
    const ComplexMatrix u = sample_unitary(dim, rng);
    const auto d = static_cast<Eigen::Index>(dim);
    std::vector<ComplexMatrix> el(outputs, ComplexMatrix::Zero(d, d));
    for (Eigen::Index k = 0; k < d; ++k) {
      el[static_cast<std::size_t>(k) % outputs] += u.col(k) * u.col(k).adjoint();
    }
    return Povm(std::move(el));
  };
  QuantumStrategy s{sample_pure_state(alice_dim * bob_dim, rng),
                    SplitSystem::bipartite(alice_dim, bob_dim), {}, {}};
  for (std::size_t x = 0; x < game.alice_inputs(); ++x) {
    s.alice.push_back(random_measurement(alice_dim, game.alice_outputs));
  }
  for (std::size_t y = 0; y < game.bob_inputs(); ++y) {
    s.bob.push_back(random_measurement(bob_dim, game.bob_outputs));
  }
  return s;
}

// ---------------------------------------------------------------------------

double upper_bound_chsh_n(unsigned n) {
  if (n == 0) throw PreconditionError("upper_bound_chsh_n: n must be positive");
  return 0.5 + std::pow(2.0, -(static_cast<double>(n) + 1.0) / 2.0);
}

double conjectured_value_chsh_n(unsigned n) {
  if (n == 0) throw PreconditionError("conjectured_value_chsh_n: n must be positive");
  return 0.5 + 0.5 * std::pow(2.0, -static_cast<double>(n) / 2.0);
}

double parallel_repetition_value(unsigned n) {
  if (n == 0) throw PreconditionError("parallel_repetition_value: n must be positive");
  return std::pow(kCos2Pi8, static_cast<double>(n));
}

double guessing_value_chsh_n(unsigned n) {
  if (n == 0) throw PreconditionError("guessing_value_chsh_n: n must be positive");
  return 0.5 + std::pow(2.0, -(static_cast<double>(n) + 1.0));
}

// ---------------------------------------------------------------------------

namespace {

unsigned log2_exact(std::size_t v) {
  unsigned n = 0;
  while ((std::size_t{1} << n) < v) ++n;
  if ((std::size_t{1} << n) != v) throw PreconditionError("alphabet size is not a power of two");
  return n;
}

}  // namespace

encodings::XorEncoding encoding_from_strategy(const QuantumStrategy& s,
                                              const TwoPlayerGame& game) {
  check_labels(game, s);
  const std::size_t size = game.alice_inputs();
  if (game.alice_outputs != size || game.bob_outputs != size || game.bob_inputs() != 2) {
    throw DimensionError("encoding_from_strategy: game is not of the CHSH_n shape");
  }
  encodings::XorEncoding enc;
  enc.n = log2_exact(size);
  const std::size_t da = s.alice_dim();
  const std::size_t db = s.bob_dim();
  const auto psi = as_matrix(s.state.amplitudes(), da, db);
  double total = 0.0;
  for (std::size_t x = 0; x < size; ++x) {
    for (std::size_t a = 0; a < size; ++a) {
      // Bob's unnormalized state (Psi^dag A Psi)^T
      const ComplexMatrix sigma = (psi.adjoint() * s.alice[x][a] * psi).transpose();
      const double mass = sigma.trace().real();
      const double weight = game.alice_dist[x] * mass;
      if (weight < 1e-14) continue;
      enc.entries.push_back({a, x ^ a, weight, DensityOperator::normalized(sigma)});
      total += weight;
    }
  }
  for (auto& e : enc.entries) e.prior /= total;
  enc.validate();
  return enc;
}

QuantumStrategy strategy_from_encoding(const encodings::XorEncoding& enc) {
  enc.validate();
  const std::size_t size = std::size_t{1} << enc.n;
  const std::size_t d = enc.dim();

  std::vector<double> mass(size, 0.0);
  for (const auto& e : enc.entries) mass[e.x0 ^ e.x1] += e.prior;
  for (double m : mass) {
    if (std::abs(m - 1.0 / static_cast<double>(size)) > 1e-9) {
      throw PreconditionError(
          "strategy_from_encoding: XOR values must be equally likely");
    }
  }

  // |Omega_x> on A2 (x0) A3 (x1) A' (purifying) B, conditioned on x0 + x1 = x.
  const std::vector<std::size_t> dims{size, size, d, d};
  const SplitSystem sys(dims, {0, 1, 2});
  const auto dd = static_cast<Eigen::Index>(d * d);
  std::vector<ComplexVector> omega(size, ComplexVector::Zero(
                                             static_cast<Eigen::Index>(size * size) * dd));
  for (const auto& e : enc.entries) {
    if (e.prior <= 0.0) continue;
    const std::size_t x = e.x0 ^ e.x1;
    const auto offset = static_cast<Eigen::Index>(e.x0 * size + e.x1) * dd;
    omega[x].segment(offset, dd) =
        std::sqrt(e.prior / mass[x]) * purify(e.state).amplitudes();
  }

  const std::vector<std::size_t> alice_regs{0, 1, 2};
  const PureState start(omega[0]);
  const auto block = static_cast<Eigen::Index>(size * d);
  std::vector<Povm> alice;
  for (std::size_t x = 0; x < size; ++x) {
    ComplexMatrix u;
    try {
      u = uhlmann_unitary(start, PureState(omega[x]), sys, alice_regs);
    } catch (const PreconditionError&) {
      throw PreconditionError("strategy_from_encoding: the encoding does not hide the XOR");
    }
    std::vector<ComplexMatrix> el;
    for (std::size_t a = 0; a < size; ++a) {
      // U^dag (|a><a| (x) I) U
      const ComplexMatrix rows = u.middleRows(static_cast<Eigen::Index>(a) * block, block);
      el.push_back(hermitian_part(rows.adjoint() * rows));
    }
    alice.emplace_back(std::move(el));
  }
  std::vector<Povm> bob{
      encodings::optimal_measurement(enc, encodings::target_x0(), size),
      encodings::optimal_measurement(enc, encodings::target_x1(), size)};
  return QuantumStrategy{start, sys, std::move(alice), std::move(bob)};
}

}  // namespace xorlab::games
