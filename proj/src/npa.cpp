// Level-1 moment matrix of a two-player game, block-diagonalized by the
// game's symmetry group.
//
// The moment matrix G is indexed by {1} and all projectors A_x^a, B_y^b. It is
// real symmetric and PSD with G_00 = 1, G_ii = G_0i, G = 0 between distinct
// outcomes of one input, and sum_a G_{0,(x,a)} = 1. Its objective is
// sum p(x) p(y) V(x,y,a,b) G_{(x,a),(y,b)}.
//
// The symmetry group is an elementary abelian 2-group generated by commuting
// involutions permuting the indices. An invariant G is block-diagonal in the
// basis q_{u,O}[h.rep(O)] = chi_u(h) / sqrt|O|, one block per character u,
// holding the orbits O whose stabilizer lies in ker chi_u.

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "xorlab/games.hpp"
#include "xorlab/sdp.hpp"

namespace xorlab::sdp {

namespace {

using Perm = std::vector<std::size_t>;

struct Entry {
  std::size_t i;
  std::size_t j;
  double coef;  // coefficient of G_ij, i <= j
};

using Linear = std::vector<Entry>;

class Indexing {
 public:
  explicit Indexing(const games::TwoPlayerGame& g)
      : na_(g.alice_outputs), nb_(g.bob_outputs), bob_offset_(1 + g.alice_inputs() * na_),
        size_(bob_offset_ + g.bob_inputs() * nb_) {}

  std::size_t alice(std::size_t x, std::size_t a) const { return 1 + x * na_ + a; }
  std::size_t bob(std::size_t y, std::size_t b) const { return bob_offset_ + y * nb_ + b; }
  std::size_t size() const { return size_; }
  std::size_t bob_offset() const { return bob_offset_; }

 private:
  std::size_t na_;
  std::size_t nb_;
  std::size_t bob_offset_;
  std::size_t size_;
};

// Generators lifted to permutations of the moment-matrix indices, kept only
// if they are commuting involutions that preserve the whole program.
std::vector<Perm> lift_generators(const games::TwoPlayerGame& g, const Indexing& idx) {
  const std::size_t nx = g.alice_inputs();
  const std::size_t ny = g.bob_inputs();
  const std::size_t na = g.alice_outputs;
  const std::size_t nb = g.bob_outputs;
  std::vector<Perm> gens;
  for (const auto& s : g.symmetries) {
    if (s.alice.size() != nx * na || s.bob.size() != ny * nb) return {};
    Perm p(idx.size());
    p[0] = 0;
    for (std::size_t k = 0; k < nx * na; ++k) {
      if (s.alice[k] >= nx * na) return {};
      p[1 + k] = 1 + s.alice[k];
    }
    for (std::size_t k = 0; k < ny * nb; ++k) {
      if (s.bob[k] >= ny * nb) return {};
      p[idx.bob_offset() + k] = idx.bob_offset() + s.bob[k];
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[p[i]] != i) return {};
    }
    // inputs map to inputs as a whole
    for (std::size_t x = 0; x < nx; ++x) {
      const std::size_t target = s.alice[x * na] / na;
      for (std::size_t a = 0; a < na; ++a) {
        if (s.alice[x * na + a] / na != target) return {};
      }
    }
    for (std::size_t y = 0; y < ny; ++y) {
      const std::size_t target = s.bob[y * nb] / nb;
      for (std::size_t b = 0; b < nb; ++b) {
        if (s.bob[y * nb + b] / nb != target) return {};
      }
    }
    for (std::size_t x = 0; x < nx; ++x) {
      for (std::size_t y = 0; y < ny; ++y) {
        for (std::size_t a = 0; a < na; ++a) {
          const std::size_t ga = s.alice[x * na + a];
          for (std::size_t b = 0; b < nb; ++b) {
            const std::size_t gb = s.bob[y * nb + b];
            if (g.weight(x, y, a, b) != g.weight(ga / na, gb / nb, ga % na, gb % nb)) return {};
          }
        }
      }
    }
    gens.push_back(std::move(p));
  }
  for (std::size_t a = 0; a < gens.size(); ++a) {
    for (std::size_t b = a + 1; b < gens.size(); ++b) {
      for (std::size_t i = 0; i < idx.size(); ++i) {
        if (gens[a][gens[b][i]] != gens[b][gens[a][i]]) return {};
      }
    }
  }
  return gens;
}

class SymmetryReduction {
 public:
  SymmetryReduction(std::vector<Perm> gens, std::size_t size) : size_(size) {
    // Too large a group table is not worth it; fall back to no reduction.
    if (gens.size() > 20 || (std::size_t{1} << gens.size()) * size > 50'000'000) gens.clear();
    const std::size_t order = std::size_t{1} << gens.size();
    k_ = gens.size();
    elements_.resize(order);
    elements_[0].resize(size);
    for (std::size_t i = 0; i < size; ++i) elements_[0][i] = i;
    for (std::size_t m = 1; m < order; ++m) {
      const std::size_t low = static_cast<std::size_t>(std::countr_zero(m));
      const Perm& rest = elements_[m & (m - 1)];
      Perm p(size);
      for (std::size_t i = 0; i < size; ++i) p[i] = gens[low][rest[i]];
      elements_[m] = std::move(p);
    }

    // orbits, with the group element reaching each member from its representative
    orbit_of_.assign(size, npos);
    reach_.assign(size, 0);
    for (std::size_t i = 0; i < size; ++i) {
      if (orbit_of_[i] != npos) continue;
      const std::size_t id = reps_.size();
      reps_.push_back(i);
      orbit_size_.push_back(0);
      stabilizer_.emplace_back();
      for (std::size_t m = 0; m < order; ++m) {
        const std::size_t j = elements_[m][i];
        if (j == i) stabilizer_.back().push_back(m);
        if (orbit_of_[j] == npos) {
          orbit_of_[j] = id;
          reach_[j] = m;
          ++orbit_size_[id];
        }
      }
    }

    // blocks: one per character, holding the orbits it is trivial on
    for (std::size_t u = 0; u < order; ++u) {
      std::vector<std::size_t> cols(reps_.size(), npos);
      std::size_t count = 0;
      for (std::size_t o = 0; o < reps_.size(); ++o) {
        bool ok = true;
        for (auto s : stabilizer_[o]) {
          if (character(u, s) < 0) {
            ok = false;
            break;
          }
        }
        if (ok) cols[o] = count++;
      }
      if (count == 0) continue;
      block_of_char_.emplace(u, block_sizes_.size());
      block_sizes_.push_back(count);
      column_.push_back(std::move(cols));
      chars_.push_back(u);
    }
  }

  std::size_t order() const { return elements_.size(); }
  const std::vector<std::size_t>& block_sizes() const { return block_sizes_; }

  // Smallest image of a linear functional under the group.
  Linear canonical(const Linear& f) const {
    Linear best;
    for (const auto& p : elements_) {
      Linear img;
      img.reserve(f.size());
      for (const auto& e : f) {
        const std::size_t a = p[e.i];
        const std::size_t b = p[e.j];
        img.push_back({std::min(a, b), std::max(a, b), e.coef});
      }
      std::sort(img.begin(), img.end(), less);
      if (best.empty() || std::lexicographical_compare(img.begin(), img.end(), best.begin(),
                                                       best.end(), less)) {
        best = std::move(img);
      }
    }
    return best;
  }

  // Canonical representative of the orbit of the index pair (i, j).
  std::pair<std::size_t, std::size_t> canonical_pair(std::size_t i, std::size_t j) const {
    auto from = [&](std::size_t a, std::size_t b) {
      const std::size_t o = orbit_of_[a];
      const std::size_t mapped = elements_[reach_[a]][b];
      std::size_t best = mapped;
      for (auto s : stabilizer_[o]) best = std::min(best, elements_[s][mapped]);
      return std::make_pair(reps_[o], best);
    };
    return std::min(from(i, j), from(j, i));
  }

  // Terms of sum coef G_ij in the block variables.
  std::vector<SparseTerm> reduce(const Linear& f) const {
    std::map<std::tuple<std::size_t, std::size_t, std::size_t>, double> acc;
    for (const auto& e : f) {
      const std::size_t oi = orbit_of_[e.i];
      const std::size_t oj = orbit_of_[e.j];
      const double norm =
          1.0 / std::sqrt(static_cast<double>(orbit_size_[oi] * orbit_size_[oj]));
      for (std::size_t blk = 0; blk < block_sizes_.size(); ++blk) {
        const std::size_t ci = column_[blk][oi];
        const std::size_t cj = column_[blk][oj];
        if (ci == npos || cj == npos) continue;
        const std::size_t u = chars_[blk];
        const double v =
            e.coef * norm * character(u, reach_[e.i]) * character(u, reach_[e.j]);
        acc[{blk, std::min(ci, cj), std::max(ci, cj)}] += ci == cj ? v : 0.5 * v;
      }
    }
    // G_ij = sum_blk (Q X Q^T)_ij; an off-diagonal block entry X_pq with p < q
    // appears as SparseTerm (p, q, v) contributing 2 v X_pq, hence the halves.
    std::vector<SparseTerm> terms;
    for (const auto& [key, v] : acc) {
      if (std::abs(v) < 1e-15) continue;
      terms.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), Complex(v, 0.0)});
    }
    return terms;
  }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  static bool less(const Entry& a, const Entry& b) {
    return std::tie(a.i, a.j, a.coef) < std::tie(b.i, b.j, b.coef);
  }

  static double character(std::size_t u, std::size_t m) {
    return (std::popcount(u & m) & 1) ? -1.0 : 1.0;
  }

  std::size_t size_;
  std::size_t k_ = 0;
  std::vector<Perm> elements_;
  std::vector<std::size_t> orbit_of_;
  std::vector<std::size_t> reach_;
  std::vector<std::size_t> reps_;
  std::vector<std::size_t> orbit_size_;
  std::vector<std::vector<std::size_t>> stabilizer_;
  std::vector<std::size_t> block_sizes_;
  std::vector<std::vector<std::size_t>> column_;
  std::vector<std::size_t> chars_;
  std::map<std::size_t, std::size_t> block_of_char_;
};

}  // namespace

NpaResult npa1(const games::TwoPlayerGame& game, const SolverOptions& options) {
  game.validate();
  const Indexing idx(game);
  const std::size_t nx = game.alice_inputs();
  const std::size_t ny = game.bob_inputs();
  const std::size_t na = game.alice_outputs;
  const std::size_t nb = game.bob_outputs;
  const SymmetryReduction sym(lift_generators(game, idx), idx.size());

  // Constraints, one representative per group orbit.
  std::set<std::vector<std::tuple<std::size_t, std::size_t, double>>> seen;
  std::vector<std::pair<Linear, double>> constraints;
  auto add = [&](Linear f, double rhs) {
    const Linear c = sym.canonical(f);
    std::vector<std::tuple<std::size_t, std::size_t, double>> key;
    for (const auto& e : c) key.emplace_back(e.i, e.j, e.coef);
    key.emplace_back(0, 0, rhs);
    if (seen.insert(std::move(key)).second) constraints.emplace_back(std::move(f), rhs);
  };
  add({{0, 0, 1.0}}, 1.0);
  for (std::size_t i = 1; i < idx.size(); ++i) add({{i, i, 1.0}, {0, i, -1.0}}, 0.0);
  for (std::size_t x = 0; x < nx; ++x) {
    Linear sum;
    for (std::size_t a = 0; a < na; ++a) {
      sum.push_back({0, idx.alice(x, a), 1.0});
      for (std::size_t a2 = a + 1; a2 < na; ++a2) {
        add({{idx.alice(x, a), idx.alice(x, a2), 1.0}}, 0.0);
      }
    }
    add(std::move(sum), 1.0);
  }
  for (std::size_t y = 0; y < ny; ++y) {
    Linear sum;
    for (std::size_t b = 0; b < nb; ++b) {
      sum.push_back({0, idx.bob(y, b), 1.0});
      for (std::size_t b2 = b + 1; b2 < nb; ++b2) {
        add({{idx.bob(y, b), idx.bob(y, b2), 1.0}}, 0.0);
      }
    }
    add(std::move(sum), 1.0);
  }

  // Objective, accumulated per orbit of index pairs.
  std::map<std::pair<std::size_t, std::size_t>, double> objective;
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      for (std::size_t a = 0; a < na; ++a) {
        for (std::size_t b = 0; b < nb; ++b) {
          const double w = game.weight(x, y, a, b);
          if (w == 0.0) continue;
          objective[sym.canonical_pair(idx.alice(x, a), idx.bob(y, b))] += w;
        }
      }
    }
  }

  SdpProblem p;
  p.blocks = sym.block_sizes();
  p.real = true;
  p.sense = Sense::maximize;
  for (const auto& [pair, w] : objective) {
    auto terms = sym.reduce({{pair.first, pair.second, w}});
    p.objective.insert(p.objective.end(), terms.begin(), terms.end());
  }
  for (const auto& [f, rhs] : constraints) p.constraints.push_back({sym.reduce(f), rhs});

  NpaResult r;
  r.moment_dim = idx.size();
  r.group_order = sym.order();
  r.block_sizes = p.blocks;
  r.solution = solve(p, options);
  r.value = r.solution.value;
  return r;
}

double npa1_value(const games::TwoPlayerGame& game, double tol) {
  SolverOptions o;
  o.tol = tol;
  const auto r = npa1(game, o);
  if (r.solution.status != SdpStatus::optimal) {
    throw SolverError("npa1_value: solver status " + to_string(r.solution.status),
                      r.solution.status);
  }
  return r.value;
}

}  // namespace xorlab::sdp
