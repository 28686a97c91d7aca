#include "xorlab/sequential.hpp"

#include <algorithm>
#include <cmath>

#include "xorlab/parallel.hpp"

namespace xorlab::sequential {

namespace {

double angle_of(double success) {
  return std::acos(std::sqrt(std::clamp(success, 0.0, 1.0)));
}

// Rounding slack on the 1/2 threshold, so boundary cases like alpha = pi/4
// are inside the regime.
constexpr double kRegimeSlack = 1e-12;

bool in_regime(double pc, double pd) {
  return pc >= 0.5 - kRegimeSlack && pd >= 0.5 - kRegimeSlack;
}

struct Statistics {
  double pc = 0.0;  // ||C psi||^2
  double pd = 0.0;  // ||D psi||^2
  double both = 0.0;
};

Statistics statistics(const PureState& psi, const Projector& c, const Projector& d) {
  if (c.dim() != psi.dim() || d.dim() != psi.dim()) {
    throw DimensionError("sequential: projector and state dimensions differ");
  }
  const auto& v = psi.amplitudes();
  const ComplexMatrix& cm = c.matrix();
  const ComplexMatrix& dm = d.matrix();
  const ComplexVector cv = cm * v;
  const ComplexVector dv = dm * v;
  const ComplexVector cdv = cm * dv;
  const ComplexVector not_d = v - dv;
  const ComplexVector not_c_not_d = not_d - cm * not_d;
  return {cv.squaredNorm(), dv.squaredNorm(),
          cdv.squaredNorm() + not_c_not_d.squaredNorm()};
}

}  // namespace

SandwichReport measure_sandwich(const PureState& psi, const Projector& c,
                                const Projector& d) {
  const auto s = statistics(psi, c, d);
  SandwichReport r;
  r.alpha = angle_of(s.pc);
  r.beta = angle_of(s.pd);
  r.observed = s.both;
  r.lower = std::pow(std::cos(r.alpha + r.beta), 2);
  r.upper = std::pow(std::cos(r.alpha - r.beta), 2);
  r.margin_low = r.observed - r.lower;
  r.margin_high = r.upper - r.observed;
  r.in_regime = in_regime(s.pc, s.pd);
  return r;
}

SandwichReport sandwich_check(const PureState& psi, const Projector& c,
                              const Projector& d) {
  auto r = measure_sandwich(psi, c, d);
  if (!r.in_regime) {
    throw PreconditionError("sandwich_check: a success probability is below 1/2");
  }
  return r;
}

GammaReport gamma(const PureState& psi, const Projector& c, const Projector& d) {
  const auto s = statistics(psi, c, d);
  if (!in_regime(s.pc, s.pd)) {
    throw PreconditionError("gamma: a success probability is below 1/2");
  }
  const double alpha = angle_of(s.pc);
  const double beta = angle_of(s.pd);
  GammaReport g;
  g.gamma = s.both - (s.pc * s.pd + (1.0 - s.pc) * (1.0 - s.pd));
  g.bound = 0.5 * std::sin(2.0 * beta) * std::sin(2.0 * alpha);
  g.saturated_positive = std::abs(g.gamma - g.bound) <= kBoundSlack;
  g.saturated_negative = std::abs(g.gamma + g.bound) <= kBoundSlack;
  return g;
}

// ---------------------------------------------------------------------------

std::size_t SweepResult::violations() const {
  std::size_t n = 0;
  for (const auto& s : summaries) {
    n += s.sandwich_violations + s.gamma_violations + s.symmetry_violations;
  }
  return n;
}

namespace {

struct ShardOutput {
  std::vector<SweepRecord> records;
  DimSummary summary;
};

ShardOutput run_shard(std::size_t dim, std::size_t shard, std::size_t quota,
                      std::uint64_t seed) {
  ShardOutput out;
  out.summary.dim = dim;
  Rng rng = derive_rng(seed, dim * 1000003u + shard);
  const std::size_t max_rank = dim > 1 ? dim - 1 : 1;
  std::uniform_int_distribution<std::size_t> rank_dist(1, max_rank);
  const std::size_t max_attempts = 10000 * (quota + 1);

  while (out.summary.accepted < quota && out.summary.attempted < max_attempts) {
    ++out.summary.attempted;
    const PureState psi = sample_pure_state(dim, rng);
    const std::size_t rc = rank_dist(rng);
    const std::size_t rd = rank_dist(rng);
    const Projector c = sample_projector(dim, rc, rng);
    const Projector d = sample_projector(dim, rd, rng);

    const SandwichReport sw = measure_sandwich(psi, c, d);
    if (!sw.in_regime) {
      ++out.summary.outside_regime;
      if (sw.violated()) ++out.summary.outside_regime_out_of_bounds;
      continue;
    }

    SweepRecord rec;
    rec.dim = dim;
    rec.shard = shard;
    rec.index = out.summary.accepted++;
    rec.rank_c = rc;
    rec.rank_d = rd;
    rec.sandwich = sw;
    rec.swapped = measure_sandwich(psi, d, c);
    rec.gamma = gamma(psi, c, d);

    const bool sandwich_bad = sw.violated();
    const bool gamma_bad = rec.gamma.violated();
    // Swapping the order keeps alpha, beta and hence the interval.
    const bool symmetry_bad = rec.swapped.observed < sw.lower - kBoundSlack ||
                              rec.swapped.observed > sw.upper + kBoundSlack;
    out.summary.sandwich_violations += sandwich_bad;
    out.summary.gamma_violations += gamma_bad;
    out.summary.symmetry_violations += symmetry_bad;
    rec.pass = !(sandwich_bad || gamma_bad || symmetry_bad);
    if (!rec.pass) {
      rec.psi = psi;
      rec.c = c;
      rec.d = d;
    }
    out.records.push_back(std::move(rec));
  }
  return out;
}

}  // namespace

SweepResult run_sweep(const SweepConfig& config) {
  for (auto d : config.dims) {
    if (d < 2) throw PreconditionError("run_sweep: dimensions must be at least 2");
  }
  const std::size_t shards = std::max<std::size_t>(1, config.shards);
  std::vector<ShardOutput> outputs(config.dims.size() * shards);
  parallel_for(outputs.size(), [&](std::size_t task) {
    const std::size_t di = task / shards;
    const std::size_t shard = task % shards;
    // spread the quota so shards sum to exactly `samples`
    const std::size_t quota =
        config.samples / shards + (shard < config.samples % shards ? 1 : 0);
    outputs[task] = run_shard(config.dims[di], shard, quota, config.seed);
  });

  SweepResult result;
  for (std::size_t di = 0; di < config.dims.size(); ++di) {
    DimSummary total;
    total.dim = config.dims[di];
    for (std::size_t s = 0; s < shards; ++s) {
      auto& out = outputs[di * shards + s];
      total.accepted += out.summary.accepted;
      total.attempted += out.summary.attempted;
      total.sandwich_violations += out.summary.sandwich_violations;
      total.gamma_violations += out.summary.gamma_violations;
      total.symmetry_violations += out.summary.symmetry_violations;
      total.outside_regime += out.summary.outside_regime;
      total.outside_regime_out_of_bounds += out.summary.outside_regime_out_of_bounds;
      for (auto& r : out.records) result.records.push_back(std::move(r));
    }
    result.summaries.push_back(total);
  }
  return result;
}

}  // namespace xorlab::sequential
