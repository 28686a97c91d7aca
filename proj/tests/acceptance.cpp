// Acceptance suite: one PASS/FAIL line per criterion, details indented below.
// Report-only comparisons are printed as INFO lines and never gate the exit
// code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "xorlab/encodings.hpp"
#include "xorlab/games.hpp"
#include "xorlab/protocols.hpp"
#include "xorlab/sdp.hpp"
#include "xorlab/sequential.hpp"

using namespace xorlab;

namespace {

const double kCos2 = std::pow(std::cos(std::numbers::pi / 8.0), 2);

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, const std::string& what) {
    if (!ok) pass = false;
    notes.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  void info(const std::string& what) { notes.push_back("info " + what); }
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// Half-up to three decimals, as the table prints.
std::string fixed3(double v) {
  return fmt("%.3f", std::floor(v * 1000.0 + 0.5 + 1e-9) / 1000.0);
}

Outcome tsirelson() {
  Outcome o;
  Rng rng(1);
  const auto ss = games::seesaw(games::make_chsh(), 2, 20, 300, rng);
  o.check(ss.value >= 0.8535, fmt("see-saw(CHSH, dim 2, 20 restarts) = %.10f >= 0.8535", ss.value));
  const double npa = sdp::npa1_value(games::make_chsh());
  o.check(npa >= 0.8535 && npa <= 0.8537, fmt("npa1(CHSH) = %.10f in [0.8535, 0.8537]", npa));
  const double can = games::evaluate(games::make_chsh(), games::canonical_chsh_strategy());
  o.check(std::abs(can - kCos2) <= 1e-12, fmt("canonical strategy |%.15f - cos^2(pi/8)| = %.2e",
                                              can, std::abs(can - kCos2)));
  return o;
}

Outcome sandwich_sweep() {
  Outcome o;
  sequential::SweepConfig cfg;
  cfg.dims = {2, 4, 8};
  cfg.samples = 10000;
  cfg.seed = 1;
  const auto r = sequential::run_sweep(cfg);
  for (const auto& s : r.summaries) {
    o.check(s.accepted == 10000 && s.sandwich_violations == 0 && s.gamma_violations == 0,
            "dim " + std::to_string(s.dim) + ": accepted " + std::to_string(s.accepted) +
                ", sandwich violations " + std::to_string(s.sandwich_violations) +
                ", gamma violations " + std::to_string(s.gamma_violations) +
                ", acceptance rate " + fmt("%.3f", s.acceptance_rate()));
  }

  // C = D: observed = 1 = upper, Gamma = its bound.
  Rng rng(2);
  double worst_obs = 0.0, worst_gamma = 0.0;
  int checked = 0;
  for (std::size_t dim : {2, 4, 8}) {
    for (int t = 0; t < 200; ++t) {
      const auto c = sample_projector(dim, 1 + t % (dim - 1), rng);
      const auto psi = sample_pure_state(dim, rng);
      const auto rep = sequential::measure_sandwich(psi, c, c);
      if (!rep.in_regime) continue;
      ++checked;
      const auto g = sequential::gamma(psi, c, c);
      worst_obs = std::max({worst_obs, std::abs(rep.observed - 1.0), std::abs(rep.upper - 1.0)});
      worst_gamma = std::max(worst_gamma, std::abs(g.gamma - g.bound));
    }
  }
  o.check(checked > 0 && worst_obs <= 1e-9 && worst_gamma <= 1e-9,
          "C = D saturation on " + std::to_string(checked) +
              fmt(" instances: max |observed - 1| = %.2e, max |Gamma - bound| = %.2e", worst_obs,
                  worst_gamma));
  return o;
}

Outcome learning_sweep() {
  Outcome o;
  Rng rng(3);
  int bit_fail = 0;
  double bit_margin = 1e300;
  for (int t = 0; t < 200; ++t) {
    const auto enc = encodings::sample_encoding(1, 2 + t % 4, rng);
    const auto r = encodings::theorem1_check(enc);
    bit_margin = std::min(bit_margin, r.p_xor_optimal - r.bit_bound);
    if (r.p_xor_optimal < r.bit_bound - 1e-9) ++bit_fail;
  }
  o.check(bit_fail == 0, "200 bit encodings: failures " + std::to_string(bit_fail) +
                             fmt(", min p_xor - (2c-1)^2 = %.3e", bit_margin));

  int taken = 0, str_fail = 0, drawn = 0;
  double str_margin = 1e300, gap = 0.0;
  while (taken < 50 && drawn < 2000) {
    const unsigned n = taken < 25 ? 2 : 3;
    ++drawn;
    const auto enc = encodings::sample_structured_encoding(n, rng);
    const auto r = encodings::theorem1_check(enc);
    if (r.c < 0.5) continue;
    ++taken;
    str_margin = std::min(str_margin, r.p_pair - r.string_bound);
    gap = std::max(gap, r.solver_gap);
    if (r.p_pair < r.string_bound - 1e-9) ++str_fail;
  }
  o.check(taken == 50 && str_fail == 0,
          std::to_string(taken) + " string encodings (n = 2, 3; " + std::to_string(drawn) +
              " drawn): failures " + std::to_string(str_fail) +
              fmt(", min p_pair - c(2c-1)^2 = %.3e, max solver gap %.1e", str_margin, gap));
  return o;
}

Outcome analytic_rows() {
  Outcome o;
  const char* ours[] = {"1.000", "0.854", "0.750", "0.677", "0.625"};
  const char* lower[] = {"0.750", "0.625", "0.563", "0.531", "0.516"};
  std::string a = "Our Bound:  ", b = "Lower Bound:";
  bool ok = true;
  for (unsigned n = 1; n <= 5; ++n) {
    const std::string u = fixed3(games::upper_bound_chsh_n(n));
    const std::string l =
        fixed3(games::evaluate(games::make_chsh_n(n), games::guessing_strategy_chsh_n(n)));
    ok = ok && u == ours[n - 1] && l == lower[n - 1];
    a += " " + u;
    b += " " + l;
  }
  o.check(ok, a + " | " + b);
  o.info("reference table truncates: 0.562, 0.531, 0.515 and 0.676; formula values rounded here");
  return o;
}

Outcome solver_rows() {
  Outcome o;
  const double reference[] = {0.853, 0.780, 0.743, 0.725, 0.716};
  const std::size_t restarts[] = {20, 20, 10, 3, 2};
  const std::size_t iters[] = {300, 300, 300, 200, 150};
  for (unsigned n = 1; n <= 5; ++n) {
    const auto g = games::make_chsh_n(n);
    const auto t0 = std::chrono::steady_clock::now();
    const double npa = sdp::npa1_value(g);
    Rng rng = derive_rng(1, n);
    const double ss = games::seesaw(g, std::size_t{1} << n, restarts[n - 1], iters[n - 1], rng).value;
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double conj = games::conjectured_value_chsh_n(n);
    const std::string tag = "n = " + std::to_string(n) + ": ";
    if (n == 1) {
      o.check(npa >= 0.8535 && npa <= 0.8537, tag + fmt("npa1 = %.6f (criterion 1 range)", npa));
    }
    o.check(ss <= npa + 1e-6 && npa <= 1.0 + 1e-9 && npa >= conj - 1e-3,
            tag + fmt("see-saw %.6f <= npa1 %.6f <= 1, npa1 >= conjectured %.6f - 1e-3", ss, npa,
                      conj));
    if (n >= 2) {
      o.info(tag +
             fmt("npa1 vs reference %.3f: |diff| = %.4f", reference[n - 1],
                 std::abs(npa - reference[n - 1])) +
             (std::abs(npa - reference[n - 1]) <= 5e-3 ? " (stretch goal met)"
                                                   : " (stretch goal missed)"));
    }
    if (n == 2 || n == 3) {
      o.info(tag + fmt("see-saw %.6f vs conjectured %.6f: soft target ", ss, conj) +
             (ss >= conj - 1e-3 ? "PASS" : "FAIL"));
    } else if (n >= 4) {
      o.info(tag + fmt("see-saw %.6f vs conjectured %.6f (report only)", ss, conj));
    }
    o.info(tag + fmt("%.1f s", secs));
  }
  return o;
}

Outcome weighted() {
  Outcome o;
  for (double q : {0.25, 0.5, 0.75}) {
    Rng rng = derive_rng(6, static_cast<std::uint64_t>(q * 100));
    const double v = games::seesaw(games::make_weighted_chsh(q), 2, 20, 300, rng).value;
    const double bound = encodings::weighted_decoding_bound(q);
    o.check(v >= bound - 1e-3 && v <= bound + 1e-6,
            fmt("q = %.2f: see-saw %.10f, bound %.10f", q, v, bound));
  }
  return o;
}

Outcome round_trips() {
  Outcome o;
  Rng rng(7);
  double worst_ot = 0.0, worst_strategy = 0.0, worst_back = 0.0;
  bool hiding = true;
  for (int t = 0; t < 20; ++t) {
    const unsigned n = 1 + t % 2;
    const auto enc = encodings::sample_hiding_encoding(n, 2, rng);
    const double c = encodings::theorem1_check(enc).c;
    const auto ot = protocols::ot_from_encoding(enc);
    worst_ot = std::max(worst_ot, std::abs(ot.honest_p - c));
    const auto s = games::strategy_from_encoding(enc);
    worst_strategy = std::max(worst_strategy, std::abs(games::evaluate(games::make_chsh_n(n), s) - c));
    const auto back = games::encoding_from_strategy(s, games::make_chsh_n(n));
    hiding = hiding && encodings::hides_xor(back, 1e-8);
    worst_back = std::max(worst_back, std::abs(encodings::theorem1_check(back).c - c));
  }
  Rng srng(8);
  for (int t = 0; t < 20; ++t) {
    const unsigned n = 1 + t % 2;
    const auto g = games::make_chsh_n(n);
    const auto back = games::encoding_from_strategy(games::random_strategy(g, 2, 2, srng), g);
    hiding = hiding && encodings::hides_xor(back, 1e-8);
  }
  o.check(worst_ot <= 1e-6, fmt("encoding -> OT: max |p_OT - c| = %.2e over 20", worst_ot));
  o.check(worst_strategy <= 1e-6 && worst_back <= 1e-6,
          fmt("encoding -> strategy -> encoding: max |value - c| = %.2e, max |c' - c| = %.2e",
              worst_strategy, worst_back));
  o.check(hiding, "encoding_from_strategy outputs hide the XOR at 1e-8 (40 strategies)");
  return o;
}

Outcome ot_bounds() {
  Outcome o;
  const auto bit = protocols::ot_tradeoff_bound(protocols::BoundMode::bit);
  const auto str = protocols::ot_tradeoff_bound(protocols::BoundMode::string);
  o.check(std::abs(bit.bound - 0.599) <= 5e-4, fmt("bit bound %.6f (t* = %.6f)", bit.bound, bit.t_star));
  o.check(std::abs(str.bound - 0.5852) <= 5e-4,
          fmt("string bound %.6f (t* = %.6f)", str.bound, str.t_star));

  // Every instance built here: BBBW, the trivial encoding, and random hiding
  // encodings (bits through the coin flip, strings through the cheating inequality only).
  std::vector<encodings::XorEncoding> encs{
      encodings::canonical_bbbw_encoding(),
      encodings::uniform_encoding(1, std::vector<DensityOperator>(
                                         4, DensityOperator::maximally_mixed(2)))};
  Rng rng(9);
  for (int t = 0; t < 10; ++t) encs.push_back(encodings::sample_hiding_encoding(1 + t % 2, 2, rng));
  int t2 = 0, kit = 0, built = 0, flips = 0;
  for (const auto& e : encs) {
    const auto ot = protocols::ot_from_encoding(e);
    const auto ch = protocols::ot_cheat_probs(ot);
    ++built;
    t2 += ch.theorem2_ok ? 0 : 1;
    if (ot.mode == protocols::OtMode::bit) {
      ++flips;
      kit += protocols::coinflip_from_ot(ot, ch).kitaev_ok ? 0 : 1;
    }
  }
  o.check(t2 == 0 && kit == 0, std::to_string(built) + " OT instances, " + std::to_string(flips) +
                                   " coin flips: cheating-inequality failures " + std::to_string(t2) +
                                   ", Kitaev failures " + std::to_string(kit));

  const double c1 = protocols::secure_ot_ceiling(1, protocols::OtMode::string);
  o.check(std::abs(c1 - kCos2) <= 1e-12, fmt("ceiling(1) = %.15f", c1));
  bool power = true;
  for (unsigned n = 1; n <= 8; ++n) {
    power = power && protocols::secure_ot_ceiling(n, protocols::OtMode::tensor) ==
                         std::pow(kCos2, static_cast<double>(n));
  }
  o.check(power, "tensor ceiling equals cos^2(pi/8)^n for n = 1..8");
  return o;
}

Outcome oracles() {
  Outcome o;
  Rng rng(10);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t dim = 2 + t % 3;
    const auto r = sample_density(dim, 1 + t % dim, rng);
    const auto s = sample_density(dim, 1 + (t / 3) % dim, rng);
    const double p = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
    const double h = sdp::helstrom_value(p * r.matrix(), (1 - p) * s.matrix());
    worst = std::max(worst, std::abs(sdp::discrimination({r, s}, {p, 1 - p}) - h));
  }
  o.check(worst <= 1e-6, fmt("discrimination vs Helstrom, 50 instances: max diff %.2e", worst));
  const auto s = games::canonical_chsh_strategy();
  const double v = games::evaluate(games::make_chsh_tensor(2), games::parallel_strategy({s, s}));
  const double c4 = std::pow(kCos2, 2);
  o.check(std::abs(v - c4) <= 1e-12, fmt("CHSH^2 tensor strategy %.15f, |diff| = %.2e", v,
                                         std::abs(v - c4)));
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all{
      {1, "Tsirelson reproduction", tsirelson},
      {2, "sequential-measurement sweep", sandwich_sweep},
      {3, "learning-relation sweep", learning_sweep},
      {4, "table analytic rows", analytic_rows},
      {5, "table solver rows", solver_rows},
      {6, "weighted CHSH", weighted},
      {7, "reduction round trips", round_trips},
      {8, "OT bounds", ot_bounds},
      {9, "oracle equivalences", oracles},
  };
  int failed = 0;
  for (const auto& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %d: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs);
    for (const auto& n : o.notes) std::printf("    %s\n", n.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}
