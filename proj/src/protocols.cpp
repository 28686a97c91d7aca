#include "xorlab/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace xorlab::protocols {

namespace {

const double kCos2Pi8 = std::pow(std::cos(std::numbers::pi / 8.0), 2);

struct Branch {
  std::uint64_t a;
  std::uint64_t d1;
  std::uint64_t d2;
};

std::vector<Branch> branches(unsigned n) {
  const std::uint64_t size = std::uint64_t{1} << n;
  std::vector<Branch> out;
  for (std::uint64_t a = 0; a < 2; ++a) {
    for (std::uint64_t d1 = 0; d1 < size; ++d1) {
      for (std::uint64_t d2 = 0; d2 < size; ++d2) out.push_back({a, d1, d2});
    }
  }
  return out;
}

std::uint64_t z0_of(const Branch& br, std::uint64_t x0, std::uint64_t x1) {
  return (br.a ? x1 : x0) ^ br.d1;
}

std::uint64_t z1_of(const Branch& br, std::uint64_t x0, std::uint64_t x1) {
  return (br.a ? x0 : x1) ^ br.d2;
}

// Learning values depend only on how a target partitions the entries, so
// branches inducing the same partition share one solve.
class LearnCache {
 public:
  explicit LearnCache(const encodings::XorEncoding& enc) : enc_(enc) {}

  double value(const encodings::Target& target) {
    std::vector<std::size_t> signature;
    std::map<std::uint64_t, std::size_t> first;
    for (const auto& e : enc_.entries) {
      if (e.prior <= 0.0) {
        signature.push_back(static_cast<std::size_t>(-1));
        continue;
      }
      auto [it, fresh] = first.try_emplace(target(e.x0, e.x1), first.size());
      signature.push_back(it->second);
    }
    auto it = cache_.find(signature);
    if (it != cache_.end()) return it->second;
    const double v = encodings::learn_value_prob(enc_, target);
    cache_.emplace(std::move(signature), v);
    return v;
  }

 private:
  const encodings::XorEncoding& enc_;
  std::map<std::vector<std::size_t>, double> cache_;
};

}  // namespace

std::string to_string(OtMode m) {
  switch (m) {
    case OtMode::bit:
      return "bit";
    case OtMode::string:
      return "string";
    case OtMode::tensor:
      return "tensor";
  }
  return "unknown";
}

OtMode parse_ot_mode(const std::string& s) {
  if (s == "bit") return OtMode::bit;
  if (s == "string") return OtMode::string;
  if (s == "tensor") return OtMode::tensor;
  throw PreconditionError("unknown OT mode '" + s + "'");
}

std::string to_string(BoundMode m) { return m == BoundMode::bit ? "bit" : "string"; }

BoundMode parse_bound_mode(const std::string& s) {
  if (s == "bit") return BoundMode::bit;
  if (s == "string") return BoundMode::string;
  throw PreconditionError("unknown bound mode '" + s + "'");
}

OtInstance ot_from_encoding(const encodings::XorEncoding& enc) {
  return ot_from_encoding(enc, enc.n == 1 ? OtMode::bit : OtMode::string);
}

OtInstance ot_from_encoding(const encodings::XorEncoding& enc, OtMode mode) {
  enc.validate();
  if (mode == OtMode::bit && enc.n != 1) {
    throw PreconditionError("ot_from_encoding: bit mode needs n = 1");
  }
  if (!encodings::hides_xor(enc, 1e-8)) {
    throw PreconditionError("ot_from_encoding: the encoding does not hide the XOR");
  }
  OtInstance ot;
  ot.n = enc.n;
  ot.encoding = enc;
  ot.mode = mode;

  const auto all = branches(enc.n);
  const double w = 1.0 / static_cast<double>(all.size());
  LearnCache cache(enc);
  if (mode == OtMode::tensor) {
    const std::uint64_t size = std::uint64_t{1} << enc.n;
    for (std::uint64_t c = 0; c < size; ++c) {
      ot.per_choice.push_back(cache.value(encodings::target_mixed(c)));
    }
  } else {
    ot.per_choice.assign(2, 0.0);
    for (const auto& br : all) {
      ot.per_choice[0] += w * cache.value([br](std::uint64_t x0, std::uint64_t x1) {
        return z0_of(br, x0, x1);
      });
      ot.per_choice[1] += w * cache.value([br](std::uint64_t x0, std::uint64_t x1) {
        return z1_of(br, x0, x1);
      });
    }
  }
  double total = 0.0;
  for (double p : ot.per_choice) total += p;
  ot.honest_p = total / static_cast<double>(ot.per_choice.size());

  std::map<std::pair<std::uint64_t, std::uint64_t>, double> outputs;
  for (const auto& br : all) {
    for (const auto& e : enc.entries) {
      outputs[{z0_of(br, e.x0, e.x1), z1_of(br, e.x0, e.x1)}] += w * e.prior;
    }
  }
  const double uniform = std::pow(0.25, enc.n);
  const std::size_t pairs = std::size_t{1} << (2 * enc.n);
  ot.output_nonuniformity = outputs.size() < pairs ? uniform : 0.0;
  for (const auto& [z, p] : outputs) {
    ot.output_nonuniformity = std::max(ot.output_nonuniformity, std::abs(p - uniform));
  }
  return ot;
}

CheatReport ot_cheat_probs(const OtInstance& ot) {
  const auto& enc = ot.encoding;
  const auto all = branches(enc.n);
  const double w = 1.0 / static_cast<double>(all.size());
  const unsigned n = enc.n;
  LearnCache cache(enc);
  CheatReport r;
  r.honest_p = ot.honest_p;
  r.a_ot = 0.5;  // Bob sends nothing
  for (const auto& br : all) {
    r.b_ot += w * cache.value([br](std::uint64_t x0, std::uint64_t x1) {
      return z0_of(br, x0, x1) ^ z1_of(br, x0, x1);
    });
    r.b_pair += w * cache.value([br, n](std::uint64_t x0, std::uint64_t x1) {
      return z0_of(br, x0, x1) | (z1_of(br, x0, x1) << n);
    });
  }
  r.theorem2_rhs = r.a_ot * (std::sqrt(r.b_ot) + 1.0);
  r.kitaev_product = r.a_ot * (std::sqrt(r.b_ot) + 1.0) / 2.0;
  r.theorem2_ok = r.honest_p <= r.theorem2_rhs + 1e-9;
  return r;
}

encodings::XorEncoding masked_encoding(const OtInstance& ot) {
  const auto& enc = ot.encoding;
  const auto all = branches(enc.n);
  const double w = 1.0 / static_cast<double>(all.size());
  const auto d = static_cast<Eigen::Index>(enc.dim());
  const auto nb = static_cast<Eigen::Index>(all.size());
  std::map<std::pair<std::uint64_t, std::uint64_t>, ComplexMatrix> acc;
  for (std::size_t k = 0; k < all.size(); ++k) {
    ComplexMatrix flag = ComplexMatrix::Zero(nb, nb);
    flag(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = 1.0;
    for (const auto& e : enc.entries) {
      if (e.prior <= 0.0) continue;
      const auto key = std::make_pair(z0_of(all[k], e.x0, e.x1), z1_of(all[k], e.x0, e.x1));
      auto [it, fresh] = acc.try_emplace(key, ComplexMatrix::Zero(d * nb, d * nb));
      it->second += w * e.prior * tensor(e.state.matrix(), flag);
    }
  }
  encodings::XorEncoding out;
  out.n = enc.n;
  double total = 0.0;
  for (const auto& [key, m] : acc) {
    const double p = m.trace().real();
    out.entries.push_back({key.first, key.second, p, DensityOperator::normalized(m)});
    total += p;
  }
  for (auto& e : out.entries) e.prior /= total;
  out.validate();
  return out;
}

CoinFlipReport coinflip_from_ot(const OtInstance& ot) {
  return coinflip_from_ot(ot, ot_cheat_probs(ot));
}

CoinFlipReport coinflip_from_ot(const OtInstance& ot, const CheatReport& cheats) {
  if (ot.mode != OtMode::bit) throw PreconditionError("coinflip_from_ot: bit OT required");
  CoinFlipReport r;
  r.honest_abort = 1.0 - ot.honest_p;
  r.a_cf = cheats.a_ot;
  r.b_cf = (std::sqrt(cheats.b_ot) + 1.0) / 2.0;
  r.kitaev_product = r.a_cf * r.b_cf;
  r.kitaev_ok = r.kitaev_product >= ot.honest_p / 2.0 - 1e-9;
  return r;
}

// ---------------------------------------------------------------------------

TradeoffCurve tradeoff_curve(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw PreconditionError("tradeoff_curve: t outside [0, 1]");
  const double s = 1.0 - (1.0 - 1.0 / std::sqrt(2.0)) * t;
  return {t, 0.5 + t / 2.0, s * s};
}

double tradeoff_g(BoundMode mode, double b) {
  const double e = (2.0 * b - 1.0) * (2.0 * b - 1.0);
  return mode == BoundMode::bit ? e : b * e;
}

TradeoffBound ot_tradeoff_bound(BoundMode mode) {
  auto f = [mode](double t) {
    const auto c = tradeoff_curve(t);
    return std::max(c.a_bc, tradeoff_g(mode, c.b_bc));
  };
  // The first branch increases and the second decreases in t, so f is
  // unimodal and golden-section search applies.
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0;
  double hi = 1.0;
  double m1 = hi - phi * (hi - lo);
  double m2 = lo + phi * (hi - lo);
  double f1 = f(m1);
  double f2 = f(m2);
  while (hi - lo > 1e-12) {
    if (f1 <= f2) {
      hi = m2;
      m2 = m1;
      f2 = f1;
      m1 = hi - phi * (hi - lo);
      f1 = f(m1);
    } else {
      lo = m1;
      m1 = m2;
      f1 = f2;
      m2 = lo + phi * (hi - lo);
      f2 = f(m2);
    }
  }
  TradeoffBound r;
  r.t_star = 0.5 * (lo + hi);
  r.bound = f(r.t_star);
  r.grid_bound = f(0.0);
  for (int k = 1; k <= 100000; ++k) {
    const double t = k * 1e-5;
    const double v = f(t);
    if (v < r.grid_bound) {
      r.grid_bound = v;
      r.grid_t = t;
    }
  }
  return r;
}

BitCommitmentReport bc_from_ot(const OtInstance& ot, BoundMode mode) {
  return bc_from_ot(ot_cheat_probs(ot), mode);
}

BitCommitmentReport bc_from_ot(const CheatReport& cheats, BoundMode mode) {
  BitCommitmentReport r;
  r.a_bc = cheats.a_ot;
  const double target = cheats.b_ot;
  if (target >= 1.0) {
    r.b_bc_bound = 1.0;
  } else if (mode == BoundMode::bit) {
    r.b_bc_bound = (1.0 + std::sqrt(std::max(0.0, target))) / 2.0;
  } else {
    // g increases on [1/2, 1]
    double lo = 0.5;
    double hi = 1.0;
    for (int k = 0; k < 200; ++k) {
      const double mid = 0.5 * (lo + hi);
      (tradeoff_g(mode, mid) < target ? lo : hi) = mid;
    }
    r.b_bc_bound = 0.5 * (lo + hi);
  }
  r.curve = tradeoff_curve(std::clamp(2.0 * r.a_bc - 1.0, 0.0, 1.0));
  return r;
}

double secure_ot_ceiling(unsigned n, OtMode mode) {
  if (n == 0) throw PreconditionError("secure_ot_ceiling: n must be positive");
  if (n == 1) return kCos2Pi8;
  if (mode == OtMode::bit) throw PreconditionError("secure_ot_ceiling: bit mode needs n = 1");
  if (mode == OtMode::tensor) return std::pow(kCos2Pi8, static_cast<double>(n));
  return 0.5 + std::pow(2.0, -(static_cast<double>(n) + 1.0) / 2.0);
}

}  // namespace xorlab::protocols
