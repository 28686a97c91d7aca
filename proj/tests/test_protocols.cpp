#include <doctest.h>

#include <cmath>
#include <numbers>

#include "xorlab/encodings.hpp"
#include "xorlab/protocols.hpp"

using namespace xorlab;
using namespace xorlab::protocols;

namespace {

const double kCos2 = std::pow(std::cos(std::numbers::pi / 8.0), 2);

encodings::XorEncoding identical(unsigned n) {
  const std::size_t count = std::size_t{1} << (2 * n);
  return encodings::uniform_encoding(
      n, std::vector<DensityOperator>(count, DensityOperator::maximally_mixed(2)));
}

}  // namespace

TEST_CASE("BBBW oblivious transfer") {
  const auto enc = encodings::canonical_bbbw_encoding();
  const auto ot = ot_from_encoding(enc);
  CHECK(ot.mode == OtMode::bit);
  CHECK(std::abs(ot.honest_p - kCos2) <= 1e-9);
  REQUIRE(ot.per_choice.size() == 2);
  CHECK(std::abs(ot.per_choice[0] - ot.per_choice[1]) <= 1e-9);
  CHECK(ot.output_nonuniformity <= 1e-12);

  const auto cheats = ot_cheat_probs(ot);
  CHECK(cheats.a_ot == 0.5);
  CHECK(std::abs(cheats.b_ot - 0.5) <= 1e-9);
  CHECK(std::abs(cheats.theorem2_rhs - 0.5 * (std::sqrt(0.5) + 1.0)) <= 1e-12);
  CHECK(std::abs(cheats.theorem2_rhs - kCos2) <= 1e-12);  // tight
  CHECK(cheats.theorem2_ok);

  const auto cf = coinflip_from_ot(ot, cheats);
  CHECK(std::abs(cf.honest_abort - (1.0 - kCos2)) <= 1e-9);
  CHECK(cf.a_cf == 0.5);
  CHECK(std::abs(cf.b_cf - (std::sqrt(0.5) + 1.0) / 2.0) <= 1e-12);
  CHECK(cf.kitaev_product >= kCos2 / 2.0 - 1e-9);
  CHECK(cf.kitaev_ok);

  const auto bc = bc_from_ot(cheats, BoundMode::bit);
  CHECK(bc.a_bc == 0.5);
}

TEST_CASE("classical encoding is rejected") {
  std::vector<DensityOperator> cls;
  for (std::size_t x1 = 0; x1 < 2; ++x1) {
    for (std::size_t x0 = 0; x0 < 2; ++x0) {
      cls.push_back(DensityOperator::from_pure(PureState::basis(4, 2 * x0 + x1)));
    }
  }
  CHECK_THROWS_AS(ot_from_encoding(encodings::uniform_encoding(1, cls)), PreconditionError);
}

TEST_CASE("trivial OT from identical states") {
  const auto ot = ot_from_encoding(identical(1));
  CHECK(std::abs(ot.honest_p - 0.5) <= 1e-12);
  const auto cheats = ot_cheat_probs(ot);
  CHECK(std::abs(cheats.b_ot - 0.5) <= 1e-12);
  CHECK(std::abs(cheats.b_pair - 0.25) <= 1e-9);
  CHECK(cheats.theorem2_ok);
  CHECK(ot.honest_p < cheats.theorem2_rhs - 0.1);  // slack
  const auto cf = coinflip_from_ot(ot, cheats);
  CHECK(std::abs(cf.honest_abort - 0.5) <= 1e-12);
  CHECK(cf.kitaev_ok);
}

TEST_CASE("string OT from random hiding encodings") {
  Rng rng(21);
  for (int t = 0; t < 4; ++t) {
    const auto enc = encodings::sample_hiding_encoding(2, 2, rng);
    const auto rep = encodings::theorem1_check(enc);
    const auto ot = ot_from_encoding(enc);
    CHECK(ot.mode == OtMode::string);
    CHECK(std::abs(ot.honest_p - rep.c) <= 1e-9);
    CHECK(std::abs(ot.per_choice[0] - ot.per_choice[1]) <= 1e-9);
    CHECK(ot.output_nonuniformity <= 1e-12);
    const auto cheats = ot_cheat_probs(ot);
    CHECK(cheats.theorem2_ok);
    if (rep.c >= 0.5) CHECK(cheats.b_pair >= rep.c * std::pow(2 * rep.c - 1, 2) - 1e-9);
  }
}

TEST_CASE("masked encoding hides the masked XOR") {
  const auto ot = ot_from_encoding(encodings::canonical_bbbw_encoding());
  const auto masked = masked_encoding(ot);
  CHECK(masked.dim() == 2 * 8);
  CHECK(encodings::hides_xor(masked, 1e-8));
  const auto cheats = ot_cheat_probs(ot);
  CHECK(std::abs(encodings::learn_value_prob(masked, encodings::target_xor()) - cheats.b_ot) <=
        1e-8);
  CHECK(std::abs(encodings::learn_value_prob(masked, encodings::target_x0()) - ot.honest_p) <=
        1e-8);
}

TEST_CASE("tensor-mode OT uses the mixed-index targets") {
  const auto ot = ot_from_encoding(identical(2), OtMode::tensor);
  CHECK(ot.per_choice.size() == 4);
  for (double p : ot.per_choice) CHECK(std::abs(p - 0.25) <= 1e-9);
}

TEST_CASE("coin flip needs a bit OT") {
  const auto ot = ot_from_encoding(identical(2));
  CHECK_THROWS_AS(coinflip_from_ot(ot), PreconditionError);
}

TEST_CASE("tradeoff bounds") {
  const auto bit = ot_tradeoff_bound(BoundMode::bit);
  const auto str = ot_tradeoff_bound(BoundMode::string);
  CHECK(std::abs(bit.bound - 0.599) <= 5e-4);
  CHECK(std::abs(str.bound - 0.5852) <= 5e-4);
  CHECK(std::abs(bit.bound - bit.grid_bound) <= 5e-5);
  CHECK(std::abs(str.bound - str.grid_bound) <= 5e-5);
  // The two branches cross at the optimum.
  const auto c = tradeoff_curve(bit.t_star);
  CHECK(std::abs(c.a_bc - tradeoff_g(BoundMode::bit, c.b_bc)) <= 1e-9);
  CHECK(std::abs(c.a_bc - (0.5 + bit.t_star / 2.0)) <= 1e-12);

  // Endpoints.
  auto f = [](BoundMode m, double t) {
    const auto cv = tradeoff_curve(t);
    return std::max(cv.a_bc, tradeoff_g(m, cv.b_bc));
  };
  CHECK(std::abs(f(BoundMode::bit, 0.0) - 1.0) <= 1e-12);
  CHECK(std::abs(f(BoundMode::bit, 1.0) - 1.0) <= 1e-12);
  CHECK(std::abs(f(BoundMode::string, 0.0) - 1.0) <= 1e-12);
  CHECK_THROWS_AS(tradeoff_curve(1.5), PreconditionError);
}

TEST_CASE("bit commitment from OT") {
  CheatReport perfect;
  perfect.b_ot = 1.0;
  CHECK(bc_from_ot(perfect, BoundMode::string).b_bc_bound == 1.0);

  CheatReport half;
  half.b_ot = 0.5;
  const auto b = bc_from_ot(half, BoundMode::string);
  CHECK(std::abs(tradeoff_g(BoundMode::string, b.b_bc_bound) - 0.5) <= 1e-12);
  CHECK(std::abs(bc_from_ot(half, BoundMode::bit).b_bc_bound - kCos2) <= 1e-12);
}

TEST_CASE("secure OT ceilings") {
  CHECK(std::abs(secure_ot_ceiling(1, OtMode::string) - kCos2) <= 1e-12);
  CHECK(std::abs(secure_ot_ceiling(1, OtMode::tensor) - kCos2) <= 1e-12);
  CHECK(std::abs(secure_ot_ceiling(2, OtMode::tensor) - 0.7285533906) <= 1e-9);
  CHECK(std::abs(secure_ot_ceiling(3, OtMode::string) - 0.75) <= 1e-12);
  for (unsigned n = 1; n <= 6; ++n) {
    CHECK(std::abs(secure_ot_ceiling(n, OtMode::tensor) - std::pow(kCos2, n)) <= 1e-12);
  }
  CHECK_THROWS_AS(secure_ot_ceiling(0, OtMode::string), PreconditionError);
}

TEST_CASE("mode names") {
  CHECK(parse_ot_mode("tensor") == OtMode::tensor);
  CHECK(to_string(OtMode::string) == "string");
  CHECK_THROWS_AS(parse_bound_mode("qutrit"), PreconditionError);
}
