#include <doctest.h>

#include <cmath>
#include <numbers>

#include "xorlab/encodings.hpp"
#include "xorlab/games.hpp"
#include "xorlab/sdp.hpp"

using namespace xorlab;
using namespace xorlab::games;

namespace {

const double kCos2 = std::pow(std::cos(std::numbers::pi / 8.0), 2);

// (U_A (x) U_B) psi with every POVM conjugated to match.
QuantumStrategy rotate(const QuantumStrategy& s, Rng& rng) {
  const ComplexMatrix ua = sample_unitary(s.alice_dim(), rng);
  const ComplexMatrix ub = sample_unitary(s.bob_dim(), rng);
  auto conj = [](const std::vector<Povm>& ms, const ComplexMatrix& u) {
    std::vector<Povm> out;
    for (const auto& m : ms) {
      std::vector<ComplexMatrix> el;
      for (const auto& e : m.elements()) el.push_back(u * e * u.adjoint());
      out.emplace_back(std::move(el));
    }
    return out;
  };
  const PureState psi(tensor(ua, ub) * s.state.amplitudes());
  return {psi, SplitSystem::bipartite(s.alice_dim(), s.bob_dim()), conj(s.alice, ua),
          conj(s.bob, ub)};
}

}  // namespace

TEST_CASE("game constructors") {
  CHECK(structurally_equal(make_chsh_n(1), make_chsh()));
  CHECK(structurally_equal(make_chsh_tensor(1), make_chsh()));
  CHECK(structurally_equal(make_weighted_chsh(0.5), make_chsh()));
  CHECK_FALSE(structurally_equal(make_weighted_chsh(0.3), make_chsh()));

  const auto g = make_chsh_n(3);
  CHECK(g.alice_inputs() == 8);
  CHECK(g.bob_inputs() == 2);
  CHECK(g.alice_outputs == 8);
  // a + b = y x coordinatewise
  CHECK(g.win(0b101, 1, 0b011, 0b110));
  CHECK_FALSE(g.win(0b101, 1, 0b011, 0b011));
  CHECK(g.win(0b101, 0, 0b011, 0b011));

  const auto t = make_chsh_tensor(2);
  CHECK(t.win(0b11, 0b01, 0b00, 0b01));
  CHECK_FALSE(t.win(0b11, 0b01, 0b00, 0b00));
}

TEST_CASE("evaluate: deterministic and canonical strategies") {
  const auto g = make_chsh();
  CHECK(std::abs(evaluate(g, deterministic_strategy(2, 2, {0, 0}, {0, 0})) - 0.75) <= 1e-15);
  const auto s = canonical_chsh_strategy();
  CHECK(std::abs(evaluate(g, s) - kCos2) <= 1e-12);
  CHECK(signaling_defect(s) <= 1e-12);

  // Two copies on the tensor game: cos^4(pi/8).
  const auto two = parallel_strategy({s, s});
  CHECK(std::abs(evaluate(make_chsh_tensor(2), two) - kCos2 * kCos2) <= 1e-12);
  CHECK(std::abs(kCos2 * kCos2 - 0.7285533906) <= 1e-9);
  CHECK(std::abs(parallel_repetition_value(2) - kCos2 * kCos2) <= 1e-15);

  CHECK_THROWS_AS(evaluate(make_chsh_n(2), s), DimensionError);
}

TEST_CASE("guessing strategy gives the lower-bound row") {
  const double expected[] = {0.75, 0.625, 0.5625, 0.53125, 0.515625};
  for (unsigned n = 1; n <= 5; ++n) {
    const double v = evaluate(make_chsh_n(n), guessing_strategy_chsh_n(n));
    CHECK(std::abs(v - expected[n - 1]) <= 1e-12);
    CHECK(std::abs(guessing_value_chsh_n(n) - expected[n - 1]) <= 1e-15);
  }
}

TEST_CASE("analytic values") {
  CHECK(upper_bound_chsh_n(1) == doctest::Approx(1.0));
  CHECK(std::abs(upper_bound_chsh_n(2) - 0.8535533906) <= 1e-9);
  CHECK(std::abs(upper_bound_chsh_n(4) - 0.6767766953) <= 1e-9);
  CHECK(std::abs(conjectured_value_chsh_n(1) - kCos2) <= 1e-12);
  CHECK(std::abs(conjectured_value_chsh_n(3) - 0.6767766953) <= 1e-9);
  CHECK(std::abs(conjectured_value_chsh_n(5) - 0.5883883476) <= 1e-9);
  CHECK(std::abs(parallel_repetition_value(1) - kCos2) <= 1e-15);
}

TEST_CASE("random strategies: bounded, local-unitary invariant, non-signaling") {
  Rng rng(314);
  for (unsigned n = 1; n <= 2; ++n) {
    const auto g = make_chsh_n(n);
    for (int t = 0; t < 10; ++t) {
      const auto s = random_strategy(g, 2, 3, rng);
      const double v = evaluate(g, s);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      CHECK(signaling_defect(s) <= 1e-10);
      CHECK(std::abs(evaluate(g, rotate(s, rng)) - v) <= 1e-12);
    }
  }
}

TEST_CASE("see-saw reaches Tsirelson and is monotone") {
  Rng rng(1);
  const auto r = seesaw(make_chsh(), 2, 20, 200, rng);
  CHECK(r.value >= 0.8535);
  CHECK(r.value <= kCos2 + 1e-9);
  for (std::size_t k = 1; k < r.trajectory.size(); ++k) {
    CHECK(r.trajectory[k] >= r.trajectory[k - 1] - 1e-12);
  }
  CHECK(std::abs(evaluate(make_chsh(), r.strategy) - r.value) <= 1e-12);

  Rng a(5), b(5);
  CHECK(seesaw(make_chsh(), 2, 3, 50, a).value == seesaw(make_chsh(), 2, 3, 50, b).value);
}

TEST_CASE("see-saw on weighted CHSH") {
  for (double q : {0.25, 0.75}) {
    Rng rng(3);
    const double v = seesaw(make_weighted_chsh(q), 2, 20, 200, rng).value;
    const double bound = encodings::weighted_decoding_bound(q);
    CHECK(v <= bound + 1e-6);
    CHECK(v >= bound - 1e-3);
  }
}

TEST_CASE("ordering chain for small n") {
  for (unsigned n = 1; n <= 2; ++n) {
    const auto g = make_chsh_n(n);
    Rng rng(n);
    const double ss = seesaw(g, std::size_t{1} << n, 10, 200, rng).value;
    const double npa = sdp::npa1_value(g);
    CHECK(guessing_value_chsh_n(n) <= ss + 1e-12);
    CHECK(ss <= npa + 1e-6);
    CHECK(ss <= upper_bound_chsh_n(n) + 1e-6);
  }
}

TEST_CASE("strategy to encoding") {
  const auto bbbw = encoding_from_strategy(canonical_chsh_strategy(), make_chsh());
  const auto rep = encodings::theorem1_check(bbbw);
  CHECK(std::abs(rep.c - kCos2) <= 1e-9);

  const auto det = encoding_from_strategy(deterministic_strategy(2, 2, {0, 0}, {0, 0}), make_chsh());
  CHECK(std::abs(encodings::theorem1_check(det).c - 0.75) <= 1e-9);

  Rng rng(8);
  for (unsigned n = 1; n <= 2; ++n) {
    const auto g = make_chsh_n(n);
    for (int t = 0; t < 5; ++t) {
      const auto s = random_strategy(g, 2, 2, rng);
      const auto enc = encoding_from_strategy(s, g);
      CHECK(encodings::hides_xor(enc, 1e-8));
      // Bob's measurement need not be optimal for his states.
      CHECK(encodings::theorem1_check(enc).c >= evaluate(g, s) - 1e-6);
    }
  }
  CHECK_THROWS_AS(encoding_from_strategy(canonical_chsh_strategy(), make_chsh_tensor(2)),
                  DimensionError);
}

TEST_CASE("encoding to strategy") {
  const auto bbbw = encodings::canonical_bbbw_encoding();
  const auto s = strategy_from_encoding(bbbw);
  CHECK(std::abs(evaluate(make_chsh(), s) - kCos2) <= 1e-6);

  // No information: Bob guesses, value equals the encoding's c.
  std::vector<DensityOperator> same(4, DensityOperator::maximally_mixed(2));
  const auto blank = encodings::uniform_encoding(1, same);
  const double c = encodings::theorem1_check(blank).c;
  CHECK(std::abs(c - 0.5) <= 1e-12);
  CHECK(std::abs(evaluate(make_chsh(), strategy_from_encoding(blank)) - c) <= 1e-6);

  std::vector<DensityOperator> cls;
  for (std::size_t x1 = 0; x1 < 2; ++x1) {
    for (std::size_t x0 = 0; x0 < 2; ++x0) {
      cls.push_back(DensityOperator::from_pure(PureState::basis(4, 2 * x0 + x1)));
    }
  }
  CHECK_THROWS_AS(strategy_from_encoding(encodings::uniform_encoding(1, cls)), PreconditionError);
}
