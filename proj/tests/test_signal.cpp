#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "swcp/rng.hpp"
#include "swcp/signal.hpp"

using namespace swcp;

namespace {

// The reference block used throughout: capacity 100, a 60-weight transaction
// at density 8 and a 40-weight transaction at density 1.
Block reference_block() { return Block(100.0, {{60.0, 8.0}, {40.0, 1.0}}); }

Block random_block(StreamRng& rng) {
  const int tx_count = 1 + static_cast<int>(rng.next() % 6);
  std::vector<Transaction> txs;
  double used = 0.0;
  for (int i = 0; i < tx_count; ++i) {
    const double size = 1.0 + std::floor(rng.next_unit() * 20.0);
    const double density = std::floor(rng.next_unit() * 10.0);  // ties on purpose
    txs.push_back({size, density, false});
    used += size;
  }
  return Block(used + std::floor(rng.next_unit() * 30.0), std::move(txs));
}

// All meaningful theta values for a block: every distinct density and points
// between/above.
std::vector<double> theta_breakpoints(const Block& block) {
  std::vector<double> thetas{0.0};
  for (const auto& tx : block.txs()) {
    thetas.push_back(tx.fee_density);
    thetas.push_back(tx.fee_density + 0.5);
  }
  std::sort(thetas.begin(), thetas.end());
  return thetas;
}

}  // namespace

TEST_CASE("weight_above on the reference block") {
  const Block r = reference_block();
  CHECK(weight_above(r, 0.0) == doctest::Approx(100.0));  // full-block convention
  CHECK(weight_above(r, 5.0) == doctest::Approx(60.0));
  CHECK(weight_above(r, 9.0) == doctest::Approx(0.0));
  CHECK_THROWS_AS(weight_above(r, -1.0), ParamError);
}

TEST_CASE("is_congested on the reference block") {
  const Block r = reference_block();
  CHECK(is_congested(r, {5.0, 0.5}));
  CHECK(is_congested(r, {0.0, 1.0}));  // blocks are full
  CHECK_FALSE(is_congested(r, {9.0, 0.1}));
  CHECK(is_congested(r, {42.0, 0.0}));  // gamma = 0 holds vacuously
}

TEST_CASE("weight_threshold on the reference block") {
  const Block r = reference_block();
  CHECK(weight_threshold(r, 5.0) == doctest::Approx(0.6));
  CHECK(weight_threshold(r, 0.0) == doctest::Approx(1.0));
  CHECK(weight_threshold(r, 9.0) == doctest::Approx(0.0));
}

TEST_CASE("fee_threshold on the reference block") {
  const Block r = reference_block();
  CHECK(fee_threshold(r, 0.6) == doctest::Approx(8.0));
  CHECK(fee_threshold(r, 1.0) == doctest::Approx(1.0));
  CHECK(fee_threshold(r, 0.3) == doctest::Approx(8.0));
  CHECK(fee_threshold(r, 0.0) == std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(fee_threshold(r, 1.5), ParamError);
}

TEST_CASE("cost_to_congest on the reference block") {
  const Block r = reference_block();
  CHECK(cost_to_congest(r, {8.0, 0.8}) == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(cost_to_congest(r, {9.0, 1.0}) == doctest::Approx(520.0).epsilon(1e-12));
  CHECK_THROWS_AS(cost_to_congest(r, {8.0, 0.6}), ContractError);  // already congested
}

TEST_CASE("cost_to_uncongest on the reference block") {
  const Block r = reference_block();
  CHECK(cost_to_uncongest(r, {5.0, 0.5}) == doctest::Approx(30.0).epsilon(1e-12));
  CHECK(cost_to_uncongest(r, {5.0, 0.6}) == doctest::Approx(0.0));
  CHECK_THROWS_AS(cost_to_uncongest(r, {9.0, 0.1}), ContractError);  // not congested
}

TEST_CASE("alternative signals on the reference block") {
  const Block r = reference_block();
  CHECK_FALSE(alt_is_congested(r, LowestFeeDensity{2.0}));  // min density 1
  CHECK(alt_is_congested(r, HighestFeeDensity{2.0}));       // max density 8
  CHECK(alt_is_congested(r, NonzeroOccupancy{1.0}));
  CHECK(alt_is_congested(r, FeeAbove{40.0, 0.99}));        // both txs pay >= 40
  CHECK(alt_is_congested(r, FeeAbove{41.0, 0.5}));         // the 480-fee tx alone fills 60%
  CHECK_FALSE(alt_is_congested(r, FeeAbove{41.0, 0.7}));   // but not 70%

  const Block with_fee(100.0, {{100.0, 1.0}}, 25.0);
  CHECK_FALSE(alt_is_congested(with_fee, BaseFeeCap{30.0}));
  CHECK(alt_is_congested(with_fee, BaseFeeCap{20.0}));
  CHECK_FALSE(alt_is_congested(with_fee, BaseFeeCap{25.0}));  // strict >
  CHECK_THROWS_AS(alt_is_congested(r, BaseFeeCap{30.0}), DataError);
}

TEST_CASE("anti-monotonicity in theta and gamma") {
  StreamRng rng(2024, "signal-anti");
  for (int trial = 0; trial < 200; ++trial) {
    const Block b = random_block(rng);
    const auto thetas = theta_breakpoints(b);
    for (std::size_t i = 1; i < thetas.size(); ++i)
      CHECK(weight_above(b, thetas[i - 1]) >= weight_above(b, thetas[i]));
    const double theta = thetas[rng.next() % thetas.size()];
    for (double gamma = 0.1; gamma < 1.0; gamma += 0.2)
      if (is_congested(b, {theta, gamma + 0.1})) CHECK(is_congested(b, {theta, gamma}));
  }
}

TEST_CASE("Galois consistency against a breakpoint scan") {
  StreamRng rng(77, "signal-galois");
  for (int trial = 0; trial < 300; ++trial) {
    const Block b = random_block(rng);
    for (const double theta : theta_breakpoints(b)) {
      for (const double gamma : {0.05, 0.25, 0.4, 0.6, 0.85, 1.0}) {
        const bool congested = is_congested(b, {theta, gamma});
        CHECK(congested == (gamma <= weight_threshold(b, theta)));
        CHECK(congested == (theta <= fee_threshold(b, gamma)));
        // Brute-force the definition of the fee threshold: the largest
        // breakpoint theta' whose weight still covers gamma * capacity.
        double best = -1.0;
        for (const auto& tx : b.txs())
          if (weight_above(b, tx.fee_density) >= gamma * b.capacity())
            best = std::max(best, tx.fee_density);
        CHECK(fee_threshold(b, gamma) == doctest::Approx(best).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("cost bounds are met by greedy whole-transaction manipulation") {
  StreamRng rng(5150, "signal-greedy");
  int checked_congest = 0;
  int checked_uncongest = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const Block b = random_block(rng);
    const double theta = 1.0 + std::floor(rng.next_unit() * 9.0);
    const double gamma = 0.1 + 0.8 * rng.next_unit();

    std::vector<Transaction> txs = b.txs();
    if (!is_congested(b, {theta, gamma})) {
      const double bound = cost_to_congest(b, {theta, gamma});
      // Replace lowest-density transactions until density >= theta fills
      // gamma of the block; each replacement forfeits the full tx fee.
      std::sort(txs.begin(), txs.end(), [](const auto& a, const auto& c) {
        return a.fee_density < c.fee_density;
      });
      const double needed = (gamma - weight_threshold(b, theta)) * b.capacity();
      double removed = 0.0;
      double lost = 0.0;
      for (const auto& tx : txs) {
        if (removed >= needed) break;
        if (tx.fee_density >= theta) continue;
        removed += tx.size;
        lost += tx.size * tx.fee_density;
      }
      CHECK(lost >= bound - 1e-9 * std::max(1.0, bound));
      ++checked_congest;
    } else {
      const double bound = cost_to_uncongest(b, {theta, gamma});
      // Swap out the cheapest at-or-above-theta transactions for substitutes
      // just below theta; the loss per unit weight is density - theta.
      std::sort(txs.begin(), txs.end(), [](const auto& a, const auto& c) {
        return a.fee_density < c.fee_density;
      });
      const double excess = (weight_threshold(b, theta) - gamma) * b.capacity();
      double removed = 0.0;
      double lost = 0.0;
      for (const auto& tx : txs) {
        if (tx.fee_density < theta) continue;
        if (removed > excess) break;
        removed += tx.size;
        lost += tx.size * (tx.fee_density - theta);
      }
      CHECK(lost >= bound - 1e-9 * std::max(1.0, bound));
      ++checked_uncongest;
    }
  }
  CHECK(checked_congest > 50);
  CHECK(checked_uncongest > 50);
}

TEST_CASE("each alternative signal flips under a near-free single-tx edit") {
  const double eps = 1e-6;

  SUBCASE("lowest-fee-density: a sliver of cheap weight uncongests") {
    const Block before(100.0, {{100.0, 5.0}});
    CHECK(alt_is_congested(before, LowestFeeDensity{3.0}));
    // Shave eps weight off the real tx and insert a zero-fee dust tx.
    const Block after(100.0, {{100.0 - eps, 5.0}, {eps, 0.0}});
    CHECK_FALSE(alt_is_congested(after, LowestFeeDensity{3.0}));
    CHECK(before.total_fee() - after.total_fee() <= 5.0 * eps + 1e-9);
  }

  SUBCASE("highest-fee-density: one dust self-payment congests") {
    const Block before(100.0, {{100.0, 1.0}});
    CHECK_FALSE(alt_is_congested(before, HighestFeeDensity{10.0}));
    // The dust tx pays fees to the miner itself, so revenue lost is only the
    // displaced sliver of real weight.
    const Block after(100.0, {{100.0 - eps, 1.0}, {eps, 10.0}});
    CHECK(alt_is_congested(after, HighestFeeDensity{10.0}));
    CHECK(before.total_fee() - (after.total_fee() - eps * 10.0) <= eps + 1e-9);
  }

  SUBCASE("nonzero occupancy: filler with token fees congests for free") {
    const Block before(100.0, {{50.0, 2.0}});  // padded with 50 zero-fee weight
    CHECK_FALSE(alt_is_congested(before, NonzeroOccupancy{0.9}));
    // Replace the padding with self-paying dust-density transactions.
    const Block after(100.0, {{50.0, 2.0}, {50.0, eps}});
    CHECK(alt_is_congested(after, NonzeroOccupancy{0.9}));
    CHECK(after.total_fee() - before.total_fee() == doctest::Approx(50.0 * eps));
  }

  SUBCASE("total-fee threshold: merging transactions flips it at zero cost") {
    // Two txs each with total fee 50 < 100; merged into one with fee 100.
    const Block before(100.0, {{50.0, 1.0}, {50.0, 1.0}});
    CHECK_FALSE(alt_is_congested(before, FeeAbove{100.0, 0.5}));
    const Block after(100.0, {{100.0, 1.0}});
    CHECK(alt_is_congested(after, FeeAbove{100.0, 0.5}));
    CHECK(after.total_fee() == doctest::Approx(before.total_fee()));  // no revenue change
  }
}

TEST_CASE("primary signal manipulation is never free") {
  // Contrast with the alternatives: flipping the (theta, gamma) signal on
  // blocks with real fee mass has a positive cost bound.
  const Block r = reference_block();
  CHECK(cost_to_congest(r, {8.0, 0.8}) > 0.0);
  CHECK(cost_to_uncongest(r, {5.0, 0.5}) > 0.0);
}
