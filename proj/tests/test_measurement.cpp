#include <doctest.h>

#include "qse/gates.hpp"
#include "qse/measurement.hpp"
#include "qse/reference.hpp"
#include "stats.hpp"
#include "support.hpp"

using namespace qse;
using qse::test::Gen;

namespace {

double dense_p1(const AmplitudeVector& a, const EncodingConfig& c, QubitAddress addr) {
  const std::size_t mask = std::size_t{1} << flat_bit(c, addr);
  double one = 0.0, all = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    all += std::norm(a[k]);
    if (k & mask) one += std::norm(a[k]);
  }
  return one / all;
}

std::size_t bits_to_index(const std::vector<int>& bits) {
  std::size_t k = 0;
  for (int b : bits) k = (k << 1) | static_cast<std::size_t>(b);
  return k;
}

}  // namespace

TEST_CASE("measuring |0> on one frequency qubit") {
  const auto c = EncodingConfig::make(1, 0, 0);
  Rng rng(1);
  const auto r = measure(encode(AmplitudeVector{1.0, 0.0}, c), QubitAddress::freq(0), MeasurePolicy::Born, rng);
  CHECK(r.record.outcome == 0);
  CHECK(r.record.p1 == 0.0);
  CHECK(r.record.v1 == 0.0);
  CHECK(r.record.v0 == doctest::Approx(1.0));
  CHECK(r.state.config().total_qubits() == 0);
  const auto& buf = r.state.at(0, 0);
  for (const auto& v : buf.samples) CHECK(std::abs(v - Complex(1.0)) < 1e-12);
  CHECK(std::abs(decode(r.state)[0] - Complex(1.0)) < 1e-12);
}

TEST_CASE("Born sampling frequency for (1/2, sqrt3/2)") {
  const auto c = EncodingConfig::make(1, 0, 0);
  const auto state = encode(AmplitudeVector{0.5, std::sqrt(3.0) / 2.0}, c);
  Rng rng(7);
  std::size_t ones = 0;
  double p1 = 0.0;
  for (int shot = 0; shot < 10000; ++shot) {
    const auto r = measure(state, QubitAddress::freq(0), MeasurePolicy::Born, rng);
    ones += static_cast<std::size_t>(r.record.outcome);
    p1 = r.record.p1;
  }
  CHECK(p1 == doctest::Approx(0.75).epsilon(1e-12));
  const double freq = static_cast<double>(ones) / 10000.0;
  CHECK(freq >= 0.735);
  CHECK(freq <= 0.765);
}

TEST_CASE("Born draws one variate, argmax none") {
  const auto c = EncodingConfig::make(1, 1, 0);
  const auto state = encode(AmplitudeVector{0.5, 0.5, 0.5, 0.5}, c);
  Rng used(99), mirror(99);
  measure(state, QubitAddress::spatial(0), MeasurePolicy::Born, used);
  mirror.uniform();
  CHECK(used.engine() == mirror.engine());
  measure(state, QubitAddress::freq(0), MeasurePolicy::Argmax, used);
  CHECK(used.engine() == mirror.engine());
}

TEST_CASE("argmax ties go to 0") {
  Rng rng(0);
  CHECK(choose_outcome(1.0, 1.0, MeasurePolicy::Argmax, rng) == 0);
  CHECK(choose_outcome(1.0, 2.0, MeasurePolicy::Argmax, rng) == 1);
  CHECK(choose_outcome(0.0, 2.0, MeasurePolicy::Born, rng) == 1);
  CHECK(choose_outcome(2.0, 0.0, MeasurePolicy::Born, rng) == 0);
}

TEST_CASE("Bell pairs give equal bits") {
  const auto c = EncodingConfig::make(2, 0, 0);
  auto state = encode(AmplitudeVector{1.0, 0.0, 0.0, 0.0}, c);
  state = apply_1q(state, gate::RY(1.1), QubitAddress::freq(1));
  state = apply_controlled(state, gate::X(), QubitAddress::freq(1), QubitAddress::freq(0));
  Rng rng(3);
  std::size_t ones = 0;
  for (int shot = 0; shot < 400; ++shot) {
    const auto first = measure(state, QubitAddress::freq(1), MeasurePolicy::Born, rng);
    const auto second = measure(first.state, QubitAddress::freq(0), MeasurePolicy::Born, rng);
    CHECK(first.record.outcome == second.record.outcome);
    CHECK(second.record.p1 == doctest::Approx(static_cast<double>(first.record.outcome)));
    ones += static_cast<std::size_t>(first.record.outcome);
  }
  CHECK(ones > 0);
  CHECK(ones < 400);
}

TEST_CASE("RMS probabilities match the dense state for every address kind") {
  Gen gen(51);
  for (int trial = 0; trial < 60; ++trial) {
    const auto c = gen.config(8);
    const auto a = gen.amplitudes(c.dim(), trial % 3 != 0);
    auto state = encode(a, c);
    if (trial % 5 == 0) state.set_scale(2.5);
    const RefState ref(a, c);
    for (unsigned k = 0; k < c.total_qubits(); ++k) {
      const auto addr = gen.address(c);
      Rng r1(trial), r2(trial);
      const auto sig = measure(state, addr, MeasurePolicy::Born, r1);
      CHECK(std::abs(sig.record.p1 - dense_p1(a, c, addr)) <= 1e-10);
      const auto den = ref_measure(ref, addr, MeasurePolicy::Born, r2);
      CHECK(sig.record.outcome == den.record.outcome);
      CHECK(std::abs(sig.record.v0 - state.scale() * den.record.v0) <= 1e-10);
      CHECK(std::abs(sig.record.v1 - state.scale() * den.record.v1) <= 1e-10);

      // collapse keeps the branch unnormalized, scale included
      for (int b = 0; b < 2; ++b) {
        const auto collapsed = collapse(state, addr, b);
        CHECK(collapsed.scale() == state.scale());
        auto want = ref_collapse(ref, addr, b).amps;
        for (auto& v : want) v *= state.scale();
        CHECK(test::max_abs_diff(decode(collapsed), want) <= 1e-10);
      }
    }
  }
}

TEST_CASE("measure_all on basis states") {
  Gen gen(52);
  for (int trial = 0; trial < 30; ++trial) {
    const auto c = gen.config(6);
    const std::size_t k = gen.below(c.dim());
    AmplitudeVector a(c.dim());
    a[k] = 1.0;
    auto order = default_measure_order(c);
    std::shuffle(order.begin(), order.end(), gen.engine());
    Rng rng(trial);
    const auto r = measure_all(encode(a, c), trial % 2 ? MeasurePolicy::Born : MeasurePolicy::Argmax, rng, order);
    REQUIRE(r.bits.size() == order.size());
    for (std::size_t q = 0; q < order.size(); ++q) {
      CHECK(r.bits[q] == static_cast<int>((k >> flat_bit(c, order[q])) & 1U));
      CHECK(r.records[q].addr == order[q]);
    }
    CHECK(r.final_state.config().total_qubits() == 0);
  }
}

TEST_CASE("argmax picks the dominant basis string") {
  Gen gen(53);
  const auto c = EncodingConfig::make(2, 1, 1);
  AmplitudeVector a = gen.amplitudes(c.dim());
  for (auto& v : a) v *= 0.1;
  a[11] = 0.9;
  const auto order = default_measure_order(c);
  Rng rng(0);
  const auto r = measure_all(encode(a, c), MeasurePolicy::Argmax, rng, order);
  CHECK(bits_to_index(r.bits) == 11);
}

TEST_CASE("uniform superposition samples uniformly") {
  for (unsigned k = 1; k <= 4; ++k) {
    const auto c = EncodingConfig::make(k >= 2 ? 2 : 1, k >= 3 ? 1 : 0, k >= 4 ? 1 : 0);
    const auto state = encode(AmplitudeVector(c.dim(), 1.0 / std::sqrt(static_cast<double>(c.dim()))), c);
    const auto order = default_measure_order(c);
    Rng rng(100 + k);
    std::vector<std::size_t> counts(c.dim());
    for (int shot = 0; shot < 10000; ++shot) ++counts[bits_to_index(measure_all(state, MeasurePolicy::Born, rng, order).bits)];
    CHECK(test::chi_square_fits(counts, std::vector<double>(c.dim(), 1.0)));
  }
}

TEST_CASE("joint outcome distribution does not depend on the order") {
  Gen gen(54);
  const EncodingConfig shapes[] = {EncodingConfig::make(3, 0, 0), EncodingConfig::make(1, 1, 1),
                                   EncodingConfig::make(2, 0, 1), EncodingConfig::make(0, 2, 1)};
  for (const auto& c : shapes) {
    const auto a = gen.amplitudes(c.dim());
    std::vector<double> probs;
    for (const auto& v : a) probs.push_back(std::norm(v));
    const auto state = encode(a, c);
    const auto natural = default_measure_order(c);
    for (int perm = 0; perm < 3; ++perm) {
      auto order = natural;
      std::shuffle(order.begin(), order.end(), gen.engine());
      Rng rng(500 + perm);
      std::vector<std::size_t> counts(c.dim());
      for (int shot = 0; shot < 4000; ++shot) {
        const auto r = measure_all(state, MeasurePolicy::Born, rng, order);
        std::size_t k = 0;
        for (std::size_t q = 0; q < order.size(); ++q) k |= static_cast<std::size_t>(r.bits[q]) << flat_bit(c, order[q]);
        ++counts[k];
      }
      CHECK(test::chi_square_fits(counts, probs));
    }
  }
}

TEST_CASE("measurement errors") {
  const auto c = EncodingConfig::make(1, 1, 0);
  const auto state = encode(AmplitudeVector{1.0, 0.0, 0.0, 0.0}, c);
  Rng rng(0);
  CHECK_THROWS_AS(measure(state, QubitAddress::time(0), MeasurePolicy::Born, rng), std::domain_error);
  CHECK_THROWS_AS(measure(EncodedState(c), QubitAddress::freq(0), MeasurePolicy::Born, rng), std::domain_error);
  const std::vector<QubitAddress> dup = {QubitAddress::freq(0), QubitAddress::freq(0)};
  CHECK_THROWS_AS(measure_all(state, MeasurePolicy::Born, rng, dup), std::domain_error);
  const std::vector<QubitAddress> missing = {QubitAddress::freq(0)};
  CHECK_THROWS_AS(measure_all(state, MeasurePolicy::Born, rng, missing), std::domain_error);
  CHECK_THROWS_AS(collapse(state, QubitAddress::freq(0), 2), std::domain_error);
}

TEST_CASE("address renumbering after removal") {
  CHECK(address_after_removal(QubitAddress::freq(3), QubitAddress::freq(1)) == QubitAddress::freq(2));
  CHECK(address_after_removal(QubitAddress::freq(0), QubitAddress::freq(1)) == QubitAddress::freq(0));
  CHECK(address_after_removal(QubitAddress::spatial(2), QubitAddress::freq(0)) == QubitAddress::spatial(2));
}
