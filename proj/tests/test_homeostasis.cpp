#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <optional>
#include <vector>

#include "vdsc/homeostasis.hpp"
#include "vdsc/rng.hpp"

namespace {

vdsc::ExploreDecision feed(vdsc::Homeostat& h, double x, double rho) {
  const std::optional<double> samples[1] = {x};
  return h.step(samples, rho);
}

}  // namespace

TEST_CASE("golden trace: inputs 1,2,3 at rho 0.5") {
  // Hand-executed update sequence, frozen to 1e-12:
  //   t=1: first sample -> p = min(1, rho) = 0.5
  //   t=2: mean 1.5, 2nd moment 0.125, z 1.414..., p 0.8044296736074489
  //   t=3: mean 2.0, 2nd moment 0.41666..., z 1.549..., p 0.719026906578657
  vdsc::Homeostat h(0, 1e-8);
  h.register_channel(vdsc::TriggerKind::Custom);
  const double expected[3] = {0.5, 0.8044296736074489, 0.719026906578657};
  const double inputs[3] = {1.0, 2.0, 3.0};
  for (int t = 0; t < 3; ++t) {
    const auto d = feed(h, inputs[t], 0.5);
    REQUIRE_THAT(d.p_bar, Catch::Matchers::WithinAbs(expected[t], 1e-12));
    REQUIRE(d.per_channel_p[0].has_value());
    REQUIRE(*d.per_channel_p[0] == d.p_bar);
  }
  REQUIRE(h.steps() == 3);
}

TEST_CASE("constant stream settles at p = rho immediately") {
  // The residual is rounding noise in the running mean, amplified by the
  // 1/sqrt(var_epsilon) factor inside the standardization; it stays at the
  // 1e-11 relative level, far below anything behaviorally relevant.
  for (double rho : {0.01, 0.1, 0.5, 1.0}) {
    vdsc::Homeostat h(3);
    h.register_channel(vdsc::TriggerKind::Custom);
    for (int t = 0; t < 1000; ++t) {
      const auto d = feed(h, 7.25, rho);
      REQUIRE_THAT(d.p_bar, Catch::Matchers::WithinRel(rho, 1e-9));
    }
  }
}

TEST_CASE("decision rate tracks rho on a constant stream") {
  vdsc::Homeostat h(42);
  h.register_channel(vdsc::TriggerKind::Custom);
  const double rho = 0.05;
  const int n = 50000;
  int explored = 0;
  for (int t = 0; t < n; ++t) explored += feed(h, 1.0, rho).explore;
  // 5 sigma around the binomial mean.
  const double sigma = std::sqrt(rho * (1.0 - rho) / n);
  REQUIRE_THAT(static_cast<double>(explored) / n,
               Catch::Matchers::WithinAbs(rho, 5.0 * sigma));
}

TEST_CASE("a channel's first sample short-circuits to min(1, rho)") {
  // Warm one channel for 10 steps, then deliver the other channel's first
  // sample: that channel must contribute exactly min(1, rho).
  vdsc::Homeostat h(9);
  h.register_channel(vdsc::TriggerKind::Vpd);
  h.register_channel(vdsc::TriggerKind::CountBonus);
  vdsc::Rng noise(5);
  const double rho = 0.25;
  for (int t = 0; t < 10; ++t) {
    const std::optional<double> samples[2] = {noise.uniform(), std::nullopt};
    h.step(samples, rho);
  }
  const std::optional<double> samples[2] = {noise.uniform(), 123.0};
  const auto d = h.step(samples, rho);
  REQUIRE(d.per_channel_p[1].has_value());
  REQUIRE(*d.per_channel_p[1] == rho);
}

TEST_CASE("steps with no samples decide exploit and consume no randomness") {
  vdsc::Homeostat active(21);
  vdsc::Homeostat control(21);
  active.register_channel(vdsc::TriggerKind::Custom);
  control.register_channel(vdsc::TriggerKind::Custom);

  // Interleave 100 empty steps into one of two otherwise identical runs.
  const std::optional<double> empty[1] = {std::nullopt};
  vdsc::Rng stream_a(33);
  vdsc::Rng stream_b(33);
  for (int t = 0; t < 200; ++t) {
    if (t % 2 == 0) {
      const auto d = active.step(empty, 0.3);
      REQUIRE_FALSE(d.explore);
      REQUIRE(d.p_bar == 0.0);
      REQUIRE_FALSE(d.per_channel_p[0].has_value());
    }
    const auto da = feed(active, stream_a.gaussian(), 0.3);
    const auto db = feed(control, stream_b.gaussian(), 0.3);
    REQUIRE(da.p_bar == db.p_bar);
    REQUIRE(da.explore == db.explore);
  }
  REQUIRE(active.steps() == control.steps());
}

TEST_CASE("multi-channel probability is the mean over sampled channels") {
  vdsc::Homeostat both(1);
  vdsc::Homeostat only_a(2);
  vdsc::Homeostat only_b(3);
  both.register_channel(vdsc::TriggerKind::Vpd);
  both.register_channel(vdsc::TriggerKind::CountBonus);
  only_a.register_channel(vdsc::TriggerKind::Vpd);
  only_b.register_channel(vdsc::TriggerKind::CountBonus);

  vdsc::Rng ra(8);
  vdsc::Rng rb(80);
  const double rho = 0.2;
  for (int t = 0; t < 500; ++t) {
    const double xa = ra.uniform() * 3.0;
    const double xb = 5.0 + rb.gaussian();
    const std::optional<double> samples[2] = {xa, xb};
    const auto d = both.step(samples, rho);
    const auto da = feed(only_a, xa, rho);
    const auto db = feed(only_b, xb, rho);
    REQUIRE_THAT(d.p_bar,
                 Catch::Matchers::WithinAbs(0.5 * (da.p_bar + db.p_bar), 1e-15));
    REQUIRE(*d.per_channel_p[0] == da.p_bar);
    REQUIRE(*d.per_channel_p[1] == db.p_bar);
  }

  // With one channel absent, p_bar equals the present channel's p exactly.
  const std::optional<double> samples[2] = {std::nullopt, 5.5};
  const auto d = both.step(samples, rho);
  REQUIRE_FALSE(d.per_channel_p[0].has_value());
  REQUIRE(d.p_bar == *d.per_channel_p[1]);
}

TEST_CASE("probabilities are scale-invariant up to the variance guard") {
  // Scaling the whole stream by c barely moves p_bar once the running
  // variance dwarfs the 1e-8 guard (burn-in 100 steps).
  for (double c : {0.01, 100.0}) {
    vdsc::Homeostat base(1);
    vdsc::Homeostat scaled(1);
    base.register_channel(vdsc::TriggerKind::Custom);
    scaled.register_channel(vdsc::TriggerKind::Custom);
    vdsc::Rng stream(77);
    for (int t = 0; t < 2000; ++t) {
      const double x = stream.uniform() * 10.0;
      const auto db = feed(base, x, 0.01);
      const auto ds = feed(scaled, c * x, 0.01);
      if (t >= 100)
        REQUIRE_THAT(ds.p_bar, Catch::Matchers::WithinAbs(db.p_bar, 1e-6));
    }
  }
}

TEST_CASE("extreme outliers are clamped and stay finite") {
  vdsc::Homeostat h(6);
  h.register_channel(vdsc::TriggerKind::Custom);
  feed(h, 1.0, 0.5);
  feed(h, 1.1, 0.5);
  const auto d = feed(h, 1e300, 0.5);  // z would be astronomical unclamped
  REQUIRE(std::isfinite(d.p_bar));
  REQUIRE(d.p_bar <= 1.0);
  REQUIRE(d.p_bar >= 0.0);
  // And the state stays usable afterwards.
  const auto next = feed(h, 1.0, 0.5);
  REQUIRE(std::isfinite(next.p_bar));
}

TEST_CASE("probabilities never leave [0, 1]") {
  vdsc::Homeostat h(14);
  h.register_channel(vdsc::TriggerKind::Custom);
  vdsc::Rng stream(15);
  for (int t = 0; t < 5000; ++t) {
    const double x = stream.gaussian() * std::pow(10.0, stream.uniform_int(6));
    const auto d = feed(h, x, 0.7);
    REQUIRE(d.p_bar >= 0.0);
    REQUIRE(d.p_bar <= 1.0);
  }
}

TEST_CASE("duplicate channel registration is rejected") {
  vdsc::Homeostat h(0);
  h.register_channel(vdsc::TriggerKind::Vpd);
  REQUIRE_THROWS_AS(h.register_channel(vdsc::TriggerKind::Vpd), std::invalid_argument);
  REQUIRE_NOTHROW(h.register_channel(vdsc::TriggerKind::CountBonus));
  REQUIRE(h.channel_count() == 2);
}

TEST_CASE("invalid rho and malformed sample vectors are rejected") {
  vdsc::Homeostat h(0);
  h.register_channel(vdsc::TriggerKind::Custom);
  const std::optional<double> one[1] = {1.0};
  const std::optional<double> two[2] = {1.0, 2.0};
  REQUIRE_THROWS_AS(h.step(one, 0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(h.step(one, -0.1), std::invalid_argument);
  REQUIRE_THROWS_AS(h.step(one, 1.0001), std::invalid_argument);
  REQUIRE_THROWS_AS(h.step(two, 0.5), std::invalid_argument);
}

TEST_CASE("non-finite samples are rejected naming the channel") {
  vdsc::Homeostat h(0);
  h.register_channel(vdsc::TriggerKind::CountBonus);
  const std::optional<double> nan_sample[1] = {std::nan("")};
  try {
    h.step(nan_sample, 0.5);
    FAIL("expected invalid_argument");
  } catch (const std::invalid_argument& e) {
    REQUIRE(std::string(e.what()).find("count_bonus") != std::string::npos);
  }
}

TEST_CASE("rho may decay between steps without breaking the controller") {
  vdsc::Homeostat h(77);
  h.register_channel(vdsc::TriggerKind::Custom);
  vdsc::Rng stream(78);
  for (int t = 0; t < 3000; ++t) {
    const double rho = std::max(0.01, 1.0 - t * 1e-3);
    const auto d = feed(h, stream.uniform(), rho);
    REQUIRE(d.p_bar >= 0.0);
    REQUIRE(d.p_bar <= 1.0);
  }
}
