#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "support.hpp"
#include "tcoord/etc.hpp"

using tcoord::EstimatorState;
using tcoord::PaceProfile;

using testing::integrate;

TEST_CASE("threshold function") {
  const tcoord::ThresholdFunction h{0.03, 0.5, 2.0};
  CHECK(h(0.0) == doctest::Approx(0.53));
  CHECK(h(1.0) == doctest::Approx(0.03 + 0.5 * std::exp(-2.0)));
  for (double t = 0.0; t < 50.0; t += 0.37) {
    CHECK(h(t) >= 0.03);
    CHECK(h(t) <= 0.53);
  }
  CHECK(tcoord::ThresholdFunction{0.03, 0.0, 0.0}.problems().empty());
  const auto p = tcoord::ThresholdFunction{0.0, 0.0, 0.0}.problems();
  REQUIRE(p.size() == 1);
  CHECK(p[0].first == "c1");
  CHECK(p[0].second == "threshold floor must be positive");
  CHECK(tcoord::ThresholdFunction{0.03, -1.0, -1.0}.problems().size() == 2);
}

TEST_CASE("pace profile is piecewise constant") {
  const PaceProfile pace(1.0, {{10.0, 1.4}, {15.0, 0.8}});
  CHECK(pace.value(0.0) == 1.0);
  CHECK(pace.value(9.999) == 1.0);
  CHECK(pace.value(10.0) == 1.4);
  CHECK(pace.value(14.0) == 1.4);
  CHECK(pace.value(20.0) == 0.8);
  CHECK_THROWS_AS(PaceProfile(1.0, {{10.0, 1.4}, {10.0, 1.5}}), std::invalid_argument);
  CHECK_THROWS_AS(PaceProfile(1.0, {{0.0, 1.4}}), std::invalid_argument);
}

TEST_CASE("estimator closed form") {
  const PaceProfile unit(1.0, {});
  const EstimatorState est{1.0, 1.2, 2.0, 0};
  auto at_event = tcoord::propagate_estimator(est, unit, 2.0, 4.82);
  CHECK(at_event.gamma == 1.0);
  CHECK(at_event.gamma_dot == 1.2);

  const auto e = tcoord::propagate_estimator(est, unit, 2.5, 4.82);
  CHECK(e.gamma_dot == doctest::Approx(1.01796).epsilon(1e-5));
  CHECK(e.gamma == doctest::Approx(1.53777).epsilon(1e-5));
  const auto ref = integrate(1.0, 1.2, 2.0, 2.5, 4.82, unit);
  CHECK(std::abs(e.gamma - ref.gamma) <= 1e-9);
  CHECK(std::abs(e.gamma_dot - ref.gamma_dot) <= 1e-9);

  const auto ramp = tcoord::propagate_estimator({0.5, 1.0, 0.0, 0}, unit, 3.0, 4.82);
  CHECK(ramp.gamma == doctest::Approx(3.5).epsilon(1e-15));
  CHECK(ramp.gamma_dot == 1.0);

  CHECK_THROWS_AS(tcoord::propagate_estimator(est, unit, 1.9, 4.82), std::invalid_argument);
}

TEST_CASE("estimator composes across pace steps") {
  const PaceProfile pace(1.0, {{10.0, 1.4}, {10.25, 0.9}});
  const EstimatorState est{9.2, 1.3, 9.5, 3};
  const auto got = tcoord::propagate_estimator(est, pace, 11.0, 4.82);
  const auto ref = integrate(9.2, 1.3, 9.5, 11.0, 4.82, pace);
  CHECK(std::abs(got.gamma - ref.gamma) <= 1e-9);
  CHECK(std::abs(got.gamma_dot - ref.gamma_dot) <= 1e-9);
}

TEST_CASE("estimator matches fine integration for random draws") {
  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> b(0.5, 10.0), rate(0.0, 2.0), pace(0.5, 1.5), gamma(0.0, 10.0);
  for (int k = 0; k < 20; ++k) {
    const double bb = b(rng), g0 = gamma(rng), v0 = rate(rng);
    const PaceProfile p(pace(rng), {});
    const auto got = tcoord::propagate_estimator({g0, v0, 0.0, 0}, p, 1.0, bb);
    const auto ref = integrate(g0, v0, 0.0, 1.0, bb, p);
    CHECK(std::abs(got.gamma - ref.gamma) <= 1e-6);
    CHECK(std::abs(got.gamma_dot - ref.gamma_dot) <= 1e-6);
  }
}

TEST_CASE("estimation error and trigger") {
  const PaceProfile unit(1.0, {});
  // agent frozen at gamma = 2 while its estimate ramps
  const auto est = tcoord::propagate_estimator({2.0, 1.0, 0.0, 0}, unit, 0.01, 4.82);
  CHECK(tcoord::estimation_error(est, 2.0) == doctest::Approx(0.01).epsilon(1e-12));
  // a headwind holds the agent back: positive error
  CHECK(tcoord::estimation_error(est, 2.005) > 0.0);

  const tcoord::ThresholdFunction h{0.03, 0.0, 0.0};
  CHECK_FALSE(tcoord::check_trigger(0.03, 1.0, h));
  CHECK_FALSE(tcoord::check_trigger(-0.03, 1.0, h));
  CHECK_FALSE(tcoord::check_trigger(0.0, 1.0, h));
  CHECK(tcoord::check_trigger(0.031, 1.0, h));
  CHECK(tcoord::check_trigger(-0.031, 1.0, h));
}

TEST_CASE("event bus resets self estimator and every replica") {
  // 2 and 3 both listen to 1; 1 listens to 3
  const tcoord::Digraph g(3, {{2, 1}, {3, 1}, {1, 3}});
  tcoord::EventBus bus(g);
  CHECK(bus.size() == 3);
  CHECK(bus.neighbors(2) == std::vector<int>{1});
  CHECK(bus.event_count(1) == 0);

  const auto& ev = bus.fire(1, 0.5, 0.7, 1.1);
  CHECK(ev.agent == 1);
  CHECK(ev.k == 0);
  CHECK(bus.event_count(1) == 1);
  CHECK(bus.self_estimator(1) == EstimatorState{0.7, 1.1, 0.5, 0});
  CHECK(bus.replica(2, 1) == bus.self_estimator(1));
  CHECK(bus.replica(3, 1) == bus.self_estimator(1));

  const PaceProfile unit(1.0, {});
  const auto own = tcoord::propagate_estimator(bus.self_estimator(1), unit, 0.5, 4.82);
  CHECK(tcoord::estimation_error(own, 0.7) == 0.0);
  const auto r2 = tcoord::propagate_estimator(bus.replica(2, 1), unit, 1.3, 4.82);
  const auto r3 = tcoord::propagate_estimator(bus.replica(3, 1), unit, 1.3, 4.82);
  CHECK(std::memcmp(&r2, &r3, sizeof r2) == 0);

  bus.fire(1, 0.8, 1.0, 1.0);
  CHECK(bus.event_count(1) == 2);
  CHECK(bus.replica(2, 1).k == 1);
  CHECK_THROWS_AS(bus.fire(1, 0.8, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(bus.fire(1, 0.7, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(bus.replica(2, 3), std::out_of_range);
  CHECK(bus.log().size() == 2);
}

TEST_CASE("event lines round-trip bit for bit") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int k = 0; k < 500; ++k) {
    const tcoord::EventRecord ev{std::abs(u(rng)), 1 + k % 7, k, u(rng) * 1e-7, u(rng)};
    const auto back = tcoord::parse_event_line(tcoord::format_event_line(ev));
    CHECK(std::memcmp(&back.t, &ev.t, sizeof(double)) == 0);
    CHECK(std::memcmp(&back.gamma, &ev.gamma, sizeof(double)) == 0);
    CHECK(std::memcmp(&back.gamma_dot, &ev.gamma_dot, sizeof(double)) == 0);
    CHECK(back == ev);
  }
  CHECK(tcoord::format_event_line({0.25, 3, 2, 1.5, 1.0}) ==
        R"({"t":0.25,"agent":3,"k":2,"gamma":1.5,"gamma_dot":1.0})");
  CHECK_THROWS_AS(tcoord::parse_event_line("{\"t\":1}"), std::invalid_argument);
  CHECK_THROWS_AS(tcoord::parse_event_line("not json"), std::invalid_argument);
}
