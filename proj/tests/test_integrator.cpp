#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "torusflow/errors.hpp"
#include "torusflow/integrator.hpp"

using namespace torusflow;

namespace {
StepperConfig stepper(Scheme s, double dt, double t_end, int record_every = 1) {
  StepperConfig c;
  c.scheme = s;
  c.dt = dt;
  c.t_end = t_end;
  c.record_every = record_every;
  return c;
}
}  // namespace

TEST_CASE("scheme names", "[integrator]") {
  CHECK(to_string(Scheme::etd2) == "ETD2");
  CHECK(scheme_from_string("IMEX1") == Scheme::imex1);
  CHECK_THROWS_AS(scheme_from_string("RK4"), std::invalid_argument);
}

TEST_CASE("single linear mode decays exactly under ETD2", "[integrator]") {
  const EpitaxialParams prm{0.5, 0.0, 1.0, 0.0};
  SpectralField u(4);
  u.set_mode(1, 0, 0.05);  // |k| = 1, A2 = 0.1
  for (double dt : {0.1, 0.05, 0.01}) {
    const auto out = simulate(u, prm, stepper(Scheme::etd2, dt, 1.0));
    REQUIRE(out.status == RunStatus::completed);
    for (const auto& row : out.trace.rows()) {
      const double exact = 0.1 * std::exp(-(prm.K0 + prm.K2) * row.t);
      CHECK(std::abs(row.a2 - exact) <= 1e-8 * exact);
    }
  }
}

TEST_CASE("IMEX1 is first order on a linear mode", "[integrator]") {
  const EpitaxialParams prm{};
  SpectralField u(2);
  u.set_mode(1, 1, 0.1);
  const double exact = 0.2 * std::exp(-4.0);
  auto err = [&](double dt) {
    const auto out = simulate(u, prm, stepper(Scheme::imex1, dt, 1.0));
    return std::abs(out.trace.rows().back().a0 - exact);
  };
  const double ratio = err(0.01) / err(0.005);
  CHECK(ratio > 1.8);
  CHECK(ratio < 2.2);
}

TEST_CASE("observed orders on a nonlinear run", "[integrator]") {
  std::mt19937_64 rng(31);
  const auto u = oracle::random_field(6, rng, 0.05, 4.0, true);
  const EpitaxialParams prm{0.2, 0.8, 1.0, 0.3};
  const double t_end = 0.2;
  const auto ref = simulate(u, prm, stepper(Scheme::etd2, 1e-4 / 4, t_end)).final_field;
  auto err = [&](Scheme s, double dt) {
    return wiener_norm(simulate(u, prm, stepper(s, dt, t_end, 1000000)).final_field - ref, 0.0);
  };
  const double etd = err(Scheme::etd2, 1e-3) / err(Scheme::etd2, 5e-4);
  CHECK(etd > 3.5);
  CHECK(etd < 4.5);
  const double imex = err(Scheme::imex1, 4e-3) / err(Scheme::imex1, 2e-3);
  CHECK(imex > 1.7);
  CHECK(imex < 2.3);
}

TEST_CASE("mean is carried unchanged", "[integrator][property]") {
  std::mt19937_64 rng(5);
  auto u = oracle::random_field(5, rng, 0.05, 3.0, true);
  u.set_mode(0, 0, 0.37);
  const auto out = simulate(u, EpitaxialParams{0.1, 1.0, 1.0, 0.5}, stepper(Scheme::etd2, 1e-3, 0.5, 50));
  for (const auto& row : out.trace.rows()) CHECK(row.mean == 0.37);

  const auto v = oracle::random_field(5, rng, 0.05, 3.0, true);
  SimulationHooks hooks;
  hooks.mean_offset = 1.0;
  const auto tf = simulate(v, ThinFilmParams{}, stepper(Scheme::imex1, 1e-3, 0.5, 50), hooks);
  for (const auto& row : tf.trace.rows()) CHECK(row.mean == 1.0);
  CHECK(tf.final_field(0, 0) == Complex{});
}

TEST_CASE("recording cadence and hooks", "[integrator]") {
  SpectralField u(2);
  u.set_mode(1, 0, 0.1);
  int calls = 0, checkpoints = 0;
  SimulationHooks hooks;
  hooks.on_step = [&](double, const SpectralField&) { ++calls; };
  hooks.checkpoint_every = 4;
  hooks.on_checkpoint = [&](long step, double t, const SpectralField&) {
    ++checkpoints;
    CHECK(step % 4 == 0);
    CHECK(std::abs(t - step * 0.01) < 1e-15);
  };
  const auto out = simulate(u, EpitaxialParams{}, stepper(Scheme::etd2, 0.01, 0.1, 3), hooks);
  CHECK(calls == 11);
  CHECK(checkpoints == 2);
  REQUIRE(out.trace.size() == 5);  // t = 0, 0.03, 0.06, 0.09, 0.1
  CHECK(std::abs(out.trace.rows()[1].t - 0.03) < 1e-15);
  CHECK(out.trace.rows().back().t == 0.1);
  CHECK(out.final_time == 0.1);
  CHECK(out.trace.rows().front().dt == 0.01);
}

TEST_CASE("runs are bit-reproducible", "[integrator]") {
  std::mt19937_64 rng(77);
  const auto u = oracle::random_field(6, rng, 0.1, 3.0, true);
  const EpitaxialParams prm{0, 1, 1, 1};
  const auto a = simulate(u, prm, stepper(Scheme::etd2, 1e-3, 0.05));
  const auto b = simulate(u, prm, stepper(Scheme::etd2, 1e-3, 0.05));
  CHECK(a.final_field == b.final_field);
}

TEST_CASE("large data trips the blow-up detector before t_end", "[integrator]") {
  SpectralField u(8);
  u.set_mode(1, 0, 2.0);
  u.set_mode(0, 1, 2.0);
  u.set_mode(1, 1, Complex{0.0, 1.5});
  StepperConfig cfg = stepper(Scheme::etd2, 1e-4, 1.0, 100);
  cfg.blowup_threshold = 1e3;
  const auto out = simulate(u, EpitaxialParams{0, 50, 1, 0}, cfg);
  CHECK(out.status != RunStatus::completed);
  CHECK(out.final_time < 1.0);
  if (out.status == RunStatus::blowup_detected) {
    CHECK(out.trace.rows().back().a0 > 1e3);
    const auto ev = detect_blowup(out.trace, 1e3);
    REQUIRE(ev);
    CHECK(ev->row == out.trace.size() - 1);
  }
}

TEST_CASE("stepper configuration is validated", "[integrator]") {
  SpectralField u(2);
  u.set_mode(1, 0, 1.0);
  CHECK_THROWS_AS(simulate(u, EpitaxialParams{}, stepper(Scheme::etd2, 0.0, 1.0)), ConfigError);
  CHECK_THROWS_AS(simulate(u, EpitaxialParams{}, stepper(Scheme::etd2, 0.1, 0.01)), ConfigError);
  CHECK_THROWS_AS(simulate(u, EpitaxialParams{}, stepper(Scheme::etd2, 0.1, 1.0, 0)), ConfigError);
  StepperConfig low = stepper(Scheme::etd2, 0.1, 1.0);
  low.blowup_threshold = 1.5;
  CHECK_THROWS_AS(simulate(u, EpitaxialParams{}, low), ConfigError);
  CHECK(StepperConfig{}.threshold_for(0.0) == 1e6);
  CHECK(StepperConfig{}.threshold_for(3.0) == 3e6);

  SpectralField shifted(2);
  shifted.set_mode(0, 0, 1.0);
  CHECK_THROWS_AS(simulate(shifted, ThinFilmParams{}, stepper(Scheme::etd2, 0.1, 1.0)), std::invalid_argument);
}

TEST_CASE("norm traces reject bad rows", "[integrator]") {
  NormTrace trace;
  trace.push({0.0, 1, 1, 1, 1, 0, 0.1});
  CHECK_THROWS_AS(trace.push({0.0, 1, 1, 1, 1, 0, 0.1}), std::invalid_argument);
  CHECK_THROWS_AS(trace.push({0.1, std::numeric_limits<double>::quiet_NaN(), 1, 1, 1, 0, 0.1}),
                  std::invalid_argument);
  trace.push({0.1, 5, 1, 1, 1, 0, 0.1});
  CHECK(trace.size() == 2);
  CHECK_FALSE(detect_blowup(trace, 10.0));
  const auto ev = detect_blowup(trace, 2.0);
  REQUIRE(ev);
  CHECK(ev->t == 0.1);
  CHECK(ev->norm == 5.0);
}

TEST_CASE("one step keeps the zero mode", "[integrator]") {
  std::mt19937_64 rng(1);
  auto u = oracle::random_field(4, rng, 0.1, 3.0, true);
  u.set_mode(0, 0, 0.25);
  const auto next = step(u, 1e-3, EpitaxialParams{0, 1, 1, 1}, Scheme::etd2);
  CHECK(next(0, 0) == Complex{0.25});
  CHECK(hermitian_defect(next) == 0.0);
}
