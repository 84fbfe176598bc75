#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "torusflow/errors.hpp"
#include "torusflow/models.hpp"
#include "torusflow/transform.hpp"

using namespace torusflow;

namespace {
SpectralField from_terms(int n, std::initializer_list<std::tuple<int, int, Complex>> terms) {
  SpectralField f(n);
  for (const auto& [k1, k2, c] : terms) f.set_mode(k1, k2, c);
  return f;
}
}  // namespace

TEST_CASE("closed-form nonlinearities", "[models]") {
  SECTION("u = cos x1 cos x2 gives 2 det D^2 u = cos 2x1 + cos 2x2") {
    const auto u = from_terms(4, {{1, 1, 0.25}, {1, -1, 0.25}});
    const auto expect = from_terms(4, {{2, 0, 0.5}, {0, 2, 0.5}});
    CHECK(max_abs_diff(hessian_det2(u), expect) < 1e-12);
  }
  SECTION("u = cos x1 gives Lap (Lap u)^2 = -2 cos 2x1") {
    const auto u = from_terms(4, {{1, 0, 0.5}});
    const auto expect = from_terms(4, {{2, 0, -1.0}});
    CHECK(max_abs_diff(delta_of_delta_sq(u), expect) < 1e-12);
  }
  SECTION("p = 2, v = cos x1 gives (1+v)^2 = 3/2 + 2 cos x1 + cos 2x1 / 2") {
    const auto v = from_terms(4, {{1, 0, 0.5}});
    const auto expect = from_terms(4, {{0, 0, 1.5}, {1, 0, 1.0}, {2, 0, 0.25}});
    CHECK(max_abs_diff(power_term(v, 2), expect) < 1e-12);
  }
  SECTION("p = 3, v = cos x1 gives (1+v)^3 by the binomial expansion") {
    // 1 + 3c + 3c^2 + c^3 = 5/2 + 15/4 cos x + 3/2 cos 2x + 1/4 cos 3x
    const auto v = from_terms(4, {{1, 0, 0.5}});
    const auto expect = from_terms(4, {{0, 0, 2.5}, {1, 0, 15.0 / 8}, {2, 0, 0.75}, {3, 0, 0.125}});
    CHECK(max_abs_diff(power_term(v, 3), expect) < 1e-12);
  }
  SECTION("v = cos x1: v,i v,jji = -sin^2 x1 and v Lap^2 v = cos^2 x1") {
    const auto v = from_terms(4, {{1, 0, 0.5}});
    CHECK(max_abs_diff(grad_lap_product(v), from_terms(4, {{0, 0, -0.5}, {2, 0, 0.25}})) < 1e-12);
    CHECK(max_abs_diff(biharmonic_product(v), from_terms(4, {{0, 0, 0.5}, {2, 0, 0.25}})) < 1e-12);
  }
}

TEST_CASE("quadratic terms agree with kernel sums and real-space evaluation", "[models][property]") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 8; ++trial) {
    const auto u = oracle::random_field(5, rng, 1.0, 1.0);
    CHECK(oracle::relative_error(hessian_det2(u), oracle::hessian_det2(u)) < 1e-12);
    CHECK(oracle::relative_error(delta_of_delta_sq(u), oracle::delta_of_delta_sq(u)) < 1e-12);
    CHECK(oracle::relative_error(grad_lap_product(u), oracle::grad_lap_product(u)) < 1e-12);
    CHECK(oracle::relative_error(biharmonic_product(u), oracle::biharmonic_product(u)) < 1e-12);
    CHECK(oracle::relative_error(hessian_det2(u), oracle::real_space_hessian_det2(u)) < 1e-10);
    CHECK(oracle::relative_error(delta_of_delta_sq(u), oracle::real_space_delta_of_delta_sq(u)) < 1e-10);
    CHECK(oracle::relative_error(grad_lap_product(u), oracle::real_space_grad_lap_product(u)) < 1e-10);
    CHECK(oracle::relative_error(biharmonic_product(u), oracle::real_space_biharmonic_product(u)) < 1e-10);
  }
}

TEST_CASE("power term matches iterated exact products", "[models][property]") {
  std::mt19937_64 rng(4);
  for (int p : {2, 3, 4}) {
    const auto v = oracle::random_field(4, rng, 0.3, 1.0, true);
    CHECK(oracle::relative_error(power_term(v, p), oracle::power(v, p)) < 1e-12);
  }
  CHECK_THROWS_AS(power_term(SpectralField(2), 1), std::invalid_argument);
}

TEST_CASE("Hessian determinant is a null Lagrangian", "[models][property]") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const auto u = oracle::random_field(6, rng, 1.0, 2.0);
    CHECK(std::abs(hessian_det2(u)(0, 0)) < 1e-12);
  }
}

TEST_CASE("right-hand sides assemble the documented terms", "[models]") {
  std::mt19937_64 rng(21);
  const auto u = oracle::random_field(5, rng, 0.5, 2.0, true);
  const EpitaxialParams e{0.3, 0.7, 1.1, 0.4};
  const auto expect = 0.3 * mode_multiplier(u, symbols::laplacian()) + 0.7 * oracle::hessian_det2(u) -
                      1.1 * mode_multiplier(u, symbols::biharmonic()) - 0.2 * oracle::delta_of_delta_sq(u);
  CHECK(oracle::relative_error(epitaxial_rhs(u, e), expect) < 1e-12);
  CHECK(max_abs_diff(rhs(u, e), epitaxial_rhs(u, e)) == 0.0);

  const ThinFilmParams t{0.2, 3, 1.0};
  const auto lin = mode_multiplier(u, [](int k1, int k2) { return Complex{-std::pow(k1 * k1 + k2 * k2, 2.0)}; });
  const auto expect_tf = lin - oracle::grad_lap_product(u) - oracle::biharmonic_product(u) -
                         0.2 * mode_multiplier(oracle::power(u, 3), symbols::laplacian());
  CHECK(oracle::relative_error(thinfilm_rhs(u, t), expect_tf) < 1e-12);

  auto shifted = u;
  shifted.set_mode(0, 0, 0.1);
  CHECK_THROWS_AS(thinfilm_rhs(shifted, t), std::invalid_argument);
}

TEST_CASE("linear symbol plus nonlinear terms equals the full rhs", "[models]") {
  std::mt19937_64 rng(12);
  const auto u = oracle::random_field(4, rng, 0.5, 2.0, true);
  for (const ModelParams prm : {ModelParams{EpitaxialParams{0.5, 1.0, 2.0, 0.3}}, ModelParams{ThinFilmParams{}}}) {
    auto split = nonlinear_terms(u, prm);
    split += mode_multiplier(u, [&](int k1, int k2) { return Complex{linear_symbol(prm, k1, k2)}; });
    CHECK(oracle::relative_error(split, rhs(u, prm)) < 1e-13);
  }
  CHECK(linear_symbol(EpitaxialParams{2.0, 0, 3.0, 0}, 1, 1) == -2.0 * 2 - 3.0 * 4);
  CHECK(linear_symbol(ThinFilmParams{}, 1, 2) == -25.0);
}

TEST_CASE("parameter validation", "[models]") {
  CHECK_NOTHROW(EpitaxialParams{}.validate());
  try {
    EpitaxialParams{-1, -1, 0, -1}.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.violations().size() == 4);
    bool cites = false;
    for (const auto& v : e.violations()) cites |= v.find("K2 > 0") != std::string::npos;
    CHECK(cites);
  }
  CHECK_THROWS_AS((ThinFilmParams{1.0, 2, 1.0}.validate()), ConfigError);
  CHECK_THROWS_AS((ThinFilmParams{0.5, 1, 1.0}.validate()), ConfigError);
  CHECK_THROWS_AS((ThinFilmParams{0.5, 2, 0.0}.validate()), ConfigError);
}

TEST_CASE("non-finite states surface as numerical errors naming the term", "[models]") {
  SpectralField u(2);
  u.set_mode(1, 1, 1e300);
  try {
    epitaxial_rhs(u, EpitaxialParams{0, 1, 1, 0});
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("det") != std::string::npos);
  }
}
