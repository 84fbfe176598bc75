#include "torusflow/models.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "torusflow/errors.hpp"
#include "torusflow/transform.hpp"

namespace torusflow {

namespace {

template <typename Fn>
SpectralField checked_term(const char* where, const char* term, Fn&& fn) {
  try {
    SpectralField out = fn();
    for (const auto& c : out.coefficients())
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw NumericalError("non-finite coefficient");
    return out;
  } catch (const NumericalError& e) {
    throw NumericalError(std::string(where) + ": non-finite values in the " + term + " term (" + e.what() + ")");
  }
}

RealGrid samples_of(const SpectralField& f, const Symbol& symbol, int grid) {
  return to_real_samples(mode_multiplier(f, symbol), grid);
}

}  // namespace

void EpitaxialParams::validate() const {
  std::vector<std::string> bad;
  if (!std::isfinite(K0) || K0 < 0) bad.emplace_back("params.K0: requires K0 >= 0");
  if (!std::isfinite(K1) || K1 < 0) bad.emplace_back("params.K1: requires K1 >= 0");
  if (!std::isfinite(K2) || K2 <= 0) bad.emplace_back("params.K2: requires K2 > 0");
  if (!std::isfinite(K3) || K3 < 0) bad.emplace_back("params.K3: requires K3 >= 0");
  if (!bad.empty()) throw ConfigError(std::move(bad));
}

void ThinFilmParams::validate() const {
  std::vector<std::string> bad;
  if (!std::isfinite(chi) || chi <= 0 || chi >= 1) bad.emplace_back("params.chi: requires 0 < chi < 1");
  if (p < 2) bad.emplace_back("params.p: requires integer p >= 2");
  if (!std::isfinite(c_estimate) || c_estimate <= 0) bad.emplace_back("params.c_estimate: requires c_estimate > 0");
  if (!bad.empty()) throw ConfigError(std::move(bad));
}

std::string to_string(Model m) { return m == Model::epitaxial ? "epitaxial" : "thinfilm"; }

SpectralField hessian_det2(const SpectralField& u) {
  const int n = u.cutoff();
  const int N = alias_free_grid_size(n, 2);
  RealGrid u11 = samples_of(u, symbols::second_partial(0, 0), N);
  const RealGrid u22 = samples_of(u, symbols::second_partial(1, 1), N);
  const RealGrid u12 = samples_of(u, symbols::second_partial(0, 1), N);
  auto out = u11.values();
  const auto b = u22.values();
  const auto c = u12.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = 2.0 * (out[i] * b[i] - c[i] * c[i]);
  return from_real_samples(u11, n);
}

SpectralField delta_of_delta_sq(const SpectralField& u) {
  const int n = u.cutoff();
  const int N = alias_free_grid_size(n, 2);
  const SpectralField w = mode_multiplier(u, symbols::laplacian());
  RealGrid acc = to_real_samples(w, N);
  const RealGrid lap_w = samples_of(w, symbols::laplacian(), N);
  const RealGrid w1 = samples_of(w, symbols::partial(0), N);
  const RealGrid w2 = samples_of(w, symbols::partial(1), N);
  auto out = acc.values();
  const auto lw = lap_w.values();
  const auto g1 = w1.values();
  const auto g2 = w2.values();
  // w Lap w + |grad w|^2, doubled.
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = 2.0 * (out[i] * lw[i] + g1[i] * g1[i] + g2[i] * g2[i]);
  return from_real_samples(acc, n);
}

SpectralField grad_lap_product(const SpectralField& v) {
  const int n = v.cutoff();
  const int N = alias_free_grid_size(n, 2);
  RealGrid v1 = samples_of(v, symbols::partial(0), N);
  const RealGrid v2 = samples_of(v, symbols::partial(1), N);
  const RealGrid l1 = samples_of(v, symbols::grad_laplacian(0), N);
  const RealGrid l2 = samples_of(v, symbols::grad_laplacian(1), N);
  auto out = v1.values();
  const auto a = v2.values();
  const auto b = l1.values();
  const auto c = l2.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = out[i] * b[i] + a[i] * c[i];
  return from_real_samples(v1, n);
}

SpectralField biharmonic_product(const SpectralField& v) {
  const int n = v.cutoff();
  const int N = alias_free_grid_size(n, 2);
  RealGrid vv = to_real_samples(v, N);
  const RealGrid bb = samples_of(v, symbols::biharmonic(), N);
  auto out = vv.values();
  const auto b = bb.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= b[i];
  return from_real_samples(vv, n);
}

SpectralField power_term(const SpectralField& v, int p) {
  if (p < 2) throw std::invalid_argument("power_term: exponent must be an integer >= 2");
  const int n = v.cutoff();
  const int N = alias_free_grid_size(n, p);
  RealGrid g = to_real_samples(v, N);
  for (auto& x : g.values()) {
    const double base = 1.0 + x;
    double r = base;
    for (int i = 1; i < p; ++i) r *= base;
    x = r;
  }
  return from_real_samples(g, n);
}

double linear_symbol(const ModelParams& params, int k1, int k2) {
  const double q = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
  if (const auto* e = std::get_if<EpitaxialParams>(&params)) return -e->K0 * q - e->K2 * q * q;
  return -q * q;
}

namespace {

SpectralField epitaxial_nonlinear(const SpectralField& u, const EpitaxialParams& prm) {
  SpectralField out(u.modes());
  if (prm.K1 != 0.0)
    out += checked_term("epitaxial_rhs", "2 K1 det D^2 u", [&] { return prm.K1 * hessian_det2(u); });
  if (prm.K3 != 0.0)
    out -= checked_term("epitaxial_rhs", "(K3/2) Lap (Lap u)^2", [&] { return (0.5 * prm.K3) * delta_of_delta_sq(u); });
  return out;
}

SpectralField thinfilm_nonlinear(const SpectralField& v, const ThinFilmParams& prm) {
  SpectralField out = checked_term("thinfilm_rhs", "v,i v,jji", [&] { return -1.0 * grad_lap_product(v); });
  out -= checked_term("thinfilm_rhs", "v v,iijj", [&] { return biharmonic_product(v); });
  out -= checked_term("thinfilm_rhs", "chi Lap (1+v)^p", [&] {
    return prm.chi * mode_multiplier(power_term(v, prm.p), symbols::laplacian());
  });
  return out;
}

}  // namespace

SpectralField nonlinear_terms(const SpectralField& state, const ModelParams& params) {
  if (const auto* e = std::get_if<EpitaxialParams>(&params)) return epitaxial_nonlinear(state, *e);
  return thinfilm_nonlinear(state, std::get<ThinFilmParams>(params));
}

SpectralField epitaxial_rhs(const SpectralField& u, const EpitaxialParams& params) {
  SpectralField out =
      checked_term("epitaxial_rhs", "linear", [&] {
        const ModelParams mp = params;
        return mode_multiplier(u, [&](int k1, int k2) { return Complex{linear_symbol(mp, k1, k2), 0.0}; });
      });
  out += epitaxial_nonlinear(u, params);
  return out;
}

SpectralField thinfilm_rhs(const SpectralField& v, const ThinFilmParams& params) {
  if (std::abs(v(0, 0)) >= 1e-12)
    throw std::invalid_argument("thinfilm_rhs: v must have zero mean (the mean of u is carried separately)");
  SpectralField out = checked_term("thinfilm_rhs", "-Lap^2 v", [&] {
    return -1.0 * mode_multiplier(v, symbols::biharmonic());
  });
  out += thinfilm_nonlinear(v, params);
  return out;
}

SpectralField rhs(const SpectralField& state, const ModelParams& params) {
  if (const auto* e = std::get_if<EpitaxialParams>(&params)) return epitaxial_rhs(state, *e);
  return thinfilm_rhs(state, std::get<ThinFilmParams>(params));
}

}  // namespace torusflow
