#include "torusflow/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "torusflow/transform.hpp"

namespace torusflow {

std::string to_string(TheoremId id) {
  switch (id) {
    case TheoremId::EpitaxialA2_K0zero: return "EpitaxialA2_K0zero";
    case TheoremId::EpitaxialA2_K0pos: return "EpitaxialA2_K0pos";
    case TheoremId::EpitaxialA0: return "EpitaxialA0";
    case TheoremId::ThinFilmA0: return "ThinFilmA0";
  }
  return "unknown";
}

TheoremId theorem_from_string(const std::string& s) {
  for (auto id : {TheoremId::EpitaxialA2_K0zero, TheoremId::EpitaxialA2_K0pos, TheoremId::EpitaxialA0,
                  TheoremId::ThinFilmA0})
    if (to_string(id) == s) return id;
  throw std::invalid_argument("unknown theorem id '" + s + "'");
}

TheoremReport check_epitaxial_A2(const EpitaxialParams& prm, double u0_a2) {
  if (!(u0_a2 >= 0)) throw std::invalid_argument("initial A2 norm must be >= 0");
  prm.validate();
  TheoremReport r;
  r.inputs = {{"K0", prm.K0}, {"K1", prm.K1}, {"K2", prm.K2}, {"K3", prm.K3}, {"u0_a2", u0_a2}};
  if (prm.K0 == 0.0) {
    r.theorem_id = TheoremId::EpitaxialA2_K0zero;
    r.margin = prm.K2 - 2.0 * (prm.K3 + prm.K1) * u0_a2;
  } else {
    r.theorem_id = TheoremId::EpitaxialA2_K0pos;
    r.margin = std::min(prm.K2 - 2.0 * prm.K3 * u0_a2, prm.K0 - 2.0 * prm.K1 * u0_a2);
  }
  r.lambda = r.margin;
  r.satisfied = r.margin > 0.0;
  return r;
}

TheoremReport check_epitaxial_A0(const EpitaxialParams& prm, double u0_a0) {
  if (!(u0_a0 >= 0)) throw std::invalid_argument("initial A0 norm must be >= 0");
  prm.validate();
  if (prm.K3 != 0.0) throw std::invalid_argument("the A0 estimate requires K3 = 0");
  if (prm.K0 != 0.0) throw std::invalid_argument("the A0 estimate is only stated for K0 = 0");
  TheoremReport r;
  r.theorem_id = TheoremId::EpitaxialA0;
  r.inputs = {{"K0", prm.K0}, {"K1", prm.K1}, {"K2", prm.K2}, {"K3", prm.K3}, {"u0_a0", u0_a0}};
  r.margin = prm.K2 - 2.0 * prm.K1 * u0_a0;
  r.lambda = r.margin;
  r.satisfied = r.margin > 0.0;
  return r;
}

TheoremReport check_thinfilm_A0(const ThinFilmParams& prm, double v0_a0) {
  if (!(v0_a0 >= 0)) throw std::invalid_argument("initial A0 norm must be >= 0");
  prm.validate();
  double factorial = 1.0;
  for (int i = 2; i <= prm.p; ++i) factorial *= i;
  double powers = 0.0;
  double pw = 1.0;
  for (int q = 1; q <= prm.p - 1; ++q) {
    pw *= v0_a0;
    powers += pw;
  }
  const double s = v0_a0 + 2.0 * powers;
  const double coupling = prm.c_estimate * prm.chi * factorial;
  const double base = 1.0 - prm.chi - 2.0 * v0_a0;

  TheoremReport r;
  r.theorem_id = TheoremId::ThinFilmA0;
  r.inputs = {{"chi", prm.chi}, {"p", static_cast<double>(prm.p)}, {"c_estimate", prm.c_estimate}, {"v0_a0", v0_a0}};
  r.margin = base - 0.5 * coupling * s;
  r.lambda = base - coupling * s;
  r.satisfied = r.margin > 0.0;
  return r;
}

std::string to_string(NormIndex i) {
  switch (i) {
    case NormIndex::a0: return "a0";
    case NormIndex::a2: return "a2";
    case NormIndex::a4: return "a4";
    case NormIndex::a6: return "a6";
  }
  return "unknown";
}

NormIndex norm_index_from_string(const std::string& s) {
  for (auto i : {NormIndex::a0, NormIndex::a2, NormIndex::a4, NormIndex::a6})
    if (to_string(i) == s) return i;
  throw std::invalid_argument("unknown norm '" + s + "' (expected a0, a2, a4 or a6)");
}

double norm_of(const TraceRow& row, NormIndex i) {
  switch (i) {
    case NormIndex::a0: return row.a0;
    case NormIndex::a2: return row.a2;
    case NormIndex::a4: return row.a4;
    case NormIndex::a6: return row.a6;
  }
  return 0.0;
}

double norm_of(const NormVector& v, NormIndex i) {
  switch (i) {
    case NormIndex::a0: return v.a0;
    case NormIndex::a2: return v.a2;
    case NormIndex::a4: return v.a4;
    case NormIndex::a6: return v.a6;
  }
  return 0.0;
}

EnvelopeVerdict verify_decay_envelope(const NormTrace& trace, NormIndex index, double lambda, double tol) {
  if (trace.empty()) throw std::invalid_argument("verify_decay_envelope: empty trace");
  const auto& rows = trace.rows();
  const double t0 = rows.front().t;
  const double n0 = norm_of(rows.front(), index);
  EnvelopeVerdict v;
  for (const auto& row : rows) {
    const double bound = std::exp(-lambda * (row.t - t0)) * n0;
    const double value = norm_of(row, index);
    double ratio;
    if (bound > 0.0)
      ratio = value / bound;
    else
      ratio = value == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    v.worst_ratio = std::max(v.worst_ratio, ratio);
    if (value > bound * (1.0 + tol) && !v.first_violation_t) {
      v.passed = false;
      v.first_violation_t = row.t;
    }
  }
  return v;
}

AprioriEstimate monitor_apriori_A2(const SpectralField& u, const EpitaxialParams& prm) {
  const SpectralField du = epitaxial_rhs(u, prm);
  AprioriEstimate e;
  u.for_each_mode([&](int k1, int k2, Complex c) {
    const double m = std::abs(c);
    if (m == 0.0) return;
    const double q = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
    e.lhs_estimate += q * (std::conj(c) * du(k1, k2)).real() / m;
  });
  const NormVector nv = norms(u);
  e.rhs_bound = -(prm.K2 - 2.0 * prm.K3 * nv.a2) * nv.a6 - (prm.K0 - 2.0 * prm.K1 * nv.a2) * nv.a4;
  return e;
}

TimeProfile TimeProfile::polynomial(std::vector<double> coeffs) {
  std::vector<double> deriv;
  for (std::size_t i = 1; i < coeffs.size(); ++i) deriv.push_back(static_cast<double>(i) * coeffs[i]);
  auto horner = [](const std::vector<double>& c) {
    return [c](double t) {
      double r = 0.0;
      for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * t + *it;
      return r;
    };
  };
  return TimeProfile{horner(coeffs), horner(deriv)};
}

double l2_pairing(const SpectralField& f, const SpectralField& g) {
  if (!(f.modes() == g.modes())) throw std::invalid_argument("l2_pairing: mode set mismatch");
  const auto a = f.coefficients();
  const auto b = g.coefficients();
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += (a[i] * std::conj(b[i])).real();
  return 4.0 * std::numbers::pi * std::numbers::pi * sum;
}

WeakResidualAccumulator::WeakResidualAccumulator(TestFunction phi, ModelParams params)
    : phi_(std::move(phi)),
      params_(std::move(params)),
      lap_psi_(mode_multiplier(phi_.spatial, symbols::laplacian())),
      bilap_psi_(mode_multiplier(phi_.spatial, symbols::biharmonic())),
      grad_psi_{mode_multiplier(phi_.spatial, symbols::partial(0)),
                mode_multiplier(phi_.spatial, symbols::partial(1))} {
  if (!phi_.profile.value || !phi_.profile.derivative)
    throw std::invalid_argument("test function needs a time profile and its derivative");
}

double WeakResidualAccumulator::integrand(double t, const SpectralField& state) const {
  const SpectralField& psi = phi_.spatial;
  const double theta = phi_.profile.value(t);
  const double dtheta = phi_.profile.derivative(t);
  if (const auto* e = std::get_if<EpitaxialParams>(&params_)) {
    double space = e->K0 * l2_pairing(state, lap_psi_) - e->K2 * l2_pairing(state, bilap_psi_);
    if (e->K1 != 0.0) space += e->K1 * l2_pairing(hessian_det2(state), psi);
    if (e->K3 != 0.0) {
      const SpectralField w = mode_multiplier(state, symbols::laplacian());
      space -= 0.5 * e->K3 * l2_pairing(convolve(w, w), lap_psi_);
    }
    return l2_pairing(state, psi) * dtheta + theta * space;
  }
  const auto& tf = std::get<ThinFilmParams>(params_);
  double space = l2_pairing(state, bilap_psi_) + tf.chi * l2_pairing(power_term(state, tf.p), lap_psi_);
  for (int i = 0; i < 2; ++i) {
    const SpectralField flux = convolve(state, mode_multiplier(state, symbols::grad_laplacian(i)));
    space -= l2_pairing(flux, grad_psi_[i]);
  }
  return -l2_pairing(state, psi) * dtheta + theta * space;
}

void WeakResidualAccumulator::add(double t, const SpectralField& state) {
  if (!(state.modes() == phi_.spatial.modes()))
    throw std::invalid_argument("weak residual: test function and state must share a mode set");
  if (last_ && !(t > last_->first)) throw std::invalid_argument("weak residual: states must be time-ordered");
  const double g = integrand(t, state);
  if (!last_) {
    const double sign = model_of(params_) == Model::epitaxial ? 1.0 : -1.0;
    boundary_ = sign * l2_pairing(state, phi_.spatial) * phi_.profile.value(t);
  } else {
    integral_ += 0.5 * (t - last_->first) * (g + last_->second);
  }
  last_ = {t, g};
}

double WeakResidualAccumulator::residual() const {
  if (!last_) return 0.0;
  if (std::abs(phi_.profile.value(last_->first)) > 1e-12)
    throw std::invalid_argument("weak residual: time profile must vanish at the final time");
  return std::abs(boundary_ + integral_);
}

double weak_residual(std::span<const TimedState> states, const TestFunction& phi, const ModelParams& params) {
  WeakResidualAccumulator acc(phi, params);
  for (const auto& s : states) acc.add(s.t, s.state);
  return acc.residual();
}

}  // namespace torusflow
