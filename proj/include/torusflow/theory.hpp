#ifndef TORUSFLOW_THEORY_HPP
#define TORUSFLOW_THEORY_HPP

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "torusflow/integrator.hpp"
#include "torusflow/models.hpp"
#include "torusflow/spectral_field.hpp"

namespace torusflow {

enum class TheoremId { EpitaxialA2_K0zero, EpitaxialA2_K0pos, EpitaxialA0, ThinFilmA0 };

std::string to_string(TheoremId id);
TheoremId theorem_from_string(const std::string& s);

/// Smallness condition evaluated for one set of coefficients and data size.
struct TheoremReport {
  TheoremId theorem_id = TheoremId::EpitaxialA2_K0zero;
  std::vector<std::pair<std::string, double>> inputs;
  double margin = 0.0;
  double lambda = 0.0;
  bool satisfied = false;
};

/// A2 decay: K0 = 0 gives margin = lambda = K2 - 2 (K1 + K3) |u0|_A2; K0 > 0 gives
/// min(K2 - 2 K3 |u0|_A2, K0 - 2 K1 |u0|_A2).
TheoremReport check_epitaxial_A2(const EpitaxialParams& params, double u0_a2);

/// A0 decay for K3 = 0 (and K0 = 0): margin = lambda = K2 - 2 K1 |u0|_A0.
/// std::invalid_argument for K3 != 0 or K0 != 0.
TheoremReport check_epitaxial_A0(const EpitaxialParams& params, double u0_a0);

/// Thin film, with S = |v0| + 2 sum_{q=1}^{p-1} |v0|^q:
///   margin = 1 - chi - 2 |v0| - (c chi p! / 2) S
///   lambda = 1 - chi - 2 |v0| - c chi p! S
TheoremReport check_thinfilm_A0(const ThinFilmParams& params, double v0_a0);

enum class NormIndex { a0, a2, a4, a6 };
std::string to_string(NormIndex i);
NormIndex norm_index_from_string(const std::string& s);
double norm_of(const TraceRow& row, NormIndex i);
double norm_of(const NormVector& v, NormIndex i);

struct EnvelopeVerdict {
  bool passed = true;
  double worst_ratio = 0.0;
  std::optional<double> first_violation_t;
};

/// Checks norm(t) <= exp(-lambda t) norm(0) (1 + tol) on every trace row.
EnvelopeVerdict verify_decay_envelope(const NormTrace& trace, NormIndex index, double lambda, double tol);

struct AprioriEstimate {
  double lhs_estimate = 0.0;
  double rhs_bound = 0.0;
};

/// d/dt |u|_A2 = sum_k |k|^2 Re(conj(u^) u^_t) / |u^| over modes with u^ != 0,
/// against -(K2 - 2 K3 |u|_A2) |u|_A6 - (K0 - 2 K1 |u|_A2) |u|_A4.
AprioriEstimate monitor_apriori_A2(const SpectralField& u, const EpitaxialParams& params);

/// Time factor theta(t) of a separable test function phi(x, t) = psi(x) theta(t).
struct TimeProfile {
  std::function<double(double)> value;
  std::function<double(double)> derivative;

  /// theta(t) = sum_i c_i t^i.
  static TimeProfile polynomial(std::vector<double> coeffs);
};

struct TestFunction {
  SpectralField spatial;
  TimeProfile profile;
};

/// Incremental weak-form residual along a trajectory; feed states in time order
/// starting at t = 0. Spatial integrals are exact spectral inner products,
/// time integrals use the trapezoidal rule.
class WeakResidualAccumulator {
 public:
  WeakResidualAccumulator(TestFunction phi, ModelParams params);

  void add(double t, const SpectralField& state);

  /// |weak-form integral|; requires theta(t_last) = 0 to within 1e-12.
  double residual() const;

 private:
  double integrand(double t, const SpectralField& state) const;

  TestFunction phi_;
  ModelParams params_;
  SpectralField lap_psi_;
  SpectralField bilap_psi_;
  SpectralField grad_psi_[2];
  double boundary_ = 0.0;
  double integral_ = 0.0;
  std::optional<std::pair<double, double>> last_;  // (t, integrand)
};

struct TimedState {
  double t = 0.0;
  SpectralField state{1};
};

double weak_residual(std::span<const TimedState> states, const TestFunction& phi, const ModelParams& params);

/// int_{T^2} f g dx for real fields on the same mode set.
double l2_pairing(const SpectralField& f, const SpectralField& g);

}  // namespace torusflow

#endif  // TORUSFLOW_THEORY_HPP
