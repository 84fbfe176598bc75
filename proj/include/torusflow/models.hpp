#ifndef TORUSFLOW_MODELS_HPP
#define TORUSFLOW_MODELS_HPP

#include <string>
#include <variant>

#include "torusflow/spectral_field.hpp"

namespace torusflow {

/// Epitaxial growth:
///   u_t = K0 Lap u + 2 K1 det D^2 u - K2 Lap^2 u - (K3/2) Lap (Lap u)^2
struct EpitaxialParams {
  double K0 = 0.0;
  double K1 = 0.0;
  double K2 = 1.0;
  double K3 = 0.0;

  /// Throws ConfigError listing every violated sign constraint.
  void validate() const;
  bool operator==(const EpitaxialParams&) const = default;
};

/// Thin film with porous-medium term, written for v = u - 1:
///   v_t = -Lap^2 v - div(v grad Lap v) - chi Lap (1 + v)^p
/// `c_estimate` is the unspecified constant of the smallness condition.
struct ThinFilmParams {
  double chi = 0.1;
  int p = 2;
  double c_estimate = 1.0;

  void validate() const;
  bool operator==(const ThinFilmParams&) const = default;
};

/// Conserved mean of u for the thin-film problem; v = u - mean_u0.
struct MeanGauge {
  double mean_u0 = 1.0;
};

using ModelParams = std::variant<EpitaxialParams, ThinFilmParams>;

enum class Model { epitaxial, thinfilm };

inline Model model_of(const ModelParams& params) {
  return std::holds_alternative<EpitaxialParams>(params) ? Model::epitaxial : Model::thinfilm;
}
std::string to_string(Model m);

// Quadratic building blocks. Each returns the Galerkin-truncated spectral field
// of the named product on the input's mode set.

/// 2 det D^2 u = u,ii u,jj - u,ij u,ij;
///   (.)^(k) = sum_m (|m|^2 |k-m|^2 - (m.(k-m))^2) u^(m) u^(k-m).
SpectralField hessian_det2(const SpectralField& u);

/// Lap (Lap u)^2 = 2 (u,iijj u,kk + u,jji u,ikk).
SpectralField delta_of_delta_sq(const SpectralField& u);

/// v,i v,jji;  (.)^(k) = sum_m m.(k-m) |k-m|^2 v^(m) v^(k-m).
SpectralField grad_lap_product(const SpectralField& v);

/// v v,iijj;   (.)^(k) = sum_m |k-m|^4 v^(m) v^(k-m).
SpectralField biharmonic_product(const SpectralField& v);

/// (1 + v)^p, evaluated on a grid that is alias-free for degree p.
SpectralField power_term(const SpectralField& v, int p);

/// Diagonal linear symbol L(k) treated implicitly by the integrator:
/// epitaxial -K0 |k|^2 - K2 |k|^4, thin film -|k|^4.
double linear_symbol(const ModelParams& params, int k1, int k2);

/// rhs minus the diagonal linear part.
SpectralField nonlinear_terms(const SpectralField& state, const ModelParams& params);

SpectralField epitaxial_rhs(const SpectralField& u, const EpitaxialParams& params);

/// Requires |v^(0)| < 1e-12 (std::invalid_argument otherwise).
SpectralField thinfilm_rhs(const SpectralField& v, const ThinFilmParams& params);

SpectralField rhs(const SpectralField& state, const ModelParams& params);

}  // namespace torusflow

#endif  // TORUSFLOW_MODELS_HPP
