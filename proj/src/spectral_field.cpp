#include "torusflow/spectral_field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "torusflow/errors.hpp"

namespace torusflow {

namespace {

bool finite(Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

// |k|^s with exact integer arithmetic for even integer s.
double wavenumber_power(int k1, int k2, double s) {
  const double k2sum = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
  if (s == 0.0) return 1.0;
  if (k2sum == 0.0) return 0.0;
  const double half = s / 2.0;
  if (half == std::floor(half) && half <= 16.0) {
    double r = 1.0;
    for (int i = 0; i < static_cast<int>(half); ++i) r *= k2sum;
    return r;
  }
  return std::pow(std::sqrt(k2sum), s);
}

}  // namespace

ModeSet::ModeSet(int cutoff) : n_(cutoff) {
  if (cutoff < 1) throw std::invalid_argument("mode cutoff must be >= 1, got " + std::to_string(cutoff));
}

SpectralField::SpectralField(ModeSet modes) : modes_(modes), coeff_(modes.size()) {}

SpectralField SpectralField::from_coefficients(ModeSet modes, std::vector<Complex> coeff, double tol) {
  if (coeff.size() != modes.size())
    throw std::invalid_argument("coefficient count does not match mode set");
  double scale = 1.0;
  for (const auto& c : coeff) {
    if (!finite(c)) throw NumericalError("non-finite Fourier coefficient");
    scale = std::max(scale, std::abs(c));
  }
  const int n = modes.cutoff();
  for (int k1 = -n; k1 <= n; ++k1)
    for (int k2 = -n; k2 <= n; ++k2) {
      const double d = std::abs(coeff[modes.index(-k1, -k2)] - std::conj(coeff[modes.index(k1, k2)]));
      if (d > tol * scale)
        throw std::invalid_argument("coefficients violate Hermitian symmetry at k=(" + std::to_string(k1) +
                                    "," + std::to_string(k2) + ")");
    }
  return hermitian_part(modes, std::move(coeff));
}

SpectralField SpectralField::hermitian_part(ModeSet modes, std::vector<Complex> coeff) {
  if (coeff.size() != modes.size())
    throw std::invalid_argument("coefficient count does not match mode set");
  SpectralField out(modes);
  const int n = modes.cutoff();
  for (int k1 = -n; k1 <= n; ++k1)
    for (int k2 = -n; k2 <= n; ++k2) {
      const Complex c = coeff[modes.index(k1, k2)];
      if (!finite(c)) throw NumericalError("non-finite Fourier coefficient");
      const Complex mirrored = std::conj(coeff[modes.index(-k1, -k2)]);
      out.coeff_[modes.index(k1, k2)] = c == mirrored ? c : 0.5 * (c + mirrored);
    }
  return out;
}

void SpectralField::set_mode(int k1, int k2, Complex value) {
  if (!modes_.contains(k1, k2)) throw std::out_of_range("mode outside the mode set");
  if (!finite(value)) throw NumericalError("non-finite Fourier coefficient");
  if (k1 == 0 && k2 == 0) {
    if (value.imag() != 0.0) throw std::invalid_argument("the k=0 coefficient of a real field must be real");
    coeff_[modes_.index(0, 0)] = value;
    return;
  }
  coeff_[modes_.index(k1, k2)] = value;
  coeff_[modes_.index(-k1, -k2)] = std::conj(value);
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  if (!(modes_ == other.modes_)) throw std::invalid_argument("mode set mismatch");
  for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] += other.coeff_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  if (!(modes_ == other.modes_)) throw std::invalid_argument("mode set mismatch");
  for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] -= other.coeff_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  if (!std::isfinite(s)) throw NumericalError("non-finite scale factor");
  for (auto& c : coeff_) c *= s;
  return *this;
}

double hermitian_defect(const SpectralField& f) {
  double worst = 0.0;
  f.for_each_mode([&](int k1, int k2, Complex c) {
    worst = std::max(worst, std::abs(f(-k1, -k2) - std::conj(c)));
  });
  return worst;
}

double max_abs_diff(const SpectralField& a, const SpectralField& b) {
  if (!(a.modes() == b.modes())) throw std::invalid_argument("mode set mismatch");
  double worst = 0.0;
  const auto ca = a.coefficients();
  const auto cb = b.coefficients();
  for (std::size_t i = 0; i < ca.size(); ++i) worst = std::max(worst, std::abs(ca[i] - cb[i]));
  return worst;
}

double wiener_norm(const SpectralField& f, double s) {
  if (!(s >= 0.0)) throw std::invalid_argument("Wiener index s must be >= 0");
  double sum = 0.0;
  f.for_each_mode([&](int k1, int k2, Complex c) {
    if (c != Complex{}) sum += wavenumber_power(k1, k2, s) * std::abs(c);
  });
  return sum;
}

NormVector norms(const SpectralField& f) {
  NormVector v;
  f.for_each_mode([&](int k1, int k2, Complex c) {
    const double m = std::abs(c);
    const double k2sum = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
    v.a0 += m;
    v.a2 += k2sum * m;
    v.a4 += k2sum * k2sum * m;
    v.a6 += k2sum * k2sum * k2sum * m;
  });
  return v;
}

SpectralField project(const SpectralField& f, int n) {
  if (n < 1) throw std::invalid_argument("projection cutoff must be >= 1");
  SpectralField out = f;
  if (n >= f.cutoff()) return out;
  std::vector<Complex> c(f.coefficients().begin(), f.coefficients().end());
  f.for_each_mode([&](int k1, int k2, Complex) {
    if (std::max(std::abs(k1), std::abs(k2)) > n) c[f.modes().index(k1, k2)] = Complex{};
  });
  return SpectralField::hermitian_part(f.modes(), std::move(c));
}

SpectralField with_cutoff(const SpectralField& f, int n) {
  const ModeSet target(n);
  std::vector<Complex> c(target.size());
  const int m = std::min(n, f.cutoff());
  for (int k1 = -m; k1 <= m; ++k1)
    for (int k2 = -m; k2 <= m; ++k2) c[target.index(k1, k2)] = f(k1, k2);
  return SpectralField::hermitian_part(target, std::move(c));
}

SpectralField mode_multiplier(const SpectralField& f, const Symbol& symbol) {
  const ModeSet& modes = f.modes();
  const int n = modes.cutoff();
  std::vector<Complex> sym(modes.size());
  for (int k1 = -n; k1 <= n; ++k1)
    for (int k2 = -n; k2 <= n; ++k2) {
      const Complex s = symbol(k1, k2);
      if (!finite(s)) throw NumericalError("multiplier symbol is non-finite at k=(" + std::to_string(k1) + "," +
                                           std::to_string(k2) + ")");
      sym[modes.index(k1, k2)] = s;
    }
  for (int k1 = -n; k1 <= n; ++k1)
    for (int k2 = -n; k2 <= n; ++k2) {
      const Complex s = sym[modes.index(k1, k2)];
      if (std::abs(sym[modes.index(-k1, -k2)] - std::conj(s)) > 1e-12 * std::max(1.0, std::abs(s)))
        throw std::invalid_argument("multiplier symbol is not Hermitian; output would not be real");
    }
  std::vector<Complex> c(f.coefficients().begin(), f.coefficients().end());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= sym[i];
  return SpectralField::hermitian_part(modes, std::move(c));
}

namespace symbols {

Symbol identity() {
  return [](int, int) { return Complex{1.0, 0.0}; };
}

Symbol partial(int j) {
  if (j != 0 && j != 1) throw std::invalid_argument("direction must be 0 or 1");
  return [j](int k1, int k2) { return Complex{0.0, static_cast<double>(j == 0 ? k1 : k2)}; };
}

Symbol second_partial(int i, int j) {
  if ((i != 0 && i != 1) || (j != 0 && j != 1)) throw std::invalid_argument("direction must be 0 or 1");
  return [i, j](int k1, int k2) {
    const double ki = i == 0 ? k1 : k2;
    const double kj = j == 0 ? k1 : k2;
    return Complex{-ki * kj, 0.0};
  };
}

Symbol laplacian() {
  return [](int k1, int k2) { return Complex{-(static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2), 0.0}; };
}

Symbol biharmonic() {
  return [](int k1, int k2) {
    const double q = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
    return Complex{q * q, 0.0};
  };
}

Symbol grad_laplacian(int j) {
  if (j != 0 && j != 1) throw std::invalid_argument("direction must be 0 or 1");
  return [j](int k1, int k2) {
    const double q = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
    return Complex{0.0, -static_cast<double>(j == 0 ? k1 : k2) * q};
  };
}

}  // namespace symbols

SpectralField scale_modes(const SpectralField& f, int lambda, int out_cutoff) {
  if (lambda < 1) throw std::invalid_argument("scale factor must be a positive integer");
  const int n = f.cutoff();
  if (out_cutoff < 0) out_cutoff = lambda * n;
  if (static_cast<long long>(lambda) * n > out_cutoff)
    throw std::out_of_range("scaled modes overflow the target mode set");
  const ModeSet target(out_cutoff);
  std::vector<Complex> c(target.size());
  f.for_each_mode([&](int k1, int k2, Complex v) { c[target.index(lambda * k1, lambda * k2)] = v; });
  return SpectralField::hermitian_part(target, std::move(c));
}

}  // namespace torusflow
