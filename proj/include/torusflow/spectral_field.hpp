#ifndef TORUSFLOW_SPECTRAL_FIELD_HPP
#define TORUSFLOW_SPECTRAL_FIELD_HPP

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace torusflow {

using Complex = std::complex<double>;

/// Square set of wavenumbers k = (k1, k2) with max(|k1|, |k2|) <= n.
class ModeSet {
 public:
  explicit ModeSet(int cutoff);

  int cutoff() const { return n_; }
  int width() const { return 2 * n_ + 1; }
  std::size_t size() const { return static_cast<std::size_t>(width()) * width(); }

  bool contains(int k1, int k2) const {
    return k1 >= -n_ && k1 <= n_ && k2 >= -n_ && k2 <= n_;
  }
  /// Storage slot; lexicographic in (k1, k2).
  std::size_t index(int k1, int k2) const {
    return static_cast<std::size_t>(k1 + n_) * width() + static_cast<std::size_t>(k2 + n_);
  }

  bool operator==(const ModeSet&) const = default;

 private:
  int n_;
};

/// Fourier coefficients of a real 2pi-periodic function on the 2-torus,
///   f(x) = sum_k f^(k) exp(i k.x),   f^(k) = (2pi)^-2 int f(x) exp(-i k.x) dx,
/// stored densely over a ModeSet. The field is always Hermitian,
/// f^(-k) = conj(f^(k)), and finite.
class SpectralField {
 public:
  /// Zero field.
  explicit SpectralField(ModeSet modes);
  explicit SpectralField(int cutoff) : SpectralField(ModeSet(cutoff)) {}

  /// Validating constructor: rejects non-finite values (NumericalError) and
  /// Hermitian defects above `tol * max(1, max|c|)` (std::invalid_argument),
  /// then removes the remaining defect exactly.
  static SpectralField from_coefficients(ModeSet modes, std::vector<Complex> coeff,
                                         double tol = 1e-10);

  /// Hermitian part (c(k) + conj(c(-k))) / 2 of arbitrary finite coefficients.
  static SpectralField hermitian_part(ModeSet modes, std::vector<Complex> coeff);

  const ModeSet& modes() const { return modes_; }
  int cutoff() const { return modes_.cutoff(); }

  /// Coefficient at k; zero outside the mode set.
  Complex operator()(int k1, int k2) const {
    return modes_.contains(k1, k2) ? coeff_[modes_.index(k1, k2)] : Complex{};
  }

  /// Sets f^(k) = value and f^(-k) = conj(value). At k = 0 the value must be real.
  void set_mode(int k1, int k2, Complex value);

  double mean() const { return coeff_[modes_.index(0, 0)].real(); }

  std::span<const Complex> coefficients() const { return coeff_; }

  /// Calls fn(k1, k2, coefficient) in storage order.
  template <typename Fn>
  void for_each_mode(Fn&& fn) const {
    const int n = cutoff();
    std::size_t idx = 0;
    for (int k1 = -n; k1 <= n; ++k1)
      for (int k2 = -n; k2 <= n; ++k2) fn(k1, k2, coeff_[idx++]);
  }

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double s);

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }
  friend SpectralField operator*(SpectralField a, double s) { return a *= s; }

  bool operator==(const SpectralField&) const = default;

 private:
  ModeSet modes_;
  std::vector<Complex> coeff_;
};

/// Largest |f^(-k) - conj(f^(k))| over the mode set.
double hermitian_defect(const SpectralField& f);

/// Largest coefficient modulus difference; fields must share a mode set.
double max_abs_diff(const SpectralField& a, const SpectralField& b);

/// Wiener (semi)norm sum_k |k|^s |f^(k)| with 0^0 = 1.
double wiener_norm(const SpectralField& f, double s);

struct NormVector {
  double a0 = 0.0;
  double a2 = 0.0;
  double a4 = 0.0;
  double a6 = 0.0;
};

NormVector norms(const SpectralField& f);

/// Galerkin truncation: zeroes every mode with max(|k1|,|k2|) > n, keeping the
/// mode set of f.
SpectralField project(const SpectralField& f, int n);

/// Same coefficients on a different mode set (truncating or zero-padding).
SpectralField with_cutoff(const SpectralField& f, int n);

/// Per-mode multiplier symbol(k1, k2).
using Symbol = std::function<Complex(int, int)>;

/// f^(k) -> symbol(k) f^(k). The symbol must satisfy symbol(-k) = conj(symbol(k))
/// (std::invalid_argument otherwise) and be finite (NumericalError otherwise).
SpectralField mode_multiplier(const SpectralField& f, const Symbol& symbol);

namespace symbols {
Symbol identity();
/// d/dx_j, j in {0, 1}: i k_j.
Symbol partial(int j);
/// d^2/dx_i dx_j: -k_i k_j.
Symbol second_partial(int i, int j);
/// -|k|^2.
Symbol laplacian();
/// |k|^4.
Symbol biharmonic();
/// d/dx_j of the Laplacian: -i k_j |k|^2.
Symbol grad_laplacian(int j);
}  // namespace symbols

/// Spectral image of x -> f(lambda x): g^(lambda k) = f^(k). The output lives on
/// cutoff `out_cutoff` (default lambda * n); std::out_of_range if it cannot hold
/// lambda * n.
SpectralField scale_modes(const SpectralField& f, int lambda, int out_cutoff = -1);

}  // namespace torusflow

#endif  // TORUSFLOW_SPECTRAL_FIELD_HPP
