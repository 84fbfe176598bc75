#ifndef TORUSFLOW_TRANSFORM_HPP
#define TORUSFLOW_TRANSFORM_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "torusflow/spectral_field.hpp"

namespace torusflow {

/// Real samples on the uniform N x N grid x_j = 2 pi (j1, j2) / N, row-major in j1.
class RealGrid {
 public:
  explicit RealGrid(int size) : size_(size), values_(static_cast<std::size_t>(size) * size) {}

  int size() const { return size_; }
  double& operator()(int j1, int j2) { return values_[static_cast<std::size_t>(j1) * size_ + j2]; }
  double operator()(int j1, int j2) const { return values_[static_cast<std::size_t>(j1) * size_ + j2]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

 private:
  int size_;
  std::vector<double> values_;
};

/// Smallest even 2,3,5-smooth grid size N >= (degree + 1) * cutoff + 1. Products of
/// `degree` fields with that cutoff are then alias-free on the retained modes.
int alias_free_grid_size(int cutoff, int degree);

/// u(x_j) = sum_k u^(k) exp(i k.x_j). Requires N >= 2n + 2; std::invalid_argument otherwise.
RealGrid to_real_samples(const SpectralField& f, int grid_size);

/// Discrete Fourier coefficients (1/N^2) sum_j u(x_j) exp(-i k.x_j) for |k|_inf <= cutoff.
/// Requires N >= 2 * cutoff + 2.
SpectralField from_real_samples(const RealGrid& samples, int cutoff);

/// Galerkin product: (f g)^(k) = sum_m f^(m) g^(k-m) over m, k-m in the mode set,
/// for k in the mode set. Evaluated on a zero-padded alias-free grid.
SpectralField convolve(const SpectralField& f, const SpectralField& g);

}  // namespace torusflow

#endif  // TORUSFLOW_TRANSFORM_HPP
