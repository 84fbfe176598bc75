#include "torusflow/transform.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

namespace torusflow {

namespace {

template <typename T>
struct FftwDeleter {
  void operator()(T* p) const { fftw_free(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwDeleter<T>>;

template <typename T>
FftwBuffer<T> fftw_buffer(std::size_t count) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * count));
  if (p == nullptr) throw std::bad_alloc();
  return FftwBuffer<T>(p);
}

// 2D real<->half-complex plans for one grid size. Planning is not thread-safe in
// FFTW, so plans are created once under a lock and executed through the
// new-array interface on fftw_malloc'd (identically aligned) buffers.
class PlanPair {
 public:
  explicit PlanPair(int n) {
    const std::size_t half = static_cast<std::size_t>(n) * (n / 2 + 1);
    auto real = fftw_buffer<double>(static_cast<std::size_t>(n) * n);
    auto spec = fftw_buffer<fftw_complex>(half);
    forward_ = fftw_plan_dft_r2c_2d(n, n, real.get(), spec.get(), FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_c2r_2d(n, n, spec.get(), real.get(), FFTW_ESTIMATE);
    if (forward_ == nullptr || backward_ == nullptr) throw std::runtime_error("FFTW planning failed");
  }
  ~PlanPair() {
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }
  PlanPair(const PlanPair&) = delete;
  PlanPair& operator=(const PlanPair&) = delete;

  fftw_plan forward() const { return forward_; }
  fftw_plan backward() const { return backward_; }

 private:
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

const PlanPair& plans_for(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<PlanPair>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<PlanPair>(n);
  return *slot;
}

int wrap(int k, int n) { return k >= 0 ? k : k + n; }

bool smooth235(int v) {
  for (int p : {2, 3, 5})
    while (v % p == 0) v /= p;
  return v == 1;
}

}  // namespace

int alias_free_grid_size(int cutoff, int degree) {
  if (cutoff < 1 || degree < 1) throw std::invalid_argument("cutoff and degree must be >= 1");
  int n = (degree + 1) * cutoff + 1;
  while (n % 2 != 0 || !smooth235(n)) ++n;
  return n;
}

RealGrid to_real_samples(const SpectralField& f, int grid_size) {
  const int n = f.cutoff();
  if (grid_size < 2 * n + 2)
    throw std::invalid_argument("grid size " + std::to_string(grid_size) + " aliases cutoff " + std::to_string(n) +
                                "; need N >= " + std::to_string(2 * n + 2));
  const int N = grid_size;
  const int hw = N / 2 + 1;
  auto spec = fftw_buffer<fftw_complex>(static_cast<std::size_t>(N) * hw);
  auto real = fftw_buffer<double>(static_cast<std::size_t>(N) * N);
  for (std::size_t i = 0; i < static_cast<std::size_t>(N) * hw; ++i) spec[i][0] = spec[i][1] = 0.0;
  for (int k1 = -n; k1 <= n; ++k1)
    for (int k2 = 0; k2 <= n; ++k2) {
      const Complex c = f(k1, k2);
      auto& slot = spec[static_cast<std::size_t>(wrap(k1, N)) * hw + k2];
      slot[0] = c.real();
      slot[1] = c.imag();
    }
  fftw_execute_dft_c2r(plans_for(N).backward(), spec.get(), real.get());
  RealGrid out(N);
  auto values = out.values();
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = real[i];
  return out;
}

SpectralField from_real_samples(const RealGrid& samples, int cutoff) {
  const int N = samples.size();
  if (N < 2 * cutoff + 2)
    throw std::invalid_argument("grid size " + std::to_string(N) + " aliases cutoff " + std::to_string(cutoff) +
                                "; need N >= " + std::to_string(2 * cutoff + 2));
  const int hw = N / 2 + 1;
  auto real = fftw_buffer<double>(static_cast<std::size_t>(N) * N);
  auto spec = fftw_buffer<fftw_complex>(static_cast<std::size_t>(N) * hw);
  const auto values = samples.values();
  for (std::size_t i = 0; i < values.size(); ++i) real[i] = values[i];
  fftw_execute_dft_r2c(plans_for(N).forward(), real.get(), spec.get());

  const ModeSet modes(cutoff);
  const double norm = 1.0 / (static_cast<double>(N) * N);
  std::vector<Complex> c(modes.size());
  for (int k1 = -cutoff; k1 <= cutoff; ++k1)
    for (int k2 = -cutoff; k2 <= cutoff; ++k2) {
      Complex v;
      if (k2 >= 0) {
        const auto& s = spec[static_cast<std::size_t>(wrap(k1, N)) * hw + k2];
        v = Complex{s[0], s[1]};
      } else {
        const auto& s = spec[static_cast<std::size_t>(wrap(-k1, N)) * hw + (-k2)];
        v = Complex{s[0], -s[1]};
      }
      c[modes.index(k1, k2)] = v * norm;
    }
  return SpectralField::hermitian_part(modes, std::move(c));
}

SpectralField convolve(const SpectralField& f, const SpectralField& g) {
  if (!(f.modes() == g.modes())) throw std::invalid_argument("convolve: mode set mismatch");
  const int n = f.cutoff();
  const int N = alias_free_grid_size(n, 2);
  RealGrid a = to_real_samples(f, N);
  const RealGrid b = to_real_samples(g, N);
  auto av = a.values();
  const auto bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) av[i] *= bv[i];
  return from_real_samples(a, n);
}

}  // namespace torusflow
