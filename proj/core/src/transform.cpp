// FFTW-backed transforms with a process-wide plan cache.

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "pxflow/error.hpp"
#include "pxflow/spectral.hpp"

namespace pxflow {
namespace detail {

void* fft_alloc(std::size_t bytes) {
  void* p = fftw_malloc(bytes == 0 ? 1 : bytes);
  if (p == nullptr) throw std::bad_alloc();
  return p;
}

void fft_free(void* ptr) noexcept { fftw_free(ptr); }

namespace {

struct PlanKey {
  int dim;
  std::array<int, 3> nodes;
  int sign;
  auto operator<=>(const PlanKey&) const = default;
};

class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  // Planning is not thread-safe in FFTW; execution of an existing plan on new
  // arrays is.
  fftw_plan get(const Grid& grid, int sign) {
    const PlanKey key{grid.dim, grid.nodes, sign};
    std::lock_guard lock(mutex_);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;

    const std::size_t n = grid.size();
    auto* in = fftw_alloc_complex(n);
    auto* out = fftw_alloc_complex(n);
    int dims[3] = {grid.nodes[0], grid.nodes[1], grid.nodes[2]};
    // FFTW_ESTIMATE keeps plan selection, and therefore round-off, reproducible.
    fftw_plan plan = fftw_plan_dft(grid.dim, dims, in, out, sign, FFTW_ESTIMATE);
    fftw_free(in);
    fftw_free(out);
    if (plan == nullptr) throw Error("FFTW failed to create a plan");
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  std::mutex mutex_;
  std::map<PlanKey, fftw_plan> plans_;
};

void execute(const Grid& grid, int sign, Complex* in, Complex* out) {
  fftw_plan plan = PlanCache::instance().get(grid, sign);
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in), reinterpret_cast<fftw_complex*>(out));
}

}  // namespace
}  // namespace detail

void forward_transform(const Grid& grid, std::span<const double> in, std::span<Complex> out) {
  const std::size_t n = grid.size();
  if (in.size() != n || out.size() != n) throw GridMismatch("forward_transform: size mismatch");
  SpectralBuffer buf(n);
  for (std::size_t i = 0; i < n; ++i) buf[i] = Complex(in[i], 0.0);
  // out may not be FFTW-aligned, so transform into a scratch buffer.
  SpectralBuffer res(n);
  detail::execute(grid, FFTW_FORWARD, buf.data(), res.data());
  const double scale = std::sqrt(grid.volume()) / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = res[i] * scale;
}

void inverse_transform(const Grid& grid, std::span<const Complex> in, std::span<double> out) {
  const std::size_t n = grid.size();
  if (in.size() != n || out.size() != n) throw GridMismatch("inverse_transform: size mismatch");
  SpectralBuffer buf(in.begin(), in.end());
  SpectralBuffer res(n);
  detail::execute(grid, FFTW_BACKWARD, buf.data(), res.data());
  const double scale = 1.0 / std::sqrt(grid.volume());
  for (std::size_t i = 0; i < n; ++i) out[i] = res[i].real() * scale;
}

}  // namespace pxflow
