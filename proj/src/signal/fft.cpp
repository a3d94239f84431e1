#include "vqeq/signal/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <string>
#include <tuple>

namespace vqeq::signal {
namespace {

// fftw_execute_dft is thread-safe; planning is not, so plans are created under a lock
// and cached for the life of the process.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t n, int sign, bool in_place) {
    std::lock_guard lock(mu_);
    const auto key = std::make_tuple(n, sign, in_place);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    auto* in = fftw_alloc_complex(n);
    auto* out = fftw_alloc_complex(n);
    fftw_plan p =
        fftw_plan_dft_1d(static_cast<int>(n), in, in_place ? in : out, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(in);
    fftw_free(out);
    plans_.emplace(key, p);
    return p;
  }

 private:
  std::mutex mu_;
  std::map<std::tuple<std::size_t, int, bool>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

void check_size(std::size_t n) {
  if (!is_power_of_two(n)) throw ConfigError("fft: size " + std::to_string(n) + " is not a power of two");
}

void run(std::span<const cplx> in, std::span<cplx> out, int sign) {
  require_same_size(in.size(), out.size(), "fft");
  check_size(in.size());
  const bool in_place = in.data() == out.data();
  fftw_plan p = cache().get(in.size(), sign, in_place);
  // Out-of-place complex plans preserve their input by default.
  auto* src = reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data()));
  auto* dst = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(p, src, dst);
}

}  // namespace

void fft_into(std::span<const cplx> in, std::span<cplx> out) { run(in, out, FFTW_FORWARD); }

void ifft_into(std::span<const cplx> in, std::span<cplx> out) {
  run(in, out, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(out.size());
  for (auto& z : out) z *= scale;
}

CVec fft(std::span<const cplx> x, std::size_t size) {
  check_size(size);
  require_same_size(x.size(), size, "fft");
  CVec out(size);
  fft_into(x, out);
  return out;
}

CVec ifft(std::span<const cplx> x, std::size_t size) {
  check_size(size);
  require_same_size(x.size(), size, "ifft");
  CVec out(size);
  ifft_into(x, out);
  return out;
}

CVec fft_zero_padded(std::span<const cplx> taps, std::size_t size) {
  check_size(size);
  if (taps.size() > size) throw ShapeError("fft_zero_padded: more taps than FFT size");
  CVec padded(size);
  std::copy(taps.begin(), taps.end(), padded.begin());
  fft_into(padded, padded);
  return padded;
}

}  // namespace vqeq::signal
