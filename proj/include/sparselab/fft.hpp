// Thin real-to-complex FFT layer over FFTW3. Plans are cached per size and
// created under a lock (FFTW planning is not thread-safe); execution uses the
// new-array interface so concurrent transforms on distinct buffers are safe.
#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <vector>

#include "sparselab/exponents.hpp"
#include "sparselab/lattice.hpp"

namespace sparselab::fft {

namespace detail {

struct Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

inline const Plans& plans_for(int n) {
  static std::mutex mu;
  static std::map<int, Plans> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<double> re(static_cast<std::size_t>(n));
  std::vector<std::complex<double>> cx(static_cast<std::size_t>(n) / 2 + 1);
  Plans p;
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  p.r2c = fftw_plan_dft_r2c_1d(n, re.data(), reinterpret_cast<fftw_complex*>(cx.data()), flags);
  p.c2r = fftw_plan_dft_c2r_1d(n, reinterpret_cast<fftw_complex*>(cx.data()), re.data(), flags);
  return cache.emplace(n, p).first->second;
}

}  // namespace detail

// Forward transform: out_k = sum_j f_j e^{-2 pi i jk/N}, k = 0..N/2.
inline std::vector<std::complex<double>> forward(const SampledFunction& f) {
  const int n = f.size();
  if (!is_power_of_two(n)) throw precondition_error("fft: grid size must be a power of two");
  std::vector<std::complex<double>> out(static_cast<std::size_t>(n) / 2 + 1);
  std::vector<double> in(f.samples);
  fftw_execute_dft_r2c(detail::plans_for(n).r2c, in.data(),
                       reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

// Inverse of forward() (1/N normalization). Clobbers spec.
inline SampledFunction inverse(std::vector<std::complex<double>>& spec, int n) {
  if (static_cast<int>(spec.size()) != n / 2 + 1)
    throw precondition_error("fft: spectrum size mismatch");
  SampledFunction f{std::vector<double>(static_cast<std::size_t>(n))};
  fftw_execute_dft_c2r(detail::plans_for(n).c2r, reinterpret_cast<fftw_complex*>(spec.data()),
                       f.samples.data());
  for (auto& v : f.samples) v /= n;
  return f;
}

}  // namespace sparselab::fft
