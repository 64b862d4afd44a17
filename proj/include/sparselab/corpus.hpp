#pragma once

// Deterministic test-function corpus. Every generator consumes an explicit
// mt19937_64 so that a fixed seed reproduces the same samples bit for bit
// across runs and platforms (we avoid std::uniform_real_distribution, whose
// output is implementation-defined).

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "sparselab/lattice.hpp"

namespace sparselab {

inline double uniform01(std::mt19937_64& rng) {
  // 53 random bits -> [0,1) with fixed semantics.
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

// Real band-limited function with modes k in [k_min, k_max], zero mean.
// Amplitudes ~ 1/k keep the square-function energy spread across scales.
inline SampledFunction random_band_limited(std::mt19937_64& rng, std::size_t n,
                                           int k_min = 1, int k_max = 32) {
  if (k_min < 1) throw precondition_error("random_band_limited: k_min must be >= 1");
  if (k_max > static_cast<int>(n) / 2)
    throw precondition_error("random_band_limited: k_max exceeds Nyquist");
  std::vector<double> amp, phase;
  for (int k = k_min; k <= k_max; ++k) {
    amp.push_back((0.5 + uniform01(rng)) / static_cast<double>(k));
    phase.push_back(uniform(rng, 0.0, 2.0 * M_PI));
  }
  SampledFunction f;
  f.samples.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double x = f.x(j);
    double v = 0.0;
    for (int k = k_min; k <= k_max; ++k) {
      std::size_t i = static_cast<std::size_t>(k - k_min);
      v += amp[i] * std::cos(2.0 * M_PI * k * x + phase[i]);
    }
    f.samples[j] = v;
  }
  return f;
}

// Smooth compactly supported bump centered at c with half-width h.
inline SampledFunction smooth_bump(std::size_t n, double c = 0.5, double h = 0.1) {
  if (h <= 0.0) throw precondition_error("smooth_bump: width must be positive");
  SampledFunction f;
  f.samples.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double u = f.x(j) - c;
    u -= std::round(u);  // periodic distance
    double s = u / h;
    if (std::abs(s) < 1.0) f.samples[j] = std::exp(-1.0 / (1.0 - s * s)) * std::exp(1.0);
  }
  return f;
}

// Tall thin indicator spike: height 1/width on an interval of the given width.
inline SampledFunction spike(std::size_t n, double center = 0.5, double width = 1.0 / 64.0) {
  if (width <= 0.0 || width > 1.0) throw precondition_error("spike: width must lie in (0,1]");
  SampledFunction f;
  f.samples.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double u = f.x(j) - center;
    u -= std::round(u);
    if (std::abs(u) <= width / 2.0) f.samples[j] = 1.0 / width;
  }
  return f;
}

// The 20-function mix used by the stress harness: random band-limited fields
// at several bandwidths, bumps at several widths, and spikes.
inline std::vector<SampledFunction> stress_corpus(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  std::vector<SampledFunction> out;
  for (int i = 0; i < 8; ++i) out.push_back(random_band_limited(rng, n, 1, 16 + 8 * (i % 4)));
  for (int i = 0; i < 4; ++i)
    out.push_back(smooth_bump(n, uniform(rng, 0.2, 0.8), 0.02 + 0.04 * i));
  for (int i = 0; i < 4; ++i)
    out.push_back(spike(n, uniform(rng, 0.1, 0.9), 1.0 / static_cast<double>(32 << i)));
  for (int i = 0; i < 4; ++i) {
    auto f = random_band_limited(rng, n, 1, 8);
    auto b = smooth_bump(n, uniform(rng, 0.3, 0.7), 0.05);
    for (std::size_t j = 0; j < n; ++j) f.samples[j] = f.samples[j] + 3.0 * b.samples[j];
    out.push_back(f);
  }
  return out;
}

}  // namespace sparselab
