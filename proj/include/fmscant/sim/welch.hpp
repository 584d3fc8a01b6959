#pragma once

// Welch power spectral density (Hann window, overlapped segments, averaged
// periodograms) on top of FFTW.

#include <fftw3.h>

#include <cmath>
#include <cstddef>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "fmscant/core.hpp"

namespace fmscant::sim {

struct Psd {
  std::vector<double> frequency_Hz;
  std::vector<double> density;  // one-sided, units^2 / Hz
  std::size_t segments = 0;

  double bin_width() const { return frequency_Hz.size() > 1 ? frequency_Hz[1] - frequency_Hz[0] : 0.0; }
};

namespace detail {
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}
struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};
struct PlanDestroy {
  void operator()(fftw_plan p) const {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(p);
  }
};
}  // namespace detail

// Each segment is demeaned before windowing. Normalised so that
// sum(density) * bin_width equals the (segment-averaged) variance.
inline Psd welch_psd(std::span<const double> series, double dt, std::size_t segment_length, double overlap = 0.5) {
  if (!(dt > 0.0)) throw domain_error("welch_psd: dt must be > 0");
  if (segment_length < 2 || segment_length > series.size()) {
    throw domain_error("welch_psd: segment length must lie in [2, series length]");
  }
  if (!(overlap >= 0.0 && overlap < 1.0)) throw domain_error("welch_psd: overlap must lie in [0, 1)");

  const std::size_t N = segment_length;
  const std::size_t nfreq = N / 2 + 1;
  const auto overlap_n = static_cast<std::size_t>(std::floor(static_cast<double>(N) * overlap));
  const std::size_t hop = std::max<std::size_t>(1, N - overlap_n);

  std::vector<double> window(N);
  double U = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    window[i] = 0.5 - 0.5 * std::cos(kTwoPi * static_cast<double>(i) / static_cast<double>(N));
    U += window[i] * window[i];
  }

  std::unique_ptr<double, detail::FftwFree> in(static_cast<double*>(fftw_malloc(sizeof(double) * N)));
  std::unique_ptr<fftw_complex, detail::FftwFree> out(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * nfreq)));
  std::unique_ptr<std::remove_pointer_t<fftw_plan>, detail::PlanDestroy> plan;
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    plan.reset(fftw_plan_dft_r2c_1d(static_cast<int>(N), in.get(), out.get(), FFTW_ESTIMATE));
  }
  if (!plan) throw numeric_error("welch_psd: FFTW plan creation failed");

  Psd psd;
  psd.density.assign(nfreq, 0.0);
  psd.frequency_Hz.resize(nfreq);
  for (std::size_t k = 0; k < nfreq; ++k) psd.frequency_Hz[k] = static_cast<double>(k) / (static_cast<double>(N) * dt);

  const double scale = dt / U;  // 1 / (fs * U)
  for (std::size_t start = 0; start + N <= series.size(); start += hop) {
    double mean = 0.0;
    for (std::size_t i = 0; i < N; ++i) mean += series[start + i];
    mean /= static_cast<double>(N);
    for (std::size_t i = 0; i < N; ++i) in.get()[i] = (series[start + i] - mean) * window[i];
    fftw_execute(plan.get());
    for (std::size_t k = 0; k < nfreq; ++k) {
      const double re = out.get()[k][0];
      const double im = out.get()[k][1];
      double p = (re * re + im * im) * scale;
      if (k != 0 && !(N % 2 == 0 && k == N / 2)) p *= 2.0;
      psd.density[k] += p;
    }
    ++psd.segments;
  }
  for (auto& d : psd.density) d /= static_cast<double>(psd.segments);
  return psd;
}

}  // namespace fmscant::sim
