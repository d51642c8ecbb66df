// Signal processing: radix-2 FFT, windowed-sinc resampling, STFT log-power.
#pragma once

#include <cstdint>

#include "mcmd/tensor.hpp"

namespace mcmd {

struct StftConfig {
  double rate = 100.0;   // expected signal rate, Hz
  double win_s = 2.0;    // Hamming window length, seconds
  double hop_s = 1.0;    // hop, seconds
  int nfft = 256;        // zero-padded FFT size (power of two)
  double log_eps = 1e-12;

  int window_samples() const { return static_cast<int>(win_s * rate + 0.5); }
  int hop_samples() const { return static_cast<int>(hop_s * rate + 0.5); }
  int bins() const { return nfft / 2 + 1; }
  int frames_for(int n_samples) const {
    const int w = window_samples(), h = hop_samples();
    return n_samples < w ? 0 : 1 + (n_samples - w) / h;
  }
  std::uint64_t hash() const;
};

// In-place complex FFT; size must be a power of two.
void fft_radix2(std::vector<double>& re, std::vector<double>& im);

// Windowed-sinc resampler with anti-aliasing lowpass when downsampling.
// Output length = round(input length × to_rate / from_rate). Kernel sums are
// normalized per output sample, so constants are preserved.
Vec resample(const Vec& x, double from_rate, double to_rate);

// Log power spectrogram, bins × frames. All cells finite (log floor log_eps).
Mat stft_logpower(const Vec& x, const StftConfig& cfg);

}  // namespace mcmd
