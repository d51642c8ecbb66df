#include "mcmd/dsp.hpp"

#include <cmath>
#include <sstream>

#include "mcmd/kernels.hpp"

namespace mcmd {

namespace {
constexpr double kPi = 3.14159265358979323846;

double sinc(double u) {
  if (u == 0.0) return 1.0;
  const double pu = kPi * u;
  return std::sin(pu) / pu;
}
}  // namespace

std::uint64_t StftConfig::hash() const {
  std::ostringstream os;
  os.precision(17);
  os << "stft:" << rate << ':' << win_s << ':' << hop_s << ':' << nfft << ':'
     << log_eps;
  return fnv1a_str(os.str());
}

void fft_radix2(std::vector<double>& re, std::vector<double>& im) {
  const std::size_t n = re.size();
  if (n == 0 || (n & (n - 1)) != 0 || im.size() != n)
    throw Error("fft: size must be a power of two");
  // bit-reversal permutation
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) {
      std::swap(re[i], re[j]);
      std::swap(im[i], im[j]);
    }
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * kPi / static_cast<double>(len);
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const double wr = std::cos(ang * static_cast<double>(k));
        const double wi = std::sin(ang * static_cast<double>(k));
        const std::size_t a = i + k, b = i + k + len / 2;
        const double tr = re[b] * wr - im[b] * wi;
        const double ti = re[b] * wi + im[b] * wr;
        re[b] = re[a] - tr;
        im[b] = im[a] - ti;
        re[a] += tr;
        im[a] += ti;
      }
    }
  }
}

Vec resample(const Vec& x, double from_rate, double to_rate) {
  if (!(from_rate > 0.0) || !(to_rate > 0.0))
    throw Error("resample: rates must be positive");
  if (from_rate == to_rate) return x;
  if (x.empty()) return {};

  const auto n = static_cast<long long>(x.size());
  const auto out_n = static_cast<long long>(
      std::llround(static_cast<double>(n) * to_rate / from_rate));
  const double step = from_rate / to_rate;  // input samples per output sample

  // cutoff in cycles per input sample; 0.95 rolloff keeps the transition band
  // inside Nyquist of the slower rate
  const double fc = 0.475 * std::min(1.0, to_rate / from_rate);
  const int lobes = 16;
  const double half_width = lobes / (2.0 * fc);
  const int hw = static_cast<int>(std::ceil(half_width));

  Vec y(static_cast<std::size_t>(out_n), 0.0);
  kernels::parallel_for(static_cast<int>(out_n), [&](int j) {
    const double t = j * step;
    const auto lo = static_cast<long long>(std::ceil(t - hw));
    const auto hi = static_cast<long long>(std::floor(t + hw));
    double acc = 0.0, ksum = 0.0;
    for (long long i = std::max(0LL, lo); i <= std::min(n - 1, hi); ++i) {
      const double s = static_cast<double>(i) - t;
      const double r = s / half_width;
      if (r <= -1.0 || r >= 1.0) continue;
      const double w = 0.5 * (1.0 + std::cos(kPi * r));  // Hann taper
      const double k = 2.0 * fc * sinc(2.0 * fc * s) * w;
      acc += x[static_cast<std::size_t>(i)] * k;
      ksum += k;
    }
    y[static_cast<std::size_t>(j)] = ksum != 0.0 ? acc / ksum : 0.0;
  });
  return y;
}

Mat stft_logpower(const Vec& x, const StftConfig& cfg) {
  const int win = cfg.window_samples();
  const int hop = cfg.hop_samples();
  if (win <= 0 || hop <= 0) throw Error("stft: window/hop must be positive");
  if (cfg.nfft < win) throw Error("stft: nfft smaller than window");
  if (static_cast<int>(x.size()) < win) {
    std::ostringstream os;
    os << "stft: signal shorter than one window (" << x.size() << " < " << win
       << " samples)";
    throw Error(os.str());
  }
  const int frames = cfg.frames_for(static_cast<int>(x.size()));
  const int bins = cfg.bins();

  std::vector<double> window(win);
  for (int i = 0; i < win; ++i)
    window[i] = 0.54 - 0.46 * std::cos(2.0 * kPi * i / (win - 1));

  Mat out(bins, frames);
  std::vector<double> re(cfg.nfft), im(cfg.nfft);
  for (int t = 0; t < frames; ++t) {
    std::fill(re.begin(), re.end(), 0.0);
    std::fill(im.begin(), im.end(), 0.0);
    const int off = t * hop;
    for (int i = 0; i < win; ++i) re[i] = x[off + i] * window[i];
    fft_radix2(re, im);
    for (int f = 0; f < bins; ++f)
      out.at(f, t) = std::log(re[f] * re[f] + im[f] * im[f] + cfg.log_eps);
  }
  return out;
}

}  // namespace mcmd
