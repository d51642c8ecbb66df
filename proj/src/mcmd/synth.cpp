#include "mcmd/synth.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace mcmd {

namespace {

constexpr double kPi = 3.14159265358979323846;

// EEG burst carriers per signature: wake alpha, N1/REM theta, spindle, delta
constexpr double kEegFreq[4] = {10.0, 5.0, 13.0, 1.7};
constexpr double kEegAmp[4] = {14.0, 13.0, 16.0, 30.0};

// EMG tonus amplitude per class (wake high, REM atonia)
constexpr double kEmgLevel[kNumStages] = {1.0, 0.45, 0.30, 0.25, 0.06};
constexpr double kEmgBase = 22.0;

// EOG slow-wave bursts per class (REM: fast large saccades)
constexpr double kEogFreq[kNumStages] = {0.45, 0.30, 0.20, 0.15, 0.90};
constexpr double kEogAmp[kNumStages] = {22.0, 10.0, 5.0, 3.0, 34.0};

struct Burst {
  double start, dur, freq, phase, amp;
};

void add_burst(Vec& x, double rate, const Burst& b) {
  const auto i0 = static_cast<long>(std::llround(b.start * rate));
  const auto n = static_cast<long>(std::llround(b.dur * rate));
  for (long i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i0 + i);
    if (idx >= x.size()) break;
    const double t = static_cast<double>(i) / rate;
    const double env = 0.5 * (1.0 - std::cos(2.0 * kPi * i / std::max<long>(n - 1, 1)));
    x[idx] += b.amp * env * std::sin(2.0 * kPi * b.freq * t + b.phase);
  }
}

std::vector<Burst> draw_bursts(Rng& rng, int count_min, int count_span,
                               double epoch_s, double freq, double amp) {
  std::vector<Burst> out;
  const int n = count_min + rng.randint(count_span);
  for (int i = 0; i < n; ++i) {
    Burst b;
    b.dur = rng.uniform(1.0, 3.0);
    b.start = rng.uniform(0.0, epoch_s - b.dur);
    b.freq = freq;
    b.phase = rng.uniform(0.0, 2.0 * kPi);
    b.amp = amp;
    out.push_back(b);
  }
  return out;
}

void add_ar_noise(Vec& x, Rng& rng, double ar, double amp) {
  const double sigma = amp * std::sqrt(std::max(1e-12, 1.0 - ar * ar));
  double state = rng.gaussian() * amp;
  for (double& v : x) {
    state = ar * state + sigma * rng.gaussian();
    v += state;
  }
}

std::vector<Stage> draw_stages(Rng& rng, int n,
                               const std::array<double, kNumStages>& priors,
                               double stay_prob) {
  auto draw_prior = [&]() {
    const double u = rng.uniform();
    double acc = 0.0;
    for (int k = 0; k < kNumStages; ++k) {
      acc += priors[static_cast<std::size_t>(k)];
      if (u < acc) return static_cast<Stage>(k);
    }
    return static_cast<Stage>(kNumStages - 1);
  };
  std::vector<Stage> out;
  out.reserve(static_cast<std::size_t>(n));
  Stage cur = draw_prior();
  for (int e = 0; e < n; ++e) {
    if (e > 0) {
      if (rng.uniform() >= stay_prob) cur = draw_prior();
    }
    out.push_back(cur);
  }
  return out;
}

SynthSubject make_subject(const SynthConfig& cfg, const SynthDomainConfig& dom,
                          bool is_source, int subject_idx, std::uint64_t seed) {
  const double rate = dom.sampling_rate;
  const double epoch_s = 30.0;
  const int n_samples_epoch = static_cast<int>(std::llround(epoch_s * rate));
  const std::uint64_t dom_tag = is_source ? 0x73726300ull : 0x74677400ull;
  Rng rng(Rng::derive(seed, {dom_tag, static_cast<std::uint64_t>(subject_idx)}));

  const std::vector<Stage> stages =
      draw_stages(rng, dom.epochs_per_subject, cfg.class_priors, cfg.stay_prob);

  // source: C4-A1, EMG, EOG; target: Fpz-Cz, Pz-Oz, EMG, EOG
  std::vector<std::string> names =
      is_source ? std::vector<std::string>{"EEG C4-A1", "EMG chin", "EOG horizontal"}
                : std::vector<std::string>{"EEG Fpz-Cz", "EEG Pz-Oz", "EMG chin",
                                           "EOG horizontal"};
  const int n_eeg = is_source ? 1 : 2;
  const int n_ch = static_cast<int>(names.size());

  SynthSubject subj;
  char sid[32];
  std::snprintf(sid, sizeof(sid), "%s%02d", is_source ? "src" : "tgt", subject_idx);
  subj.rec.subject_id = sid;
  subj.rec.duration = dom.epochs_per_subject * epoch_s;
  for (int c = 0; c < n_ch; ++c) {
    EdfChannel ch;
    ch.label = names[static_cast<std::size_t>(c)];
    ch.sampling_rate = rate;
    ch.samples.assign(static_cast<std::size_t>(dom.epochs_per_subject) *
                          static_cast<std::size_t>(n_samples_epoch),
                      0.0);
    subj.rec.channels.push_back(std::move(ch));
  }

  for (int e = 0; e < dom.epochs_per_subject; ++e) {
    const int k = static_cast<int>(stages[static_cast<std::size_t>(e)]);
    const std::size_t off =
        static_cast<std::size_t>(e) * static_cast<std::size_t>(n_samples_epoch);
    std::vector<Vec> epoch(static_cast<std::size_t>(n_ch),
                           Vec(static_cast<std::size_t>(n_samples_epoch), 0.0));

    // EEG: one burst schedule shared by the EEG channels (they are views of
    // the same cortical activity), scaled per channel by the info matrix
    const int sig = cfg.eeg_signature[static_cast<std::size_t>(k)];
    const double g = dom.burst_gain;
    const auto eeg_bursts =
        draw_bursts(rng, 4, 4, epoch_s, kEegFreq[sig] * dom.freq_scale, kEegAmp[sig]);
    for (int c = 0; c < n_eeg; ++c) {
      const double a = cfg.info[static_cast<std::size_t>(k)][static_cast<std::size_t>(c)];
      for (Burst b : eeg_bursts) {
        b.amp *= a * g * (c == 1 ? 0.8 : 1.0);  // second derivation slightly weaker
        add_burst(epoch[static_cast<std::size_t>(c)], rate, b);
      }
    }

    // EMG: amplitude-coded tonus (flat-spectrum noise)
    {
      const double a = cfg.info[static_cast<std::size_t>(k)][2];
      const double amp = kEmgBase * kEmgLevel[k] * a * g;
      Vec& emg = epoch[static_cast<std::size_t>(n_eeg)];
      for (double& v : emg) v += amp * rng.gaussian();
    }

    // EOG: slow oscillation bursts
    {
      const double a = cfg.info[static_cast<std::size_t>(k)][3];
      const auto eog_bursts = draw_bursts(rng, 2, 3, epoch_s,
                                          kEogFreq[k] * dom.freq_scale,
                                          kEogAmp[k] * a * g);
      Vec& eog = epoch[static_cast<std::size_t>(n_eeg) + 1];
      for (const Burst& b : eog_bursts) add_burst(eog, rate, b);
    }

    // shared background per channel
    for (int c = 0; c < n_ch; ++c) {
      add_ar_noise(epoch[static_cast<std::size_t>(c)], rng, dom.noise_ar, dom.noise_amp);
      Vec& dst = subj.rec.channels[static_cast<std::size_t>(c)].samples;
      for (int i = 0; i < n_samples_epoch; ++i)
        dst[off + static_cast<std::size_t>(i)] = epoch[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)];
    }

    subj.hypnogram.push_back({e * epoch_s, epoch_s, stages[static_cast<std::size_t>(e)]});
  }
  return subj;
}

}  // namespace

void SynthConfig::validate() const {
  double sum = 0.0;
  for (double p : class_priors) {
    if (p < 0.0) throw Error("synth: class priors must be non-negative");
    sum += p;
  }
  if (std::fabs(sum - 1.0) > 1e-9)
    throw Error("synth: class priors must sum to 1 (got " + std::to_string(sum) + ")");
  for (int s : eeg_signature)
    if (s < 0 || s >= 4) throw Error("synth: eeg_signature entries must be in 0..3");
  if (source.subjects <= 0 || target.subjects <= 0)
    throw Error("synth: subject counts must be positive");
  if (source.epochs_per_subject <= 0 || target.epochs_per_subject <= 0)
    throw Error("synth: epochs_per_subject must be positive");
  for (const SynthDomainConfig* d : {&source, &target})
    if (!(d->sampling_rate > 0.0) ||
        d->sampling_rate != std::floor(d->sampling_rate))
      throw Error("synth: sampling_rate must be a positive whole number");
}

std::pair<SynthDataset, SynthDataset> synth_generate(const SynthConfig& cfg,
                                                     std::uint64_t seed) {
  cfg.validate();
  SynthDataset src, tgt;
  src.domain = "source";
  tgt.domain = "target";
  for (int s = 0; s < cfg.source.subjects; ++s)
    src.subjects.push_back(make_subject(cfg, cfg.source, true, s, seed));
  for (int s = 0; s < cfg.target.subjects; ++s)
    tgt.subjects.push_back(make_subject(cfg, cfg.target, false, s, seed));
  return {std::move(src), std::move(tgt)};
}

void write_synth_dataset(const SynthDataset& ds, const std::string& dir) {
  fs::create_directories(dir);
  json manifest;
  manifest["domain"] = ds.domain;
  manifest["subjects"] = json::array();
  for (const SynthSubject& s : ds.subjects) {
    const std::string edf_name = s.rec.subject_id + ".edf";
    const std::string hyp_name = s.rec.subject_id + "_hyp.csv";
    write_edf(s.rec, (fs::path(dir) / edf_name).string());
    write_hypnogram_csv(s.hypnogram, (fs::path(dir) / hyp_name).string());
    manifest["subjects"].push_back({{"id", s.rec.subject_id},
                                    {"edf", edf_name},
                                    {"hypnogram", hyp_name},
                                    {"hypnogram_format", "csv"}});
  }
  std::ofstream f(fs::path(dir) / "dataset.json", std::ios::trunc);
  if (!f) throw Error("synth: cannot write dataset manifest in " + dir);
  f << manifest.dump(2) << '\n';
}

// --------------------------------------------------------------------------
// config (de)serialization
// --------------------------------------------------------------------------

namespace {

void dom_from_json(const json& j, SynthDomainConfig& d) {
  d.subjects = j.value("subjects", d.subjects);
  d.epochs_per_subject = j.value("epochs_per_subject", d.epochs_per_subject);
  d.sampling_rate = j.value("sampling_rate", d.sampling_rate);
  d.freq_scale = j.value("freq_scale", d.freq_scale);
  d.noise_ar = j.value("noise_ar", d.noise_ar);
  d.noise_amp = j.value("noise_amp", d.noise_amp);
  d.burst_gain = j.value("burst_gain", d.burst_gain);
}

json dom_to_json(const SynthDomainConfig& d) {
  return {{"subjects", d.subjects},
          {"epochs_per_subject", d.epochs_per_subject},
          {"sampling_rate", d.sampling_rate},
          {"freq_scale", d.freq_scale},
          {"noise_ar", d.noise_ar},
          {"noise_amp", d.noise_amp},
          {"burst_gain", d.burst_gain}};
}

}  // namespace

SynthConfig SynthConfig::from_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("synth: cannot open config " + path);
  json j;
  try {
    f >> j;
  } catch (const std::exception& e) {
    throw Error("synth: malformed config " + path + ": " + e.what());
  }
  SynthConfig cfg;
  cfg.name = j.value("name", cfg.name);
  if (j.contains("source")) dom_from_json(j["source"], cfg.source);
  if (j.contains("target")) dom_from_json(j["target"], cfg.target);
  if (j.contains("class_priors")) {
    const auto& p = j["class_priors"];
    if (p.size() != kNumStages) throw Error("synth: class_priors needs 5 entries");
    for (int k = 0; k < kNumStages; ++k)
      cfg.class_priors[static_cast<std::size_t>(k)] = p[static_cast<std::size_t>(k)];
  }
  cfg.stay_prob = j.value("stay_prob", cfg.stay_prob);
  if (j.contains("info")) {
    const auto& m = j["info"];
    if (m.size() != kNumStages) throw Error("synth: info matrix needs 5 rows");
    for (int k = 0; k < kNumStages; ++k) {
      if (m[static_cast<std::size_t>(k)].size() != 4)
        throw Error("synth: info matrix rows need 4 entries");
      for (int c = 0; c < 4; ++c)
        cfg.info[static_cast<std::size_t>(k)][static_cast<std::size_t>(c)] =
            m[static_cast<std::size_t>(k)][static_cast<std::size_t>(c)];
    }
  }
  if (j.contains("eeg_signature")) {
    const auto& s = j["eeg_signature"];
    if (s.size() != kNumStages) throw Error("synth: eeg_signature needs 5 entries");
    for (int k = 0; k < kNumStages; ++k)
      cfg.eeg_signature[static_cast<std::size_t>(k)] = s[static_cast<std::size_t>(k)];
  }
  cfg.validate();
  return cfg;
}

void SynthConfig::to_json_file(const std::string& path) const {
  json j;
  j["name"] = name;
  j["source"] = dom_to_json(source);
  j["target"] = dom_to_json(target);
  j["class_priors"] = class_priors;
  j["stay_prob"] = stay_prob;
  j["info"] = info;
  j["eeg_signature"] = eeg_signature;
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw Error("synth: cannot write config " + path);
  f << j.dump(2) << '\n';
}

std::uint64_t SynthConfig::hash() const {
  json j;
  j["name"] = name;
  j["source"] = dom_to_json(source);
  j["target"] = dom_to_json(target);
  j["class_priors"] = class_priors;
  j["stay_prob"] = stay_prob;
  j["info"] = info;
  j["eeg_signature"] = eeg_signature;
  return fnv1a_str(j.dump());
}

}  // namespace mcmd
