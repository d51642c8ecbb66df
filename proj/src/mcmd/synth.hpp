// Synthetic two-domain PSG generator.
//
// Signals are AR(1) background noise plus class-conditional oscillatory
// bursts. The REM-analogue class shares its EEG signature with the
// N1-analogue, so it is separable only through the EMG/EOG channels; the two
// domains differ in carrier frequencies and noise color. Everything is
// deterministic given (config, seed).
#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "mcmd/edf.hpp"
#include "mcmd/hypnogram.hpp"

namespace mcmd {

struct SynthDomainConfig {
  int subjects = 4;
  int epochs_per_subject = 120;
  double sampling_rate = 100.0;  // Hz, whole number
  double freq_scale = 1.0;       // carrier frequency multiplier (domain shift)
  double noise_ar = 0.95;        // AR(1) coefficient of background noise
  double noise_amp = 10.0;       // stationary background sd, µV
  double burst_gain = 1.0;       // overall class-burst amplitude multiplier
};

struct SynthConfig {
  std::string name = "synth";
  SynthDomainConfig source{6, 120, 128.0, 1.3, 0.88, 11.0, 1.0};
  SynthDomainConfig target{4, 120, 100.0, 1.0, 0.95, 10.0, 1.0};
  std::array<double, kNumStages> class_priors{0.20, 0.25, 0.20, 0.20, 0.15};
  double stay_prob = 0.6;  // hypnogram persistence; marginals stay = priors
  // channel-information matrix: burst amplitude multiplier per
  // (class, analogue channel {EEG-a, EEG-b, EMG, EOG})
  std::array<std::array<double, 4>, kNumStages> info{{
      {1.0, 1.0, 1.0, 1.0},
      {1.0, 1.0, 1.0, 1.0},
      {1.0, 1.0, 1.0, 1.0},
      {1.0, 1.0, 1.0, 1.0},
      {1.0, 1.0, 1.0, 1.0},
  }};
  // EEG burst signature per class; REM (4) reuses the N1 (1) signature so the
  // EEG channels alone cannot separate them
  std::array<int, kNumStages> eeg_signature{0, 1, 2, 3, 1};

  void validate() const;
  static SynthConfig from_json_file(const std::string& path);
  void to_json_file(const std::string& path) const;
  std::uint64_t hash() const;
};

struct SynthSubject {
  RawRecording rec;
  std::vector<StageInterval> hypnogram;
};

struct SynthDataset {
  std::string domain;  // "source" | "target"
  std::vector<SynthSubject> subjects;
};

std::pair<SynthDataset, SynthDataset> synth_generate(const SynthConfig& cfg,
                                                     std::uint64_t seed);

// Writes EDFs + CSV hypnograms + dataset.json into dir.
void write_synth_dataset(const SynthDataset& ds, const std::string& dir);

}  // namespace mcmd
