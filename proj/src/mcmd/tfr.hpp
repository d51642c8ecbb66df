// Time-frequency tensors (F×T×C log power), normalization, sequence windows,
// and the on-disk per-subject cache.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mcmd/dsp.hpp"
#include "mcmd/epochs.hpp"

namespace mcmd {

struct SubjectTFR {
  std::string subject_id;
  int n_epochs = 0, F = 0, T = 0, C = 0;
  std::vector<double> x;  // [epoch][F][T][C], log power
  std::vector<int> labels;
  std::vector<int> epoch_index;  // original epoch positions (gaps allowed)

  std::size_t epoch_stride() const {
    return static_cast<std::size_t>(F) * T * C;
  }
  double* epoch_data(int e) { return x.data() + epoch_stride() * static_cast<std::size_t>(e); }
  const double* epoch_data(int e) const {
    return x.data() + epoch_stride() * static_cast<std::size_t>(e);
  }
  std::size_t idx(int e, int f, int t, int c) const {
    return ((static_cast<std::size_t>(e) * F + f) * T + t) * C + c;
  }
};

struct TFRDataset {
  std::string domain;
  std::string layout;
  int F = 0, T = 0, C = 0;
  std::uint64_t config_hash = 0;
  std::vector<SubjectTFR> subjects;

  std::vector<std::string> subject_ids() const;
  const SubjectTFR& subject(const std::string& id) const;
};

struct PrepareConfig {
  StftConfig stft;
  double common_rate = 100.0;
  double wake_trim_minutes = 30.0;  // negative disables wake trimming
  std::uint64_t hash(const ChannelLayout& layout) const;
};

// One subject's epochs -> log-power tensors (parallel over epochs).
SubjectTFR tfr_from_epochs(const std::vector<LabeledEpoch>& epochs,
                           const StftConfig& cfg);

// Full ingest: dataset.json directory -> recordings -> epochs -> tensors.
TFRDataset build_dataset(const std::string& dataset_dir, const ChannelLayout& layout,
                         const PrepareConfig& cfg);

// Cache wrapper: loads from cache_dir when the manifest's config hash matches,
// otherwise rebuilds and rewrites the cache.
TFRDataset ensure_cache(const std::string& dataset_dir, const std::string& cache_dir,
                        const ChannelLayout& layout, const PrepareConfig& cfg);

void save_subject_tfr(const SubjectTFR& s, const std::string& path);
SubjectTFR load_subject_tfr(const std::string& path);

// Student view: slot 0 copied into all four slots.
SubjectTFR duplicate_slot0(const SubjectTFR& s);

// ---------------------------------------------------------------------------
// Normalization (training-fold statistics only)
// ---------------------------------------------------------------------------

struct NormStats {
  int C = 0, F = 0;
  std::vector<double> mean;  // [C][F]
  std::vector<double> stdev; // [C][F], floored at 1e-8
};

NormStats compute_norm_stats(const std::vector<const SubjectTFR*>& subjects);
void normalize(SubjectTFR& s, const NormStats& stats);

void save_norm_stats(const NormStats& s, const std::string& path);
NormStats load_norm_stats(const std::string& path);

// ---------------------------------------------------------------------------
// Sequence windows
// ---------------------------------------------------------------------------

struct SeqRef {
  int subject = 0;  // index into a dataset's subject list
  int start = 0;    // first epoch (array position within the subject)
  int len = 0;
};

// Windows of length L at the given stride over runs of consecutive epochs.
// Training mode drops remainders shorter than L. Evaluation mode adds a
// right-aligned final window per run and emits short runs whole, so every
// epoch is covered at least once.
std::vector<SeqRef> assemble_sequences(const SubjectTFR& s, int L, int stride,
                                       bool eval_mode);

}  // namespace mcmd
