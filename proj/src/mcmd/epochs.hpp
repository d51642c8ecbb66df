// 30-second labeled epochs, channel layouts with duplication, CV folds.
#pragma once

#include <array>
#include <string>
#include <vector>

#include "mcmd/edf.hpp"
#include "mcmd/hypnogram.hpp"

namespace mcmd {

constexpr int kSlots = 4;  // every model input has exactly 4 channel slots

struct LabeledEpoch {
  std::array<Vec, kSlots> signals;  // equal lengths, 30 s at a common rate
  Stage label = Stage::Wake;
  std::string subject_id;
  int epoch_index = 0;
};

// Maps recording channels onto the 4 model slots. A role may fill several
// slots (duplication). Roles resolve to channel labels by case-insensitive
// substring patterns, e.g. "C4-A1" matches "EEG C4-A1".
struct ChannelLayout {
  enum class Domain { Source, Target };
  Domain domain = Domain::Source;
  std::string name;
  std::array<std::string, kSlots> slot_roles;

  static ChannelLayout source();          // C4-A1, C4-A1, EMG, EOG
  static ChannelLayout source_single();   // C4-A1 ×4
  static ChannelLayout target_teacher();  // Fpz-Cz, Pz-Oz, EMG, EOG
  static ChannelLayout target_student();  // Fpz-Cz ×4
  static ChannelLayout by_name(const std::string& name);
};

// Index of the channel matching a role, or an error naming the role.
int find_channel(const RawRecording& rec, const std::string& role);

// Cuts the recording into 30 s epochs with the layout's slot assignment.
// Epochs whose span is not fully inside a single stage interval are dropped.
// All required channels must share one sampling rate.
std::vector<LabeledEpoch> make_epochs(const RawRecording& rec,
                                      const std::vector<StageInterval>& labels,
                                      const ChannelLayout& layout,
                                      double epoch_s = 30.0);

// ---------------------------------------------------------------------------
// Cross-validation folds
// ---------------------------------------------------------------------------

struct FoldSplit {
  int fold_index = 0;
  std::vector<std::string> train_subjects;
  std::vector<std::string> valid_subjects;
  std::vector<std::string> test_subjects;
};

enum class FoldScheme { LeaveOneSubjectOut, Grouped };

// Deterministic given the seed. Validation subjects are a fraction of the
// training subjects (at least one when there are two or more to spare).
// The single-subject degenerate case yields one fold with the subject in
// train; epoch-level tail splits happen downstream.
std::vector<FoldSplit> make_folds(std::vector<std::string> subjects, int k,
                                  FoldScheme scheme, std::uint64_t seed,
                                  double valid_fraction = 0.1);

}  // namespace mcmd
