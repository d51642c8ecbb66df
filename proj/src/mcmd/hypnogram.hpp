// Sleep stage labels and hypnogram ingestion (CSV or EDF+ annotations).
#pragma once

#include <map>
#include <string>
#include <vector>

namespace mcmd {

// AASM 5-stage scheme; serialized as integers 0..4 in this order.
enum class Stage : int { Wake = 0, N1 = 1, N2 = 2, N3 = 3, Rem = 4 };
constexpr int kNumStages = 5;

const char* stage_name(Stage s);
const char* stage_name(int s);

struct StageInterval {
  double onset = 0.0;     // seconds
  double duration = 0.0;  // seconds
  Stage stage = Stage::Wake;
};

// Maps annotation strings to stages. kDrop entries are silently discarded
// (movement/unscored epochs); strings absent from the table are errors.
struct StageMap {
  static constexpr int kDrop = -1;
  std::map<std::string, int> table;

  // R&K scorings fold S3/S4 into N3; "Movement time" is dropped.
  static StageMap defaults();
};

enum class HypnogramFormat { Csv, EdfAnnotations };

// CSV format: header "onset_s,duration_s,stage", one interval per row.
// Returned intervals are sorted by onset and non-overlapping.
std::vector<StageInterval> load_hypnogram(const std::string& path,
                                          HypnogramFormat format,
                                          const StageMap& map = StageMap::defaults());

void write_hypnogram_csv(const std::vector<StageInterval>& intervals,
                         const std::string& path);

// Clips wake intervals so that at most margin_s seconds of wake remain before
// the first and after the last non-wake interval. margin_s < 0 disables.
std::vector<StageInterval> trim_wake(std::vector<StageInterval> intervals,
                                     double margin_s);

}  // namespace mcmd
