#include "mcmd/epochs.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

namespace mcmd {

ChannelLayout ChannelLayout::source() {
  return {Domain::Source, "source", {"C4-A1", "C4-A1", "EMG", "EOG"}};
}

ChannelLayout ChannelLayout::source_single() {
  return {Domain::Source, "source_single", {"C4-A1", "C4-A1", "C4-A1", "C4-A1"}};
}

ChannelLayout ChannelLayout::target_teacher() {
  return {Domain::Target, "target_teacher", {"Fpz-Cz", "Pz-Oz", "EMG", "EOG"}};
}

ChannelLayout ChannelLayout::target_student() {
  return {Domain::Target, "target_student", {"Fpz-Cz", "Fpz-Cz", "Fpz-Cz", "Fpz-Cz"}};
}

ChannelLayout ChannelLayout::by_name(const std::string& name) {
  if (name == "source") return source();
  if (name == "source_single") return source_single();
  if (name == "target_teacher") return target_teacher();
  if (name == "target_student") return target_student();
  throw Error("unknown channel layout \"" + name + "\"");
}

namespace {

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

const std::map<std::string, std::vector<std::string>>& role_patterns() {
  static const std::map<std::string, std::vector<std::string>> table = {
      {"C4-A1", {"c4-a1", "c4a1"}},
      {"Fpz-Cz", {"fpz-cz", "fpzcz"}},
      {"Pz-Oz", {"pz-oz", "pzoz"}},
      {"EMG", {"emg"}},
      {"EOG", {"eog"}},
  };
  return table;
}

}  // namespace

int find_channel(const RawRecording& rec, const std::string& role) {
  const auto it = role_patterns().find(role);
  if (it == role_patterns().end()) throw Error("unknown channel role \"" + role + "\"");
  for (std::size_t i = 0; i < rec.channels.size(); ++i) {
    const std::string label = lower(rec.channels[i].label);
    for (const std::string& pat : it->second)
      if (label.find(pat) != std::string::npos) return static_cast<int>(i);
  }
  throw Error("recording \"" + rec.subject_id + "\" is missing channel role \"" +
              role + "\"");
}

std::vector<LabeledEpoch> make_epochs(const RawRecording& rec,
                                      const std::vector<StageInterval>& labels,
                                      const ChannelLayout& layout,
                                      double epoch_s) {
  std::array<int, kSlots> slot_ch{};
  for (int s = 0; s < kSlots; ++s) slot_ch[s] = find_channel(rec, layout.slot_roles[s]);

  double rate = -1.0;
  for (int s = 0; s < kSlots; ++s) {
    const double r = rec.channels[static_cast<std::size_t>(slot_ch[s])].sampling_rate;
    if (rate < 0.0) rate = r;
    if (r != rate)
      throw Error("make_epochs: channel rates differ (" + std::to_string(r) +
                  " vs " + std::to_string(rate) + " Hz); resample first");
  }
  const auto epoch_len = static_cast<std::size_t>(std::llround(epoch_s * rate));
  if (epoch_len == 0) throw Error("make_epochs: epoch length is zero samples");

  std::size_t min_samples = rec.channels[static_cast<std::size_t>(slot_ch[0])].samples.size();
  for (int s = 1; s < kSlots; ++s)
    min_samples = std::min(
        min_samples, rec.channels[static_cast<std::size_t>(slot_ch[s])].samples.size());
  const int n_epochs = static_cast<int>(min_samples / epoch_len);

  std::vector<LabeledEpoch> out;
  for (int e = 0; e < n_epochs; ++e) {
    const double t0 = e * epoch_s;
    const double t1 = t0 + epoch_s;
    // the epoch must lie inside exactly one labeled interval
    const StageInterval* hit = nullptr;
    for (const StageInterval& iv : labels) {
      if (t0 >= iv.onset - 1e-9 && t1 <= iv.onset + iv.duration + 1e-9) {
        hit = &iv;
        break;
      }
    }
    if (hit == nullptr) continue;  // unlabeled span: dropped

    LabeledEpoch ep;
    ep.label = hit->stage;
    ep.subject_id = rec.subject_id;
    ep.epoch_index = e;
    const std::size_t off = static_cast<std::size_t>(e) * epoch_len;
    for (int s = 0; s < kSlots; ++s) {
      const Vec& src = rec.channels[static_cast<std::size_t>(slot_ch[s])].samples;
      ep.signals[s].assign(src.begin() + static_cast<long>(off),
                           src.begin() + static_cast<long>(off + epoch_len));
    }
    out.push_back(std::move(ep));
  }
  return out;
}

std::vector<FoldSplit> make_folds(std::vector<std::string> subjects, int k,
                                  FoldScheme scheme, std::uint64_t seed,
                                  double valid_fraction) {
  std::sort(subjects.begin(), subjects.end());
  subjects.erase(std::unique(subjects.begin(), subjects.end()), subjects.end());
  const int n = static_cast<int>(subjects.size());
  if (n == 0) throw Error("make_folds: no subjects");
  if (k <= 0) throw Error("make_folds: k must be positive");
  if (k > n)
    throw Error("make_folds: k (" + std::to_string(k) + ") exceeds subject count (" +
                std::to_string(n) + ")");
  if (scheme == FoldScheme::LeaveOneSubjectOut && k != n)
    throw Error("make_folds: leave-one-subject-out requires k == subject count");

  if (n == 1) {
    // Degenerate single-subject protocol: the subject trains; epoch-level
    // tail splits provide validation downstream.
    FoldSplit f;
    f.fold_index = 0;
    f.train_subjects = subjects;
    return {f};
  }

  // deterministic assignment of subjects to test groups
  std::vector<std::string> order = subjects;
  Rng rng(Rng::derive(seed, {0x466f6c64ull}));  // fold stream
  rng.shuffle(order);

  std::vector<std::vector<std::string>> groups(static_cast<std::size_t>(k));
  for (int i = 0; i < n; ++i)
    groups[static_cast<std::size_t>(i % k)].push_back(order[static_cast<std::size_t>(i)]);

  std::vector<FoldSplit> folds;
  for (int f = 0; f < k; ++f) {
    FoldSplit split;
    split.fold_index = f;
    split.test_subjects = groups[static_cast<std::size_t>(f)];
    std::sort(split.test_subjects.begin(), split.test_subjects.end());

    std::vector<std::string> rest;
    for (int g = 0; g < k; ++g)
      if (g != f)
        rest.insert(rest.end(), groups[static_cast<std::size_t>(g)].begin(),
                    groups[static_cast<std::size_t>(g)].end());
    std::sort(rest.begin(), rest.end());

    int n_valid = static_cast<int>(std::floor(valid_fraction * static_cast<double>(rest.size())));
    if (n_valid < 1 && rest.size() >= 2) n_valid = 1;
    n_valid = std::min<int>(n_valid, static_cast<int>(rest.size()) - 1);
    if (n_valid < 0) n_valid = 0;

    Rng vr(Rng::derive(seed, {0x56616c69ull, static_cast<std::uint64_t>(f)}));
    std::vector<std::string> pool = rest;
    vr.shuffle(pool);
    split.valid_subjects.assign(pool.begin(), pool.begin() + n_valid);
    std::sort(split.valid_subjects.begin(), split.valid_subjects.end());
    for (const std::string& s : rest)
      if (std::find(split.valid_subjects.begin(), split.valid_subjects.end(), s) ==
          split.valid_subjects.end())
        split.train_subjects.push_back(s);
    folds.push_back(std::move(split));
  }
  return folds;
}

}  // namespace mcmd
