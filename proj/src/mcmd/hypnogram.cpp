#include "mcmd/hypnogram.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "mcmd/common.hpp"
#include "mcmd/edf.hpp"

namespace mcmd {

const char* stage_name(Stage s) { return stage_name(static_cast<int>(s)); }

const char* stage_name(int s) {
  switch (s) {
    case 0: return "Wake";
    case 1: return "N1";
    case 2: return "N2";
    case 3: return "N3";
    case 4: return "REM";
    default: return "?";
  }
}

StageMap StageMap::defaults() {
  StageMap m;
  m.table = {
      {"Sleep stage W", 0}, {"Sleep stage 1", 1}, {"Sleep stage 2", 2},
      {"Sleep stage 3", 3}, {"Sleep stage 4", 3}, {"Sleep stage R", 4},
      {"Movement time", kDrop},
      // short codes accepted in CSV hypnograms
      {"W", 0},  {"N1", 1}, {"1", 1}, {"N2", 2}, {"2", 2},
      {"N3", 3}, {"3", 3},  {"4", 3}, {"R", 4},  {"REM", 4},
  };
  return m;
}

namespace {

int map_stage(const StageMap& map, const std::string& s) {
  const auto it = map.table.find(s);
  if (it == map.table.end())
    throw Error("hypnogram: unmapped stage string \"" + s + "\"");
  return it->second;
}

void finalize(std::vector<StageInterval>& out) {
  std::sort(out.begin(), out.end(),
            [](const StageInterval& a, const StageInterval& b) {
              return a.onset < b.onset;
            });
  for (std::size_t i = 1; i < out.size(); ++i) {
    const double prev_end = out[i - 1].onset + out[i - 1].duration;
    if (out[i].onset < prev_end - 1e-9) {
      std::ostringstream os;
      os << "hypnogram: overlapping intervals at onset " << out[i].onset
         << " (previous interval ends at " << prev_end << ")";
      throw Error(os.str());
    }
  }
}

std::vector<StageInterval> load_csv(const std::string& path, const StageMap& map) {
  std::ifstream f(path);
  if (!f) throw Error("hypnogram: cannot open " + path);
  std::string line;
  if (!std::getline(f, line)) throw Error("hypnogram: empty file " + path);
  // header line is optional but recommended
  if (line.rfind("onset_s", 0) != 0) {
    f.clear();
    f.seekg(0);
  }
  std::vector<StageInterval> out;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream is(line);
    std::string onset_s, dur_s, stage_s;
    if (!std::getline(is, onset_s, ',') || !std::getline(is, dur_s, ',') ||
        !std::getline(is, stage_s))
      throw Error("hypnogram: malformed CSV row \"" + line + "\"");
    if (!stage_s.empty() && stage_s.front() == '"' && stage_s.back() == '"')
      stage_s = stage_s.substr(1, stage_s.size() - 2);
    const int st = map_stage(map, stage_s);
    if (st == StageMap::kDrop) continue;
    StageInterval iv;
    try {
      iv.onset = std::stod(onset_s);
      iv.duration = std::stod(dur_s);
    } catch (const std::exception&) {
      throw Error("hypnogram: malformed CSV row \"" + line + "\"");
    }
    iv.stage = static_cast<Stage>(st);
    out.push_back(iv);
  }
  finalize(out);
  return out;
}

std::vector<StageInterval> load_edfplus(const std::string& path,
                                        const StageMap& map) {
  std::vector<StageInterval> out;
  for (const EdfAnnotation& a : load_edf_annotations(path)) {
    const int st = map_stage(map, a.text);
    if (st == StageMap::kDrop) continue;
    out.push_back({a.onset, a.duration, static_cast<Stage>(st)});
  }
  finalize(out);
  return out;
}

}  // namespace

std::vector<StageInterval> load_hypnogram(const std::string& path,
                                          HypnogramFormat format,
                                          const StageMap& map) {
  return format == HypnogramFormat::Csv ? load_csv(path, map)
                                        : load_edfplus(path, map);
}

void write_hypnogram_csv(const std::vector<StageInterval>& intervals,
                         const std::string& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw Error("hypnogram: cannot open " + path + " for writing");
  f << "onset_s,duration_s,stage\n";
  for (const StageInterval& iv : intervals) {
    const char* code = "";
    switch (iv.stage) {
      case Stage::Wake: code = "W"; break;
      case Stage::N1: code = "N1"; break;
      case Stage::N2: code = "N2"; break;
      case Stage::N3: code = "N3"; break;
      case Stage::Rem: code = "R"; break;
    }
    f << iv.onset << ',' << iv.duration << ',' << code << '\n';
  }
}

std::vector<StageInterval> trim_wake(std::vector<StageInterval> intervals,
                                     double margin_s) {
  if (margin_s < 0.0 || intervals.empty()) return intervals;
  double first_sleep = -1.0, last_sleep = -1.0;
  for (const StageInterval& iv : intervals) {
    if (iv.stage == Stage::Wake) continue;
    if (first_sleep < 0.0) first_sleep = iv.onset;
    last_sleep = iv.onset + iv.duration;
  }
  if (first_sleep < 0.0) return intervals;  // all wake: nothing to anchor on
  const double lo = first_sleep - margin_s;
  const double hi = last_sleep + margin_s;
  std::vector<StageInterval> out;
  for (StageInterval iv : intervals) {
    double b = iv.onset, e = iv.onset + iv.duration;
    if (iv.stage == Stage::Wake) {
      b = std::max(b, lo);
      e = std::min(e, hi);
      if (e - b <= 1e-9) continue;
      iv.onset = b;
      iv.duration = e - b;
    }
    out.push_back(iv);
  }
  return out;
}

}  // namespace mcmd
