// EDF/EDF+ reading and writing.
//
// Layout: 256-byte fixed header, 256 bytes of header per signal, then data
// records of 16-bit little-endian two's-complement samples. Samples scale to
// physical units via (physical_max−physical_min)/(digital_max−digital_min).
#pragma once

#include <string>
#include <vector>

#include "mcmd/tensor.hpp"

namespace mcmd {

struct EdfChannel {
  std::string label;
  double sampling_rate = 0.0;  // Hz
  Vec samples;                 // physical units (µV for EEG/EOG/EMG here)
};

struct RawRecording {
  std::string subject_id;
  std::vector<EdfChannel> channels;
  double duration = 0.0;  // seconds, whole-second truncated
  std::string start_date = "01.01.01";  // dd.mm.yy
  std::string start_time = "00.00.00";  // hh.mm.ss
};

// Reads all ordinary signals in physical units. Labels are taken verbatim from
// the header, trimmed of trailing spaces. "EDF Annotations" streams are not
// physical signals and are skipped (use load_edf_annotations for those).
RawRecording load_edf(const std::string& path);

struct EdfWriteOptions {
  double phys_min = -1000.0;  // shared physical range, µV
  double phys_max = 1000.0;
  int dig_min = -32768;
  int dig_max = 32767;
};

// Writes a plain EDF with 1-second data records. Channel rates must be whole
// numbers; trailing partial seconds are truncated. Samples outside the
// physical range are clamped.
void write_edf(const RawRecording& rec, const std::string& path,
               const EdfWriteOptions& opt = {});

// Timestamped annotation list (EDF+ TAL stream).
struct EdfAnnotation {
  double onset = 0.0;     // seconds
  double duration = 0.0;  // seconds; 0 when unspecified
  std::string text;
};

std::vector<EdfAnnotation> load_edf_annotations(const std::string& path);

// Minimal EDF+ annotation-only file writer (fixture/synth support).
void write_edf_annotations(const std::vector<EdfAnnotation>& anns,
                           const std::string& path);

// Quantize a physical value onto the writer grid (round trip fixed point).
double edf_quantize(double value, const EdfWriteOptions& opt = {});

}  // namespace mcmd
