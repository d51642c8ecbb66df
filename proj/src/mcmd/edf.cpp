#include "mcmd/edf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace mcmd {

namespace {

std::string rtrim(std::string s) {
  while (!s.empty() && (s.back() == ' ' || s.back() == '\0')) s.pop_back();
  return s;
}

std::string read_field(std::ifstream& f, int n, const char* field) {
  std::string s(static_cast<std::size_t>(n), '\0');
  f.read(s.data(), n);
  if (!f) throw Error(std::string("edf: truncated header while reading field \"") +
                      field + "\"");
  return s;
}

double parse_num(const std::string& raw, const char* field) {
  const std::string s = rtrim(raw);
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    while (pos < s.size() && s[pos] == ' ') ++pos;
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(std::string("edf: cannot parse numeric field \"") + field +
                "\" (value \"" + s + "\")");
  }
}

long parse_int(const std::string& raw, const char* field) {
  const double v = parse_num(raw, field);
  if (v != std::floor(v))
    throw Error(std::string("edf: field \"") + field + "\" is not an integer");
  return static_cast<long>(v);
}

void put_field(std::string& hdr, std::size_t off, std::size_t len,
               const std::string& value) {
  std::string v = value;
  if (v.size() > len) v.resize(len);
  v.resize(len, ' ');
  std::memcpy(hdr.data() + off, v.data(), len);
}

std::string fmt_num(double v) {
  char buf[32];
  if (v == std::floor(v) && std::fabs(v) < 1e8)
    std::snprintf(buf, sizeof(buf), "%ld", static_cast<long>(v));
  else
    std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

bool is_annotation_label(const std::string& label) {
  return label == "EDF Annotations";
}

}  // namespace

double edf_quantize(double value, const EdfWriteOptions& opt) {
  const double scale =
      (opt.phys_max - opt.phys_min) / static_cast<double>(opt.dig_max - opt.dig_min);
  long d = std::lround((value - opt.phys_min) / scale) + opt.dig_min;
  d = std::clamp(d, static_cast<long>(opt.dig_min), static_cast<long>(opt.dig_max));
  return (static_cast<double>(d) - opt.dig_min) * scale + opt.phys_min;
}

RawRecording load_edf(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("edf: cannot open file " + path);

  const std::string version = rtrim(read_field(f, 8, "version"));
  if (version != "0")
    throw Error("edf: parse error on field \"version\" (expected \"0\", got \"" +
                version + "\")");
  const std::string patient = rtrim(read_field(f, 80, "patient"));
  read_field(f, 80, "recording");
  const std::string start_date = rtrim(read_field(f, 8, "start_date"));
  const std::string start_time = rtrim(read_field(f, 8, "start_time"));
  const long header_bytes = parse_int(read_field(f, 8, "header_bytes"), "header_bytes");
  read_field(f, 44, "reserved");
  const long n_records = parse_int(read_field(f, 8, "n_records"), "n_records");
  const double record_dur = parse_num(read_field(f, 8, "record_duration"), "record_duration");
  const long ns = parse_int(read_field(f, 4, "n_signals"), "n_signals");
  if (ns <= 0) throw Error("edf: parse error on field \"n_signals\" (non-positive)");
  if (header_bytes != 256 * (ns + 1))
    throw Error("edf: parse error on field \"header_bytes\" (expected " +
                std::to_string(256 * (ns + 1)) + ", got " +
                std::to_string(header_bytes) + ")");
  if (n_records < 0) throw Error("edf: parse error on field \"n_records\"");
  if (!(record_dur > 0.0))
    throw Error("edf: parse error on field \"record_duration\" (non-positive)");

  std::vector<std::string> labels(ns);
  for (long i = 0; i < ns; ++i) labels[i] = rtrim(read_field(f, 16, "label"));
  for (long i = 0; i < ns; ++i) read_field(f, 80, "transducer");
  for (long i = 0; i < ns; ++i) read_field(f, 8, "physical_dimension");
  std::vector<double> pmin(ns), pmax(ns);
  for (long i = 0; i < ns; ++i)
    pmin[i] = parse_num(read_field(f, 8, "physical_min"), "physical_min");
  for (long i = 0; i < ns; ++i)
    pmax[i] = parse_num(read_field(f, 8, "physical_max"), "physical_max");
  std::vector<long> dmin(ns), dmax(ns);
  for (long i = 0; i < ns; ++i)
    dmin[i] = parse_int(read_field(f, 8, "digital_min"), "digital_min");
  for (long i = 0; i < ns; ++i)
    dmax[i] = parse_int(read_field(f, 8, "digital_max"), "digital_max");
  for (long i = 0; i < ns; ++i) read_field(f, 80, "prefiltering");
  std::vector<long> spr(ns);
  for (long i = 0; i < ns; ++i) {
    spr[i] = parse_int(read_field(f, 8, "samples_per_record"), "samples_per_record");
    if (spr[i] <= 0)
      throw Error("edf: parse error on field \"samples_per_record\" (signal " +
                  std::to_string(i) + ")");
  }
  for (long i = 0; i < ns; ++i) read_field(f, 32, "signal_reserved");

  std::vector<double> scale(ns);
  for (long i = 0; i < ns; ++i) {
    if (is_annotation_label(labels[i])) {
      scale[i] = 1.0;
      continue;
    }
    if (dmax[i] == dmin[i])
      throw Error("edf: scaling error on signal \"" + labels[i] +
                  "\" (digital_max == digital_min)");
    scale[i] = (pmax[i] - pmin[i]) / static_cast<double>(dmax[i] - dmin[i]);
  }

  long record_bytes = 0;
  for (long i = 0; i < ns; ++i) record_bytes += spr[i] * 2;
  std::vector<char> record(static_cast<std::size_t>(record_bytes));

  RawRecording rec;
  rec.subject_id = patient.empty() ? path : patient;
  rec.start_date = start_date;
  rec.start_time = start_time;
  rec.duration = n_records * record_dur;
  std::vector<int> out_index(ns, -1);
  for (long i = 0; i < ns; ++i) {
    if (is_annotation_label(labels[i])) continue;
    EdfChannel ch;
    ch.label = labels[i];
    ch.sampling_rate = static_cast<double>(spr[i]) / record_dur;
    ch.samples.reserve(static_cast<std::size_t>(spr[i]) * n_records);
    out_index[i] = static_cast<int>(rec.channels.size());
    rec.channels.push_back(std::move(ch));
  }

  // unique labels among kept channels
  for (std::size_t i = 0; i < rec.channels.size(); ++i)
    for (std::size_t j = i + 1; j < rec.channels.size(); ++j)
      if (rec.channels[i].label == rec.channels[j].label)
        throw Error("edf: duplicate channel label \"" + rec.channels[i].label + "\"");

  for (long r = 0; r < n_records; ++r) {
    f.read(record.data(), record_bytes);
    const auto got = static_cast<long>(f.gcount());
    if (got != record_bytes) {
      std::ostringstream os;
      os << "edf: truncated data records (expected "
         << 256 * (ns + 1) + record_bytes * n_records << " bytes total, record "
         << r << " has " << got << " of " << record_bytes << " bytes)";
      throw Error(os.str());
    }
    const char* p = record.data();
    for (long i = 0; i < ns; ++i) {
      if (out_index[i] < 0) {
        p += spr[i] * 2;
        continue;
      }
      EdfChannel& ch = rec.channels[static_cast<std::size_t>(out_index[i])];
      for (long s = 0; s < spr[i]; ++s) {
        const auto lo = static_cast<unsigned char>(p[2 * s]);
        const auto hi = static_cast<unsigned char>(p[2 * s + 1]);
        const auto d = static_cast<std::int16_t>(lo | (hi << 8));
        ch.samples.push_back((static_cast<double>(d) - dmin[i]) * scale[i] + pmin[i]);
      }
      p += spr[i] * 2;
    }
  }
  return rec;
}

void write_edf(const RawRecording& rec, const std::string& path,
               const EdfWriteOptions& opt) {
  if (rec.channels.empty()) throw Error("edf write: no channels");
  if (opt.dig_max == opt.dig_min) throw Error("edf write: empty digital range");
  const long ns = static_cast<long>(rec.channels.size());

  long n_records = -1;
  std::vector<long> spr(ns);
  for (long i = 0; i < ns; ++i) {
    const EdfChannel& ch = rec.channels[static_cast<std::size_t>(i)];
    const double rate = ch.sampling_rate;
    if (!(rate > 0.0) || rate != std::floor(rate))
      throw Error("edf write: channel \"" + ch.label +
                  "\" needs a positive whole-number rate");
    spr[i] = static_cast<long>(rate);
    const long recs = static_cast<long>(ch.samples.size()) / spr[i];
    n_records = n_records < 0 ? recs : std::min(n_records, recs);
  }
  if (n_records <= 0) throw Error("edf write: less than one second of data");

  std::string hdr(static_cast<std::size_t>(256 * (ns + 1)), ' ');
  put_field(hdr, 0, 8, "0");
  put_field(hdr, 8, 80, rec.subject_id);
  put_field(hdr, 88, 80, "mcmd");
  put_field(hdr, 168, 8, rec.start_date);
  put_field(hdr, 176, 8, rec.start_time);
  put_field(hdr, 184, 8, std::to_string(256 * (ns + 1)));
  put_field(hdr, 236, 8, std::to_string(n_records));
  put_field(hdr, 244, 8, "1");
  put_field(hdr, 252, 4, std::to_string(ns));

  std::size_t off = 256;
  for (long i = 0; i < ns; ++i)
    put_field(hdr, off + 16 * i, 16, rec.channels[static_cast<std::size_t>(i)].label);
  off += 16 * ns;
  off += 80 * ns;  // transducer: blank
  for (long i = 0; i < ns; ++i) put_field(hdr, off + 8 * i, 8, "uV");
  off += 8 * ns;
  for (long i = 0; i < ns; ++i) put_field(hdr, off + 8 * i, 8, fmt_num(opt.phys_min));
  off += 8 * ns;
  for (long i = 0; i < ns; ++i) put_field(hdr, off + 8 * i, 8, fmt_num(opt.phys_max));
  off += 8 * ns;
  for (long i = 0; i < ns; ++i) put_field(hdr, off + 8 * i, 8, std::to_string(opt.dig_min));
  off += 8 * ns;
  for (long i = 0; i < ns; ++i) put_field(hdr, off + 8 * i, 8, std::to_string(opt.dig_max));
  off += 8 * ns;
  off += 80 * ns;  // prefiltering: blank
  for (long i = 0; i < ns; ++i) put_field(hdr, off + 8 * i, 8, std::to_string(spr[i]));
  off += 8 * ns;
  off += 32 * ns;  // per-signal reserved

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("edf write: cannot open " + path);
  f.write(hdr.data(), static_cast<std::streamsize>(hdr.size()));

  const double scale =
      (opt.phys_max - opt.phys_min) / static_cast<double>(opt.dig_max - opt.dig_min);
  std::vector<char> buf;
  for (long r = 0; r < n_records; ++r) {
    buf.clear();
    for (long i = 0; i < ns; ++i) {
      const EdfChannel& ch = rec.channels[static_cast<std::size_t>(i)];
      for (long s = 0; s < spr[i]; ++s) {
        const double v = ch.samples[static_cast<std::size_t>(r * spr[i] + s)];
        long d = std::lround((v - opt.phys_min) / scale) + opt.dig_min;
        d = std::clamp(d, static_cast<long>(opt.dig_min),
                       static_cast<long>(opt.dig_max));
        const auto u = static_cast<std::uint16_t>(static_cast<std::int16_t>(d));
        buf.push_back(static_cast<char>(u & 0xff));
        buf.push_back(static_cast<char>((u >> 8) & 0xff));
      }
    }
    f.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  }
  if (!f) throw Error("edf write: write failed for " + path);
}

// --------------------------------------------------------------------------
// EDF+ annotations (TAL streams: "+onset[\x15duration]\x14text\x14...\x00")
// --------------------------------------------------------------------------

std::vector<EdfAnnotation> load_edf_annotations(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("edf: cannot open file " + path);
  read_field(f, 8, "version");
  f.seekg(184);
  const long header_bytes = parse_int(read_field(f, 8, "header_bytes"), "header_bytes");
  f.seekg(236);
  const long n_records = parse_int(read_field(f, 8, "n_records"), "n_records");
  f.seekg(8, std::ios::cur);  // record duration (may be 0 for annotation files)
  const long ns = parse_int(read_field(f, 4, "n_signals"), "n_signals");

  std::vector<std::string> labels(ns);
  for (long i = 0; i < ns; ++i) labels[i] = rtrim(read_field(f, 16, "label"));
  f.seekg(256 + ns * (16 + 80 + 8 + 8 + 8 + 8 + 8 + 80));
  std::vector<long> spr(ns);
  for (long i = 0; i < ns; ++i)
    spr[i] = parse_int(read_field(f, 8, "samples_per_record"), "samples_per_record");

  f.seekg(header_bytes);
  std::vector<EdfAnnotation> out;
  std::string tal;
  for (long r = 0; r < n_records; ++r) {
    for (long i = 0; i < ns; ++i) {
      std::string chunk(static_cast<std::size_t>(spr[i] * 2), '\0');
      f.read(chunk.data(), spr[i] * 2);
      if (!f) throw Error("edf: truncated annotation records");
      if (!is_annotation_label(labels[i])) continue;
      // split on NUL-terminated TALs
      std::size_t pos = 0;
      while (pos < chunk.size()) {
        const std::size_t end = chunk.find('\0', pos);
        if (end == std::string::npos) break;
        tal = chunk.substr(pos, end - pos);
        pos = end + 1;
        if (tal.empty()) continue;
        // onset[\x15duration]\x14text\x14
        const std::size_t t14 = tal.find('\x14');
        if (t14 == std::string::npos) continue;
        std::string head = tal.substr(0, t14);
        double onset = 0.0, dur = 0.0;
        const std::size_t t15 = head.find('\x15');
        try {
          if (t15 == std::string::npos) {
            onset = std::stod(head);
          } else {
            onset = std::stod(head.substr(0, t15));
            dur = std::stod(head.substr(t15 + 1));
          }
        } catch (const std::exception&) {
          throw Error("edf: malformed annotation onset in \"" + tal + "\"");
        }
        std::size_t tp = t14 + 1;
        while (tp < tal.size()) {
          const std::size_t te = tal.find('\x14', tp);
          const std::string text =
              te == std::string::npos ? tal.substr(tp) : tal.substr(tp, te - tp);
          if (!text.empty()) out.push_back({onset, dur, text});
          if (te == std::string::npos) break;
          tp = te + 1;
        }
      }
    }
  }
  return out;
}

void write_edf_annotations(const std::vector<EdfAnnotation>& anns,
                           const std::string& path) {
  // one annotation signal, one record per annotation
  std::vector<std::string> tals;
  std::size_t max_len = 16;
  for (std::size_t i = 0; i < anns.size(); ++i) {
    char head[64];
    std::snprintf(head, sizeof(head), "+%g\x15%g\x14", anns[i].onset,
                  anns[i].duration);
    std::string tal = "+0\x14\x14";  // record timestamp TAL
    tal += '\0';
    tal += head + anns[i].text + "\x14";
    tal += '\0';
    tals.push_back(tal);
    max_len = std::max(max_len, tal.size());
  }
  if (max_len % 2) ++max_len;
  const long spr = static_cast<long>(max_len / 2);
  const long n_records = static_cast<long>(tals.size());

  std::string hdr(512, ' ');
  put_field(hdr, 0, 8, "0");
  put_field(hdr, 8, 80, "annotations");
  put_field(hdr, 88, 80, "mcmd");
  put_field(hdr, 168, 8, "01.01.01");
  put_field(hdr, 176, 8, "00.00.00");
  put_field(hdr, 184, 8, "512");
  put_field(hdr, 192, 44, "EDF+C");
  put_field(hdr, 236, 8, std::to_string(n_records));
  put_field(hdr, 244, 8, "0");
  put_field(hdr, 252, 4, "1");
  put_field(hdr, 256, 16, "EDF Annotations");
  put_field(hdr, 256 + 16 + 80 + 8, 8, "-1");       // physical_min
  put_field(hdr, 256 + 16 + 80 + 16, 8, "1");       // physical_max
  put_field(hdr, 256 + 16 + 80 + 24, 8, "-32768");  // digital_min
  put_field(hdr, 256 + 16 + 80 + 32, 8, "32767");   // digital_max
  put_field(hdr, 256 + 16 + 80 + 40 + 80, 8, std::to_string(spr));

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("edf write: cannot open " + path);
  f.write(hdr.data(), static_cast<std::streamsize>(hdr.size()));
  for (auto tal : tals) {
    tal.resize(max_len, '\0');
    f.write(tal.data(), static_cast<std::streamsize>(tal.size()));
  }
}

}  // namespace mcmd
