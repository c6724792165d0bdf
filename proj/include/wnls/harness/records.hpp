#pragma once

// Run directories: records.jsonl (one JSON object per line), one CSV summary
// per suite, and manifest.json.  Anything under a record's "timing" key is
// run-local; checksums cover the rest, so two runs of the same config carry
// identical checksums at any worker count.

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wnls/harness/config.hpp"
#include "wnls/rng.hpp"

namespace wnls::harness {

inline constexpr const char* kArtifactVersion = "1.0.0";
inline constexpr const char* kRecordsFile = "records.jsonl";
inline constexpr const char* kManifestFile = "manifest.json";

/// The record without its "timing" member, serialized with sorted keys.
inline std::string payload(const json& record) {
  if (!record.contains("timing")) return record.dump();
  json p = record;
  p.erase("timing");
  return p.dump();
}

inline std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Quotes a CSV field when needed.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

/// Shortest round-trip text for a double (what the JSON records hold too).
inline std::string num(double v) { return json(v).dump(); }

struct CsvTable {
  std::string name;  // file stem, e.g. "summary"
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) {
    if (row.size() != header.size()) throw std::invalid_argument("CsvTable: row width differs from header");
    rows.push_back(std::move(row));
  }

  std::string text() const {
    std::ostringstream os;
    auto line = [&](const std::vector<std::string>& r) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_field(r[i]);
      os << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return os.str();
  }
};

/// Single writer for one run directory.  emit() is thread-safe; records keep
/// the order in which they are emitted, so suites emit from one thread after
/// the parallel work has finished.
class RunWriter {
 public:
  RunWriter(const std::filesystem::path& dir, const Config& config)
      : dir_(dir), config_(config), started_(utc_now()) {
    std::filesystem::create_directories(dir_);
    if (std::filesystem::exists(dir_ / kManifestFile)) std::filesystem::remove(dir_ / kManifestFile);
    out_.open(dir_ / kRecordsFile, std::ios::trunc);
    if (!out_) throw std::runtime_error("cannot write " + (dir_ / kRecordsFile).string());
  }

  RunWriter(const RunWriter&) = delete;
  RunWriter& operator=(const RunWriter&) = delete;
  ~RunWriter() {
    if (!finished_) {
      try {
        finish();
      } catch (...) {
      }
    }
  }

  void emit(const json& record) {
    if (!record.is_object()) throw std::invalid_argument("RunWriter: records must be objects");
    std::lock_guard lock(mu_);
    out_ << record.dump() << '\n';
    checksums_.push_back(sha256_hex(payload(record)));
  }

  void summary(const CsvTable& table) {
    std::lock_guard lock(mu_);
    std::ofstream f(dir_ / (table.name + ".csv"), std::ios::trunc);
    f << table.text();
    summaries_.push_back(table.name + ".csv");
  }

  std::size_t records() const { return checksums_.size(); }
  const std::filesystem::path& dir() const { return dir_; }

  void finish() {
    std::lock_guard lock(mu_);
    if (finished_) return;
    out_.close();
    json m;
    m["artifact_version"] = kArtifactVersion;
    m["config_hash"] = config_.hash();
    m["config"] = json::parse(config_.canonical());
    m["prng_id"] = kPrngId;
    m["gamma"] = config_.torus().gamma_string();
    m["started"] = started_;
    m["finished"] = utc_now();
    m["records_file"] = kRecordsFile;
    m["record_count"] = checksums_.size();
    m["checksums"] = checksums_;
    m["summaries"] = summaries_;
    std::ofstream f(dir_ / kManifestFile, std::ios::trunc);
    f << m.dump(2) << '\n';
    finished_ = true;
  }

 private:
  std::filesystem::path dir_;
  Config config_;
  std::string started_;
  std::ofstream out_;
  std::mutex mu_;
  std::vector<std::string> checksums_;
  std::vector<std::string> summaries_;
  bool finished_ = false;
};

struct RunCheck {
  bool ok = false;
  std::size_t records = 0;
  std::size_t mismatches = 0;
  std::string message;
};

/// Checks that the manifest references every record and every checksum matches.
inline RunCheck verify_run(const std::filesystem::path& dir) {
  RunCheck r;
  std::ifstream mf(dir / kManifestFile);
  if (!mf) {
    r.message = "missing manifest";
    return r;
  }
  const json m = json::parse(mf);
  const auto& sums = m.at("checksums");
  std::ifstream rf(dir / m.at("records_file").get<std::string>());
  std::string line;
  while (std::getline(rf, line)) {
    if (line.empty()) continue;
    if (r.records >= sums.size() || sums[r.records].get<std::string>() != sha256_hex(payload(json::parse(line))))
      ++r.mismatches;
    ++r.records;
  }
  const bool counts = r.records == sums.size() && r.records == m.at("record_count").get<std::size_t>();
  r.ok = counts && r.mismatches == 0;
  r.message = r.ok ? "ok" : counts ? "checksum mismatch" : "record count differs from manifest";
  return r;
}

/// Reads a run's records, dropping "timing" members.
inline std::vector<json> load_payloads(const std::filesystem::path& dir) {
  std::ifstream rf(dir / kRecordsFile);
  std::vector<json> out;
  std::string line;
  while (std::getline(rf, line))
    if (!line.empty()) out.push_back(json::parse(payload(json::parse(line))));
  return out;
}

}  // namespace wnls::harness
