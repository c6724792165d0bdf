#pragma once

// Experiment configuration: one JSON object with flat keys and typed values
// (numbers, strings, booleans, or arrays of those).  Unknown keys are kept so
// a config round-trips unchanged; each suite validates the keys it reads.
//
// Common keys:
//   experiment    string   suite name, e.g. "count-verify"
//   gamma         string   preset (sqrt2, golden, one, three-halves) or literal
//   seed_range    string   "A..B", inclusive
//   N_list        [int]    scale list
//   workers       int      0 = hardware concurrency (never part of the hash)
//   out           string   output directory (never part of the hash)

#include "json.hpp"
#include <openssl/evp.h>

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wnls/torus.hpp"

namespace wnls::harness {

using json = nlohmann::json;

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256: digest failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return os.str();
}

struct SeedRange {
  std::uint64_t first = 1;
  std::uint64_t last = 1;

  std::vector<std::uint64_t> seeds() const {
    std::vector<std::uint64_t> out;
    for (std::uint64_t s = first; s <= last; ++s) out.push_back(s);
    return out;
  }
};

/// Parses "A..B" (inclusive, A <= B) or a single seed "A".
inline SeedRange parse_seed_range(std::string_view text) {
  auto number = [&](std::string_view part) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (part.empty() || ec != std::errc{} || ptr != part.data() + part.size())
      throw ConfigError("seed range: expected A..B, got '" + std::string(text) + "'");
    return v;
  };
  const auto dots = text.find("..");
  SeedRange r;
  if (dots == std::string_view::npos) {
    r.first = r.last = number(text);
  } else {
    r.first = number(text.substr(0, dots));
    r.last = number(text.substr(dots + 2));
  }
  if (r.last < r.first) throw ConfigError("seed range: end precedes start");
  return r;
}

class Config {
 public:
  Config() : j_(json::object()) {}

  explicit Config(json j) : j_(std::move(j)) {
    if (!j_.is_object()) throw ConfigError("config: top level must be an object");
    for (const auto& [key, value] : j_.items()) {
      const bool scalar = value.is_number() || value.is_string() || value.is_boolean();
      bool flat_array = value.is_array();
      if (flat_array)
        for (const auto& e : value) flat_array = flat_array && (e.is_number() || e.is_string() || e.is_boolean());
      if (!scalar && !flat_array) throw ConfigError("config: key '" + key + "' must be a scalar or a flat array");
    }
  }

  static Config parse(std::string_view text) {
    try {
      return Config(json::parse(text));
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
  }

  static Config load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
  }

  bool has(const std::string& key) const { return j_.contains(key); }
  const json& raw() const { return j_; }

  template <class T>
  T get(const std::string& key, T fallback) const {
    if (!j_.contains(key)) return fallback;
    return typed<T>(key);
  }

  template <class T>
  T require(const std::string& key) const {
    if (!j_.contains(key)) throw ConfigError("config: missing key '" + key + "'");
    return typed<T>(key);
  }

  template <class T>
  void set(const std::string& key, T value) {
    j_[key] = std::move(value);
  }

  TorusSpec torus() const { return parse_gamma(get<std::string>("gamma", "sqrt2")); }
  SeedRange seed_range() const { return parse_seed_range(get<std::string>("seed_range", "1..1")); }
  unsigned workers() const { return static_cast<unsigned>(get<std::int64_t>("workers", 1)); }

  /// Canonical text: sorted keys, with the run-local keys (workers, out) removed.
  std::string canonical() const {
    json c = j_;
    c.erase("workers");
    c.erase("out");
    return c.dump();
  }

  std::string hash() const { return sha256_hex(canonical()); }

 private:
  template <class T>
  T typed(const std::string& key) const {
    try {
      const json& v = j_.at(key);
      if constexpr (std::is_same_v<T, std::int64_t> || std::is_same_v<T, std::uint64_t>) {
        if (!v.is_number_integer()) throw ConfigError("config: key '" + key + "' must be an integer");
      } else if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number()) throw ConfigError("config: key '" + key + "' must be a number");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw ConfigError("config: key '" + key + "' must be a string");
      } else if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw ConfigError("config: key '" + key + "' must be a boolean");
      } else {
        if (!v.is_array()) throw ConfigError("config: key '" + key + "' must be an array");
      }
      return v.get<T>();
    } catch (const json::exception& e) {
      throw ConfigError("config: key '" + key + "': " + e.what());
    }
  }

  json j_;
};

}  // namespace wnls::harness
