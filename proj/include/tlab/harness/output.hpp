#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "tlab/error.hpp"

namespace tlab::harness {

/// Shortest round-trip decimal form; identical bits give identical text.
inline std::string format_real(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

/// RFC-4180 table held as text cells.
struct CsvTable {
  std::string name;  ///< file name, e.g. "profile.csv"
  int schema = 1;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  template <class... T>
  void add(const T&... cells) {
    std::vector<std::string> r;
    (r.push_back(cell(cells)), ...);
    require(r.size() == header.size(), ErrorKind::verification_error, name + ": row width mismatch");
    rows.push_back(std::move(r));
  }

  std::string render() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += quote(cells[i]);
      }
      out += "\r\n";
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
  }

 private:
  static std::string cell(double v) { return format_real(v); }
  static std::string cell(float v) { return format_real(v); }
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }
  static std::string cell(bool b) { return b ? "true" : "false"; }
  template <class I>
    requires std::is_integral_v<I>
  static std::string cell(I v) {
    return std::to_string(v);
  }
  static std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + '"';
  }
};

inline std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  require(EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) == 1, ErrorKind::verification_error,
          "sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string s;
  for (unsigned i = 0; i < len; ++i) {
    s += hex[md[i] >> 4];
    s += hex[md[i] & 15];
  }
  return s;
}

/// Writes to a sibling temporary file, then renames over the target.
inline void write_atomic(const std::filesystem::path& target, const std::string& content) {
  auto tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(f), ErrorKind::verification_error, "cannot write " + tmp.string());
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    require(static_cast<bool>(f), ErrorKind::verification_error, "short write on " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  require(!ec, ErrorKind::verification_error, "rename failed for " + target.string() + ": " + ec.message());
}

struct FileRecord {
  std::string name;
  std::string sha256;
  std::size_t bytes = 0;
  int schema = 1;
};

/// What one run produced: tables, a summary object and event logs.
struct ResultSet {
  std::string experiment;
  nlohmann::json config;
  nlohmann::json summary = nlohmann::json::object();
  nlohmann::json logs = nlohmann::json::object();
  std::vector<CsvTable> tables;
  std::vector<FileRecord> files;  ///< filled by persist()
  double wall_clock_seconds = 0;
};

inline constexpr const char* artifact_version = "0.1.0";
inline constexpr int manifest_schema = 1;

inline nlohmann::json manifest_json(const ResultSet& r) {
  nlohmann::json m;
  m["manifest_schema"] = manifest_schema;
  m["artifact_version"] = artifact_version;
  m["experiment"] = r.experiment;
  m["config"] = r.config;
  m["summary"] = r.summary;
  m["logs"] = r.logs;
  m["wall_clock_seconds"] = r.wall_clock_seconds;
  auto files = nlohmann::json::array();
  for (const auto& f : r.files)
    files.push_back({{"name", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}, {"csv_schema", f.schema}});
  m["files"] = files;
  return m;
}

/// Writes every table and then manifest.json, each atomically. The manifest
/// goes last so its presence implies complete data files.
inline void persist(ResultSet& r, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  require(!ec, ErrorKind::verification_error, "cannot create " + dir.string() + ": " + ec.message());
  std::filesystem::remove(dir / "manifest.json", ec);
  r.files.clear();
  for (const auto& t : r.tables) {
    const std::string body = t.render();
    write_atomic(dir / t.name, body);
    r.files.push_back({t.name, sha256_hex(body), body.size(), t.schema});
  }
  write_atomic(dir / "manifest.json", manifest_json(r).dump(2) + "\n");
}

}  // namespace tlab::harness
