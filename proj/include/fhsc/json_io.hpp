#pragma once

// Result-document helpers shared by the CLI: JSON with all floating-point
// payloads rounded to 15 significant digits so identical configurations
// reproduce byte-identical files, plus plain CSV emission.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fhsc/num.hpp"

namespace fhsc {

using Json = nlohmann::json;

inline Json rounded(double x) { return Json(round_sig15(x)); }

inline Json rounded(const std::vector<double>& xs) {
  Json arr = Json::array();
  for (double x : xs) arr.push_back(round_sig15(x));
  return arr;
}

inline std::string fmt15(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

inline void ensure_directory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw config_error("cannot create output directory " + dir);
}

inline void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot open " + path + " for writing");
  out << body;
  if (!out) throw config_error("write failed for " + path);
}

inline void write_json_file(const std::string& path, const Json& doc) {
  write_text_file(path, doc.dump(2) + "\n");
}

// minimal CSV accumulator; all numeric cells formatted with 15 digits
class CsvTable {
 public:
  explicit CsvTable(std::string header) : body_(std::move(header)) {
    body_ += '\n';
  }
  void raw_row(const std::string& line) {
    body_ += line;
    body_ += '\n';
  }
  std::string& body() { return body_; }
  const std::string& body() const { return body_; }

 private:
  std::string body_;
};

}  // namespace fhsc
