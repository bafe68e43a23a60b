#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "crmgraph/error.hpp"

namespace crmgraph {

/// Key-value text config: one `key = value` per line, `#` comments, blank
/// lines ignored. Keys may repeat (the label mapping relies on order), so
/// entries are kept as an ordered list.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;

  static KeyValueConfig parse(std::istream& in) {
    KeyValueConfig cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      auto text = trim(line);
      if (text.empty() || text[0] == '#') continue;
      auto eq = text.find('=');
      if (eq == std::string::npos)
        fail(Errc::bad_config, "line " + std::to_string(line_no) + ": expected key = value");
      auto key = trim(text.substr(0, eq));
      auto value = trim(text.substr(eq + 1));
      if (key.empty())
        fail(Errc::bad_config, "line " + std::to_string(line_no) + ": empty key");
      cfg.entries_.emplace_back(std::move(key), std::move(value));
    }
    return cfg;
  }

  static KeyValueConfig read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::io_error, "cannot open " + path.string());
    return parse(in);
  }

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  bool contains(const std::string& key) const {
    for (const auto& [k, v] : entries_)
      if (k == key) return true;
    return false;
  }

  /// Last value wins when a key repeats.
  std::string get(const std::string& key, const std::string& fallback = "") const {
    std::string out = fallback;
    for (const auto& [k, v] : entries_)
      if (k == key) out = v;
    return out;
  }

  void set(std::string key, std::string value) {
    entries_.emplace_back(std::move(key), std::move(value));
  }

  static std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t");
    if (begin == std::string::npos) return "";
    auto end = s.find_last_not_of(" \t");
    return s.substr(begin, end - begin + 1);
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace crmgraph
