#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace hcowf2 {

// Flat machine-readable document: one `key=value` line per entry, keys
// carry units. Doubles are formatted with %.17g so values round-trip.
class KvDoc {
public:
  void add(const std::string &key, const std::string &value) {
    entries_.emplace_back(key, value);
  }

  void add(const std::string &key, double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    entries_.emplace_back(key, buf);
  }

  void add(const std::string &key, std::uint64_t value) {
    entries_.emplace_back(key, std::to_string(value));
  }

  const std::vector<std::pair<std::string, std::string>> &entries() const { return entries_; }

  void write(std::ostream &out) const {
    for (const auto &[key, value] : entries_)
      out << key << '=' << value << '\n';
  }

private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

} // namespace hcowf2
