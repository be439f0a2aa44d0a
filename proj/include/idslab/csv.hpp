#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace idslab {

/// Shortest round-trip decimal form, locale independent: CSV outputs must be
/// byte-identical across runs and worker counts.
inline std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

inline std::string format_u64_hex(std::uint64_t value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, 16);
  if (ec != std::errc{}) throw std::runtime_error("format_u64_hex failed");
  std::string s(buf, ptr);
  return std::string(16 - s.size(), '0') + s;
}

/// Comma-separated writer with LF line endings and a leading comment line
/// carrying the config hash.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& config_hash,
            const std::vector<std::string>& columns)
      : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open " + path);
    out_ << "# config_hash=" << config_hash << "\n";
    for (std::size_t k = 0; k < columns.size(); ++k) {
      if (k) out_ << ",";
      out_ << columns[k];
    }
    out_ << "\n";
  }

  void row(const std::vector<std::string>& fields) {
    for (std::size_t k = 0; k < fields.size(); ++k) {
      if (k) out_ << ",";
      out_ << fields[k];
    }
    out_ << "\n";
  }

 private:
  std::ofstream out_;
};

}  // namespace idslab
