#pragma once

#include <charconv>
#include <fstream>
#include <string>

#include "rteach/common.hpp"

namespace rteach {

// Shortest round-trip decimal form; deterministic and locale-free.
inline std::string fmt(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string fmt(float v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// Line-buffered CSV writer.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& header) : out_(path, std::ios::binary) {
    if (!out_) throw IoError("csv: cannot write " + path);
    out_ << header << "\n";
  }

  template <typename... Ts>
  void row(const Ts&... fields) {
    bool first = true;
    ((out_ << (first ? "" : ","), first = false, write_field(fields)), ...);
    out_ << "\n";
  }

  void flush() { out_.flush(); }

 private:
  void write_field(double v) { out_ << fmt(v); }
  void write_field(float v) { out_ << fmt(v); }
  void write_field(int v) { out_ << v; }
  void write_field(long v) { out_ << v; }
  void write_field(unsigned long v) { out_ << v; }
  void write_field(unsigned long long v) { out_ << v; }
  void write_field(bool v) { out_ << (v ? 1 : 0); }
  void write_field(const std::string& v) { out_ << v; }
  void write_field(const char* v) { out_ << v; }

  std::ofstream out_;
};

}  // namespace rteach
