#include "semiwave/jsonio.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "semiwave/errors.hpp"

namespace semiwave {

std::string json_escape(const std::string& s) {
  std::string o;
  o.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': o += "\\\""; break;
      case '\\': o += "\\\\"; break;
      case '\n': o += "\\n"; break;
      case '\t': o += "\\t"; break;
      default: o += c;
    }
  }
  return o;
}

std::string JsonWriter::format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  if (std::isnan(v)) return "\"nan\"";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void JsonWriter::comma() {
  if (!first_in_scope_.empty()) {
    if (!first_in_scope_.back()) out_ += ",";
    first_in_scope_.back() = false;
  }
}

JsonWriter& JsonWriter::begin_object() {
  comma();
  out_ += "{";
  first_in_scope_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  out_ += "}";
  first_in_scope_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::begin_array(const std::string& k) {
  comma();
  if (!k.empty()) out_ += "\"" + json_escape(k) + "\":";
  out_ += "[";
  first_in_scope_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  out_ += "]";
  first_in_scope_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::key(const std::string& k) {
  comma();
  out_ += "\"" + json_escape(k) + "\":";
  if (!first_in_scope_.empty()) first_in_scope_.back() = true;  // value follows, no comma
  return *this;
}

JsonWriter& JsonWriter::field(const std::string& k, double v) {
  comma();
  out_ += "\"" + json_escape(k) + "\":" + format_double(v);
  return *this;
}

JsonWriter& JsonWriter::field(const std::string& k, long v) {
  comma();
  out_ += "\"" + json_escape(k) + "\":" + std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::field(const std::string& k, bool v) {
  comma();
  out_ += "\"" + json_escape(k) + "\":" + (v ? "true" : "false");
  return *this;
}

JsonWriter& JsonWriter::field(const std::string& k, const std::string& v) {
  comma();
  out_ += "\"" + json_escape(k) + "\":\"" + json_escape(v) + "\"";
  return *this;
}

JsonWriter& JsonWriter::element(double v) {
  comma();
  out_ += format_double(v);
  return *this;
}

JsonWriter& JsonWriter::element(const std::string& v) {
  comma();
  out_ += "\"" + json_escape(v) + "\"";
  return *this;
}

void JsonWriter::write_file(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail_config("ValidationError", "cannot open output file " + path);
  f << out_ << "\n";
}

CsvWriter::CsvWriter(std::vector<std::string> header) : cols_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out_ += ",";
    out_ += header[i];
  }
  out_ += "\n";
}

void CsvWriter::row(const std::vector<double>& values) {
  char buf[40];
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out_ += ",";
    std::snprintf(buf, sizeof buf, "%.17g", values[i]);
    out_ += buf;
  }
  out_ += "\n";
}

void CsvWriter::write_file(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail_config("ValidationError", "cannot open output file " + path);
  f << out_;
}

}  // namespace semiwave
