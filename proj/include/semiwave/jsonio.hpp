#pragma once

#include <string>
#include <vector>

namespace semiwave {

// Minimal JSON writer with insertion-ordered keys and doubles printed at 17
// significant digits, so identical runs produce byte-identical output.
// Infinities are emitted as the strings "inf"/"-inf".
class JsonWriter {
public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array(const std::string& key = "");
  JsonWriter& end_array();
  JsonWriter& field(const std::string& key, double v);
  JsonWriter& field(const std::string& key, long v);
  JsonWriter& field(const std::string& key, int v) { return field(key, static_cast<long>(v)); }
  JsonWriter& field(const std::string& key, bool v);
  JsonWriter& field(const std::string& key, const std::string& v);
  JsonWriter& field(const std::string& key, const char* v) { return field(key, std::string(v)); }
  JsonWriter& element(double v);
  JsonWriter& element(const std::string& v);
  JsonWriter& key(const std::string& k);  // for nested containers

  std::string str() const { return out_; }
  void write_file(const std::string& path) const;

  static std::string format_double(double v);

private:
  void comma();
  std::string out_;
  std::vector<bool> first_in_scope_{};
};

// CSV with a header row, comma separator, LF line endings, 17-digit doubles.
class CsvWriter {
public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<double>& values);
  void write_file(const std::string& path) const;
  std::string str() const { return out_; }

private:
  std::string out_;
  std::size_t cols_;
};

std::string json_escape(const std::string& s);

}  // namespace semiwave
