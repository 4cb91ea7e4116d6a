#include "sspanel/records.hpp"

#include <cstdio>
#include <fstream>

#include "sspanel/errors.hpp"

namespace sspanel::records {

std::string fmt_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string fmt_int(long long x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%lld", x);
  return buf;
}

std::string to_record_text(const Record& rec) {
  std::string out;
  for (const auto& [key, value] : rec) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  }
  return out;
}

std::string csv_escape(const std::string& field) {
  bool needs_quote = field.find_first_of(",\"\n") != std::string::npos;
  if (!needs_quote) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

std::string to_csv_row(const Record& rec) {
  std::string header, values;
  bool first = true;
  for (const auto& [key, value] : rec) {
    if (!first) {
      header += ',';
      values += ',';
    }
    first = false;
    header += csv_escape(key);
    values += csv_escape(value);
  }
  return header + "\n" + values + "\n";
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open output file: " + path);
  out << text;
  if (!out) throw ConfigError("write failed: " + path);
}

}  // namespace sspanel::records
