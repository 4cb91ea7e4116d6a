#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace sspanel::records {

/// Renders a double with 17 significant digits, enough to round-trip any
/// IEEE-754 double exactly. Used for every real written to CSV or record
/// output so regression baselines are bit-stable.
std::string fmt_real(double x);

std::string fmt_int(long long x);

/// A flat ordered list of key = value pairs.
using Record = std::vector<std::pair<std::string, std::string>>;

/// Serializes a record as one "key = value" line per entry.
std::string to_record_text(const Record& rec);

/// Serializes a record as a two-line CSV (header row, value row).
/// Values containing commas, quotes, or newlines are quoted.
std::string to_csv_row(const Record& rec);

/// Writes text to a file, replacing any existing content.
/// Throws sspanel::ConfigError if the file cannot be opened.
void write_text_file(const std::string& path, const std::string& text);

std::string csv_escape(const std::string& field);

}  // namespace sspanel::records
