#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace memsest {

/// Quotes a field when it contains a comma, quote or newline.
std::string csv_field(std::string_view s);
std::string csv_row(const std::vector<std::string>& fields);

/// RFC 4180-style reader; returns rows including the header.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

} // namespace memsest
