#include "memsest/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "memsest/error.hpp"
#include "memsest/run_record.hpp"

namespace memsest {

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos)
    return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"')
      out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i)
      out += ',';
    out += csv_field(fields[i]);
  }
  return out + "\n";
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n')
        ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted)
    throw Error(Errc::InvalidInput, "unterminated quoted CSV field");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(Errc::InvalidInput, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(Errc::InvalidInput, "cannot write '" + path + "'");
  out << contents;
}

const char* run_source_name(RunSource s) { return s == RunSource::Native ? "native" : "interpreter"; }

namespace {

std::string format_time(double ms) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", ms);
  return buf;
}

std::int64_t to_int(const std::string& s, const char* what) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw Error(Errc::InvalidInput, std::string("bad ") + what + " value '" + s + "'");
  return v;
}

} // namespace

std::string run_records_to_csv(const std::vector<RunRecord>& records) {
  std::string out = std::string(kRunCsvHeader) + "\n";
  for (const auto& r : records) {
    out += csv_row({r.program, r.input, run_source_name(r.source), std::to_string(r.path_len),
                    std::to_string(r.mems), r.time_ms ? format_time(*r.time_ms) : "",
                    r.steps ? std::to_string(*r.steps) : ""});
  }
  return out;
}

std::vector<RunRecord> run_records_from_csv(const std::string& text) {
  auto rows = parse_csv(text);
  if (rows.empty() || csv_row(rows[0]) != std::string(kRunCsvHeader) + "\n")
    throw Error(Errc::InvalidInput, std::string("expected CSV header `") + kRunCsvHeader + "`");
  std::vector<RunRecord> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() != 7)
      throw Error(Errc::InvalidInput, "CSV row " + std::to_string(i + 1) + " has " +
                                          std::to_string(row.size()) + " fields, expected 7");
    RunRecord r;
    r.program = row[0];
    r.input = row[1];
    if (row[2] == "native")
      r.source = RunSource::Native;
    else if (row[2] == "interpreter")
      r.source = RunSource::Interpreter;
    else
      throw Error(Errc::InvalidInput, "unknown source '" + row[2] + "'");
    r.path_len = to_int(row[3], "path_len");
    r.mems = to_int(row[4], "mems");
    if (!row[5].empty()) {
      try {
        r.time_ms = std::stod(row[5]);
      } catch (const std::logic_error&) {
        throw Error(Errc::InvalidInput, "bad time_ms value '" + row[5] + "'");
      }
    }
    if (!row[6].empty())
      r.steps = to_int(row[6], "steps");
    out.push_back(std::move(r));
  }
  return out;
}

} // namespace memsest
