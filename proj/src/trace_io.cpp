#include "mcmcq/trace_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include <fmt/format.h>

#include "mcmcq/error.hpp"

namespace mcmcq {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      return fields;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

template <class T>
bool parse_number(std::string_view text, T& out) {
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace

RegenTrace TraceFile::regenerative() const {
  if (!regen) {
    throw MissingRegeneration("trace has no regen column; RS needs regeneration flags");
  }
  return RegenTrace(values, *regen);
}

TraceFile read_trace_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool has_header = false;
  TraceFile file;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = trim(line);
    if (row.empty()) continue;
    const auto fields = split_fields(row);
    if (!has_header) {
      if (fields.size() == 2 && fields[0] == "index" && fields[1] == "value") {
        has_header = true;
      } else if (fields.size() == 3 && fields[0] == "index" &&
                 fields[1] == "value" && fields[2] == "regen") {
        has_header = true;
        file.regen.emplace();
      } else {
        throw ParseError("expected header 'index,value' or 'index,value,regen'",
                         line_no);
      }
      continue;
    }
    const std::size_t expected_fields = file.regen ? 3 : 2;
    if (fields.size() != expected_fields) {
      throw ParseError("expected " + std::to_string(expected_fields) +
                           " fields, found " + std::to_string(fields.size()),
                       line_no);
    }
    std::uint64_t index = 0;
    if (!parse_number(fields[0], index)) {
      throw ParseError("malformed index '" + std::string(fields[0]) + "'", line_no);
    }
    if (index != file.values.size()) {
      throw ParseError("index " + std::to_string(index) + " out of sequence, expected " +
                           std::to_string(file.values.size()),
                       line_no);
    }
    double value = 0.0;
    if (!parse_number(fields[1], value) || !std::isfinite(value)) {
      throw ParseError("malformed value '" + std::string(fields[1]) + "'", line_no);
    }
    file.values.push_back(value);
    if (file.regen) {
      if (fields[2] != "0" && fields[2] != "1") {
        throw ParseError("regen flag must be 0 or 1, found '" +
                             std::string(fields[2]) + "'",
                         line_no);
      }
      file.regen->push_back(fields[2] == "1" ? 1 : 0);
    }
  }
  if (!has_header) throw ParseError("empty trace file", line_no == 0 ? 1 : line_no);
  if (file.values.empty()) throw ParseError("trace file has no data rows", line_no);
  return file;
}

TraceFile read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trace file '" + path + "'");
  return read_trace_csv(in);
}

std::string format_real(double x) { return fmt::format("{}", x); }

void write_trace_csv(std::ostream& out, std::span<const double> values) {
  out << "index,value\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    out << i << ',' << format_real(values[i]) << '\n';
  }
}

void write_trace_csv(std::ostream& out, const RegenTrace& trace) {
  out << "index,value,regen\n";
  const auto values = trace.values();
  const auto flags = trace.flags();
  for (std::size_t i = 0; i < values.size(); ++i) {
    out << i << ',' << format_real(values[i]) << ',' << int{flags[i]} << '\n';
  }
}

void write_tour_summary_csv(std::ostream& out, const RegenTrace& trace) {
  out << "tour,length\n";
  const auto lengths = trace.tour_lengths();
  for (std::size_t t = 0; t < lengths.size(); ++t) {
    out << t + 1 << ',' << lengths[t] << '\n';
  }
}

void write_block_quantiles_csv(std::ostream& out, std::span<const double> xi_star) {
  out << "block_index,xi_star\n";
  for (std::size_t i = 0; i < xi_star.size(); ++i) {
    out << i + 1 << ',' << format_real(xi_star[i]) << '\n';
  }
}

}  // namespace mcmcq
