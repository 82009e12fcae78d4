#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mcmcq/regen.hpp"
#include "mcmcq/trace.hpp"

namespace mcmcq {

/// Contents of a trace CSV: header `index,value` or `index,value,regen`,
/// one row per iteration with consecutive indices starting at 0.
struct TraceFile {
  std::vector<double> values;
  std::optional<std::vector<std::uint8_t>> regen;

  ScalarTrace scalar() const { return ScalarTrace(values); }
  /// Throws MissingRegeneration if the file had no regen column.
  RegenTrace regenerative() const;
};

/// Throws ParseError (with the 1-based line number) on malformed input.
TraceFile read_trace_csv(std::istream& in);
TraceFile read_trace_csv(const std::string& path);

/// Shortest text that reads back to the same double; used in every CSV.
std::string format_real(double x);

void write_trace_csv(std::ostream& out, std::span<const double> values);
void write_trace_csv(std::ostream& out, const RegenTrace& trace);

/// `tour,length`, tours numbered from 1.
void write_tour_summary_csv(std::ostream& out, const RegenTrace& trace);

/// `block_index,xi_star`, blocks numbered from 1.
void write_block_quantiles_csv(std::ostream& out, std::span<const double> xi_star);

}  // namespace mcmcq
