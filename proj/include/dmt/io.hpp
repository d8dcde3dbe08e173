#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dmt/montecarlo.hpp"
#include "dmt/types.hpp"

namespace dmt::io {

/// Nine significant digits, shortest of %e/%f.
std::string format_number(double v);

/// Parses "start:stop:step" in dB. stop is included when it lands on the grid
/// (within 1e-9 of a step). Throws DomainError on malformed input.
std::vector<double> parse_snr_range(std::string_view text);

/// Parses fixed:<f>, global, local, blind or blind:<f>.
ScheduleRule parse_rule(std::string_view text);

/// Plain CSV without quoting. Lines starting with '#' are kept verbatim in
/// order, so parse then serialize reproduces the input.
struct CsvDocument {
  struct Line {
    bool comment = false;
    std::string text;                 ///< comment lines
    std::vector<std::string> fields;  ///< data lines
  };
  std::vector<std::string> header;
  std::vector<Line> lines;
};

CsvDocument parse_csv(std::string_view text);
std::string serialize_csv(const CsvDocument& doc);

/// strategy,eta,r,d rows sorted by (strategy name, eta, r).
std::string curves_to_csv(std::vector<TradeoffCurve> curves);

/// snr_db,p_out,n_samples,n_outages,ci95 rows plus an optional slope trailer.
std::string outage_to_csv(const std::vector<OutageEstimate>& estimates,
                          const std::optional<SlopeFit>& slope);

struct RunManifest {
  std::string command;
  std::map<std::string, std::string> parameters;
  std::string tool_version;
  std::optional<std::uint64_t> seed;
  std::string timestamp;  ///< ISO-8601 UTC; not part of the reproducible content

  std::string to_json() const;
  static RunManifest from_json(std::string_view text);
};

/// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string iso8601_now();

std::string_view tool_version();

}  // namespace dmt::io
