#pragma once

#include <string>
#include <vector>

#include "gasless/metrics.hpp"

namespace gasless {

enum class ReportFormat { Json, Text, Csv };

Result<ReportFormat> parse_format(const std::string& name);

inline constexpr int kSchemaVersion = 1;

// json: lossless machine form. text: aligned two-column table using the
// measurement names confirmation time / cost efficiency / gas price / blocks
// confirmed / TPS. csv: header plus one row per report.
Result<std::string> render_report(const MetricsReport& r, ReportFormat format);
Result<std::string> render_reports_csv(const std::vector<MetricsReport>& rs);

}  // namespace gasless
