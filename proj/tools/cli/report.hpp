#pragma once

#include "config.hpp"

#include "asianfb/curve.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace asianfb::cli {

/// Everything a subcommand produces. CSV output is the header, the summary
/// scalars as comments, then `table`; JSON output is {config, curves, summary}.
struct Report {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<FreeBoundaryCurve> curves;
    nlohmann::ordered_json summary = nlohmann::ordered_json::object();
    std::string console; ///< one-line summary for stdout
    bool partial_failure = false;
};

/// Value rounded to 12 significant digits, so JSON and CSV show the same number.
nlohmann::ordered_json json_number(double v);

std::string render_csv(const RunConfig& config, const Report& report);
std::string render_json(const RunConfig& config, const Report& report);

/// Writes `content` to `path`, or to stdout when path is empty. Throws IoError.
void write_output(const std::string& path, const std::string& content);

} // namespace asianfb::cli
