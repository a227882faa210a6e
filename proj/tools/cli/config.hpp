#pragma once

#include "asianfb/analysis.hpp"
#include "asianfb/averaging.hpp"
#include "asianfb/fbsolver.hpp"
#include "asianfb/oracles.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace asianfb::cli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class OutputFormat { Csv, Json };

/// Unparsed key=value settings; later layers overwrite earlier ones.
using RawSettings = std::map<std::string, std::string>;

struct RunConfig {
    std::string command;
    std::vector<AveragingMethod> methods;
    ModelParams params;
    NumericalParams numerics;
    std::string out; ///< empty: write to stdout
    OutputFormat format = OutputFormat::Csv;
    std::uint64_t seed = 1;
    unsigned threads = 0;

    // sweep
    analysis::SweptParameter sweep_parameter = analysis::SweptParameter::R;
    std::vector<double> values;
    // eoc
    std::vector<double> lambdas;
    // fit
    std::size_t samples = 100;
    bool refit = false;
    // oracle-compare
    oracles::LcpGridSpec psor;
    bool with_psor = true;
    // solve
    std::string field_out;
    int field_stride = 1;
};

/// Keys accepted by `command`, in the order they are reported.
const std::vector<std::string>& known_keys(const std::string& command);

/// Reads a key=value file. Blank lines and lines starting with '#' are skipped.
RawSettings read_config_file(const std::string& path);

/// Built-in defaults, then `settings`. Throws ConfigError on unknown keys,
/// malformed values, or parameters that fail validation.
RunConfig resolve(const std::string& command, const RawSettings& settings, unsigned threads);

/// Parses ASIANFB_THREADS; 0 when unset.
unsigned threads_from_env();

/// Fully resolved configuration as ordered (key, value) pairs.
std::vector<std::pair<std::string, std::string>> describe(const RunConfig& config);

/// "%.12g", with "nan"/"inf" spelled out.
std::string format_number(double v);

} // namespace asianfb::cli
