#include "config.hpp"

#include "asianfb/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace asianfb::cli {

namespace {

const std::vector<std::string> kModelKeys = {"method", "r", "q", "sigma", "T", "lambda"};
const std::vector<std::string> kNumericKeys = {"n", "m", "L", "pmax", "toll", "transport", "inner"};
const std::vector<std::string> kOutputKeys = {"out", "format", "seed"};

std::vector<std::string> join(std::initializer_list<std::vector<std::string>> parts) {
    std::vector<std::string> all;
    for (const auto& p : parts) all.insert(all.end(), p.begin(), p.end());
    return all;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v))
        throw ConfigError("invalid number for '" + key + "': '" + text + "'");
    return v;
}

long long to_integer(const std::string& key, const std::string& text) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ConfigError("invalid integer for '" + key + "': '" + text + "'");
    return v;
}

bool to_bool(const std::string& key, const std::string& text) {
    if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
    if (text == "0" || text == "false" || text == "no" || text == "off") return false;
    throw ConfigError("invalid boolean for '" + key + "': '" + text + "'");
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

std::vector<double> to_double_list(const std::string& key, const std::string& text) {
    std::vector<double> values;
    for (const auto& item : split_list(text)) values.push_back(to_double(key, item));
    if (values.empty()) throw ConfigError("empty list for '" + key + "'");
    return values;
}

std::string join_numbers(const std::vector<double>& values) {
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) s += ',';
        s += format_number(values[i]);
    }
    return s;
}

} // namespace

const std::vector<std::string>& known_keys(const std::string& command) {
    static const std::map<std::string, std::vector<std::string>> table = {
        {"solve", join({kModelKeys, kNumericKeys, kOutputKeys, {"field", "field_stride"}})},
        {"sweep", join({kModelKeys, kNumericKeys, kOutputKeys, {"param", "values"}})},
        {"eoc", join({{"r", "q", "sigma", "T", "lambdas"}, kNumericKeys, kOutputKeys})},
        {"scaling", join({kModelKeys, kNumericKeys, kOutputKeys})},
        {"fit", join({kModelKeys, kNumericKeys, kOutputKeys, {"samples", "refit"}})},
        {"oracle-compare",
         join({kModelKeys, kNumericKeys, kOutputKeys,
               {"psor", "psor_nx", "psor_mt", "psor_xmax", "psor_omega", "psor_tol"}})},
    };
    auto it = table.find(command);
    if (it == table.end()) throw ConfigError("unknown command '" + command + "'");
    return it->second;
}

RawSettings read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    RawSettings settings;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(number) + ": expected key=value");
        auto key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError(path + ":" + std::to_string(number) + ": empty key");
        settings[key] = trim(line.substr(eq + 1));
    }
    return settings;
}

unsigned threads_from_env() {
    const char* env = std::getenv("ASIANFB_THREADS");
    if (!env || !*env) return 0;
    auto v = to_integer("ASIANFB_THREADS", env);
    if (v < 1 || v > 1024) throw ConfigError("ASIANFB_THREADS must be in [1, 1024]");
    return static_cast<unsigned>(v);
}

RunConfig resolve(const std::string& command, const RawSettings& settings, unsigned threads) {
    const auto& keys = known_keys(command);
    for (const auto& [key, value] : settings) {
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw ConfigError("option '" + key + "' is not accepted by '" + command + "'");
    }
    auto get = [&](const std::string& key) -> const std::string* {
        auto it = settings.find(key);
        return it == settings.end() ? nullptr : &it->second;
    };

    RunConfig c;
    c.command = command;
    c.threads = threads;
    c.lambdas = {0.2, 0.5, 1, 2, 3, 4, 5, 10, 20};
    c.values = {0.02, 0.04, 0.06};
    c.psor.nx = 401;
    c.psor.mt = 2000;
    c.psor.x_max = 4.0;
    c.psor.omega = 1.6;

    if (auto v = get("r")) c.params.r = to_double("r", *v);
    if (auto v = get("q")) c.params.q = to_double("q", *v);
    if (auto v = get("sigma")) c.params.sigma = to_double("sigma", *v);
    if (auto v = get("T")) c.params.T = to_double("T", *v);
    if (auto v = get("n")) c.numerics.n = static_cast<int>(to_integer("n", *v));
    if (auto v = get("m")) c.numerics.m = static_cast<int>(to_integer("m", *v));
    if (auto v = get("L")) c.numerics.L = to_double("L", *v);
    if (auto v = get("pmax")) c.numerics.p_max = static_cast<int>(to_integer("pmax", *v));
    if (auto v = get("toll")) c.numerics.toll = to_double("toll", *v);

    try {
        if (auto v = get("transport")) c.numerics.transport = parse_transport_lookup(*v);
        if (auto v = get("inner")) c.numerics.inner = parse_inner_iteration(*v);

        double lambda = 1.0;
        if (auto v = get("lambda")) lambda = to_double("lambda", *v);
        std::string methods = command == "eoc" ? "weighted" : "arithmetic";
        if (auto v = get("method")) methods = *v;
        for (const auto& name : split_list(methods)) {
            AveragingMethod method{parse_averaging_kind(name), 0.0};
            if (method.kind == AveragingKind::WeightedArithmetic) method.lambda = lambda;
            c.methods.push_back(method);
        }
        if (c.methods.empty()) throw ConfigError("no averaging method given");
        if (command != "sweep" && c.methods.size() != 1)
            throw ConfigError("'" + command + "' takes exactly one averaging method");

        if (auto v = get("param")) c.sweep_parameter = analysis::parse_swept_parameter(*v);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }

    if (auto v = get("out")) c.out = *v;
    if (auto v = get("format")) {
        if (*v == "csv")
            c.format = OutputFormat::Csv;
        else if (*v == "json")
            c.format = OutputFormat::Json;
        else
            throw ConfigError("format must be csv or json, got '" + *v + "'");
    }
    if (auto v = get("seed")) {
        auto s = to_integer("seed", *v);
        if (s < 0) throw ConfigError("seed must be non-negative");
        c.seed = static_cast<std::uint64_t>(s);
    }
    if (auto v = get("values")) c.values = to_double_list("values", *v);
    if (auto v = get("lambdas")) c.lambdas = to_double_list("lambdas", *v);
    if (auto v = get("samples")) {
        auto s = to_integer("samples", *v);
        if (s < 1 || s > 100000) throw ConfigError("samples must be in [1, 100000]");
        c.samples = static_cast<std::size_t>(s);
    }
    if (auto v = get("refit")) c.refit = to_bool("refit", *v);
    if (auto v = get("psor")) c.with_psor = to_bool("psor", *v);
    if (auto v = get("psor_nx")) c.psor.nx = static_cast<int>(to_integer("psor_nx", *v));
    if (auto v = get("psor_mt")) c.psor.mt = static_cast<int>(to_integer("psor_mt", *v));
    if (auto v = get("psor_xmax")) c.psor.x_max = to_double("psor_xmax", *v);
    if (auto v = get("psor_omega")) c.psor.omega = to_double("psor_omega", *v);
    if (auto v = get("psor_tol")) c.psor.tol = to_double("psor_tol", *v);
    if (auto v = get("field")) c.field_out = *v;
    if (auto v = get("field_stride")) {
        auto s = to_integer("field_stride", *v);
        if (s < 1) throw ConfigError("field_stride must be >= 1");
        c.field_stride = static_cast<int>(s);
    }

    try {
        c.params.validate();
        c.numerics.validate();
        for (const auto& m : c.methods) m.validate();
        if (command == "sweep") {
            analysis::SweepSpec spec{c.methods, c.params, c.sweep_parameter, c.values, c.numerics, threads};
            spec.validate();
        }
        if (command == "eoc") {
            for (double l : c.lambdas)
                if (!(l > 0.0)) throw ConfigError("lambdas must be positive");
            if (!std::is_sorted(c.lambdas.begin(), c.lambdas.end()) ||
                std::adjacent_find(c.lambdas.begin(), c.lambdas.end()) != c.lambdas.end())
                throw ConfigError("lambdas must be strictly increasing");
        }
        if (command == "oracle-compare") c.psor.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    return c;
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::vector<std::pair<std::string, std::string>> describe(const RunConfig& c) {
    std::vector<std::pair<std::string, std::string>> out;
    out.emplace_back("command", c.command);
    if (c.command != "eoc") {
        std::string methods;
        for (std::size_t i = 0; i < c.methods.size(); ++i) {
            if (i) methods += ',';
            methods += c.methods[i].name();
        }
        out.emplace_back("method", methods);
    }
    out.emplace_back("r", format_number(c.params.r));
    out.emplace_back("q", format_number(c.params.q));
    out.emplace_back("sigma", format_number(c.params.sigma));
    out.emplace_back("T", format_number(c.params.T));
    if (c.command != "eoc") {
        bool weighted = std::any_of(c.methods.begin(), c.methods.end(), [](const AveragingMethod& m) {
            return m.kind == AveragingKind::WeightedArithmetic;
        });
        if (weighted) {
            for (const auto& m : c.methods)
                if (m.kind == AveragingKind::WeightedArithmetic) {
                    out.emplace_back("lambda", format_number(m.lambda));
                    break;
                }
        }
    }
    out.emplace_back("n", std::to_string(c.numerics.n));
    out.emplace_back("m", std::to_string(c.numerics.m));
    out.emplace_back("L", format_number(c.numerics.L));
    out.emplace_back("pmax", std::to_string(c.numerics.p_max));
    out.emplace_back("toll", format_number(c.numerics.toll));
    out.emplace_back("transport", to_string(c.numerics.transport));
    out.emplace_back("inner", to_string(c.numerics.inner));
    out.emplace_back("format", c.format == OutputFormat::Csv ? "csv" : "json");
    out.emplace_back("seed", std::to_string(c.seed));
    if (c.command == "solve") {
        out.emplace_back("field", c.field_out);
        out.emplace_back("field_stride", std::to_string(c.field_stride));
    } else if (c.command == "sweep") {
        out.emplace_back("param", analysis::to_string(c.sweep_parameter));
        out.emplace_back("values", join_numbers(c.values));
    } else if (c.command == "eoc") {
        out.emplace_back("lambdas", join_numbers(c.lambdas));
    } else if (c.command == "fit") {
        out.emplace_back("samples", std::to_string(c.samples));
        out.emplace_back("refit", c.refit ? "true" : "false");
    } else if (c.command == "oracle-compare") {
        out.emplace_back("psor", c.with_psor ? "true" : "false");
        out.emplace_back("psor_nx", std::to_string(c.psor.nx));
        out.emplace_back("psor_mt", std::to_string(c.psor.mt));
        out.emplace_back("psor_xmax", format_number(c.psor.x_max));
        out.emplace_back("psor_omega", format_number(c.psor.omega));
        out.emplace_back("psor_tol", format_number(c.psor.tol));
    }
    return out;
}

} // namespace asianfb::cli
