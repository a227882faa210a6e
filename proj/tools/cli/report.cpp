#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>

namespace asianfb::cli {

nlohmann::ordered_json json_number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return std::strtod(format_number(v).c_str(), nullptr);
}

namespace {

std::string scalar_text(const nlohmann::ordered_json& value) {
    if (value.is_string()) return value.get<std::string>();
    if (value.is_null()) return "nan";
    if (value.is_number_float()) return format_number(value.get<double>());
    return value.dump();
}

} // namespace

std::string render_csv(const RunConfig& config, const Report& report) {
    std::string out;
    for (const auto& [key, value] : describe(config)) out += "# " + key + "=" + value + "\n";
    for (const auto& [key, value] : report.summary.items()) {
        if (key == "failures") {
            for (std::size_t i = 0; i < value.size(); ++i)
                out += "# summary.failures[" + std::to_string(i) + "]=" + value[i].dump() + "\n";
            continue;
        }
        if (value.is_structured()) continue;
        out += "# summary." + key + "=" + scalar_text(value) + "\n";
    }
    for (std::size_t c = 0; c < report.columns.size(); ++c) {
        if (c) out += ',';
        out += report.columns[c];
    }
    out += '\n';
    for (const auto& row : report.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += row[c];
        }
        out += '\n';
    }
    return out;
}

std::string render_json(const RunConfig& config, const Report& report) {
    nlohmann::ordered_json doc;
    auto& cfg = doc["config"] = nlohmann::ordered_json::object();
    for (const auto& [key, value] : describe(config)) cfg[key] = value;
    auto& curves = doc["curves"] = nlohmann::ordered_json::array();
    for (const auto& curve : report.curves) {
        nlohmann::ordered_json c;
        c["label"] = curve.label;
        auto& tau = c["tau"] = nlohmann::ordered_json::array();
        for (double t : curve.tau) tau.push_back(json_number(t));
        auto& rho = c["rho"] = nlohmann::ordered_json::array();
        for (double r : curve.rho) rho.push_back(json_number(r));
        c["iterations"] = curve.iterations;
        curves.push_back(std::move(c));
    }
    doc["summary"] = report.summary;
    return doc.dump(2) + "\n";
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        std::cout.flush();
        if (!std::cout) throw IoError("failed writing to stdout");
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot open '" + path + "' for writing");
    file << content;
    file.close();
    if (!file) throw IoError("failed writing '" + path + "'");
}

} // namespace asianfb::cli
