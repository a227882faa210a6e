#include "commands.hpp"
#include "config.hpp"
#include "report.hpp"

#include "asianfb/errors.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace {

using asianfb::cli::RawSettings;

enum ExitCode { Ok = 0, Unexpected = 1, BadConfig = 2, Diverged = 3, IoFailure = 4 };

/// Flags of one subcommand, stored as text until resolve() types them.
struct FlagSet {
    CLI::App* app = nullptr;
    std::map<std::string, std::string> storage;
    std::vector<std::pair<std::string, CLI::Option*>> options;
    struct Switch {
        std::string key;
        CLI::Option* option;
        std::string value; ///< stored under key when the flag is present
    };
    std::vector<Switch> switches;
    std::string config_path;

    void option(const std::string& key, const std::string& flag, const std::string& help) {
        options.emplace_back(key, app->add_option(flag, storage[key], help));
    }
    void toggle(const std::string& key, const std::string& flag, const std::string& value,
                const std::string& help) {
        switches.push_back({key, app->add_flag(flag, help), value});
    }

    RawSettings collect() const {
        RawSettings settings;
        if (!config_path.empty()) settings = asianfb::cli::read_config_file(config_path);
        for (const auto& [key, opt] : options)
            if (opt->count() > 0) settings[key] = storage.at(key);
        for (const auto& s : switches)
            if (s.option->count() > 0) settings[s.key] = s.value;
        return settings;
    }
};

void add_common(FlagSet& f, bool with_method) {
    if (with_method) {
        f.option("method", "--method", "arithmetic | weighted | geometric");
        f.option("lambda", "--lambda", "weight rate for weighted averaging (default 1)");
    }
    f.option("r", "--r", "interest rate (default 0.06)");
    f.option("q", "--q", "dividend yield (default 0.04)");
    f.option("sigma", "--sigma", "volatility (default 0.2)");
    f.option("T", "--T", "maturity (default 50)");
    f.option("n", "--n", "space steps (default 300)");
    f.option("m", "--m", "time steps (default 10000)");
    f.option("L", "--L", "truncation of the xi domain (default 3)");
    f.option("pmax", "--pmax", "inner iteration cap (default 500)");
    f.option("toll", "--toll", "inner iteration tolerance (default 1e-8)");
    f.option("transport", "--transport", "linear | nearest (default linear)");
    f.option("inner", "--inner", "secant | plain (default secant)");
    f.option("out", "--out", "output file (default stdout)");
    f.option("format", "--format", "csv | json (default csv)");
    f.option("seed", "--seed", "random seed (default 1)");
    f.app->add_option("--config", f.config_path, "key=value file; flags take precedence");
}

bool is_solver_failure(const std::exception& e) {
    return dynamic_cast<const asianfb::DivergenceError*>(&e) ||
           dynamic_cast<const asianfb::ConvergenceError*>(&e) ||
           dynamic_cast<const asianfb::SingularPivotError*>(&e) ||
           dynamic_cast<const asianfb::RootFindingError*>(&e);
}

void check_output_dir(const std::string& path) {
    if (path.empty()) return;
    auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty() && !std::filesystem::is_directory(parent))
        throw asianfb::cli::IoError("output directory '" + parent.string() + "' does not exist");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Early exercise boundary of American floating-strike Asian calls"};
    app.require_subcommand(1);

    std::map<std::string, FlagSet> sets;
    auto add = [&](const std::string& name, const std::string& help) -> FlagSet& {
        FlagSet& f = sets[name];
        f.app = app.add_subcommand(name, help);
        return f;
    };

    {
        auto& f = add("solve", "solve for one boundary curve");
        add_common(f, true);
        f.option("field", "--field", "also write the full Pi field to this CSV file");
        f.option("field_stride", "--field-stride", "write every k-th time level of the field");
    }
    {
        auto& f = add("sweep", "solve over a list of values of one parameter");
        add_common(f, true);
        f.option("param", "--param", "r | q | sigma | lambda");
        f.option("values", "--values", "comma separated values");
    }
    {
        auto& f = add("eoc", "convergence order of weighted averaging as lambda grows");
        add_common(f, false);
        f.option("lambdas", "--lambdas", "increasing comma separated lambdas");
    }
    {
        auto& f = add("scaling", "compare against the maturity-normalized problem");
        add_common(f, true);
    }
    {
        auto& f = add("fit", "residual sum of squares of the closed-form rho(T) fit");
        add_common(f, true);
        f.option("samples", "--samples", "number of random parameter draws (default 100)");
        f.toggle("refit", "--refit", "true", "also refit beta by least squares");
    }
    {
        auto& f = add("oracle-compare", "compare against PSOR and the sigma = 0 form");
        add_common(f, true);
        f.toggle("psor", "--no-psor", "false", "skip the PSOR oracle");
        f.option("psor_nx", "--psor-nx", "PSOR space nodes (default 401)");
        f.option("psor_mt", "--psor-mt", "PSOR time steps (default 2000)");
        f.option("psor_xmax", "--psor-xmax", "PSOR domain end (default 4)");
        f.option("psor_omega", "--psor-omega", "relaxation factor (default 1.6)");
        f.option("psor_tol", "--psor-tol", "sweep tolerance (default 1e-9)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? Ok : BadConfig;
    }

    std::string command;
    for (auto* sub : app.get_subcommands()) command = sub->get_name();
    const FlagSet& flags = sets.at(command);

    asianfb::cli::RunConfig config;
    try {
        config = asianfb::cli::resolve(command, flags.collect(), asianfb::cli::threads_from_env());
    } catch (const std::exception& e) {
        std::cerr << "asianfb: configuration error: " << e.what() << "\n";
        return BadConfig;
    }

    try {
        check_output_dir(config.out);
        check_output_dir(config.field_out);
        auto report = asianfb::cli::run_command(config);
        auto content = config.format == asianfb::cli::OutputFormat::Json
                           ? asianfb::cli::render_json(config, report)
                           : asianfb::cli::render_csv(config, report);
        asianfb::cli::write_output(config.out, content);
        (config.out.empty() ? std::cerr : std::cout) << report.console << "\n";
        if (report.partial_failure) {
            std::cerr << "asianfb: some runs failed; see the failures entries in the output\n";
            return Diverged;
        }
        return Ok;
    } catch (const asianfb::cli::IoError& e) {
        std::cerr << "asianfb: I/O error: " << e.what() << "\n";
        return IoFailure;
    } catch (const std::exception& e) {
        if (is_solver_failure(e)) {
            std::cerr << "asianfb: solver failure: " << e.what() << "\n";
            return Diverged;
        }
        if (dynamic_cast<const asianfb::DomainError*>(&e)) {
            std::cerr << "asianfb: invalid input: " << e.what() << "\n";
            return BadConfig;
        }
        std::cerr << "asianfb: " << e.what() << "\n";
        return Unexpected;
    }
}
