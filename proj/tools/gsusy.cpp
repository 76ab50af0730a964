// gsusy: spectra, criticality scans, SUSY checks and oracle comparisons for Dirac
// quasiparticles bound to electric or magnetic impurities in graphene.

#include <CLI11.hpp>

#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "gsusy/cli.hpp"

namespace {

using namespace gsusy;
using namespace gsusy::cli;

bool use_color() { return std::getenv("NO_COLOR") == nullptr && isatty(fileno(stderr)); }

void log_line(const char* tag, const char* color, const std::string& msg) {
    if (use_color())
        std::cerr << color << tag << "\033[0m " << msg << '\n';
    else
        std::cerr << tag << ' ' << msg << '\n';
}

void log_error(const std::string& msg) { log_line("error:", "\033[31m", msg); }
void log_note(const std::string& msg) { log_line("note:", "\033[33m", msg); }

// Pulls "--config PATH" / "--config=PATH" out of argv and splices the file's
// "--key=value" tokens in right after the subcommand, so later command-line flags win.
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::vector<std::string> file_tokens;
    std::vector<std::string> kept;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a == "--config") {
            if (i + 1 >= args.size()) throw ConfigError("config", "missing path");
            auto t = config_tokens_from_file(args[++i]);
            file_tokens.insert(file_tokens.end(), t.begin(), t.end());
        } else if (a.rfind("--config=", 0) == 0) {
            auto t = config_tokens_from_file(a.substr(9));
            file_tokens.insert(file_tokens.end(), t.begin(), t.end());
        } else {
            kept.push_back(a);
        }
    }
    static const std::vector<std::string> commands{"spectrum", "critical-scan", "susy-verify", "oracle-compare"};
    auto pos = kept.begin();
    while (pos != kept.end() && std::find(commands.begin(), commands.end(), *pos) == commands.end()) ++pos;
    if (pos != kept.end()) ++pos;
    kept.insert(pos, file_tokens.begin(), file_tokens.end());
    return kept;
}

} // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    std::string out_path;
    std::string impurity = "electric";
    std::string format = "csv";

    CLI::App app{"Bound states of Dirac quasiparticles near electric and magnetic impurities in graphene"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Expand help for every subcommand");

    auto add_common = [&](CLI::App* sub) {
        auto last = [](CLI::Option* o) { return o->multi_option_policy(CLI::MultiOptionPolicy::TakeLast); };
        last(sub->add_option("--format", format, "Output format")
                 ->check(CLI::IsMember({"csv", "json"}))
                 ->capture_default_str());
        last(sub->add_option("--out", out_path, "Output file (default: stdout)"));
        last(sub->add_option("--grid-points", cfg.grid_points, "Radial grid points")->capture_default_str());
        last(sub->add_option("--r-max", cfg.r_max, "Outer radius of the radial grid (internal units)"));
        last(sub->add_option("--tol", cfg.tol, "Grid refinement tolerance")->capture_default_str());
        last(sub->add_option("--max-doublings", cfg.max_doublings, "Grid doublings allowed")->capture_default_str());
        last(sub->add_option("--threads", cfg.threads, "Worker threads (0: all cores)")->capture_default_str());
        last(sub->add_option("--impurity", impurity, "electric or magnetic")
                 ->check(CLI::IsMember({"electric", "magnetic"}))
                 ->capture_default_str());
        last(sub->add_option("--coupling,-g", cfg.coupling, "Electric effective charge g"));
        last(sub->add_option("--beta", cfg.beta, "Magnetic coupling beta (dimensionless)"));
        last(sub->add_option("--lambda", cfg.lambda, "Magnetic monopole strength lambda (flux units)"));
        last(sub->add_option("--j", cfg.j_text, "Angular momentum as a fraction, e.g. 1/2")->capture_default_str());
        last(sub->add_option("--n-max,--nbreve-max", cfg.n_max, "Largest radial index")->capture_default_str());
        // Accepted everywhere so one config file can drive every subcommand.
        last(sub->add_option("--g-min", cfg.g_min, "Scan start")->capture_default_str());
        last(sub->add_option("--g-max", cfg.g_max, "Scan end")->capture_default_str());
        last(sub->add_option("--steps", cfg.steps, "Scan steps")->capture_default_str());
        sub->add_flag("--include-gap-edge", cfg.include_gap_edge, "Also list the magnetic n-breve = 0 state");
    };

    auto* spectrum = app.add_subcommand("spectrum", "Closed-form energies and SUSY eigenvalues");
    auto* scan = app.add_subcommand("critical-scan", "Scan g across the critical charge g = j");
    auto* verify = app.add_subcommand("susy-verify", "Check the discrete SUSY algebra and isospectrality");
    auto* compare = app.add_subcommand("oracle-compare", "Closed form against matrix and shooting oracles");
    for (auto* sub : {spectrum, scan, verify, compare}) add_common(sub);
    app.footer("Any flag may also be given as key=value in a file passed with --config PATH;\n"
               "command-line flags override the file.\n"
               "Exit codes: 0 ok, 1 configuration error, 2 verification failure, 3 collapse-regime refusal.");

    std::vector<std::string> args;
    try {
        args = expand_config(argc, argv);
    } catch (const ConfigError& e) {
        log_error(e.what());
        return exit_config_error;
    }
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config_error;
    }

    cfg.impurity = impurity == "magnetic" ? ImpurityKind::magnetic : ImpurityKind::electric;
    cfg.format = format == "json" ? Format::json : Format::csv;

    CommandResult result;
    try {
        if (spectrum->parsed())
            result = cmd_spectrum(cfg);
        else if (scan->parsed())
            result = cmd_critical_scan(cfg);
        else if (verify->parsed())
            result = cmd_susy_verify(cfg);
        else
            result = cmd_oracle_compare(cfg);
    } catch (const ConfigError& e) {
        log_error(e.what());
        return exit_config_error;
    } catch (const CollapseRegimeError& e) {
        log_error(e.what());
        return exit_collapse_refusal;
    } catch (const std::exception& e) {
        log_error(e.what());
        return exit_config_error;
    }

    if (result.exit_code == exit_collapse_refusal) {
        log_error(result.message);
        return result.exit_code;
    }
    if (out_path.empty()) {
        write_table(std::cout, result.table, cfg.format);
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            log_error("out: cannot write '" + out_path + "'");
            return exit_config_error;
        }
        write_table(out, result.table, cfg.format);
    }
    if (!result.message.empty()) {
        if (result.exit_code == exit_ok)
            log_note(result.message);
        else
            log_error(result.message);
    }
    return result.exit_code;
}
