#pragma once

// Command implementations behind the gsusy executable. Each command turns a RunConfig
// into a Table plus an exit code; argument parsing and file handling live in tools/.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <future>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "gsusy/electric.hpp"
#include "gsusy/error.hpp"
#include "gsusy/magnetic.hpp"
#include "gsusy/model.hpp"
#include "gsusy/oracle.hpp"
#include "gsusy/susy.hpp"

namespace gsusy::cli {

enum ExitCode : int { exit_ok = 0, exit_config_error = 1, exit_verification_failure = 2, exit_collapse_refusal = 3 };

enum class Format { csv, json };

/// Bad user input; the message names the offending field.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_(field) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

struct RunConfig {
    ImpurityKind impurity = ImpurityKind::electric;
    std::optional<double> coupling; ///< electric g
    std::optional<double> beta;     ///< magnetic, dimensionless
    std::optional<double> lambda;   ///< magnetic, flux units (with the default medium)
    std::string j_text = "1/2";
    int n_max = 2;                  ///< largest n (electric) or n-breve (magnetic)
    bool include_gap_edge = false;  ///< also emit the magnetic n-breve = 0 state
    double g_min = 0.0;
    double g_max = 1.0;
    int steps = 200;
    Format format = Format::csv;
    int grid_points = oracle::kDefaultPoints;
    std::optional<double> r_max;
    double tol = 1e-6;              ///< refinement tolerance on matrix eigenvalues
    int max_doublings = 2;
    int threads = 0;                ///< 0: hardware concurrency
};

using Cell = std::variant<std::monostate, double, long long, bool, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct CommandResult {
    Table table;
    int exit_code = exit_ok;
    std::string message;
};

// ---- output ---------------------------------------------------------------

inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

inline std::string csv_field(const Cell& c) {
    struct Visitor {
        std::string operator()(std::monostate) const { return ""; }
        std::string operator()(double v) const { return format_number(v); }
        std::string operator()(long long v) const { return std::to_string(v); }
        std::string operator()(bool v) const { return v ? "true" : "false"; }
        std::string operator()(const std::string& s) const {
            if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
            std::string q = "\"";
            for (char ch : s) {
                if (ch == '"') q += '"';
                q += ch;
            }
            return q + '"';
        }
    };
    return std::visit(Visitor{}, c);
}

inline void write_csv(std::ostream& os, const Table& t) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_field(Cell{t.columns[i]});
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
        os << '\n';
    }
}

inline void write_json_lines(std::ostream& os, const Table& t) {
    for (const auto& row : t.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < t.columns.size(); ++i) {
            const auto& c = row[i];
            auto& slot = obj[t.columns[i]];
            if (std::holds_alternative<std::monostate>(c))
                slot = nullptr;
            else if (auto d = std::get_if<double>(&c))
                slot = std::isfinite(*d) ? nlohmann::ordered_json(*d) : nlohmann::ordered_json(format_number(*d));
            else if (auto l = std::get_if<long long>(&c))
                slot = *l;
            else if (auto b = std::get_if<bool>(&c))
                slot = *b;
            else
                slot = std::get<std::string>(c);
        }
        os << obj.dump() << '\n';
    }
}

inline void write_table(std::ostream& os, const Table& t, Format f) {
    if (f == Format::csv)
        write_csv(os, t);
    else
        write_json_lines(os, t);
}

inline std::string render(const Table& t, Format f) {
    std::ostringstream os;
    write_table(os, t, f);
    return os.str();
}

// ---- config file ----------------------------------------------------------

/// key=value lines ('#' comments, blank lines ignored) turned into "--key=value" tokens.
inline std::vector<std::string> config_tokens(std::istream& in, const std::string& origin = "config") {
    std::vector<std::string> out;
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string{};
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno), "expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(origin + ":" + std::to_string(lineno), "empty key");
        out.push_back("--" + key + "=" + value);
    }
    return out;
}

inline std::vector<std::string> config_tokens_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open '" + path + "'");
    return config_tokens(in, path);
}

// ---- helpers --------------------------------------------------------------

namespace detail {

/// Runs fn(0..count-1) on a bounded pool; results come back in index order.
template <class T>
std::vector<T> ordered_parallel_map(int count, int threads, const std::function<T(int)>& fn) {
    const int width = std::max(1, threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency()));
    std::vector<T> out;
    out.reserve(count);
    for (int start = 0; start < count; start += width) {
        std::vector<std::future<T>> batch;
        for (int i = start; i < std::min(count, start + width); ++i)
            batch.push_back(std::async(std::launch::async, fn, i));
        for (auto& f : batch) out.push_back(f.get());
    }
    return out;
}

inline HalfInteger parse_j(const RunConfig& cfg) {
    HalfInteger j;
    try {
        j = HalfInteger::parse(cfg.j_text);
    } catch (const DomainError& e) {
        throw ConfigError("j", e.what());
    }
    if (!j.is_half_odd()) throw ConfigError("j", "not half-integer: " + cfg.j_text);
    if (cfg.impurity == ImpurityKind::magnetic && !j.positive())
        throw ConfigError("j", "magnetic impurity requires j > 0");
    return j;
}

inline electric::ElectricImpurity electric_impurity(const RunConfig& cfg) {
    if (cfg.beta || cfg.lambda) throw ConfigError("beta/lambda", "only valid for the magnetic impurity");
    if (!cfg.coupling) throw ConfigError("coupling", "required for the electric impurity");
    if (!std::isfinite(*cfg.coupling) || *cfg.coupling <= 0.0) throw ConfigError("coupling", "must be positive");
    return electric::ElectricImpurity::with_charge(*cfg.coupling);
}

inline magnetic::MagneticImpurity magnetic_impurity(const RunConfig& cfg) {
    if (cfg.coupling) throw ConfigError("coupling", "only valid for the electric impurity; use beta or lambda");
    if (cfg.beta.has_value() == cfg.lambda.has_value())
        throw ConfigError("beta/lambda", "give exactly one of beta or lambda");
    try {
        return cfg.beta ? magnetic::MagneticImpurity::from_beta(*cfg.beta)
                        : magnetic::MagneticImpurity::from_lambda(*cfg.lambda);
    } catch (const DomainError& e) {
        throw ConfigError(cfg.beta ? "beta" : "lambda", e.what());
    }
}

inline void check_common(const RunConfig& cfg) {
    if (cfg.n_max < 0) throw ConfigError("n-max", "must be non-negative");
    if (cfg.grid_points < RadialGrid::kMinPoints)
        throw ConfigError("grid-points", "must be at least " + std::to_string(RadialGrid::kMinPoints));
    if (cfg.r_max && !(*cfg.r_max > 1e-3)) throw ConfigError("r-max", "must exceed 1e-3");
    if (!(cfg.tol > 0.0)) throw ConfigError("tol", "must be positive");
    if (cfg.max_doublings < 0) throw ConfigError("max-doublings", "must be non-negative");
}

inline RadialGrid grid_for(const RunConfig& cfg, double decay) {
    if (cfg.r_max) return RadialGrid::sinh(1e-4, *cfg.r_max, std::min(3.0, 0.1 * *cfg.r_max), cfg.grid_points);
    return oracle::default_grid(decay, cfg.grid_points);
}

inline double rel_err(double value, double ref) { return std::abs(value - ref) / std::max(std::abs(ref), 1e-300); }

inline std::string level_label(const char* prefix, HalfInteger j, int n) {
    return std::string(prefix) + ":j=" + j.to_string() + ":n=" + std::to_string(n);
}

inline int first_electric_n(HalfInteger j) { return j.positive() ? 0 : 1; }

inline std::string format_short(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

} // namespace detail

// ---- spectrum -------------------------------------------------------------

inline CommandResult cmd_spectrum(const RunConfig& cfg) {
    detail::check_common(cfg);
    const HalfInteger j = detail::parse_j(cfg);
    CommandResult res;
    res.table.columns = {"case", "g_or_beta", "j", "n", "epsilon_tilde", "aleph_sq_or_w_sq", "classification"};

    if (cfg.impurity == ImpurityKind::electric) {
        const auto imp = detail::electric_impurity(cfg);
        const auto rot = electric::classify(imp, j);
        const int n0 = detail::first_electric_n(j);
        res.table.rows = detail::ordered_parallel_map<std::vector<Cell>>(
            cfg.n_max - n0 + 1, cfg.threads, [&](int i) -> std::vector<Cell> {
                const int n = n0 + i;
                std::vector<Cell> row{std::string("electric"), imp.g, j.to_string(), (long long)n};
                if (rot.classification != electric::Criticality::subcritical) {
                    row.insert(row.end(), {Cell{}, Cell{}, electric::to_string(rot.classification)});
                    return row;
                }
                const QuantumNumbers q{j, n};
                row.insert(row.end(), {electric::bound_energy(imp, q).value, electric::susy_eigenvalue(imp, q),
                                       electric::to_string(rot.classification)});
                return row;
            });
        if (rot.classification != electric::Criticality::subcritical)
            res.message = "coupling g = " + detail::format_short(imp.g) + " is " +
                          electric::to_string(rot.classification) + " for j = " + j.to_string() +
                          ": no bound energies";
        return res;
    }

    const auto imp = detail::magnetic_impurity(cfg);
    if (cfg.include_gap_edge)
        res.table.rows.push_back({std::string("magnetic"), imp.beta(), j.to_string(), 0LL, 1.0, 0.0,
                                  std::string("gap_edge")});
    auto rows = detail::ordered_parallel_map<std::vector<Cell>>(
        std::max(cfg.n_max, 0), cfg.threads, [&](int i) -> std::vector<Cell> {
            const QuantumNumbers q{j, i + 1};
            return {std::string("magnetic"), imp.beta(),   j.to_string(), (long long)q.n,
                    magnetic::bound_energy_gapped(imp, q).value, magnetic::susy_eigenvalue(imp, q),
                    std::string("gapped")};
        });
    res.table.rows.insert(res.table.rows.end(), rows.begin(), rows.end());
    return res;
}

// ---- critical-scan --------------------------------------------------------

inline CommandResult cmd_critical_scan(const RunConfig& cfg) {
    detail::check_common(cfg);
    if (cfg.impurity != ImpurityKind::electric) throw ConfigError("impurity", "critical-scan is electric only");
    if (cfg.steps < 1) throw ConfigError("steps", "must be at least 1");
    if (!(cfg.g_min < cfg.g_max)) throw ConfigError("g-min/g-max", "need g-min < g-max");
    const HalfInteger j = detail::parse_j(cfg);
    const double r_max = cfg.r_max.value_or(40.0);
    const auto grid = RadialGrid::sinh(1e-4, r_max, std::min(3.0, 0.1 * r_max), cfg.grid_points);

    std::vector<double> samples;
    for (int i = 0; i <= cfg.steps; ++i) {
        const double g = cfg.g_min + (cfg.g_max - cfg.g_min) * i / cfg.steps;
        if (g > 0.0) samples.push_back(g);
    }
    CommandResult res;
    res.table.columns = {"g", "j", "nu_sq", "eta_real", "hermiticity_defect", "classification"};
    res.table.rows = detail::ordered_parallel_map<std::vector<Cell>>(
        static_cast<int>(samples.size()), cfg.threads, [&](int i) -> std::vector<Cell> {
            const auto imp = electric::ElectricImpurity::with_charge(samples[i]);
            const auto rot = electric::classify(imp, j);
            Cell defect;
            if (rot.classification != electric::Criticality::critical)
                defect = hermiticity_defect(electric::superpotential_at(imp, j, 1.0), grid);
            return {samples[i], j.to_string(), rot.nu_sq, rot.eta_is_real, defect,
                    electric::to_string(rot.classification)};
        });
    return res;
}

// ---- susy-verify ----------------------------------------------------------

namespace detail {

struct CheckRow {
    std::string check;
    std::string level;
    double value;
    double tolerance;
    bool passed() const { return value <= tolerance; }
};

inline std::vector<CheckRow> ladder_checks(const LadderOperators& ops, const std::string& label, int pairs) {
    std::vector<CheckRow> rows;
    const auto alg = susy_algebra_check(ops, 1e-12);
    rows.push_back({"nilpotency", label, alg.nilpotency, 1e-12});
    rows.push_back({"anticommutator", label, alg.anticommutator, 1e-12});
    rows.push_back({"commutator", label, alg.commutator, 1e-12});
    const auto iso = isospectrality_check(ops, pairs);
    rows.push_back({"isospectrality", label, iso.max_relative_mismatch, 1e-10});
    const bool zero_ok = iso.extra_zero_mode.has_value() && iso.zero_mode_normalizable;
    rows.push_back({"zero_mode_eigenvalue", label, std::abs(iso.zero_mode_eigenvalue), 1e-6});
    rows.push_back({"zero_mode_edge_fraction", label, zero_ok ? iso.zero_mode_edge_fraction : 1.0, 1e-6});
    rows.push_back({"ground_state_annihilation", label, annihilation_residual(ops), 1e-8});
    return rows;
}

} // namespace detail

inline CommandResult cmd_susy_verify(const RunConfig& cfg) {
    detail::check_common(cfg);
    const HalfInteger j = detail::parse_j(cfg);
    std::vector<std::vector<detail::CheckRow>> blocks;

    if (cfg.impurity == ImpurityKind::electric) {
        const auto imp = detail::electric_impurity(cfg);
        const auto rot = electric::classify(imp, j);
        if (rot.classification != electric::Criticality::subcritical) {
            CommandResult refusal;
            refusal.exit_code = exit_collapse_refusal;
            refusal.message = "refused: collapse regime (" + electric::to_string(rot.classification) +
                              "), nu^2 = " + detail::format_short(rot.nu_sq) + " for g = " +
                              detail::format_short(imp.g) + ", j = " + j.to_string();
            return refusal;
        }
        const int n0 = detail::first_electric_n(j);
        blocks = detail::ordered_parallel_map<std::vector<detail::CheckRow>>(
            cfg.n_max - n0 + 1, cfg.threads, [&](int i) {
                const QuantumNumbers q{j, n0 + i};
                const double eps = electric::bound_energy(imp, q).value;
                const auto ops = ladder_matrices(electric::superpotential(imp, q),
                                                 detail::grid_for(cfg, electric::decay_rate(eps)));
                const auto label = detail::level_label("electric", j, q.n);
                auto rows = detail::ladder_checks(ops, label, q.n + 3);
                // The level itself sits at index n of A A^dagger, counting the zero mode.
                const double aleph = electric::susy_eigenvalue(imp, q);
                const double found = ops.partner2.eigenvalue(q.n - n0);
                rows.push_back({"level", label, q.n == 0 ? std::abs(found) : detail::rel_err(found, aleph),
                                q.n == 0 ? 1e-6 : 1e-3});
                return rows;
            });
    } else {
        const auto imp = detail::magnetic_impurity(cfg);
        const int top = std::max(cfg.n_max, 1);
        const double slowest = magnetic::decay_rate(imp, magnetic::bound_energy_gapped(imp, {j, top}).value);
        const auto w = magnetic::superpotential(imp, j);
        const auto ops = ladder_matrices(w, detail::grid_for(cfg, slowest));
        const auto label = "magnetic:j=" + j.to_string();
        auto rows = detail::ladder_checks(ops, label, top + 2);
        rows.push_back({"hermiticity_defect", label, hermiticity_defect(w, ops.grid), 1e-14});
        for (int nb = 1; nb <= cfg.n_max; ++nb) {
            const double w2 = magnetic::susy_eigenvalue(imp, {j, nb});
            rows.push_back({"level", detail::level_label("magnetic", j, nb),
                            detail::rel_err(ops.partner1.eigenvalue(nb - 1), w2), 1e-3});
        }
        blocks.push_back(std::move(rows));
    }

    CommandResult res;
    res.table.columns = {"check", "level", "value", "tolerance", "passed"};
    int failures = 0;
    for (const auto& block : blocks)
        for (const auto& r : block) {
            res.table.rows.push_back({r.check, r.level, r.value, r.tolerance, r.passed()});
            if (!r.passed()) ++failures;
        }
    if (failures) {
        res.exit_code = exit_verification_failure;
        res.message = std::to_string(failures) + " check(s) exceeded tolerance";
    }
    return res;
}

// ---- oracle-compare -------------------------------------------------------

namespace detail {

struct CompareRow {
    std::string level;
    double closed_form;
    double matrix;
    std::optional<double> shooting;
    bool converged;
};

inline constexpr double kMatrixTolerance = 1e-4;
inline constexpr double kShootingTolerance = 1e-6;

/// Midpoints between neighbouring closed-form levels, clipped to the open interval (lo, hi).
inline std::pair<double, double> isolating_bracket(const std::vector<double>& levels, std::size_t i, double lo,
                                                   double hi) {
    const double margin = 1e-9 * (hi - lo);
    const double a = i == 0 ? lo + margin : 0.5 * (levels[i - 1] + levels[i]);
    const double b = i + 1 < levels.size() ? 0.5 * (levels[i] + levels[i + 1]) : hi - margin;
    return {a, b};
}

} // namespace detail

inline CommandResult cmd_oracle_compare(const RunConfig& cfg) {
    detail::check_common(cfg);
    const HalfInteger j = detail::parse_j(cfg);
    std::vector<std::function<detail::CompareRow()>> jobs;

    // Built-in sanity row: -u'' = E u on [r0, r0 + 1] with Dirichlet ends.
    jobs.emplace_back([&cfg] {
        const double r0 = 1e-3;
        const auto grid = RadialGrid::uniform(r0, r0 + 1.0, cfg.grid_points);
        const auto zero = [](double) { return 0.0; };
        const auto refined = oracle::refine_until(
            [&](const RadialGrid& g) { return oracle::schrodinger_eigen(zero, g, 1).front(); }, grid, cfg.tol,
            cfg.max_doublings);
        return detail::CompareRow{"box:k=1", std::numbers::pi * std::numbers::pi, refined.extrapolated, std::nullopt, refined.converged};
    });

    if (cfg.impurity == ImpurityKind::electric) {
        const auto imp = detail::electric_impurity(cfg);
        const auto rot = electric::classify(imp, j);
        if (rot.classification != electric::Criticality::subcritical) {
            CommandResult refusal;
            refusal.exit_code = exit_collapse_refusal;
            refusal.message = "refused: collapse regime, nu^2 = " + detail::format_short(rot.nu_sq);
            return refusal;
        }
        const int n0 = detail::first_electric_n(j);
        std::vector<double> levels;
        for (int n = n0; n <= cfg.n_max; ++n) levels.push_back(electric::bound_energy(imp, {j, n}).value);
        const double nu = rot.nu();
        for (int n = n0; n <= cfg.n_max; ++n) {
            jobs.emplace_back([&cfg, imp, j, n, n0, nu, levels] {
                const QuantumNumbers q{j, n};
                const double eps = levels[n - n0];
                const auto w = electric::superpotential(imp, q);
                const auto refined = oracle::refine_until(
                    [&](const RadialGrid& g) {
                        return oracle::factorized_level(ladder_matrices(w, g), PartnerSector::second, n - n0);
                    },
                    detail::grid_for(cfg, electric::decay_rate(eps)), cfg.tol, cfg.max_doublings);
                const double matrix_eps = nu * std::sqrt(1.0 + refined.extrapolated) / std::abs(j.value());
                const auto [lo, hi] = detail::isolating_bracket(levels, n - n0, 0.0, 1.0);
                const double shot = oracle::shoot_first_order(imp, j, lo, hi).value;
                return detail::CompareRow{detail::level_label("electric", j, n), eps, matrix_eps, shot,
                                          refined.converged};
            });
        }
    } else {
        const auto imp = detail::magnetic_impurity(cfg);
        std::vector<double> levels;
        for (int nb = 1; nb <= cfg.n_max; ++nb) levels.push_back(magnetic::bound_energy_gapped(imp, {j, nb}).value);
        const double top = std::sqrt(1.0 + imp.beta() * imp.beta());
        const auto w = magnetic::superpotential(imp, j);
        for (int nb = 1; nb <= cfg.n_max; ++nb) {
            jobs.emplace_back([&cfg, imp, j, nb, levels, top, w] {
                const double eps = levels[nb - 1];
                const auto refined = oracle::refine_until(
                    [&](const RadialGrid& g) {
                        return oracle::factorized_level(ladder_matrices(w, g), PartnerSector::first, nb - 1);
                    },
                    detail::grid_for(cfg, magnetic::decay_rate(imp, eps)), cfg.tol, cfg.max_doublings);
                const double matrix_eps = std::sqrt(1.0 + refined.extrapolated);
                const auto [lo, hi] = detail::isolating_bracket(levels, nb - 1, 1.0, top);
                const double shot = oracle::shoot_first_order(imp, j, lo, hi).value;
                return detail::CompareRow{detail::level_label("magnetic", j, nb), eps, matrix_eps, shot,
                                          refined.converged};
            });
        }
    }

    const auto rows = detail::ordered_parallel_map<detail::CompareRow>(
        static_cast<int>(jobs.size()), cfg.threads, [&jobs](int i) { return jobs[i](); });

    CommandResult res;
    res.table.columns = {"level",         "closed_form",       "matrix_oracle", "shooting_oracle",
                         "rel_err_matrix", "rel_err_shooting", "converged"};
    int failures = 0;
    for (const auto& r : rows) {
        const double em = detail::rel_err(r.matrix, r.closed_form);
        Cell shot, es;
        if (r.shooting) {
            shot = *r.shooting;
            const double e = detail::rel_err(*r.shooting, r.closed_form);
            es = e;
            if (e > detail::kShootingTolerance) ++failures;
        }
        if (em > detail::kMatrixTolerance) ++failures;
        res.table.rows.push_back({r.level, r.closed_form, r.matrix, shot, em, es, r.converged});
    }
    if (failures) {
        res.exit_code = exit_verification_failure;
        res.message = std::to_string(failures) + " comparison(s) outside tolerance";
    }
    return res;
}

} // namespace gsusy::cli
