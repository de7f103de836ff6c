#include "commands.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>

#include "bubblegap/asymptotics.hpp"
#include "bubblegap/errors.hpp"
#include "bubblegap/parallel.hpp"
#include "bubblegap/solver.hpp"

namespace bubblegap::cli {
namespace {

using nlohmann::json;

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
json num(const std::optional<double>& v) { return v ? num(*v) : json(nullptr); }

std::vector<double> closed_grid(int n) { return uniform_alpha1_grid(n); }

}  // namespace

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string to_csv(const Table& table) {
    std::ostringstream os;
    for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            const json& c = row[i];
            if (c.is_number()) {
                os << format_number(c.get<double>());
            } else if (c.is_string()) {
                std::string s = c.get<std::string>();
                if (s.find_first_of(",\"\n") != std::string::npos) {
                    std::string q = "\"";
                    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
                    s = q + "\"";
                }
                os << s;
            } else if (c.is_boolean()) {
                os << (c.get<bool>() ? "true" : "false");
            }
        }
        os << '\n';
    }
    return os.str();
}

json to_json(const std::string& command, const CommandResult& result) {
    json rows = json::array();
    for (const auto& row : result.table.rows) {
        json r = json::object();
        for (std::size_t i = 0; i < row.size() && i < result.table.columns.size(); ++i) r[result.table.columns[i]] = row[i];
        rows.push_back(r);
    }
    return {{"command", command},
            {"columns", result.table.columns},
            {"rows", rows},
            {"summary", result.summary},
            {"exit_code", result.exit_code}};
}

CommandResult cmd_band(const RunConfig& rc) {
    const CrystalConfig& c = rc.crystal;
    const std::vector<double> a1 = closed_grid(rc.alpha1_points), a2 = closed_grid(rc.alpha2_points);
    const std::size_t n = a1.size() * a2.size();
    struct Row {
        BandPoint w1;
        std::optional<BandPoint> w2;
        bool ok = true;
        std::string note;
    };
    std::vector<Row> rows(n);
    double cap = 0.0;
    if (rc.second_band) cap = c.gap_cap_factor * band_omega1(BlochVector(kPi, kPi), c).omega;
    parallel_for(n, [&](std::size_t k) {
        const BlochVector alpha(a1[k / a2.size()], a2[k % a2.size()]);
        Row& r = rows[k];
        try {
            r.w1 = band_omega1(alpha, c);
            if (rc.second_band) {
                const double from = std::max(r.w1.omega * (1.0 + 1e-3), 1e-3 * cap);
                r.w2 = band_omega2(alpha, c, from, cap);
                if (!r.w2) r.note = "no second band frequency below the cap";
            }
        } catch (const Error& e) {
            r.ok = false;
            r.note = e.what();
        }
    });
    CommandResult res;
    res.table.columns = {"alpha1", "alpha2", "omega1", "residual1"};
    if (rc.second_band) {
        res.table.columns.push_back("omega2");
        res.table.columns.push_back("residual2");
    }
    res.table.columns.push_back("status");
    res.table.columns.push_back("note");
    int failed = 0;
    double wmax = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const Row& r = rows[k];
        std::vector<json> row{num(a1[k / a2.size()]), num(a2[k % a2.size()])};
        row.push_back(r.ok ? num(r.w1.omega) : json(nullptr));
        row.push_back(r.ok ? num(r.w1.residual) : json(nullptr));
        if (rc.second_band) {
            row.push_back(r.w2 ? num(r.w2->omega) : json(nullptr));
            row.push_back(r.w2 ? num(r.w2->residual) : json(nullptr));
        }
        row.push_back(r.ok ? "ok" : "failed");
        row.push_back(r.note);
        res.table.rows.push_back(std::move(row));
        if (!r.ok) ++failed;
        if (r.ok) wmax = std::max(wmax, r.w1.omega);
    }
    res.summary = {{"points", n}, {"failed", failed}, {"omega1_max", wmax}};
    res.message = "band: " + std::to_string(n) + " points, " + std::to_string(failed) +
                  " failed, max omega1 = " + format_number(wmax);
    res.exit_code = failed ? kExitPartial : kExitOk;
    return res;
}

CommandResult cmd_defect_band(const RunConfig& rc) {
    const CrystalConfig& c = rc.crystal;
    if (c.epsilon == 0.0) throw ConfigError("defect-band needs a nonzero epsilon");
    const std::vector<double> grid = closed_grid(rc.alpha1_points);
    const DefectBand band = defect_band(c, grid);
    CommandResult res;
    res.table.columns = {"alpha1", "omega_operator", "residual", "omega_dilute", "gap_lower", "gap_upper",
                         "extra_sign_changes", "status", "note"};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const BandSample& s = band.curve.samples[i];
        const DefectResult& p = band.points[i];
        res.table.rows.push_back({num(s.alpha1), s.ok ? num(s.omega) : json(nullptr), s.ok ? num(s.residual) : json(nullptr),
                                  num(band.dilute[i]), num(p.gap.lower), num(p.gap.upper), p.extra_sign_changes,
                                  s.ok ? "ok" : "failed", s.note});
    }
    const double lo = band.curve.min_omega(), hi = band.curve.max_omega();
    const bool inside = !band.curve.partial && lo > band.band_maximum;
    res.summary = {{"defect_min", num(lo)},
                   {"defect_max", num(hi)},
                   {"argmin_alpha1", num(band.curve.argmin_alpha1())},
                   {"first_band_max", num(band.band_maximum)},
                   {"entirely_above_first_band", inside},
                   {"partial", band.curve.partial}};
    res.message = "defect band: min " + format_number(lo) + " at alpha1 = " + format_number(band.curve.argmin_alpha1()) +
                  ", max " + format_number(hi) + "; first band max " + format_number(band.band_maximum) +
                  "; entirely above first band: " + (inside ? "yes" : "no") +
                  (band.curve.partial ? " (partial: some alpha1 failed)" : "");
    res.exit_code = band.curve.partial ? kExitPartial : kExitOk;
    return res;
}

CommandResult cmd_eps0(const RunConfig& rc) {
    CommandResult res;
    res.table.columns = {"R", "eps0_asymptotic", "eps0_operator", "eps0_asymptotic_rel", "eps0_operator_rel",
                         "residual_asymptotic", "residual_operator", "status", "note"};
    int failed = 0;
    for (double R : rc.eps0_radii) {
        CrystalConfig c = rc.crystal;
        c.R = R;
        c.epsilon = 0.0;
        std::optional<CriticalEpsilon> asym;
        std::optional<OperatorCriticalEpsilon> op;
        std::string note;
        try {
            c.validate();
            asym = critical_epsilon(c);
            op = operator_critical_epsilon(c);
        } catch (const Error& e) {
            note = e.what();
        }
        const bool ok = asym && op;
        if (!ok) ++failed;
        res.table.rows.push_back({num(R), asym ? num(asym->epsilon) : json(nullptr), op ? num(op->epsilon) : json(nullptr),
                                  asym ? num(asym->epsilon / R) : json(nullptr), op ? num(op->epsilon / R) : json(nullptr),
                                  asym ? num(asym->residual) : json(nullptr), op ? num(op->residual) : json(nullptr),
                                  ok ? "ok" : "failed", note});
    }
    res.summary = {{"radii", rc.eps0_radii.size()}, {"failed", failed}};
    res.message = "eps0: " + std::to_string(rc.eps0_radii.size()) + " radii, " + std::to_string(failed) + " failed";
    res.exit_code = failed ? kExitPartial : kExitOk;
    return res;
}

CommandResult cmd_validate(const RunConfig& rc) {
    const auto checks = run_validation_checks(rc.crystal);
    CommandResult res;
    res.table.columns = {"check", "value", "threshold", "result", "detail"};
    std::string failing;
    for (const auto& ch : checks) {
        res.table.rows.push_back({ch.name, num(ch.value), num(ch.threshold), ch.passed ? "pass" : "fail", ch.detail});
        if (!ch.passed) failing += (failing.empty() ? "" : ", ") + ch.name;
    }
    res.summary = {{"checks", checks.size()}, {"failed", failing}};
    res.exit_code = failing.empty() ? kExitOk : kExitValidationFailure;
    res.message = failing.empty() ? "validate: all " + std::to_string(checks.size()) + " checks passed"
                                  : "validate: failed checks: " + failing;
    return res;
}

CommandResult cmd_validate_greens(const RunConfig& rc) {
    CommandResult res;
    res.table = greens_discrepancy_table(rc.crystal);
    double worst = 0.0;
    for (const auto& row : res.table.rows) {
        const json& v = row.back();
        worst = v.is_number() ? std::max(worst, v.get<double>()) : std::numeric_limits<double>::infinity();
    }
    res.summary = {{"max_discrepancy", num(worst)}, {"threshold", 1e-8}};
    res.exit_code = worst < 1e-8 ? kExitOk : kExitValidationFailure;
    res.message = "validate-greens: max cross-method discrepancy " + format_number(worst);
    return res;
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Subwavelength band and line-defect solver for bubbly crystals", "bubblegap"};
    app.require_subcommand(1);
    std::string config_path, out_path, format;
    struct Spec {
        const char* name;
        const char* help;
        CommandResult (*fn)(const RunConfig&);
    };
    const std::vector<Spec> specs{
        {"band", "First (and optionally second) band over an alpha grid", cmd_band},
        {"defect-band", "Defect band over the alpha1 grid, operator and dilute values", cmd_defect_band},
        {"eps0", "Critical perturbation size per radius", cmd_eps0},
        {"validate", "Cross-method and structural checks", cmd_validate},
        {"validate-greens", "Per-point Green's function discrepancies", cmd_validate_greens},
    };
    std::vector<CLI::App*> subs;
    for (const auto& s : specs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        sub->add_option("--config", config_path, "JSON configuration file")->required();
        sub->add_option("--out", out_path, "Output file")->required();
        sub->add_option("--format", format, "csv or json");
        subs.push_back(sub);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfigError;
    }
    std::size_t which = 0;
    for (; which < subs.size(); ++which)
        if (subs[which]->parsed()) break;
    const Spec& spec = specs[which];

    RunConfig rc;
    try {
        rc = load_run_config(config_path);
        if (!format.empty()) rc.format = parse_format(format);
        rc.out_path = out_path;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfigError;
    }

    CommandResult result;
    try {
        result = spec.fn(rc);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitPartial;
    }

    std::ofstream file(rc.out_path);
    if (!file) {
        err << "config error: cannot write '" << rc.out_path << "'\n";
        return kExitConfigError;
    }
    if (rc.format == OutputFormat::Csv) {
        file << to_csv(result.table);
    } else {
        file << to_json(spec.name, result).dump(2) << '\n';
    }
    if (!result.message.empty()) out << result.message << '\n';
    return result.exit_code;
}

}  // namespace bubblegap::cli
