#include "run_config.hpp"

#include <fstream>
#include <set>

#include "bubblegap/errors.hpp"

namespace bubblegap::cli {
namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

template <class T>
void read(const json& obj, const char* key, T& out) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("key '") + key + "' has the wrong type");
    }
}

}  // namespace

OutputFormat parse_format(const std::string& name) {
    if (name == "csv") return OutputFormat::Csv;
    if (name == "json") return OutputFormat::Json;
    throw ConfigError("unknown output format '" + name + "' (expected csv or json)");
}

RunConfig parse_run_config(const json& doc) {
    check_keys(doc,
               {"rho_b", "kappa_b", "rho_w", "kappa_w", "R", "epsilon", "epsilon_rel", "N", "Q", "circle_points",
                "remainder", "ewald_split", "gap_cap_factor", "alpha1_points", "alpha2_points", "second_band",
                "tolerances", "eps0", "format", "description"},
               "config");
    RunConfig rc;
    CrystalConfig& c = rc.crystal;
    read(doc, "rho_b", c.rho_b);
    read(doc, "kappa_b", c.kappa_b);
    read(doc, "rho_w", c.rho_w);
    read(doc, "kappa_w", c.kappa_w);
    read(doc, "R", c.R);
    if (doc.contains("epsilon") && doc.contains("epsilon_rel")) {
        throw ConfigError("give either epsilon or epsilon_rel, not both");
    }
    read(doc, "epsilon", c.epsilon);
    if (doc.contains("epsilon_rel")) {
        double rel = 0.0;
        read(doc, "epsilon_rel", rel);
        c.epsilon = rel * c.R;
    }
    read(doc, "N", c.N);
    read(doc, "Q", c.Q);
    read(doc, "circle_points", c.circle_points);
    read(doc, "ewald_split", c.ewald.split);
    read(doc, "gap_cap_factor", c.gap_cap_factor);
    if (doc.contains("remainder")) {
        std::string m;
        read(doc, "remainder", m);
        if (m == "lattice-sum") {
            c.remainder = RemainderMethod::LatticeSum;
        } else if (m == "quadrature") {
            c.remainder = RemainderMethod::Quadrature;
        } else {
            throw ConfigError("remainder must be 'lattice-sum' or 'quadrature'");
        }
    }
    if (doc.contains("tolerances")) {
        const json& t = doc.at("tolerances");
        check_keys(t, {"root", "max_iterations", "imag_part", "singular_value"}, "tolerances");
        read(t, "root", c.tol.root);
        read(t, "max_iterations", c.tol.max_iterations);
        read(t, "imag_part", c.tol.imag_part);
        read(t, "singular_value", c.tol.singular_value);
    }
    read(doc, "alpha1_points", rc.alpha1_points);
    read(doc, "alpha2_points", rc.alpha2_points);
    read(doc, "second_band", rc.second_band);
    if (doc.contains("eps0")) {
        const json& e = doc.at("eps0");
        check_keys(e, {"radii"}, "eps0");
        read(e, "radii", rc.eps0_radii);
    }
    if (doc.contains("format")) {
        std::string f;
        read(doc, "format", f);
        rc.format = parse_format(f);
    }
    if (rc.alpha1_points < 2 || rc.alpha2_points < 2) throw ConfigError("grid sizes must be at least 2");
    if (rc.eps0_radii.empty()) throw ConfigError("eps0.radii must not be empty");
    for (double r : rc.eps0_radii) {
        if (!(r > 0.0 && r < 0.5)) throw ConfigError("eps0.radii entries must lie in (0, 1/2)");
    }
    c.validate();
    return rc;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ConfigError("invalid JSON in '" + path + "': " + e.what());
    }
    return parse_run_config(doc);
}

}  // namespace bubblegap::cli
