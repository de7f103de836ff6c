#include "bubblegap/config.hpp"

#include <string>

#include "bubblegap/errors.hpp"
#include "bubblegap/specfun.hpp"

namespace bubblegap {

void CrystalConfig::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(name) + " must be positive");
    };
    positive(rho_b, "rho_b");
    positive(kappa_b, "kappa_b");
    positive(rho_w, "rho_w");
    positive(kappa_w, "kappa_w");
    const double d = delta();
    if (!(d > 0.0 && d < 1.0)) throw ConfigError("delta = rho_b/rho_w must lie in (0, 1)");
    const double vb = kappa_b / rho_b, vw = kappa_w / rho_w;
    if (std::abs(vb - vw) > 1e-12 * std::max(vb, vw)) {
        throw ConfigError("wave speeds differ: kappa_b/rho_b must equal kappa_w/rho_w");
    }
    if (std::abs(vw - 1.0) > 1e-12) throw ConfigError("wave speed must be 1 (kappa = rho)");
    if (!(R > 0.0 && R < 0.5)) throw ConfigError("R must lie in (0, 1/2)");
    if (!std::isfinite(epsilon) || !(R_d() > 0.0)) throw ConfigError("R + epsilon must be positive");
    if (N < 0 || N > specfun::kMaxTruncation) {
        throw ConfigError("N must lie in [0, " + std::to_string(specfun::kMaxTruncation) + "]");
    }
    if (Q < 2) throw ConfigError("Q must be at least 2");
    if (circle_points < 8) throw ConfigError("circle_points must be at least 8");
    if (!(ewald.split > 0.0)) throw ConfigError("ewald split parameter must be positive");
    if (!(tol.root > 0.0) || tol.max_iterations < 1) throw ConfigError("root tolerance must be positive");
    if (!(gap_cap_factor > 1.0)) throw ConfigError("gap_cap_factor must exceed 1");
}

}  // namespace bubblegap
