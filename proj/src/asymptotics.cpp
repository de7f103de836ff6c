#include "bubblegap/asymptotics.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <tuple>

#include "bubblegap/errors.hpp"
#include "bubblegap/operators.hpp"
#include "bubblegap/parallel.hpp"
#include "bubblegap/solver.hpp"

namespace bubblegap {

CapacitanceValue capacitance(const BlochVector& alpha, double R, int N, const LatticeGreensEvaluator& greens,
                             RemainderMethod method) {
    if (!greens.is_static()) throw DomainError("capacitance needs the static Green's function");
    const CMatrix S = quasi_single_layer_matrix(greens, R, N, {method, 64});
    CVector chi = CVector::Zero(basis_size(N));
    chi(N) = 1.0;
    CapacitanceValue out;
    out.alpha = alpha;
    out.N = N;
    out.psi = S.partialPivLu().solve(chi);
    out.value = -kTwoPi * R * out.psi(N).real();
    out.psi_norm_sq = kTwoPi * R * out.psi.squaredNorm();
    return out;
}

CapacitanceValue capacitance(const BlochVector& alpha, const CrystalConfig& config) {
    const LatticeGreensEvaluator greens(0.0, alpha, config.ewald);
    return capacitance(alpha, config.R, config.N, greens, config.remainder);
}

double omega1_asymptotic(const BlochVector& alpha, const CrystalConfig& config) {
    const double cap = capacitance(alpha, config).value;
    return std::sqrt(config.delta() * cap / (kPi * config.R * config.R));
}

BandIntegralTable::BandIntegralTable(double alpha1, std::vector<double> omega_sq)
    : alpha1_(alpha1), omega_sq_(std::move(omega_sq)) {
    if (omega_sq_.empty()) throw DomainError("band integral table is empty");
    for (double w : omega_sq_)
        if (!(w >= 0.0)) throw DomainError("band integral table has a negative sample");
}

std::shared_ptr<const BandIntegralTable> BandIntegralTable::build(double alpha1, const CrystalConfig& config) {
    const int Q = config.Q;
    std::vector<double> w(static_cast<std::size_t>(Q));
    parallel_for(w.size(), [&](std::size_t q) {
        const double o = band_omega1(BlochVector(alpha1, kTwoPi * double(q) / Q), config).omega;
        w[q] = o * o;
    });
    return std::make_shared<const BandIntegralTable>(alpha1, std::move(w));
}

double BandIntegralTable::I(double omega) const {
    const double o2 = omega * omega;
    if (!(o2 > omega_sq_[static_cast<std::size_t>(std::max_element(omega_sq_.begin(), omega_sq_.end()) -
                                                  omega_sq_.begin())])) {
        throw SingularityError("band integral evaluated inside the first band");
    }
    double s = 0.0;
    for (double w : omega_sq_) s += w / (o2 - w);
    return s / double(omega_sq_.size());
}

Complex BandIntegralTable::I(Complex omega) const {
    const Complex o2 = omega * omega;
    Complex s = 0.0;
    for (double w : omega_sq_) s += w / (o2 - w);
    return s / double(omega_sq_.size());
}

double BandIntegralTable::omega0_sq() const {
    double s = 0.0;
    for (double w : omega_sq_) s += w;
    return s / double(omega_sq_.size());
}

double BandIntegralTable::band_max() const { return std::sqrt(*std::max_element(omega_sq_.begin(), omega_sq_.end())); }

std::shared_ptr<const BandIntegralTable> band_integral_table(double alpha1, const CrystalConfig& config) {
    using Key = std::tuple<double, double, double, int, int, double, int, int>;
    static std::mutex mutex;
    static std::map<Key, std::shared_ptr<const BandIntegralTable>> cache;
    const Key key{reduce_angle(alpha1), config.delta(), config.R, config.N, config.Q, config.ewald.split,
                  static_cast<int>(config.remainder), config.circle_points};
    {
        std::lock_guard<std::mutex> lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    auto table = BandIntegralTable::build(alpha1, config);
    std::lock_guard<std::mutex> lock(mutex);
    return cache.emplace(key, table).first->second;
}

double band_integral_I(double omega, double alpha1, const CrystalConfig& config) {
    return band_integral_table(alpha1, config)->I(omega);
}

namespace {

template <class T>
T dilute_lhs(T omega, T inv_I, const CrystalConfig& config) {
    const double R = config.R, Rd = config.R_d();
    return omega * omega * (R * R / (2.0 * config.delta())) * std::log(R / Rd) + (1.0 - R * R / (Rd * Rd)) + inv_I;
}

}  // namespace

double dilute_function(double omega, const BandIntegralTable& table, const CrystalConfig& config) {
    return dilute_lhs(omega, 1.0 / table.I(omega), config);
}

DiluteRoot dilute_defect_omega(double alpha1, const CrystalConfig& config) {
    return dilute_defect_omega(*band_integral_table(alpha1, config), config);
}

DiluteRoot dilute_defect_omega(const BandIntegralTable& table, const CrystalConfig& config) {
    if (!(config.R_d() < config.R)) throw NotFound("dilute defect equation has no root for R_d >= R");
    const double edge = table.band_max();
    auto F = [&](double w) { return dilute_function(w, table, config); };
    double lo = edge * (1.0 + 1e-12), hi = edge * 1.01;
    if (!(F(lo) < 0.0)) throw NotFound("dilute defect equation has no root above the band edge");
    for (int k = 0; k < 200 && !(F(hi) > 0.0); ++k) {
        lo = hi;
        hi *= 1.5;
    }
    if (!(F(hi) > 0.0)) throw NonConvergence("dilute defect equation: no sign change found", hi, F(hi));
    for (int k = 0; k < 200 && hi - lo > 1e-15 * hi; ++k) {
        const double m = 0.5 * (lo + hi);
        (F(m) > 0.0 ? hi : lo) = m;
    }
    double w = 0.5 * (lo + hi);
    auto Fc = [&](Complex z) { return dilute_lhs(z, 1.0 / table.I(z), config); };
    try {
        const double h = std::max(hi - lo, 1e-10 * w);
        const MullerResult r = muller_find_root(Fc, {w - h, w, w + h}, 1e-15, 30);
        if (std::abs(r.root.imag()) < 1e-12 && r.root.real() > edge && std::abs(F(r.root.real())) <= std::abs(F(w))) {
            w = r.root.real();
        }
    } catch (const NonConvergence&) {
    }
    const double I = table.I(w);
    return {w, std::abs(1.0 + (F(w) - 1.0 / I) * I)};
}

CriticalEpsilon critical_epsilon(const CrystalConfig& config) {
    CriticalEpsilon out;
    out.omega_star_global = band_omega1(BlochVector(kPi, kPi), config).omega;
    const auto table = band_integral_table(0.0, config);
    out.inverse_I = 1.0 / table->I(out.omega_star_global);
    const double R = config.R;
    const double target = out.inverse_I;
    auto lhs = [&](double Rd) { return R * R / (Rd * Rd) - std::log(Rd) / std::log(R); };
    double lo = R * 1e-6, hi = R;
    if (!(target > 0.0) || !(lhs(lo) > target)) throw ConfigError("critical perturbation equation is not bracketed");
    for (int k = 0; k < 200 && hi - lo > 1e-16 * R; ++k) {
        const double m = 0.5 * (lo + hi);
        (lhs(m) > target ? lo : hi) = m;
    }
    out.R_d = 0.5 * (lo + hi);
    out.epsilon = out.R_d - R;
    out.residual = std::abs(lhs(out.R_d) - target);
    return out;
}

SmallPerturbation small_perturbation_defect_omega(double alpha1, const CrystalConfig& config) {
    SmallPerturbation out;
    const BlochVector astar(alpha1, kPi);
    const CapacitanceValue cap = capacitance(astar, config);
    out.omega_star = band_edge_omega_star(alpha1, config);
    out.bracket = config.R * cap.psi_norm_sq - 2.0 * cap.value;
    if (config.epsilon == 0.0) {
        out.omega = out.omega_star;
        return out;
    }
    out.c_delta = curvature_c_delta(alpha1, config).c;
    const double R = config.R;
    const double t = config.delta() * config.epsilon * out.bracket / (kTwoPi * out.omega_star * R * R * R);
    out.correction = t * t / (2.0 * out.c_delta);
    out.omega = out.omega_star + out.correction;
    return out;
}

}  // namespace bubblegap
