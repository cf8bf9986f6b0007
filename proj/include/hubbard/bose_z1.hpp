#pragma once
#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "hubbard/errors.hpp"
#include "hubbard/lattice.hpp"
#include "hubbard/parallel.hpp"
#include "hubbard/rk4.hpp"

namespace hubbard {

inline const double sqrt2 = std::numbers::sqrt2;

struct ModeFrequency {
    double omega_sq = 0.0;
    cplx omega;  // principal root, Im >= 0
    bool unstable() const { return omega_sq < 0.0; }
};

inline ModeFrequency omega_bose(double J, double U, double T) {
    double w2 = U * U - 6.0 * J * U * T + J * J * T * T;
    return {w2, std::sqrt(cplx(w2, 0.0))};
}

inline double j_critical(double U) { return U * (3.0 - std::sqrt(8.0)); }

// Per-mode correlators: f11 hole-hole, f12 hole-particle, f21 particle-hole, f22 particle-particle.
struct ModeCorrelators {
    cplx f11, f12, f21, f22;
};

struct BoseCorrelators {
    std::vector<ModeCorrelators> modes;
    double depletion = 0.0;  // f0 = f2, on-site hole (doublon) probability
    double time = 0.0;
};

// f11 (f11 + 1) - f12 f21, conserved by the first-order dynamics
inline cplx conserved_bilinear(const ModeCorrelators& m) { return m.f11 * (m.f11 + 1.0) - m.f12 * m.f21; }

// Per-mode one-body density matrix weight: b = h + sqrt2 p at unit filling.
inline cplx obdm_weight(const ModeCorrelators& m) { return m.f11 + 2.0 * m.f22 + sqrt2 * (m.f12 + m.f21); }

// (1 - cos wt)/w^2 and sin(wt)/w continued to w^2 <= 0
inline double versine_over_sq(double w2, double t) {
    double x = w2 * t * t;
    if (std::abs(x) < 1e-4) {
        double t2 = t * t;
        return t2 * (0.5 - x / 24.0 + x * x / 720.0 - x * x * x / 40320.0);
    }
    if (w2 > 0.0) {
        double w = std::sqrt(w2);
        return (1.0 - std::cos(w * t)) / w2;
    }
    double kappa = std::sqrt(-w2);
    return (std::cosh(kappa * t) - 1.0) / (-w2);
}

inline double sine_over_root(double w2, double t) {
    double x = w2 * t * t;
    if (std::abs(x) < 1e-4) return t * (1.0 - x / 6.0 + x * x / 120.0 - x * x * x / 5040.0);
    if (w2 > 0.0) {
        double w = std::sqrt(w2);
        return std::sin(w * t) / w;
    }
    double kappa = std::sqrt(-w2);
    return std::sinh(kappa * t) / kappa;
}

inline double mean_real_f11(const std::vector<ModeCorrelators>& modes) {
    double s = 0.0;
    for (const auto& m : modes) s += m.f11.real();
    return modes.empty() ? 0.0 : s / static_cast<double>(modes.size());
}

inline void require_mott(const LatticeSpec& spec) {
    if (spec.J >= j_critical(spec.U))
        throw domain_error("J must lie below the critical coupling U(3 - sqrt 8) for the Mott ground state");
}

inline BoseCorrelators ground_correlators(const LatticeSpec& spec, const MomentumGrid& grid) {
    require_mott(spec);
    BoseCorrelators out;
    out.modes.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double T = grid.structure(i);
        double A = spec.U - 3.0 * spec.J * T;
        double w = std::sqrt(omega_bose(spec.J, spec.U, T).omega_sq);
        double f11 = (A - w) / (2.0 * w);
        double f12 = sqrt2 * spec.J * T / w;
        out.modes[i] = {f11, f12, f12, f11};
    }
    out.depletion = mean_real_f11(out.modes);
    return out;
}

struct QuenchOptions {
    double saturation = 1e2;  // refuse superfluid times once any |f11| exceeds this
};

inline ModeCorrelators quench_mode(double J, double U, double T, double t) {
    double w2 = omega_bose(J, U, T).omega_sq;
    double vs = versine_over_sq(w2, t);
    double sn = sine_over_root(w2, t);
    double c = sqrt2 * J * T;
    double f11 = 4.0 * J * J * T * T * vs;
    cplx f12(c * (U - 3.0 * J * T) * vs, c * sn);
    return {f11, f12, std::conj(f12), f11};
}

inline BoseCorrelators quench_correlators(const LatticeSpec& spec, const MomentumGrid& grid, double t,
                                          QuenchOptions opt = {}) {
    if (t < 0.0) throw domain_error("quench time must be non-negative");
    BoseCorrelators out;
    out.time = t;
    out.modes.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out.modes[i] = quench_mode(spec.J, spec.U, grid.structure(i), t);
        if (std::abs(out.modes[i].f11) > opt.saturation)
            throw numeric_error("first-order correlators saturated; the 1/Z expansion no longer applies at this time");
    }
    out.depletion = mean_real_f11(out.modes);
    return out;
}

// Per-mode obdm weight 4 J U T (1 - cos wt)/w^2 after a sudden quench.
inline double quench_obdm_mode(double J, double U, double T, double t) {
    return 4.0 * J * U * T * versine_over_sq(omega_bose(J, U, T).omega_sq, t);
}

// <b+_mu b_nu> at separation s != 0 after a sudden quench.
inline double quench_obdm(const LatticeSpec& spec, const MomentumGrid& grid, double t, const Displacement& s) {
    std::vector<double> g(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) g[i] = quench_obdm_mode(spec.J, spec.U, grid.structure(i), t);
    return grid.fourier(g, s).real();
}

inline BoseCorrelators quasi_equilibrium(const LatticeSpec& spec, const MomentumGrid& grid) {
    require_mott(spec);
    BoseCorrelators out;
    out.time = std::numeric_limits<double>::infinity();
    out.modes.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double T = grid.structure(i);
        double w2 = omega_bose(spec.J, spec.U, T).omega_sq;
        double f11 = 4.0 * spec.J * spec.J * T * T / w2;
        double f12 = sqrt2 * spec.J * T * (spec.U - 3.0 * spec.J * T) / w2;
        out.modes[i] = {f11, f12, f12, f11};
    }
    out.depletion = mean_real_f11(out.modes);
    return out;
}

struct BoseRealSpace {
    cplx hh, hp, ph, pp, obdm;
};

// Correlators <x+_mu y_nu> with x_mu - x_nu = s; valid only for s != 0.
inline BoseRealSpace real_space(const BoseCorrelators& c, const MomentumGrid& grid, const Displacement& s) {
    if (std::all_of(s.begin(), s.end(), [](int v) { return v == 0; }))
        throw domain_error("real-space correlators are defined for distinct sites; use the depletion on-site");
    auto wave = grid.plane_wave(s);
    BoseRealSpace r{};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& m = c.modes[i];
        r.hh += m.f11 * wave[i];
        r.hp += m.f12 * wave[i];
        r.ph += m.f21 * wave[i];
        r.pp += m.f22 * wave[i];
        r.obdm += obdm_weight(m) * wave[i];
    }
    double w = grid.weight();
    return {r.hh * w, r.hp * w, r.ph * w, r.pp * w, r.obdm * w};
}

// P(k) = (1/N)[1 + g_{-k} - mean(g)] from the per-mode obdm weights, unit filling on-site.
inline std::vector<double> momentum_distribution(const BoseCorrelators& c, const MomentumGrid& grid) {
    std::vector<cplx> g(grid.size());
    cplx mean = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        g[i] = obdm_weight(c.modes[i]);
        mean += g[i];
    }
    mean *= grid.weight();
    std::vector<double> p(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        p[i] = grid.weight() * (1.0 + g[grid.negated(i)] - mean).real();
    return p;
}

// P(k) = (1/N) sum_r exp(i k.r) G(r) for an obdm tabulated per displacement site index r.
inline std::vector<double> momentum_distribution(const std::vector<cplx>& obdm_by_displacement,
                                                 const MomentumGrid& grid) {
    std::vector<double> p(grid.size(), 0.0);
    for (std::size_t r = 0; r < grid.size(); ++r) {
        auto x = site_coords(grid.extent(), r);
        auto wave = grid.plane_wave(x);
        for (std::size_t i = 0; i < grid.size(); ++i) p[i] += (wave[i] * obdm_by_displacement[r]).real();
    }
    for (auto& v : p) v *= grid.weight();
    return p;
}

inline double effective_temperature(double depletion, double U) {
    if (!(depletion > 0.0) || depletion >= 0.5)
        throw domain_error("effective temperature needs a depletion strictly between 0 and 1/2");
    return 0.5 * U / std::log(1.0 / (2.0 * depletion));
}

inline double effective_temperature(const LatticeSpec& spec, const MomentumGrid& grid) {
    return effective_temperature(quasi_equilibrium(spec, grid).depletion, spec.U);
}

struct OnsiteOccupation {
    double p0, p1, p2;
};

// Grand-canonical single-site occupations at chemical potential U/2, truncated to n <= 2.
inline OnsiteOccupation thermal_onsite(double beta, double U) {
    if (!(beta * U > 0.0)) throw domain_error("beta U must be positive");
    double e = std::exp(-0.5 * beta * U);
    return {0.5 * e, 1.0 - e, 0.5 * e};
}

// <h+_mu p_nu> in the thermal state to first order; <h+h> and <p+p> vanish at this order.
inline cplx thermal_correlator_first_order(const LatticeSpec& spec, std::size_t mu, std::size_t nu) {
    if (mu == nu) throw domain_error("thermal correlator is defined for distinct sites");
    auto nb = neighbors(spec, mu);
    double t = std::find(nb.begin(), nb.end(), nu) != nb.end() ? 1.0 : 0.0;
    return sqrt2 * spec.J * t / (spec.coordination() * spec.U);
}

using HoppingRamp = std::function<double(double)>;

inline HoppingRamp sudden_ramp(double J) {
    return [J](double t) { return t >= 0.0 ? J : 0.0; };
}

// J sin^2(pi t / 2 duration) up to the duration, constant afterwards.
inline HoppingRamp smooth_ramp(double J, double duration) {
    return [J, duration](double t) {
        if (t <= 0.0) return 0.0;
        if (t >= duration) return J;
        double s = std::sin(0.5 * std::numbers::pi * t / duration);
        return J * s * s;
    };
}

struct EvolveOptions {
    double dt = 1e-3;
    double drift_tolerance = 1e-8;  // absolute drift of the conserved bilinear per mode
    double saturation = 1e2;
};

struct EvolveResult {
    BoseCorrelators state;
    double max_drift = 0.0;
};

// Right-hand side of the first-order mode equations; y = (f11, f12, f21, f22).
inline Eigen::Vector4cd bose_mode_rhs(double J, double U, double T, const Eigen::Vector4cd& y) {
    const cplx I(0.0, 1.0);
    double A = U - 3.0 * J * T;
    double c = sqrt2 * J * T;
    cplx src = c * (y[0] + y[3] + 1.0);
    cplx df11 = c * (y[1] - y[2]);
    Eigen::Vector4cd d;
    d << -I * df11, -I * (A * y[1] - src), -I * (-A * y[2] + src), -I * df11;
    return d;
}

inline EvolveResult evolve_z1(const LatticeSpec& spec, const MomentumGrid& grid, const BoseCorrelators& initial,
                              const HoppingRamp& hopping, double t_final, EvolveOptions opt = {}) {
    if (!(opt.dt > 0.0)) throw domain_error("dt must be positive");
    if (initial.modes.size() != grid.size()) throw domain_error("initial correlators do not match the grid");
    EvolveResult res;
    res.state.time = t_final;
    res.state.modes.resize(grid.size());
    std::vector<double> drift(grid.size(), 0.0);
    parallel_for(grid.size(), [&](std::size_t i) {
        double T = grid.structure(i);
        const auto& m0 = initial.modes[i];
        Eigen::Vector4cd y;
        y << m0.f11, m0.f12, m0.f21, m0.f22;
        cplx inv0 = conserved_bilinear(m0);
        double worst = 0.0;
        auto rhs = [&](double t, const Eigen::Vector4cd& v) { return bose_mode_rhs(hopping(t), spec.U, T, v); };
        y = rk4_integrate(y, initial.time, t_final, opt.dt, rhs, [&](double, const Eigen::Vector4cd& v) {
            if (std::abs(v[0]) > opt.saturation)
                throw numeric_error("first-order correlators saturated during evolution");
            worst = std::max(worst, std::abs(conserved_bilinear({v[0], v[1], v[2], v[3]}) - inv0));
        });
        res.state.modes[i] = {y[0], y[1], y[2], y[3]};
        drift[i] = worst;
    });
    res.max_drift = *std::max_element(drift.begin(), drift.end());
    if (res.max_drift > opt.drift_tolerance)
        throw numeric_error("conserved bilinear drifted beyond tolerance; reduce dt");
    double d_f11 = mean_real_f11(res.state.modes) - mean_real_f11(initial.modes);
    res.state.depletion = initial.depletion + d_f11;
    return res;
}

// Mott state with all correlators zero.
inline BoseCorrelators mott_state(const MomentumGrid& grid) {
    BoseCorrelators c;
    c.modes.assign(grid.size(), ModeCorrelators{});
    return c;
}

}  // namespace hubbard
