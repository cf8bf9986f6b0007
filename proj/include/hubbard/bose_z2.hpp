#pragma once
#include <cmath>
#include <functional>
#include <vector>

#include "hubbard/bose_z1.hpp"

namespace hubbard {

// First-order frequency with J replaced by J (1 - 3 f0).
inline ModeFrequency omega_renormalized(const LatticeSpec& spec, double f0, double T) {
    if (!(f0 >= 0.0) || f0 >= 1.0 / 3.0)
        throw domain_error("depletion must satisfy 0 <= f0 < 1/3 for the renormalised frequency");
    return omega_bose(spec.J * (1.0 - 3.0 * f0), spec.U, T);
}

inline double j_critical_renormalized(double U, double f0) {
    if (!(f0 >= 0.0) || f0 >= 1.0 / 3.0)
        throw domain_error("depletion must satisfy 0 <= f0 < 1/3 for the renormalised critical coupling");
    return U * (3.0 - 2.0 * std::sqrt(2.0)) / (1.0 - 3.0 * f0);
}

// Renormalised dispersion over a grid, with f0 taken from the first-order ground state.
inline std::vector<double> omega_renormalized_sq(const LatticeSpec& spec, const MomentumGrid& grid) {
    double f0 = ground_correlators(spec, grid).depletion;
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] = omega_renormalized(spec, f0, grid.structure(i)).omega_sq;
    return out;
}

struct PairCorrelation {
    double number = 0.0;  // <n_mu n_nu> - 1
    double parity = 0.0;  // connected (-1)^n correlator
    double time = 0.0;
};

inline constexpr double imaginary_residue_tolerance = 1e-10;

namespace detail {
struct SingleSums {
    cplx f11, f12, f21;
};

// The double momentum sums factorise into products of single Fourier sums.
inline SingleSums single_sums(const BoseCorrelators& c, const MomentumGrid& grid, const Displacement& s) {
    auto wave = grid.plane_wave(s);
    SingleSums r{};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        r.f11 += c.modes[i].f11 * wave[i];
        r.f12 += c.modes[i].f12 * wave[i];
        r.f21 += c.modes[i].f21 * wave[i];
    }
    double w = grid.weight();
    return {r.f11 * w, r.f12 * w, r.f21 * w};
}

inline double checked_real(cplx v) {
    if (std::abs(v.imag()) > imaginary_residue_tolerance * std::max(1.0, std::abs(v.real())))
        throw numeric_error("pair correlation acquired an imaginary residue");
    return v.real();
}
}  // namespace detail

inline double number_correlation(const BoseCorrelators& c, const MomentumGrid& grid, const Displacement& s) {
    auto q = detail::single_sums(c, grid, s);
    return detail::checked_real(2.0 * (q.f11 * q.f11 - q.f12 * q.f21));
}

inline double parity_correlation(const BoseCorrelators& c, const MomentumGrid& grid, const Displacement& s) {
    auto q = detail::single_sums(c, grid, s);
    return detail::checked_real(8.0 * (q.f11 * q.f11 + q.f12 * q.f21));
}

inline PairCorrelation pair_correlation(const BoseCorrelators& c, const MomentumGrid& grid, const Displacement& s) {
    return {number_correlation(c, grid, s), parity_correlation(c, grid, s), c.time};
}

// Nearest-neighbour parity correlator through quartic order in J for filling n.
inline double parity_series(int n, int Z, double J_over_U) {
    double x = J_over_U / Z;
    double nn = n * (n + 1.0);
    double quartic = 2.0 * nn / 3.0 * (nn * (70.0 - 208.0 * Z + 48.0 * Z * Z) + 4.0 - 22.0 * Z + 9.0 * Z * Z);
    return x * x * 8.0 * nn + x * x * x * x * quartic;
}

// Coefficient of (J/U)^4 in parity_series.
inline double parity_series_quartic(int n, int Z) {
    double nn = n * (n + 1.0);
    return 2.0 * nn / 3.0 * (nn * (70.0 - 208.0 * Z + 48.0 * Z * Z) + 4.0 - 22.0 * Z + 9.0 * Z * Z) /
           std::pow(static_cast<double>(Z), 4);
}

// Golden-section search for the maximum of f on [a, b].
inline double golden_section_max(const std::function<double(double)>& f, double a, double b, double tol = 1e-8) {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

// Location of the largest first-order ground-state parity correlation at separation s.
inline double parity_maximum_coupling(const LatticeSpec& spec, const MomentumGrid& grid, const Displacement& s) {
    double jc = j_critical(spec.U);
    auto f = [&](double J) { return parity_correlation(ground_correlators(with_hopping(spec, J), grid), grid, s); };
    return golden_section_max(f, 1e-6 * jc, (1.0 - 1e-6) * jc);
}

// Group velocity of the first-order Bose mode.
inline Wavevector group_velocity(const LatticeSpec& spec, const Wavevector& k) {
    double T = structure_factor(spec, k);
    double w2 = omega_bose(spec.J, spec.U, T).omega_sq;
    if (w2 <= 0.0) throw domain_error("group velocity needs a real, non-zero mode frequency");
    double scale = (spec.J * spec.J * T - 3.0 * spec.J * spec.U) / std::sqrt(w2);
    auto g = structure_gradient(k);
    for (auto& v : g) v *= scale;
    return g;
}

struct LightCone {
    bool inside = false;
    double v_max = 0.0;
};

inline double norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

inline LightCone light_cone(const LatticeSpec& spec, const MomentumGrid& grid, double t, const Displacement& s) {
    if (!(t > 0.0)) throw domain_error("light cone needs t > 0");
    double vmax = 0.0;
    for (const auto& k : grid.points()) vmax = std::max(vmax, norm(group_velocity(spec, k)));
    double dist = 0.0;
    for (int v : s) dist += double(v) * v;
    dist = std::sqrt(dist);
    return {dist <= vmax * t, vmax};
}

}  // namespace hubbard
