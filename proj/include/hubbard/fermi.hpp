#pragma once
#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "hubbard/bose_tilt.hpp"
#include "hubbard/bose_z1.hpp"
#include "hubbard/errors.hpp"
#include "hubbard/lattice.hpp"
#include "hubbard/parallel.hpp"
#include "hubbard/rk4.hpp"

// Charge modes of the half-filled Fermi-Hubbard model on the Neel background.
// Per mode k the sourced correlators are
//   d = f^{1B1B}, a = f^{0A0A} = -d, b = f^{0A1B}, c = f^{1B0A}.
namespace hubbard {

inline double omega_fermi(double J, double U, double T) {
    if (!(U > 0.0)) throw domain_error("fermionic frequency needs U > 0");
    return std::sqrt(U * U + 4.0 * J * J * T * T);
}

struct SoftHardModes {
    double soft = 0.0;  // small root, about -J^2 T^2 / U
    double hard = 0.0;  // about U
};

inline SoftHardModes soft_hard_modes(double J, double U, double T) {
    double w = omega_fermi(J, U, T);
    // soft root written without cancellation
    double soft = -4.0 * J * J * T * T / (2.0 * (U + w));
    return {soft, 0.5 * (U + w)};
}

struct FermiModeCorrelators {
    cplx f0A0A, f0A1B, f1B0A, f1B1B;
};

struct FermiCorrelators {
    std::vector<FermiModeCorrelators> modes;
    double double_occupancy = 0.0;  // <n_up n_down>
    double empty_occupancy = 0.0;   // <(1-n_up)(1-n_down)>
    double time = 0.0;
};

inline cplx conserved_fermi_bilinear(const FermiModeCorrelators& m) {
    return (m.f1B1B - 1.0) * m.f1B1B + m.f0A1B * m.f1B0A;
}

namespace detail {
inline void fill_occupancies(FermiCorrelators& c) {
    double d = 0.0, e = 0.0;
    for (const auto& m : c.modes) {
        d += m.f1B1B.real();
        e -= m.f0A0A.real();
    }
    double n = static_cast<double>(std::max<std::size_t>(c.modes.size(), 1));
    c.double_occupancy = d / n;
    c.empty_occupancy = e / n;
}
}  // namespace detail

// Periodic hypercubic lattices are bipartite when every extent is even; open ones always are.
inline bool is_bipartite(const LatticeSpec& spec) {
    if (spec.boundary == Boundary::open) return true;
    return std::all_of(spec.extent.begin(), spec.extent.end(), [](int L) { return L % 2 == 0; });
}

inline void require_bipartite(const LatticeSpec& spec) {
    if (!is_bipartite(spec)) throw domain_error("the Neel reference state needs a bipartite lattice (even periodic extents)");
}

inline FermiCorrelators ground_correlators_fermi(const LatticeSpec& spec, const MomentumGrid& grid) {
    spec.validate();
    require_bipartite(spec);
    FermiCorrelators out;
    out.modes.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double T = grid.structure(i);
        double w = omega_fermi(spec.J, spec.U, T);
        // 1/2 (1 - U/w) = 2 J^2 T^2 / (w (w + U))
        double d = 2.0 * spec.J * spec.J * T * T / (w * (w + spec.U));
        double c = spec.J * T / w;
        out.modes[i] = {-d, c, c, d};
    }
    detail::fill_occupancies(out);
    return out;
}

inline FermiModeCorrelators quench_mode_fermi(double J, double U, double T, double t) {
    double w = omega_fermi(J, U, T);
    double vs = versine_over_sq(w * w, t);
    double d = 2.0 * J * J * T * T * vs;
    cplx c(J * T * U * vs, -J * T * std::sin(w * t) / w);
    return {-d, std::conj(c), c, d};
}

inline FermiCorrelators quench_correlators_fermi(const LatticeSpec& spec, const MomentumGrid& grid, double t) {
    if (t < 0.0) throw domain_error("quench time must be non-negative");
    spec.validate();
    require_bipartite(spec);
    FermiCorrelators out;
    out.time = t;
    out.modes.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) out.modes[i] = quench_mode_fermi(spec.J, spec.U, grid.structure(i), t);
    detail::fill_occupancies(out);
    return out;
}

// Long-time average of the quench with the oscillating terms dropped.
inline FermiCorrelators quasi_equilibrium_fermi(const LatticeSpec& spec, const MomentumGrid& grid) {
    spec.validate();
    require_bipartite(spec);
    FermiCorrelators out;
    out.modes.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double T = grid.structure(i);
        double w2 = std::pow(omega_fermi(spec.J, spec.U, T), 2);
        double d = 2.0 * spec.J * spec.J * T * T / w2;
        double c = spec.J * T * spec.U / w2;
        out.modes[i] = {-d, c, c, d};
    }
    detail::fill_occupancies(out);
    return out;
}

inline FermiCorrelators neel_state(const MomentumGrid& grid) {
    FermiCorrelators out;
    out.modes.assign(grid.size(), FermiModeCorrelators{});
    return out;
}

// Real-space correlator at displacement s from the per-mode values.
inline cplx fermi_real_space(const FermiCorrelators& c, const MomentumGrid& grid, const Displacement& s,
                             cplx FermiModeCorrelators::*field) {
    std::vector<cplx> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = c.modes[i].*field;
    return grid.fourier(v, s);
}

struct StaggeredModes {
    SoftHardModes soft;
    double charge = 0.0;
};

inline StaggeredModes staggered_frequencies(double J, double U, double a, double T) {
    if (a < 0.0) throw domain_error("staggered amplitude must be non-negative");
    if (!(U > 0.0)) throw domain_error("fermionic frequency needs U > 0");
    double r = std::sqrt(4.0 * J * J * T * T + (U - a) * (U - a));
    return {{0.5 * (U + a - r), 0.5 * (U + a + r)}, std::sqrt(4.0 * J * J * T * T + (U + a) * (U + a))};
}

// Sublattice labels follow the parity of the coordinate sum (checkerboard).
struct StaggeredField {
    double a = 0.0;
    std::vector<int> sublattice;  // 0 = A, 1 = B

    static StaggeredField checkerboard(const LatticeSpec& spec, double a) {
        if (a < 0.0) throw domain_error("staggered amplitude must be non-negative");
        require_bipartite(spec);
        StaggeredField f{a, {}};
        f.sublattice.resize(spec.sites());
        for (std::size_t i = 0; i < spec.sites(); ++i) {
            int sum = 0;
            for (int x : site_coords(spec.extent, i)) sum += x;
            f.sublattice[i] = sum % 2;
        }
        return f;
    }

    // True when every bond joins A to B.
    bool consistent_with(const LatticeSpec& spec) const {
        for (auto [i, j] : bonds(spec))
            if (sublattice[i] == sublattice[j]) return false;
        return true;
    }
};

struct FermiEvolveOptions {
    double dt = 1e-3;
    double drift_tolerance = 1e-8;
};

struct FermiEvolveResult {
    FermiCorrelators state;
    double max_drift = 0.0;      // largest change of the conserved bilinear over all modes
    double max_sourceless = 0.0; // largest sourceless correlator reached (stays zero at half filling)
    double max_f1B1B = 0.0;
    double min_f1B1B = 0.0;
};

// Per-mode state: sourced (a, b, c, d) followed by the four sourceless pairs and the four decoupled ones.
using FermiModeState = Eigen::Matrix<cplx, 16, 1>;

inline FermiModeState fermi_mode_rhs(double J, double U, double T, const FermiModeState& y) {
    const cplx mi(0.0, -1.0);
    double h = J * T;
    FermiModeState r;
    const cplx a = y[0], b = y[1], c = y[2], d = y[3];
    r[0] = mi * (h * (c - b));
    r[1] = mi * (h * (d - a) + U * b - h);
    r[2] = mi * (h * (a - d) - U * c + h);
    r[3] = mi * (h * (b - c));
    // (0A0B, 1B0B), (0B0A, 0B1B), (1B1A, 0A1A), (1A1B, 1A0A)
    r[4] = mi * (h * y[5]);
    r[5] = mi * (h * y[4] - U * y[5]);
    r[6] = mi * (-h * y[7]);
    r[7] = mi * (-h * y[6] + U * y[7]);
    r[8] = mi * (h * y[9]);
    r[9] = mi * (h * y[8] + U * y[9]);
    r[10] = mi * (-h * y[11]);
    r[11] = mi * (-h * y[10] - U * y[11]);
    // 1A0B, 0B1A, 0B0B, 1A1A
    r[12] = mi * (-U * y[12]);
    r[13] = mi * (U * y[13]);
    r[14] = 0.0;
    r[15] = 0.0;
    return r;
}

// RK4 over the charge modes from initial.time to t_final, with hopping J(t) and an optional
// uniform tilt entering through k + A(t).
inline FermiEvolveResult evolve_charge_modes(const LatticeSpec& spec, const MomentumGrid& grid,
                                             const FermiCorrelators& initial, const HoppingRamp& hopping,
                                             const std::optional<PulseProfile>& tilt, double t_final,
                                             FermiEvolveOptions opt = {}) {
    if (!(opt.dt > 0.0)) throw domain_error("dt must be positive");
    if (t_final < initial.time) throw domain_error("t_final must not precede the initial time");
    if (initial.modes.size() != grid.size()) throw domain_error("initial state does not match the grid");
    spec.validate();
    require_bipartite(spec);
    FermiEvolveResult out;
    out.state = initial;
    out.state.time = t_final;
    std::vector<double> drift(grid.size(), 0.0), hom(grid.size(), 0.0), dmax(grid.size(), 0.0), dmin(grid.size(), 0.0);
    const double t0 = initial.time;
    parallel_for(grid.size(), [&](std::size_t i) {
        Wavevector k = grid.point(i);
        auto T_at = [&](double t) { return tilt ? structure_factor(spec, tilt->shifted(k, t)) : grid.structure(i); };
        const auto& m = initial.modes[i];
        FermiModeState y = FermiModeState::Zero();
        y[0] = m.f0A0A;
        y[1] = m.f0A1B;
        y[2] = m.f1B0A;
        y[3] = m.f1B1B;
        const cplx inv0 = conserved_fermi_bilinear(m);
        dmax[i] = dmin[i] = m.f1B1B.real();
        auto rhs = [&](double t, const FermiModeState& s) { return fermi_mode_rhs(hopping(t), spec.U, T_at(t), s); };
        auto observe = [&](double, const FermiModeState& s) {
            FermiModeCorrelators c{s[0], s[1], s[2], s[3]};
            drift[i] = std::max(drift[i], std::abs(conserved_fermi_bilinear(c) - inv0));
            hom[i] = std::max(hom[i], s.tail<12>().cwiseAbs().maxCoeff());
            dmax[i] = std::max(dmax[i], s[3].real());
            dmin[i] = std::min(dmin[i], s[3].real());
        };
        y = rk4_integrate(y, t0, t_final, opt.dt, rhs, observe);
        out.state.modes[i] = {y[0], y[1], y[2], y[3]};
    });
    out.max_drift = *std::max_element(drift.begin(), drift.end());
    out.max_sourceless = *std::max_element(hom.begin(), hom.end());
    out.max_f1B1B = *std::max_element(dmax.begin(), dmax.end());
    out.min_f1B1B = *std::min_element(dmin.begin(), dmin.end());
    if (out.max_drift > opt.drift_tolerance) throw numeric_error("fermionic invariant drifted beyond tolerance; reduce dt");
    detail::fill_occupancies(out.state);
    return out;
}

// Homogeneous part of the sourced system on (b, d, c) with a = -d:
// i d/dt y = G y. Scaling d by sqrt2 makes G real symmetric, so the flow is unitary.
inline Eigen::Matrix3cd fermi_charge_generator(double J, double U, cplx T) {
    cplx h = J * T;
    Eigen::Matrix3cd G;
    G << U, 2.0 * h, 0.0, h, 0.0, -h, 0.0, -2.0 * h, -U;
    return G;
}

struct DiracCoefficients {
    cplx alpha, beta;
    double normalization_residual = 0.0;  // | |alpha|^2 + |beta|^2 - 1 |
};

namespace detail {
// i d/dt (p, h) = [[U/2, -J T], [-J T, -U/2]] (p, h)
inline Eigen::Matrix2d dirac_generator(double J, double U, double T) {
    Eigen::Matrix2d H;
    H << 0.5 * U, -J * T, -J * T, -0.5 * U;
    return H;
}
}  // namespace detail

// Starts in the upper (particle) eigenvector at the pulse start; beta is the weight
// transferred to the lower eigenvector at the pulse end.
inline DiracCoefficients integrate_dirac_mode(const LatticeSpec& spec, const PulseProfile& pulse, const Wavevector& k,
                                              double dt = 1e-3, double normalization_tolerance = 1e-6) {
    if (!(dt > 0.0)) throw domain_error("dt must be positive");
    double t0 = pulse.begin(), t1 = pulse.end();
    auto T_at = [&](double t) { return structure_factor(spec, pulse.shifted(k, std::clamp(t, t0, t1))); };
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> start(detail::dirac_generator(spec.J, spec.U, T_at(t0)));
    Eigen::Vector2cd psi = start.eigenvectors().col(1).cast<cplx>();
    const cplx I(0.0, 1.0);
    auto rhs = [&](double t, const Eigen::Vector2cd& y) -> Eigen::Vector2cd {
        return -I * (detail::dirac_generator(spec.J, spec.U, T_at(t)).cast<cplx>() * y);
    };
    psi = rk4_integrate(psi, t0, t1, dt, rhs);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> stop(detail::dirac_generator(spec.J, spec.U, T_at(t1)));
    DiracCoefficients out;
    out.alpha = stop.eigenvectors().col(1).cast<cplx>().dot(psi);
    out.beta = stop.eigenvectors().col(0).cast<cplx>().dot(psi);
    out.normalization_residual = std::abs(std::norm(out.alpha) + std::norm(out.beta) - 1.0);
    if (out.normalization_residual > normalization_tolerance) throw numeric_error("Dirac mode lost normalisation; reduce dt");
    return out;
}

struct DiracPairCreation {
    std::vector<double> beta_sq;
    double double_occupancy = 0.0;  // mean |beta|^2
};

inline DiracPairCreation dirac_pair_creation(const LatticeSpec& spec, const PulseProfile& pulse, const MomentumGrid& grid,
                                             double dt = 1e-3) {
    DiracPairCreation out;
    out.beta_sq.assign(grid.size(), 0.0);
    parallel_for(grid.size(), [&](std::size_t i) {
        out.beta_sq[i] = std::norm(integrate_dirac_mode(spec, pulse, grid.point(i), dt).beta);
    });
    for (double b : out.beta_sq) out.double_occupancy += b;
    out.double_occupancy *= grid.weight();
    return out;
}

// Landau-Zener style estimate exp(-pi U^2 / (4 J |grad T . e| E)) at a point k0 on the T = 0 surface.
inline double dirac_tunneling_estimate(const LatticeSpec& spec, double E0, const Wavevector& k0,
                                       const Wavevector& direction) {
    if (!(E0 > 0.0)) throw domain_error("tunneling estimate needs E0 > 0");
    auto g = structure_gradient(k0);
    double slope = 0.0;
    for (std::size_t a = 0; a < g.size() && a < direction.size(); ++a) slope += g[a] * direction[a];
    slope = std::abs(slope);
    if (slope == 0.0) return 0.0;
    return std::exp(-std::numbers::pi * spec.U * spec.U / (4.0 * spec.J * slope * E0));
}

// Point with every component pi/2, which lies on the T = 0 surface of any hypercubic lattice.
inline Wavevector gap_minimum_point(int dimension) {
    return Wavevector(static_cast<std::size_t>(dimension), std::numbers::pi / 2.0);
}

}  // namespace hubbard
