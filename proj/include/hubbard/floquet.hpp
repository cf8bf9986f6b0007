#pragma once
#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "hubbard/bose_z1.hpp"
#include "hubbard/errors.hpp"
#include "hubbard/fermi.hpp"
#include "hubbard/parallel.hpp"
#include "hubbard/rk4.hpp"

// Bosonic modes under a strong constant tilt: T_k(t) = (e^{i E0 t} chi + c.c.) / Z.
// The homogeneous part of the first-order system acts on (f12, g, f21) with g = f11 + 1/2.
namespace hubbard {

struct FloquetDrive {
    double E0 = 1.0;
    cplx chi{1.0, 0.0};
    double U = 1.0;
    double J = 0.0;
    int Z = 2;

    double period() const { return 2.0 * std::numbers::pi / E0; }
    cplx structure(double t) const { return (std::exp(cplx(0.0, E0 * t)) * chi + std::exp(cplx(0.0, -E0 * t)) * std::conj(chi)) / double(Z); }
    // J |chi| / (Z E0), the small parameter of the expansions
    double coupling() const { return J * std::abs(chi) / (Z * E0); }

    void validate() const {
        if (!(E0 > 0.0)) throw domain_error("drive frequency E0 must be positive");
        if (!(U > 0.0)) throw domain_error("U must be positive");
        if (J < 0.0) throw domain_error("J must be non-negative");
        if (Z < 1) throw domain_error("coordination number must be positive");
    }

    // Single-harmonic amplitude of a 1D chain mode k (Z = 2).
    static FloquetDrive chain(double E0, double U, double J, double k) {
        return FloquetDrive{E0, std::polar(1.0, k), U, J, 2};
    }
};

struct FloquetResult {
    cplx nu;                  // Floquet exponent folded so that Re nu in [0, 1/2] and Im nu >= 0
    double growth_rate = 0.0; // Im nu * E0
    bool resonant = false;
    double sin2_pinu = 0.0;
    Eigen::Vector3cd eigenvalues;
    double det_residual = 0.0;
};

// Tolerance on sin^2(pi nu) leaving [0, 1] before a point counts as resonant.
inline constexpr double resonance_threshold = 1e-10;

inline Eigen::Matrix3cd bose_floquet_generator(double J, double U, cplx T) {
    cplx a = U - 3.0 * J * T, c = J * T;
    Eigen::Matrix3cd H;
    H << a, -2.0 * sqrt2 * c, 0.0, sqrt2 * c, 0.0, -sqrt2 * c, 0.0, 2.0 * sqrt2 * c, -a;
    return H;
}

// Fundamental matrix over one period of i dY/dt = H(t) Y.
inline Eigen::Matrix3cd monodromy(const std::function<Eigen::Matrix3cd(double)>& generator, double period, int steps) {
    if (steps < 1) throw domain_error("monodromy needs at least one step");
    const cplx mi(0.0, -1.0);
    auto rhs = [&](double t, const Eigen::Matrix3cd& Y) -> Eigen::Matrix3cd { return mi * (generator(t) * Y); };
    return rk4_integrate<Eigen::Matrix3cd>(Eigen::Matrix3cd::Identity(), 0.0, period, period / steps, rhs);
}

// nu from sin^2(pi nu) = s; complex whenever s lies outside [0, 1].
inline cplx exponent_from_sin2(double s) {
    cplx z = std::asin(std::sqrt(cplx(s, 0.0))) / std::numbers::pi;
    return {std::abs(z.real()), std::abs(z.imag())};
}

inline FloquetResult floquet_from_monodromy(const Eigen::Matrix3cd& M) {
    FloquetResult r;
    r.det_residual = std::abs(M.determinant() - 1.0);
    if (r.det_residual > 1e-8) throw numeric_error("monodromy lost unit determinant; increase t_steps");
    Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(M);
    r.eigenvalues = es.eigenvalues();
    // The conserved direction carries eigenvalue 1; the remaining pair is lambda, 1/lambda,
    // so tr M = 1 + 2 cos(2 pi nu), which avoids the ill-conditioned eigenvectors at band edges.
    r.sin2_pinu = (3.0 - M.trace().real()) / 4.0;
    r.nu = exponent_from_sin2(r.sin2_pinu);
    r.resonant = r.sin2_pinu < -resonance_threshold || r.sin2_pinu > 1.0 + resonance_threshold;
    return r;
}

inline FloquetResult monodromy_exponent(const FloquetDrive& drive, int t_steps = 8000) {
    drive.validate();
    auto M = monodromy([&](double t) { return bose_floquet_generator(drive.J, drive.U, drive.structure(t)); },
                       drive.period(), t_steps);
    auto r = floquet_from_monodromy(M);
    r.growth_rate = r.nu.imag() * drive.E0;
    return r;
}

// Largest eigenvalue modulus of the fermionic charge-mode monodromy under the same drive.
inline double fermionic_monodromy_bound(const FloquetDrive& drive, int t_steps = 8000) {
    drive.validate();
    auto M = monodromy([&](double t) { return fermi_charge_generator(drive.J, drive.U, drive.structure(t)); },
                       drive.period(), t_steps);
    Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(M);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

struct HillOptions {
    int n_max = 8;
    double probe = 0.5;              // the determinant is evaluated at nu = i * probe
    bool tail_correction = true;
    double convergence_tolerance = 1e-8;
    bool require_convergence = true;
};

struct DeterminantResult {
    double sin2_pinu = 0.0;
    cplx delta_probe;           // truncated determinant at nu = i probe
    double delta_zero = 0.0;    // implied Delta(0) = sin^2(pi nu) / sin^2(pi U/E0); NaN at integer U/E0
    double convergence = 0.0;   // change when n_max grows by two
};

namespace detail {
inline Eigen::Matrix3cd hill_block(const FloquetDrive& d, cplx nu, int n) {
    cplx x = nu + double(n);
    double r = d.U / d.E0;
    Eigen::Matrix3cd M;
    M << -3.0 / (x + r), -2.0 * sqrt2 / (x + r), 0.0,
         sqrt2 / x, 0.0, -sqrt2 / x,
         0.0, 2.0 * sqrt2 / (x - r), 3.0 / (x - r);
    return M * (d.J / (d.Z * d.E0));
}

inline cplx truncated_determinant(const FloquetDrive& d, cplx nu, int n_max) {
    int blocks = 2 * n_max + 1;
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(3 * blocks, 3 * blocks);
    for (int b = 0; b < blocks; ++b) {
        auto M = hill_block(d, nu, b - n_max);
        if (b > 0) A.block<3, 3>(3 * b, 3 * (b - 1)) = d.chi * M;
        if (b + 1 < blocks) A.block<3, 3>(3 * b, 3 * (b + 1)) = std::conj(d.chi) * M;
    }
    return A.partialPivLu().determinant();
}

// Off-diagonal hop of the Hill matrix from block a to block b = a +- 1.
inline Eigen::Matrix3cd hill_hop(const FloquetDrive& d, cplx nu, int a, int b) {
    return (b == a + 1 ? std::conj(d.chi) : d.chi) * hill_block(d, nu, a);
}

// log Det(1 + K) = -tr K^2 / 2 - tr K^4 / 4 + ...; the closed walks that leave the
// retained window are summed here and restore the truncated harmonics.
inline cplx tail_log_correction(const FloquetDrive& d, cplx nu, int n_max) {
    const int far2 = 4000, far4 = 400;
    cplx tr2 = 0.0;
    for (int n = -far2; n < far2; ++n) {
        if (n >= -n_max && n + 1 <= n_max) continue;
        tr2 += (hill_block(d, nu, n) * hill_block(d, nu, n + 1)).trace();
    }
    tr2 *= 2.0 * std::norm(d.chi);
    // remainder beyond far2: tr(M_n M_{n+1}) -> 2 (J/Z E0)^2 / n^2 on both sides
    double g = d.J / (d.Z * d.E0);
    tr2 += 2.0 * std::norm(d.chi) * 2.0 * 2.0 * g * g / far2;

    static const int walks[6][4] = {{1, 1, -1, -1}, {1, -1, 1, -1}, {1, -1, -1, 1},
                                    {-1, -1, 1, 1}, {-1, 1, -1, 1}, {-1, 1, 1, -1}};
    cplx tr4 = 0.0;
    for (int n0 = -far4; n0 <= far4; ++n0) {
        for (const auto& w : walks) {
            int path[5] = {n0, 0, 0, 0, 0};
            int reach = std::abs(n0);
            for (int s = 0; s < 4; ++s) {
                path[s + 1] = path[s] + w[s];
                reach = std::max(reach, std::abs(path[s + 1]));
            }
            if (reach <= n_max || reach > far4) continue;
            Eigen::Matrix3cd P = Eigen::Matrix3cd::Identity();
            for (int s = 0; s < 4; ++s) P = P * hill_hop(d, nu, path[s], path[s + 1]);
            tr4 += P.trace();
        }
    }
    return -0.5 * tr2 - 0.25 * tr4;
}

inline cplx hill_determinant(const FloquetDrive& d, cplx nu, int n_max, bool tail) {
    cplx det = truncated_determinant(d, nu, n_max);
    return tail ? det * std::exp(tail_log_correction(d, nu, n_max)) : det;
}

// sin^2(pi nu0) = sin^2(pi nu) - Delta(nu) (sin^2(pi nu) - sin^2(pi U/E0)) holds for any nu;
// at nu = 0 it reduces to sin^2(pi U/E0) Delta(0).
inline double sin2_from_determinant(const FloquetDrive& d, double probe, cplx delta) {
    cplx nu(0.0, probe);
    cplx sn = std::pow(std::sin(std::numbers::pi * nu), 2);
    double su = std::pow(std::sin(std::numbers::pi * d.U / d.E0), 2);
    return (sn - delta * (sn - su)).real();
}
}  // namespace detail

inline DeterminantResult determinant_relation(const FloquetDrive& drive, HillOptions opt = {}) {
    drive.validate();
    if (opt.n_max < 2) throw domain_error("determinant needs n_max >= 2");
    if (!(opt.probe > 0.0)) throw domain_error("probe must be positive");
    cplx nu(0.0, opt.probe);
    DeterminantResult r;
    r.delta_probe = detail::hill_determinant(drive, nu, opt.n_max, opt.tail_correction);
    r.sin2_pinu = detail::sin2_from_determinant(drive, opt.probe, r.delta_probe);
    cplx wider = detail::hill_determinant(drive, nu, opt.n_max + 2, opt.tail_correction);
    r.convergence = std::abs(detail::sin2_from_determinant(drive, opt.probe, wider) - r.sin2_pinu);
    double su = std::pow(std::sin(std::numbers::pi * drive.U / drive.E0), 2);
    r.delta_zero = su > 1e-14 ? r.sin2_pinu / su : std::numeric_limits<double>::quiet_NaN();
    if (opt.require_convergence && r.convergence > opt.convergence_tolerance)
        throw numeric_error("Floquet determinant not converged in n_max");
    return r;
}

// Fourth-order small-J expansion of sin^2(pi nu).
inline double resonance_expansion(const FloquetDrive& drive, double pole_margin = 0.02) {
    drive.validate();
    double r = drive.U / drive.E0;
    if (std::abs(r - std::round(r)) < pole_margin)
        throw domain_error("resonance expansion is singular near integer U/E0");
    const double pi = std::numbers::pi;
    double U = drive.U, E0 = drive.E0, J = drive.J, Z = drive.Z, a = std::abs(drive.chi);
    double x = pi * U / E0;
    double s = std::pow(std::sin(x), 2);
    double second = 16.0 * J * J * a * a * pi * U / (Z * Z * E0 * (E0 * E0 - U * U)) / std::tan(x);
    double E2 = E0 * E0, U2 = U * U;
    double fourth = 8.0 * std::pow(J * a, 4) * pi * U / (std::pow(Z, 4) * s) /
                    (E2 * std::pow(E2 - U2, 3) * (4.0 * E2 - U2)) *
                    (8.0 * pi * U * (4.0 * E2 * E2 - 5.0 * E2 * U2 + U2 * U2) * std::cos(2.0 * x) +
                     E0 * (-19.0 * E2 * E2 + 76.0 * E2 * U2 - 33.0 * U2 * U2) * std::sin(2.0 * x));
    return s * (1.0 + second + fourth);
}

struct ResonanceBand {
    double lower = 0.0, upper = 0.0;
    double center() const { return 0.5 * (lower + upper); }
    double width() const { return upper - lower; }
};

// Closed-form first and second bands.
inline std::vector<ResonanceBand> predicted_bands(const FloquetDrive& drive) {
    double a = std::abs(drive.chi), Z = drive.Z, J = drive.J, E0 = drive.E0;
    double w1 = 4.0 * sqrt2 * J * a / Z;
    double c2 = 2.0 * E0 + 16.0 * J * J * a * a / (3.0 * E0 * Z * Z);
    double w2 = 12.0 * sqrt2 * J * J * a * a / (Z * Z * E0);
    return {{E0 - 0.5 * w1, E0 + 0.5 * w1}, {c2 - 0.5 * w2, c2 + 0.5 * w2}};
}

struct ScanPoint {
    double U = 0.0;
    double sin2_pinu = 0.0;
    double im_nu = 0.0;
};

struct ResonanceScan {
    std::vector<ScanPoint> points;
    std::vector<ResonanceBand> bands;
};

// Monodromy over an even U grid on [U_lo, U_hi]; band edges refined by bisection.
inline ResonanceScan resonance_scan(FloquetDrive drive, double U_lo, double U_hi, int samples, int t_steps = 8000,
                                    double edge_tolerance = 1e-7) {
    if (samples < 2 || !(U_hi > U_lo)) throw domain_error("scan needs U_hi > U_lo and at least two samples");
    ResonanceScan out;
    out.points.resize(static_cast<std::size_t>(samples));
    auto margin = [&](double U) {
        FloquetDrive d = drive;
        d.U = U;
        double s = monodromy_exponent(d, t_steps).sin2_pinu;
        return std::max(-s, s - 1.0);  // > 0 inside a band
    };
    parallel_for(out.points.size(), [&](std::size_t i) {
        FloquetDrive d = drive;
        d.U = U_lo + (U_hi - U_lo) * double(i) / (samples - 1);
        auto r = monodromy_exponent(d, t_steps);
        out.points[i] = {d.U, r.sin2_pinu, r.nu.imag()};
    });
    auto inside = [](const ScanPoint& p) { return p.sin2_pinu < -resonance_threshold || p.sin2_pinu > 1.0 + resonance_threshold; };
    auto edge = [&](double out_U, double in_U) {
        while (std::abs(in_U - out_U) > edge_tolerance) {
            double mid = 0.5 * (in_U + out_U);
            (margin(mid) > resonance_threshold ? in_U : out_U) = mid;
        }
        return 0.5 * (in_U + out_U);
    };
    const auto& p = out.points;
    for (std::size_t i = 0; i < p.size();) {
        if (!inside(p[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < p.size() && inside(p[j + 1])) ++j;
        ResonanceBand b;
        b.lower = i == 0 ? p[0].U : edge(p[i - 1].U, p[i].U);
        b.upper = j + 1 == p.size() ? p[j].U : edge(p[j + 1].U, p[j].U);
        out.bands.push_back(b);
        i = j + 1;
    }
    return out;
}

// |y(t)| of the homogeneous bosonic system sampled once per step, for growth-law fits.
inline std::vector<std::pair<double, double>> floquet_trajectory(const FloquetDrive& drive, Eigen::Vector3cd y,
                                                                 double periods, int steps_per_period = 2000) {
    drive.validate();
    const cplx mi(0.0, -1.0);
    std::vector<std::pair<double, double>> out{{0.0, y.norm()}};
    auto rhs = [&](double t, const Eigen::Vector3cd& v) -> Eigen::Vector3cd {
        return mi * (bose_floquet_generator(drive.J, drive.U, drive.structure(t)) * v);
    };
    rk4_integrate(y, 0.0, periods * drive.period(), drive.period() / steps_per_period, rhs,
                  [&](double t, const Eigen::Vector3cd& v) { out.emplace_back(t, v.norm()); });
    return out;
}

}  // namespace hubbard
