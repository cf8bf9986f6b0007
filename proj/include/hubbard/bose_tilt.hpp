#pragma once
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hubbard/bose_z1.hpp"
#include "hubbard/errors.hpp"
#include "hubbard/lattice.hpp"
#include "hubbard/parallel.hpp"
#include "hubbard/rk4.hpp"

namespace hubbard {

enum class PulseShape { sauter, constant, window, custom };

inline PulseShape pulse_shape_from_string(const std::string& s) {
    if (s == "sauter") return PulseShape::sauter;
    if (s == "constant") return PulseShape::constant;
    if (s == "window") return PulseShape::window;
    if (s == "custom") return PulseShape::custom;
    throw domain_error("unknown pulse shape '" + s + "'");
}

// Natural cubic spline through (t_i, y_i); used for sampled vector potentials.
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> t, std::vector<double> y) : t_(std::move(t)), y_(std::move(y)) {
        std::size_t n = t_.size();
        if (n < 2 || y_.size() != n) throw domain_error("spline needs at least two matching samples");
        for (std::size_t i = 1; i < n; ++i)
            if (!(t_[i] > t_[i - 1])) throw domain_error("spline sample times must increase");
        m_.assign(n, 0.0);
        if (n == 2) return;
        std::vector<double> a(n, 0.0), b(n, 1.0), c(n, 0.0), r(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            double h0 = t_[i] - t_[i - 1], h1 = t_[i + 1] - t_[i];
            a[i] = h0 / 6.0;
            b[i] = (h0 + h1) / 3.0;
            c[i] = h1 / 6.0;
            r[i] = (y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0;
        }
        for (std::size_t i = 1; i < n; ++i) {
            double w = a[i] / b[i - 1];
            b[i] -= w * c[i - 1];
            r[i] -= w * r[i - 1];
        }
        m_[n - 1] = r[n - 1] / b[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) m_[i] = (r[i] - c[i] * m_[i + 1]) / b[i];
    }

    double front() const { return t_.front(); }
    double back() const { return t_.back(); }

    double operator()(double t) const { return eval(t, false); }
    double derivative(double t) const { return eval(t, true); }

private:
    double eval(double t, bool deriv) const {
        if (t <= t_.front()) return deriv ? 0.0 : y_.front();
        if (t >= t_.back()) return deriv ? 0.0 : y_.back();
        auto it = std::upper_bound(t_.begin(), t_.end(), t);
        std::size_t i = static_cast<std::size_t>(it - t_.begin()) - 1;
        double h = t_[i + 1] - t_[i];
        double u = (t_[i + 1] - t) / h, v = (t - t_[i]) / h;
        if (deriv)
            return (y_[i + 1] - y_[i]) / h + h / 6.0 * ((3.0 * v * v - 1.0) * m_[i + 1] - (3.0 * u * u - 1.0) * m_[i]);
        return u * y_[i] + v * y_[i + 1] + h * h / 6.0 * ((u * u * u - u) * m_[i] + (v * v * v - v) * m_[i + 1]);
    }

    std::vector<double> t_, y_, m_;
};

// Time-dependent tilt. The field E(t) enters the modes through the vector potential A(t) = int E dt.
//   sauter:   E0 / cosh^2(t/tau) on [-span tau, span tau], A = E0 tau tanh(t/tau)
//   constant: E0 on [0, tau]
//   window:   E0 f(t/tau) on [0, 5 tau], f rising from 0 to 1 at the centre and back to 0
//   custom:   sampled A(t), cubic interpolation
struct PulseProfile {
    double E0 = 0.0;
    double tau = 1.0;
    PulseShape shape = PulseShape::sauter;
    Wavevector direction{1.0};
    double span = 12.0;  // sauter integration half-width in units of tau
    CubicSpline samples;

    static PulseProfile sauter(double E0, double tau, int dimension = 1) {
        return PulseProfile{E0, tau, PulseShape::sauter, unit_axis(dimension), 12.0, {}};
    }
    static PulseProfile window(double E0, double tau, int dimension = 1) {
        return PulseProfile{E0, tau, PulseShape::window, unit_axis(dimension), 12.0, {}};
    }
    static PulseProfile constant(double E0, double duration, int dimension = 1) {
        return PulseProfile{E0, duration, PulseShape::constant, unit_axis(dimension), 12.0, {}};
    }
    static PulseProfile custom(std::vector<double> t, std::vector<double> A, int dimension = 1) {
        PulseProfile p;
        p.shape = PulseShape::custom;
        p.direction = unit_axis(dimension);
        p.samples = CubicSpline(std::move(t), std::move(A));
        return p;
    }

    static Wavevector unit_axis(int dimension) {
        Wavevector e(static_cast<std::size_t>(dimension), 0.0);
        e[0] = 1.0;
        return e;
    }

    double begin() const {
        switch (shape) {
            case PulseShape::sauter: return -span * tau;
            case PulseShape::custom: return samples.front();
            default: return 0.0;
        }
    }
    double end() const {
        switch (shape) {
            case PulseShape::sauter: return span * tau;
            case PulseShape::constant: return tau;
            case PulseShape::window: return 5.0 * tau;
            case PulseShape::custom: return samples.back();
        }
        return 0.0;
    }

    static double window_profile(double s) {
        double c = 1.0 / std::pow(std::cosh(2.5), 2);
        if (s <= 0.0 || s >= 5.0) return 0.0;
        return (1.0 / std::pow(std::cosh(s - 2.5), 2) - c) / (1.0 - c);
    }

    double field(double t) const {
        switch (shape) {
            case PulseShape::sauter: return E0 / std::pow(std::cosh(t / tau), 2);
            case PulseShape::constant: return (t >= 0.0 && t <= tau) ? E0 : 0.0;
            case PulseShape::window: return E0 * window_profile(t / tau);
            case PulseShape::custom: return samples.derivative(t);
        }
        return 0.0;
    }

    double potential(double t) const {
        switch (shape) {
            case PulseShape::sauter: return E0 * tau * std::tanh(t / tau);
            case PulseShape::constant: return E0 * std::clamp(t, 0.0, tau);
            case PulseShape::window: {
                double s = std::clamp(t / tau, 0.0, 5.0);
                double c = 1.0 / std::pow(std::cosh(2.5), 2);
                return E0 * tau * (std::tanh(s - 2.5) + std::tanh(2.5) - c * s) / (1.0 - c);
            }
            case PulseShape::custom: return samples(t);
        }
        return 0.0;
    }

    Wavevector shifted(const Wavevector& k, double t) const {
        Wavevector q = k;
        double a = potential(t);
        for (std::size_t i = 0; i < q.size() && i < direction.size(); ++i) q[i] += a * direction[i];
        return q;
    }
};

// Relativistic analogue parameters: c_eff^2 and (m_eff c_eff^2)^2.
struct EffectiveRelativisticParams {
    double light_speed_sq = 0.0;
    double rest_energy_sq = 0.0;
    double light_speed() const { return std::sqrt(light_speed_sq); }
    double rest_energy() const { return std::sqrt(std::max(0.0, rest_energy_sq)); }
};

inline EffectiveRelativisticParams effective_params(const LatticeSpec& spec) {
    if (spec.J > j_critical(spec.U) * (1.0 + 1e-12))
        throw domain_error("effective relativistic parameters need J inside the Mott phase");
    double xi = stiffness(spec);
    double J = spec.J, U = spec.U;
    return {0.5 * xi * J * (3.0 * U - J), std::max(0.0, 0.25 * (U * U - 6.0 * J * U + J * J))};
}

namespace detail {
inline double log_sinh(double x) { return x + std::log1p(-std::exp(-2.0 * x)) - std::numbers::ln2; }
inline double log_cosh(double x) {
    x = std::abs(x);
    return x + std::log1p(std::exp(-2.0 * x)) - std::numbers::ln2;
}
inline double log_add(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    double m = std::max(a, b);
    return m + std::log1p(std::exp(-std::abs(a - b)));
}
}  // namespace detail

// Pair-creation probability of a scalar field in a Sauter pulse, evaluated in log space.
inline double sauter_beta_exact(double k_parallel, double k_perp_sq, double E0, double tau,
                                const EffectiveRelativisticParams& p) {
    if (!(tau > 0.0) || E0 < 0.0) throw domain_error("Sauter pulse needs tau > 0 and E0 >= 0");
    if (E0 == 0.0) return 0.0;
    double c2 = p.light_speed_sq;
    double rest = p.rest_energy_sq + k_perp_sq * c2;
    double wp = std::sqrt(c2 * std::pow(k_parallel - E0 * tau, 2) + rest);
    double wm = std::sqrt(c2 * std::pow(k_parallel + E0 * tau, 2) + rest);
    double X = std::numbers::pi * tau * std::abs(wp - wm);
    double disc = 4.0 * E0 * E0 * c2 * std::pow(tau, 4) - 1.0;
    const double ninf = -std::numeric_limits<double>::infinity();
    double log_num;
    if (disc >= 0.0) {
        double Y = std::numbers::pi * std::sqrt(disc);
        log_num = detail::log_add(detail::log_cosh(X), detail::log_cosh(Y));
    } else {
        // cosh X + cos Y = 2 sinh^2(X/2) + 2 cos^2(Y/2), free of cancellation as E0 -> 0
        double Y = std::numbers::pi * std::sqrt(-disc);
        double a = X > 0.0 ? std::numbers::ln2 + 2.0 * detail::log_sinh(0.5 * X) : ninf;
        double cy = std::cos(0.5 * Y);
        double b = cy != 0.0 ? std::numbers::ln2 + 2.0 * std::log(std::abs(cy)) : ninf;
        log_num = detail::log_add(a, b);
    }
    if (log_num == ninf) return 0.0;
    double log_den = std::numbers::ln2 + detail::log_sinh(std::numbers::pi * tau * wp) +
                     detail::log_sinh(std::numbers::pi * tau * wm);
    return std::exp(log_num - log_den);
}

// Static-field limit of the scalar result.
inline double sauter_infinite(double k_perp_sq, double E0, const EffectiveRelativisticParams& p) {
    if (E0 <= 0.0) return 0.0;
    return std::exp(-std::numbers::pi * (p.rest_energy_sq + k_perp_sq * p.light_speed_sq) / (E0 * p.light_speed()));
}

// Static field including the lattice corrections from the time derivatives of T_k.
// With include_lattice_terms = false the xi terms are dropped.
inline double static_beta_lattice(double k_perp_sq, double E0, const LatticeSpec& spec,
                                  bool include_lattice_terms = true) {
    if (E0 <= 0.0) return 0.0;
    auto p = effective_params(spec);
    double xi = include_lattice_terms ? stiffness(spec) : 0.0;
    double c2 = p.light_speed_sq;
    double bracket = p.rest_energy_sq + c2 * k_perp_sq - xi * E0 * E0 + xi * xi * E0 * E0 * spec.U * spec.U / (4.0 * c2);
    return std::exp(-std::numbers::pi / (E0 * p.light_speed()) * bracket);
}

struct BogoliubovCoefficients {
    cplx alpha, beta;
    double normalization_residual = 0.0;  // | |alpha|^2 - |beta|^2 - 1 |
    double diabatic_residual = 0.0;       // |beta|^2 of the same protocol without field (ramp projection only)
};

enum class Projection { eigenbasis, ramp };

struct TiltOptions {
    double dt = 1e-3;
    Projection projection = Projection::eigenbasis;
    double ramp_time = 20.0;  // in units of 1/U, used by Projection::ramp
    double normalization_tolerance = 1e-6;
};

namespace detail {
// i d/dt (h, p) = H (h, p) with H = [[a, c], [-c, -a]], a = (3JT - U)/2, c = sqrt2 J T
inline Eigen::Matrix2cd ph_generator(double J, double U, double T) {
    double a = 0.5 * (3.0 * J * T - U), c = sqrt2 * J * T;
    Eigen::Matrix2cd H;
    H << a, c, -c, -a;
    return H;
}

struct ModeBasis {
    Eigen::Vector2cd hole, particle;  // eta-normalised eigenvectors, eta = diag(1, -1)
};

inline ModeBasis mode_basis(double J, double U, double T) {
    double a = 0.5 * (3.0 * J * T - U), c = sqrt2 * J * T;
    double lam2 = a * a - c * c;
    if (!(lam2 > 0.0) || a >= 0.0) throw domain_error("mode basis needs a gapped Mott mode at the pulse edges");
    double lam = std::sqrt(lam2);
    double n = std::sqrt(2.0 * lam * (lam - a));
    ModeBasis b;
    b.hole << (lam - a) / n, c / n;
    b.particle << c / n, (lam - a) / n;
    return b;
}

inline cplx eta_product(const Eigen::Vector2cd& u, const Eigen::Vector2cd& v) {
    return std::conj(u[0]) * v[0] - std::conj(u[1]) * v[1];
}

// (1 + tanh(4(2u - 1))) shape normalised to run exactly from 0 to 1
inline double ramp_profile(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    double t4 = std::tanh(4.0);
    return 0.5 * (std::tanh(4.0 * (2.0 * u - 1.0)) + t4) / t4;
}

inline BogoliubovCoefficients integrate_modes_once(const LatticeSpec& spec, const PulseProfile& pulse,
                                                   const Wavevector& k, const TiltOptions& opt, bool field_on) {
    double U = spec.U, J = spec.J;
    double t0 = pulse.begin(), t1 = pulse.end();
    auto T_at = [&](double t) {
        double tt = std::clamp(t, t0, t1);
        return field_on ? structure_factor(spec, pulse.shifted(k, tt)) : structure_factor(spec, pulse.shifted(k, t0));
    };
    bool ramp = opt.projection == Projection::ramp;
    double R = ramp ? opt.ramp_time : 0.0;
    auto J_at = [&](double t) {
        if (!ramp) return J;
        if (t < t0) return J * ramp_profile((t - (t0 - R)) / R);
        if (t > t1) return J * ramp_profile(((t1 + R) - t) / R);
        return J;
    };
    double start = t0 - R, stop = t1 + R;
    Eigen::Vector2cd psi;
    if (ramp) {
        psi << 1.0, 0.0;
    } else {
        psi = mode_basis(J, U, T_at(start)).hole;
    }
    const cplx I(0.0, 1.0);
    auto rhs = [&](double t, const Eigen::Vector2cd& y) -> Eigen::Vector2cd {
        return -I * (ph_generator(J_at(t), U, T_at(t)) * y);
    };
    psi = rk4_integrate(psi, start, stop, opt.dt, rhs);
    BogoliubovCoefficients out;
    if (ramp) {
        out.alpha = psi[0];
        out.beta = psi[1];
    } else {
        auto b = mode_basis(J, U, T_at(stop));
        out.alpha = eta_product(b.hole, psi);
        out.beta = -eta_product(b.particle, psi);
    }
    out.normalization_residual = std::abs(std::norm(out.alpha) - std::norm(out.beta) - 1.0);
    return out;
}
}  // namespace detail

// Bogoliubov coefficients of one mode k driven by the pulse.
inline BogoliubovCoefficients integrate_ph_modes(const LatticeSpec& spec, const PulseProfile& pulse,
                                                 const Wavevector& k, TiltOptions opt = {}) {
    if (!(opt.dt > 0.0)) throw domain_error("dt must be positive");
    auto out = detail::integrate_modes_once(spec, pulse, k, opt, true);
    if (out.normalization_residual > opt.normalization_tolerance)
        throw numeric_error("Bogoliubov normalisation drifted; reduce dt");
    if (opt.projection == Projection::ramp)
        out.diabatic_residual = std::norm(detail::integrate_modes_once(spec, pulse, k, opt, false).beta);
    return out;
}

struct PairCreation {
    std::vector<double> beta_sq;  // per grid point
    double density = 0.0;         // <p+p> = mean |beta|^2
    double rate = 0.0;            // P_exc = 2 N <p+p> / tau
};

// N in the rate prefactor is the site count of spec; the grid may be denser to mimic the infinite lattice.
inline PairCreation pair_creation_rate(const LatticeSpec& spec, const PulseProfile& pulse, const MomentumGrid& grid,
                                       TiltOptions opt = {}) {
    PairCreation out;
    out.beta_sq.assign(grid.size(), 0.0);
    if (pulse.E0 == 0.0 && pulse.shape != PulseShape::custom) return out;
    parallel_for(grid.size(), [&](std::size_t i) {
        out.beta_sq[i] = std::norm(integrate_ph_modes(spec, pulse, grid.point(i), opt).beta);
    });
    for (double b : out.beta_sq) out.density += b;
    out.density *= grid.weight();
    out.rate = 2.0 * static_cast<double>(spec.sites()) * out.density / pulse.tau;
    return out;
}

// Same rate with the closed-form Sauter result per mode (valid for the Sauter pulse only).
inline PairCreation pair_creation_rate_sauter(const LatticeSpec& spec, double E0, double tau, const MomentumGrid& grid) {
    auto p = effective_params(spec);
    PairCreation out;
    out.beta_sq.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        auto k = grid.centered(i);
        double kperp = 0.0;
        for (std::size_t a = 1; a < k.size(); ++a) kperp += k[a] * k[a];
        out.beta_sq[i] = sauter_beta_exact(k[0], kperp, E0, tau, p);
        out.density += out.beta_sq[i];
    }
    out.density *= grid.weight();
    out.rate = 2.0 * static_cast<double>(spec.sites()) * out.density / tau;
    return out;
}

}  // namespace hubbard
