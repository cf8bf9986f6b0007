#pragma once
#include <cmath>
#include <complex>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "hubbard/bose_tilt.hpp"
#include "hubbard/ed/basis.hpp"
#include "hubbard/ed/hamiltonian.hpp"
#include "hubbard/ed/solvers.hpp"

namespace hubbard::ed {

// Ground state of an arbitrary lattice (open chains, 2D) in the plain Fock basis.
struct FockGround {
    double energy = 0.0;
    Eigen::VectorXd vector;
    double residual = 0.0;
};

inline FockGround fock_ground_state(const LatticeSpec& spec, const FockBasis& basis, LanczosOptions opt = {}) {
    auto r = lowest_eigenpairs<double>(fock_hamiltonian(spec, basis), 1, opt);
    return {r.values[0], r.vectors.col(0), r.residuals[0]};
}

// Site coordinate along the pulse direction, centred on the lattice; the constant offset
// only adds a global phase at fixed particle number.
inline Eigen::VectorXd tilt_potential(const LatticeSpec& spec, const FockBasis& basis, const Wavevector& direction) {
    const std::size_t S = spec.sites();
    std::vector<double> x(S, 0.0);
    for (std::size_t mu = 0; mu < S; ++mu) {
        auto c = site_coords(spec.extent, mu);
        for (std::size_t a = 0; a < c.size() && a < direction.size(); ++a)
            x[mu] += direction[a] * (c[a] - 0.5 * (spec.extent[a] - 1));
    }
    Eigen::VectorXd v(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t i = 0; i < basis.size(); ++i) {
        auto n = basis.state(i);
        double s = 0.0;
        for (std::size_t mu = 0; mu < S; ++mu) s += x[mu] * n[mu];
        v[static_cast<Eigen::Index>(i)] = s;
    }
    return v;
}

struct TiltEdOptions {
    double dt = 1e-3;               // in units of 1/U
    double norm_tolerance = 1e-8;
    int max_halvings = 6;
};

struct TiltEdResult {
    double p_exc = 0.0;        // (1 - |<psi0|psi(end)>|^2) / tau
    double survival = 1.0;     // |<psi0|psi(end)>|^2
    double norm_drift = 0.0;
    double energy_drift = 0.0; // |<H0>(end) - <H0>(start)|, meaningful as a check when E0 = 0
    double dt = 0.0;           // step that met the norm tolerance
};

namespace detail {
inline TiltEdResult tilt_run(const ComplexSparse& H0, const Eigen::VectorXd& X, const Eigen::VectorXcd& psi0,
                             const PulseProfile& pulse, double t0, double t1, double dt) {
    const auto steps = static_cast<long>(std::ceil((t1 - t0) / dt - 1e-9));
    const double h = (t1 - t0) / static_cast<double>(steps);
    const cplx mi(0.0, -1.0);
    Eigen::VectorXcd psi = psi0, k1, k2, k3, k4, tmp;
    auto rhs = [&](double t, const Eigen::VectorXcd& y, Eigen::VectorXcd& out) {
        out = H0 * y;
        const double E = pulse.field(t);
        if (E != 0.0) out.array() += E * X.array() * y.array();
        out *= mi;
    };
    for (long s = 0; s < steps; ++s) {
        double t = t0 + s * h;
        rhs(t, psi, k1);
        tmp = psi + 0.5 * h * k1;
        rhs(t + 0.5 * h, tmp, k2);
        tmp = psi + 0.5 * h * k2;
        rhs(t + 0.5 * h, tmp, k3);
        tmp = psi + h * k3;
        rhs(t + h, tmp, k4);
        psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    TiltEdResult r;
    r.dt = h;
    r.norm_drift = std::abs(psi.squaredNorm() - psi0.squaredNorm());
    r.survival = std::norm(psi0.dot(psi));
    r.energy_drift = std::abs(psi.dot(H0 * psi).real() - psi0.dot(H0 * psi0).real());
    return r;
}
}  // namespace detail

// Schroedinger evolution of the ground state through the pulse by RK4; dt is halved until the
// norm drift drops below tolerance. P_exc is the loss of ground-state overlap per unit tau.
inline TiltEdResult tilt_evolution(const LatticeSpec& spec, const FockBasis& basis, const Eigen::VectorXd& ground,
                                   const PulseProfile& pulse, TiltEdOptions opt = {}) {
    require_matching(spec, basis);
    if (static_cast<std::size_t>(ground.size()) != basis.size()) throw domain_error("ground vector does not match the basis");
    if (!(opt.dt > 0.0)) throw domain_error("dt must be positive");
    ComplexSparse H0 = fock_hamiltonian(spec, basis).cast<cplx>();
    Eigen::VectorXd X = tilt_potential(spec, basis, pulse.direction);
    Eigen::VectorXcd psi0 = ground.normalized().cast<cplx>();
    double dt = opt.dt;
    for (int attempt = 0; attempt <= opt.max_halvings; ++attempt, dt *= 0.5) {
        auto r = detail::tilt_run(H0, X, psi0, pulse, pulse.begin(), pulse.end(), dt);
        if (r.norm_drift < opt.norm_tolerance) {
            r.p_exc = (1.0 - r.survival) / pulse.tau;
            return r;
        }
    }
    throw numeric_error("pulse evolution kept drifting in norm after the allowed dt halvings");
}

}  // namespace hubbard::ed
