#pragma once
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "hubbard/bose_z1.hpp"
#include "hubbard/ed/basis.hpp"
#include "hubbard/ed/hamiltonian.hpp"
#include "hubbard/lattice.hpp"

namespace hubbard::ed {

// Site-averaged raw moments. Every field is linear in the density matrix, so ensemble
// averages are weighted sums of Moments and connected correlators are formed afterwards.
// Displacements r are site indices of the displacement vector (as in MomentumGrid).
struct Moments {
    double weight = 0.0;               // trace of the density matrix that produced these moments
    std::vector<double> p;             // p(n), n = 0..N
    double parity = 0.0;               // <(-1)^n_mu>
    double density = 0.0;              // <n_mu>
    std::vector<double> parity_pair;   // <(-1)^(n_mu + n_{mu+r})>
    std::vector<double> density_pair;  // <n_mu n_{mu+r}>
    std::vector<cplx> obdm;            // <b+_{mu+r} b_mu>

    Moments() = default;
    Moments(int N, std::size_t sites)
        : p(static_cast<std::size_t>(N) + 1, 0.0), parity_pair(sites, 0.0), density_pair(sites, 0.0), obdm(sites, 0.0) {}

    Moments& add(const Moments& o, double w) {
        weight += w * o.weight;
        parity += w * o.parity;
        density += w * o.density;
        for (std::size_t i = 0; i < p.size(); ++i) p[i] += w * o.p[i];
        for (std::size_t i = 0; i < obdm.size(); ++i) {
            parity_pair[i] += w * o.parity_pair[i];
            density_pair[i] += w * o.density_pair[i];
            obdm[i] += w * o.obdm[i];
        }
        return *this;
    }

    // Divides by the trace, turning a sum over unnormalised states into expectation values.
    Moments normalized() const {
        Moments m(static_cast<int>(p.size()) - 1, obdm.size());
        if (weight > 0.0) m.add(*this, 1.0 / weight);
        m.weight = 1.0;
        return m;
    }
};

struct Observables {
    std::vector<double> p;
    std::vector<double> parity_correlation;  // <P P> - <P>^2 per displacement
    std::vector<double> number_correlation;  // <n n> - <n>^2 per displacement
    std::vector<cplx> obdm;
    std::vector<double> momentum;            // P(k) on the lattice grid (periodic lattices only)
};

inline Observables finalize(const Moments& raw, const std::vector<int>& extent, bool periodic) {
    Moments m = raw.normalized();
    Observables o;
    o.p = m.p;
    o.obdm = m.obdm;
    for (std::size_t r = 0; r < m.obdm.size(); ++r) {
        o.parity_correlation.push_back(m.parity_pair[r] - m.parity * m.parity);
        o.number_correlation.push_back(m.density_pair[r] - m.density * m.density);
    }
    if (periodic) o.momentum = momentum_distribution(m.obdm, MomentumGrid(extent));
    return o;
}

// Site nu + r (r a displacement site index); -1 when it leaves an open lattice.
inline std::int64_t displaced_site(const LatticeSpec& spec, std::size_t nu, std::size_t r) {
    auto a = site_coords(spec.extent, nu);
    auto d = site_coords(spec.extent, r);
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] += d[i];
        if (spec.boundary == Boundary::open && a[i] >= spec.extent[i]) return -1;
    }
    return static_cast<std::int64_t>(site_index(spec.extent, a));
}

// Diagonal part of the moments for a single occupation pattern.
inline void add_diagonal(Moments& m, const LatticeSpec& spec, std::span<const Occupation> n, double w) {
    const std::size_t S = n.size();
    m.weight += w;
    for (std::size_t nu = 0; nu < S; ++nu) {
        double sign = (n[nu] % 2) ? -1.0 : 1.0;
        m.p[n[nu]] += w / S;
        m.parity += w * sign / S;
        m.density += w * n[nu] / S;
        for (std::size_t r = 0; r < S; ++r) {
            auto mu = displaced_site(spec, nu, r);
            if (mu < 0) continue;
            double s2 = (n[static_cast<std::size_t>(mu)] % 2) ? -1.0 : 1.0;
            m.parity_pair[r] += w * sign * s2 / S;
            m.density_pair[r] += w * double(n[nu]) * n[static_cast<std::size_t>(mu)] / S;
        }
    }
}

// Moments of a Fock-space vector (not normalised; the result carries its squared norm).
// On open lattices pair averages run over the sites whose partner stays inside, divided by the site count.
template <class Vector>
Moments fock_moments(const LatticeSpec& spec, const FockBasis& basis, const Vector& psi) {
    const std::size_t S = spec.sites();
    require_matching(spec, basis);
    Moments m(basis.particles(), S);
    std::vector<Occupation> scratch;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        cplx amp = psi[static_cast<Eigen::Index>(i)];
        double w = std::norm(amp);
        if (amp == cplx(0.0)) continue;
        auto n = basis.state(i);
        add_diagonal(m, spec, n, w);
        for (std::size_t nu = 0; nu < S; ++nu) {
            if (n[nu] == 0) continue;
            for (std::size_t r = 0; r < S; ++r) {
                auto mu = displaced_site(spec, nu, r);
                if (mu < 0) continue;
                if (static_cast<std::size_t>(mu) == nu) {
                    m.obdm[r] += w * double(n[nu]) / S;
                    continue;
                }
                hop(n, scratch, static_cast<std::size_t>(mu), nu, [&](std::span<const Occupation> t, double h) {
                    m.obdm[r] += std::conj(cplx(psi[static_cast<Eigen::Index>(basis.index(t))])) * amp * h / double(S);
                });
            }
        }
    }
    return m;
}

// Per-orbit diagonal moments and the sector obdm operators of a periodic chain.
class SectorObservables {
public:
    SectorObservables(const LatticeSpec& spec, const FockBasis& basis, const TranslationOrbits& orbits,
                      const MomentumSector& sector)
        : spec_(spec), basis_(basis), sector_(sector) {
        require_periodic_chain(spec, basis);
        const int L = basis.sites();
        diag_.reserve(sector.size());
        for (auto r : sector.orbits) {
            Moments m(basis.particles(), static_cast<std::size_t>(L));
            add_diagonal(m, spec, basis.state(orbits.representative[r]), 1.0);
            diag_.push_back(std::move(m));
        }
        for (int s = 1; s < L; ++s) obdm_.push_back(sector_obdm(basis, orbits, sector, s));
    }

    // Moments of the sector vector c (unnormalised).
    template <class Vector>
    Moments operator()(const Vector& c) const {
        const std::size_t L = static_cast<std::size_t>(basis_.sites());
        Moments m(basis_.particles(), L);
        Eigen::VectorXcd v = c.template cast<cplx>();
        for (std::size_t i = 0; i < diag_.size(); ++i) m.add(diag_[i], std::norm(v[static_cast<Eigen::Index>(i)]));
        double w = v.squaredNorm();
        m.obdm[0] = w * double(basis_.particles()) / L;
        for (std::size_t s = 1; s < L; ++s) m.obdm[s] = v.dot(obdm_[s - 1] * v);
        return m;
    }

    const MomentumSector& sector() const { return sector_; }

private:
    LatticeSpec spec_;
    const FockBasis& basis_;
    MomentumSector sector_;
    std::vector<Moments> diag_;
    std::vector<ComplexSparse> obdm_;
};

// Fock amplitudes of the sector vector c.
template <class Vector>
Eigen::VectorXcd expand_sector(const FockBasis& basis, const TranslationOrbits& orbits, const MomentumSector& sector,
                               const Vector& c) {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.size()));
    const double q = sector.momentum();
    for (std::size_t s = 0; s < basis.size(); ++s) {
        auto r = orbits.orbit_of[s];
        auto pos = sector.position[r];
        if (pos < 0) continue;
        psi[static_cast<Eigen::Index>(s)] = cplx(c[pos]) * std::polar(1.0 / std::sqrt(double(orbits.period[r])), -q * orbits.shift_of[s]);
    }
    return psi;
}

}  // namespace hubbard::ed
