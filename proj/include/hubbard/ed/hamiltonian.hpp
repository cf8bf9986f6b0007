#pragma once
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Sparse>

#include "hubbard/ed/basis.hpp"
#include "hubbard/lattice.hpp"

namespace hubbard::ed {

using RealSparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using ComplexSparse = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

inline double interaction_energy(std::span<const Occupation> n, double U) {
    double e = 0.0;
    for (Occupation v : n) e += 0.5 * U * v * (v - 1.0);
    return e;
}

// Calls emit(target, amplitude) for b+_to b_from acting on n; nothing when site `from` is empty.
template <class Emit>
void hop(std::span<const Occupation> n, std::vector<Occupation>& scratch, std::size_t to, std::size_t from, Emit&& emit) {
    if (n[from] == 0 || to == from) return;
    double amp = std::sqrt(double(n[from]) * (n[to] + 1.0));
    scratch.assign(n.begin(), n.end());
    --scratch[from];
    ++scratch[to];
    emit(std::span<const Occupation>(scratch), amp);
}

inline void require_matching(const LatticeSpec& spec, const FockBasis& basis) {
    spec.validate();
    if (spec.sites() != static_cast<std::size_t>(basis.sites()))
        throw domain_error("lattice site count does not match the Fock basis");
}

// H = -(J/Z) sum_<mu nu> (b+_mu b_nu + h.c.) + (U/2) sum n(n-1) in the plain Fock basis.
inline RealSparse fock_hamiltonian(const LatticeSpec& spec, const FockBasis& basis) {
    require_matching(spec, basis);
    const double t = spec.J / spec.coordination();
    auto links = bonds(spec);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(basis.size() * (2 * links.size() + 1));
    std::vector<Occupation> scratch;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        auto n = basis.state(i);
        trip.emplace_back(i, i, interaction_energy(n, spec.U));
        if (t == 0.0) continue;
        for (auto [a, b] : links) {
            auto emit = [&](std::span<const Occupation> m, double amp) { trip.emplace_back(basis.index(m), i, -t * amp); };
            hop(n, scratch, a, b, emit);
            hop(n, scratch, b, a, emit);
        }
    }
    RealSparse H(basis.size(), basis.size());
    H.setFromTriplets(trip.begin(), trip.end());
    return H;
}

// Matrix of a translation-invariant operator inside a momentum sector. `apply(n, emit)` must
// emit (target occupation, amplitude) for every term of the operator acting on n.
template <class Apply>
ComplexSparse sector_operator(const FockBasis& basis, const TranslationOrbits& orbits, const MomentumSector& sector,
                              Apply&& apply) {
    const double q = sector.momentum();
    std::vector<Eigen::Triplet<cplx>> trip;
    for (std::size_t col = 0; col < sector.size(); ++col) {
        std::uint32_t r = sector.orbits[col];
        auto n = basis.state(orbits.representative[r]);
        const double Pr = orbits.period[r];
        apply(n, [&](std::span<const Occupation> m, double amp) {
            std::size_t s = basis.index(m);
            std::uint32_t r2 = orbits.orbit_of[s];
            std::int64_t row = sector.position[r2];
            if (row < 0) return;  // the projection onto an incompatible orbit vanishes
            double l = orbits.shift_of[s];
            trip.emplace_back(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col),
                              amp * std::polar(std::sqrt(Pr / orbits.period[r2]), q * l));
        });
    }
    ComplexSparse M(sector.size(), sector.size());
    M.setFromTriplets(trip.begin(), trip.end());
    return M;
}

inline void require_periodic_chain(const LatticeSpec& spec, const FockBasis& basis) {
    require_matching(spec, basis);
    if (spec.dimension() != 1 || spec.boundary != Boundary::periodic)
        throw domain_error("momentum sectors are implemented for periodic chains only");
}

inline ComplexSparse sector_hamiltonian(const LatticeSpec& spec, const FockBasis& basis, const TranslationOrbits& orbits,
                                        const MomentumSector& sector) {
    require_periodic_chain(spec, basis);
    const double t = spec.J / spec.coordination();
    auto links = bonds(spec);
    std::vector<Occupation> scratch;
    return sector_operator(basis, orbits, sector, [&](std::span<const Occupation> n, auto&& emit) {
        emit(n, interaction_energy(n, spec.U));
        if (t == 0.0) return;
        auto scaled = [&](std::span<const Occupation> m, double amp) { emit(m, -t * amp); };
        for (auto [a, b] : links) {
            hop(n, scratch, a, b, scaled);
            hop(n, scratch, b, a, scaled);
        }
    });
}

// (1/L) sum_nu b+_{nu+s} b_nu inside a sector.
inline ComplexSparse sector_obdm(const FockBasis& basis, const TranslationOrbits& orbits, const MomentumSector& sector, int s) {
    const int L = basis.sites();
    const std::size_t shift = static_cast<std::size_t>(((s % L) + L) % L);
    std::vector<Occupation> scratch;
    return sector_operator(basis, orbits, sector, [&](std::span<const Occupation> n, auto&& emit) {
        if (shift == 0) {
            emit(n, double(basis.particles()) / L);
            return;
        }
        for (std::size_t nu = 0; nu < static_cast<std::size_t>(L); ++nu)
            hop(n, scratch, (nu + shift) % static_cast<std::size_t>(L), nu,
                [&](std::span<const Occupation> m, double amp) { emit(m, amp / L); });
    });
}

inline bool is_real(const ComplexSparse& M, double tol = 0.0) {
    for (int k = 0; k < M.outerSize(); ++k)
        for (ComplexSparse::InnerIterator it(M, k); it; ++it)
            if (std::abs(it.value().imag()) > tol) return false;
    return true;
}

inline RealSparse real_part(const ComplexSparse& M) { return M.real(); }

}  // namespace hubbard::ed
