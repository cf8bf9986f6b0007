#pragma once
#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "hubbard/ed/basis.hpp"
#include "hubbard/ed/hamiltonian.hpp"
#include "hubbard/ed/observables.hpp"
#include "hubbard/ed/solvers.hpp"
#include "hubbard/parallel.hpp"

namespace hubbard::ed {

// Periodic chain at fixed particle number with its translation orbits and momentum sectors.
// Sector observables keep references into this object, so it must outlive them.
class ChainSystem {
public:
    ChainSystem(LatticeSpec spec, int particles, std::size_t budget = default_state_budget)
        : spec_(std::move(spec)), basis_(particles, static_cast<int>(spec_.sites()), budget) {
        require_periodic_chain(spec_, basis_);
        orbits_ = translation_orbits(basis_);
        sectors_ = momentum_sectors(orbits_, basis_.sites());
    }

    const LatticeSpec& spec() const { return spec_; }
    const FockBasis& basis() const { return basis_; }
    const TranslationOrbits& orbits() const { return orbits_; }
    const MomentumSector& sector(int K) const { return sectors_.at(static_cast<std::size_t>(K)); }
    int sites() const { return basis_.sites(); }

    ComplexSparse hamiltonian(int K) const { return sector_hamiltonian(spec_, basis_, orbits_, sector(K)); }
    SectorObservables observables(int K) const { return SectorObservables(spec_, basis_, orbits_, sector(K)); }

    // Same chain with a different hopping; basis and orbits are rebuilt.
    ChainSystem with_hopping(double J) const { return ChainSystem(hubbard::with_hopping(spec_, J), basis_.particles()); }

private:
    LatticeSpec spec_;
    FockBasis basis_;
    TranslationOrbits orbits_;
    std::vector<MomentumSector> sectors_;
};

struct SectorState {
    int K = 0;
    double energy = 0.0;
    Eigen::VectorXcd vector;  // sector amplitudes, unit norm
    double residual = 0.0;
};

// Lowest `count` levels of sector K by Lanczos (real arithmetic for K = 0 and K = L/2).
inline std::vector<SectorState> lowest_states(const ChainSystem& sys, int K, int count, LanczosOptions opt = {}) {
    auto H = sys.hamiltonian(K);
    std::vector<SectorState> out;
    auto collect = [&](const auto& pairs) {
        for (int i = 0; i < count; ++i)
            out.push_back({K, pairs.values[i], pairs.vectors.col(i).template cast<cplx>(), pairs.residuals[static_cast<std::size_t>(i)]});
    };
    if (sys.sector(K).real())
        collect(lowest_eigenpairs<double>(SparseOperator<double>(H.real()), count, opt));
    else
        collect(lowest_eigenpairs<cplx>(H, count, opt));
    return out;
}

inline SectorState ground_state(const ChainSystem& sys, LanczosOptions opt = {}) {
    return lowest_states(sys, 0, 1, opt).front();
}

struct SectorSpectrum {
    int K = 0;
    Eigen::VectorXd energies;
    std::vector<Moments> moments;     // per eigenstate, empty unless requested
    Eigen::MatrixXcd vectors;         // columns, empty unless requested
};

struct SpectrumOptions {
    bool moments = true;
    std::set<int> keep_vectors;  // sectors whose eigenvectors are retained
    std::size_t dense_budget = default_dense_budget;
};

struct Spectrum {
    int L = 0;
    std::vector<SectorSpectrum> sectors;  // indexed by K

    double ground_energy() const {
        double e = std::numeric_limits<double>::infinity();
        for (const auto& s : sectors)
            if (s.energies.size() > 0) e = std::min(e, s.energies.minCoeff());
        return e;
    }
    std::size_t size() const {
        std::size_t n = 0;
        for (const auto& s : sectors) n += static_cast<std::size_t>(s.energies.size());
        return n;
    }
};

namespace detail {
inline SectorSpectrum diagonalize_sector(const ChainSystem& sys, int K, const SpectrumOptions& opt) {
    auto H = sys.hamiltonian(K);
    const auto& sector = sys.sector(K);
    bool vectors = opt.moments || opt.keep_vectors.count(K) > 0;
    SectorSpectrum out;
    out.K = K;
    Eigen::MatrixXcd V;
    if (sector.real()) {
        auto r = dense_eigensystem<double>(Eigen::MatrixXd(H.real()), vectors, opt.dense_budget);
        out.energies = r.values;
        if (vectors) V = r.vectors.cast<cplx>();
    } else {
        auto r = dense_eigensystem<cplx>(Eigen::MatrixXcd(H), vectors, opt.dense_budget);
        out.energies = r.values;
        if (vectors) V = std::move(r.vectors);
    }
    if (opt.moments) {
        auto obs = sys.observables(K);
        out.moments.reserve(static_cast<std::size_t>(V.cols()));
        for (Eigen::Index i = 0; i < V.cols(); ++i) out.moments.push_back(obs(V.col(i)));
    }
    if (opt.keep_vectors.count(K)) out.vectors = std::move(V);
    return out;
}

// Sector L - K holds the complex conjugates of the states of sector K.
inline SectorSpectrum conjugate_sector(const SectorSpectrum& s, int K) {
    SectorSpectrum out = s;
    out.K = K;
    for (auto& m : out.moments)
        for (auto& g : m.obdm) g = std::conj(g);
    out.vectors = s.vectors.conjugate();
    return out;
}
}  // namespace detail

// All eigenvalues (and per-state moments) of every momentum sector. Only K <= L/2 are
// diagonalised; the others are obtained by conjugation.
inline Spectrum full_spectrum(const ChainSystem& sys, SpectrumOptions opt = {}) {
    const int L = sys.sites();
    Spectrum out;
    out.L = L;
    out.sectors.resize(static_cast<std::size_t>(L));
    const int half = L / 2;
    SpectrumOptions inner = opt;
    for (int K : opt.keep_vectors)
        if (K > half) inner.keep_vectors.insert(L - K);
    parallel_for(static_cast<std::size_t>(half + 1), [&](std::size_t K) {
        out.sectors[K] = detail::diagonalize_sector(sys, static_cast<int>(K), inner);
    });
    for (int K = half + 1; K < L; ++K) out.sectors[static_cast<std::size_t>(K)] = detail::conjugate_sector(out.sectors[static_cast<std::size_t>(L - K)], K);
    for (int K = 0; K <= half; ++K)
        if (!opt.keep_vectors.count(K)) out.sectors[static_cast<std::size_t>(K)].vectors.resize(0, 0);
    return out;
}

// Canonical average at temperature T, shifted by the ground energy so the weights never overflow.
inline Moments thermal_moments(const Spectrum& spec, double T) {
    if (!(T > 0.0)) throw domain_error("temperature must be positive");
    double e0 = spec.ground_energy();
    Moments acc;
    bool first = true;
    for (const auto& s : spec.sectors) {
        if (s.moments.size() != static_cast<std::size_t>(s.energies.size()))
            throw domain_error("thermal averages need per-state moments from the full spectrum");
        for (Eigen::Index i = 0; i < s.energies.size(); ++i) {
            double w = std::exp(-(s.energies[i] - e0) / T);
            const auto& m = s.moments[static_cast<std::size_t>(i)];
            if (first) {
                acc = Moments(static_cast<int>(m.p.size()) - 1, m.obdm.size());
                first = false;
            }
            acc.add(m, w);
        }
    }
    return acc.normalized();
}

inline double thermal_energy(const Spectrum& spec, double T) {
    if (!(T > 0.0)) throw domain_error("temperature must be positive");
    double e0 = spec.ground_energy(), z = 0.0, e = 0.0;
    for (const auto& s : spec.sectors)
        for (Eigen::Index i = 0; i < s.energies.size(); ++i) {
            double w = std::exp(-(s.energies[i] - e0) / T);
            z += w;
            e += w * s.energies[i];
        }
    return e / z;
}

// Temperature at which the canonical p(n) equals `target` by bisection on [lo, hi];
// assumes the canonical p(n) is monotonic there (true for n = 0 in the Mott regime).
inline double fit_temperature(const Spectrum& spec, int n, double target, double lo, double hi, double tol = 1e-10) {
    auto f = [&](double T) { return thermal_moments(spec, T).p.at(static_cast<std::size_t>(n)) - target; };
    double flo = f(lo), fhi = f(hi);
    if (flo * fhi > 0.0) throw numeric_error("no temperature in the bracket reproduces the target occupation");
    while (hi - lo > tol * std::max(1.0, hi)) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Sudden quench from the unit-filling Fock state, which lives in K = 0 as a single orbit.
class QuenchSolution {
public:
    QuenchSolution(const ChainSystem& sys, std::size_t dense_budget = default_dense_budget)
        : sys_(sys), obs_(sys.observables(0)) {
        if (sys.basis().particles() != sys.sites()) throw domain_error("quench start needs unit filling (N = L)");
        auto H = sys.hamiltonian(0);
        auto r = dense_eigensystem<double>(Eigen::MatrixXd(H.real()), true, dense_budget);
        energies_ = r.values;
        vectors_ = std::move(r.vectors);
        std::vector<Occupation> ones(static_cast<std::size_t>(sys.sites()), 1);
        auto orbit = sys.orbits().orbit_of[sys.basis().index(ones)];
        auto pos = sys.sector(0).position[orbit];
        start_ = Eigen::VectorXd::Zero(vectors_.rows());
        start_[pos] = 1.0;
        overlap_ = vectors_.transpose() * start_;
    }

    // Moments at time t (exact spectral evolution).
    Moments at(double t) const {
        Eigen::VectorXcd phase(energies_.size());
        for (Eigen::Index i = 0; i < energies_.size(); ++i) phase[i] = overlap_[i] * std::polar(1.0, -energies_[i] * t);
        Eigen::VectorXcd psi = vectors_.cast<cplx>() * phase;
        return obs_(psi);
    }

    // Infinite-time average. Levels closer than `degeneracy` are treated as one block so the
    // cross terms inside degenerate blocks are kept.
    Moments diagonal_ensemble(double degeneracy = 1e-9) const {
        Moments acc = obs_(Eigen::VectorXcd::Zero(energies_.size()));
        Eigen::Index i = 0;
        while (i < energies_.size()) {
            Eigen::Index j = i + 1;
            while (j < energies_.size() && energies_[j] - energies_[j - 1] < degeneracy) ++j;
            Eigen::VectorXd block = vectors_.middleCols(i, j - i) * overlap_.segment(i, j - i);
            acc.add(obs_(block), 1.0);
            i = j;
        }
        return acc.normalized();
    }

    const Eigen::VectorXd& energies() const { return energies_; }
    const Eigen::VectorXd& overlaps() const { return overlap_; }

private:
    const ChainSystem& sys_;
    SectorObservables obs_;
    Eigen::VectorXd energies_;
    Eigen::MatrixXd vectors_;
    Eigen::VectorXd start_;
    Eigen::VectorXd overlap_;
};

struct BandFit {
    double gap = 0.0;    // E_02 - E_01
    double v_eff = 0.0;  // from omega_K^2 = gap^2 + K^2 v_eff^2 at the smallest K = 2 pi / L
};

// E01, E02 are the two lowest K = 0 levels and E11 the lowest K = 1 level.
inline BandFit lowest_band_fit(double E01, double E02, double E11, int L) {
    double k = 2.0 * std::numbers::pi / L;
    double g = E02 - E01, w = E11 - E01;
    double v2 = (w * w - g * g) / (k * k);
    if (v2 < 0.0) throw numeric_error("lowest band is not pseudo-relativistic: E11 - E01 below the K = 0 gap");
    return {g, std::sqrt(v2)};
}

inline BandFit lowest_band_fit(const ChainSystem& sys, LanczosOptions opt = {}) {
    auto k0 = lowest_states(sys, 0, 2, opt);
    auto k1 = lowest_states(sys, 1, 1, opt);
    return lowest_band_fit(k0[0].energy, k0[1].energy, k1[0].energy, sys.sites());
}

inline double analytic_v_eff(double J, double U) {
    if (J < 0.0 || J > 3.0 * U) throw domain_error("effective velocity needs 0 <= J <= 3U");
    return 0.5 * std::sqrt(J * (3.0 * U - J));
}

}  // namespace hubbard::ed
