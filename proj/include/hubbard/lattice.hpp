#pragma once
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hubbard/errors.hpp"

namespace hubbard {

using cplx = std::complex<double>;
using Wavevector = std::vector<double>;
using Displacement = std::vector<int>;

enum class Boundary { periodic, open };

inline std::string to_string(Boundary b) { return b == Boundary::periodic ? "periodic" : "open"; }

inline Boundary boundary_from_string(const std::string& s) {
    if (s == "periodic") return Boundary::periodic;
    if (s == "open") return Boundary::open;
    throw domain_error("boundary must be 'periodic' or 'open', got '" + s + "'");
}

// Nearest-neighbour hypercubic lattice with couplings. Z = 2D always.
struct LatticeSpec {
    std::vector<int> extent{1};
    double J = 0.0;
    double U = 1.0;
    Boundary boundary = Boundary::periodic;

    int dimension() const { return static_cast<int>(extent.size()); }
    int coordination() const { return 2 * dimension(); }

    std::size_t sites() const {
        std::size_t n = 1;
        for (int l : extent) n *= static_cast<std::size_t>(l);
        return n;
    }

    void validate() const {
        if (extent.empty()) throw domain_error("dimension must be positive");
        for (int l : extent)
            if (l < 1) throw domain_error("extent entries must be positive");
        if (!(J >= 0.0) || !std::isfinite(J)) throw domain_error("J must be finite and non-negative");
        if (!(U > 0.0) || !std::isfinite(U)) throw domain_error("U must be finite and positive");
    }

    static LatticeSpec chain(int length, double J, double U, Boundary b = Boundary::periodic) {
        return LatticeSpec{{length}, J, U, b};
    }
    static LatticeSpec cubic(int dim, int length, double J, double U) {
        return LatticeSpec{std::vector<int>(static_cast<std::size_t>(dim), length), J, U, Boundary::periodic};
    }
};

inline LatticeSpec with_hopping(LatticeSpec s, double J) {
    s.J = J;
    return s;
}

// T_k = (1/D) sum_i cos k_i
inline double structure_factor(int dimension, std::span<const double> k) {
    double sum = 0.0;
    for (double ki : k) sum += std::cos(ki);
    return sum / dimension;
}

inline double structure_factor(const LatticeSpec& spec, std::span<const double> k) {
    return structure_factor(spec.dimension(), k);
}

// Gradient of T_k with respect to k.
inline Wavevector structure_gradient(std::span<const double> k) {
    Wavevector g(k.size());
    for (std::size_t i = 0; i < k.size(); ++i) g[i] = -std::sin(k[i]) / static_cast<double>(k.size());
    return g;
}

// T_k = 1 - xi |k|^2 + O(k^4)
inline double stiffness(const LatticeSpec& spec) { return 1.0 / (2.0 * spec.dimension()); }

// Site index <-> integer coordinates, first axis slowest.
inline std::vector<int> site_coords(const std::vector<int>& extent, std::size_t index) {
    std::vector<int> x(extent.size());
    for (std::size_t a = extent.size(); a-- > 0;) {
        x[a] = static_cast<int>(index % static_cast<std::size_t>(extent[a]));
        index /= static_cast<std::size_t>(extent[a]);
    }
    return x;
}

inline std::size_t site_index(const std::vector<int>& extent, std::span<const int> x) {
    std::size_t idx = 0;
    for (std::size_t a = 0; a < extent.size(); ++a) {
        int l = extent[a];
        idx = idx * static_cast<std::size_t>(l) + static_cast<std::size_t>(((x[a] % l) + l) % l);
    }
    return idx;
}

class MomentumGrid {
public:
    explicit MomentumGrid(std::vector<int> extent) : extent_(std::move(extent)) {
        std::size_t n = 1;
        for (int l : extent_) n *= static_cast<std::size_t>(l);
        weight_ = 1.0 / static_cast<double>(n);
        points_.reserve(n);
        structure_.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            auto m = site_coords(extent_, i);
            Wavevector k(m.size());
            for (std::size_t a = 0; a < m.size(); ++a)
                k[a] = 2.0 * std::numbers::pi * m[a] / extent_[a];
            structure_.push_back(structure_factor(static_cast<int>(k.size()), k));
            points_.push_back(std::move(k));
        }
    }

    std::size_t size() const { return points_.size(); }
    int dimension() const { return static_cast<int>(extent_.size()); }
    const std::vector<int>& extent() const { return extent_; }
    double weight() const { return weight_; }
    const Wavevector& point(std::size_t i) const { return points_[i]; }
    const std::vector<Wavevector>& points() const { return points_; }
    double structure(std::size_t i) const { return structure_[i]; }
    const std::vector<double>& structures() const { return structure_; }

    std::vector<int> indices(std::size_t i) const { return site_coords(extent_, i); }

    // index of -k (mod 2 pi)
    std::size_t negated(std::size_t i) const {
        auto m = site_coords(extent_, i);
        for (auto& v : m) v = -v;
        return site_index(extent_, m);
    }

    // k with each component folded into (-pi, pi]
    Wavevector centered(std::size_t i) const {
        Wavevector k = points_[i];
        for (auto& v : k)
            if (v > std::numbers::pi + 1e-12) v -= 2.0 * std::numbers::pi;
        return k;
    }

    // (1/N) sum_k v_k exp(i k.s)
    template <class Values>
    cplx fourier(const Values& v, std::span<const int> s) const {
        auto phases = phase_tables(s);
        cplx sum = 0.0;
        for (std::size_t i = 0; i < size(); ++i) sum += cplx(v[i]) * phase(phases, i);
        return sum * weight_;
    }

    // exp(i k_i.s) for every grid point
    std::vector<cplx> plane_wave(std::span<const int> s) const {
        auto phases = phase_tables(s);
        std::vector<cplx> out(size());
        for (std::size_t i = 0; i < size(); ++i) out[i] = phase(phases, i);
        return out;
    }

private:
    std::vector<std::vector<cplx>> phase_tables(std::span<const int> s) const {
        std::vector<std::vector<cplx>> t(extent_.size());
        for (std::size_t a = 0; a < extent_.size(); ++a) {
            t[a].resize(static_cast<std::size_t>(extent_[a]));
            int sa = a < s.size() ? s[a] : 0;
            for (int m = 0; m < extent_[a]; ++m)
                t[a][static_cast<std::size_t>(m)] = std::polar(1.0, 2.0 * std::numbers::pi * m * sa / extent_[a]);
        }
        return t;
    }

    cplx phase(const std::vector<std::vector<cplx>>& t, std::size_t i) const {
        cplx p = 1.0;
        for (std::size_t a = extent_.size(); a-- > 0;) {
            std::size_t l = static_cast<std::size_t>(extent_[a]);
            p *= t[a][i % l];
            i /= l;
        }
        return p;
    }

    std::vector<int> extent_;
    std::vector<Wavevector> points_;
    std::vector<double> structure_;
    double weight_ = 1.0;
};

inline MomentumGrid momentum_grid(const LatticeSpec& spec) {
    if (spec.boundary != Boundary::periodic)
        throw domain_error("momentum grid requires a periodic boundary");
    spec.validate();
    return MomentumGrid(spec.extent);
}

// Same lattice couplings on a dense periodic grid standing in for the infinite lattice.
inline LatticeSpec dense_spec(const LatticeSpec& spec, int per_dimension = 256) {
    LatticeSpec out = spec;
    out.extent.assign(static_cast<std::size_t>(spec.dimension()), per_dimension);
    out.boundary = Boundary::periodic;
    return out;
}

// Neighbours of one site; a periodic axis of length 2 links the pair once.
inline std::vector<std::size_t> neighbors(const LatticeSpec& spec, std::size_t site) {
    std::vector<std::size_t> out;
    auto x = site_coords(spec.extent, site);
    for (std::size_t a = 0; a < x.size(); ++a) {
        int l = spec.extent[a];
        for (int step : {-1, 1}) {
            int y = x[a] + step;
            if (spec.boundary == Boundary::open && (y < 0 || y >= l)) continue;
            auto z = x;
            z[a] = ((y % l) + l) % l;
            std::size_t j = site_index(spec.extent, z);
            if (j == site) continue;
            bool seen = false;
            for (auto o : out) seen = seen || o == j;
            if (!seen) out.push_back(j);
        }
    }
    return out;
}

inline constexpr std::size_t adjacency_site_budget = 4096;

// Symmetric 0/1 tunnelling matrix T_{mu nu}.
inline Eigen::MatrixXi adjacency(const LatticeSpec& spec) {
    spec.validate();
    std::size_t n = spec.sites();
    if (n > adjacency_site_budget) throw budget_error("adjacency matrix larger than the site budget");
    Eigen::MatrixXi t = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (auto j : neighbors(spec, i)) t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1;
    return t;
}

// Undirected bonds (i < j).
inline std::vector<std::pair<std::size_t, std::size_t>> bonds(const LatticeSpec& spec) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < spec.sites(); ++i)
        for (auto j : neighbors(spec, i))
            if (i < j) out.emplace_back(i, j);
    return out;
}

// Unit displacement along the first axis, the nearest-neighbour separation used by most tables.
inline Displacement axis_displacement(int dimension, int s) {
    Displacement d(static_cast<std::size_t>(dimension), 0);
    d[0] = s;
    return d;
}

}  // namespace hubbard
