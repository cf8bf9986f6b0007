#pragma once
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "hubbard/errors.hpp"

namespace hubbard::ed {

using Occupation = std::uint8_t;

inline constexpr std::size_t default_state_budget = 5'000'000;

// Number of ways to put p bosons on s sites, C(p + s - 1, s - 1); saturates instead of overflowing.
inline std::uint64_t arrangements(int sites, int particles) {
    if (sites <= 0) return particles == 0 ? 1 : 0;
    if (particles < 0) return 0;
    std::uint64_t r = 1;
    int k = std::min(particles, sites - 1);
    for (int i = 1; i <= k; ++i) {
        std::uint64_t num = static_cast<std::uint64_t>(particles + sites - 1 - k + i);
        if (r > std::numeric_limits<std::uint64_t>::max() / num) return std::numeric_limits<std::uint64_t>::max();
        r = r * num / static_cast<std::uint64_t>(i);
    }
    return r;
}

inline std::uint64_t fock_dimension(int N, int L) { return arrangements(L, N); }

// All occupation tuples with sum N on L sites, ordered lexicographically from (N, 0, ..., 0)
// down to (0, ..., 0, N). Ranks are computed arithmetically, so no lookup table is stored.
class FockBasis {
public:
    FockBasis(int N, int L, std::size_t budget = default_state_budget) : N_(N), L_(L) {
        if (N < 1 || L < 1) throw domain_error("Fock basis needs N >= 1 and L >= 1");
        if (N > std::numeric_limits<Occupation>::max()) throw domain_error("at most 255 bosons are supported");
        std::uint64_t D = fock_dimension(N, L);
        if (D > budget) throw budget_error("Fock dimension exceeds the configured state budget");
        ways_.assign(static_cast<std::size_t>(L + 1) * static_cast<std::size_t>(N + 1), 0);
        for (int s = 0; s <= L; ++s)
            for (int p = 0; p <= N; ++p) ways_[slot(s, p)] = arrangements(s, p);
        size_ = static_cast<std::size_t>(D);
        occ_.resize(size_ * static_cast<std::size_t>(L));
        std::vector<Occupation> cur(static_cast<std::size_t>(L), 0);
        cur[0] = static_cast<Occupation>(N);
        for (std::size_t i = 0; i < size_; ++i) {
            std::copy(cur.begin(), cur.end(), occ_.begin() + static_cast<std::ptrdiff_t>(i * L));
            advance(cur);
        }
    }

    std::size_t size() const { return size_; }
    int particles() const { return N_; }
    int sites() const { return L_; }

    std::span<const Occupation> state(std::size_t i) const {
        return {occ_.data() + i * static_cast<std::size_t>(L_), static_cast<std::size_t>(L_)};
    }

    std::size_t index(std::span<const Occupation> n) const {
        std::size_t rank = 0;
        int rem = N_;
        for (int i = 0; i + 1 < L_; ++i) {
            int ni = n[static_cast<std::size_t>(i)];
            if (rem - ni - 1 >= 0) rank += static_cast<std::size_t>(ways_[slot(L_ - i, rem - ni - 1)]);
            rem -= ni;
        }
        return rank;
    }

private:
    std::size_t slot(int s, int p) const { return static_cast<std::size_t>(s) * static_cast<std::size_t>(N_ + 1) + p; }

    // Lexicographic predecessor: move one boson from the last occupied non-final site to the right.
    void advance(std::vector<Occupation>& n) const {
        int i = L_ - 2;
        while (i >= 0 && n[static_cast<std::size_t>(i)] == 0) --i;
        if (i < 0) return;
        int tail = n[static_cast<std::size_t>(L_ - 1)];
        n[static_cast<std::size_t>(L_ - 1)] = 0;
        --n[static_cast<std::size_t>(i)];
        n[static_cast<std::size_t>(i + 1)] = static_cast<Occupation>(tail + 1);
    }

    int N_, L_;
    std::size_t size_ = 0;
    std::vector<Occupation> occ_;
    std::vector<std::uint64_t> ways_;
};

// Translation orbits of a periodic chain: (T n)_mu = n_{mu-1}.
// Every Fock state s satisfies s = T^shift(s) rep(orbit(s)).
struct TranslationOrbits {
    std::vector<std::uint32_t> orbit_of;
    std::vector<std::uint16_t> shift_of;
    std::vector<std::size_t> representative;  // Fock index of the lexicographically smallest member
    std::vector<int> period;

    std::size_t size() const { return representative.size(); }
};

inline void translate(std::span<const Occupation> in, std::span<Occupation> out) {
    std::size_t L = in.size();
    for (std::size_t m = 0; m < L; ++m) out[(m + 1) % L] = in[m];
}

inline TranslationOrbits translation_orbits(const FockBasis& basis) {
    const std::size_t D = basis.size();
    const int L = basis.sites();
    TranslationOrbits o;
    constexpr auto unset = std::numeric_limits<std::uint32_t>::max();
    o.orbit_of.assign(D, unset);
    o.shift_of.assign(D, 0);
    std::vector<std::size_t> members;
    std::vector<Occupation> a(static_cast<std::size_t>(L)), b(static_cast<std::size_t>(L));
    for (std::size_t s = 0; s < D; ++s) {
        if (o.orbit_of[s] != unset) continue;
        members.clear();
        members.push_back(s);
        auto st = basis.state(s);
        std::copy(st.begin(), st.end(), a.begin());
        for (int j = 1; j < L; ++j) {
            translate(a, b);
            std::swap(a, b);
            std::size_t idx = basis.index(a);
            if (idx == s) break;
            members.push_back(idx);
        }
        // lexicographically smallest tuple = largest rank in this ordering
        std::size_t j0 = static_cast<std::size_t>(std::max_element(members.begin(), members.end()) - members.begin());
        int P = static_cast<int>(members.size());
        auto id = static_cast<std::uint32_t>(o.representative.size());
        o.representative.push_back(members[j0]);
        o.period.push_back(P);
        for (int j = 0; j < P; ++j) {
            o.orbit_of[members[static_cast<std::size_t>(j)]] = id;
            o.shift_of[members[static_cast<std::size_t>(j)]] = static_cast<std::uint16_t>(((j - static_cast<int>(j0)) % P + P) % P);
        }
    }
    return o;
}

// States |K, r> = P_r^{-1/2} sum_{j < P_r} exp(-i q j) T^j |r>, q = 2 pi K / L,
// for the orbits whose period P_r satisfies K P_r = 0 mod L.
struct MomentumSector {
    int K = 0;
    int L = 1;
    std::vector<std::uint32_t> orbits;    // orbit ids, in increasing order
    std::vector<std::int64_t> position;   // orbit id -> position in this sector, -1 if absent

    std::size_t size() const { return orbits.size(); }
    double momentum() const { return 2.0 * std::numbers::pi * K / L; }
    // K = 0 and K = L/2 carry only phases +-1, so their matrices are real.
    bool real() const { return (2 * K) % L == 0; }
};

inline MomentumSector momentum_sector(const TranslationOrbits& o, int K, int L) {
    if (K < 0 || K >= L) throw domain_error("momentum index must lie in [0, L)");
    MomentumSector s;
    s.K = K;
    s.L = L;
    s.position.assign(o.size(), -1);
    for (std::uint32_t r = 0; r < o.size(); ++r) {
        if ((static_cast<long>(K) * o.period[r]) % L != 0) continue;
        s.position[r] = static_cast<std::int64_t>(s.orbits.size());
        s.orbits.push_back(r);
    }
    return s;
}

inline std::vector<MomentumSector> momentum_sectors(const TranslationOrbits& o, int L) {
    std::vector<MomentumSector> out;
    for (int K = 0; K < L; ++K) out.push_back(momentum_sector(o, K, L));
    return out;
}

}  // namespace hubbard::ed
