// Depletion and nearest-neighbour density correlation after a sudden Mott quench.
#include <cstdio>

#include "hubbard/bose_z2.hpp"

int main() {
    using namespace hubbard;
    auto spec = LatticeSpec::chain(256, 0.1, 1.0);
    auto grid = momentum_grid(spec);
    std::printf("%6s %12s %14s\n", "t", "depletion", "<nn>-1 (s=1)");
    for (double t = 0.0; t <= 10.0; t += 1.0) {
        auto c = quench_correlators(spec, grid, t);
        std::printf("%6.1f %12.6f %14.6e\n", t, c.depletion, number_correlation(c, grid, axis_displacement(1, 1)));
    }
    std::printf("long-time depletion %.6f, effective temperature %.4f U\n", quasi_equilibrium(spec, grid).depletion,
                effective_temperature(spec, grid));
}
