// Ground-state momentum distribution of a small ring: exact diagonalisation against the 1/Z result.
#include <cstdio>

#include "hubbard/app.hpp"

int main() {
    using namespace hubbard;
    auto report = app::compare_ed_z1(LatticeSpec::chain(8, 0.1, 1.0));
    std::printf("%-28s %12s %12s %10s\n", "momentum", "first order", "exact", "deviation");
    for (const auto& r : report.rows)
        std::printf("%-28s %12.6f %12.6f %9.2f%%\n", r.label.c_str(), r.analytic, r.oracle, 100 * r.deviation);
}
