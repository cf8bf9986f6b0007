#pragma once
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "hubbard/bose_tilt.hpp"
#include "hubbard/bose_z1.hpp"
#include "hubbard/bose_z2.hpp"
#include "hubbard/ed.hpp"
#include "hubbard/fermi.hpp"
#include "hubbard/floquet.hpp"
#include "hubbard/io/config.hpp"
#include "hubbard/io/report.hpp"
#include "hubbard/io/table.hpp"

// Experiment orchestration behind the command-line tool. Every experiment maps a RunConfig
// to one Table whose meta echoes the configuration.
namespace hubbard::app {

using io::json;
using io::RunConfig;
using io::Table;

enum ExitCode { ok = 0, config_failure = 2, numeric_failure = 3, budget_failure = 4 };

inline std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v;
    if (n == 1) return {a};
    for (int i = 0; i < n; ++i) v.push_back(a + (b - a) * i / (n - 1));
    return v;
}

inline std::vector<std::string> k_columns(int dim) {
    std::vector<std::string> c;
    for (int a = 0; a < dim; ++a) c.push_back("k" + std::to_string(a + 1));
    return c;
}

inline Table with_k_columns(int dim, std::vector<std::string> rest, const RunConfig& cfg) {
    auto cols = k_columns(dim);
    cols.insert(cols.end(), rest.begin(), rest.end());
    return Table(cols, json{{"config", cfg.data()}});
}

inline std::vector<double> row_with_k(const MomentumGrid& grid, std::size_t i, std::initializer_list<double> rest) {
    auto k = grid.centered(i);
    std::vector<double> r(k.begin(), k.end());
    r.insert(r.end(), rest);
    return r;
}

inline PulseProfile pulse_from(const RunConfig& cfg, int dim) {
    double E0 = cfg.number("numeric.E0"), tau = cfg.number("numeric.tau");
    auto shape = pulse_shape_from_string(cfg.text("numeric.pulse"));
    switch (shape) {
        case PulseShape::window: return PulseProfile::window(E0, tau, dim);
        case PulseShape::constant: return PulseProfile::constant(E0, tau, dim);
        case PulseShape::sauter: return PulseProfile::sauter(E0, tau, dim);
        default: throw io::config_error("key 'numeric.pulse' must be sauter, window or constant");
    }
}

// ---- first-order bosonic experiments

inline Table bose_mode_table(const LatticeSpec& spec, const MomentumGrid& grid, const BoseCorrelators& c,
                             const RunConfig& cfg) {
    Table t = with_k_columns(grid.dimension(), {"T", "omega_sq", "f11", "f12_re", "f12_im", "P_k"}, cfg);
    auto P = momentum_distribution(c, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& m = c.modes[i];
        t.add(row_with_k(grid, i, {grid.structure(i), omega_bose(spec.J, spec.U, grid.structure(i)).omega_sq,
                                   m.f11.real(), m.f12.real(), m.f12.imag(), P[i]}));
    }
    t.meta["depletion"] = c.depletion;
    return t;
}

inline Table bose_ground(const RunConfig& cfg) {
    auto spec = cfg.lattice();
    auto grid = momentum_grid(spec);
    return bose_mode_table(spec, grid, ground_correlators(spec, grid), cfg);
}

inline Table bose_equilibrate(const RunConfig& cfg) {
    auto spec = cfg.lattice();
    auto grid = momentum_grid(spec);
    auto t = bose_mode_table(spec, grid, quasi_equilibrium(spec, grid), cfg);
    t.meta["effective_temperature"] = effective_temperature(spec, grid);
    return t;
}

inline Table bose_quench(const RunConfig& cfg) {
    auto spec = cfg.lattice();
    auto grid = momentum_grid(spec);
    Table t({"t", "depletion", "obdm_s1", "obdm_s2"}, json{{"config", cfg.data()}});
    const int dim = spec.dimension();
    for (double time : linspace(0.0, cfg.number("numeric.t_final"), cfg.integer("numeric.samples"))) {
        auto c = quench_correlators(spec, grid, time);
        t.add({time, c.depletion, quench_obdm(spec, grid, time, axis_displacement(dim, 1)),
               quench_obdm(spec, grid, time, axis_displacement(dim, 2))});
    }
    return t;
}

inline Table bose_tilt(const RunConfig& cfg) {
    auto spec = cfg.lattice();
    auto pulse = pulse_from(cfg, spec.dimension());
    auto grid = momentum_grid(dense_spec(spec, cfg.integer("numeric.grid")));
    TiltOptions opt;
    opt.dt = cfg.number("numeric.dt");
    auto pc = pair_creation_rate(spec, pulse, grid, opt);
    Table t = with_k_columns(grid.dimension(), {"beta_sq"}, cfg);
    for (std::size_t i = 0; i < grid.size(); ++i) t.add(row_with_k(grid, i, {pc.beta_sq[i]}));
    t.meta["density"] = pc.density;
    t.meta["P_exc"] = pc.rate;
    return t;
}

inline FloquetDrive drive_from(const RunConfig& cfg) {
    auto spec = cfg.lattice();
    auto d = FloquetDrive::chain(cfg.number("numeric.E0"), spec.U, spec.J, cfg.number("numeric.k"));
    d.Z = spec.coordination();
    d.validate();
    return d;
}

// Rows U, sin2_pinu_det, sin2_pinu_mono, Im_nu over the configured U range.
inline Table bose_floquet(const RunConfig& cfg) {
    auto drive = drive_from(cfg);
    std::vector<double> Us{drive.U};
    auto range = cfg.text("numeric.range");
    if (!range.empty()) {
        double a = 0, b = 0;
        int n = 0;
        if (std::sscanf(range.c_str(), "%lf:%lf:%d", &a, &b, &n) != 3 || n < 1 || !(a > 0.0) || b < a)
            throw io::config_error("key 'numeric.range' must read lo:hi:count with 0 < lo <= hi");
        Us = linspace(a, b, n);
    }
    Table t({"U", "sin2_pinu_det", "sin2_pinu_mono", "Im_nu"}, json{{"config", cfg.data()}});
    std::vector<std::vector<double>> rows(Us.size());
    parallel_for(Us.size(), [&](std::size_t i) {
        auto d = drive;
        d.U = Us[i];
        auto m = monodromy_exponent(d);
        HillOptions h;
        h.require_convergence = false;
        auto det = determinant_relation(d, h);
        rows[i] = {Us[i], det.sin2_pinu, m.sin2_pinu, m.nu.imag()};
    });
    for (auto& r : rows) t.add(std::move(r));
    return t;
}

// ---- first-order fermionic experiments

inline Table fermi_mode_table(const MomentumGrid& grid, const FermiCorrelators& c, const RunConfig& cfg,
                              const LatticeSpec& spec) {
    Table t = with_k_columns(grid.dimension(), {"T", "omega", "f0A1B_re", "f0A1B_im", "f1B1B"}, cfg);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& m = c.modes[i];
        t.add(row_with_k(grid, i, {grid.structure(i), omega_fermi(spec.J, spec.U, grid.structure(i)), m.f0A1B.real(),
                                   m.f0A1B.imag(), m.f1B1B.real()}));
    }
    t.meta["double_occupancy"] = c.double_occupancy;
    return t;
}

inline Table fermi_ground(const RunConfig& cfg) {
    auto spec = cfg.lattice();
    auto grid = momentum_grid(spec);
    return fermi_mode_table(grid, ground_correlators_fermi(spec, grid), cfg, spec);
}

inline Table fermi_equilibrate(const RunConfig& cfg) {
    auto spec = cfg.lattice();
    auto grid = momentum_grid(spec);
    return fermi_mode_table(grid, quasi_equilibrium_fermi(spec, grid), cfg, spec);
}

inline Table fermi_quench(const RunConfig& cfg) {
    auto spec = cfg.lattice();
    auto grid = momentum_grid(spec);
    Table t({"t", "double_occupancy", "hop_s1"}, json{{"config", cfg.data()}});
    auto s1 = axis_displacement(spec.dimension(), 1);
    for (double time : linspace(0.0, cfg.number("numeric.t_final"), cfg.integer("numeric.samples"))) {
        auto c = quench_correlators_fermi(spec, grid, time);
        t.add({time, c.double_occupancy, fermi_real_space(c, grid, s1, &FermiModeCorrelators::f0A1B).real()});
    }
    return t;
}

inline Table fermi_tilt(const RunConfig& cfg) {
    auto spec = cfg.lattice();
    auto pulse = pulse_from(cfg, spec.dimension());
    auto grid = momentum_grid(dense_spec(spec, cfg.integer("numeric.grid")));
    auto pc = dirac_pair_creation(spec, pulse, grid, cfg.number("numeric.dt"));
    Table t = with_k_columns(grid.dimension(), {"beta_sq"}, cfg);
    for (std::size_t i = 0; i < grid.size(); ++i) t.add(row_with_k(grid, i, {pc.beta_sq[i]}));
    t.meta["double_occupancy"] = pc.double_occupancy;
    if (pulse.E0 > 0.0)
        t.meta["tunneling_estimate"] =
            dirac_tunneling_estimate(spec, pulse.E0, gap_minimum_point(spec.dimension()), pulse.direction);
    return t;
}

inline Table fermi_staggered(const RunConfig& cfg) {
    auto spec = cfg.lattice();
    auto field = StaggeredField::checkerboard(spec, cfg.number("numeric.a"));
    auto grid = momentum_grid(spec);
    Table t = with_k_columns(grid.dimension(), {"T", "soft", "hard", "charge"}, cfg);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        auto w = staggered_frequencies(spec.J, spec.U, field.a, grid.structure(i));
        t.add(row_with_k(grid, i, {grid.structure(i), w.soft.soft, w.soft.hard, w.charge}));
    }
    return t;
}

// ---- exact diagonalisation

inline int particles(const RunConfig& cfg) {
    int n = cfg.integer("numeric.particles");
    return n > 0 ? n : static_cast<int>(cfg.lattice().sites());
}

inline bool periodic_chain(const LatticeSpec& spec) {
    return spec.dimension() == 1 && spec.boundary == Boundary::periodic;
}

inline Table ed_spectrum(const RunConfig& cfg) {
    ed::ChainSystem sys(cfg.lattice(), particles(cfg));
    ed::SpectrumOptions opt;
    opt.moments = false;
    auto sp = ed::full_spectrum(sys, opt);
    Table t({"K", "Omega", "E"}, json{{"config", cfg.data()}});
    for (const auto& s : sp.sectors)
        for (Eigen::Index i = 0; i < s.energies.size(); ++i) t.add({double(s.K), double(i + 1), s.energies[i]});
    return t;
}

inline Table observables_table(const ed::Observables& o, const RunConfig& cfg) {
    Table t({"s", "obdm_re", "obdm_im", "parity_correlation", "number_correlation"}, json{{"config", cfg.data()}});
    for (std::size_t s = 0; s < o.obdm.size(); ++s)
        t.add({double(s), o.obdm[s].real(), o.obdm[s].imag(), o.parity_correlation[s], o.number_correlation[s]});
    t.meta["p"] = o.p;
    if (!o.momentum.empty()) t.meta["P_k"] = o.momentum;
    return t;
}

inline Table ed_ground(const RunConfig& cfg) {
    auto spec = cfg.lattice();
    if (periodic_chain(spec)) {
        ed::ChainSystem sys(spec, particles(cfg));
        auto g = ed::ground_state(sys);
        auto t = observables_table(ed::finalize(sys.observables(0)(g.vector), spec.extent, true), cfg);
        t.meta["energy"] = g.energy;
        t.meta["residual"] = g.residual;
        return t;
    }
    ed::FockBasis basis(particles(cfg), static_cast<int>(spec.sites()));
    auto g = ed::fock_ground_state(spec, basis);
    auto m = ed::fock_moments(spec, basis, g.vector);
    auto t = observables_table(ed::finalize(m, spec.extent, spec.boundary == Boundary::periodic), cfg);
    t.meta["energy"] = g.energy;
    t.meta["residual"] = g.residual;
    return t;
}

inline std::vector<double> moment_row(const ed::Moments& raw, std::initializer_list<double> head) {
    auto m = raw.normalized();
    std::vector<double> r(head);
    for (int n = 0; n < 3; ++n) r.push_back(n < static_cast<int>(m.p.size()) ? m.p[static_cast<std::size_t>(n)] : 0.0);
    r.push_back(m.obdm.size() > 1 ? m.obdm[1].real() : 0.0);
    r.push_back(m.obdm.size() > 2 ? m.obdm[2].real() : 0.0);
    return r;
}

// Canonical scan over samples temperatures in (0, numeric.T].
inline Table ed_thermal(const RunConfig& cfg) {
    ed::ChainSystem sys(cfg.lattice(), particles(cfg));
    auto sp = ed::full_spectrum(sys);
    Table t({"T", "energy", "p0", "p1", "p2", "obdm_s1", "obdm_s2"}, json{{"config", cfg.data()}});
    const int n = cfg.integer("numeric.samples");
    const double Tmax = cfg.number("numeric.T");
    for (int i = 1; i <= n; ++i) {
        double T = Tmax * i / n;
        t.add(moment_row(ed::thermal_moments(sp, T), {T, ed::thermal_energy(sp, T)}));
    }
    return t;
}

inline Table ed_quench(const RunConfig& cfg) {
    ed::ChainSystem sys(cfg.lattice(), particles(cfg));
    ed::QuenchSolution q(sys);
    Table t({"t", "p0", "p1", "p2", "obdm_s1", "obdm_s2"}, json{{"config", cfg.data()}});
    for (double time : linspace(0.0, cfg.number("numeric.t_final"), cfg.integer("numeric.samples")))
        t.add(moment_row(q.at(time), {time}));
    auto de = q.diagonal_ensemble();
    t.meta["diagonal_p"] = de.p;
    t.meta["diagonal_obdm_s1"] = de.obdm.size() > 1 ? de.obdm[1].real() : 0.0;
    return t;
}

inline Table ed_tilt(const RunConfig& cfg) {
    auto spec = cfg.lattice();
    spec.boundary = Boundary::open;
    ed::FockBasis basis(particles(cfg), static_cast<int>(spec.sites()));
    auto g = ed::fock_ground_state(spec, basis);
    double E0 = cfg.number("numeric.E0"), tau = cfg.number("numeric.tau");
    ed::TiltEdOptions opt;
    opt.dt = cfg.number("numeric.dt");
    auto r = ed::tilt_evolution(spec, basis, g.vector, PulseProfile::window(E0, tau, spec.dimension()), opt);
    Table t({"tau", "E0", "P_exc", "norm_drift", "dt"}, json{{"config", cfg.data()}});
    t.add({tau, E0, r.p_exc, r.norm_drift, r.dt});
    return t;
}

// ED ground-state P(k) against the first-order result on the same periodic chain.
inline io::ComparisonReport compare_ed_z1(const LatticeSpec& spec, double tolerance = 0.2) {
    ed::ChainSystem sys(spec, static_cast<int>(spec.sites()));
    auto g = ed::ground_state(sys);
    auto o = ed::finalize(sys.observables(0)(g.vector), spec.extent, true);
    auto grid = momentum_grid(spec);
    auto z1 = momentum_distribution(ground_correlators(spec, grid), grid);
    io::ComparisonReport rep;
    for (std::size_t i = 0; i < grid.size(); ++i)
        rep.add("k=" + io::format_double(grid.centered(i)[0]), z1[i], o.momentum[i], tolerance);
    return rep;
}

inline Table compare_ed_z1_table(const RunConfig& cfg) {
    auto spec = cfg.lattice();
    auto rep = compare_ed_z1(spec);
    auto grid = momentum_grid(spec);
    Table t({"k", "P_k_z1", "P_k_ed", "deviation", "tolerance", "pass"}, json{{"config", cfg.data()}});
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const auto& r = rep.rows[i];
        t.add({grid.centered(i)[0], r.analytic, r.oracle, r.deviation, r.tolerance, r.pass ? 1.0 : 0.0});
    }
    t.meta["pass"] = rep.pass();
    return t;
}

// ---- dispatch

inline const std::map<std::string, std::function<Table(const RunConfig&)>>& experiments() {
    static const std::map<std::string, std::function<Table(const RunConfig&)>> table{
        {"bose/ground", bose_ground},
        {"bose/quench", bose_quench},
        {"bose/equilibrate", bose_equilibrate},
        {"bose/tilt", bose_tilt},
        {"bose/floquet", bose_floquet},
        {"fermi/ground", fermi_ground},
        {"fermi/quench", fermi_quench},
        {"fermi/equilibrate", fermi_equilibrate},
        {"fermi/tilt", fermi_tilt},
        {"fermi/staggered", fermi_staggered},
        {"bose/ed-spectrum", ed_spectrum},
        {"bose/ed-ground", ed_ground},
        {"bose/ed-thermal", ed_thermal},
        {"bose/ed-quench", ed_quench},
        {"bose/ed-tilt", ed_tilt},
        {"bose/compare-ed-z1", compare_ed_z1_table},
    };
    return table;
}

inline Table run(const RunConfig& cfg) {
    cfg.validate();
    auto key = cfg.text("model") + "/" + cfg.text("experiment");
    auto it = experiments().find(key);
    if (it == experiments().end())
        throw io::config_error("key 'experiment': '" + cfg.text("experiment") + "' is not available for model '" +
                               cfg.text("model") + "'");
    return it->second(cfg);
}

// ---- figure recipes

inline Table reproduce_dispersion_1d(const RunConfig& cfg) {
    const std::vector<double> couplings{0.05, 0.1, j_critical(1.0), 0.2};
    std::vector<std::string> cols{"k"};
    for (double J : couplings) cols.push_back("omega_sq_J" + io::format_double(J));
    Table t(cols, json{{"config", cfg.data()}, {"J_over_U", couplings}});
    for (double k : linspace(-std::numbers::pi, std::numbers::pi, 201)) {
        std::vector<double> r{k};
        for (double J : couplings) r.push_back(omega_bose(J, 1.0, std::cos(k)).omega_sq);
        t.add(r);
    }
    return t;
}

inline Table reproduce_parity_1d(const RunConfig& cfg) {
    LatticeSpec spec = LatticeSpec::chain(256, 0.0, 1.0);
    Table t({"J", "parity_s1", "parity_s2", "series_s1"}, json{{"config", cfg.data()}});
    for (double J : linspace(0.0, 0.16, 33)) {
        spec.J = J;
        auto grid = momentum_grid(spec);
        auto c = ground_correlators(spec, grid);
        t.add({J, parity_correlation(c, grid, axis_displacement(1, 1)), parity_correlation(c, grid, axis_displacement(1, 2)),
               parity_series(1, 2, J)});
    }
    return t;
}

inline Table reproduce_spectrum_1d(const RunConfig&) {
    RunConfig c;
    c.set("lattice.extent", "9");
    c.set("lattice.J", "0.1");
    return ed_spectrum(c);
}

inline Table reproduce_quench_1d(const RunConfig&) {
    RunConfig c;
    c.set("lattice.extent", "9");
    c.set("lattice.J", "0.1");
    c.set("numeric.t_final", "20");
    c.set("numeric.samples", "201");
    return ed_quench(c);
}

inline Table reproduce_floquet_bands(const RunConfig&) {
    RunConfig c;
    c.set("lattice.J", "0.1");
    c.set("numeric.E0", "1");
    c.set("numeric.range", "0.5:2.5:201");
    return bose_floquet(c);
}

// tau, E0, P_exc grid: first-order rate (window pulse, dense grid) and ED on an open chain.
// The ED chain length follows lattice.extent; it defaults to 8 because L = 12 takes hours.
inline Table reproduce_pexc_surface(const RunConfig& cfg) {
    int L = cfg.explicitly_set("lattice.extent") ? cfg.lattice().extent.at(0) : 8;
    LatticeSpec spec = LatticeSpec::chain(L, 0.1, 1.0);
    LatticeSpec analytic = LatticeSpec::chain(L, 0.1, 1.0);
    auto grid = momentum_grid(dense_spec(analytic, 256));
    ed::FockBasis basis(L, L);
    spec.boundary = Boundary::open;
    auto g = ed::fock_ground_state(spec, basis);
    Table t({"tau", "E0", "P_exc_z1", "P_exc_ed"}, json{{"config", cfg.data()}, {"L", L}});
    for (double tau : {1.0, 2.0, 4.0, 6.0})
        for (double E0 : {0.01, 0.02, 0.05, 0.1}) {
            auto pulse = PulseProfile::window(E0, tau);
            double z1 = pair_creation_rate(analytic, pulse, grid).rate;
            double e = ed::tilt_evolution(spec, basis, g.vector, pulse).p_exc;
            t.add({tau, E0, z1, e});
        }
    return t;
}

inline const std::map<std::string, std::function<Table(const RunConfig&)>>& recipes() {
    static const std::map<std::string, std::function<Table(const RunConfig&)>> table{
        {"dispersion-1d", reproduce_dispersion_1d}, {"parity-1d", reproduce_parity_1d},
        {"pexc-surface", reproduce_pexc_surface},   {"spectrum-1d", reproduce_spectrum_1d},
        {"quench-1d", reproduce_quench_1d},         {"floquet-bands", reproduce_floquet_bands},
    };
    return table;
}

inline Table reproduce(const std::string& id, const RunConfig& cfg) {
    auto it = recipes().find(id);
    if (it == recipes().end()) throw io::config_error("unknown figure id '" + id + "'");
    return it->second(cfg);
}

}  // namespace hubbard::app
