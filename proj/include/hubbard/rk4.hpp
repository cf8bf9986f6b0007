#pragma once
#include <cmath>
#include <cstddef>

namespace hubbard {

// Classical fourth-order Runge-Kutta step for dy/dt = f(t, y).
// State needs +, and scalar *; Eigen fixed-size vectors qualify.
template <class State, class Rhs>
State rk4_step(const State& y, double t, double dt, Rhs&& f) {
    const State k1 = f(t, y);
    const State k2 = f(t + 0.5 * dt, State(y + (0.5 * dt) * k1));
    const State k3 = f(t + 0.5 * dt, State(y + (0.5 * dt) * k2));
    const State k4 = f(t + dt, State(y + dt * k3));
    return State(y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

// Fixed-step integration from t0 to t1; the last step is shortened to land on t1.
// observer(t, y) runs after every step and may throw to abort.
template <class State, class Rhs, class Observer>
State rk4_integrate(State y, double t0, double t1, double dt, Rhs&& f, Observer&& observer) {
    if (t1 <= t0) return y;
    auto steps = static_cast<std::size_t>(std::ceil((t1 - t0) / dt - 1e-9));
    if (steps == 0) steps = 1;
    const double h = (t1 - t0) / static_cast<double>(steps);
    for (std::size_t i = 0; i < steps; ++i) {
        const double t = t0 + static_cast<double>(i) * h;
        y = rk4_step(y, t, h, f);
        observer(t + h, y);
    }
    return y;
}

template <class State, class Rhs>
State rk4_integrate(State y, double t0, double t1, double dt, Rhs&& f) {
    return rk4_integrate(std::move(y), t0, t1, dt, std::forward<Rhs>(f), [](double, const State&) {});
}

}  // namespace hubbard
