#pragma once

namespace influence {

/// Classical 4-stage Runge-Kutta step over an arbitrary state type.
/// `deriv(state)` returns the state derivative; `add(base, dir, scale)`
/// returns base + scale*dir (advancing time by scale when the state
/// carries it with unit rate).
template <typename State, typename DerivFn, typename AddFn>
State rk4_step(const State& state, double dt, DerivFn&& deriv, AddFn&& add) {
  const State k1 = deriv(state);
  const State k2 = deriv(add(state, k1, 0.5 * dt));
  const State k3 = deriv(add(state, k2, 0.5 * dt));
  const State k4 = deriv(add(state, k3, dt));
  State out = add(state, k1, dt / 6.0);
  out = add(out, k2, dt / 3.0);
  out = add(out, k3, dt / 3.0);
  out = add(out, k4, dt / 6.0);
  return out;
}

}  // namespace influence
