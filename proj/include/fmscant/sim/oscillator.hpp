#pragma once

// Damped harmonic oscillator m x'' + (m w0/Q) x' + k x = F(t) advanced with
// its exact propagator under a force held constant over each step.

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "fmscant/core.hpp"

namespace fmscant::sim {

struct OscillatorState {
  double x_m = 0.0;
  double v_m_per_s = 0.0;
};

struct Trajectory {
  double dt_s = 0.0;
  std::vector<double> samples;  // x(t_i), t_i = i * dt
  OscillatorState final_state;
  std::uint64_t scenario_fingerprint = 0;
  std::uint64_t seed = 0;

  double duration_s() const { return dt_s * static_cast<double>(samples.size()); }
};

// state_{n+1} = Phi * state_n + g * F_n, precomputed for one (cantilever, dt).
class Propagator {
 public:
  Propagator(const Cantilever& c, double dt) {
    if (!(dt > 0.0)) throw domain_error("Propagator: dt must be > 0");
    const double w = to_angular(c.omega_0);
    const double k = c.spring_N_per_m;
    // A = [[0, 1], [-w^2, -w/Q]];  exp(A t) = e^{s t} [C I + S (A - s I)]
    const double s = -w / (2.0 * c.quality);
    const double disc = s * s - w * w;
    double C = 0.0;
    double S = 0.0;
    if (disc < 0.0) {
      const double nu = std::sqrt(-disc);
      C = std::cos(nu * dt);
      S = std::sin(nu * dt) / nu;
    } else if (disc > 0.0) {
      const double nu = std::sqrt(disc);
      C = std::cosh(nu * dt);
      S = std::sinh(nu * dt) / nu;
    } else {
      C = 1.0;
      S = dt;
    }
    const double e = std::exp(s * dt);
    phi_ = {e * (C - s * S), e * S, e * (-w * w * S), e * (C + (-w / c.quality - s) * S)};
    // Constant force shifts the equilibrium to F/k: x' - F/k = Phi (x - F/k).
    g_ = {(1.0 - phi_[0]) / k, -phi_[2] / k};
  }

  OscillatorState step(OscillatorState st, double force) const {
    return {phi_[0] * st.x_m + phi_[1] * st.v_m_per_s + g_[0] * force,
            phi_[2] * st.x_m + phi_[3] * st.v_m_per_s + g_[1] * force};
  }

  const std::array<double, 4>& matrix() const { return phi_; }

 private:
  std::array<double, 4> phi_{};
  std::array<double, 2> g_{};
};

// One displacement sample per force sample; samples[i] is x at the start of
// the step driven by force[i].
inline Trajectory propagate_oscillator(const Cantilever& c, std::span<const double> force, double dt,
                                       OscillatorState initial = {}) {
  const Propagator prop(c, dt);
  Trajectory t;
  t.dt_s = dt;
  t.samples.resize(force.size());
  OscillatorState st = initial;
  for (std::size_t i = 0; i < force.size(); ++i) {
    t.samples[i] = st.x_m;
    st = prop.step(st, force[i]);
  }
  t.final_state = st;
  return t;
}

}  // namespace fmscant::sim
