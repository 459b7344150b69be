#include "repump/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "repump/errors.hpp"

namespace repump {

namespace {

constexpr double kPi = std::numbers::pi;

double simpson(const PulseEnvelope& env, double a, double b, int n) {
  // n must be even
  const double h = (b - a) / n;
  double acc = env.amplitude(a) + env.amplitude(b);
  for (int i = 1; i < n; ++i) acc += env.amplitude(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

void check_area(const PulseEnvelope& env) {
  // Piecewise so the Simpson rule never straddles a ramp corner.
  const double te = env.edge_time();
  const double T = env.duration();
  double area = 0.0;
  if (te > 0.0) {
    area += simpson(env, 0.0, te, 512);
    area += simpson(env, te, T - te, 512);
    area += simpson(env, T - te, T, 512);
  } else {
    area += simpson(env, 0.0, T, 512);
  }
  if (std::fabs(area - kPi) > 1e-9)
    throw std::domain_error("PulseEnvelope: on-resonance area deviates from pi");
}

struct Complex2 {
  std::complex<double> g, e;
};

// exp(-i (a sx + b sz)) applied to y, as an exact SU(2) rotation.
inline Complex2 su2_apply(double a, double b, const Complex2& y) {
  const double r = std::hypot(a, b);
  double c, s;
  if (r < 1e-30) {
    c = 1.0;
    s = 1.0;  // sin(r)/r -> 1
  } else {
    c = std::cos(r);
    s = std::sin(r) / r;
  }
  const std::complex<double> i(0.0, 1.0);
  // U = c I - i s (a sx + b sz)
  return {(c - i * s * b) * y.g - i * s * a * y.e,
          -i * s * a * y.g + (c + i * s * b) * y.e};
}

struct StepperContext {
  const PulseEnvelope* env;
  double detuning;
  double amplitude_scale;
};

// One 4th-order commutator-free step over [t, t+h] (two Gauss nodes, two
// exponentials). Exact for any constant Hamiltonian segment.
inline Complex2 cf4_step(const StepperContext& ctx, double t, double h, const Complex2& y) {
  constexpr double kC1 = 0.5 - 0.2886751345948128823;  // 1/2 -+ sqrt(3)/6
  constexpr double kC2 = 0.5 + 0.2886751345948128823;
  constexpr double kA1 = 0.25 + 0.2886751345948128823 / 2.0;  // 1/4 +- sqrt(3)/6
  constexpr double kA2 = 0.25 - 0.2886751345948128823 / 2.0;
  const double w1 = ctx.amplitude_scale * ctx.env->amplitude(t + kC1 * h);
  const double w2 = ctx.amplitude_scale * ctx.env->amplitude(t + kC2 * h);
  // H = (w/2) sx - (d/2) sz; exponent theta = h * coefficient.
  const double zb = -0.5 * ctx.detuning;
  Complex2 out = su2_apply(0.5 * h * (kA1 * w1 + kA2 * w2), h * (kA1 + kA2) * zb, y);
  out = su2_apply(0.5 * h * (kA2 * w1 + kA1 * w2), h * (kA1 + kA2) * zb, out);
  return out;
}

}  // namespace

PulseEnvelope PulseEnvelope::square(double tau_pi) {
  if (!(tau_pi > 0.0) || !std::isfinite(tau_pi))
    throw std::domain_error("PulseEnvelope: tau_pi must be positive");
  PulseEnvelope env(PulseShape::Square, tau_pi, 0.0, kPi / tau_pi, tau_pi);
  check_area(env);
  return env;
}

PulseEnvelope PulseEnvelope::edge_smoothed(double tau_pi, double edge_time) {
  if (!(tau_pi > 0.0) || !std::isfinite(tau_pi))
    throw std::domain_error("PulseEnvelope: tau_pi must be positive");
  if (!(edge_time >= 0.0) || !std::isfinite(edge_time))
    throw std::domain_error("PulseEnvelope: edge_time must be non-negative");
  if (edge_time == 0.0) return square(tau_pi);
  const double duration = tau_pi + edge_time;
  if (edge_time > 0.5 * duration)
    throw std::domain_error("PulseEnvelope: edge_time exceeds half the pulse duration");
  PulseEnvelope env(PulseShape::EdgeSmoothed, tau_pi, edge_time, kPi / tau_pi, duration);
  check_area(env);
  return env;
}

PulseEnvelope PulseEnvelope::off(double duration) {
  if (!(duration > 0.0) || !std::isfinite(duration))
    throw std::domain_error("PulseEnvelope: duration must be positive");
  return PulseEnvelope(PulseShape::Square, duration, 0.0, 0.0, duration);
}

double PulseEnvelope::amplitude(double t) const {
  if (t < 0.0 || t > duration_) return 0.0;
  if (shape_ == PulseShape::Square || edge_time_ == 0.0) return peak_rabi_;
  if (t < edge_time_)
    return peak_rabi_ * 0.5 * (1.0 - std::cos(kPi * t / edge_time_));
  if (t > duration_ - edge_time_)
    return peak_rabi_ * 0.5 * (1.0 - std::cos(kPi * (duration_ - t) / edge_time_));
  return peak_rabi_;
}

PropagationResult propagate_detailed(const PulseEnvelope& envelope, double detuning,
                                     const TwoLevelState& initial, double step_tolerance,
                                     double amplitude_scale) {
  if (!(step_tolerance > 0.0) || !(step_tolerance <= 1e-3))
    throw std::domain_error("propagate: step_tolerance must be in (0, 1e-3]");
  if (!std::isfinite(detuning) || !std::isfinite(amplitude_scale))
    throw std::domain_error("propagate: non-finite inputs");
  if (!std::isfinite(initial.amplitude_g.real()) || !std::isfinite(initial.amplitude_g.imag()) ||
      !std::isfinite(initial.amplitude_e.real()) || !std::isfinite(initial.amplitude_e.imag()))
    throw std::domain_error("propagate: non-finite initial state");
  if (std::fabs(initial.norm_squared() - 1.0) > 1e-6)
    throw std::domain_error("propagate: initial state must be normalized");

  const StepperContext ctx{&envelope, detuning, amplitude_scale};
  const double T = envelope.duration();
  // Resolve the fastest rotation well enough that the trapezoid accumulation
  // of |e|^2 converges; the stepper itself would be exact on constant
  // segments at any h.
  const double omega_max =
      std::hypot(detuning, amplitude_scale * envelope.peak_rabi());
  double h_cap = T / 16.0;
  if (omega_max > 0.0) h_cap = std::min(h_cap, (2.0 * kPi / omega_max) / 16.0);
  const double h_min = T * 1e-12;

  Complex2 y{initial.amplitude_g, initial.amplitude_e};
  double t = 0.0;
  double h = h_cap;
  double pe_prev = std::norm(y.e);
  double mean_acc = 0.0;
  double drift = std::fabs(std::norm(y.g) + std::norm(y.e) - 1.0);
  std::size_t steps = 0;

  while (t < T) {
    h = std::min(h, T - t);
    const Complex2 full = cf4_step(ctx, t, h, y);
    const Complex2 mid = cf4_step(ctx, t, 0.5 * h, y);
    const Complex2 fine = cf4_step(ctx, t + 0.5 * h, 0.5 * h, mid);
    const double err = std::max(std::abs(full.g - fine.g), std::abs(full.e - fine.e));
    if (err > step_tolerance) {
      h *= 0.5;
      if (h < h_min)
        throw convergence_error("propagate: step size underflow before meeting tolerance");
      continue;
    }
    const double pe_mid = std::norm(mid.e);
    const double pe_end = std::norm(fine.e);
    mean_acc += 0.25 * h * (pe_prev + pe_mid) + 0.25 * h * (pe_mid + pe_end);
    pe_prev = pe_end;
    y = fine;
    t += h;
    ++steps;
    drift = std::max(drift, std::fabs(std::norm(y.g) + std::norm(y.e) - 1.0));
    if (err < step_tolerance / 64.0) h = std::min(2.0 * h, h_cap);
  }

  PropagationResult result;
  result.final_state = TwoLevelState{y.g, y.e};
  result.mean_excited_population = T > 0.0 ? mean_acc / T : 0.0;
  result.norm_drift = drift;
  result.steps = steps;
  return result;
}

TwoLevelState propagate(const PulseEnvelope& envelope, double detuning,
                        const TwoLevelState& initial, double step_tolerance) {
  return propagate_detailed(envelope, detuning, initial, step_tolerance).final_state;
}

double coupling_ratio() { return 2.0 * std::sqrt(2.0) / 3.0; }

double square_pulse_offres_error(double tau_pi, double delta_hf) {
  if (!(tau_pi > 0.0) || !(delta_hf > 0.0))
    throw std::domain_error("square_pulse_offres_error: inputs must be positive");
  const double x = delta_hf * tau_pi;
  return 8.0 * kPi * kPi / (9.0 * x * x);
}

double shaped_pulse_offres_error(const PulseEnvelope& envelope, double delta_hf,
                                 double step_tolerance) {
  if (!(delta_hf > 0.0))
    throw std::domain_error("shaped_pulse_offres_error: delta_hf must be positive");
  const PropagationResult r = propagate_detailed(envelope, delta_hf, TwoLevelState::ground(),
                                                 step_tolerance, coupling_ratio());
  return 2.0 * r.mean_excited_population;
}

double scattering_error_floor(double tau_pi, double delta_hf, double gamma) {
  if (!(tau_pi > 0.0) || !(delta_hf > 0.0) || !(gamma >= 0.0))
    throw std::domain_error("scattering_error_floor: inputs must be positive");
  return gamma * tau_pi * square_pulse_offres_error(tau_pi, delta_hf);
}

double ac_stark_phase(double tau_pi, double delta_hf) {
  if (!(tau_pi > 0.0) || !(delta_hf > 0.0))
    throw std::domain_error("ac_stark_phase: inputs must be positive");
  return 4.0 * kPi * kPi / (9.0 * delta_hf * tau_pi);
}

}  // namespace repump
