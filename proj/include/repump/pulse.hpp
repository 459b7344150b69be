#pragma once

#include <complex>
#include <cstddef>

namespace repump {

enum class PulseShape { Square, EdgeSmoothed };

// A transfer pulse with on-resonance area pi. The peak Rabi frequency is
// pi / tau_pi; edge-smoothed pulses add raised-cosine turn-on/turn-off ramps
// of length edge_time, stretching the total duration to tau_pi + edge_time
// so the area stays exactly pi (each ramp integrates to half a flat-top
// segment). edge_time -> 0 recovers the square pulse.
class PulseEnvelope {
 public:
  static PulseEnvelope square(double tau_pi);
  static PulseEnvelope edge_smoothed(double tau_pi, double edge_time);
  // Zero-amplitude stand-in (idle window); exempt from the pi-area rule.
  static PulseEnvelope off(double duration);

  double amplitude(double t) const;  // Omega(t) in rad/s, 0 outside [0, duration]
  double duration() const { return duration_; }
  double tau_pi() const { return tau_pi_; }
  double edge_time() const { return edge_time_; }
  double peak_rabi() const { return peak_rabi_; }
  PulseShape shape() const { return shape_; }

 private:
  PulseEnvelope(PulseShape shape, double tau_pi, double edge_time, double peak, double duration)
      : shape_(shape), tau_pi_(tau_pi), edge_time_(edge_time), peak_rabi_(peak),
        duration_(duration) {}
  PulseShape shape_;
  double tau_pi_;
  double edge_time_;
  double peak_rabi_;
  double duration_;
};

struct TwoLevelState {
  std::complex<double> amplitude_g{1.0, 0.0};
  std::complex<double> amplitude_e{0.0, 0.0};

  static TwoLevelState ground() { return {}; }
  double norm_squared() const { return std::norm(amplitude_g) + std::norm(amplitude_e); }
  double excited_population() const { return std::norm(amplitude_e); }
};

struct PropagationResult {
  TwoLevelState final_state;
  // Time average of |amplitude_e|^2 over the pulse window.
  double mean_excited_population = 0.0;
  double norm_drift = 0.0;  // max |norm^2 - 1| seen along the way
  std::size_t steps = 0;
};

// Rotating-frame two-level propagation under the envelope with constant
// detuning: i d/dt (g, e) = H(t) (g, e), H = [[-d/2, W/2], [W/2, d/2]].
// The stepper is a fixed 4th-order two-exponential (commutator-free Magnus)
// scheme; every factor is an exact SU(2) rotation, so the norm survives to
// rounding precision. Step size is halved until the local-error estimate
// drops below step_tolerance, which must lie in (0, 1e-3]. amplitude_scale
// multiplies the envelope (used to drive a weaker off-resonant transition
// with the same pulse).
PropagationResult propagate_detailed(const PulseEnvelope& envelope, double detuning,
                                     const TwoLevelState& initial, double step_tolerance,
                                     double amplitude_scale = 1.0);

TwoLevelState propagate(const PulseEnvelope& envelope, double detuning,
                        const TwoLevelState& initial, double step_tolerance);

// Rabi-coupling ratio of the off-resonant |1> <-> 2D3/2 F=2 transition to
// the transfer transition: Omega_eps / Omega_0 = 2*sqrt(2)/3.
double coupling_ratio();

// Closed-form per-cycle error of a square transfer pulse from off-resonant
// coupling at the hyperfine splitting: 8 pi^2 / (9 (delta_hf tau_pi)^2).
double square_pulse_offres_error(double tau_pi, double delta_hf);

// Numerical counterpart for an arbitrary envelope, driven at amplitude
// coupling_ratio() * Omega(t) and detuning delta_hf from the ground state.
// Returns twice the pulse-averaged transient excited population, i.e. the
// peak of the off-resonant Rabi oscillation in the square-pulse limit; the
// bare end-of-pulse population is not a usable error measure because it
// carries an arbitrary phase factor sin^2(delta_hf T / 2) that vanishes at
// integer delta_hf T / 2 pi (which 860 MHz x 1 us happens to hit).
double shaped_pulse_offres_error(const PulseEnvelope& envelope, double delta_hf,
                                 double step_tolerance = 1e-10);

// gamma tau_pi (Omega_eps / delta_hf)^2: the scattering limit set by the
// transient 2D3/2 population.
double scattering_error_floor(double tau_pi, double delta_hf, double gamma);

// Differential AC-Stark phase picked up by the qubit over one transfer
// pulse: 4 pi^2 / (9 delta_hf tau_pi).
double ac_stark_phase(double tau_pi, double delta_hf);

}  // namespace repump
