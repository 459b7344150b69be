#pragma once

namespace repump {

// Fixed experimental context, kept as documentation only: the magnetic field
// (5.6 G), the m_f = +-1 Zeeman splitting used by the microwave mapping
// pulses (7.8 MHz), and the 435 nm beam parameters (8 mW into a 50 um
// diameter spot) are not consumed by any computation here.
inline constexpr double kDocumentedFieldGauss = 5.6;
inline constexpr double kDocumentedZeemanSplittingHz = 7.8e6;
inline constexpr double kDocumented435PowerWatt = 8e-3;
inline constexpr double kDocumented435BeamDiameterMeter = 50e-6;

// Level-structure constants of the repump chain. Defaults describe 171Yb+:
// the 2D3/2 hyperfine splitting (2 pi x 860 MHz), its scattering rate
// (1/52.7 ms), the 38 ns lifetime of the 3[3/2]1/2 bracket state, and its
// 98.2% / 1.8% branching between 2S1/2 and 2D3/2.
class AtomicConstants {
 public:
  AtomicConstants();

  // branch_to_D is derived as 1 - branch_to_S, so the pair sums to one
  // exactly. Throws std::domain_error on non-positive rates or a branching
  // fraction outside (0, 1].
  AtomicConstants(double delta_hf, double gamma_d, double bracket_lifetime, double branch_to_s);

  double delta_hf() const { return delta_hf_; }                  // rad/s
  double gamma_d() const { return gamma_d_; }                    // 1/s
  double bracket_lifetime() const { return bracket_lifetime_; }  // s
  double branch_to_s() const { return branch_to_s_; }
  double branch_to_d() const { return branch_to_d_; }

  // Same constants with the bracket decay forced entirely into 2S1/2;
  // the configuration behind ideal 1/3-per-cycle pumping.
  AtomicConstants without_shelving() const;

 private:
  double delta_hf_;
  double gamma_d_;
  double bracket_lifetime_;
  double branch_to_s_;
  double branch_to_d_;
};

}  // namespace repump
