#include "repump/constants.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace repump {

namespace {
constexpr double kDefaultDeltaHf = 2.0 * std::numbers::pi * 860e6;  // rad/s
constexpr double kDefaultGammaD = 1.0 / 52.7e-3;                    // 1/s
constexpr double kDefaultBracketLifetime = 38e-9;                   // s
constexpr double kDefaultBranchToS = 0.982;
}  // namespace

AtomicConstants::AtomicConstants()
    : AtomicConstants(kDefaultDeltaHf, kDefaultGammaD, kDefaultBracketLifetime,
                      kDefaultBranchToS) {}

AtomicConstants::AtomicConstants(double delta_hf, double gamma_d, double bracket_lifetime,
                                 double branch_to_s) {
  if (!(delta_hf > 0.0) || !std::isfinite(delta_hf))
    throw std::domain_error("AtomicConstants: delta_hf must be positive");
  if (!(gamma_d > 0.0) || !std::isfinite(gamma_d))
    throw std::domain_error("AtomicConstants: gamma_D must be positive");
  if (!(bracket_lifetime > 0.0) || !std::isfinite(bracket_lifetime))
    throw std::domain_error("AtomicConstants: bracket lifetime must be positive");
  if (!(branch_to_s > 0.0) || !(branch_to_s <= 1.0))
    throw std::domain_error("AtomicConstants: branch_to_S must be in (0, 1]");
  delta_hf_ = delta_hf;
  gamma_d_ = gamma_d;
  bracket_lifetime_ = bracket_lifetime;
  branch_to_s_ = branch_to_s;
  branch_to_d_ = 1.0 - branch_to_s;  // exact complement
}

AtomicConstants AtomicConstants::without_shelving() const {
  return AtomicConstants(delta_hf_, gamma_d_, bracket_lifetime_, 1.0);
}

}  // namespace repump
