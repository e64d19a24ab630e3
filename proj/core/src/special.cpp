#include "kleinweyl/special.hpp"

#include <cmath>
#include <numbers>

namespace kleinweyl {

double reciprocal_gamma(double z) {
  if (z <= 0.0 && z == std::floor(z)) return 0.0;
  if (z < 0.5) {
    // reflection keeps accuracy near the negative poles
    return std::sin(std::numbers::pi * z) * std::tgamma(1.0 - z) / std::numbers::pi;
  }
  return 1.0 / std::tgamma(z);
}

double unit_ball_volume(int k) {
  return std::pow(std::numbers::pi, 0.5 * k) * reciprocal_gamma(0.5 * k + 1.0);
}

}  // namespace kleinweyl
