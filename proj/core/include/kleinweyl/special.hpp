#pragma once

namespace kleinweyl {

/// 1 / Gamma(z) for real z; exactly zero at the poles z = 0, -1, -2, ...
double reciprocal_gamma(double z);

/// z! = Gamma(z + 1) in the reciprocal convention, i.e. 1 / z!.
inline double reciprocal_factorial(double z) { return reciprocal_gamma(z + 1.0); }

/// Volume of the unit ball in R^k.
double unit_ball_volume(int k);

}  // namespace kleinweyl
