#include "txh/elasticity.hpp"

#include <cmath>

namespace txh {

SymmetricTensor3 stress_to_strain(const StressTensor& sigma, const ComplianceConstants& c) {
  const auto s = sigma.entries.voigt();
  std::array<double, 6> e{};
  e[0] = c.s11 * s[0] + c.s12 * s[1] + c.s12 * s[2];
  e[1] = c.s12 * s[0] + c.s11 * s[1] + c.s12 * s[2];
  e[2] = c.s12 * s[0] + c.s12 * s[1] + c.s11 * s[2];
  e[3] = c.s44 * s[3];
  e[4] = c.s44 * s[4];
  e[5] = c.s44 * s[5];
  return SymmetricTensor3::from_voigt(e);
}

StressTensor stress_for_direction(double theta, double magnitude) {
  const double sn = std::sin(theta);
  const double cs = std::cos(theta);
  const double in_plane = 0.5 * magnitude * sn * sn;
  const double shear = magnitude * sn * cs / std::sqrt(2.0);
  // xx, yy, zz, yz, zx, xy
  return {SymmetricTensor3::from_voigt({in_plane, in_plane, magnitude * cs * cs, shear, shear, in_plane})};
}

double piezo_shift(const StressTensor& sigma_defect_frame, const PiezoTensorParams& p) {
  const auto& s = sigma_defect_frame.entries;
  return p.a1 * s(2, 2) + p.a2 * (s(0, 0) + s(1, 1)) + 2.0 * p.a3 * s(0, 1) +
         2.0 * p.a4 * (s(1, 2) - s(2, 0));
}

}  // namespace txh
