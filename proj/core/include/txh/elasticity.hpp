#pragma once

#include "txh/numerics.hpp"

namespace txh {

/// Cubic compliance constants in Pa^-1; defaults are silicon at 4.2 K.
struct ComplianceConstants {
  double s11 = 7.61736e-12;
  double s12 = -2.12733e-12;
  double s44 = 12.4626e-12;
};

/// Applied stress in crystal coordinates, Pa.
struct StressTensor {
  SymmetricTensor3 entries;
};

/// Monoclinic piezospectroscopic tensor components, eV/Pa.
struct PiezoTensorParams {
  double a1 = -13.7e-12;
  double a2 = 16.1e-12;
  double a3 = -1.6e-12;
  double a4 = 2.2e-12;
};

/// Voigt mapping with the cubic compliance matrix. Shear components use the
/// same numbers as the Voigt vector (eps_yz = s44 sigma_yz); no factor 1/2.
SymmetricTensor3 stress_to_strain(const StressTensor& sigma, const ComplianceConstants& c);

/// Uniaxial load of magnitude T (compression T < 0) along
/// (sin(theta)/sqrt2, sin(theta)/sqrt2, cos(theta)): theta = 0 is [001],
/// arccos(1/sqrt3) is [111], pi/2 is [110].
StressTensor stress_for_direction(double theta, double magnitude);

/// Scalar transition shift in eV for a stress already expressed in the
/// orientation's defect coordinates.
double piezo_shift(const StressTensor& sigma_defect_frame, const PiezoTensorParams& p);

}  // namespace txh
