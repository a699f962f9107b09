#pragma once

#include <optional>

#include "txh/elasticity.hpp"
#include "txh/numerics.hpp"
#include "txh/symmetry.hpp"

namespace txh {

namespace constants {
inline constexpr double kBohrMagnetonEvPerT = 5.78838180e-5;
inline constexpr double kHzPerEv = 2.41798924e14;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDegree = kPi / 180.0;
}  // namespace constants

/// Complete parameter record of the TX Hamiltonian. Energies in eV, Stark
/// couplings in Hz per (V/m)^n. Defaults are the reference parameter set; b and d carry
/// the fitted (negative) sign.
struct ModelParams {
  double b = -1.68;
  double d = -2.52;
  double eps_yy_p = -4.2e-4;
  double eps_zz_p = -6.5e-4;
  double theta_p = -7.5 * constants::kDegree;
  double g1 = 1.23;
  double g2 = 0.004;
  double g_e = 2.005;
  double a_x = 3596.0;
  double a_y = 7519.0;
  double alpha_xx = 0.123;
  double alpha_xy = 0.000;
  double alpha_yy = 0.106;
  double alpha_zz = 0.002;
  PiezoTensorParams piezo{};
  ComplianceConstants compliance{};
  double e_x = 0.93557;
  double mu_b = constants::kBohrMagnetonEvPerT;
  double hz_per_ev = constants::kHzPerEv;

  /// Hydrostatic deformation potential tied to b.
  double a_hydro() const { return -b / 4.0; }
};

/// Cubic quadratic-Stark couplings for the operator-level acceptor model, eV m^2/V^2.
struct CubicStarkParams {
  double alpha_c = 0.0;
  double beta_c = 0.0;
  double gamma_c = 0.0;
};

/// External fields in crystal coordinates: B in T, E in V/m, stress in Pa.
struct FieldConfig {
  Vec3 b_field = Vec3::Zero();
  Vec3 e_field = Vec3::Zero();
  std::optional<StressTensor> ext_stress;
  std::optional<CubicStarkParams> acceptor_stark;
};

/// Defect-potential strain of the identity orientation in crystal
/// coordinates. Principal frame x' = [1,-1,0]/sqrt2, y' = [1,1,0]/sqrt2,
/// z' = [0,0,1], tilted by theta_p (right-handed about x').
SymmetricTensor3 internal_strain_tensor(const ModelParams& p);

/// Bir-Pikus term b sum (J_i^2 - 1) eps_ii + d/sqrt3 sum_{i != j} {J_i,J_j}/2 eps_ij.
/// `include_hydro` adds -a tr(eps) with a = -b/4.
ComplexMatrix4 h_strain(const SymmetricTensor3& eps, const ModelParams& p, bool include_hydro);

ComplexMatrix4 h_zeeman(const Vec3& b_field_defect_frame, const ModelParams& p);

/// Linear transition shift in Hz: A_X E_X + A_Y E_Y in the dipole frame.
double stark_shift_linear(const Vec3& e_field_defect_frame, const ModelParams& p);

/// Quadratic transition shift in Hz: -1/2 E.alpha.E in the dipole frame.
double stark_shift_quadratic(const Vec3& e_field_defect_frame, const ModelParams& p);

/// Dipole-frame components (X, Y, Z) of a defect-frame field.
Vec3 dipole_frame(const Vec3& e_field_defect_frame);

ComplexMatrix4 h_stark_acceptor_quadratic(const Vec3& e_field, const CubicStarkParams& c);

/// Full 4x4 TX Hamiltonian for one orientation, in crystal coordinates: the
/// defect potential is rotated into the crystal frame while applied fields
/// stay as given. Includes the piezospectroscopic scalar; the transition-level
/// Stark scalars are not part of the matrix.
ComplexMatrix4 assemble_tx_hamiltonian(const OrientationFrame& frame, const FieldConfig& fields,
                                       const ModelParams& p);

/// Same physics evaluated in the orientation's own defect coordinates:
/// identity defect potential, applied fields rotated by the inverse
/// transformation. Unitarily equivalent to assemble_tx_hamiltonian.
ComplexMatrix4 assemble_tx_hamiltonian_defect_frame(const OrientationFrame& frame,
                                                    const FieldConfig& fields,
                                                    const ModelParams& p);

/// Lowest eigenvalue of the internal-strain-only Hamiltonian: the zero-field
/// TX0 level that E_X is measured from.
double tx0_reference_energy(const ModelParams& p);

/// g_e mu_B |B| in eV.
double ground_zeeman_splitting(const Vec3& b_field, const ModelParams& p);

}  // namespace txh
