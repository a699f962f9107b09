#include "txh/hamiltonian.hpp"

#include <cmath>

#include "txh/angular_momentum.hpp"
#include "txh/error.hpp"

namespace txh {

namespace {

const double kSqrt2 = std::sqrt(2.0);
const double kSqrt3 = std::sqrt(3.0);

}  // namespace

SymmetricTensor3 internal_strain_tensor(const ModelParams& p) {
  const Vec3 xp = Vec3(1.0, -1.0, 0.0) / kSqrt2;
  const Vec3 yp = Vec3(1.0, 1.0, 0.0) / kSqrt2;
  const Vec3 zp = Vec3(0.0, 0.0, 1.0);
  const double c = std::cos(p.theta_p);
  const double s = std::sin(p.theta_p);
  const Vec3 y_tilt = c * yp + s * zp;
  const Vec3 z_tilt = -s * yp + c * zp;

  Rotation3 principal;
  principal.col(0) = xp;
  principal.col(1) = y_tilt;
  principal.col(2) = z_tilt;
  return congruence_transform(SymmetricTensor3::diagonal(0.0, p.eps_yy_p, p.eps_zz_p), principal);
}

ComplexMatrix4 h_strain(const SymmetricTensor3& eps, const ModelParams& p, bool include_hydro) {
  if (!eps.is_symmetric()) {
    throw Error(ErrorKind::NonSymmetricStrain, "strain tensor is not symmetric");
  }
  const auto& j = j_operators();
  const ComplexMatrix4 id = ComplexMatrix4::Identity();

  ComplexMatrix4 h = ComplexMatrix4::Zero();
  for (int i = 0; i < 3; ++i) {
    h += p.b * eps(i, i) * (j[i] * j[i] - id);
  }
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 3; ++k) {
      if (i == k) continue;
      h += (p.d / kSqrt3) * eps(i, k) * sym_product(j[i], j[k]);
    }
  }
  if (include_hydro) {
    h -= p.a_hydro() * eps.trace() * id;
  }
  return h;
}

ComplexMatrix4 h_zeeman(const Vec3& b, const ModelParams& p) {
  const auto& j = j_operators();
  ComplexMatrix4 h = ComplexMatrix4::Zero();
  for (int i = 0; i < 3; ++i) {
    if (b(i) == 0.0) continue;
    h += b(i) * (p.g1 * j[i] + p.g2 * j_cubed(static_cast<Axis>(i), j));
  }
  return p.mu_b * h;
}

Vec3 dipole_frame(const Vec3& e) {
  return {(e(0) + e(1)) / kSqrt2, e(2), (e(0) - e(1)) / kSqrt2};
}

double stark_shift_linear(const Vec3& e_defect, const ModelParams& p) {
  const Vec3 d = dipole_frame(e_defect);
  return p.a_x * d(0) + p.a_y * d(1);
}

double stark_shift_quadratic(const Vec3& e_defect, const ModelParams& p) {
  const Vec3 d = dipole_frame(e_defect);
  return -0.5 * (p.alpha_xx * d(0) * d(0) + 2.0 * p.alpha_xy * d(0) * d(1) +
                 p.alpha_yy * d(1) * d(1) + p.alpha_zz * d(2) * d(2));
}

ComplexMatrix4 h_stark_acceptor_quadratic(const Vec3& e, const CubicStarkParams& c) {
  const auto& j = j_operators();
  const ComplexMatrix4 id = ComplexMatrix4::Identity();
  ComplexMatrix4 h = c.alpha_c * e.squaredNorm() * id;
  for (int i = 0; i < 3; ++i) {
    h += c.beta_c * e(i) * e(i) * (j[i] * j[i] - 1.25 * id);
  }
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 3; ++k) {
      if (i == k) continue;
      h += (c.gamma_c / kSqrt3) * e(i) * e(k) * sym_product(j[i], j[k]);
    }
  }
  return h;
}

ComplexMatrix4 assemble_tx_hamiltonian(const OrientationFrame& frame, const FieldConfig& fields,
                                       const ModelParams& p) {
  ComplexMatrix4 h = h_strain(defect_tensor_to_crystal(frame, internal_strain_tensor(p)), p, false);
  if (fields.ext_stress) {
    const SymmetricTensor3 strain = stress_to_strain(*fields.ext_stress, p.compliance);
    h += h_strain(strain, p, false);
    const StressTensor local{crystal_tensor_to_defect(frame, fields.ext_stress->entries)};
    h += piezo_shift(local, p.piezo) * ComplexMatrix4::Identity();
  }
  h += h_zeeman(fields.b_field, p);
  if (fields.acceptor_stark) {
    h += h_stark_acceptor_quadratic(fields.e_field, *fields.acceptor_stark);
  }
  return h;
}

ComplexMatrix4 assemble_tx_hamiltonian_defect_frame(const OrientationFrame& frame,
                                                    const FieldConfig& fields,
                                                    const ModelParams& p) {
  ComplexMatrix4 h = h_strain(internal_strain_tensor(p), p, false);
  if (fields.ext_stress) {
    const StressTensor local{crystal_tensor_to_defect(frame, fields.ext_stress->entries)};
    h += h_strain(stress_to_strain(local, p.compliance), p, false);
    h += piezo_shift(local, p.piezo) * ComplexMatrix4::Identity();
  }
  h += h_zeeman(axial_field_transform(frame, fields.b_field), p);
  if (fields.acceptor_stark) {
    h += h_stark_acceptor_quadratic(field_transform(frame, fields.e_field), *fields.acceptor_stark);
  }
  return h;
}

double tx0_reference_energy(const ModelParams& p) {
  return eig_hermitian_4(h_strain(internal_strain_tensor(p), p, false)).values[0];
}

double ground_zeeman_splitting(const Vec3& b, const ModelParams& p) {
  return p.g_e * p.mu_b * b.norm();
}

}  // namespace txh
