#include <doctest.h>

#include "support.hpp"
#include "txh/angular_momentum.hpp"
#include "txh/error.hpp"
#include "txh/hamiltonian.hpp"

using namespace txh;
using namespace txh::test;

namespace {

FieldConfig random_fields(bool with_b) {
  FieldConfig f;
  if (with_b) f.b_field = random_vector(0.3);
  f.e_field = random_vector(2e5);
  f.ext_stress = StressTensor{random_symmetric(1e8)};
  return f;
}

}  // namespace

TEST_SUITE("hamiltonian") {
  const ComplexMatrix4 I = ComplexMatrix4::Identity();

  TEST_CASE("internal strain tensor") {
    ModelParams p;
    p.theta_p = 0.0;
    p.eps_yy_p = 2e-4;
    p.eps_zz_p = 0.0;
    SymmetricTensor3 e = internal_strain_tensor(p);
    CHECK(e(0, 0) == doctest::Approx(1e-4).epsilon(1e-14));
    CHECK(e(1, 1) == doctest::Approx(1e-4).epsilon(1e-14));
    CHECK(e(0, 1) == doctest::Approx(1e-4).epsilon(1e-14));
    CHECK(std::abs(e(2, 2)) < 1e-20);
    CHECK(std::abs(e(0, 2)) < 1e-20);
    CHECK(std::abs(e(1, 2)) < 1e-20);

    p.eps_yy_p = 0.0;
    p.eps_zz_p = 3e-4;
    e = internal_strain_tensor(p);
    CHECK(max_diff(e.matrix(), SymmetricTensor3::diagonal(0, 0, 3e-4).matrix()) < 1e-20);

    const ModelParams defaults;
    Eigen::Vector3d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(internal_strain_tensor(defaults).matrix()).eigenvalues();
    CHECK(std::abs(ev(0) + 6.5e-4) < 1e-18);
    CHECK(std::abs(ev(1) + 4.2e-4) < 1e-18);
    CHECK(std::abs(ev(2)) < 1e-18);
  }

  TEST_CASE("strain Hamiltonian closed forms") {
    const ModelParams p;
    const double e0 = 2.5e-4;
    CHECK(max_diff(h_strain(SymmetricTensor3::diagonal(e0, e0, e0), p, false), 0.75 * p.b * e0 * I) < 1e-18);
    CHECK(max_diff(h_strain(SymmetricTensor3::diagonal(e0, e0, e0), p, true), (0.75 * p.b + 0.75 * p.b) * e0 * I) < 1e-18);

    const double s = -4e-4;
    const EigenSystem es = eig_hermitian_4(h_strain(SymmetricTensor3::diagonal(0, 0, s), p, false));
    std::array<double, 4> expected{p.b * s * 1.25, p.b * s * -0.75, p.b * s * -0.75, p.b * s * 1.25};
    std::sort(expected.begin(), expected.end());
    for (int i = 0; i < 4; ++i) CHECK(std::abs(es.values[i] - expected[i]) < 1e-18);
  }

  TEST_CASE("shear strain couples through d") {
    ModelParams p;
    const JOperators& J = j_operators();
    const double s = 1e-4;
    const ComplexMatrix4 h = h_strain(SymmetricTensor3::from_voigt({0, 0, 0, 0, 0, s}), p, false);
    CHECK(max_diff(h, p.d / std::sqrt(3.0) * 2.0 * s * sym_product(J.jx, J.jy)) < 1e-18);
  }

  TEST_CASE("non-symmetric strain is rejected") {
    Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
    m(0, 1) = 1e-4;
    try {
      h_strain(SymmetricTensor3(m), ModelParams{}, false);
      FAIL("expected NonSymmetricStrain");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NonSymmetricStrain);
    }
  }

  TEST_CASE("strain trace identity") {
    const ModelParams p;
    for (int trial = 0; trial < 100; ++trial) {
      const SymmetricTensor3 e = random_symmetric(1e-3);
      CHECK(std::abs(h_strain(e, p, false).trace() - Complex(p.b * e.trace())) < 1e-17);
    }
  }

  TEST_CASE("zero-field TX0-TX1 gap") {
    const ModelParams p;
    const EigenSystem es = eig_hermitian_4(assemble_tx_hamiltonian(orientations()[0], {}, p));
    const double gap = es.values[2] - es.values[1];
    CHECK(gap > 1.5e-3);
    CHECK(gap < 2.2e-3);
    CHECK(std::abs(es.values[1] - es.values[0]) < 1e-15);
    CHECK(std::abs(es.values[3] - es.values[2]) < 1e-15);
    CHECK(es.values[0] == tx0_reference_energy(p));
  }

  TEST_CASE("Zeeman term") {
    const ModelParams p;
    CHECK(max_abs(h_zeeman(Vec3::Zero(), p)) == 0.0);
    const double b = 0.25;
    const ComplexMatrix4 hz = h_zeeman(Vec3(0, 0, b), p);
    for (int i = 0; i < 4; ++i) {
      const double m = JOperators::m_values[i];
      CHECK(std::abs(hz(i, i).real() - p.mu_b * b * (p.g1 * m + p.g2 * m * m * m)) < 1e-18);
    }
    for (int trial = 0; trial < 20; ++trial) {
      const Vec3 B = 0.1099 * random_vector(1.0).normalized();
      const EigenSystem plus = eig_hermitian_4(h_zeeman(B, p));
      const EigenSystem minus = eig_hermitian_4(h_zeeman(-B, p));
      CHECK(std::abs(h_zeeman(B, p).trace()) < 1e-18);
      for (int i = 0; i < 4; ++i) {
        CHECK(std::abs(plus.values[i] + plus.values[3 - i]) < 1e-18);
        CHECK(std::abs(plus.values[i] + minus.values[3 - i]) < 1e-18);
      }
    }
  }

  TEST_CASE("ground-state electron splitting") {
    const ModelParams p;
    CHECK(ground_zeeman_splitting(Vec3::Zero(), p) == 0.0);
    const double s = ground_zeeman_splitting(Vec3(0, 0.1099, 0), p);
    CHECK(s == doctest::Approx(2.005 * 5.78838180e-5 * 0.1099).epsilon(1e-15));
    CHECK(s * p.hz_per_ev == doctest::Approx(3.08e9).epsilon(2e-3));
    CHECK(ground_zeeman_splitting(Vec3(0, 0.2198, 0), p) == doctest::Approx(2 * s).epsilon(1e-15));
  }

  TEST_CASE("Stark examples for the identity orientation") {
    const ModelParams p;
    const double e = 1e5;
    const Vec3 e110 = e * Vec3(1, 1, 0).normalized();
    const Vec3 e001(0, 0, e);
    CHECK(stark_shift_linear(e001, p) == doctest::Approx(p.a_y * e).epsilon(1e-14));
    CHECK(stark_shift_linear(e110, p) == doctest::Approx(p.a_x * e).epsilon(1e-14));
    CHECK(stark_shift_quadratic(e001, p) == doctest::Approx(-p.alpha_yy * e * e / 2).epsilon(1e-14));
    CHECK(stark_shift_quadratic(e110, p) == doctest::Approx(-p.alpha_xx * e * e / 2).epsilon(1e-14));
    CHECK(std::abs(stark_shift_linear(field_transform(orientations().at("z1"), e110), p)) < 1e-9);

    ModelParams q = p;
    q.alpha_xy = 0.031;
    const Vec3 local = field_transform(orientations().at("y0"), e110);
    const double expected =
        -(q.alpha_yy + std::sqrt(2.0) * q.alpha_xy + 0.5 * (q.alpha_xx + q.alpha_zz)) * e * e / 4;
    CHECK(stark_shift_quadratic(local, q) == doctest::Approx(expected).epsilon(1e-12));
  }

  TEST_CASE("acceptor quadratic Stark operator") {
    const JOperators& J = j_operators();
    CHECK(max_abs(h_stark_acceptor_quadratic(Vec3::Zero(), {1, 2, 3})) == 0.0);
    const double e = 3e4;
    ComplexMatrix4 expected = ComplexMatrix4::Zero();
    expected.diagonal() << 1, -1, -1, 1;
    CHECK(max_diff(h_stark_acceptor_quadratic(Vec3(0, 0, e), {0, 0.5, 0}), 0.5 * e * e * expected) < 1e-6);
    const Vec3 v = random_vector(1e4);
    CHECK(max_diff(h_stark_acceptor_quadratic(v, {0.7, 0, 0}), 0.7 * v.squaredNorm() * I) < 1e-6);
    const ComplexMatrix4 h = h_stark_acceptor_quadratic(v, {0, 0.3, 0.2});
    CHECK(max_diff(h, h.adjoint()) < 1e-9);
    CHECK(std::abs(h.trace()) < 1e-6);
    const ComplexMatrix4 shear = h_stark_acceptor_quadratic(Vec3(e, e, 0), {0, 0, 1.0});
    CHECK(max_diff(shear, 2.0 / std::sqrt(3.0) * e * e * sym_product(J.jx, J.jy)) < 1e-6);
  }

  TEST_CASE("Kramers degeneracy at zero magnetic field") {
    ModelParams p;
    for (int trial = 0; trial < 1000; ++trial) {
      FieldConfig f = random_fields(false);
      if (trial % 3 == 0) f.acceptor_stark = CubicStarkParams{uniform(-1e-15, 1e-15), uniform(-1e-15, 1e-15), uniform(-1e-15, 1e-15)};
      const auto& frame = orientations()[trial % OrientationSet::kCount];
      const EigenSystem es = eig_hermitian_4(assemble_tx_hamiltonian(frame, f, p));
      CHECK(std::abs(es.values[1] - es.values[0]) < 1e-14);
      CHECK(std::abs(es.values[3] - es.values[2]) < 1e-14);
    }
  }

  TEST_CASE("crystal-frame and defect-frame evaluations agree") {
    ModelParams p;
    for (int trial = 0; trial < 100; ++trial) {
      const FieldConfig f = random_fields(true);
      const auto& frame = orientations()[static_cast<int>(uniform(0, 24))];
      const EigenSystem a = eig_hermitian_4(assemble_tx_hamiltonian(frame, f, p));
      const EigenSystem b = eig_hermitian_4(assemble_tx_hamiltonian_defect_frame(frame, f, p));
      for (int i = 0; i < 4; ++i) CHECK(std::abs(a.values[i] - b.values[i]) < 1e-12);
    }
  }

  TEST_CASE("inversion partners") {
    ModelParams p;
    for (int trial = 0; trial < 50; ++trial) {
      FieldConfig f = random_fields(true);
      const auto& frame = orientations()[trial % OrientationSet::kProper];
      const auto& partner = orientations().partner(frame);
      const EigenSystem a = eig_hermitian_4(assemble_tx_hamiltonian(frame, f, p));
      const EigenSystem b = eig_hermitian_4(assemble_tx_hamiltonian(partner, f, p));
      for (int i = 0; i < 4; ++i) CHECK(std::abs(a.values[i] - b.values[i]) < 1e-12);

      const double lin = stark_shift_linear(field_transform(frame, f.e_field), p);
      const double lin_partner = stark_shift_linear(field_transform(partner, f.e_field), p);
      const double quad = stark_shift_quadratic(field_transform(frame, f.e_field), p);
      const double quad_partner = stark_shift_quadratic(field_transform(partner, f.e_field), p);
      CHECK(lin_partner == doctest::Approx(-lin).epsilon(1e-13));
      CHECK(quad_partner == doctest::Approx(quad).epsilon(1e-13));
    }
  }

  TEST_CASE("hydrostatic stress shifts every level equally") {
    const ModelParams p;
    const double T = -8e7;
    FieldConfig f;
    f.ext_stress = StressTensor{SymmetricTensor3::diagonal(T, T, T)};
    const double eps = T * (p.compliance.s11 + 2 * p.compliance.s12);
    const double shift = (p.piezo.a1 + 2 * p.piezo.a2) * T + 0.75 * p.b * eps;
    for (const auto& frame : orientations()) {
      const EigenSystem base = eig_hermitian_4(assemble_tx_hamiltonian(frame, {}, p));
      const EigenSystem loaded = eig_hermitian_4(assemble_tx_hamiltonian(frame, f, p));
      for (int i = 0; i < 4; ++i) CHECK(std::abs(loaded.values[i] - base.values[i] - shift) < 1e-15);
    }
  }

  TEST_CASE("assembled Hamiltonian is Hermitian and traceless Zeeman part") {
    ModelParams p;
    const FieldConfig f = random_fields(true);
    for (const auto& frame : orientations()) {
      const ComplexMatrix4 h = assemble_tx_hamiltonian(frame, f, p);
      CHECK(max_diff(h, h.adjoint()) < 1e-18);
    }
  }
}
