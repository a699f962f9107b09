#include <doctest.h>

#include "support.hpp"
#include "txh/error.hpp"
#include "txh/hamiltonian.hpp"

using namespace txh;
using namespace txh::test;

TEST_SUITE("numerics") {
  TEST_CASE("diagonal matrix gives its entries and the standard basis") {
    ComplexMatrix4 m = ComplexMatrix4::Zero();
    m.diagonal() << 4.0, 2.0, 3.0, 1.0;
    const EigenSystem es = eig_hermitian_4(m);
    CHECK(es.values == std::array<double, 4>{1.0, 2.0, 3.0, 4.0});
    const std::array<int, 4> expected_index{3, 1, 2, 0};
    for (int k = 0; k < 4; ++k) {
      ComplexVector4 e = ComplexVector4::Zero();
      e(expected_index[k]) = 1.0;
      CHECK((es.vectors[k] - e).norm() < 1e-15);
    }
  }

  TEST_CASE("zero matrix") {
    const EigenSystem es = eig_hermitian_4(ComplexMatrix4::Zero());
    for (double v : es.values) CHECK(v == 0.0);
    for (int k = 0; k < 4; ++k) CHECK(std::abs(es.vectors[k].norm() - 1.0) < 1e-15);
  }

  TEST_CASE("zz-only strain splits into doublets separated by 2|b s|") {
    ModelParams p;
    const double s = 3e-4;
    const EigenSystem es = eig_hermitian_4(h_strain(SymmetricTensor3::diagonal(0, 0, s), p, false));
    CHECK(std::abs(es.values[1] - es.values[0]) < 1e-15);
    CHECK(std::abs(es.values[3] - es.values[2]) < 1e-15);
    CHECK(std::abs((es.values[2] - es.values[1]) - 2 * std::abs(p.b * s)) < 1e-15);
  }

  TEST_CASE("non-Hermitian input is rejected") {
    ComplexMatrix4 m = random_hermitian();
    m(0, 1) += Complex(1e-6, 0);
    try {
      eig_hermitian_4(m);
      FAIL("expected NonHermitian");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NonHermitian);
    }
    ComplexMatrix4 tiny = random_hermitian();
    tiny(2, 3) += Complex(0, 1e-14);
    CHECK_NOTHROW(eig_hermitian_4(tiny));
  }

  TEST_CASE("random Hermitian matrices satisfy the eigen-system contract") {
    for (int trial = 0; trial < 200; ++trial) {
      const ComplexMatrix4 h = random_hermitian(trial % 2 ? 1e-3 : 5.0);
      const EigenSystem es = eig_hermitian_4(h);
      const double scale = max_abs(h);
      double sum = 0.0;
      for (int i = 0; i < 4; ++i) {
        sum += es.values[i];
        if (i > 0) CHECK(es.values[i] >= es.values[i - 1]);
        CHECK((h * es.vectors[i] - es.values[i] * es.vectors[i]).norm() <= 1e-10 * scale);
        for (int j = 0; j < 4; ++j) {
          const double overlap = std::abs(es.vectors[i].dot(es.vectors[j]) - (i == j ? 1.0 : 0.0));
          CHECK(overlap <= 1e-10);
        }
        // phase convention: first non-negligible component is real and positive
        int first = 0;
        while (std::abs(es.vectors[i](first)) <= 1e-10) ++first;
        CHECK(es.vectors[i](first).imag() == 0.0);
        CHECK(es.vectors[i](first).real() > 0.0);
      }
      CHECK(std::abs(sum - h.trace().real()) <= 1e-10 * scale);
    }
  }

  TEST_CASE("repeated diagonalisation is bit-identical") {
    const ComplexMatrix4 h = random_hermitian();
    const EigenSystem a = eig_hermitian_4(h);
    const EigenSystem b = eig_hermitian_4(h);
    CHECK(a.values == b.values);
    for (int k = 0; k < 4; ++k) CHECK(a.vectors[k] == b.vectors[k]);
  }

  TEST_CASE("congruence with the identity leaves the tensor unchanged") {
    const SymmetricTensor3 t = random_symmetric(1.0);
    CHECK(max_diff(congruence_transform(t, Rotation3::Identity()).matrix(), t.matrix()) == 0.0);
  }

  TEST_CASE("diagonal tensor under C2 about z is unchanged") {
    Rotation3 c2 = Rotation3::Zero();
    c2.diagonal() << -1, -1, 1;
    const SymmetricTensor3 t = SymmetricTensor3::diagonal(1.5, -2.0, 0.25);
    CHECK(max_diff(congruence_transform(t, c2).matrix(), t.matrix()) == 0.0);
  }

  TEST_CASE("xy shear under the cyclic C3 becomes zx shear") {
    // [x,y,z] -> [y,z,x]
    Rotation3 c3 = Rotation3::Zero();
    c3(0, 1) = 1;
    c3(1, 2) = 1;
    c3(2, 0) = 1;
    const double s = 0.37;
    const SymmetricTensor3 t = SymmetricTensor3::from_voigt({0, 0, 0, 0, 0, s});

    double oracle[3][3] = {};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          for (int l = 0; l < 3; ++l) oracle[i][j] += c3(i, k) * t(k, l) * c3(j, l);

    const SymmetricTensor3 r = congruence_transform(t, c3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(r(i, j) == doctest::Approx(oracle[i][j]).epsilon(1e-15));
    const auto v = r.voigt();
    CHECK(v[4] == s);
    CHECK(v[0] == 0.0);
    CHECK(v[3] == 0.0);
    CHECK(v[5] == 0.0);
  }

  TEST_CASE("congruence preserves trace, Frobenius norm and spectrum") {
    for (int trial = 0; trial < 100; ++trial) {
      const SymmetricTensor3 t = random_symmetric(2.0);
      const Eigen::Quaterniond q = Eigen::Quaterniond::UnitRandom();
      const Rotation3 r = q.toRotationMatrix();
      REQUIRE(is_orthogonal(r));
      const SymmetricTensor3 out = congruence_transform(t, r);
      CHECK(out.is_symmetric());
      CHECK(std::abs(out.trace() - t.trace()) <= 1e-12);
      CHECK(std::abs(out.matrix().norm() - t.matrix().norm()) <= 1e-12);
      const Eigen::Vector3d ev_in = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(t.matrix()).eigenvalues();
      const Eigen::Vector3d ev_out = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(out.matrix()).eigenvalues();
      CHECK((ev_in - ev_out).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }

  TEST_CASE("Voigt round trip and symmetry check") {
    const std::array<double, 6> v{1, 2, 3, 4, 5, 6};
    const SymmetricTensor3 t = SymmetricTensor3::from_voigt(v);
    CHECK(t.voigt() == v);
    CHECK(t(1, 2) == 4);
    CHECK(t(2, 0) == 5);
    CHECK(t(0, 1) == 6);
    Eigen::Matrix3d m = t.matrix();
    m(0, 1) += 1e-3;
    CHECK_FALSE(SymmetricTensor3(m).is_symmetric());
  }
}
