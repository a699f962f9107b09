#include <doctest.h>

#include <set>
#include <string>

#include "support.hpp"
#include "txh/error.hpp"
#include "txh/symmetry.hpp"

using namespace txh;
using namespace txh::test;

namespace {

// "[y,-z,x]" -> the vector (v_y, -v_z, v_x)
Vec3 apply_image(const std::string& image, const Vec3& v) {
  Vec3 out;
  int k = 0;
  double sign = 1.0;
  for (char c : image) {
    if (c == '-') sign = -1.0;
    if (c >= 'x' && c <= 'z') {
      out(k++) = sign * v(c - 'x');
      sign = 1.0;
    }
  }
  REQUIRE(k == 3);
  return out;
}

struct Row {
  const char* label;
  const char* operation;
  const char* direct;    // coordinate transformation of the orientation
  const char* inverted;  // inversion column
  const char* field;     // applied-field transformation
};

// Orientation transformation and applied-field tables, with the label of
// each rotation taken from the Stark tables' orientation column.
const Row kRows[] = {
    {"z0", "E", "[x,y,z]", "[-x,-y,-z]", "[x,y,z]"},
    {"z1", "C2[1,0,0]", "[x,-y,-z]", "[-x,y,z]", "[x,-y,-z]"},
    {"z2", "C2[0,0,1]", "[-x,-y,z]", "[x,y,-z]", "[-x,-y,z]"},
    {"z3", "C2[0,1,0]", "[-x,y,-z]", "[x,-y,z]", "[-x,y,-z]"},
    {"y0", "C3[-1,-1,-1]", "[y,z,x]", "[-y,-z,-x]", "[z,x,y]"},
    {"y1", "C3[1,-1,1]", "[-y,-z,x]", "[y,z,-x]", "[z,-x,-y]"},
    {"y2", "C3[-1,1,1]", "[-y,z,-x]", "[y,-z,x]", "[-z,-x,y]"},
    {"y3", "C3[1,1,-1]", "[y,-z,-x]", "[-y,z,x]", "[-z,x,-y]"},
    {"x0", "C3[1,1,1]", "[z,x,y]", "[-z,-x,-y]", "[y,z,x]"},
    {"x3", "C3[1,-1,-1]", "[-z,-x,y]", "[z,x,-y]", "[-y,z,-x]"},
    {"x2", "C3[-1,1,-1]", "[z,-x,-y]", "[-z,x,y]", "[-y,-z,x]"},
    {"x1", "C3[-1,-1,1]", "[-z,x,-y]", "[z,-x,y]", "[y,-z,-x]"},
};

}  // namespace

TEST_SUITE("symmetry") {
  const OrientationSet& set = orientations();

  TEST_CASE("identity and inversion of the identity") {
    CHECK(set.at("z0").rotation == Rotation3::Identity());
    CHECK_FALSE(set.at("z0").inverted);
    CHECK(set.at("z0'").rotation == -Rotation3::Identity());
    CHECK(set.at("z0'").inverted);
    const Vec3 v(0.3, -1.2, 2.5);
    CHECK(set.at("z1").rotation * v == Vec3(v(0), -v(1), -v(2)));
  }

  TEST_CASE("every row of the orientation and field tables") {
    for (const auto& row : kRows) {
      CAPTURE(row.label);
      const OrientationFrame& f = set.at(row.label);
      const OrientationFrame& fp = set.at(std::string(row.label) + "'");
      CHECK(f.operation == row.operation);
      CHECK(set.partner(f).label == fp.label);
      CHECK(fp.base_label() == row.label);
      for (int trial = 0; trial < 5; ++trial) {
        const Vec3 v = random_vector(3.0);
        CHECK((f.rotation * v - apply_image(row.direct, v)).norm() == 0.0);
        CHECK((fp.rotation * v - apply_image(row.inverted, v)).norm() == 0.0);
        CHECK((field_transform(f, v) - apply_image(row.field, v)).norm() == 0.0);
        CHECK((field_transform(fp, v) + apply_image(row.field, v)).norm() == 0.0);
        CHECK((axial_field_transform(fp, v) - apply_image(row.field, v)).norm() == 0.0);
      }
    }
  }

  TEST_CASE("24 distinct signed permutations in 12 inversion pairs") {
    std::set<std::string> labels;
    for (const auto& f : set) {
      labels.insert(f.label);
      CHECK(is_orthogonal(f.rotation));
      CHECK(std::abs(std::abs(f.rotation.determinant()) - 1.0) < 1e-15);
      CHECK((f.rotation.determinant() < 0) == f.inverted);
      for (int i = 0; i < 3; ++i) CHECK(f.rotation.row(i).cwiseAbs().sum() == 1.0);
      CHECK(set.partner(f).rotation == -f.rotation);
      CHECK(set[f.index].label == f.label);
    }
    CHECK(labels.size() == 24);
    for (int i = 0; i < 24; ++i)
      for (int j = i + 1; j < 24; ++j) CHECK(set[i].rotation != set[j].rotation);
  }

  TEST_CASE("the twelve proper rotations close under composition") {
    for (int i = 0; i < OrientationSet::kProper; ++i) {
      for (int j = 0; j < OrientationSet::kProper; ++j) {
        const Rotation3 product = set[i].rotation * set[j].rotation;
        int hits = 0;
        for (int k = 0; k < OrientationSet::kProper; ++k) hits += set[k].rotation == product;
        CHECK(hits == 1);
      }
    }
  }

  TEST_CASE("field transform inverts the direct rotation") {
    for (const auto& f : set) {
      const Vec3 v = random_vector(1.0);
      CHECK((field_transform(f, f.rotation * v) - v).norm() < 1e-15);
    }
  }

  TEST_CASE("defect tensors") {
    const SymmetricTensor3 t = random_symmetric(1.0);
    CHECK(defect_tensor_to_crystal(set.at("z0"), t).matrix() == t.matrix());
    const SymmetricTensor3 d = SymmetricTensor3::diagonal(1.0, 2.0, 3.0);
    for (const auto& f : set) {
      const SymmetricTensor3 c = defect_tensor_to_crystal(f, d);
      // signed permutations only permute the diagonal
      Eigen::Vector3d expected;
      for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
          if (f.rotation(i, k) != 0.0) expected(i) = d(k, k);
      CHECK(c.matrix() == Eigen::Matrix3d(expected.asDiagonal()));
      CHECK(defect_tensor_to_crystal(set.partner(f), t).matrix() == defect_tensor_to_crystal(f, t).matrix());
      CHECK(max_diff(crystal_tensor_to_defect(f, defect_tensor_to_crystal(f, t)).matrix(), t.matrix()) < 1e-15);
    }
  }

  TEST_CASE("label lookup") {
    CHECK(set.find("x3'").value() == 21);
    CHECK_FALSE(set.find("w0").has_value());
    CHECK_THROWS_AS(set.at("w0"), Error);
  }
}
