#include "txh/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "txh/error.hpp"
#include "txh/parallel.hpp"

namespace txh {

char line_name(Line l) { return static_cast<char>('A' + static_cast<int>(l)); }

Line line_from_name(char c) {
  if (c < 'A' || c > 'D') throw Error(ErrorKind::ParseError, std::string("unknown line name '") + c + "'");
  return static_cast<Line>(c - 'A');
}

double stark_shift_total(const OrientationFrame& frame, const Vec3& e_field, const ModelParams& p) {
  const Vec3 local = field_transform(frame, e_field);
  return stark_shift_linear(local, p) + stark_shift_quadratic(local, p);
}

TransitionSet transition_set(const OrientationFrame& frame, const FieldConfig& fields, const ModelParams& p) {
  const EigenSystem es = eig_hermitian_4(assemble_tx_hamiltonian(frame, fields, p));
  const double tx0_width = es.values[1] - es.values[0];
  const double gap = es.values[2] - es.values[1];
  if (!(tx0_width < gap)) {
    std::ostringstream os;
    os << "TX0 splitting " << tx0_width << " eV is not below the TX0-TX1 gap " << gap << " eV for "
       << frame.label;
    throw Error(ErrorKind::ManifoldOverlap, os.str());
  }

  const double offset = p.e_x - tx0_reference_energy(p) + stark_shift_total(frame, fields.e_field, p) / p.hz_per_ev;
  const double tx_lo = es.values[0] + offset;
  const double tx_hi = es.values[1] + offset;
  const double half_ground = 0.5 * ground_zeeman_splitting(fields.b_field, p);

  TransitionSet ts;
  ts.orientation = frame.label;
  const std::array<double, 4> energies{tx_hi + half_ground, tx_hi - half_ground, tx_lo + half_ground,
                                       tx_lo - half_ground};
  for (int i = 0; i < 4; ++i) {
    ts.lines[i] = {static_cast<Line>(i), energies[i], (energies[i] - p.e_x) * p.hz_per_ev};
  }
  return ts;
}

double hole_g_factor(const TransitionSet& ts, double b_magnitude, const ModelParams& p) {
  if (!(b_magnitude > 0.0)) throw Error(ErrorKind::ZeroField, "hole g-factor needs |B| > 0");
  return std::abs(ts.hole_splitting()) / (p.mu_b * b_magnitude);
}

namespace {

struct GreatCircle {
  Vec3 u;
  Vec3 w;
  double span;
};

GreatCircle great_circle(const Vec3& from, const Vec3& to) {
  if (from.norm() == 0.0 || to.norm() == 0.0) throw Error(ErrorKind::DegenerateAxes, "sweep axis has zero length");
  const Vec3 u = from.normalized();
  const Vec3 t = to.normalized();
  const Vec3 perp = t - t.dot(u) * u;
  if (perp.norm() < 1e-12) throw Error(ErrorKind::DegenerateAxes, "sweep axes are parallel");
  return {u, perp.normalized(), std::atan2(perp.norm(), t.dot(u))};
}

}  // namespace

Vec3 rotation_sweep_direction(const Vec3& axis_from, const Vec3& axis_to, double angle) {
  const GreatCircle gc = great_circle(axis_from, axis_to);
  return std::cos(angle) * gc.u + std::sin(angle) * gc.w;
}

std::vector<RotationStep> field_rotation_sweep(const Vec3& axis_from, const Vec3& axis_to, int n_steps,
                                               double b_magnitude, const ModelParams& p) {
  const GreatCircle gc = great_circle(axis_from, axis_to);
  if (n_steps < 1) throw Error(ErrorKind::ConfigError, "sweep needs at least one step");

  std::vector<RotationStep> steps(n_steps);
  for (int i = 0; i < n_steps; ++i) {
    const double angle = n_steps == 1 ? 0.0 : gc.span * i / (n_steps - 1);
    steps[i].angle = angle;
    steps[i].b_field = b_magnitude * (std::cos(angle) * gc.u + std::sin(angle) * gc.w);
    steps[i].sets.resize(OrientationSet::kCount);
  }

  const auto& frames = orientations();
  parallel_for(static_cast<std::size_t>(n_steps) * OrientationSet::kCount, [&](std::size_t k) {
    auto& step = steps[k / OrientationSet::kCount];
    const int o = static_cast<int>(k % OrientationSet::kCount);
    FieldConfig fields;
    fields.b_field = step.b_field;
    step.sets[o] = transition_set(frames[o], fields, p);
  });
  return steps;
}

Vec3 misaligned_direction(const Vec3& direction, const Misalignment& m) {
  if (direction.norm() == 0.0) throw Error(ErrorKind::DegenerateAxes, "field direction has zero length");
  const Vec3 u = direction.normalized();
  const double theta = std::acos(std::clamp(u(2), -1.0, 1.0)) + m.d_theta;
  const double phi = std::atan2(u(1), u(0)) + m.d_phi;
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

std::vector<StarkPoint> stark_sweep(const Vec3& direction, double e_max, int n_steps, const ModelParams& p,
                                    const Misalignment& misalignment) {
  if (n_steps < 1) throw Error(ErrorKind::ConfigError, "sweep needs at least one step");
  const Vec3 u = misaligned_direction(direction, misalignment);
  const auto& frames = orientations();

  std::vector<StarkPoint> out(n_steps);
  for (int i = 0; i < n_steps; ++i) {
    const double e = n_steps == 1 ? e_max : e_max * i / (n_steps - 1);
    out[i].e_field = e;
    for (const auto& f : frames) out[i].shift[f.index] = stark_shift_total(f, e * u, p);
  }
  return out;
}

int GroupingReport::group_of(const std::string& label) const {
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto& m = groups[g].members;
    if (std::find(m.begin(), m.end(), label) != m.end()) return static_cast<int>(g);
  }
  return -1;
}

GroupingReport degeneracy_grouping(std::vector<LabeledValues> values, double tolerance, std::string field_spec) {
  if (!(tolerance > 0.0)) throw Error(ErrorKind::ConfigError, "grouping tolerance must be positive");
  std::sort(values.begin(), values.end(),
            [](const LabeledValues& a, const LabeledValues& b) { return a.label < b.label; });

  const std::size_t n = values.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  auto linked = [&](const LabeledValues& a, const LabeledValues& b) {
    const std::size_t dim = std::min(a.values.size(), b.values.size());
    for (std::size_t k = 0; k < dim; ++k)
      if (std::abs(a.values[k] - b.values[k]) > tolerance) return false;
    return true;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (linked(values[i], values[j])) parent[root(i)] = root(j);

  std::vector<std::vector<std::size_t>> clusters;
  std::vector<int> cluster_of(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = root(i);
    if (cluster_of[r] < 0) {
      cluster_of[r] = static_cast<int>(clusters.size());
      clusters.emplace_back();
    }
    clusters[cluster_of[r]].push_back(i);
  }

  GroupingReport report;
  report.field_spec = std::move(field_spec);
  report.tolerance = tolerance;
  for (const auto& c : clusters) {
    Group g;
    double sum = 0.0;
    for (std::size_t i : c) {
      g.members.push_back(values[i].label);
      sum += values[i].values.empty() ? 0.0 : values[i].values.front();
    }
    g.representative = sum / static_cast<double>(c.size());
    report.groups.push_back(std::move(g));
  }
  std::stable_sort(report.groups.begin(), report.groups.end(),
                   [](const Group& a, const Group& b) { return a.representative < b.representative; });
  return report;
}

GroupingReport degeneracy_grouping(const std::vector<std::pair<std::string, double>>& values, double tolerance,
                                   std::string field_spec) {
  std::vector<LabeledValues> v;
  v.reserve(values.size());
  for (const auto& [label, x] : values) v.push_back({label, {x}});
  return degeneracy_grouping(std::move(v), tolerance, std::move(field_spec));
}

GroupingReport group_transition_sets(const std::vector<TransitionSet>& sets, double tolerance_hz,
                                     std::string field_spec) {
  std::vector<LabeledValues> v;
  v.reserve(sets.size());
  for (const auto& ts : sets) {
    LabeledValues lv{ts.orientation, {}};
    for (const auto& l : ts.lines) lv.values.push_back(l.frequency_offset);
    v.push_back(std::move(lv));
  }
  return degeneracy_grouping(std::move(v), tolerance_hz, std::move(field_spec));
}

BranchingRatio radiative_branching_ratio(const OrientationFrame& frame, const FieldConfig& fields,
                                         const ModelParams& p, TxState state) {
  if (fields.b_field.norm() == 0.0) {
    throw Error(ErrorKind::ZeroField, "branching ratio needs B != 0 to define the spin states");
  }
  const EigenSystem es = eig_hermitian_4(assemble_tx_hamiltonian_defect_frame(frame, fields, p));
  const int k = static_cast<int>(state);
  const ComplexVector4& v = es.vectors[k];

  BranchingRatio out;
  out.rate_up = std::norm(v(1));
  out.rate_down = std::norm(v(2));
  const double total = out.rate_up + out.rate_down;
  if (!(total > 1e-15)) throw Error(ErrorKind::ZeroTotalRate, "TX0 state has no m_j = +-1/2 weight");
  out.rbr = (state == TxState::Lower ? out.rate_up : out.rate_down) / total;
  out.cyclicity = 1.0 / (1.0 - out.rbr);
  return out;
}

std::array<SpinComposition, 2> eigenvector_composition(const OrientationFrame& frame, const FieldConfig& fields,
                                                       const ModelParams& p) {
  const EigenSystem es = eig_hermitian_4(assemble_tx_hamiltonian_defect_frame(frame, fields, p));
  std::array<SpinComposition, 2> out;
  for (int k = 0; k < 2; ++k) {
    const ComplexVector4& v = es.vectors[k];
    out[k].w_half = std::norm(v(1)) + std::norm(v(2));
    out[k].w_three_half = std::norm(v(0)) + std::norm(v(3));
  }
  return out;
}

EffectiveField effective_field(const DielectricStack& stack, double v_total) {
  constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F/m
  if (stack.layers.empty()) throw Error(ErrorKind::InvalidStack, "dielectric stack has no layers");
  if (stack.sample_index >= stack.layers.size()) {
    throw Error(ErrorKind::InvalidStack, "sample index outside the stack");
  }
  double inverse_total = 0.0;
  for (const auto& layer : stack.layers) {
    if (!(layer.thickness > 0.0)) throw Error(ErrorKind::InvalidStack, "layer '" + layer.name + "' has thickness <= 0");
    if (!(layer.permittivity >= 1.0)) {
      throw Error(ErrorKind::InvalidStack, "layer '" + layer.name + "' has relative permittivity < 1");
    }
    inverse_total += layer.thickness / (kVacuumPermittivity * layer.permittivity);
  }
  const auto& sample = stack.layers[stack.sample_index];
  const double inverse_sample = sample.thickness / (kVacuumPermittivity * sample.permittivity);

  EffectiveField out;
  out.v_sample = v_total * inverse_sample / inverse_total;
  out.e_sample = out.v_sample / sample.thickness;
  return out;
}

}  // namespace txh
