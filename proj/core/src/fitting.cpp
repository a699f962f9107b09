#include "txh/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "txh/error.hpp"
#include "txh/parallel.hpp"

namespace txh {

std::string_view to_string(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::ZeemanRotation: return "zeeman_rotation";
    case DatasetKind::StarkSweep: return "stark_sweep";
    case DatasetKind::StressSweep: return "stress_sweep";
  }
  return "unknown";
}

DatasetKind dataset_kind_from_string(std::string_view s) {
  if (s == "zeeman_rotation") return DatasetKind::ZeemanRotation;
  if (s == "stark_sweep") return DatasetKind::StarkSweep;
  if (s == "stress_sweep") return DatasetKind::StressSweep;
  throw Error(ErrorKind::UnsupportedKind, "unsupported dataset kind '" + std::string(s) + "'");
}

void SpectralDataset::validate() const {
  if (points.empty()) throw Error(ErrorKind::InvalidProblem, "dataset '" + name + "' has no points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(points[i].sigma > 0.0)) {
      throw Error(ErrorKind::InvalidProblem,
                  "dataset '" + name + "' point " + std::to_string(i) + " has sigma <= 0");
    }
    if (points[i].orientation && !orientations().find(*points[i].orientation)) {
      throw Error(ErrorKind::InvalidProblem, "dataset '" + name + "' point " + std::to_string(i) +
                                                 " names unknown orientation '" + *points[i].orientation + "'");
    }
  }
  if (!(weight > 0.0)) throw Error(ErrorKind::InvalidProblem, "dataset '" + name + "' has weight <= 0");
}

namespace {

using Accessor = double ModelParams::*;

const std::map<std::string, std::function<double&(ModelParams&)>, std::less<>>& registry() {
  static const auto reg = [] {
    std::map<std::string, std::function<double&(ModelParams&)>, std::less<>> m;
    auto field = [&](const char* name, Accessor a) {
      m.emplace(name, [a](ModelParams& p) -> double& { return p.*a; });
    };
    field("b", &ModelParams::b);
    field("d", &ModelParams::d);
    field("eps_yy_p", &ModelParams::eps_yy_p);
    field("eps_zz_p", &ModelParams::eps_zz_p);
    field("theta_p", &ModelParams::theta_p);
    field("g1", &ModelParams::g1);
    field("g2", &ModelParams::g2);
    field("g_e", &ModelParams::g_e);
    field("a_x", &ModelParams::a_x);
    field("a_y", &ModelParams::a_y);
    field("alpha_xx", &ModelParams::alpha_xx);
    field("alpha_xy", &ModelParams::alpha_xy);
    field("alpha_yy", &ModelParams::alpha_yy);
    field("alpha_zz", &ModelParams::alpha_zz);
    field("e_x", &ModelParams::e_x);
    m.emplace("a1", [](ModelParams& p) -> double& { return p.piezo.a1; });
    m.emplace("a2", [](ModelParams& p) -> double& { return p.piezo.a2; });
    m.emplace("a3", [](ModelParams& p) -> double& { return p.piezo.a3; });
    m.emplace("a4", [](ModelParams& p) -> double& { return p.piezo.a4; });
    return m;
  }();
  return reg;
}

enum class DatasetField { MisalignTheta, MisalignPhi, Offset };

struct DatasetParamRef {
  std::size_t dataset;
  DatasetField field;
};

std::optional<DatasetParamRef> parse_dataset_param(std::string_view name) {
  static constexpr std::pair<std::string_view, DatasetField> prefixes[] = {
      {"misalign_theta[", DatasetField::MisalignTheta},
      {"misalign_phi[", DatasetField::MisalignPhi},
      {"offset[", DatasetField::Offset}};
  for (const auto& [p, field] : prefixes) {
    if (name.substr(0, p.size()) != p || name.back() != ']') continue;
    const std::string_view digits = name.substr(p.size(), name.size() - p.size() - 1);
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }))
      return std::nullopt;
    return DatasetParamRef{std::stoul(std::string(digits)), field};
  }
  return std::nullopt;
}

}  // namespace

const std::vector<std::string>& model_parameter_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, _] : registry()) v.push_back(k);
    return v;
  }();
  return names;
}

bool is_known_parameter(std::string_view name, std::size_t n_datasets) {
  if (registry().count(name)) return true;
  const auto m = parse_dataset_param(name);
  return m && m->dataset < n_datasets;
}

double get_model_parameter(const ModelParams& p, std::string_view name) {
  auto it = registry().find(name);
  if (it == registry().end()) throw Error(ErrorKind::ConfigError, "unknown parameter '" + std::string(name) + "'");
  ModelParams copy = p;
  return it->second(copy);
}

void set_model_parameter(ModelParams& p, std::string_view name, double value) {
  auto it = registry().find(name);
  if (it == registry().end()) throw Error(ErrorKind::ConfigError, "unknown parameter '" + std::string(name) + "'");
  it->second(p) = value;
}

void FitProblem::validate() const {
  if (datasets.empty()) throw Error(ErrorKind::InvalidProblem, "fit problem has no datasets");
  for (const auto& d : datasets) d.validate();
  if (free.empty()) throw Error(ErrorKind::InvalidProblem, "fit problem has no free parameters");
  std::set<std::string> seen;
  for (const auto& f : free) {
    if (!is_known_parameter(f.name, datasets.size())) {
      throw Error(ErrorKind::InvalidProblem, "unknown free parameter '" + f.name + "'");
    }
    if (!seen.insert(f.name).second) throw Error(ErrorKind::InvalidProblem, "duplicate free parameter '" + f.name + "'");
    if (!(f.lower <= f.start && f.start <= f.upper)) {
      throw Error(ErrorKind::InvalidProblem, "start of '" + f.name + "' lies outside its bounds");
    }
  }
  for (const auto& s : seeds) {
    if (s.size() != free.size()) throw Error(ErrorKind::InvalidProblem, "seed length does not match free parameters");
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!(free[i].lower <= s[i] && s[i] <= free[i].upper)) {
        throw Error(ErrorKind::InvalidProblem, "seed value of '" + free[i].name + "' lies outside its bounds");
      }
    }
  }
  if (max_iterations < 1) throw Error(ErrorKind::InvalidProblem, "max_iterations must be positive");
}

double FitResult::value(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return best[i];
  throw Error(ErrorKind::ConfigError, "parameter '" + std::string(name) + "' was not fitted");
}

double FitResult::uncertainty(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return sigma[i];
  throw Error(ErrorKind::ConfigError, "parameter '" + std::string(name) + "' was not fitted");
}

ParameterState apply_parameters(const FitProblem& problem, const std::vector<double>& values) {
  ParameterState state{problem.base, {}, {}};
  for (const auto& d : problem.datasets) {
    state.misalignments.push_back(d.misalignment);
    state.offsets.push_back(d.offset);
  }
  for (std::size_t i = 0; i < problem.free.size(); ++i) {
    const auto& name = problem.free[i].name;
    if (auto m = parse_dataset_param(name)) {
      switch (m->field) {
        case DatasetField::MisalignTheta: state.misalignments.at(m->dataset).d_theta = values[i]; break;
        case DatasetField::MisalignPhi: state.misalignments.at(m->dataset).d_phi = values[i]; break;
        case DatasetField::Offset: state.offsets.at(m->dataset) = values[i]; break;
      }
    } else {
      set_model_parameter(state.params, name, values[i]);
    }
  }
  return state;
}

namespace {

bool is_zero(const Misalignment& m) { return m.d_theta == 0.0 && m.d_phi == 0.0; }

Vec3 apply(const Vec3& dir, const Misalignment& m) {
  return is_zero(m) ? Vec3(dir.normalized()) : misaligned_direction(dir, m);
}

struct Candidate {
  std::string orientation;
  std::string channel;
  double value;
};

std::vector<int> frames_for(const DataPoint& point) {
  std::vector<int> out;
  if (point.orientation) {
    out.push_back(*orientations().find(*point.orientation));
  } else {
    for (int i = 0; i < OrientationSet::kCount; ++i) out.push_back(i);
  }
  return out;
}

std::vector<Candidate> candidates(const SpectralDataset& ds, const DataPoint& point, const ModelParams& p,
                                  const Misalignment& m) {
  const auto& frames = orientations();
  std::vector<Candidate> out;
  const auto idx = frames_for(point);

  switch (ds.kind) {
    case DatasetKind::ZeemanRotation: {
      FieldConfig fields;
      fields.b_field = ds.b_magnitude * apply(rotation_sweep_direction(ds.axis_from, ds.axis_to, point.control), m);
      for (int i : idx) {
        const TransitionSet ts = transition_set(frames[i], fields, p);
        for (const auto& l : ts.lines) {
          if (point.line && *point.line != l.name) continue;
          out.push_back({frames[i].label, std::string(1, line_name(l.name)), l.energy});
        }
      }
      break;
    }
    case DatasetKind::StarkSweep: {
      const Vec3 e = point.control * apply(ds.direction, m);
      for (int i : idx) out.push_back({frames[i].label, "", stark_shift_total(frames[i], e, p)});
      break;
    }
    case DatasetKind::StressSweep: {
      FieldConfig fields;
      if (is_zero(m)) {
        fields.ext_stress = stress_for_direction(ds.stress_theta, point.control);
      } else {
        const Vec3 load(std::sin(ds.stress_theta) / std::sqrt(2.0), std::sin(ds.stress_theta) / std::sqrt(2.0),
                        std::cos(ds.stress_theta));
        const Vec3 n = misaligned_direction(load, m);
        fields.ext_stress = StressTensor{SymmetricTensor3(point.control * n * n.transpose())};
      }
      const double offset = p.e_x - tx0_reference_energy(p);
      for (int i : idx) {
        const EigenSystem es = eig_hermitian_4(assemble_tx_hamiltonian(frames[i], fields, p));
        for (int level = 0; level < 2; ++level) {
          if (point.level && *point.level != level) continue;
          out.push_back({frames[i].label, level == 0 ? "TX0" : "TX1", es.values[2 * level] + offset});
        }
      }
      break;
    }
  }
  return out;
}

}  // namespace

void synthesize(SpectralDataset& dataset, const ModelParams& p, std::mt19937_64* rng) {
  for (auto& pt : dataset.points) {
    const bool tagged = pt.orientation && (dataset.kind != DatasetKind::ZeemanRotation || pt.line) &&
                        (dataset.kind != DatasetKind::StressSweep || pt.level);
    if (!tagged) throw Error(ErrorKind::InvalidProblem, "synthesis needs fully tagged points");
    pt.observed = predict(dataset, pt, p, dataset.misalignment);
    if (rng) pt.observed += std::normal_distribution<double>(0.0, pt.sigma)(*rng);
  }
}

namespace {

double predict_shifted(const SpectralDataset& dataset, const DataPoint& point, const ModelParams& p,
                       const Misalignment& misalignment, double offset, Assignment* assignment) {
  const auto cands = candidates(dataset, point, p, misalignment);
  if (cands.empty()) throw Error(ErrorKind::UnsupportedKind, "point selects no observable");
  const Candidate* best = &cands.front();
  const double target = point.observed - offset;
  for (const auto& c : cands) {
    if (std::abs(c.value - target) < std::abs(best->value - target)) best = &c;
  }
  if (assignment) {
    assignment->orientation = best->orientation;
    assignment->channel = best->channel;
    assignment->predicted = best->value + offset;
  }
  return best->value + offset;
}

}  // namespace

double predict(const SpectralDataset& dataset, const DataPoint& point, const ModelParams& p,
               const Misalignment& misalignment, Assignment* assignment) {
  return predict_shifted(dataset, point, p, misalignment, dataset.offset, assignment);
}

std::vector<double> residuals(const FitProblem& problem, const ParameterState& state,
                              std::vector<Assignment>* assignments) {
  std::vector<double> r;
  if (assignments) assignments->clear();
  for (std::size_t d = 0; d < problem.datasets.size(); ++d) {
    const auto& ds = problem.datasets[d];
    const double w = std::sqrt(ds.weight);
    for (std::size_t i = 0; i < ds.points.size(); ++i) {
      const auto& pt = ds.points[i];
      Assignment a{d, i, {}, {}, 0.0};
      const double pred = predict_shifted(ds, pt, state.params, state.misalignments[d], state.offsets[d], &a);
      r.push_back(w * (pt.observed - pred) / pt.sigma);
      if (assignments) assignments->push_back(std::move(a));
    }
  }
  return r;
}

double objective(const FitProblem& problem, const std::vector<double>& values) {
  const auto r = residuals(problem, apply_parameters(problem, values));
  double s = 0.0;
  for (double x : r) s += x * x;
  return s;
}

namespace {

class ScaledProblem {
 public:
  explicit ScaledProblem(const FitProblem& pb) : pb_(pb) {
    for (const auto& f : pb.free) {
      double s = f.scale;
      if (!(s > 0.0)) {
        if (f.start != 0.0) {
          s = std::abs(f.start);
        } else if (std::isfinite(f.upper - f.lower) && f.upper > f.lower) {
          s = f.upper - f.lower;
        } else {
          s = 1.0;
        }
      }
      scale_.push_back(s);
      lower_.push_back(f.lower / s);
      upper_.push_back(f.upper / s);
    }
  }

  std::size_t size() const { return scale_.size(); }
  double scale(std::size_t i) const { return scale_[i]; }

  Eigen::VectorXd to_scaled(const std::vector<double>& v) const {
    Eigen::VectorXd x(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) x(i) = v[i] / scale_[i];
    return x;
  }

  std::vector<double> to_physical(const Eigen::VectorXd& x) const {
    std::vector<double> v(x.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = x(i) * scale_[i];
    return v;
  }

  Eigen::VectorXd clamp(Eigen::VectorXd x) const {
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = std::clamp(x(i), lower_[i], upper_[i]);
    return x;
  }

  Eigen::VectorXd residual(const Eigen::VectorXd& x) {
    ++evaluations_;
    const auto r = residuals(pb_, apply_parameters(pb_, to_physical(x)));
    return Eigen::Map<const Eigen::VectorXd>(r.data(), static_cast<Eigen::Index>(r.size()));
  }

  /// Central differences, falling back to one-sided steps at a bound.
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x, Eigen::Index m) {
    Eigen::MatrixXd j(m, x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double h = 1e-6 * std::max(std::abs(x(i)), 1.0);
      Eigen::VectorXd hi = x;
      Eigen::VectorXd lo = x;
      hi(i) = std::min(x(i) + h, upper_[i]);
      lo(i) = std::max(x(i) - h, lower_[i]);
      const double dx = hi(i) - lo(i);
      if (dx <= 0.0) {
        j.col(i).setZero();
        continue;
      }
      j.col(i) = (residual(hi) - residual(lo)) / dx;
    }
    return j;
  }

  int evaluations() const { return evaluations_; }

 private:
  const FitProblem& pb_;
  std::vector<double> scale_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  int evaluations_ = 0;
};

struct RunResult {
  Eigen::VectorXd x;
  double cost = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

RunResult levenberg_marquardt(const FitProblem& pb, const std::vector<double>& start) {
  constexpr double kRelativeDecrease = 1e-10;
  constexpr double kStepTolerance = 1e-12;

  ScaledProblem sp(pb);
  RunResult out;
  out.x = sp.clamp(sp.to_scaled(start));
  Eigen::VectorXd r = sp.residual(out.x);
  out.cost = r.squaredNorm();
  double lambda = 1e-3;

  for (out.iterations = 0; out.iterations < pb.max_iterations; ++out.iterations) {
    if (out.cost == 0.0) {
      out.converged = true;
      break;
    }
    const Eigen::MatrixXd j = sp.jacobian(out.x, r.size());
    const Eigen::MatrixXd a = j.transpose() * j;
    const Eigen::VectorXd g = j.transpose() * r;
    const double diag_floor = 1e-12 * std::max(1.0, a.diagonal().maxCoeff());

    bool accepted = false;
    bool stop = false;
    while (!accepted) {
      Eigen::MatrixXd m = a;
      for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, i) += lambda * std::max(a(i, i), diag_floor);
      const Eigen::VectorXd delta = m.ldlt().solve(-g);
      const Eigen::VectorXd trial = sp.clamp(out.x + delta);
      const double step = (trial - out.x).norm();
      if (step < kStepTolerance) {
        stop = true;
        break;
      }
      const Eigen::VectorXd r_trial = sp.residual(trial);
      const double cost_trial = r_trial.squaredNorm();
      if (std::isfinite(cost_trial) && cost_trial < out.cost) {
        const double decrease = (out.cost - cost_trial) / out.cost;
        out.x = trial;
        r = r_trial;
        out.cost = cost_trial;
        lambda = std::max(lambda / 3.0, 1e-12);
        accepted = true;
        if (decrease < kRelativeDecrease) stop = true;
      } else {
        lambda *= 4.0;
        if (lambda > 1e16) {
          stop = true;
          break;
        }
      }
    }
    if (stop) {
      out.converged = true;
      ++out.iterations;
      break;
    }
  }
  out.evaluations = sp.evaluations();
  return out;
}

}  // namespace

FitResult fit(const FitProblem& problem) {
  problem.validate();

  std::vector<std::vector<double>> starts;
  {
    std::vector<double> s;
    for (const auto& f : problem.free) s.push_back(f.start);
    starts.push_back(std::move(s));
  }
  for (const auto& s : problem.seeds) starts.push_back(s);

  std::vector<RunResult> runs(starts.size());
  parallel_for(starts.size(), [&](std::size_t i) { runs[i] = levenberg_marquardt(problem, starts[i]); });

  std::size_t best = 0;
  int total_evaluations = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    total_evaluations += runs[i].evaluations;
    if (runs[i].cost < runs[best].cost) best = i;
  }
  const RunResult& run = runs[best];

  ScaledProblem sp(problem);
  FitResult out;
  out.best = sp.to_physical(run.x);
  for (const auto& f : problem.free) out.names.push_back(f.name);
  out.converged = run.converged;
  out.iterations = run.iterations;

  const ParameterState state = apply_parameters(problem, out.best);
  out.params = state.params;
  out.misalignments = state.misalignments;
  out.offsets = state.offsets;
  const auto r = residuals(problem, state, &out.assignments);
  out.n_points = r.size();
  for (double x : r) out.chi_square += x * x;
  out.residual_rms = std::sqrt(out.chi_square / static_cast<double>(r.size()));

  // Linearised covariance (J^T J)^-1 scaled by the reduced chi-square.
  const Eigen::MatrixXd j = sp.jacobian(run.x, static_cast<Eigen::Index>(r.size()));
  out.n_evaluations = total_evaluations + sp.evaluations() + 1;
  const Eigen::MatrixXd a = j.transpose() * j;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  const double max_eig = es.eigenvalues().maxCoeff();
  const double min_eig = es.eigenvalues().minCoeff();
  const long dof = static_cast<long>(r.size()) - static_cast<long>(problem.free.size());
  out.sigma.assign(problem.free.size(), std::numeric_limits<double>::quiet_NaN());
  if (max_eig > 0.0 && min_eig > 1e-14 * max_eig && dof > 0) {
    const Eigen::MatrixXd cov = a.inverse() * (out.chi_square / static_cast<double>(dof));
    for (std::size_t i = 0; i < problem.free.size(); ++i) {
      out.sigma[i] = std::sqrt(std::max(cov(i, i), 0.0)) * sp.scale(i);
    }
    out.uncertainties_available = true;
  }
  return out;
}

}  // namespace txh
