#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "txh/cli.hpp"
#include "txh/error.hpp"
#include "txh/parallel.hpp"

namespace txh::cli {

namespace {

constexpr double kDeg = constants::kDegree;

Vec3 parse_axis(std::string text) {
  text.erase(std::remove_if(text.begin(), text.end(), [](char c) { return c == '[' || c == ']' || c == ' '; }),
             text.end());
  std::replace(text.begin(), text.end(), ',', ' ');
  std::istringstream in(text);
  Vec3 v;
  if (!(in >> v(0) >> v(1) >> v(2)) || !(in >> std::ws).eof()) {
    throw Error(ErrorKind::ConfigError, "axis must be three comma-separated numbers, got '" + text + "'");
  }
  return v;
}

std::string axis_text(const Vec3& v) {
  return "[" + format_double(v(0)) + "," + format_double(v(1)) + "," + format_double(v(2)) + "]";
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, path + ": " + e.what());
  }
}

/// Options shared by every command.
struct Common {
  std::string config;
  std::string output;
  std::string format;  // empty: the command's default
  std::vector<std::string> set;
  Json params = Json::object();
};

struct ZeemanOpts {
  double b_mt = 109.9;
  std::string from_axis = "0,0,1";
  std::string to_axis = "-1,1,0";
  int steps = 91;
  double tolerance_mhz = 60.0;
  double group_angle_deg = 45.0;
  std::string report;
};

struct StarkOpts {
  std::string direction = "1,1,0";
  double e_max = 125e3;
  int steps = 26;
  double misalign_theta = 0.0;
  double misalign_phi = 0.0;
  std::string stack;
  double tolerance_mhz = 1.0;
  bool linear_only = false;
  std::string report;
};

struct StrainOpts {
  double direction_theta = 0.0;
  double t_max = -50e6;
  int steps = 21;
  bool hydrostatic = false;
  double tolerance_mhz = 100.0;
  std::string report;
};

struct RbrOpts {
  double b_mt = 250.0;
  int grid = 37;
  std::string state = "lower";
  std::vector<std::string> orientations;
  bool slices = false;
};

struct SynthOpts {
  std::string kind = "zeeman_rotation";
  int steps = 19;
  double b_mt = 109.9;
  std::string from_axis = "0,0,1";
  std::string to_axis = "-1,1,0";
  std::string direction = "1,1,0";
  double e_max = 125e3;
  double direction_theta = 0.0;
  double t_max = -50e6;
  double sigma = 0.0;
  double misalign_theta = 0.0;
  double misalign_phi = 0.0;
  bool noise = false;
  unsigned long long seed = 1;
  std::vector<std::string> orientations;
};

struct OrientationsOpts {
  bool unprimed = false;
};

struct FitOpts {
  std::vector<std::string> data;
};

struct State {
  Common common;
  OrientationsOpts orient;
  ZeemanOpts zeeman;
  StarkOpts stark;
  StrainOpts strain;
  RbrOpts rbr;
  SynthOpts synth;
  FitOpts fit;
};

void add_common(CLI::App* sub, Common& c, bool with_config) {
  if (with_config) sub->add_option("--config", c.config, "JSON file whose keys mirror the long options");
  sub->add_option("-o,--output", c.output, "Write to this file instead of stdout");
  sub->add_option("--format", c.format, "Output format (default csv; json for orientations)")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--set", c.set, "Model parameter override name=value (repeatable)");
}

void build(CLI::App& app, State& s) {
  app.require_subcommand(1, 1);

  auto* o = app.add_subcommand("orientations", "List the 24 defect orientations");
  add_common(o, s.common, true);
  o->add_flag("--unprimed", s.orient.unprimed, "Only the 12 proper rotations");

  auto* z = app.add_subcommand("zeeman", "Transition lines while B rotates between two axes");
  add_common(z, s.common, true);
  z->add_option("--b-mT", s.zeeman.b_mt, "Field magnitude (mT)");
  z->add_option("--from-axis", s.zeeman.from_axis, "Start axis, e.g. 0,0,1");
  z->add_option("--to-axis", s.zeeman.to_axis, "End axis, e.g. -1,1,0");
  z->add_option("--steps", s.zeeman.steps, "Number of angles including both ends")->check(CLI::PositiveNumber);
  z->add_option("--tolerance-mhz", s.zeeman.tolerance_mhz, "Grouping tolerance on every line (MHz)");
  z->add_option("--group-angle-deg", s.zeeman.group_angle_deg, "Sweep angle at which orientations are grouped");
  z->add_option("--report", s.zeeman.report, "Write the grouping report (JSON) to this file");

  auto* st = app.add_subcommand("stark", "Transition shifts versus electric field");
  add_common(st, s.common, true);
  st->add_option("--direction", s.stark.direction, "Field direction, e.g. 1,1,0");
  st->add_option("--e-max", s.stark.e_max, "Largest field (V/m)");
  st->add_option("--steps", s.stark.steps, "Number of field values from 0 to e-max")->check(CLI::PositiveNumber);
  st->add_option("--misalign-theta", s.stark.misalign_theta, "Polar misalignment (deg)");
  st->add_option("--misalign-phi", s.stark.misalign_phi, "Azimuthal misalignment (deg)");
  st->add_option("--stack", s.stark.stack, "Dielectric stack JSON; fields are then nominal V_tot/d_tot");
  st->add_option("--tolerance-mhz", s.stark.tolerance_mhz, "Grouping tolerance (MHz)");
  st->add_flag("--linear-only", s.stark.linear_only, "Group on the linear shift only");
  st->add_option("--report", s.stark.report, "Write the grouping report (JSON) to this file");

  auto* sn = app.add_subcommand("strain", "TX0/TX1 levels versus uniaxial stress");
  add_common(sn, s.common, true);
  sn->add_option("--direction-theta", s.strain.direction_theta, "Load direction from [001] towards [110] (deg)");
  sn->add_option("--t-max", s.strain.t_max, "Largest stress (Pa, compression negative)");
  sn->add_option("--steps", s.strain.steps, "Number of stress values from 0 to t-max")->check(CLI::PositiveNumber);
  sn->add_flag("--hydrostatic", s.strain.hydrostatic, "Apply T times the identity instead of a uniaxial load");
  sn->add_option("--tolerance-mhz", s.strain.tolerance_mhz, "Grouping tolerance (MHz)");
  sn->add_option("--report", s.strain.report, "Write the grouping report (JSON) to this file");

  auto* r = app.add_subcommand("rbr", "Radiative branching ratio over field directions");
  add_common(r, s.common, true);
  r->add_option("--b-mT", s.rbr.b_mt, "Field magnitude (mT)");
  r->add_option("--grid", s.rbr.grid, "Samples per angle (theta 0..180, phi 0..360)")->check(CLI::Range(2, 100000));
  r->add_option("--state", s.rbr.state, "TX0 eigenstate")->check(CLI::IsMember({"lower", "upper"}));
  r->add_option("--orientations", s.rbr.orientations, "Restrict to these labels");
  r->add_flag("--slices", s.rbr.slices, "Only the constant-theta and constant-phi lines through the maximum");

  auto* sy = app.add_subcommand("synth", "Write a synthetic dataset CSV from the model");
  add_common(sy, s.common, true);
  sy->add_option("--kind", s.synth.kind, "Dataset kind")
      ->check(CLI::IsMember({"zeeman_rotation", "stark_sweep", "stress_sweep"}));
  sy->add_option("--steps", s.synth.steps, "Control values per orientation")->check(CLI::PositiveNumber);
  sy->add_option("--b-mT", s.synth.b_mt, "Zeeman field magnitude (mT)");
  sy->add_option("--from-axis", s.synth.from_axis, "Zeeman start axis");
  sy->add_option("--to-axis", s.synth.to_axis, "Zeeman end axis");
  sy->add_option("--direction", s.synth.direction, "Stark field direction");
  sy->add_option("--e-max", s.synth.e_max, "Largest Stark field (V/m)");
  sy->add_option("--direction-theta", s.synth.direction_theta, "Stress direction (deg)");
  sy->add_option("--t-max", s.synth.t_max, "Largest stress (Pa)");
  sy->add_option("--sigma", s.synth.sigma, "Per-point sigma in dataset units (eV or Hz)");
  sy->add_option("--misalign-theta", s.synth.misalign_theta, "Polar misalignment (deg)");
  sy->add_option("--misalign-phi", s.synth.misalign_phi, "Azimuthal misalignment (deg)");
  sy->add_flag("--noise", s.synth.noise, "Add Gaussian noise of width sigma");
  sy->add_option("--seed", s.synth.seed, "Noise seed");
  sy->add_option("--orientations", s.synth.orientations, "Orientation labels (default: all 24)");

  auto* f = app.add_subcommand("fit", "Least-squares fit of model parameters to datasets");
  f->add_option("--config", s.common.config, "Fit configuration JSON")->required();
  f->add_option("-o,--output", s.common.output, "Write the result to this file instead of stdout");
  f->add_option("--data", s.fit.data, "Dataset CSV files, in the order of the config's datasets");
}

std::vector<std::string> reversed(std::vector<std::string> v) {
  std::reverse(v.begin(), v.end());
  return v;
}

/// Appends config-file values for every option not given on the command line.
std::vector<std::string> merge_config(CLI::App* sub, const Json& config, Json& params,
                                      std::vector<std::string> args) {
  if (!config.is_object()) throw Error(ErrorKind::ConfigError, "config must be a JSON object");
  for (const auto& [key, value] : config.items()) {
    if (key == "params") {
      if (!value.is_object()) throw Error(ErrorKind::ConfigError, "config 'params' must be an object");
      params = value;
      continue;
    }
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    const CLI::Option* opt = key == "config" ? nullptr : sub->get_option_no_throw(flag);
    if (!opt && key == "b_mT") opt = sub->get_option_no_throw("--b-mT");
    if (!opt) throw Error(ErrorKind::ConfigError, "unknown config key '" + key + "' for " + sub->get_name());
    if (opt->count() > 0) continue;
    const std::string name = opt->get_name();

    auto scalar = [&](const Json& v) -> std::string {
      if (v.is_string()) return v.get<std::string>();
      if (v.is_number_integer()) return std::to_string(v.get<long long>());
      if (v.is_number()) return format_double(v.get<double>());
      throw Error(ErrorKind::ConfigError, "config key '" + key + "' has an unsupported value");
    };
    if (value.is_boolean()) {
      if (opt->get_expected_min() != 0) throw Error(ErrorKind::ConfigError, "config key '" + key + "' is not a flag");
      if (value.get<bool>()) args.push_back(name);
    } else if (value.is_array() && opt->get_expected_max() > 1) {
      for (const auto& v : value) args.push_back(name + "=" + scalar(v));
    } else if (value.is_array()) {
      std::string joined;
      for (const auto& v : value) joined += (joined.empty() ? "" : ",") + scalar(v);
      args.push_back(name + "=" + joined);
    } else {
      args.push_back(name + "=" + scalar(value));
    }
  }
  return args;
}

ModelParams model_params(const Common& c) {
  ModelParams p;
  apply_param_overrides(p, c.params);
  for (const auto& kv : c.set) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::ConfigError, "--set expects name=value, got '" + kv + "'");
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(kv.substr(eq + 1), &used);
      if (used != kv.size() - eq - 1) throw std::invalid_argument(kv);
    } catch (const std::exception&) {
      throw Error(ErrorKind::ConfigError, "--set value for '" + kv.substr(0, eq) + "' is not a number");
    }
    set_model_parameter(p, kv.substr(0, eq), v);
  }
  return p;
}

class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : out_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw Error(ErrorKind::ConfigError, "cannot write '" + path + "'");
      out_ = file_.get();
    }
  }
  std::ostream& operator*() { return *out_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* out_;
};

void write_report(const std::string& path, const Json& doc) {
  if (path.empty()) return;
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::ConfigError, "cannot write '" + path + "'");
  f << doc.dump(2) << '\n';
}

int cmd_orientations(const State& s, std::ostream& out) {
  Sink sink(s.common.output, out);
  if (s.common.format != "csv") {
    *sink << orientations_to_json(s.orient.unprimed).dump(2) << '\n';
    return 0;
  }
  *sink << "label,index,operation,parity,r11,r12,r13,r21,r22,r23,r31,r32,r33\n";
  for (const auto& f : orientations()) {
    if (s.orient.unprimed && f.inverted) continue;
    *sink << f.label << ',' << f.index << ',' << f.operation << ',' << (f.inverted ? -1 : 1);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) *sink << ',' << format_double(f.rotation(i, j));
    *sink << '\n';
  }
  return 0;
}

int cmd_zeeman(const State& s, std::ostream& out) {
  const auto& o = s.zeeman;
  const ModelParams p = model_params(s.common);
  const Vec3 from = parse_axis(o.from_axis);
  const Vec3 to = parse_axis(o.to_axis);
  const double b = o.b_mt * 1e-3;
  const auto steps = field_rotation_sweep(from, to, o.steps, b, p);

  FieldConfig fields;
  fields.b_field = b * rotation_sweep_direction(from, to, o.group_angle_deg * kDeg);
  std::vector<TransitionSet> sets;
  for (const auto& f : orientations()) sets.push_back(transition_set(f, fields, p));
  std::ostringstream spec;
  spec << "B = " << format_double(o.b_mt) << " mT at " << format_double(o.group_angle_deg) << " deg from "
       << axis_text(from) << " towards " << axis_text(to);
  const Json report = grouping_to_json(group_transition_sets(sets, o.tolerance_mhz * 1e6, spec.str()));
  write_report(o.report, report);

  Sink sink(s.common.output, out);
  if (s.common.format == "json") {
    Json rows = Json::array();
    for (const auto& st : steps)
      for (const auto& ts : st.sets)
        for (const auto& l : ts.lines)
          rows.push_back({{"angle_deg", st.angle / kDeg},
                          {"orientation", ts.orientation},
                          {"line", std::string(1, line_name(l.name))},
                          {"energy_ev", l.energy},
                          {"offset_ghz", l.frequency_offset * 1e-9}});
    *sink << Json{{"b_mT", o.b_mt}, {"rows", rows}, {"grouping", report}}.dump(2) << '\n';
    return 0;
  }
  *sink << "angle_deg,orientation,line,energy_ev,offset_ghz\n";
  for (const auto& st : steps)
    for (const auto& ts : st.sets)
      for (const auto& l : ts.lines)
        *sink << format_double(st.angle / kDeg) << ',' << ts.orientation << ',' << line_name(l.name) << ','
              << format_double(l.energy) << ',' << format_double(l.frequency_offset * 1e-9) << '\n';
  return 0;
}

int cmd_stark(const State& s, std::ostream& out) {
  const auto& o = s.stark;
  const ModelParams p = model_params(s.common);
  const Misalignment m{o.misalign_theta * kDeg, o.misalign_phi * kDeg};
  const Vec3 u = misaligned_direction(parse_axis(o.direction), m);

  // Ratio of the field inside the sample to the nominal V_tot / d_tot.
  double correction = 1.0;
  if (!o.stack.empty()) {
    const DielectricStack stack = read_stack_json(load_json_file(o.stack));
    double d_total = 0.0;
    for (const auto& l : stack.layers) d_total += l.thickness;
    correction = effective_field(stack, d_total).e_sample;
  }

  struct Row {
    double nominal;
    double field;
    std::array<double, OrientationSet::kCount> shift;
  };
  std::vector<Row> rows;
  for (int i = 0; i < o.steps; ++i) {
    const double nominal = o.steps == 1 ? o.e_max : o.e_max * i / (o.steps - 1);
    Row r{nominal, nominal * correction, {}};
    for (const auto& f : orientations()) r.shift[f.index] = stark_shift_total(f, r.field * u, p);
    rows.push_back(r);
  }

  std::vector<std::pair<std::string, double>> at_max;
  for (const auto& f : orientations()) {
    const Vec3 e = field_transform(f, rows.back().field * u);
    at_max.emplace_back(f.label, o.linear_only ? stark_shift_linear(e, p) : rows.back().shift[f.index]);
  }
  std::ostringstream spec;
  spec << "E = " << format_double(rows.back().field) << " V/m along " << axis_text(u)
       << (o.linear_only ? " (linear part)" : "");
  const Json report = grouping_to_json(degeneracy_grouping(at_max, o.tolerance_mhz * 1e6, spec.str()));
  write_report(o.report, report);

  Sink sink(s.common.output, out);
  if (s.common.format == "json") {
    Json list = Json::array();
    for (const auto& r : rows)
      for (const auto& f : orientations())
        list.push_back({{"e_v_per_m", r.field},
                        {"nominal_e_v_per_m", r.nominal},
                        {"orientation", f.label},
                        {"shift_hz", r.shift[f.index]}});
    *sink << Json{{"direction", {u(0), u(1), u(2)}}, {"rows", list}, {"grouping", report}}.dump(2) << '\n';
    return 0;
  }
  *sink << "e_v_per_m,orientation,shift_hz\n";
  for (const auto& r : rows)
    for (const auto& f : orientations())
      *sink << format_double(r.field) << ',' << f.label << ',' << format_double(r.shift[f.index]) << '\n';
  return 0;
}

int cmd_strain(const State& s, std::ostream& out) {
  const auto& o = s.strain;
  const ModelParams p = model_params(s.common);
  const double offset = p.e_x - tx0_reference_energy(p);

  struct Row {
    double t;
    std::string orientation;
    std::array<double, 2> level;
  };
  std::vector<Row> rows;
  for (int i = 0; i < o.steps; ++i) {
    const double t = o.steps == 1 ? o.t_max : o.t_max * i / (o.steps - 1) + 0.0;
    FieldConfig fields;
    fields.ext_stress = o.hydrostatic ? StressTensor{SymmetricTensor3(t * Eigen::Matrix3d::Identity())}
                                      : stress_for_direction(o.direction_theta * kDeg, t);
    for (const auto& f : orientations()) {
      const EigenSystem es = eig_hermitian_4(assemble_tx_hamiltonian(f, fields, p));
      rows.push_back({t, f.label, {es.values[0] + offset, es.values[2] + offset}});
    }
  }

  std::vector<LabeledValues> last;
  for (std::size_t k = rows.size() - OrientationSet::kCount; k < rows.size(); ++k) {
    last.push_back({rows[k].orientation, {(rows[k].level[0] - p.e_x) * p.hz_per_ev,
                                          (rows[k].level[1] - p.e_x) * p.hz_per_ev}});
  }
  std::ostringstream spec;
  spec << "T = " << format_double(rows.back().t) << " Pa "
       << (o.hydrostatic ? std::string("hydrostatic") : "at " + format_double(o.direction_theta) + " deg from [001]");
  const Json report = grouping_to_json(degeneracy_grouping(last, o.tolerance_mhz * 1e6, spec.str()));
  write_report(o.report, report);

  Sink sink(s.common.output, out);
  if (s.common.format == "json") {
    Json list = Json::array();
    for (const auto& r : rows)
      for (int l = 0; l < 2; ++l)
        list.push_back({{"t_pa", r.t},
                        {"orientation", r.orientation},
                        {"level", l == 0 ? "TX0" : "TX1"},
                        {"energy_ev", r.level[l]},
                        {"offset_ghz", (r.level[l] - p.e_x) * p.hz_per_ev * 1e-9}});
    *sink << Json{{"rows", list}, {"grouping", report}}.dump(2) << '\n';
    return 0;
  }
  *sink << "t_pa,orientation,level,energy_ev,offset_ghz\n";
  for (const auto& r : rows)
    for (int l = 0; l < 2; ++l)
      *sink << format_double(r.t) << ',' << r.orientation << ",TX" << l << ',' << format_double(r.level[l]) << ','
            << format_double((r.level[l] - p.e_x) * p.hz_per_ev * 1e-9) << '\n';
  return 0;
}

std::vector<int> select_orientations(const std::vector<std::string>& labels) {
  std::vector<int> idx;
  if (labels.empty()) {
    for (int i = 0; i < OrientationSet::kCount; ++i) idx.push_back(i);
  } else {
    for (const auto& l : labels) idx.push_back(orientations().at(l).index);
  }
  return idx;
}

int cmd_rbr(const State& s, std::ostream& out) {
  const auto& o = s.rbr;
  const ModelParams p = model_params(s.common);
  if (o.b_mt == 0.0) throw Error(ErrorKind::ZeroField, "branching ratio map needs a nonzero field");
  const TxState state = o.state == "upper" ? TxState::Upper : TxState::Lower;
  const auto idx = select_orientations(o.orientations);
  const int n = o.grid;

  struct Cell {
    double theta, phi;
    int orientation;
    BranchingRatio br;
  };
  std::vector<Cell> cells(idx.size() * n * n);
  parallel_for(cells.size(), [&](std::size_t k) {
    const int oi = idx[k / (n * n)];
    const int i = static_cast<int>(k % (n * n)) / n;
    const int j = static_cast<int>(k % n);
    const double theta = 180.0 * i / (n - 1);
    const double phi = 360.0 * j / (n - 1);
    FieldConfig fields;
    fields.b_field = o.b_mt * 1e-3 *
                     Vec3(std::sin(theta * kDeg) * std::cos(phi * kDeg), std::sin(theta * kDeg) * std::sin(phi * kDeg),
                          std::cos(theta * kDeg));
    cells[k] = {theta, phi, oi, radiative_branching_ratio(orientations()[oi], fields, p, state)};
  });

  std::vector<const Cell*> keep;
  if (o.slices) {
    const auto best = std::max_element(cells.begin(), cells.end(),
                                       [](const Cell& a, const Cell& b) { return a.br.rbr < b.br.rbr; });
    for (const auto& c : cells)
      if (c.orientation == best->orientation && (c.theta == best->theta || c.phi == best->phi)) keep.push_back(&c);
  } else {
    for (const auto& c : cells) keep.push_back(&c);
  }

  Sink sink(s.common.output, out);
  if (s.common.format == "json") {
    Json list = Json::array();
    for (const Cell* c : keep)
      list.push_back({{"theta_deg", c->theta},
                      {"phi_deg", c->phi},
                      {"orientation", orientations()[c->orientation].label},
                      {"rbr", c->br.rbr},
                      {"cyclicity", c->br.cyclicity}});
    *sink << Json{{"b_mT", o.b_mt}, {"state", o.state}, {"rows", list}}.dump(2) << '\n';
    return 0;
  }
  *sink << "theta_deg,phi_deg,orientation,rbr,cyclicity\n";
  for (const Cell* c : keep)
    *sink << format_double(c->theta) << ',' << format_double(c->phi) << ',' << orientations()[c->orientation].label
          << ',' << format_double(c->br.rbr) << ',' << format_double(c->br.cyclicity) << '\n';
  return 0;
}

int cmd_synth(const State& s, std::ostream& out) {
  const auto& o = s.synth;
  const ModelParams p = model_params(s.common);
  if (!(o.sigma > 0.0)) throw Error(ErrorKind::ConfigError, "--sigma must be positive");

  SpectralDataset ds;
  ds.kind = dataset_kind_from_string(o.kind);
  ds.name = "synthetic";
  ds.b_magnitude = o.b_mt * 1e-3;
  ds.axis_from = parse_axis(o.from_axis);
  ds.axis_to = parse_axis(o.to_axis);
  ds.direction = parse_axis(o.direction);
  ds.stress_theta = o.direction_theta * kDeg;
  ds.misalignment = {o.misalign_theta * kDeg, o.misalign_phi * kDeg};

  double span = 0.0;
  switch (ds.kind) {
    case DatasetKind::ZeemanRotation: {
      const Vec3 u = ds.axis_from.normalized();
      const Vec3 t = ds.axis_to.normalized();
      span = std::atan2(u.cross(t).norm(), u.dot(t));
      break;
    }
    case DatasetKind::StarkSweep: span = o.e_max; break;
    case DatasetKind::StressSweep: span = o.t_max; break;
  }

  for (int oi : select_orientations(o.orientations)) {
    for (int i = 0; i < o.steps; ++i) {
      DataPoint pt;
      pt.control = o.steps == 1 ? span : span * i / (o.steps - 1);
      pt.sigma = o.sigma;
      pt.orientation = orientations()[oi].label;
      if (ds.kind == DatasetKind::ZeemanRotation) {
        for (int l = 0; l < 4; ++l) {
          pt.line = static_cast<Line>(l);
          ds.points.push_back(pt);
        }
      } else if (ds.kind == DatasetKind::StressSweep) {
        for (int l = 0; l < 2; ++l) {
          pt.level = l;
          ds.points.push_back(pt);
        }
      } else {
        ds.points.push_back(pt);
      }
    }
  }

  std::mt19937_64 rng(o.seed);
  synthesize(ds, p, o.noise ? &rng : nullptr);
  Sink sink(s.common.output, out);
  write_dataset_csv(*sink, ds);
  return 0;
}

int cmd_fit(const State& s, std::ostream& out) {
  const Json config = load_json_file(s.common.config);
  const FitProblem problem =
      fit_problem_from_json(config, s.fit.data, std::filesystem::path(s.common.config).parent_path().string());
  const FitResult result = fit(problem);
  std::string output = s.common.output;
  if (output.empty() && config.contains("output")) output = config.at("output").get<std::string>();
  Sink sink(output, out);
  *sink << fit_result_to_json(result, problem).dump(2) << '\n';
  return 0;
}

void report_error(std::ostream& err, std::string_view kind, const std::string& message) {
  err << Json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    std::vector<std::string> merged = args;
    Json params = Json::object();
    {
      CLI::App probe{"txh"};
      State s;
      build(probe, s);
      try {
        probe.parse(reversed(args));
      } catch (const CLI::Success& e) {
        return probe.exit(e, out, err);
      }
      CLI::App* sub = probe.get_subcommands().front();
      if (sub->get_name() != "fit" && !s.common.config.empty()) {
        merged = merge_config(sub, load_json_file(s.common.config), params, args);
      }
    }

    CLI::App app{"T centre TX spin Hamiltonian toolkit"};
    State s;
    build(app, s);
    app.parse(reversed(merged));
    s.common.params = params;

    const std::string name = app.get_subcommands().front()->get_name();
    static const std::map<std::string, std::function<int(const State&, std::ostream&)>> commands{
        {"orientations", cmd_orientations}, {"zeeman", cmd_zeeman}, {"stark", cmd_stark}, {"strain", cmd_strain},
        {"rbr", cmd_rbr}, {"synth", cmd_synth}, {"fit", cmd_fit}};
    return commands.at(name)(s, out);
  } catch (const CLI::ParseError& e) {
    report_error(err, "UsageError", e.what());
    return e.get_exit_code() != 0 ? e.get_exit_code() : 1;
  } catch (const Error& e) {
    report_error(err, to_string(e.kind()), e.what());
    return 2;
  } catch (const std::exception& e) {
    report_error(err, "InternalError", e.what());
    return 3;
  }
}

}  // namespace txh::cli
