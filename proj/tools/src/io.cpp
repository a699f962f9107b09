#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "txh/cli.hpp"
#include "txh/error.hpp"

namespace txh::cli {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json orientations_to_json(bool unprimed_only) {
  Json list = Json::array();
  for (const auto& f : orientations()) {
    if (unprimed_only && f.inverted) continue;
    Json rows = Json::array();
    for (int i = 0; i < 3; ++i) rows.push_back({f.rotation(i, 0), f.rotation(i, 1), f.rotation(i, 2)});
    list.push_back({{"label", f.label},
                    {"index", f.index},
                    {"operation", f.operation},
                    {"parity", f.inverted ? -1 : 1},
                    {"rotation", rows}});
  }
  return {{"count", list.size()}, {"orientations", list}};
}

std::vector<OrientationFrame> orientations_from_json(const Json& doc) {
  try {
    std::vector<OrientationFrame> out;
    for (const auto& item : doc.at("orientations")) {
      OrientationFrame f;
      f.label = item.at("label").get<std::string>();
      f.index = item.at("index").get<int>();
      f.operation = item.at("operation").get<std::string>();
      f.inverted = item.at("parity").get<int>() < 0;
      const auto& rows = item.at("rotation");
      if (rows.size() != 3) throw Error(ErrorKind::ParseError, "rotation of " + f.label + " is not 3x3");
      for (int i = 0; i < 3; ++i) {
        if (rows[i].size() != 3) throw Error(ErrorKind::ParseError, "rotation of " + f.label + " is not 3x3");
        for (int j = 0; j < 3; ++j) f.rotation(i, j) = rows[i][j].get<double>();
      }
      out.push_back(std::move(f));
    }
    if (doc.contains("count") && doc.at("count").get<std::size_t>() != out.size()) {
      throw Error(ErrorKind::ParseError, "orientation count does not match the record list");
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("orientation document: ") + e.what());
  }
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

struct Schema {
  DatasetKind kind;
  std::array<const char*, 3> required;
  const char* tag;  // line / level column, may be null
};

constexpr std::array<Schema, 3> kSchemas{{
    {DatasetKind::ZeemanRotation, {"angle_rad", "value_ev", "sigma_ev"}, "line"},
    {DatasetKind::StarkSweep, {"e_v_per_m", "shift_hz", "sigma_hz"}, nullptr},
    {DatasetKind::StressSweep, {"stress_pa", "value_ev", "sigma_ev"}, "level"},
}};

const Schema& schema_for(DatasetKind k) {
  for (const auto& s : kSchemas)
    if (s.kind == k) return s;
  throw Error(ErrorKind::UnsupportedKind, "no CSV schema for dataset kind");
}

std::string where(const std::string& name, std::size_t row, const std::string& column) {
  return name + ": row " + std::to_string(row) + ", column '" + column + "'";
}

double parse_number(const std::string& text, const std::string& ctx) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (text.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw Error(ErrorKind::ParseError, ctx + ": '" + text + "' is not a finite number");
  }
  return v;
}

int parse_level(const std::string& text, const std::string& ctx) {
  if (text == "0" || text == "TX0") return 0;
  if (text == "1" || text == "TX1") return 1;
  throw Error(ErrorKind::ParseError, ctx + ": level must be TX0, TX1, 0 or 1, got '" + text + "'");
}

}  // namespace

SpectralDataset read_dataset_csv(std::istream& in, std::string name, std::optional<DatasetKind> kind) {
  SpectralDataset ds;
  ds.name = std::move(name);

  std::string line;
  std::size_t row = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++row;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    header = split(t);
    break;
  }
  if (header.empty()) throw Error(ErrorKind::ParseError, ds.name + ": missing header row");

  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (!col.emplace(header[i], i).second) {
      throw Error(ErrorKind::ParseError, ds.name + ": duplicate column '" + header[i] + "'");
    }
  }

  const Schema* schema = nullptr;
  if (kind) {
    schema = &schema_for(*kind);
  } else {
    for (const auto& s : kSchemas)
      if (col.count(s.required[0])) schema = &s;
    if (!schema) throw Error(ErrorKind::ParseError, ds.name + ": header matches no dataset schema");
  }
  ds.kind = schema->kind;

  std::set<std::string> allowed{"orientation"};
  for (const char* c : schema->required) {
    if (!col.count(c)) throw Error(ErrorKind::ParseError, ds.name + ": missing column '" + c + "'");
    allowed.insert(c);
  }
  if (schema->tag) allowed.insert(schema->tag);
  for (const auto& h : header) {
    if (!allowed.count(h)) throw Error(ErrorKind::ParseError, ds.name + ": unexpected column '" + h + "'");
  }

  while (std::getline(in, line)) {
    ++row;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto cells = split(t);
    if (cells.size() != header.size()) {
      throw Error(ErrorKind::ParseError, ds.name + ": row " + std::to_string(row) + " has " +
                                             std::to_string(cells.size()) + " fields, expected " +
                                             std::to_string(header.size()));
    }
    auto cell = [&](const char* c) { return cells[col.at(c)]; };

    DataPoint p;
    p.control = parse_number(cell(schema->required[0]), where(ds.name, row, schema->required[0]));
    p.observed = parse_number(cell(schema->required[1]), where(ds.name, row, schema->required[1]));
    p.sigma = parse_number(cell(schema->required[2]), where(ds.name, row, schema->required[2]));
    if (!(p.sigma > 0.0)) {
      throw Error(ErrorKind::ParseError, where(ds.name, row, schema->required[2]) + ": sigma must be positive");
    }
    if (col.count("orientation") && !cell("orientation").empty()) {
      const std::string label = cell("orientation");
      if (!orientations().find(label)) {
        throw Error(ErrorKind::ParseError, where(ds.name, row, "orientation") + ": unknown orientation '" + label + "'");
      }
      p.orientation = label;
    }
    if (schema->tag && col.count(schema->tag) && !cell(schema->tag).empty()) {
      const std::string tag = cell(schema->tag);
      const std::string ctx = where(ds.name, row, schema->tag);
      if (ds.kind == DatasetKind::ZeemanRotation) {
        if (tag.size() != 1) throw Error(ErrorKind::ParseError, ctx + ": line must be one of A, B, C, D");
        try {
          p.line = line_from_name(tag[0]);
        } catch (const Error&) {
          throw Error(ErrorKind::ParseError, ctx + ": line must be one of A, B, C, D");
        }
      } else {
        p.level = parse_level(tag, ctx);
      }
    }
    ds.points.push_back(std::move(p));
  }
  if (ds.points.empty()) throw Error(ErrorKind::ParseError, ds.name + ": no data rows");
  return ds;
}

SpectralDataset read_dataset_file(const std::string& path, std::optional<DatasetKind> kind) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot open data file '" + path + "'");
  return read_dataset_csv(in, path, kind);
}

void write_dataset_csv(std::ostream& out, const SpectralDataset& ds) {
  const Schema& s = schema_for(ds.kind);
  out << s.required[0] << ',' << s.required[1] << ',' << s.required[2] << ",orientation";
  if (s.tag) out << ',' << s.tag;
  out << '\n';
  for (const auto& p : ds.points) {
    out << format_double(p.control) << ',' << format_double(p.observed) << ',' << format_double(p.sigma) << ','
        << p.orientation.value_or("");
    if (ds.kind == DatasetKind::ZeemanRotation) out << ',' << (p.line ? std::string(1, line_name(*p.line)) : "");
    if (ds.kind == DatasetKind::StressSweep) out << ',' << (p.level ? "TX" + std::to_string(*p.level) : "");
    out << '\n';
  }
}

namespace {

void reject_unknown_keys(const Json& obj, std::initializer_list<const char*> known, const std::string& what) {
  if (!obj.is_object()) throw Error(ErrorKind::ConfigError, what + " must be a JSON object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw Error(ErrorKind::ConfigError, what + ": unknown key '" + key + "'");
  }
}

Vec3 vec3_from_json(const Json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorKind::ConfigError, what + " must be an array of 3 numbers");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

DielectricStack read_stack_json(const Json& doc) {
  try {
    reject_unknown_keys(doc, {"layers", "sample", "sample_index"}, "stack");
    DielectricStack stack;
    for (const auto& l : doc.at("layers")) {
      reject_unknown_keys(l, {"name", "permittivity", "thickness_m"}, "stack layer");
      stack.layers.push_back({l.value("name", std::string()), l.at("permittivity").get<double>(),
                              l.at("thickness_m").get<double>()});
    }
    if (doc.contains("sample_index")) {
      stack.sample_index = doc.at("sample_index").get<std::size_t>();
    } else if (doc.contains("sample")) {
      const auto name = doc.at("sample").get<std::string>();
      std::size_t i = 0;
      while (i < stack.layers.size() && stack.layers[i].name != name) ++i;
      if (i == stack.layers.size()) throw Error(ErrorKind::InvalidStack, "no layer named '" + name + "'");
      stack.sample_index = i;
    } else {
      throw Error(ErrorKind::InvalidStack, "stack must name its sample layer");
    }
    return stack;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidStack, std::string("stack document: ") + e.what());
  }
}

void apply_param_overrides(ModelParams& p, const Json& overrides) {
  if (!overrides.is_object()) throw Error(ErrorKind::ConfigError, "params must be a JSON object");
  for (const auto& [name, value] : overrides.items()) {
    if (!value.is_number()) throw Error(ErrorKind::ConfigError, "parameter '" + name + "' must be a number");
    set_model_parameter(p, name, value.get<double>());
  }
}

FitProblem fit_problem_from_json(const Json& config, const std::vector<std::string>& data_files,
                                 const std::string& base_dir) {
  try {
    reject_unknown_keys(config, {"params", "free", "datasets", "seeds", "max_iterations", "output"}, "fit config");
    FitProblem pb;
    if (config.contains("params")) apply_param_overrides(pb.base, config.at("params"));

    const Json datasets = config.value("datasets", Json::array());
    if (data_files.size() > std::max<std::size_t>(datasets.size(), 1) ||
        (datasets.empty() && data_files.empty())) {
      throw Error(ErrorKind::ConfigError, "each data file needs a dataset entry in the fit config");
    }
    const std::size_t n = std::max(datasets.size(), data_files.size());
    std::vector<std::pair<std::string, std::optional<DatasetKind>>> sources;
    for (std::size_t i = 0; i < n; ++i) {
      const Json d = i < datasets.size() ? datasets[i] : Json::object();
      reject_unknown_keys(d,
                          {"kind", "file", "name", "b_mT", "from_axis", "to_axis", "direction", "stress_theta_deg",
                           "misalign_theta_deg", "misalign_phi_deg", "offset", "weight"},
                          "dataset " + std::to_string(i));
      std::optional<DatasetKind> kind;
      if (d.contains("kind")) kind = dataset_kind_from_string(d.at("kind").get<std::string>());
      std::string file = i < data_files.size() ? data_files[i] : d.value("file", std::string());
      if (file.empty()) throw Error(ErrorKind::ConfigError, "dataset " + std::to_string(i) + " has no data file");
      if (i >= data_files.size() && !base_dir.empty() && std::filesystem::path(file).is_relative()) {
        file = (std::filesystem::path(base_dir) / file).string();
      }
      sources.emplace_back(file, kind);
      auto& ds = pb.datasets.emplace_back();
      ds.name = d.value("name", file);
      if (d.contains("b_mT")) ds.b_magnitude = d.at("b_mT").get<double>() * 1e-3;
      if (d.contains("from_axis")) ds.axis_from = vec3_from_json(d.at("from_axis"), "from_axis");
      if (d.contains("to_axis")) ds.axis_to = vec3_from_json(d.at("to_axis"), "to_axis");
      if (d.contains("direction")) ds.direction = vec3_from_json(d.at("direction"), "direction");
      if (d.contains("stress_theta_deg")) ds.stress_theta = d.at("stress_theta_deg").get<double>() * constants::kDegree;
      ds.misalignment.d_theta = d.value("misalign_theta_deg", 0.0) * constants::kDegree;
      ds.misalignment.d_phi = d.value("misalign_phi_deg", 0.0) * constants::kDegree;
      ds.offset = d.value("offset", 0.0);
      ds.weight = d.value("weight", 1.0);
    }

    if (!config.contains("free") || !config.at("free").is_array() || config.at("free").empty()) {
      throw Error(ErrorKind::ConfigError, "fit config needs a non-empty 'free' list");
    }
    for (const auto& f : config.at("free")) {
      reject_unknown_keys(f, {"name", "start", "lower", "upper", "scale"}, "free parameter");
      FitParameter fp;
      fp.name = f.at("name").get<std::string>();
      if (!is_known_parameter(fp.name, pb.datasets.size())) {
        throw Error(ErrorKind::ConfigError, "unknown parameter name '" + fp.name + "'");
      }
      if (f.contains("lower")) fp.lower = f.at("lower").get<double>();
      if (f.contains("upper")) fp.upper = f.at("upper").get<double>();
      if (f.contains("scale")) fp.scale = f.at("scale").get<double>();
      if (f.contains("start")) {
        fp.start = f.at("start").get<double>();
      } else if (fp.name.rfind("misalign_", 0) == 0 || fp.name.rfind("offset[", 0) == 0) {
        fp.start = 0.0;
      } else {
        fp.start = get_model_parameter(pb.base, fp.name);
      }
      pb.free.push_back(std::move(fp));
    }
    if (config.contains("seeds")) pb.seeds = config.at("seeds").get<std::vector<std::vector<double>>>();
    if (config.contains("max_iterations")) pb.max_iterations = config.at("max_iterations").get<int>();

    for (std::size_t i = 0; i < n; ++i) {
      SpectralDataset loaded = read_dataset_file(sources[i].first, sources[i].second);
      pb.datasets[i].kind = loaded.kind;
      pb.datasets[i].points = std::move(loaded.points);
    }
    pb.validate();
    return pb;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ConfigError, std::string("fit config: ") + e.what());
  }
}

Json fit_result_to_json(const FitResult& r, const FitProblem& problem) {
  Json params = Json::array();
  for (std::size_t i = 0; i < r.names.size(); ++i) {
    Json sigma = r.uncertainties_available && std::isfinite(r.sigma[i]) ? Json(r.sigma[i]) : Json(nullptr);
    params.push_back({{"name", r.names[i]}, {"value", r.best[i]}, {"sigma", sigma}});
  }
  Json datasets = Json::array();
  for (std::size_t d = 0; d < r.misalignments.size(); ++d) {
    datasets.push_back({{"name", problem.datasets[d].name},
                        {"d_theta_rad", r.misalignments[d].d_theta},
                        {"d_phi_rad", r.misalignments[d].d_phi},
                        {"offset", r.offsets.at(d)}});
  }
  Json assignments = Json::array();
  for (const auto& a : r.assignments) {
    assignments.push_back({{"dataset", a.dataset},
                           {"point", a.point},
                           {"orientation", a.orientation},
                           {"channel", a.channel},
                           {"predicted", a.predicted}});
  }
  return {{"converged", r.converged},
          {"iterations", r.iterations},
          {"n_evaluations", r.n_evaluations},
          {"n_points", r.n_points},
          {"chi_square", r.chi_square},
          {"residual_rms", r.residual_rms},
          {"uncertainties_available", r.uncertainties_available},
          {"parameters", params},
          {"datasets", datasets},
          {"assignments", assignments}};
}

Json grouping_to_json(const GroupingReport& g) {
  Json groups = Json::array();
  for (const auto& grp : g.groups) groups.push_back({{"representative", grp.representative}, {"members", grp.members}});
  return {{"field", g.field_spec}, {"tolerance", g.tolerance}, {"count", g.count()}, {"groups", groups}};
}

}  // namespace txh::cli
