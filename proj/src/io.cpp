#include "fast/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "fast/error.hpp"

namespace fast {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

// Reads the keys of one config section, rejecting anything unexpected.
class Section {
 public:
  Section(const json& doc, const char* name) : name_(name) {
    if (!doc.contains(name)) return;
    node_ = &doc.at(name);
    if (!node_->is_object()) throw ConfigError(std::string("config section '") + name + "' must be an object");
  }

  template <class T>
  void read(const char* key, T& into) {
    seen_.insert(key);
    if (!node_ || !node_->contains(key)) return;
    try {
      into = node_->at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(std::string("config field ") + name_ + "." + key + ": " + e.what());
    }
  }

  bool has(const char* key) const { return node_ && node_->contains(key); }
  const json& at(const char* key) {
    seen_.insert(key);
    return node_->at(key);
  }

  void reject_unknown() const {
    if (!node_) return;
    for (const auto& [k, v] : node_->items()) {
      if (!seen_.count(k)) throw ConfigError("unknown config field " + name_ + "." + k);
    }
  }

 private:
  std::string name_;
  const json* node_ = nullptr;
  std::set<std::string> seen_;
};

FidelityMap map_from_json(const json& j, const char* what) {
  std::vector<std::pair<double, double>> pts;
  try {
    for (const auto& p : j) pts.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("baseline map ") + what + " must be a list of [parameter, fidelity] pairs: " + e.what());
  }
  return FidelityMap(std::move(pts));
}

json map_to_json(const FidelityMap& m) {
  json a = json::array();
  for (const auto& [p, f] : m.points()) a.push_back({p, f});
  return a;
}

double w_per_hz_to_dbm_per_mhz(double n0) { return 10.0 * std::log10(n0 * 1e6 / 1e-3); }

}  // namespace

Scenario scenario_from_json(const json& doc, const fs::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("scenario document must be an object");
  static const std::set<std::string> kSections{"workload", "devices", "link", "constraints", "fidelity", "baselines"};
  for (const auto& [k, v] : doc.items()) {
    if (!kSections.count(k)) throw ConfigError("unknown config section '" + k + "'");
  }

  Scenario s;
  {
    Section w(doc, "workload");
    w.read("W_e_cycles", s.workload.W_e);
    w.read("W_d_cycles", s.workload.W_d);
    w.read("S_bits", s.workload.S);
    w.read("K", s.workload.K);
    w.read("raw_bits", s.workload.raw_bits);
    w.reject_unknown();
  }
  {
    Section d(doc, "devices");
    d.read("eps_e", s.devices.eps_e);
    d.read("eps_d", s.devices.eps_d);
    d.read("f_e_max_hz", s.devices.f_e_max);
    d.read("f_d_max_hz", s.devices.f_d_max);
    d.reject_unknown();
  }
  {
    Section l(doc, "link");
    double n0_dbm = w_per_hz_to_dbm_per_mhz(s.link.N0);
    l.read("B_hz", s.link.B);
    l.read("N0_dbm_per_mhz", n0_dbm);
    l.read("h2", s.link.h2);
    l.read("d_m", s.link.d);
    l.read("eta", s.link.eta);
    l.read("P_max_w", s.link.P_max);
    l.reject_unknown();
    s.link.N0 = dbm_per_mhz_to_w_per_hz(n0_dbm);
  }
  double pi_min = s.constraints.pi_min.value();
  {
    Section c(doc, "constraints");
    c.read("T_max_s", s.constraints.T_max);
    c.read("phi_min", s.constraints.phi_min);
    c.read("pi_min", pi_min);
    c.reject_unknown();
    s.constraints.pi_min = ScalingFactor{pi_min};
  }
  {
    Section f(doc, "fidelity");
    if (f.has("samples")) {
      const fs::path p = base_dir / f.at("samples").get<std::string>();
      FitOptions opts;
      f.read("rms_ceiling", opts.rms_ceiling);
      s.curve = fit_curve(read_samples(p), s.constraints.pi_min, opts).curve;
    } else {
      FidelityCurve c = s.curve;
      f.read("kappa1", c.kappa1);
      f.read("kappa2", c.kappa2);
      f.read("kappa3", c.kappa3);
      f.read("kappa4", c.kappa4);
      c.pi_min = s.constraints.pi_min;
      s.curve = c;
    }
    f.reject_unknown();
  }
  {
    s.baselines = default_baseline_maps(eval_fidelity(s.curve, ScalingFactor{1.0}));
    Section b(doc, "baselines");
    if (b.has("prune")) s.baselines.prune = map_from_json(b.at("prune"), "prune");
    if (b.has("quant")) s.baselines.quant = map_from_json(b.at("quant"), "quant");
    if (b.has("jpeg")) {
      const json& j = b.at("jpeg");
      try {
        s.baselines.jpeg.data_bits = j.at("data_bits").get<double>();
        s.baselines.jpeg.fidelity = j.at("fidelity").get<double>();
      } catch (const json::exception& e) {
        throw ConfigError(std::string("baselines.jpeg needs data_bits and fidelity: ") + e.what());
      }
    }
    b.reject_unknown();
  }
  validate(s);
  return s;
}

Scenario load_scenario(const fs::path& path) {
  json doc;
  try {
    doc = json::parse(slurp(path));
  } catch (const json::parse_error& e) {
    throw ConfigError("cannot parse scenario " + path.string() + ": " + e.what());
  }
  return scenario_from_json(doc, path.parent_path());
}

json scenario_to_json(const Scenario& s) {
  json doc;
  doc["workload"] = {{"W_e_cycles", s.workload.W_e},
                     {"W_d_cycles", s.workload.W_d},
                     {"S_bits", s.workload.S},
                     {"K", s.workload.K},
                     {"raw_bits", s.workload.raw_bits}};
  doc["devices"] = {{"eps_e", s.devices.eps_e},
                    {"eps_d", s.devices.eps_d},
                    {"f_e_max_hz", s.devices.f_e_max},
                    {"f_d_max_hz", s.devices.f_d_max}};
  doc["link"] = {{"B_hz", s.link.B},
                 {"N0_dbm_per_mhz", w_per_hz_to_dbm_per_mhz(s.link.N0)},
                 {"h2", s.link.h2},
                 {"d_m", s.link.d},
                 {"eta", s.link.eta},
                 {"P_max_w", s.link.P_max}};
  doc["constraints"] = {
      {"T_max_s", s.constraints.T_max}, {"phi_min", s.constraints.phi_min}, {"pi_min", s.constraints.pi_min.value()}};
  doc["fidelity"] = {{"kappa1", s.curve.kappa1},
                     {"kappa2", s.curve.kappa2},
                     {"kappa3", s.curve.kappa3},
                     {"kappa4", s.curve.kappa4}};
  doc["baselines"] = {{"prune", map_to_json(s.baselines.prune)},
                      {"quant", map_to_json(s.baselines.quant)},
                      {"jpeg", {{"data_bits", s.baselines.jpeg.data_bits}, {"fidelity", s.baselines.jpeg.fidelity}}}};
  return doc;
}

std::vector<FidelitySample> parse_samples(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<FidelitySample> out;
  bool header = false;
  int lineno = 0;
  auto trim = [](std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    s = b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
  };
  auto number = [&](std::string field) {
    trim(field);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
      throw ConfigError("samples line " + std::to_string(lineno) + ": '" + field + "' is not a number");
    }
    return v;
  };
  while (std::getline(in, line)) {
    ++lineno;
    trim(line);
    if (line.empty()) continue;
    if (!header) {
      std::string h;
      for (char c : line) {
        if (c != ' ' && c != '\t') h += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      }
      if (h != "pi,fidelity") throw ConfigError("samples file must start with the header 'pi,fidelity'");
      header = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw ConfigError("samples line " + std::to_string(lineno) + ": expected 'pi,fidelity'");
    }
    const double pi = number(line.substr(0, comma));
    const double phi = number(line.substr(comma + 1));
    if (!(phi >= 0.0 && phi <= 1.0)) {
      throw ConfigError("samples line " + std::to_string(lineno) + ": fidelity outside [0, 1]");
    }
    out.push_back({ScalingFactor{pi}, phi});
  }
  if (!header) throw ConfigError("samples file is empty (header 'pi,fidelity' required)");
  return out;
}

std::vector<FidelitySample> read_samples(const fs::path& path) { return parse_samples(slurp(path)); }

nlohmann::ordered_json curve_to_json(const CurveFit& fit) {
  nlohmann::ordered_json j;
  j["kappa1"] = fit.curve.kappa1;
  j["kappa2"] = fit.curve.kappa2;
  j["kappa3"] = fit.curve.kappa3;
  j["kappa4"] = fit.curve.kappa4;
  j["pi_min"] = fit.curve.pi_min.value();
  j["fit_rms"] = fit.rms;
  return j;
}

CurveFit curve_from_json(const json& doc) {
  try {
    CurveFit f;
    f.curve = FidelityCurve{doc.at("kappa1").get<double>(), doc.at("kappa2").get<double>(),
                            doc.at("kappa3").get<double>(), doc.at("kappa4").get<double>(),
                            ScalingFactor{doc.at("pi_min").get<double>()}};
    f.rms = doc.value("fit_rms", 0.0);
    return f;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed curve document: ") + e.what());
  }
}

void write_curve(const CurveFit& fit, const fs::path& path) {
  write_file(path, curve_to_json(fit).dump(2) + "\n");
}

CurveFit read_curve(const fs::path& path) {
  try {
    return curve_from_json(json::parse(slurp(path)));
  } catch (const json::parse_error& e) {
    throw ConfigError("cannot parse curve document " + path.string() + ": " + e.what());
  }
}

ExportFormat parse_export_format(const std::string& name) {
  if (name == "csv") return ExportFormat::csv;
  if (name == "json") return ExportFormat::json;
  throw ConfigError("unknown output format '" + name + "' (expected csv or json)");
}

const std::vector<std::string>& result_columns() {
  static const std::vector<std::string> cols{"method",   "axis_value", "pi",       "f_e_hz",   "f_d_hz",
                                             "P_w",      "T_cmp_s",    "T_com_s",  "E_cmp_j",  "E_com_j",
                                             "E_tot_j",  "data_bits",  "fidelity", "status"};
  return cols;
}

namespace {

std::string sig6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Bit counts print as whole numbers so payload sizes are exact.
std::string bits(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.0f", std::round(v));
  return buf;
}

struct Row {
  std::vector<std::optional<std::string>> cells;  // nullopt: not applicable
};

Row to_row(const ScenarioResult& r) {
  auto num = [](const std::optional<double>& v) -> std::optional<std::string> {
    if (!v) return std::nullopt;
    return sig6(*v);
  };
  std::optional<double> f_e, f_d, P, T_cmp, T_com, E_cmp, E_com, E_tot;
  if (r.strategy && r.status == Status::ok) {
    f_e = r.strategy->f_e;
    f_d = r.strategy->f_d;
    P = r.strategy->P;
  }
  if (r.cost && r.status == Status::ok) {
    T_cmp = r.cost->T_cmp;
    T_com = r.cost->T_com;
    E_cmp = r.cost->E_cmp;
    E_com = r.cost->E_com;
    E_tot = r.cost->E_tot;
  }
  std::optional<std::string> data;
  if (r.data_bits > 0.0) data = bits(r.data_bits);
  return Row{{r.method, num(r.axis_value), num(r.pi), num(f_e), num(f_d), num(P), num(T_cmp), num(T_com), num(E_cmp),
              num(E_com), num(E_tot), data, num(r.fidelity), std::string(to_string(r.status))}};
}

}  // namespace

std::string render_results(const ResultTable& table, ExportFormat format) {
  const auto& cols = result_columns();
  if (format == ExportFormat::csv) {
    std::string out;
    for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i];
    out += '\n';
    for (const auto& r : table) {
      const Row row = to_row(r);
      for (std::size_t i = 0; i < row.cells.size(); ++i) {
        if (i) out += ',';
        if (row.cells[i]) out += *row.cells[i];
      }
      out += '\n';
    }
    return out;
  }
  nlohmann::ordered_json doc;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : table) {
    const Row row = to_row(r);
    nlohmann::ordered_json j;
    for (std::size_t i = 0; i < cols.size(); ++i) {
      const auto& cell = row.cells[i];
      if (!cell) {
        j[cols[i]] = nullptr;
      } else if (i == 0 || cols[i] == "status") {
        j[cols[i]] = *cell;
      } else {
        j[cols[i]] = std::stod(*cell);
      }
    }
    j["detail"] = r.detail;
    doc["rows"].push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

void export_results(const ResultTable& table, const fs::path& destination, ExportFormat format) {
  if (table.empty()) throw ConfigError("refusing to export an empty result table");
  write_file(destination, render_results(table, format));
}

}  // namespace fast
