#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#ifndef ARCSZEGO_VERSION
#define ARCSZEGO_VERSION "0.0.0"
#endif

namespace arcszego::cli {

using nlohmann::json;

namespace {

int line_of(const std::string& text, std::size_t pos) {
  pos = std::min(pos, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
}

class Reader {
 public:
  explicit Reader(const std::string& text) : text_(text) {}

  [[noreturn]] void fail(const std::string& path, const std::string& msg) const {
    throw ConfigError(path + ": " + msg, locate_key(text_, path));
  }

  void known_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) const {
    if (!j.is_object()) fail(path, "expected an object");
    std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& [k, v] : j.items())
      if (!ok.count(k)) fail(path.empty() ? k : path + "." + k, "unknown key");
  }

  double number(const json& j, const std::string& path) const {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
  }

  std::size_t count(const json& j, const std::string& path) const {
    if (!j.is_number_integer() || j.get<long long>() < 0) fail(path, "expected a non-negative integer");
    return j.get<std::size_t>();
  }

  std::string string(const json& j, const std::string& path) const {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
  }

  bool boolean(const json& j, const std::string& path) const {
    if (!j.is_boolean()) fail(path, "expected true or false");
    return j.get<bool>();
  }

  // [re, im], {"re": .., "im": ..} or a real number.
  std::complex<double> complex(const json& j, const std::string& path) const {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
      return {j[0].get<double>(), j[1].get<double>()};
    if (j.is_object() && j.contains("re") && j.contains("im"))
      return {number(j["re"], path + ".re"), number(j["im"], path + ".im")};
    fail(path, "expected a complex number [re, im]");
  }

  std::vector<double> numbers(const json& j, const std::string& path) const {
    if (!j.is_array()) fail(path, "expected an array of numbers");
    std::vector<double> v;
    for (const auto& x : j) v.push_back(number(x, path));
    return v;
  }

  std::vector<std::size_t> counts(const json& j, const std::string& path) const {
    if (!j.is_array()) fail(path, "expected an array of integers");
    std::vector<std::size_t> v;
    for (const auto& x : j) v.push_back(count(x, path));
    return v;
  }

  std::vector<std::pair<double, double>> pairs(const json& j, const std::string& path) const {
    if (!j.is_array()) fail(path, "expected an array of [a, b] pairs");
    std::vector<std::pair<double, double>> v;
    for (const auto& x : j) {
      if (!x.is_array() || x.size() != 2) fail(path, "expected an array of [a, b] pairs");
      v.emplace_back(number(x[0], path), number(x[1], path));
    }
    return v;
  }

  DensitySpec density(const json& j, const std::string& path) const {
    if (j.is_string()) {
      try {
        return parse_density(j.get<std::string>());
      } catch (const DomainError& e) {
        fail(path, e.what());
      }
    }
    known_keys(j, path, {"kind", "params", "samples", "normalize"});
    DensitySpec d;
    if (j.contains("kind")) d.kind = string(j["kind"], path + ".kind");
    if (j.contains("params")) d.params = numbers(j["params"], path + ".params");
    if (j.contains("samples")) d.samples = pairs(j["samples"], path + ".samples");
    if (j.contains("normalize")) d.normalize = boolean(j["normalize"], path + ".normalize");
    return d;
  }

  MeasureConfig measure(const json& j, const std::string& path) const {
    known_keys(j, path, {"density", "atoms", "normalize"});
    MeasureConfig m;
    if (j.contains("density")) m.density = density(j["density"], path + ".density");
    if (j.contains("normalize")) m.density.normalize = boolean(j["normalize"], path + ".normalize");
    if (j.contains("atoms")) m.atoms = pairs(j["atoms"], path + ".atoms");
    return m;
  }

  ArcSpec arc(const json& j, const std::string& path) const {
    known_keys(j, path, {"kind", "A", "B", "bend", "half_angle", "samples"});
    ArcSpec a;
    if (j.contains("kind")) a.kind = string(j["kind"], path + ".kind");
    if (j.contains("A")) a.A = complex(j["A"], path + ".A");
    if (j.contains("B")) a.B = complex(j["B"], path + ".B");
    if (j.contains("bend")) a.bend = number(j["bend"], path + ".bend");
    if (j.contains("half_angle")) a.half_angle = number(j["half_angle"], path + ".half_angle");
    if (j.contains("samples")) {
      const auto& s = j["samples"];
      if (!s.is_array()) fail(path + ".samples", "expected an array of [t, re, im] triples");
      for (const auto& x : s) {
        if (!x.is_array() || x.size() != 3) fail(path + ".samples", "expected an array of [t, re, im] triples");
        a.t.push_back(number(x[0], path + ".samples"));
        a.z.emplace_back(number(x[1], path + ".samples"), number(x[2], path + ".samples"));
      }
    }
    return a;
  }

  void tolerances(const json& j, Tolerances& t) const {
    const std::string p = "tolerances";
    known_keys(j, p,
               {"widom_rel", "formula_rel", "nu_rel", "sup_err", "kernel_rel", "bound_equal", "bound_gap",
                "closed_form", "rhs_rel", "faber_exterior", "faber_radius", "faber_leading", "strict_trend"});
    auto num = [&](const char* k, double& dst) {
      if (j.contains(k)) dst = number(j[k], p + "." + k);
    };
    num("widom_rel", t.widom_rel);
    num("formula_rel", t.formula_rel);
    num("nu_rel", t.nu_rel);
    num("sup_err", t.sup_err);
    num("kernel_rel", t.kernel_rel);
    num("bound_equal", t.bound_equal);
    num("bound_gap", t.bound_gap);
    num("closed_form", t.closed_form);
    num("rhs_rel", t.rhs_rel);
    num("faber_exterior", t.faber_exterior);
    num("faber_radius", t.faber_radius);
    num("faber_leading", t.faber_leading);
    if (j.contains("strict_trend")) t.strict_trend = boolean(j["strict_trend"], p + ".strict_trend");
  }

  void family(const json& j, FamilyConfig& f) const {
    const std::string p = "family";
    known_keys(j, p, {"members", "random_members", "random_order", "random_amplitude", "seed"});
    if (j.contains("members")) {
      if (!j["members"].is_array()) fail(p + ".members", "expected an array of measures");
      for (std::size_t i = 0; i < j["members"].size(); ++i) f.members.push_back(measure(j["members"][i], p + ".members"));
    }
    if (j.contains("random_members")) f.random_members = count(j["random_members"], p + ".random_members");
    if (j.contains("random_order")) f.random_order = count(j["random_order"], p + ".random_order");
    if (j.contains("random_amplitude")) f.random_amplitude = number(j["random_amplitude"], p + ".random_amplitude");
    if (j.contains("seed")) f.seed = count(j["seed"], p + ".seed");
  }

  void faber(const json& j, FaberConfig& f) const {
    const std::string p = "faber";
    known_keys(j, p,
               {"boundary_degrees", "radius_degrees", "exterior_degree", "divided_difference_degree", "holder_angle",
                "seed"});
    if (j.contains("boundary_degrees")) f.boundary_degrees = counts(j["boundary_degrees"], p + ".boundary_degrees");
    if (j.contains("radius_degrees")) f.radius_degrees = counts(j["radius_degrees"], p + ".radius_degrees");
    if (j.contains("exterior_degree")) f.exterior_degree = count(j["exterior_degree"], p + ".exterior_degree");
    if (j.contains("divided_difference_degree"))
      f.divided_difference_degree = count(j["divided_difference_degree"], p + ".divided_difference_degree");
    if (j.contains("holder_angle")) f.holder_angle = number(j["holder_angle"], p + ".holder_angle");
    if (j.contains("seed")) f.seed = count(j["seed"], p + ".seed");
  }

 private:
  const std::string& text_;
};

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string hex64(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<std::size_t> parse_degree_list(const std::string& s) {
  std::vector<std::size_t> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    unsigned long long n = 0;
    try {
      n = std::stoull(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw ConfigError("--degrees: expected a comma-separated integer list", 0);
    v.push_back(static_cast<std::size_t>(n));
  }
  return v;
}

}  // namespace

int locate_key(const std::string& text, const std::string& path) {
  std::size_t pos = 0;
  std::stringstream ss(path);
  std::string comp;
  bool found = false;
  while (std::getline(ss, comp, '.')) {
    comp = comp.substr(0, comp.find('['));
    if (comp.empty()) continue;
    const std::string key = "\"" + comp + "\"";
    std::size_t at = pos;
    for (;;) {
      at = text.find(key, at);
      if (at == std::string::npos) return found ? line_of(text, pos) : 0;
      std::size_t k = at + key.size();
      while (k < text.size() && std::isspace(static_cast<unsigned char>(text[k]))) ++k;
      if (k < text.size() && text[k] == ':') break;
      at += key.size();
    }
    pos = at;
    found = true;
  }
  return found ? line_of(text, pos) : 0;
}

DensitySpec parse_density(const std::string& s) {
  DensitySpec d;
  const auto open = s.find('(');
  d.kind = s.substr(0, open);
  d.kind.erase(std::remove_if(d.kind.begin(), d.kind.end(), [](unsigned char c) { return std::isspace(c); }),
               d.kind.end());
  if (open == std::string::npos) return d;
  const auto close = s.rfind(')');
  if (close == std::string::npos || close < open) throw DomainError("malformed density '" + s + "'");
  std::stringstream ss(s.substr(open + 1, close - open - 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw DomainError("malformed density parameter '" + item + "'");
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size()) throw DomainError("malformed density parameter '" + item + "'");
    d.params.push_back(v);
  }
  return d;
}

ExperimentConfig parse_config(const json& j, const std::string& text) {
  Reader r(text);
  r.known_keys(j, "",
               {"name", "experiment", "arc", "base", "measure", "degrees", "nodes", "precision", "placement",
                "tolerances", "family", "faber", "kernel_points", "output"});
  ExperimentConfig c;
  if (j.contains("name")) c.name = r.string(j["name"], "name");
  if (j.contains("experiment")) {
    const auto e = r.string(j["experiment"], "experiment");
    const auto& names = experiment_names();
    if (std::find(names.begin(), names.end(), e) == names.end()) r.fail("experiment", "unknown experiment '" + e + "'");
  }
  if (j.contains("arc")) c.arc = r.arc(j["arc"], "arc");
  if (j.contains("base")) {
    const auto& b = j["base"];
    if (b.is_string()) {
      if (b.get<std::string>() != "inf") r.fail("base", "expected \"inf\" or a complex number");
    } else {
      c.base = r.complex(b, "base");
    }
  }
  if (j.contains("measure")) c.measure = r.measure(j["measure"], "measure");
  if (j.contains("degrees")) c.degrees = r.counts(j["degrees"], "degrees");
  if (j.contains("nodes")) c.nodes = r.count(j["nodes"], "nodes");
  if (j.contains("precision")) c.precision = r.string(j["precision"], "precision");
  if (j.contains("placement")) c.placement = r.string(j["placement"], "placement");
  if (j.contains("tolerances")) r.tolerances(j["tolerances"], c.tol);
  if (j.contains("family")) r.family(j["family"], c.family);
  if (j.contains("faber")) r.faber(j["faber"], c.faber);
  if (j.contains("kernel_points")) {
    if (!j["kernel_points"].is_array()) r.fail("kernel_points", "expected an array of complex numbers");
    for (const auto& z : j["kernel_points"]) c.kernel_points.push_back(r.complex(z, "kernel_points"));
  }
  if (j.contains("output")) r.known_keys(j["output"], "output", {"dir"});
  try {
    validate(c);
  } catch (const DomainError& e) {
    const std::string msg = e.what();
    const auto colon = msg.find(": ");
    throw ConfigError(msg, colon == std::string::npos ? 0 : locate_key(text, msg.substr(0, colon)));
  }
  return c;
}

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what(), line_of(text, e.byte == 0 ? 0 : e.byte - 1));
  }
  return parse_config(j, text);
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

json report_json(const ConvergenceReport& rep) {
  json j;
  j["experiment"] = rep.experiment;
  j["config_name"] = rep.config_name;
  j["precision"] = rep.precision;
  j["nodes"] = rep.nodes;
  j["runtime_seconds"] = rep.runtime_seconds;
  j["all_pass"] = rep.all_pass();
  j["scalars"] = rep.scalars;
  j["records"] = json::array();
  for (const auto& r : rep.records) {
    json x{{"n", r.n},           {"lambda", r.lambda},   {"widom_sq", r.widom_sq}, {"limit_A", r.limit_A},
           {"limit_B", r.limit_B}, {"err_abs", r.err_abs}, {"err_rel", r.err_rel},   {"l2_err", r.l2_err},
           {"sup_err", r.sup_err}};
    if (!r.extra.empty()) x["extra"] = r.extra;
    j["records"].push_back(x);
  }
  j["verdicts"] = json::array();
  for (const auto& v : rep.verdicts)
    j["verdicts"].push_back(
        {{"name", v.name}, {"pass", v.pass}, {"value", v.value}, {"tolerance", v.tolerance}, {"detail", v.detail}});
  j["rows"] = json::array();
  for (const auto& r : rep.rows) j["rows"].push_back({{"label", r.label}, {"values", r.values}});
  j["notes"] = rep.notes;
  return j;
}

std::string series_csv(const ConvergenceReport& rep) {
  std::string out = "n,lambda,widom_sq,limit_A,limit_B,err_abs,err_rel,l2_err,sup_err\n";
  for (const auto& r : rep.records) {
    out += std::to_string(r.n);
    for (double v : {r.lambda, r.widom_sq, r.limit_A, r.limit_B, r.err_abs, r.err_rel, r.l2_err, r.sup_err})
      out += "," + fmt17(v);
    out += '\n';
  }
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"Szego asymptotics on Jordan arcs: convergence experiments"};
  app.set_version_flag("--version", ARCSZEGO_VERSION);
  app.require_subcommand(1);

  std::string config_path, out_dir, degrees;
  std::size_t nodes = 0;
  for (const auto& name : experiment_names()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", config_path, "JSON config")->required();
    sub->add_option("--out", out_dir, "output directory (default: config output.dir, else .)");
    sub->add_option("--degrees", degrees, "comma-separated degree list, overrides the config");
    sub->add_option("--nodes", nodes, "quadrature nodes M, overrides the config");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const std::string sub = app.get_subcommands().front()->get_name();

  std::string text;
  {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
      std::cerr << config_path << ": cannot read config\n";
      return 2;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  auto where = [&](int line) { return config_path + (line > 0 ? ":" + std::to_string(line) : std::string()); };

  ExperimentConfig cfg;
  json doc;
  try {
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("invalid JSON: ") + e.what(), line_of(text, e.byte == 0 ? 0 : e.byte - 1));
    }
    if (!degrees.empty()) {
      json d = json::array();
      for (auto n : parse_degree_list(degrees)) d.push_back(n);
      doc["degrees"] = d;
    }
    if (nodes) doc["nodes"] = nodes;
    cfg = parse_config(doc, text);
    if (out_dir.empty()) out_dir = doc.contains("output") && doc["output"].contains("dir")
                                       ? doc["output"]["dir"].get<std::string>()
                                       : std::string(".");
  } catch (const ConfigError& e) {
    std::cerr << where(e.line()) << ": " << e.what() << "\n";
    return 2;
  }

  ConvergenceReport rep;
  try {
    rep = run_experiment(sub, cfg);
  } catch (const ConfigError& e) {
    std::cerr << where(e.line()) << ": " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    const std::string msg = e.what();
    int line = 0;
    if (msg.rfind("base point", 0) == 0) line = locate_key(text, "base");
    else if (msg.find(": ") != std::string::npos) line = locate_key(text, msg.substr(0, msg.find(": ")));
    std::cerr << where(line) << ": " << msg << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 3;
  }

  namespace fs = std::filesystem;
  try {
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    std::ofstream(dir / "report.json") << report_json(rep).dump(2) << "\n";
    std::ofstream(dir / "series.csv", std::ios::binary) << series_csv(rep);
    json manifest{{"config_hash", hex64(fnv1a(doc.dump()))},
                  {"config_path", config_path},
                  {"subcommand", sub},
                  {"tool_version", ARCSZEGO_VERSION},
                  {"timestamp", utc_now()},
                  {"outputs", {"report.json", "series.csv", "manifest.json"}}};
    std::ofstream(dir / "manifest.json") << manifest.dump(2) << "\n";
  } catch (const std::exception& e) {
    std::cerr << out_dir << ": cannot write outputs: " << e.what() << "\n";
    return 2;
  }

  char secs[32];
  std::snprintf(secs, sizeof secs, "%.2fs", rep.runtime_seconds);
  std::cout << sub << " [" << (cfg.name.empty() ? config_path : cfg.name) << "] " << rep.precision
            << " M=" << rep.nodes << " " << secs << "\n";
  for (const auto& v : rep.verdicts)
    std::cout << "  " << (v.pass ? "PASS " : "FAIL ") << v.name << "  value=" << v.value << "  tol=" << v.tolerance
              << "\n";
  for (const auto& n : rep.notes) std::cout << "  note: " << n << "\n";
  return rep.all_pass() ? 0 : 1;
}

}  // namespace arcszego::cli
