#include "dpcollapse/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <Eigen/Dense>

namespace dpc::cli {

using nlohmann::json;

namespace {

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

// Walks one JSON object, remembering which keys were consumed so leftovers
// can be reported as unknown.
class Section {
 public:
  Section(const json& doc, std::string name) : name_(std::move(name)) {
    if (doc.is_null()) return;
    if (!doc.is_object()) throw ConfigError(name_ + ": expected an object");
    doc_ = &doc;
  }

  /// Rejects keys that no reader asked for.
  void finish() const {
    if (doc_ == nullptr) return;
    for (const auto& [key, value] : doc_->items()) {
      if (!seen_.contains(key)) throw ConfigError(join(name_, key) + ": unknown key");
    }
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    if (doc_ == nullptr) return nullptr;
    auto it = doc_->find(key);
    return it == doc_->end() ? nullptr : &*it;
  }

  std::string field(const std::string& key) const { return join(name_, key); }

  void length(const std::string& key, double& out) {
    if (const json* v = find(key)) out = to_length(*v, field(key));
  }

  void number(const std::string& key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) throw ConfigError(field(key) + ": expected a number");
      out = v->get<double>();
    }
  }

  template <typename Int>
  void integer(const std::string& key, Int& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) throw ConfigError(field(key) + ": expected an integer");
      out = v->get<Int>();
    }
  }

  void boolean(const std::string& key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) throw ConfigError(field(key) + ": expected true or false");
      out = v->get<bool>();
    }
  }

  void string(const std::string& key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) throw ConfigError(field(key) + ": expected a string");
      out = v->get<std::string>();
    }
  }

  static double to_length(const json& v, const std::string& field) {
    if (!v.is_string()) {
      throw ConfigError(field + ": lengths must be strings with a unit suffix, e.g. \"2.46A\"");
    }
    return parse_length(v.get<std::string>(), field);
  }

 private:
  const json* doc_ = nullptr;
  std::string name_;
  std::set<std::string> seen_;
};

const json& child(const json& doc, const std::string& key) {
  static const json null_value;
  if (!doc.is_object()) return null_value;
  auto it = doc.find(key);
  return it == doc.end() ? null_value : *it;
}

Vec3 read_vector(const json& v, const std::string& field) {
  if (!v.is_array() || v.size() < 2 || v.size() > 3) {
    throw ConfigError(field + ": expected a list of 2 or 3 lengths");
  }
  Vec3 out = Vec3::Zero();
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] = Section::to_length(v[i], field + "[" + std::to_string(i) + "]");
  }
  return out;
}

void read_lattice(const json& doc, LatticeSpec& spec) {
  Section s(doc, "lattice");
  s.string("preset", spec.preset);
  s.integer("n1", spec.n1);
  s.integer("n2", spec.n2);
  s.integer("n3", spec.n3);
  s.length("interlayer", spec.interlayer);
  s.length("spacing", spec.spacing);
  s.number("mass", spec.mass);
  s.integer("dimension", spec.dimension);
  if (const json* v = s.find("primitive")) {
    if (!v->is_array()) throw ConfigError("lattice.primitive: expected a list of vectors");
    spec.primitive.clear();
    for (std::size_t i = 0; i < v->size(); ++i) {
      spec.primitive.push_back(read_vector((*v)[i], "lattice.primitive[" + std::to_string(i) + "]"));
    }
  }
  if (const json* v = s.find("basis")) {
    if (!v->is_array()) throw ConfigError("lattice.basis: expected a list of atoms");
    spec.basis.clear();
    for (std::size_t i = 0; i < v->size(); ++i) {
      const std::string name = "lattice.basis[" + std::to_string(i) + "]";
      Section atom((*v)[i], name);
      BasisAtom b;
      if (const json* o = atom.find("offset")) b.offset = read_vector(*o, name + ".offset");
      atom.number("mass", b.mass);
      atom.length("radius", b.radius);
      atom.finish();
      spec.basis.push_back(b);
    }
  }
  static const std::set<std::string> presets{"graphene", "square", "cubic", "stacked-graphene", "custom"};
  if (!presets.contains(spec.preset)) {
    throw ConfigError("lattice.preset: unknown preset '" + spec.preset +
                      "' (graphene, square, cubic, stacked-graphene, custom)");
  }
  if (spec.n1 < 1 || spec.n2 < 1 || spec.n3 < 1) throw ConfigError("lattice.n1/n2/n3: extents must be >= 1");
  s.finish();
}

void read_sweep(const json& doc, SweepSpec& spec) {
  Section s(doc, "sweep");
  s.length("r0_min", spec.r0_min);
  s.length("r0_max", spec.r0_max);
  s.integer("points", spec.points);
  std::string spacing = spec.log_spaced ? "log" : "linear";
  s.string("spacing", spacing);
  if (spacing != "log" && spacing != "linear") throw ConfigError("sweep.spacing: expected log or linear");
  spec.log_spaced = spacing == "log";
  if (!(spec.r0_min > 0.0)) throw ConfigError("sweep.r0_min: must be positive");
  if (spec.points < 1) throw ConfigError("sweep.points: need at least one grid point");
  if (spec.points == 1 ? spec.r0_max < spec.r0_min : !(spec.r0_min < spec.r0_max)) {
    throw ConfigError("sweep.r0_max: must exceed sweep.r0_min");
  }
  s.finish();
}

void read_superposition(const json& doc, SuperpositionSpec& spec) {
  Section s(doc, "superposition");
  if (const json* v = s.find("d")) {
    if (!v->is_string()) throw ConfigError("superposition.d: expected a string such as \"4L\" or \"100um\"");
    spec.d = parse_separation(v->get<std::string>(), "superposition.d");
  }
  s.string("direction", spec.direction);
  if (spec.direction != "a1" && spec.direction != "normal") {
    throw ConfigError("superposition.direction: expected a1 or normal");
  }
  s.length("sigma", spec.sigma);
  if (spec.sigma < 0.0) throw ConfigError("superposition.sigma: must be positive");
  s.finish();
}

void read_noise(const json& doc, NoiseSpec& spec) {
  Section s(doc, "noise");
  if (const json* v = s.find("omega_c")) {
    if (v->is_string() && v->get<std::string>() == "white") {
      spec.omega_c = std::numeric_limits<double>::infinity();
    } else if (v->is_number() && v->get<double>() > 0.0) {
      spec.omega_c = v->get<double>();
    } else {
      throw ConfigError("noise.omega_c: expected a positive number (rad/s) or \"white\"");
    }
  }
  s.number("omega_min", spec.omega_min);
  s.number("omega_max", spec.omega_max);
  s.integer("points", spec.points);
  if (!(spec.omega_min > 0.0) || !(spec.omega_min < spec.omega_max)) {
    throw ConfigError("noise.omega_min/omega_max: need 0 < min < max");
  }
  if (spec.points < 2) throw ConfigError("noise.points: need at least 2 grid points");
  s.finish();
}

void read_exec(const json& doc, ExecSpec& spec) {
  Section s(doc, "exec");
  s.integer("workers", spec.workers);
  s.number("term_budget", spec.term_budget);
  s.boolean("allow_long", spec.allow_long);
  s.boolean("progress", spec.progress);
  if (!(spec.term_budget > 0.0)) throw ConfigError("exec.term_budget: must be positive");
  s.finish();
}

void read_out(const json& doc, OutputSpec& spec) {
  Section s(doc, "out");
  s.string("path", spec.path);
  s.boolean("timing", spec.timing);
  s.finish();
}

void read_oracle(const json& doc, OracleSpec& spec) {
  Section s(doc, "oracle");
  if (const json* v = s.find("d")) {
    if (!v->is_array() || v->empty()) throw ConfigError("oracle.d: expected a non-empty list");
    spec.d.clear();
    for (std::size_t i = 0; i < v->size(); ++i) {
      const std::string name = "oracle.d[" + std::to_string(i) + "]";
      if (!(*v)[i].is_string()) throw ConfigError(name + ": expected a string such as \"4L\"");
      spec.d.push_back(parse_separation((*v)[i].get<std::string>(), name));
    }
  }
  s.integer("r0_points", spec.r0_points);
  s.boolean("override_cap", spec.override_cap);
  if (spec.r0_points < 1) throw ConfigError("oracle.r0_points: must be >= 1");
  s.finish();
}

std::vector<std::int64_t> read_sizes(const json& v, const std::string& field) {
  if (!v.is_array()) throw ConfigError(field + ": expected a list of cell counts");
  std::vector<std::int64_t> out;
  for (const auto& e : v) {
    if (!e.is_number_integer() || e.get<std::int64_t>() < 1) {
      throw ConfigError(field + ": cell counts must be integers >= 1");
    }
    out.push_back(e.get<std::int64_t>());
  }
  return out;
}

void read_bench(const json& doc, BenchSpec& spec) {
  Section s(doc, "bench");
  if (const json* v = s.find("fast_n")) spec.fast_n = read_sizes(*v, "bench.fast_n");
  if (const json* v = s.find("brute_n")) spec.brute_n = read_sizes(*v, "bench.brute_n");
  s.integer("repeats", spec.repeats);
  if (spec.repeats < 1) throw ConfigError("bench.repeats: must be >= 1");
  s.finish();
}

void read_coherence(const json& doc, CoherenceSpec& spec) {
  Section s(doc, "coherence");
  s.number("total_mass", spec.total_mass);
  s.number("delta_e", spec.delta_e);
  s.number("t_min_ratio", spec.t_min_ratio);
  s.number("t_max_ratio", spec.t_max_ratio);
  s.integer("points", spec.points);
  if (!(spec.t_min_ratio > 0.0) || !(spec.t_min_ratio < spec.t_max_ratio)) {
    throw ConfigError("coherence.t_min_ratio/t_max_ratio: need 0 < min < max");
  }
  if (spec.points < 2) throw ConfigError("coherence.points: need at least 2 grid points");
  s.finish();
}

void read_colored(const json& doc, ColoredSpec& spec) {
  Section s(doc, "colored");
  s.number("delta_e", spec.delta_e);
  s.number("t", spec.t_eval);
  if (!(spec.t_eval > 0.0)) throw ConfigError("colored.t: must be positive (seconds)");
  s.finish();
}

}  // namespace

RunConfig parse_run_config(const json& doc) {
  RunConfig cfg;
  Section root(doc, "");
  read_lattice(child(doc, "lattice"), cfg.lattice);
  read_sweep(child(doc, "sweep"), cfg.sweep);
  read_superposition(child(doc, "superposition"), cfg.superposition);
  read_noise(child(doc, "noise"), cfg.noise);
  read_exec(child(doc, "exec"), cfg.exec);
  read_out(child(doc, "out"), cfg.out);
  read_oracle(child(doc, "oracle"), cfg.oracle);
  read_bench(child(doc, "bench"), cfg.bench);
  read_coherence(child(doc, "coherence"), cfg.coherence);
  read_colored(child(doc, "colored"), cfg.colored);
  for (const char* name : {"lattice", "sweep", "superposition", "noise", "exec", "out", "oracle",
                           "bench", "coherence", "colored"}) {
    root.find(name);
  }
  root.finish();
  if (cfg.oracle.d.empty()) cfg.oracle.d = {{true, 2.0}, {true, 4.0}, {true, 8.0}};
  return cfg;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: '" + path + "' is not valid JSON: " + e.what());
  }
}

void set_dotted(json& doc, const std::string& dotted, json value) {
  if (doc.is_null()) doc = json::object();
  json* node = &doc;
  std::stringstream ss(dotted);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    json& next = (*node)[parts[i]];
    if (next.is_null()) next = json::object();
    node = &next;
  }
  (*node)[parts.back()] = std::move(value);
}

Lattice build_lattice(const LatticeSpec& spec) {
  try {
    if (spec.preset == "graphene") return build_graphene_sheet(spec.n1, spec.n2);
    if (spec.preset == "square") return build_square_lattice(spec.n1, spec.n2, spec.spacing, spec.mass);
    if (spec.preset == "cubic") {
      return build_cubic_lattice(spec.n1, spec.n2, spec.n3, spec.spacing, spec.mass);
    }
    if (spec.preset == "stacked-graphene") {
      return build_stacked_graphene(spec.n1, spec.n2, spec.n3, spec.interlayer);
    }
    return Lattice(spec.dimension, spec.primitive, spec.basis, {spec.n1, spec.n2, spec.n3}, "custom");
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("lattice: ") + e.what());
  }
}

Vec3 separation_direction(const Lattice& lattice, const std::string& direction) {
  const Vec3 a1 = lattice.primitive(0);
  if (direction == "a1") return a1.normalized();
  // Remove from a1 its component in the span of the remaining primitive
  // vectors; what is left is normal to the face they span.
  const int rest = lattice.dimension() - 1;
  Eigen::MatrixXd basis(3, rest);
  for (int i = 0; i < rest; ++i) basis.col(i) = lattice.primitive(i + 1);
  const Eigen::VectorXd coeff = basis.colPivHouseholderQr().solve(a1);
  return (a1 - basis * coeff).normalized();
}

std::vector<double> make_grid(double min, double max, int points, bool log_spaced) {
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double f = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    grid[static_cast<std::size_t>(i)] =
        log_spaced ? std::exp(std::log(min) + f * (std::log(max) - std::log(min))) : min + f * (max - min);
  }
  grid.front() = min;
  if (points > 1) grid.back() = max;
  return grid;
}

}  // namespace dpc::cli
