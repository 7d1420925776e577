#include "igabem/config.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "igabem/errors.hpp"

namespace igabem {

namespace {

struct RawConfig {
  // section -> key -> value string
  std::map<std::string, std::map<std::string, std::string>> sections;
  mutable std::set<std::string> consumed;

  bool has(const std::string& section, const std::string& key) const {
    const auto s = sections.find(section);
    return s != sections.end() && s->second.count(key) > 0;
  }
  std::string get(const std::string& section, const std::string& key) const {
    consumed.insert(section + "." + key);
    return sections.at(section).at(key);
  }
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

RawConfig tokenize(const std::string& text) {
  RawConfig raw;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw config_error("config: bad section header at line " +
                                                 std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw config_error("config: expected key = value at line " + std::to_string(lineno));
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw config_error("config: empty key at line " + std::to_string(lineno));
    if (!raw.sections[section].emplace(key, value).second) {
      throw config_error("config: duplicate key '" + key + "' at line " + std::to_string(lineno));
    }
  }
  return raw;
}

double to_double(const std::string& v, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (trim(v.substr(pos)).empty()) return x;
  } catch (...) {
  }
  throw config_error("config: bad number for " + what + ": '" + v + "'");
}

int to_int(const std::string& v, const std::string& what) {
  const double x = to_double(v, what);
  const int i = static_cast<int>(x);
  if (x != i) throw config_error("config: expected integer for " + what);
  return i;
}

Vec2 to_vec2(const std::string& v, const std::string& what) {
  std::istringstream in(v);
  Vec2 p;
  if (!(in >> p.x >> p.y)) throw config_error("config: expected two numbers for " + what);
  std::string rest;
  if (in >> rest) throw config_error("config: trailing data for " + what);
  return p;
}

std::vector<double> to_list(const std::string& v, const std::string& what) {
  std::istringstream in(v);
  std::vector<double> out;
  double x;
  while (in >> x) out.push_back(x);
  if (!in.eof()) throw config_error("config: bad list for " + what);
  return out;
}

struct Reader {
  const RawConfig& raw;
  std::string section;

  bool has(const std::string& key) const { return raw.has(section, key); }
  double num(const std::string& key, double fallback) const {
    return has(key) ? to_double(raw.get(section, key), section + "." + key) : fallback;
  }
  int integer(const std::string& key, int fallback) const {
    return has(key) ? to_int(raw.get(section, key), section + "." + key) : fallback;
  }
  std::string str(const std::string& key, const std::string& fallback) const {
    return has(key) ? raw.get(section, key) : fallback;
  }
  Vec2 vec(const std::string& key, Vec2 fallback) const {
    return has(key) ? to_vec2(raw.get(section, key), section + "." + key) : fallback;
  }
};

}  // namespace

CaseConfig parse_case_config(const std::string& text) {
  const RawConfig raw = tokenize(text);
  CaseConfig cfg;

  {
    Reader r{raw, ""};
    cfg.name = r.str("name", cfg.name);
  }
  {
    Reader r{raw, "geometry"};
    cfg.geometry.preset = r.str("preset", "");
    if (cfg.geometry.preset.empty()) throw config_error("config: geometry.preset is required");
    cfg.geometry.tip_a = r.vec("tip_a", cfg.geometry.tip_a);
    cfg.geometry.tip_b = r.vec("tip_b", cfg.geometry.tip_b);
    cfg.geometry.center = r.vec("center", cfg.geometry.center);
    cfg.geometry.radius = r.num("radius", cfg.geometry.radius);
    cfg.geometry.angle_start = r.num("angle_start", cfg.geometry.angle_start);
    cfg.geometry.angle_end = r.num("angle_end", cfg.geometry.angle_end);
    cfg.geometry.semi_x = r.num("semi_x", cfg.geometry.semi_x);
    cfg.geometry.semi_y = r.num("semi_y", cfg.geometry.semi_y);
    cfg.geometry.param_start = r.num("param_start", cfg.geometry.param_start);
    cfg.geometry.param_end = r.num("param_end", cfg.geometry.param_end);
    cfg.geometry.arc_length = r.num("arc_length", cfg.geometry.arc_length);
    cfg.geometry.file = r.str("file", cfg.geometry.file);
  }
  {
    Reader r{raw, "mesh"};
    cfg.mesh.elements = r.integer("elements", cfg.mesh.elements);
    cfg.mesh.degree = r.integer("degree", cfg.mesh.degree);
    const std::string grading = r.str("grading", cfg.mesh.graded ? "geometric" : "uniform");
    if (grading == "geometric") {
      cfg.mesh.graded = true;
    } else if (grading == "uniform") {
      cfg.mesh.graded = false;
    } else {
      throw config_error("config: mesh.grading must be geometric or uniform");
    }
    cfg.mesh.grading_ratio = r.num("grading_ratio", cfg.mesh.grading_ratio);
    if (cfg.mesh.elements < 4) throw config_error("config: mesh.elements must be >= 4");
    if (cfg.mesh.degree < 2) throw config_error("config: mesh.degree must be >= 2");
  }
  {
    Reader r{raw, "material"};
    cfg.material.shear_modulus = r.num("shear_modulus", cfg.material.shear_modulus);
    cfg.material.poisson = r.num("poisson", cfg.material.poisson);
  }
  {
    Reader r{raw, "surface"};
    const bool has_dimless = r.has("gamma") || r.has("sigma0_tilde");
    const bool has_dim = r.has("mu_s") || r.has("lambda_s") || r.has("sigma0");
    if (has_dimless == has_dim) {
      throw config_error(
          "config: surface must be given either as gamma/sigma0_tilde or as mu_s/lambda_s/sigma0");
    }
    cfg.surface.dimensionless = has_dimless;
    if (has_dimless) {
      cfg.surface.gamma = r.num("gamma", 0.0);
      cfg.surface.sigma0_tilde = r.num("sigma0_tilde", 0.0);
    } else {
      cfg.surface.mu_s = r.num("mu_s", 0.0);
      cfg.surface.lambda_s = r.num("lambda_s", 0.0);
      cfg.surface.sigma0 = r.num("sigma0", 0.0);
    }
  }
  {
    Reader r{raw, "load"};
    const bool has_dimless = r.has("s11_tilde") || r.has("s12_tilde") || r.has("s22_tilde");
    const bool has_dim = r.has("s11") || r.has("s12") || r.has("s22");
    if (has_dimless && has_dim) {
      throw config_error("config: load must be all dimensionless or all dimensional");
    }
    cfg.load.dimensionless = !has_dim;
    if (has_dim) {
      cfg.load.s11 = r.num("s11", 0.0);
      cfg.load.s12 = r.num("s12", 0.0);
      cfg.load.s22 = r.num("s22", 0.0);
    } else {
      cfg.load.s11 = r.num("s11_tilde", 0.0);
      cfg.load.s12 = r.num("s12_tilde", 0.0);
      cfg.load.s22 = r.num("s22_tilde", 0.0);
    }
  }
  {
    Reader r{raw, "quadrature"};
    cfg.quadrature.regular_order = r.integer("regular_order", cfg.quadrature.regular_order);
    cfg.quadrature.singular_order = r.integer("singular_order", cfg.quadrature.singular_order);
    cfg.quadrature.delta_fraction = r.num("delta_fraction", cfg.quadrature.delta_fraction);
    cfg.quadrature.field_order = r.integer("field_order", cfg.quadrature.field_order);
  }
  {
    Reader r{raw, "output"};
    cfg.output.profile_samples = r.integer("profile_samples", cfg.output.profile_samples);
    const std::string grid = r.str("field_grid", cfg.output.field_grid ? "on" : "off");
    if (grid == "on") {
      cfg.output.field_grid = true;
    } else if (grid == "off") {
      cfg.output.field_grid = false;
    } else {
      throw config_error("config: output.field_grid must be on or off");
    }
    cfg.output.grid_nx = r.integer("grid_nx", cfg.output.grid_nx);
    cfg.output.grid_ny = r.integer("grid_ny", cfg.output.grid_ny);
    cfg.output.grid_halfwidth = r.num("grid_halfwidth", cfg.output.grid_halfwidth);
    if (r.has("radial_angles")) {
      cfg.output.radial_angles = to_list(raw.get("output", "radial_angles"), "output.radial_angles");
    }
    cfg.output.radial_r_min = r.num("radial_r_min", cfg.output.radial_r_min);
    cfg.output.radial_r_max = r.num("radial_r_max", cfg.output.radial_r_max);
    cfg.output.radial_samples = r.integer("radial_samples", cfg.output.radial_samples);
  }

  // Reject typos: every present key must have been consumed.
  for (const auto& [section, kv] : raw.sections) {
    for (const auto& [key, value] : kv) {
      if (!raw.consumed.count(section + "." + key)) {
        throw config_error("config: unknown key '" + (section.empty() ? key : section + "." + key) +
                           "'");
      }
    }
  }
  return cfg;
}

CaseConfig load_case_config(const std::string& path, std::string* raw_text) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (raw_text) *raw_text = buf.str();
  return parse_case_config(buf.str());
}

std::string format_case_config(const CaseConfig& cfg) {
  std::ostringstream out;
  out.precision(17);
  out << "name = " << cfg.name << "\n\n[geometry]\npreset = " << cfg.geometry.preset << "\n";
  const GeometryConfig& g = cfg.geometry;
  if (g.preset == "segment") {
    out << "tip_a = " << g.tip_a.x << ' ' << g.tip_a.y << "\n";
    out << "tip_b = " << g.tip_b.x << ' ' << g.tip_b.y << "\n";
  } else if (g.preset == "circular_arc") {
    out << "center = " << g.center.x << ' ' << g.center.y << "\n";
    out << "radius = " << g.radius << "\n";
    out << "angle_start = " << g.angle_start << "\n";
    out << "angle_end = " << g.angle_end << "\n";
  } else if (g.preset == "ellipse_arc") {
    out << "center = " << g.center.x << ' ' << g.center.y << "\n";
    out << "semi_x = " << g.semi_x << "\nsemi_y = " << g.semi_y << "\n";
    if (g.arc_length > 0.0) {
      out << "arc_length = " << g.arc_length << "\n";
    } else {
      out << "param_start = " << g.param_start << "\nparam_end = " << g.param_end << "\n";
    }
  } else if (g.preset == "custom_file") {
    out << "file = " << g.file << "\n";
  }
  out << "\n[mesh]\nelements = " << cfg.mesh.elements << "\ndegree = " << cfg.mesh.degree
      << "\ngrading = " << (cfg.mesh.graded ? "geometric" : "uniform")
      << "\ngrading_ratio = " << cfg.mesh.grading_ratio << "\n";
  out << "\n[material]\nshear_modulus = " << cfg.material.shear_modulus
      << "\npoisson = " << cfg.material.poisson << "\n";
  out << "\n[surface]\n";
  if (cfg.surface.dimensionless) {
    out << "gamma = " << cfg.surface.gamma << "\nsigma0_tilde = " << cfg.surface.sigma0_tilde
        << "\n";
  } else {
    out << "mu_s = " << cfg.surface.mu_s << "\nlambda_s = " << cfg.surface.lambda_s
        << "\nsigma0 = " << cfg.surface.sigma0 << "\n";
  }
  out << "\n[load]\n";
  const char* suffix = cfg.load.dimensionless ? "_tilde" : "";
  out << "s11" << suffix << " = " << cfg.load.s11 << "\n";
  out << "s12" << suffix << " = " << cfg.load.s12 << "\n";
  out << "s22" << suffix << " = " << cfg.load.s22 << "\n";
  out << "\n[quadrature]\nregular_order = " << cfg.quadrature.regular_order
      << "\nsingular_order = " << cfg.quadrature.singular_order
      << "\ndelta_fraction = " << cfg.quadrature.delta_fraction
      << "\nfield_order = " << cfg.quadrature.field_order << "\n";
  out << "\n[output]\nprofile_samples = " << cfg.output.profile_samples
      << "\nfield_grid = " << (cfg.output.field_grid ? "on" : "off")
      << "\ngrid_nx = " << cfg.output.grid_nx << "\ngrid_ny = " << cfg.output.grid_ny
      << "\ngrid_halfwidth = " << cfg.output.grid_halfwidth << "\n";
  if (!cfg.output.radial_angles.empty()) {
    out << "radial_angles =";
    for (double a : cfg.output.radial_angles) out << ' ' << a;
    out << "\nradial_r_min = " << cfg.output.radial_r_min
        << "\nradial_r_max = " << cfg.output.radial_r_max
        << "\nradial_samples = " << cfg.output.radial_samples << "\n";
  }
  return out.str();
}

}  // namespace igabem
