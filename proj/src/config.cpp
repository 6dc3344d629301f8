#include "hapto/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace hapto {

using nlohmann::json;

namespace {

[[noreturn]] void parse_error_with_line(const std::string& text,
                                        const nlohmann::detail::parse_error& e,
                                        const std::string& path) {
  // nlohmann reports a byte offset; translate it into a line number.
  size_t line = 1;
  const size_t stop = std::min(text.size(), static_cast<size_t>(e.byte));
  for (size_t i = 0; i < stop; ++i)
    if (text[i] == '\n') ++line;
  throw Error("parse error in " + path + " at line " + std::to_string(line) +
              ": " + e.what());
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& section) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw Error("unknown key '" + it.key() + "' in section '" + section +
                  "'");
}

double get_num(const json& obj, const std::string& key, double fallback,
               const std::string& section) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number())
    throw Error("key '" + key + "' in section '" + section +
                "' must be a number");
  return obj[key].get<double>();
}

std::string get_str(const json& obj, const std::string& key,
                    const std::string& fallback, const std::string& section) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_string())
    throw Error("key '" + key + "' in section '" + section +
                "' must be a string");
  return obj[key].get<std::string>();
}

InitSpec parse_init(const json& obj, const std::string& section) {
  reject_unknown_keys(obj,
                      {"kind", "center", "width", "value", "seed", "r_inner",
                       "r_outer", "file", "column"},
                      section);
  if (!obj.contains("kind"))
    throw Error("section '" + section + "' requires a 'kind'");
  InitSpec spec;
  spec.kind = init_kind_from_string(get_str(obj, "kind", "", section));
  if (obj.contains("center")) {
    const auto& c = obj["center"];
    if (!c.is_array() || c.size() != 2 || !c[0].is_number() ||
        !c[1].is_number())
      throw Error("key 'center' in section '" + section +
                  "' must be an [x, y] pair");
    spec.center = {c[0].get<double>(), c[1].get<double>()};
  }
  spec.width = get_num(obj, "width", spec.width, section);
  spec.value = get_num(obj, "value", spec.value, section);
  if (obj.contains("seed")) {
    if (!obj["seed"].is_number_unsigned())
      throw Error("key 'seed' in section '" + section +
                  "' must be a non-negative integer");
    spec.seed = obj["seed"].get<std::uint64_t>();
  }
  spec.r_inner = get_num(obj, "r_inner", spec.r_inner, section);
  spec.r_outer = get_num(obj, "r_outer", spec.r_outer, section);
  spec.file = get_str(obj, "file", spec.file, section);
  spec.column = get_str(obj, "column", spec.column, section);
  spec.validate();
  return spec;
}

json init_to_json(const InitSpec& spec) {
  json o;
  o["kind"] = to_string(spec.kind);
  switch (spec.kind) {
    case InitKind::GaussianC:
      o["center"] = {spec.center.x, spec.center.y};
      o["width"] = spec.width;
      break;
    case InitKind::UniformRandomV:
      o["seed"] = *spec.seed;
      break;
    case InitKind::Constant:
      o["value"] = spec.value;
      break;
    case InitKind::AnnularGapV:
      o["center"] = {spec.center.x, spec.center.y};
      o["r_inner"] = spec.r_inner;
      o["r_outer"] = spec.r_outer;
      o["value"] = spec.value;
      break;
    case InitKind::FromFile:
      o["file"] = spec.file;
      if (!spec.column.empty()) o["column"] = spec.column;
      break;
  }
  return o;
}

}  // namespace

void RunConfig::validate() const {
  if (mesh.generate) {
    if (!(mesh.h > 0.0) || mesh.h > 0.5)
      throw Error("mesh.h must lie in (0, 0.5]");
    if (mesh.relax_iters < 1) throw Error("mesh.relax_iters must be positive");
  } else if (mesh.file.empty()) {
    throw Error("mesh.file is required when mesh.source is 'file'");
  }
  model.validate();
  initial_c.validate();
  initial_v.validate();
  if (!(schedule.t_end >= 0.0)) throw Error("time.t_end must be >= 0");
  if (!std::is_sorted(schedule.snapshot_times.begin(),
                      schedule.snapshot_times.end()))
    throw Error("time.snapshot_times must be sorted ascending");
  for (double t : schedule.snapshot_times)
    if (t < 0.0 || t > schedule.t_end)
      throw Error("snapshot time " + std::to_string(t) +
                  " lies outside [0, t_end]");
  if (schedule.adaptive) {
    if (!(schedule.cfl_safety > 0.0) || schedule.cfl_safety > 1.0)
      throw Error("time.cfl_safety must lie in (0, 1]");
  } else if (!(schedule.dt_fixed > 0.0)) {
    throw Error("time.dt_fixed must be positive in fixed mode");
  }
  if (!(dt_max > 0.0)) throw Error("time.dt_max must be positive");
  if (!(schedule.c_tol > 0.0)) throw Error("output.c_tol must be positive");
  if (output_dir.empty()) throw Error("output.dir must not be empty");
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  json root;
  try {
    root = json::parse(text);
  } catch (const nlohmann::detail::parse_error& e) {
    parse_error_with_line(text, e, path);
  }
  if (!root.is_object()) throw Error("config root must be a JSON object");
  reject_unknown_keys(
      root, {"mesh", "model", "initial_c", "initial_v", "time", "output"},
      "(root)");

  RunConfig cfg;

  if (root.contains("mesh")) {
    const json& m = root["mesh"];
    reject_unknown_keys(m, {"source", "h", "seed", "relax_iters", "file"},
                        "mesh");
    const std::string source = get_str(m, "source", "generate", "mesh");
    if (source == "generate") {
      cfg.mesh.generate = true;
      if (m.contains("file"))
        throw Error("mesh.file conflicts with mesh.source 'generate'");
      cfg.mesh.h = get_num(m, "h", cfg.mesh.h, "mesh");
      if (m.contains("seed")) cfg.mesh.seed = m["seed"].get<std::uint64_t>();
      cfg.mesh.relax_iters = static_cast<int>(
          get_num(m, "relax_iters", cfg.mesh.relax_iters, "mesh"));
    } else if (source == "file") {
      cfg.mesh.generate = false;
      if (m.contains("h") || m.contains("seed") || m.contains("relax_iters"))
        throw Error("mesh.h/seed/relax_iters conflict with mesh.source 'file'");
      cfg.mesh.file = get_str(m, "file", "", "mesh");
    } else {
      throw Error("mesh.source must be 'generate' or 'file'");
    }
  }

  if (root.contains("model")) {
    const json& m = root["model"];
    reject_unknown_keys(m,
                        {"kappa_c", "kappa_v", "mu_c", "mu_v", "lambda", "eta",
                         "variant", "eps1", "eps2", "theta",
                         "edge_diffusion_mean"},
                        "model");
    cfg.model.kappa_c = get_num(m, "kappa_c", cfg.model.kappa_c, "model");
    cfg.model.kappa_v = get_num(m, "kappa_v", cfg.model.kappa_v, "model");
    cfg.model.mu_c = get_num(m, "mu_c", cfg.model.mu_c, "model");
    cfg.model.mu_v = get_num(m, "mu_v", cfg.model.mu_v, "model");
    cfg.model.lambda = get_num(m, "lambda", cfg.model.lambda, "model");
    cfg.model.eta = get_num(m, "eta", cfg.model.eta, "model");
    cfg.model.variant = variant_from_string(
        get_str(m, "variant", to_string(cfg.model.variant), "model"));
    cfg.model.eps1 = get_num(m, "eps1", cfg.model.eps1, "model");
    cfg.model.eps2 = get_num(m, "eps2", cfg.model.eps2, "model");
    cfg.model.theta = get_num(m, "theta", cfg.model.theta, "model");
    const std::string mean =
        get_str(m, "edge_diffusion_mean", "arithmetic", "model");
    if (mean == "arithmetic")
      cfg.diffusion_mean = EdgeMean::Arithmetic;
    else if (mean == "harmonic")
      cfg.diffusion_mean = EdgeMean::Harmonic;
    else
      throw Error("model.edge_diffusion_mean must be 'arithmetic' or 'harmonic'");
  }

  if (!root.contains("initial_c") || !root.contains("initial_v"))
    throw Error("config requires sections 'initial_c' and 'initial_v'");
  cfg.initial_c = parse_init(root["initial_c"], "initial_c");
  cfg.initial_v = parse_init(root["initial_v"], "initial_v");

  if (root.contains("time")) {
    const json& t = root["time"];
    reject_unknown_keys(t,
                        {"t_end", "snapshot_times", "dt_mode", "cfl_safety",
                         "dt_fixed", "dt_max"},
                        "time");
    cfg.schedule.t_end = get_num(t, "t_end", cfg.schedule.t_end, "time");
    if (t.contains("snapshot_times")) {
      if (!t["snapshot_times"].is_array())
        throw Error("time.snapshot_times must be an array");
      cfg.schedule.snapshot_times.clear();
      for (const auto& x : t["snapshot_times"]) {
        if (!x.is_number())
          throw Error("time.snapshot_times entries must be numbers");
        cfg.schedule.snapshot_times.push_back(x.get<double>());
      }
    }
    const std::string mode = get_str(t, "dt_mode", "adaptive", "time");
    if (mode == "adaptive")
      cfg.schedule.adaptive = true;
    else if (mode == "fixed")
      cfg.schedule.adaptive = false;
    else
      throw Error("time.dt_mode must be 'adaptive' or 'fixed'");
    cfg.schedule.cfl_safety =
        get_num(t, "cfl_safety", cfg.schedule.cfl_safety, "time");
    cfg.schedule.dt_fixed = get_num(t, "dt_fixed", cfg.schedule.dt_fixed, "time");
    cfg.dt_max = get_num(t, "dt_max", cfg.dt_max, "time");
  }

  if (root.contains("output")) {
    const json& o = root["output"];
    reject_unknown_keys(o, {"dir", "c_tol"}, "output");
    cfg.output_dir = get_str(o, "dir", cfg.output_dir, "output");
    cfg.schedule.c_tol = get_num(o, "c_tol", cfg.schedule.c_tol, "output");
  }

  // The tumor seed's center doubles as the front-radius reference point.
  if (cfg.initial_c.kind == InitKind::GaussianC)
    cfg.schedule.front_center = cfg.initial_c.center;

  cfg.validate();
  return cfg;
}

void save_config(const RunConfig& cfg, const std::string& path) {
  json root;
  if (cfg.mesh.generate) {
    root["mesh"] = {{"source", "generate"},
                    {"h", cfg.mesh.h},
                    {"seed", cfg.mesh.seed},
                    {"relax_iters", cfg.mesh.relax_iters}};
  } else {
    root["mesh"] = {{"source", "file"}, {"file", cfg.mesh.file}};
  }
  root["model"] = {
      {"kappa_c", cfg.model.kappa_c},
      {"kappa_v", cfg.model.kappa_v},
      {"mu_c", cfg.model.mu_c},
      {"mu_v", cfg.model.mu_v},
      {"lambda", cfg.model.lambda},
      {"eta", cfg.model.eta},
      {"variant", to_string(cfg.model.variant)},
      {"edge_diffusion_mean",
       cfg.diffusion_mean == EdgeMean::Arithmetic ? "arithmetic" : "harmonic"}};
  if (cfg.model.variant == ModelVariant::Regularized) {
    root["model"]["eps1"] = cfg.model.eps1;
    root["model"]["eps2"] = cfg.model.eps2;
    root["model"]["theta"] = cfg.model.theta;
  }
  root["initial_c"] = init_to_json(cfg.initial_c);
  root["initial_v"] = init_to_json(cfg.initial_v);
  root["time"] = {{"t_end", cfg.schedule.t_end},
                  {"snapshot_times", cfg.schedule.snapshot_times},
                  {"dt_mode", cfg.schedule.adaptive ? "adaptive" : "fixed"},
                  {"cfl_safety", cfg.schedule.cfl_safety},
                  {"dt_max", cfg.dt_max}};
  if (!cfg.schedule.adaptive)
    root["time"]["dt_fixed"] = cfg.schedule.dt_fixed;
  root["output"] = {{"dir", cfg.output_dir}, {"c_tol", cfg.schedule.c_tol}};

  std::ofstream out(path);
  if (!out) throw Error("cannot open config file for writing: " + path);
  out << root.dump(2) << "\n";
  if (!out) throw Error("write failed for config file: " + path);
}

}  // namespace hapto
