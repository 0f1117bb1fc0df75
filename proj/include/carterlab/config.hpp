#pragma once

#include <json.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "errors.hpp"
#include "slab.hpp"

namespace carterlab {
namespace cli {

using json = nlohmann::json;

inline constexpr const char* schema_version = "carterlab-1";

struct ParamsConfig {
  double M = 1.0, a = 0.5, Q = 0.0;
};

struct SlabConfig {
  Rect rect{3.0, 5.0, -0.5, 0.5};
  int nr = 48, nx = 48, m = 0;
  bool flat = false;
};

struct NumericsConfig {
  int resolution = 64;
  double dt = 0.01;
  double tol = 1e-9;
  std::uint64_t seed = 0;
  int count = 4;
  int order = 8;
  long steps = 200;
};

struct OutputConfig {
  std::string path;  // empty resolves to "<command>.<format>"
  std::string format = "csv";
};

struct ModesConfig {
  double Omega = 0.3;
  std::string bc = "regular";
  int lambda_index = 0;
  double omega0 = 0.0, omega1 = 0.5;
  int scan_steps = 0;  // 0 disables the scan
};

struct WallConfig {
  double R_w = 2.5;
};

struct ExtremalConfig {
  double delta_c = 0.0;  // 0 keeps the library default collar width
  int nth = 6;
  std::string profile = "slope-bump";
  double amplitude = 1.0;
  double drift_tol = 0.05;  // relative to max(1, |initial charge|)
};

struct EvolveConfig {
  std::string data = "eigenmode";
  int mode_index = 1;  // 0 is the constant kernel mode, which carries no energy
  double drift_tol = 1e-8;
  double accuracy_tol = 0.05;  // step-halving disagreement budget
};

struct CertConfig {
  std::string fault = "none";
  bool symbolic = true;
  int spot_points = 0;
};

struct RunConfig {
  std::string command;
  ParamsConfig params;
  SlabConfig slab;
  NumericsConfig numerics;
  OutputConfig output;
  ModesConfig modes;
  WallConfig wall;
  ExtremalConfig extremal;
  EvolveConfig evolve;
  CertConfig cert;
  json resolved;  // every default filled in; written next to the output
};

namespace detail {

inline std::string join_key(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

inline void check_keys(const json& obj, const std::string& prefix,
                       std::initializer_list<const char*> known) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : known)
      if (it.key() == k) {
        ok = true;
        break;
      }
    if (!ok) throw SchemaError("unknown key \"" + join_key(prefix, it.key()) + "\"");
  }
}

inline const json* section(const json& root, const std::string& key) {
  const auto it = root.find(key);
  if (it == root.end()) return nullptr;
  if (!it->is_object()) throw SchemaError("key \"" + key + "\" must be an object");
  return &*it;
}

inline double get_num(const json* sec, const std::string& prefix, const char* key, double dflt) {
  if (!sec) return dflt;
  const auto it = sec->find(key);
  if (it == sec->end()) return dflt;
  if (!it->is_number())
    throw SchemaError("key \"" + join_key(prefix, key) + "\" must be a number");
  return it->get<double>();
}

inline long get_int(const json* sec, const std::string& prefix, const char* key, long dflt) {
  if (!sec) return dflt;
  const auto it = sec->find(key);
  if (it == sec->end()) return dflt;
  if (!it->is_number_integer())
    throw SchemaError("key \"" + join_key(prefix, key) + "\" must be an integer");
  return it->get<long>();
}

inline bool get_bool(const json* sec, const std::string& prefix, const char* key, bool dflt) {
  if (!sec) return dflt;
  const auto it = sec->find(key);
  if (it == sec->end()) return dflt;
  if (!it->is_boolean())
    throw SchemaError("key \"" + join_key(prefix, key) + "\" must be a boolean");
  return it->get<bool>();
}

inline std::string get_str(const json* sec, const std::string& prefix, const char* key,
                           const std::string& dflt) {
  if (!sec) return dflt;
  const auto it = sec->find(key);
  if (it == sec->end()) return dflt;
  if (!it->is_string())
    throw SchemaError("key \"" + join_key(prefix, key) + "\" must be a string");
  return it->get<std::string>();
}

inline void require_choice(const std::string& value, const std::string& path,
                           std::initializer_list<const char*> allowed) {
  for (const char* c : allowed)
    if (value == c) return;
  std::string list;
  for (const char* c : allowed) {
    if (!list.empty()) list += ", ";
    list += c;
  }
  throw SchemaError("key \"" + path + "\" must be one of: " + list);
}

}  // namespace detail

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"cert",  "slab-spectrum",    "slab-evolve",
                                                 "modes", "kn-check", "horizon-extremal"};
  return names;
}

// Validates a parsed JSON config against the full schema, fills every default,
// and applies the parameter-domain checks that do not need any computation.
// Unknown or mistyped keys raise SchemaError naming the offending key path;
// out-of-domain values raise RangeError. command_override, when nonempty, is
// the subcommand named on the command line and must agree with any "command"
// key in the file.
inline RunConfig parse_config(const json& root, const std::string& command_override = "") {
  using namespace detail;
  if (!root.is_object()) throw SchemaError("config root must be a JSON object");
  check_keys(root, "",
             {"command", "params", "slab", "numerics", "output", "modes", "wall", "extremal",
              "evolve", "cert", "schema_version"});

  RunConfig cfg;
  {
    std::string from_file = get_str(&root, "", "command", "");
    if (!command_override.empty()) {
      if (!from_file.empty() && from_file != command_override)
        throw SchemaError("config key \"command\" (" + from_file +
                          ") disagrees with the subcommand " + command_override);
      cfg.command = command_override;
    } else {
      cfg.command = from_file;
    }
    if (cfg.command.empty()) throw SchemaError("no command given");
    bool known = false;
    for (const auto& n : command_names()) known = known || n == cfg.command;
    if (!known) throw SchemaError("unknown command \"" + cfg.command + "\"");
  }

  const json* params = section(root, "params");
  if (params) check_keys(*params, "params", {"M", "a", "Q"});
  cfg.params.M = get_num(params, "params", "M", cfg.params.M);
  cfg.params.a = get_num(params, "params", "a", cfg.params.a);
  cfg.params.Q = get_num(params, "params", "Q", cfg.params.Q);
  if (!(cfg.params.M > 0.0)) throw RangeError("params.M must be positive");
  if (cfg.params.a < 0.0) throw RangeError("params.a must be nonnegative");
  if (cfg.params.Q < 0.0) throw RangeError("params.Q must be nonnegative");
  if (cfg.command == "kn-check" || cfg.command == "horizon-extremal") {
    const double M2 = cfg.params.M * cfg.params.M;
    if (cfg.params.a * cfg.params.a + cfg.params.Q * cfg.params.Q > M2 * (1.0 + 1e-12))
      throw RangeError("superextremal parameters: a^2 + Q^2 exceeds M^2");
  }

  const json* slab = section(root, "slab");
  if (slab) check_keys(*slab, "slab", {"r0", "r1", "x0", "x1", "nr", "nx", "m", "flat"});
  cfg.slab.rect.r0 = get_num(slab, "slab", "r0", cfg.slab.rect.r0);
  cfg.slab.rect.r1 = get_num(slab, "slab", "r1", cfg.slab.rect.r1);
  cfg.slab.rect.x0 = get_num(slab, "slab", "x0", cfg.slab.rect.x0);
  cfg.slab.rect.x1 = get_num(slab, "slab", "x1", cfg.slab.rect.x1);
  cfg.slab.nr = static_cast<int>(get_int(slab, "slab", "nr", cfg.slab.nr));
  cfg.slab.nx = static_cast<int>(get_int(slab, "slab", "nx", cfg.slab.nx));
  cfg.slab.m = static_cast<int>(get_int(slab, "slab", "m", cfg.slab.m));
  cfg.slab.flat = get_bool(slab, "slab", "flat", cfg.slab.flat);
  if (!(cfg.slab.rect.r1 > cfg.slab.rect.r0)) throw RangeError("slab needs r1 > r0");
  if (!(cfg.slab.rect.x1 > cfg.slab.rect.x0)) throw RangeError("slab needs x1 > x0");
  if (cfg.slab.nr < 4 || cfg.slab.nx < 4) throw RangeError("slab resolution must be at least 4");
  if (cfg.slab.nr > 4096 || cfg.slab.nx > 4096) throw RangeError("slab resolution cap is 4096");
  if (cfg.slab.m < 0) throw RangeError("slab.m must be nonnegative");

  const json* num = section(root, "numerics");
  if (num)
    check_keys(*num, "numerics", {"resolution", "dt", "tol", "seed", "count", "order", "steps"});
  cfg.numerics.resolution =
      static_cast<int>(get_int(num, "numerics", "resolution", cfg.numerics.resolution));
  cfg.numerics.dt = get_num(num, "numerics", "dt", cfg.numerics.dt);
  cfg.numerics.tol = get_num(num, "numerics", "tol", cfg.numerics.tol);
  {
    const long seed = get_int(num, "numerics", "seed", 0);
    if (seed < 0) throw RangeError("numerics.seed must be nonnegative");
    cfg.numerics.seed = static_cast<std::uint64_t>(seed);
  }
  cfg.numerics.count = static_cast<int>(get_int(num, "numerics", "count", cfg.numerics.count));
  cfg.numerics.order = static_cast<int>(get_int(num, "numerics", "order", cfg.numerics.order));
  cfg.numerics.steps = get_int(num, "numerics", "steps", cfg.numerics.steps);
  if (cfg.numerics.resolution < 5) throw RangeError("numerics.resolution must be at least 5");
  if (cfg.numerics.resolution > 100000) throw RangeError("numerics.resolution cap is 100000");
  if (!(cfg.numerics.dt > 0.0)) throw RangeError("numerics.dt must be positive");
  if (!(cfg.numerics.tol > 0.0)) throw RangeError("numerics.tol must be positive");
  if (cfg.numerics.count < 1) throw RangeError("numerics.count must be positive");
  if (cfg.numerics.order < 1 || cfg.numerics.order > 64)
    throw RangeError("numerics.order must lie in [1, 64]");
  if (cfg.numerics.steps < 1) throw RangeError("numerics.steps must be positive");

  const json* out = section(root, "output");
  if (out) check_keys(*out, "output", {"path", "format"});
  cfg.output.path = get_str(out, "output", "path", "");
  cfg.output.format = get_str(out, "output", "format", cfg.output.format);
  require_choice(cfg.output.format, "output.format", {"csv", "json"});
  if (cfg.output.path.empty())
    cfg.output.path = cfg.command + "." + cfg.output.format;

  const json* modes = section(root, "modes");
  const json* scan = nullptr;
  if (modes) {
    check_keys(*modes, "modes", {"Omega", "bc", "lambda_index", "scan"});
    scan = section(*modes, "scan");
    if (scan) check_keys(*scan, "modes.scan", {"omega0", "omega1", "steps"});
  }
  cfg.modes.Omega = get_num(modes, "modes", "Omega", cfg.modes.Omega);
  cfg.modes.bc = get_str(modes, "modes", "bc", cfg.modes.bc);
  cfg.modes.lambda_index =
      static_cast<int>(get_int(modes, "modes", "lambda_index", cfg.modes.lambda_index));
  cfg.modes.omega0 = get_num(scan, "modes.scan", "omega0", cfg.modes.omega0);
  cfg.modes.omega1 = get_num(scan, "modes.scan", "omega1", cfg.modes.omega1);
  cfg.modes.scan_steps =
      static_cast<int>(get_int(scan, "modes.scan", "steps", cfg.modes.scan_steps));
  require_choice(cfg.modes.bc, "modes.bc", {"neumann", "dirichlet", "regular"});
  if (cfg.modes.lambda_index < 0 || cfg.modes.lambda_index >= cfg.numerics.count)
    throw RangeError("modes.lambda_index must lie in [0, numerics.count)");
  if (cfg.modes.scan_steps < 0) throw RangeError("modes.scan.steps must be nonnegative");
  if (cfg.modes.scan_steps > 0 && !(cfg.modes.omega1 >= cfg.modes.omega0))
    throw RangeError("modes.scan needs omega1 >= omega0");

  const json* wall = section(root, "wall");
  if (wall) check_keys(*wall, "wall", {"R_w"});
  cfg.wall.R_w = get_num(wall, "wall", "R_w", cfg.wall.R_w);
  if (!(cfg.wall.R_w > 0.0)) throw RangeError("wall.R_w must be positive");

  const json* ext = section(root, "extremal");
  if (ext)
    check_keys(*ext, "extremal", {"delta_c", "nth", "profile", "amplitude", "drift_tol"});
  cfg.extremal.delta_c = get_num(ext, "extremal", "delta_c", cfg.extremal.delta_c);
  cfg.extremal.nth = static_cast<int>(get_int(ext, "extremal", "nth", cfg.extremal.nth));
  cfg.extremal.profile = get_str(ext, "extremal", "profile", cfg.extremal.profile);
  cfg.extremal.amplitude = get_num(ext, "extremal", "amplitude", cfg.extremal.amplitude);
  cfg.extremal.drift_tol = get_num(ext, "extremal", "drift_tol", cfg.extremal.drift_tol);
  require_choice(cfg.extremal.profile, "extremal.profile",
                 {"constant", "slope-bump", "zero-bump"});
  if (cfg.extremal.delta_c < 0.0) throw RangeError("extremal.delta_c must be nonnegative");
  if (cfg.extremal.nth < 2) throw RangeError("extremal.nth must be at least 2");
  if (!std::isfinite(cfg.extremal.amplitude))
    throw RangeError("extremal.amplitude must be finite");
  if (!(cfg.extremal.drift_tol > 0.0)) throw RangeError("extremal.drift_tol must be positive");

  const json* evo = section(root, "evolve");
  if (evo) check_keys(*evo, "evolve", {"data", "mode_index", "drift_tol", "accuracy_tol"});
  cfg.evolve.data = get_str(evo, "evolve", "data", cfg.evolve.data);
  cfg.evolve.mode_index =
      static_cast<int>(get_int(evo, "evolve", "mode_index", cfg.evolve.mode_index));
  cfg.evolve.drift_tol = get_num(evo, "evolve", "drift_tol", cfg.evolve.drift_tol);
  cfg.evolve.accuracy_tol = get_num(evo, "evolve", "accuracy_tol", cfg.evolve.accuracy_tol);
  require_choice(cfg.evolve.data, "evolve.data", {"affine", "eigenmode", "random-mean-zero"});
  if (cfg.evolve.mode_index < 0 || cfg.evolve.mode_index > 4096)
    throw RangeError("evolve.mode_index must lie in [0, 4096]");
  if (!(cfg.evolve.drift_tol > 0.0)) throw RangeError("evolve.drift_tol must be positive");
  if (!(cfg.evolve.accuracy_tol > 0.0)) throw RangeError("evolve.accuracy_tol must be positive");

  const json* cert = section(root, "cert");
  if (cert) check_keys(*cert, "cert", {"fault", "symbolic", "spot_points"});
  cfg.cert.fault = get_str(cert, "cert", "fault", cfg.cert.fault);
  cfg.cert.symbolic = get_bool(cert, "cert", "symbolic", cfg.cert.symbolic);
  cfg.cert.spot_points =
      static_cast<int>(get_int(cert, "cert", "spot_points", cfg.cert.spot_points));
  require_choice(cfg.cert.fault, "cert.fault", {"none", "flip-tphi-sign", "shift-rr"});
  if (cfg.cert.spot_points < 0) throw RangeError("cert.spot_points must be nonnegative");
  if (cfg.cert.spot_points > 100000) throw RangeError("cert.spot_points cap is 100000");

  cfg.resolved = {
      {"schema_version", schema_version},
      {"command", cfg.command},
      {"params", {{"M", cfg.params.M}, {"a", cfg.params.a}, {"Q", cfg.params.Q}}},
      {"slab",
       {{"r0", cfg.slab.rect.r0},
        {"r1", cfg.slab.rect.r1},
        {"x0", cfg.slab.rect.x0},
        {"x1", cfg.slab.rect.x1},
        {"nr", cfg.slab.nr},
        {"nx", cfg.slab.nx},
        {"m", cfg.slab.m},
        {"flat", cfg.slab.flat}}},
      {"numerics",
       {{"resolution", cfg.numerics.resolution},
        {"dt", cfg.numerics.dt},
        {"tol", cfg.numerics.tol},
        {"seed", cfg.numerics.seed},
        {"count", cfg.numerics.count},
        {"order", cfg.numerics.order},
        {"steps", cfg.numerics.steps}}},
      {"output", {{"path", cfg.output.path}, {"format", cfg.output.format}}},
      {"modes",
       {{"Omega", cfg.modes.Omega},
        {"bc", cfg.modes.bc},
        {"lambda_index", cfg.modes.lambda_index},
        {"scan",
         {{"omega0", cfg.modes.omega0},
          {"omega1", cfg.modes.omega1},
          {"steps", cfg.modes.scan_steps}}}}},
      {"wall", {{"R_w", cfg.wall.R_w}}},
      {"extremal",
       {{"delta_c", cfg.extremal.delta_c},
        {"nth", cfg.extremal.nth},
        {"profile", cfg.extremal.profile},
        {"amplitude", cfg.extremal.amplitude},
        {"drift_tol", cfg.extremal.drift_tol}}},
      {"evolve",
       {{"data", cfg.evolve.data},
        {"mode_index", cfg.evolve.mode_index},
        {"drift_tol", cfg.evolve.drift_tol},
        {"accuracy_tol", cfg.evolve.accuracy_tol}}},
      {"cert",
       {{"fault", cfg.cert.fault},
        {"symbolic", cfg.cert.symbolic},
        {"spot_points", cfg.cert.spot_points}}},
  };
  return cfg;
}

inline RunConfig parse_config(const std::string& text, const std::string& command_override = "") {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(root, command_override);
}

}  // namespace cli
}  // namespace carterlab
