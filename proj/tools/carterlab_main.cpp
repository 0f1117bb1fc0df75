#include <CLI11.hpp>

#include <carterlab/runner.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>

namespace {

using carterlab::cli::json;

struct Flags {
  std::string config, out, format, fault, data, profile, bc;
  double M = std::nan(""), a = std::nan(""), Q = std::nan("");
  double dt = std::nan(""), tol = std::nan(""), Omega = std::nan(""), R_w = std::nan("");
  long long steps = -1, seed = -1, resolution = -1, count = -1, spot = -1, m = -1;
  bool scan = false;
};

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream f(path);
  if (!f) throw carterlab::SchemaError("cannot read config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  json root;
  try {
    root = json::parse(ss.str());
  } catch (const json::exception& e) {
    throw carterlab::SchemaError("config file " + path + " is not valid JSON: " + e.what());
  }
  return root;
}

// Command-line flags never add new meaning; each one writes through to the
// config key it names, then the merged document goes through normal validation.
void merge_flags(json& root, const Flags& f) {
  const auto set_num = [&root](const char* sec, const char* key, double v) {
    if (!std::isnan(v)) root[sec][key] = v;
  };
  const auto set_int = [&root](const char* sec, const char* key, long long v) {
    if (v >= 0) root[sec][key] = v;
  };
  const auto set_str = [&root](const char* sec, const char* key, const std::string& v) {
    if (!v.empty()) root[sec][key] = v;
  };
  set_num("params", "M", f.M);
  set_num("params", "a", f.a);
  set_num("params", "Q", f.Q);
  set_num("numerics", "dt", f.dt);
  set_num("numerics", "tol", f.tol);
  set_int("numerics", "steps", f.steps);
  set_int("numerics", "seed", f.seed);
  set_int("numerics", "resolution", f.resolution);
  set_int("numerics", "count", f.count);
  set_int("slab", "m", f.m);
  set_str("output", "path", f.out);
  set_str("output", "format", f.format);
  set_str("cert", "fault", f.fault);
  set_int("cert", "spot_points", f.spot);
  set_str("evolve", "data", f.data);
  set_str("extremal", "profile", f.profile);
  set_str("modes", "bc", f.bc);
  set_num("modes", "Omega", f.Omega);
  set_num("wall", "R_w", f.R_w);
  if (f.scan && !root["modes"].contains("scan")) root["modes"]["scan"] = {{"steps", 11}};
  if (f.scan && !root["modes"]["scan"].contains("steps")) root["modes"]["scan"]["steps"] = 11;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"carterlab: certified diagnostics for the Carter metric family"};
  app.require_subcommand(1);

  Flags f;
  static const struct {
    const char* name;
    const char* desc;
  } cmds[] = {
      {"cert", "symbolic curvature certificate with optional exact spot checks"},
      {"slab-spectrum", "lowest slab tones of the weighted form"},
      {"slab-evolve", "midpoint evolution with conservation and accuracy gates"},
      {"modes", "separated angular tones, radial wronskian, horizon exponents"},
      {"kn-check", "horizon constants, wall sign identity, jordan profile"},
      {"horizon-extremal", "conserved horizon charge on an extremal collar"},
  };
  for (const auto& c : cmds) {
    CLI::App* sub = app.add_subcommand(c.name, c.desc);
    sub->add_option("--config", f.config, "JSON config file");
    sub->add_option("--out", f.out, "output path (default <command>.<format>)");
    sub->add_option("--format", f.format, "csv or json");
    sub->add_option("--seed", f.seed, "deterministic seed");
    sub->add_option("--steps", f.steps, "time steps");
    sub->add_option("--dt", f.dt, "time step size");
    sub->add_option("--tol", f.tol, "solver tolerance");
    sub->add_option("--resolution", f.resolution, "radial sample count");
    sub->add_option("--count", f.count, "eigenvalue count");
    sub->add_option("--M", f.M, "mass");
    sub->add_option("--a", f.a, "spin");
    sub->add_option("--Q", f.Q, "charge");
    if (std::string(c.name) == "cert") {
      sub->add_option("--fault", f.fault, "none, flip-tphi-sign, or shift-rr");
      sub->add_option("--spot", f.spot, "exact spot-check point count");
    }
    if (std::string(c.name) == "modes") {
      sub->add_flag("--scan", f.scan, "grid the angular tones over a frequency window");
      sub->add_option("--Omega", f.Omega, "mode frequency");
      sub->add_option("--bc", f.bc, "neumann, dirichlet, or regular");
      sub->add_option("--m", f.m, "azimuthal number");
    }
    if (std::string(c.name) == "slab-spectrum" || std::string(c.name) == "slab-evolve")
      sub->add_option("--m", f.m, "azimuthal number");
    if (std::string(c.name) == "slab-evolve")
      sub->add_option("--data", f.data, "affine, eigenmode, or random-mean-zero");
    if (std::string(c.name) == "kn-check") sub->add_option("--Rw", f.R_w, "wall radius");
    if (std::string(c.name) == "horizon-extremal")
      sub->add_option("--profile", f.profile, "constant, slope-bump, or zero-bump");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    json root = load_config(f.config);
    if (!root.is_object())
      throw carterlab::SchemaError("config root must be a JSON object");
    merge_flags(root, f);
    const std::string sub = app.get_subcommands().front()->get_name();
    const carterlab::cli::RunConfig cfg = carterlab::cli::parse_config(root, sub);
    return carterlab::cli::run_config(cfg);
  } catch (const carterlab::Error& e) {
    std::cerr << "[carterlab] error: " << e.what() << "\n";
    return static_cast<int>(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "[carterlab] unexpected failure: " << e.what() << "\n";
    return 3;
  }
}
