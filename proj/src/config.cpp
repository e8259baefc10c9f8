#include "config.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "io_util.hpp"

namespace bogolab {

using nlohmann::json;

namespace {
template <typename T>
T take(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}
}  // namespace

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid json: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be an object");

  RunConfig rc;
  rc.d = take(j, "d", rc.d);
  rc.m = take(j, "M", rc.m);
  rc.n = take(j, "N", rc.n);
  rc.hbar = take(j, "hbar", rc.hbar);
  rc.dt = take(j, "dt", rc.dt);
  rc.t_final = take(j, "T", rc.t_final);
  rc.seed = take(j, "seed", rc.seed);
  rc.k_max = take(j, "kmax", rc.k_max);
  rc.stride = take(j, "stride", rc.stride);
  rc.sweep_n = take(j, "sweep_n", rc.sweep_n);
  rc.trials = take(j, "trials", rc.trials);
  rc.j_max = take(j, "jmax", rc.j_max);

  if (j.contains("potential")) {
    const json& p = j.at("potential");
    if (!p.is_object()) throw ConfigError("potential must be an object");
    rc.potential_kind = take<std::string>(p, "kind", rc.potential_kind);
    rc.pot_amp = take(p, "amp", rc.pot_amp);
    rc.pot_sigma = take(p, "sigma", rc.pot_sigma);
    rc.pot_radius = take(p, "radius", rc.pot_radius);
    rc.pot_table = take(p, "values", rc.pot_table);
  }
  if (j.contains("krylov")) {
    const json& p = j.at("krylov");
    rc.krylov.m = take(p, "m", rc.krylov.m);
    rc.krylov.m_max = take(p, "m_max", rc.krylov.m_max);
    rc.krylov.residual_tol = take(p, "residual_tol", rc.krylov.residual_tol);
    rc.krylov.fail_tol = take(p, "fail_tol", rc.krylov.fail_tol);
  }

  if (rc.d < 1 || rc.d > 3) throw ConfigError("d must be 1, 2 or 3");
  if (rc.m < 2) throw ConfigError("M must be at least 2");
  if (rc.n < 2) throw ConfigError("N must be at least 2");
  if (rc.hbar <= 0) throw ConfigError("hbar must be positive");
  if (rc.dt < 0) throw ConfigError("dt must be nonnegative (0 selects the default)");
  if (rc.t_final <= 0) throw ConfigError("T must be positive");
  if (rc.k_max < 0) throw ConfigError("kmax must be nonnegative");
  if (rc.stride < 1) throw ConfigError("stride must be at least 1");
  if (rc.trials < 1) throw ConfigError("trials must be at least 1");
  if (rc.j_max < 1) throw ConfigError("jmax must be at least 1");
  for (int n : rc.sweep_n)
    if (n < 2) throw ConfigError("sweep_n entries must be at least 2");
  if (rc.potential_kind != "gaussian" && rc.potential_kind != "box" &&
      rc.potential_kind != "delta" && rc.potential_kind != "table")
    throw ConfigError("potential.kind must be gaussian, box, delta or table");
  return rc;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string canonical_config_string(const RunConfig& rc) {
  std::ostringstream os;
  os << "d=" << rc.d << ";M=" << rc.m << ";N=" << rc.n << ";hbar=" << format_g17(rc.hbar)
     << ";dt=" << format_g17(rc.dt) << ";T=" << format_g17(rc.t_final)
     << ";pot=" << rc.potential_kind << ";amp=" << format_g17(rc.pot_amp)
     << ";sigma=" << format_g17(rc.pot_sigma) << ";radius=" << format_g17(rc.pot_radius)
     << ";table=";
  for (double v : rc.pot_table) os << format_g17(v) << ",";
  os << ";seed=" << rc.seed << ";kmax=" << rc.k_max << ";stride=" << rc.stride
     << ";krylov=" << rc.krylov.m << "," << rc.krylov.m_max << ","
     << format_g17(rc.krylov.residual_tol) << "," << format_g17(rc.krylov.fail_tol)
     << ";sweep_n=";
  for (int n : rc.sweep_n) os << n << ",";
  os << ";trials=" << rc.trials << ";jmax=" << rc.j_max;
  return os.str();
}

Lattice lattice_of(const RunConfig& rc) { return Lattice::make(rc.d, rc.m); }

Potential potential_of(const RunConfig& rc, const Lattice& lat) {
  if (rc.potential_kind == "gaussian") return Potential::gaussian(lat, rc.pot_amp, rc.pot_sigma);
  if (rc.potential_kind == "box") return Potential::box(lat, rc.pot_amp, rc.pot_radius);
  if (rc.potential_kind == "delta") return Potential::delta(lat, rc.pot_amp);
  if (rc.potential_kind == "table") {
    if (static_cast<int>(rc.pot_table.size()) != lat.site_count)
      throw ConfigError("potential.values must list one entry per site");
    Eigen::VectorXd v(lat.site_count);
    for (int i = 0; i < lat.site_count; ++i) v[i] = rc.pot_table[i];
    return Potential::from_values(lat, v);
  }
  throw ConfigError("unknown potential kind");
}

ModelParams params_of(const RunConfig& rc, const Lattice& lat, const Potential& v) {
  double dt = rc.dt;
  double rho = double(rc.n) / double(lat.site_count);
  if (dt == 0) dt = default_dt(lat, rc.n, rho, rc.hbar, v);
  // integer step count covering T exactly
  int steps = std::max(1, static_cast<int>(std::ceil(rc.t_final / dt - 1e-12)));
  dt = rc.t_final / steps;
  return ModelParams::for_lattice(lat, rc.n, rc.hbar, dt, rc.t_final);
}

}  // namespace bogolab
