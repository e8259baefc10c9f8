#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "krylov.hpp"
#include "model.hpp"

namespace bogolab {

struct RunConfig {
  int d = 1;
  int m = 4;
  int n = 4;
  double hbar = 1.0;
  double dt = 0.0;  // 0 requests the stability-based default
  double t_final = 1.0;
  std::string potential_kind = "gaussian";
  double pot_amp = 1.0;
  double pot_sigma = 1.0;
  double pot_radius = 1.0;
  std::vector<double> pot_table;
  std::uint64_t seed = 1;
  int k_max = 6;
  int stride = 1;
  KrylovOptions krylov;
  std::vector<int> sweep_n;  // particle numbers for the sweep subcommands
  int trials = 16;           // fuzz repetitions
  int j_max = 3;             // envelope orders
};

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config_file(const std::string& path);

// stable key-ordered serialization, input to the manifest hash
std::string canonical_config_string(const RunConfig& rc);

Lattice lattice_of(const RunConfig& rc);
Potential potential_of(const RunConfig& rc, const Lattice& lat);
ModelParams params_of(const RunConfig& rc, const Lattice& lat, const Potential& v);

}  // namespace bogolab
