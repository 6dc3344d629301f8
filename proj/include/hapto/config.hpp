#pragma once

#include <cstdint>
#include <string>

#include "hapto/initial.hpp"
#include "hapto/model.hpp"
#include "hapto/solver.hpp"

namespace hapto {

/// Where the mesh comes from: generated on the unit square or loaded from
/// a mesh file. Exactly one of the two.
struct MeshSource {
  bool generate = true;
  double h = 0.05;
  std::uint64_t seed = 0;
  int relax_iters = 100;
  std::string file;
};

/// One full experiment description. Parsed from a JSON file with sections
/// mesh, model, initial_c, initial_v, time and output; unknown keys are
/// rejected so misspelled settings cannot pass silently.
struct RunConfig {
  MeshSource mesh;
  ModelParams model;
  InitSpec initial_c;
  InitSpec initial_v;
  RunSchedule schedule;
  double dt_max = 0.1;
  EdgeMean diffusion_mean = EdgeMean::Arithmetic;
  std::string output_dir = "out";

  void validate() const;
};

RunConfig load_config(const std::string& path);
void save_config(const RunConfig& cfg, const std::string& path);

}  // namespace hapto
