#pragma once

#include <string>
#include <vector>

#include "hapto/config.hpp"
#include "hapto/mesh.hpp"
#include "hapto/solver.hpp"

namespace hapto {

TriMesh make_mesh(const MeshSource& src);
SimState make_initial_state(const TriMesh& mesh, const RunConfig& cfg);
Solver make_solver(const TriMesh& mesh, const RunConfig& cfg);

struct RunArtifacts {
  RunResult result;
  std::vector<std::string> snapshot_paths;
  std::string diagnostics_path;
};

/// Executes one configured run on `mesh` and writes one snapshot CSV per
/// snapshot plus a diagnostics CSV into `out_dir` (created if missing).
/// Identical configs and meshes give byte-identical files.
RunArtifacts execute_run(const RunConfig& cfg, const TriMesh& mesh,
                         const std::string& out_dir,
                         const StepObserver& observer = {});

struct CompareRow {
  double t_requested = 0.0;
  double t_deg = 0.0, t_nondeg = 0.0;
  double mass_deg = 0.0, mass_nondeg = 0.0;
  double support_deg = 0.0, support_nondeg = 0.0;
  double mean_v_deg = 0.0, mean_v_nondeg = 0.0;
};

struct CompareOutput {
  std::vector<CompareRow> rows;  // one per snapshot time
  std::string csv_path;
};

/// Runs the degenerate and nondegenerate variants on the same mesh and
/// initial fields, writes per-variant outputs plus a joined diagnostics
/// CSV, and returns the per-snapshot comparison rows.
CompareOutput run_compare(const RunConfig& cfg, const std::string& out_dir);

struct EpsStudyRow {
  double eps = 0.0;
  double t_requested = 0.0;
  double l1_c = 0.0;  // L1 distance of c to the degenerate baseline
};

struct EpsStudyOutput {
  std::vector<EpsStudyRow> rows;
  std::string csv_path;
};

/// Runs a regularized-variant ladder eps1 = eps2 = eps against a degenerate
/// baseline on the same mesh and initial fields; reports the L1 distance
/// of the tumor field per snapshot.
EpsStudyOutput run_eps_study(const RunConfig& cfg,
                             const std::vector<double>& eps_list,
                             const std::string& out_dir);

double l1_distance(const TriMesh& mesh, const CellField& a, const CellField& b);

}  // namespace hapto
