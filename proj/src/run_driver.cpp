#include "hapto/run_driver.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "hapto/diagnostics.hpp"
#include "hapto/distmesh.hpp"
#include "hapto/snapshot_io.hpp"

namespace hapto {

namespace fs = std::filesystem;

TriMesh make_mesh(const MeshSource& src) {
  if (src.generate)
    return generate_unit_square_mesh(src.h, src.relax_iters, src.seed);
  return read_mesh(src.file);
}

SimState make_initial_state(const TriMesh& mesh, const RunConfig& cfg) {
  SimState state;
  state.t = 0.0;
  state.c = build_field(mesh, cfg.initial_c);
  state.v = build_field(mesh, cfg.initial_v);
  for (int i = 0; i < mesh.n_cells(); ++i) {
    if (!(state.c[i] >= 0.0))
      throw Error("initial c is negative in cell " + std::to_string(i));
    if (!(state.v[i] >= 0.0 && state.v[i] <= 1.0))
      throw Error("initial v lies outside [0,1] in cell " + std::to_string(i));
  }
  return state;
}

Solver make_solver(const TriMesh& mesh, const RunConfig& cfg) {
  SolverOptions opts;
  opts.dt_max = cfg.dt_max;
  opts.diffusion_mean = cfg.diffusion_mean;
  return Solver(mesh, cfg.model, opts);
}

RunArtifacts execute_run(const RunConfig& cfg, const TriMesh& mesh,
                         const std::string& out_dir,
                         const StepObserver& observer) {
  fs::create_directories(out_dir);
  const Solver solver = make_solver(mesh, cfg);
  const SimState initial = make_initial_state(mesh, cfg);

  RunArtifacts art;
  art.result = solver.run(initial, cfg.schedule, observer);

  std::vector<DiagnosticsRecord> diags;
  for (size_t k = 0; k < art.result.snapshots.size(); ++k) {
    const Snapshot& snap = art.result.snapshots[k];
    char idx[16];
    std::snprintf(idx, sizeof(idx), "%02zu", k);
    const std::string path = (fs::path(out_dir) /
                              ("snapshot_" + std::string(idx) + "_t" +
                               format_g17(snap.state.t) + ".csv"))
                                 .string();
    write_snapshot(mesh, snap.state, path);
    art.snapshot_paths.push_back(path);
    diags.push_back(snap.diag);
  }
  art.diagnostics_path = (fs::path(out_dir) / "diagnostics.csv").string();
  write_diagnostics_csv(art.diagnostics_path, diags);
  return art;
}

double l1_distance(const TriMesh& mesh, const CellField& a,
                   const CellField& b) {
  if (a.size() != b.size())
    throw Error("L1 distance requires fields on the same mesh");
  double d = 0.0;
  for (int i = 0; i < mesh.n_cells(); ++i)
    d += mesh.cell_areas[i] * std::abs(a[i] - b[i]);
  return d;
}

CompareOutput run_compare(const RunConfig& cfg, const std::string& out_dir) {
  fs::create_directories(out_dir);
  const TriMesh mesh = make_mesh(cfg.mesh);

  RunConfig deg = cfg;
  deg.model.variant = ModelVariant::Degenerate;
  RunConfig nondeg = cfg;
  nondeg.model.variant = ModelVariant::Nondegenerate;

  const RunArtifacts a_deg =
      execute_run(deg, mesh, (fs::path(out_dir) / "degenerate").string());
  const RunArtifacts a_non =
      execute_run(nondeg, mesh, (fs::path(out_dir) / "nondegenerate").string());
  if (a_deg.result.error)
    throw Error("degenerate member run failed: " + *a_deg.result.error);
  if (a_non.result.error)
    throw Error("nondegenerate member run failed: " + *a_non.result.error);
  if (a_deg.result.snapshots.size() != a_non.result.snapshots.size())
    throw Error("compare members produced different snapshot counts");

  CompareOutput out;
  for (size_t k = 0; k < a_deg.result.snapshots.size(); ++k) {
    const Snapshot& sd = a_deg.result.snapshots[k];
    const Snapshot& sn = a_non.result.snapshots[k];
    CompareRow row;
    row.t_requested = sd.t_requested;
    row.t_deg = sd.state.t;
    row.t_nondeg = sn.state.t;
    row.mass_deg = sd.diag.mass_c;
    row.mass_nondeg = sn.diag.mass_c;
    row.support_deg = sd.diag.support_fraction_c;
    row.support_nondeg = sn.diag.support_fraction_c;
    row.mean_v_deg = field_mean(mesh, sd.state.v);
    row.mean_v_nondeg = field_mean(mesh, sn.state.v);
    out.rows.push_back(row);
  }

  out.csv_path = (fs::path(out_dir) / "compare.csv").string();
  std::ofstream csv(out.csv_path);
  if (!csv) throw Error("cannot open " + out.csv_path + " for writing");
  csv << "t,mass_c_degenerate,mass_c_nondegenerate,"
         "support_fraction_c_degenerate,support_fraction_c_nondegenerate,"
         "mean_v_degenerate,mean_v_nondegenerate\n";
  for (const CompareRow& r : out.rows) {
    csv << format_g17(r.t_requested) << ',' << format_g17(r.mass_deg) << ','
        << format_g17(r.mass_nondeg) << ',' << format_g17(r.support_deg) << ','
        << format_g17(r.support_nondeg) << ',' << format_g17(r.mean_v_deg)
        << ',' << format_g17(r.mean_v_nondeg) << "\n";
  }
  return out;
}

EpsStudyOutput run_eps_study(const RunConfig& cfg,
                             const std::vector<double>& eps_list,
                             const std::string& out_dir) {
  if (eps_list.empty()) throw Error("eps study requires a non-empty eps list");
  for (double e : eps_list)
    if (!(e > 0.0 && e < 1.0))
      throw Error("eps values must lie in (0,1), got " + std::to_string(e));

  fs::create_directories(out_dir);
  const TriMesh mesh = make_mesh(cfg.mesh);

  RunConfig deg = cfg;
  deg.model.variant = ModelVariant::Degenerate;
  const RunArtifacts base =
      execute_run(deg, mesh, (fs::path(out_dir) / "degenerate").string());
  if (base.result.error)
    throw Error("degenerate baseline run failed: " + *base.result.error);

  EpsStudyOutput out;
  for (double eps : eps_list) {
    RunConfig reg = cfg;
    reg.model.variant = ModelVariant::Regularized;
    reg.model.eps1 = eps;
    reg.model.eps2 = eps;
    reg.model.validate();
    const RunArtifacts art = execute_run(
        reg, mesh, (fs::path(out_dir) / ("eps_" + format_g17(eps))).string());
    if (art.result.error)
      throw Error("regularized run at eps=" + format_g17(eps) +
                  " failed: " + *art.result.error);
    if (art.result.snapshots.size() != base.result.snapshots.size())
      throw Error("eps study members produced different snapshot counts");
    for (size_t k = 0; k < art.result.snapshots.size(); ++k) {
      EpsStudyRow row;
      row.eps = eps;
      row.t_requested = art.result.snapshots[k].t_requested;
      row.l1_c = l1_distance(mesh, art.result.snapshots[k].state.c,
                             base.result.snapshots[k].state.c);
      out.rows.push_back(row);
    }
  }

  out.csv_path = (fs::path(out_dir) / "eps_study.csv").string();
  std::ofstream csv(out.csv_path);
  if (!csv) throw Error("cannot open " + out.csv_path + " for writing");
  csv << "eps,t,l1_c\n";
  for (const EpsStudyRow& r : out.rows)
    csv << format_g17(r.eps) << ',' << format_g17(r.t_requested) << ','
        << format_g17(r.l1_c) << "\n";
  return out;
}

}  // namespace hapto
