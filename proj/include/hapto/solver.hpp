#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hapto/core.hpp"
#include "hapto/diagnostics.hpp"
#include "hapto/mesh.hpp"
#include "hapto/model.hpp"
#include "hapto/state.hpp"

namespace hapto {

/// How the per-edge diffusion coefficient combines the two cell values.
enum class EdgeMean { Arithmetic, Harmonic };

struct SolverOptions {
  double dt_max = 0.1;  // upper cap for adaptive time steps, in days
  EdgeMean diffusion_mean = EdgeMean::Arithmetic;
};

/// Guarded per-component difference quotient across an interior edge:
/// g_x = (f_j - f_i)/|x_j - x_i| (zero when the offset component is below
/// the guard), likewise g_y. Antisymmetric under swapping the two cells.
Vec2 edge_gradient(const TriMesh& mesh, const CellField& f, int edge_index);

/// Upwind flux of the linear edge flux u -> u (V . n): picks the left value
/// when V . n > 0, the right value when V . n < 0, zero otherwise. Agrees
/// exactly with the two-branch min/max definition over [c_i, c_j].
double godunov_edge_flux(double c_i, double c_j, Vec2 velocity, Vec2 normal);

/// Per-step summary handed to an observer during run().
struct StepStats {
  long step = 0;
  double t = 0.0;   // time after the step
  double dt = 0.0;
  double min_c = 0.0, max_c = 0.0, min_v = 0.0, max_v = 0.0;
  double adv_mass_rel_change = 0.0;  // advection stage only
};
using StepObserver = std::function<void(const StepStats&)>;

struct RunSchedule {
  double t_end = 0.0;
  std::vector<double> snapshot_times;  // sorted ascending
  bool adaptive = true;
  double cfl_safety = 0.45;  // in (0, 1]
  double dt_fixed = 0.0;     // used when adaptive == false
  double c_tol = 1e-6;
  Vec2 front_center{0.5, 0.5};
  long max_steps = 200'000'000;
};

struct Snapshot {
  double t_requested = 0.0;
  SimState state;
  DiagnosticsRecord diag;
};

struct RunResult {
  std::vector<Snapshot> snapshots;
  SimState last_state;
  long steps = 0;
  std::optional<std::string> error;  // set when a sub-step refused or aborted
};

/// Operator-splitting integrator: upwind haptotactic advection, explicit
/// diffusion-reaction update, and one-step marching of the tissue field.
///
/// Edge-normal derivatives inside the fluxes use the two-point projection
/// (f_j - f_i) (d . n) / |d|^2 along the centroid offset d. Unlike the raw
/// per-component quotient (see edge_gradient), this is uniformly bounded
/// by |f_j - f_i| / |d| and its transfer coefficient is positive, so the
/// CFL bounds of compute_dt genuinely guarantee positivity.
///
/// Holds per-edge geometry caches; one instance per mesh/parameter set.
/// Instances are not safe for concurrent use (internal scratch buffers).
class Solver {
 public:
  Solver(const TriMesh& mesh, ModelParams params, SolverOptions opts = {});

  const TriMesh& mesh() const { return mesh_; }
  const ModelParams& params() const { return params_; }
  const SolverOptions& options() const { return opts_; }

  /// Largest admissible step below dt_max satisfying the advective CFL
  /// bound, the diffusive stability bound, and the reaction positivity
  /// bound, each scaled by cfl_safety.
  double compute_dt(const SimState& state, double cfl_safety) const;

  /// Advection stage c -> c*. Conserves total mass exactly up to roundoff
  /// (boundary edges carry zero flux) and preserves positivity under the
  /// CFL bound; refuses steps that violate it, naming the edge.
  CellField advection_step(const SimState& state, double dt) const;

  /// Diffusion-reaction stage c* -> c^{k+1}, using the tissue field of the
  /// incoming state. Refuses unstable steps; aborts on non-finite values,
  /// naming the cell.
  CellField diffusion_reaction_step(const SimState& state,
                                    const CellField& c_star, double dt) const;

  /// Tissue update from the incoming state's c. Degenerate/nondegenerate:
  /// explicit logistic-degradation marching (cells at v = 0 stay exactly
  /// 0). Regularized: advances arctan(sqrt(v)) with an added eps1
  /// Laplacian, then inverts.
  CellField ode_step_v(const SimState& state, double dt) const;

  /// One full split step; advances t by dt.
  SimState step(const SimState& state, double dt) const;

  /// Marches from `initial` until t >= t_end, emitting a snapshot at the
  /// first state whose time reaches each requested snapshot time. On a
  /// sub-step error the run stops and returns the last good state together
  /// with the error message.
  RunResult run(const SimState& initial, const RunSchedule& sched,
                const StepObserver& observer = {}) const;

  /// Haptotactic drift at an edge; zero on boundary edges.
  Vec2 edge_velocity(const SimState& state, int edge_index) const;

 private:
  struct EdgeGeom {
    int left, right;
    double len;
    double proj;      // (centroid offset . normal) / dist^2, in (0, 1/dist]
    double adv_geom;  // len / min(area_l, area_r)
    double dif_geom;  // len / (dist * min(area_l, area_r))
  };

  void check_state(const SimState& state) const;
  void cell_coefficients(const CellField& c, const CellField& v) const;
  // Fills ws_.a with per-interior-edge upwind speeds; returns max |a|*geom.
  double edge_speeds(const CellField& v) const;
  double reaction_denominator(double max_c) const;
  double max_diffusive_ratio(const CellField& c, const CellField& v) const;
  CellField apply_advection(const CellField& c, double dt) const;
  CellField apply_diffusion_reaction(const CellField& c_star,
                                     const CellField& v, double dt) const;
  CellField apply_ode_v(const CellField& c, const CellField& v, double dt) const;
  void clamp_c(CellField& c) const;
  void clamp_v(CellField& v) const;

  const TriMesh& mesh_;
  ModelParams params_;
  SolverOptions opts_;
  std::vector<EdgeGeom> iedges_;  // interior edges, ascending edge index
  std::vector<double> inv_area_;
  double max_dif_geom_ = 0.0;

  struct Workspace {
    std::vector<double> a;    // upwind speed per interior edge
    std::vector<double> chi;  // haptotactic sensitivity per cell
    std::vector<double> dc;   // diffusion coefficient per cell
  };
  mutable Workspace ws_;
  mutable std::vector<double> ws_psi_;  // regularized tissue route scratch
  mutable std::vector<double> ws_lap_;
};

}  // namespace hapto
