#include "hapto/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hapto {

namespace {

constexpr double kPiQuarter = 0.78539816339744830962;
// Hard stability gates allow a whisker of roundoff above 1.
constexpr double kHardBound = 1.0 + 1e-9;

double edge_mean(EdgeMean mode, double a, double b) {
  if (mode == EdgeMean::Arithmetic) return 0.5 * (a + b);
  const double s = a + b;
  return s > 0.0 ? 2.0 * a * b / s : 0.0;
}

}  // namespace

Vec2 edge_gradient(const TriMesh& mesh, const CellField& f, int edge_index) {
  const Edge& e = mesh.edges[edge_index];
  if (!e.interior())
    throw Error("edge_gradient requires an interior edge, got boundary edge " +
                std::to_string(edge_index));
  const int i = e.cell_left, j = e.cell_right;
  const Vec2 d = mesh.cell_centroids[j] - mesh.cell_centroids[i];
  const double guard = kGradGuardScale * mesh.domain_diameter();
  const double df = f[j] - f[i];
  Vec2 g{0.0, 0.0};
  if (std::abs(d.x) > guard) g.x = df / std::abs(d.x);
  if (std::abs(d.y) > guard) g.y = df / std::abs(d.y);
  return g;
}

double godunov_edge_flux(double c_i, double c_j, Vec2 velocity, Vec2 normal) {
  const double a = dot(velocity, normal);
  if (a > 0.0) return a * c_i;
  if (a < 0.0) return a * c_j;
  return 0.0;
}

Solver::Solver(const TriMesh& mesh, ModelParams params, SolverOptions opts)
    : mesh_(mesh), params_(params), opts_(opts) {
  params_.validate();
  if (!(opts_.dt_max > 0.0)) throw Error("dt_max must be positive");

  const int n = mesh_.n_cells();
  inv_area_.resize(n);
  for (int i = 0; i < n; ++i) inv_area_[i] = 1.0 / mesh_.cell_areas[i];

  const double guard = kGradGuardScale * mesh_.domain_diameter();
  for (int k = 0; k < mesh_.n_edges(); ++k) {
    const Edge& e = mesh_.edges[k];
    if (!e.interior()) continue;
    EdgeGeom g;
    g.left = e.cell_left;
    g.right = e.cell_right;
    g.len = e.length;
    const Vec2 d = mesh_.cell_centroids[g.right] - mesh_.cell_centroids[g.left];
    const double dist = norm(d);
    g.proj = dist > guard ? dot(d, e.normal) / (dist * dist) : 0.0;
    const double min_area =
        std::min(mesh_.cell_areas[g.left], mesh_.cell_areas[g.right]);
    g.adv_geom = g.len / min_area;
    g.dif_geom = dist > 0.0 ? g.len / (dist * min_area)
                            : std::numeric_limits<double>::infinity();
    max_dif_geom_ = std::max(max_dif_geom_, g.dif_geom);
    iedges_.push_back(g);
  }

  ws_.a.resize(iedges_.size());
  ws_.chi.resize(n);
  ws_.dc.resize(n);
}

void Solver::check_state(const SimState& state) const {
  const int n = mesh_.n_cells();
  if (static_cast<int>(state.c.size()) != n ||
      static_cast<int>(state.v.size()) != n)
    throw Error("state field sizes do not match mesh cell count");
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(state.c[i]) || !std::isfinite(state.v[i]))
      throw Error("non-finite state value in cell " + std::to_string(i));
  }
}

void Solver::cell_coefficients(const CellField& c, const CellField& v) const {
  const int n = mesh_.n_cells();
  const double kc = params_.kappa_c;
  const double kv = params_.kappa_v;
  switch (params_.variant) {
    case ModelVariant::Degenerate:
      for (int i = 0; i < n; ++i) {
        const double vc = v[i] * c[i];
        ws_.dc[i] = kc * vc / (1.0 + vc);
        const double w = 1.0 + v[i];
        ws_.chi[i] = kv / (w * w);
      }
      break;
    case ModelVariant::Nondegenerate:
      for (int i = 0; i < n; ++i) {
        ws_.dc[i] = kc / (1.0 + v[i] * c[i]);
        const double w = 1.0 + v[i];
        ws_.chi[i] = kv / (w * w);
      }
      break;
    case ModelVariant::Regularized:
      for (int i = 0; i < n; ++i) {
        const double vc = v[i] * c[i];
        ws_.dc[i] = params_.eps2 + kc * vc / (1.0 + vc);
        const double w = 1.0 + v[i];
        ws_.chi[i] = kv / (w * w);
      }
      break;
  }
}

double Solver::edge_speeds(const CellField& v) const {
  double max_ratio = 0.0;
  const int ne = static_cast<int>(iedges_.size());
  for (int k = 0; k < ne; ++k) {
    const EdgeGeom& g = iedges_[k];
    const double dv = v[g.right] - v[g.left];
    const double a =
        0.5 * (ws_.chi[g.left] + ws_.chi[g.right]) * dv * g.proj;
    ws_.a[k] = a;
    max_ratio = std::max(max_ratio, std::abs(a) * g.adv_geom);
  }
  return max_ratio;
}

double Solver::reaction_denominator(double max_c) const {
  return params_.mu_c * (1.0 + params_.eta + max_c) + params_.lambda * max_c +
         params_.mu_v;
}

double Solver::max_diffusive_ratio(const CellField& c, const CellField& v)
    const {
  cell_coefficients(c, v);
  double max_ratio = 0.0;
  for (const EdgeGeom& g : iedges_) {
    const double de =
        edge_mean(opts_.diffusion_mean, ws_.dc[g.left], ws_.dc[g.right]);
    max_ratio = std::max(max_ratio, de * g.dif_geom);
  }
  return max_ratio;
}

double Solver::compute_dt(const SimState& state, double cfl_safety) const {
  if (!(cfl_safety > 0.0) || cfl_safety > 1.0)
    throw Error("cfl_safety must lie in (0, 1]");
  check_state(state);

  cell_coefficients(state.c, state.v);
  double max_c = 0.0;
  for (double ci : state.c) max_c = std::max(max_c, ci);

  const double max_adv = edge_speeds(state.v);

  double max_dif = 0.0;
  for (const EdgeGeom& g : iedges_) {
    const double de =
        edge_mean(opts_.diffusion_mean, ws_.dc[g.left], ws_.dc[g.right]);
    max_dif = std::max(max_dif, de * g.dif_geom);
  }
  // The regularized tissue update diffuses psi(v) explicitly with
  // coefficient eps1, which must obey the same stability bound.
  if (params_.variant == ModelVariant::Regularized)
    max_dif = std::max(max_dif, params_.eps1 * max_dif_geom_);

  double dt = opts_.dt_max;
  if (max_adv > 0.0) dt = std::min(dt, cfl_safety / (3.0 * max_adv));
  if (max_dif > 0.0) dt = std::min(dt, cfl_safety / (3.0 * max_dif));
  const double denom = reaction_denominator(max_c);
  if (denom > 0.0) dt = std::min(dt, cfl_safety / denom);

  if (!(dt > 0.0) || !std::isfinite(dt))
    throw Error("time step collapsed to " + std::to_string(dt));
  return dt;
}

CellField Solver::apply_advection(const CellField& c, double dt) const {
  CellField cs = c;
  const int ne = static_cast<int>(iedges_.size());
  for (int k = 0; k < ne; ++k) {
    const EdgeGeom& g = iedges_[k];
    const double a = ws_.a[k];
    const double upwind = a > 0.0 ? c[g.left] : c[g.right];
    const double flux = g.len * a * upwind;
    cs[g.left] -= dt * inv_area_[g.left] * flux;
    cs[g.right] += dt * inv_area_[g.right] * flux;
  }
  return cs;
}

CellField Solver::advection_step(const SimState& state, double dt) const {
  check_state(state);
  if (!(dt > 0.0)) throw Error("advection step requires dt > 0");
  cell_coefficients(state.c, state.v);
  const double max_ratio = edge_speeds(state.v);
  if (dt * 3.0 * max_ratio > kHardBound) {
    size_t worst = 0;
    double worst_ratio = 0.0;
    for (size_t k = 0; k < iedges_.size(); ++k) {
      const double r = std::abs(ws_.a[k]) * iedges_[k].adv_geom;
      if (r > worst_ratio) {
        worst_ratio = r;
        worst = k;
      }
    }
    const EdgeGeom& g = iedges_[worst];
    throw Error("advective CFL violated: dt=" + std::to_string(dt) +
                " exceeds the bound on the edge between cells " +
                std::to_string(g.left) + " and " + std::to_string(g.right));
  }
  CellField cs = apply_advection(state.c, dt);
  clamp_c(cs);
  return cs;
}

CellField Solver::apply_diffusion_reaction(const CellField& c_star,
                                           const CellField& v,
                                           double dt) const {
  const int n = mesh_.n_cells();
  const double mu_c = params_.mu_c;
  const double eta = params_.eta;
  const bool regularized = params_.variant == ModelVariant::Regularized;

  cell_coefficients(c_star, v);

  double max_c = 0.0;
  CellField cn(n);
  for (int i = 0; i < n; ++i) {
    const double ci = c_star[i];
    max_c = std::max(max_c, ci);
    double r = mu_c * ci * (1.0 - ci - eta * v[i]);
    if (regularized) r -= params_.eps1 * std::pow(ci, params_.theta);
    cn[i] = ci + dt * r;
  }

  // Positivity gate for the explicit reaction update.
  double decay = mu_c * (max_c + eta);
  if (regularized && max_c > 0.0)
    decay += params_.eps1 * std::pow(max_c, params_.theta - 1.0);
  if (dt * decay > kHardBound)
    throw Error("reaction positivity bound violated: dt=" + std::to_string(dt) +
                " with max c=" + std::to_string(max_c));

  double max_ratio = 0.0;
  const int ne = static_cast<int>(iedges_.size());
  for (int k = 0; k < ne; ++k) {
    const EdgeGeom& g = iedges_[k];
    const double de =
        edge_mean(opts_.diffusion_mean, ws_.dc[g.left], ws_.dc[g.right]);
    max_ratio = std::max(max_ratio, de * g.dif_geom);
    const double dq = c_star[g.right] - c_star[g.left];
    const double flux = g.len * de * dq * g.proj;
    cn[g.left] += dt * inv_area_[g.left] * flux;
    cn[g.right] -= dt * inv_area_[g.right] * flux;
  }
  if (dt * 3.0 * max_ratio > kHardBound)
    throw Error("diffusive stability bound violated: dt=" + std::to_string(dt) +
                " against max edge ratio " + std::to_string(max_ratio));
  return cn;
}

CellField Solver::diffusion_reaction_step(const SimState& state,
                                          const CellField& c_star,
                                          double dt) const {
  check_state(state);
  if (static_cast<int>(c_star.size()) != mesh_.n_cells())
    throw Error("c* size does not match mesh cell count");
  if (!(dt > 0.0)) throw Error("diffusion-reaction step requires dt > 0");
  CellField cn = apply_diffusion_reaction(c_star, state.v, dt);
  clamp_c(cn);
  return cn;
}

CellField Solver::apply_ode_v(const CellField& c, const CellField& v,
                              double dt) const {
  const int n = mesh_.n_cells();
  const double mu_v = params_.mu_v;
  const double lambda = params_.lambda;

  double max_c = 0.0;
  for (int i = 0; i < n; ++i) max_c = std::max(max_c, c[i]);
  if (dt * (lambda * max_c + mu_v) > kHardBound)
    throw Error("tissue update range bound violated: dt=" + std::to_string(dt) +
                " with max c=" + std::to_string(max_c));

  CellField vn(n);
  if (params_.variant != ModelVariant::Regularized) {
    for (int i = 0; i < n; ++i) {
      const double vi = v[i];
      vn[i] = vi + dt * (mu_v * vi * (1.0 - vi) - lambda * vi * c[i]);
    }
    return vn;
  }

  // Regularized route: march w = arctan(sqrt(v)) with an eps1 Laplacian
  // discretized by the same guarded edge quotient, then invert.
  const double eps1 = params_.eps1;
  if (dt * 3.0 * eps1 * max_dif_geom_ > kHardBound)
    throw Error("tissue diffusion stability bound violated: dt=" +
                std::to_string(dt));

  if (ws_psi_.empty()) ws_psi_.resize(n);
  if (ws_lap_.empty()) ws_lap_.resize(n);
  for (int i = 0; i < n; ++i) ws_psi_[i] = std::atan(std::sqrt(v[i]));
  std::fill(ws_lap_.begin(), ws_lap_.end(), 0.0);

  for (const EdgeGeom& g : iedges_) {
    const double dq = ws_psi_[g.right] - ws_psi_[g.left];
    const double flux = g.len * dq * g.proj;
    ws_lap_[g.left] += inv_area_[g.left] * flux;
    ws_lap_[g.right] -= inv_area_[g.right] * flux;
  }

  for (int i = 0; i < n; ++i) {
    const double vi = v[i];
    const double sq = std::sqrt(vi);
    const double rhs = (mu_v * sq * (1.0 - vi) - lambda * sq * c[i]) / (1.0 + vi);
    double w = ws_psi_[i] + dt * (eps1 * ws_lap_[i] + rhs);
    w = std::clamp(w, 0.0, kPiQuarter);
    vn[i] = psi_inverse(w);
  }
  return vn;
}

CellField Solver::ode_step_v(const SimState& state, double dt) const {
  check_state(state);
  if (!(dt > 0.0)) throw Error("tissue update requires dt > 0");
  CellField vn = apply_ode_v(state.c, state.v, dt);
  clamp_v(vn);
  return vn;
}

SimState Solver::step(const SimState& state, double dt) const {
  CellField cs = advection_step(state, dt);
  CellField cn = diffusion_reaction_step(state, cs, dt);
  CellField vn = ode_step_v(state, dt);
  return SimState{state.t + dt, std::move(cn), std::move(vn)};
}

void Solver::clamp_c(CellField& c) const {
  for (size_t i = 0; i < c.size(); ++i) {
    const double x = c[i];
    if (!std::isfinite(x))
      throw Error("non-finite cell density in cell " + std::to_string(i));
    if (x < 0.0) {
      if (x < -kRangeTol)
        throw Error("cell density " + std::to_string(x) + " in cell " +
                    std::to_string(i) + " below the clamp tolerance");
      c[i] = 0.0;
    }
  }
}

void Solver::clamp_v(CellField& v) const {
  for (size_t i = 0; i < v.size(); ++i) {
    const double x = v[i];
    if (!std::isfinite(x))
      throw Error("non-finite tissue density in cell " + std::to_string(i));
    if (x < 0.0) {
      if (x < -kRangeTol)
        throw Error("tissue density " + std::to_string(x) + " in cell " +
                    std::to_string(i) + " below the clamp tolerance");
      v[i] = 0.0;
    } else if (x > 1.0) {
      if (x > 1.0 + kRangeTol)
        throw Error("tissue density " + std::to_string(x) + " in cell " +
                    std::to_string(i) + " above the clamp tolerance");
      v[i] = 1.0;
    }
  }
}

Vec2 Solver::edge_velocity(const SimState& state, int edge_index) const {
  const Edge& e = mesh_.edges[edge_index];
  if (!e.interior()) return {0.0, 0.0};
  const Vec2 g = edge_gradient(mesh_, state.v, edge_index);
  const double chi =
      0.5 * (haptotactic_sensitivity(state.v[e.cell_left], params_) +
             haptotactic_sensitivity(state.v[e.cell_right], params_));
  return chi * g;
}

RunResult Solver::run(const SimState& initial, const RunSchedule& sched,
                      const StepObserver& observer) const {
  check_state(initial);
  if (sched.t_end < initial.t)
    throw Error("t_end precedes the initial time");
  if (!std::is_sorted(sched.snapshot_times.begin(), sched.snapshot_times.end()))
    throw Error("snapshot times must be sorted ascending");
  if (!sched.adaptive && !(sched.dt_fixed > 0.0))
    throw Error("fixed time stepping requires dt_fixed > 0");

  RunResult res;
  const CellField v0 = initial.v;
  SimState state = initial;
  size_t pending = 0;

  auto take_snapshots = [&]() {
    while (pending < sched.snapshot_times.size() &&
           sched.snapshot_times[pending] <= state.t) {
      Snapshot snap;
      snap.t_requested = sched.snapshot_times[pending];
      snap.state = state;
      snap.diag = record(mesh_, state, v0, sched.c_tol);
      snap.diag.front_radius =
          front_radius(mesh_, state.c, sched.front_center, sched.c_tol);
      res.snapshots.push_back(std::move(snap));
      ++pending;
    }
  };

  take_snapshots();
  if (sched.t_end <= initial.t && res.snapshots.empty()) {
    Snapshot snap;
    snap.t_requested = sched.t_end;
    snap.state = state;
    snap.diag = record(mesh_, state, v0, sched.c_tol);
    snap.diag.front_radius =
        front_radius(mesh_, state.c, sched.front_center, sched.c_tol);
    res.snapshots.push_back(std::move(snap));
  }

  const bool track = static_cast<bool>(observer);
  while (state.t < sched.t_end) {
    if (res.steps >= sched.max_steps) {
      res.error = "step budget of " + std::to_string(sched.max_steps) +
                  " exhausted at t=" + std::to_string(state.t);
      break;
    }
    try {
      double dt;
      if (sched.adaptive) {
        dt = compute_dt(state, sched.cfl_safety);  // fills ws_.a for state
      } else {
        dt = sched.dt_fixed;
        cell_coefficients(state.c, state.v);
        const double max_ratio = edge_speeds(state.v);
        if (dt * 3.0 * max_ratio > kHardBound)
          throw Error("advective CFL violated at fixed dt=" +
                      std::to_string(dt));
      }

      double mass_before = 0.0;
      if (track)
        for (int i = 0; i < mesh_.n_cells(); ++i)
          mass_before += mesh_.cell_areas[i] * state.c[i];

      CellField cs = apply_advection(state.c, dt);

      double adv_rel = 0.0;
      if (track) {
        double mass_after = 0.0;
        for (int i = 0; i < mesh_.n_cells(); ++i)
          mass_after += mesh_.cell_areas[i] * cs[i];
        const double scale = std::max(std::abs(mass_before), 1e-300);
        adv_rel = std::abs(mass_after - mass_before) / scale;
      }

      clamp_c(cs);
      CellField cn = apply_diffusion_reaction(cs, state.v, dt);
      clamp_c(cn);
      CellField vn = apply_ode_v(state.c, state.v, dt);
      clamp_v(vn);

      state.t += dt;
      state.c = std::move(cn);
      state.v = std::move(vn);
      ++res.steps;

      if (track) {
        StepStats st;
        st.step = res.steps;
        st.t = state.t;
        st.dt = dt;
        st.adv_mass_rel_change = adv_rel;
        st.min_c = st.max_c = state.c[0];
        st.min_v = st.max_v = state.v[0];
        for (int i = 1; i < mesh_.n_cells(); ++i) {
          st.min_c = std::min(st.min_c, state.c[i]);
          st.max_c = std::max(st.max_c, state.c[i]);
          st.min_v = std::min(st.min_v, state.v[i]);
          st.max_v = std::max(st.max_v, state.v[i]);
        }
        observer(st);
      }
    } catch (const Error& err) {
      res.error = err.what();
      break;
    }
    take_snapshots();
  }

  res.last_state = std::move(state);
  return res;
}

}  // namespace hapto
