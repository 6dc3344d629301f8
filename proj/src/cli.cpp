#include "hapto/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hapto/distmesh.hpp"
#include "hapto/run_driver.hpp"
#include "hapto/snapshot_io.hpp"

namespace hapto {

namespace {

std::string resolve_out_dir(const std::string& cli_out,
                            const std::string& config_dir) {
  if (!cli_out.empty()) return cli_out;
  if (const char* env = std::getenv("HAPTO_OUT_DIR"); env && *env) return env;
  return config_dir;
}

std::vector<double> parse_eps_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw Error("cannot parse eps value '" + tok + "'");
    }
  }
  if (out.empty()) throw Error("--eps-list is empty");
  return out;
}

int do_run(const std::string& config_path, const std::string& out_flag) {
  const RunConfig cfg = load_config(config_path);
  const std::string out_dir = resolve_out_dir(out_flag, cfg.output_dir);
  const TriMesh mesh = make_mesh(cfg.mesh);
  std::cout << "mesh: " << mesh.n_cells() << " cells, " << mesh.n_edges()
            << " edges, min quality " << mesh.min_quality() << ", "
            << mesh.guarded_edge_components()
            << " guarded edge components\n";
  const RunArtifacts art = execute_run(cfg, mesh, out_dir);
  std::cout << "run: " << art.result.steps << " steps to t="
            << format_g17(art.result.last_state.t) << ", "
            << art.snapshot_paths.size() << " snapshots in " << out_dir
            << "\n";
  if (art.result.error) {
    std::cerr << "error: " << *art.result.error << "\n";
    return 1;
  }
  return 0;
}

int do_compare(const std::string& config_path, const std::string& out_flag) {
  const RunConfig cfg = load_config(config_path);
  const std::string out_dir = resolve_out_dir(out_flag, cfg.output_dir);
  const CompareOutput out = run_compare(cfg, out_dir);

  bool ordered = true;
  std::ostringstream verdict;
  verdict << "verdict:";
  for (const CompareRow& r : out.rows) {
    const bool ok = r.support_deg < r.support_nondeg;
    ordered = ordered && ok;
    verdict << " support_fraction_c t=" << format_g17(r.t_requested) << " "
            << format_g17(r.support_deg)
            << (ok ? " < " : " !< ") << format_g17(r.support_nondeg) << ";";
  }
  if (!out.rows.empty()) {
    const CompareRow& last = out.rows.back();
    const bool ok = last.mean_v_deg >= last.mean_v_nondeg;
    ordered = ordered && ok;
    verdict << " mean_v t=" << format_g17(last.t_requested) << " "
            << format_g17(last.mean_v_deg) << (ok ? " >= " : " !>= ")
            << format_g17(last.mean_v_nondeg) << ";";
  }
  verdict << (ordered ? " ORDERED" : " NOT-ORDERED");
  std::cout << verdict.str() << "\n";
  std::cout << "compare: wrote " << out.csv_path << "\n";
  return 0;
}

int do_eps_study(const std::string& config_path, const std::string& eps_text,
                 const std::string& out_flag) {
  const RunConfig cfg = load_config(config_path);
  const std::string out_dir = resolve_out_dir(out_flag, cfg.output_dir);
  const std::vector<double> eps_list = parse_eps_list(eps_text);
  const EpsStudyOutput out = run_eps_study(cfg, eps_list, out_dir);

  for (const EpsStudyRow& r : out.rows)
    std::cout << "eps=" << format_g17(r.eps) << " t=" << format_g17(r.t_requested)
              << " l1_c=" << format_g17(r.l1_c) << "\n";

  // Weak monotonicity verdict at the ends: smallest eps vs largest eps,
  // measured at the final snapshot time.
  double eps_min = eps_list[0], eps_max = eps_list[0];
  for (double e : eps_list) {
    eps_min = std::min(eps_min, e);
    eps_max = std::max(eps_max, e);
  }
  double d_min = 0.0, d_max = 0.0, t_last = 0.0;
  for (const EpsStudyRow& r : out.rows) t_last = std::max(t_last, r.t_requested);
  for (const EpsStudyRow& r : out.rows) {
    if (r.t_requested != t_last) continue;
    if (r.eps == eps_min) d_min = r.l1_c;
    if (r.eps == eps_max) d_max = r.l1_c;
  }
  std::cout << "verdict: l1_c(eps=" << format_g17(eps_min) << ") = "
            << format_g17(d_min) << (d_min <= d_max ? " <= " : " !<= ")
            << "l1_c(eps=" << format_g17(eps_max) << ") = " << format_g17(d_max)
            << (d_min <= d_max ? " CONSISTENT" : " INCONSISTENT") << "\n";
  std::cout << "eps-study: wrote " << out.csv_path << "\n";
  return 0;
}

int do_mesh_gen(double h, const std::string& out_path, std::uint64_t seed,
                int iters) {
  const TriMesh mesh = generate_unit_square_mesh(h, iters, seed);
  write_mesh(mesh, out_path);
  std::cout << "mesh gen: " << mesh.n_vertices() << " vertices, "
            << mesh.n_cells() << " cells, min quality " << mesh.min_quality()
            << " -> " << out_path << "\n";
  return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args) {
  CLI::App app{"Finite-volume simulator for a degenerate haptotaxis "
               "tumor-invasion model"};
  app.require_subcommand(1);

  std::string config_path, out_dir, eps_text, mesh_out;
  double mesh_h = 0.05;
  std::uint64_t mesh_seed = 0;
  int mesh_iters = 100;

  CLI::App* cmd_run = app.add_subcommand("run", "Execute one configured run");
  cmd_run->add_option("--config", config_path, "Config file (JSON)")
      ->required();
  cmd_run->add_option("--out", out_dir, "Output directory override");

  CLI::App* cmd_cmp = app.add_subcommand(
      "compare", "Run degenerate and nondegenerate variants side by side");
  cmd_cmp->add_option("--config", config_path, "Config file (JSON)")
      ->required();
  cmd_cmp->add_option("--out", out_dir, "Output directory override");

  CLI::App* cmd_eps = app.add_subcommand(
      "eps-study", "Regularized runs over an eps ladder vs the degenerate run");
  cmd_eps->add_option("--config", config_path, "Config file (JSON)")
      ->required();
  cmd_eps->add_option("--eps-list", eps_text, "Comma-separated eps values")
      ->required();
  cmd_eps->add_option("--out", out_dir, "Output directory override");

  CLI::App* cmd_mesh = app.add_subcommand("mesh", "Mesh utilities");
  cmd_mesh->require_subcommand(1);
  CLI::App* cmd_gen = cmd_mesh->add_subcommand("gen", "Generate a unit-square mesh");
  cmd_gen->set_help_flag("--help", "Print help");  // frees -h for --h
  cmd_gen->add_option("--h", mesh_h, "Target edge length")->required();
  cmd_gen->add_option("--out", mesh_out, "Output mesh file")->required();
  cmd_gen->add_option("--seed", mesh_seed, "Jitter seed");
  cmd_gen->add_option("--iters", mesh_iters, "Relaxation iteration budget");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      std::cout << app.help();
      return 0;
    }
    std::cerr << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (cmd_run->parsed()) return do_run(config_path, out_dir);
    if (cmd_cmp->parsed()) return do_compare(config_path, out_dir);
    if (cmd_eps->parsed()) return do_eps_study(config_path, eps_text, out_dir);
    if (cmd_mesh->parsed() && cmd_gen->parsed())
      return do_mesh_gen(mesh_h, mesh_out, mesh_seed, mesh_iters);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cerr << "error: no subcommand executed\n";
  return 2;
}

}  // namespace hapto
