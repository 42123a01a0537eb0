// Command-line front end: preprocess / solve / run / bench over SDPA
// sparse files.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <sdpprep/sdpprep.hpp>

namespace {

using namespace sdpprep;

struct CommonFlags {
  std::string form = "dual";
  double gap_tol = 1e-8;
  double feas_tol = 1e-8;
  int max_iterations = 200;
  double step_fraction = 0.98;
  double eps_rank = 1e-8;
  double eps_psd = 1e-9;
  bool fr_exact = false;
  bool no_reorder = false;
  int merge_cliques = 0;
  double time_limit = 0;
  double recover_tol = 1e-6;
  bool verbose = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f, bool with_fr) {
  cmd->add_option("--form", f.form, "Interpret file data as dual-form (SDPLib) or primal-form")
      ->check(CLI::IsMember({"dual", "primal"}));
  cmd->add_option("--gap-tol", f.gap_tol, "Relative duality gap tolerance");
  cmd->add_option("--feas-tol", f.feas_tol, "Feasibility tolerance");
  cmd->add_option("--max-iterations", f.max_iterations, "Interior-point iteration cap");
  cmd->add_option("--step-fraction", f.step_fraction, "Fraction of the step to the boundary");
  cmd->add_option("--time-limit", f.time_limit, "Per-run time limit in seconds (0 = none)");
  cmd->add_flag("--verbose", f.verbose, "Stream the iteration log to stderr");
  if (with_fr) {
    cmd->add_option("--eps-rank", f.eps_rank, "Relative eigenvalue cut for the face split");
    cmd->add_option("--eps-psd", f.eps_psd,
                    "Relative negative-eigenvalue slack accepted on exposing matrices");
    cmd->add_flag("--fr-exact", f.fr_exact,
                  "Search certificates over the full cone (one auxiliary SDP per round) "
                  "instead of the diagonal restriction");
    cmd->add_flag("--no-reorder", f.no_reorder, "Skip the fill-reducing ordering");
    cmd->add_option("--merge-cliques", f.merge_cliques,
                    "Fuse adjacent cliques while the union stays within this size (0 = off)");
    cmd->add_option("--recover-tol", f.recover_tol,
                    "Separator agreement tolerance when recovering solutions");
  }
}

PipelineConfig make_config(const CommonFlags& f, Variant v) {
  PipelineConfig cfg;
  cfg.variant = v;
  cfg.reorder_enabled = !f.no_reorder;
  cfg.fr_mode = f.fr_exact ? CertMode::FullSdp : CertMode::DiagonalLP;
  cfg.merge_cliques_enabled = f.merge_cliques > 0;
  cfg.merge_threshold = f.merge_cliques;
  cfg.file_sense = f.form == "dual" ? DataSense::dual : DataSense::primal;
  cfg.solver.gap_tol = f.gap_tol;
  cfg.solver.feas_tol = f.feas_tol;
  cfg.solver.max_iterations = f.max_iterations;
  cfg.solver.step_fraction = f.step_fraction;
  cfg.solver.log_iterations = f.verbose;
  cfg.facial.eps_rank = f.eps_rank;
  cfg.facial.eps_psd = f.eps_psd;
  cfg.facial.ipm = cfg.solver;
  cfg.facial.ipm.log_iterations = false;
  cfg.time_limit_seconds = f.time_limit;
  cfg.recover_tol = f.recover_tol;
  return cfg;
}

SdpProblem load_problem(const std::string& path, const CommonFlags& f) {
  DataSense sense = f.form == "dual" ? DataSense::dual : DataSense::primal;
  if (sense == DataSense::dual)
    std::cerr << "note: interpreting '" << path
              << "' as dual-form SDPA data (pass --form primal to override);"
                 " reported objectives refer to the canonical minimization of -C.X\n";
  return parse_sdpa_file(path, sense);
}

void write_solution(const Eigen::MatrixXd& X, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << X.rows() << "\n";
  char buf[64];
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index j = i; j < X.cols(); ++j)
      if (X(i, j) != 0.0) {
        std::snprintf(buf, sizeof(buf), "%ld %ld %.17g\n", static_cast<long>(i + 1),
                      static_cast<long>(j + 1), X(i, j));
        out << buf;
      }
}

void print_result(const SolverResult& r) {
  std::printf("status:          %s%s\n", to_string(r.status),
              r.deadline_hit ? " (deadline)" : "");
  std::printf("objective:       %.10g\n", r.pobj);
  std::printf("dual objective:  %.10g\n", r.dobj);
  std::printf("gap:             %.3e\n", r.gap);
  std::printf("primal residual: %.3e\n", r.primal_residual);
  std::printf("dual residual:   %.3e\n", r.dual_residual);
  std::printf("iterations:      %d\n", r.iterations);
}

int cmd_preprocess(const std::string& input, const CommonFlags& f, bool mc_only,
                   const std::string& out_problem, const std::string& out_map,
                   const std::string& out_transform) {
  SdpProblem prob = load_problem(input, f).to_canonical();
  PipelineConfig cfg = make_config(f, mc_only ? Variant::MC : Variant::MCFR);

  SparsityGraph graph = aggregate_pattern(prob);
  Ordering order = cfg.reorder_enabled ? min_degree_order(graph) : identity_order(prob.n);
  SparsityGraph filled = chordal_extension(graph, order);
  CliqueTree tree = clique_tree(maximal_cliques(filled, order), prob.n);
  if (cfg.merge_cliques_enabled) tree = merge_cliques(tree, cfg.merge_threshold);
  DecomposedProblem dec = decompose(prob, tree);

  SdpProblem transformed = dec.problem;
  std::optional<FaceTransform> transform;
  if (!mc_only) {
    ReduceResult red = reduce_loop(dec.problem, cfg.fr_mode, cfg.facial);
    if (red.infeasible) {
      std::fprintf(stderr, "facial reduction certified infeasibility (constraint %d)\n",
                   red.infeasible_constraint + 1);
      return 1;
    }
    transformed = red.problem;
    transform = red.transform;
    std::fprintf(stderr, "facial reduction: %d round(s), dimension %d -> %d\n",
                 red.iterations, dec.problem.n, red.problem.n);
  }
  std::fprintf(stderr, "cliques: %zu, transformed dimension %d, constraints %d\n",
               dec.map.cliques.size(), transformed.n, transformed.m);

  write_sdpa_file(transformed, out_problem);
  std::fprintf(stderr,
               "wrote %s (primal-form data: re-read it with --form primal)\n",
               out_problem.c_str());
  if (!out_map.empty()) {
    std::ofstream mo(out_map);
    save_map(dec.map, mo);
  }
  if (!out_transform.empty() && transform) {
    std::ofstream to(out_transform);
    save_transform(*transform, to);
  }
  return 0;
}

int cmd_solve(const std::string& input, const CommonFlags& f, const std::string& map_path,
              const std::string& transform_path, const std::string& original_path,
              const std::string& solution_path) {
  SdpProblem prob = load_problem(input, f).to_canonical();
  PipelineConfig cfg = make_config(f, Variant::Plain);
  IpmOptions opts = cfg.solver;
  if (cfg.time_limit_seconds > 0)
    opts.deadline = std::chrono::steady_clock::now() +
                    std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                        std::chrono::duration<double>(cfg.time_limit_seconds));
  SolverResult r = solve(prob, opts);
  print_result(r);
  if (r.X.total_dim() != prob.n) return 0;

  Eigen::MatrixXd X = r.X.to_dense();
  if (!transform_path.empty()) {
    std::ifstream ti(transform_path);
    if (!ti) throw Error("cannot open '" + transform_path + "'");
    FaceTransform t = load_transform(ti);
    X = lift_solution(X, t);
    std::printf("lifted through %zu face stage(s) to dimension %d\n", t.stages.size(),
                t.original_n);
  }
  if (!map_path.empty()) {
    std::ifstream mi(map_path);
    if (!mi) throw Error("cannot open '" + map_path + "'");
    DecompositionMap map = load_map(mi);
    SymSparseMatrix rec = recover_solution(
        pipeline_detail::clique_matrices(X, map.block_sizes), map, 1e-6);
    X = rec.to_dense();
    std::printf("recovered original-space solution on %zu pattern entries\n",
                rec.entries.size());
  }
  if (!original_path.empty()) {
    SdpProblem orig = load_problem(original_path, f).to_canonical();
    Evaluation ev = evaluate(orig, X);
    std::printf("original objective: %.10g, max residual: %.3e\n", ev.objective,
                ev.max_residual());
  }
  if (!solution_path.empty()) write_solution(X, solution_path);
  return 0;
}

int cmd_run(const std::string& input, const CommonFlags& f, const std::string& variant,
            const std::string& solution_path) {
  SdpProblem prob = load_problem(input, f);
  PipelineConfig cfg = make_config(f, parse_variant(variant));
  PipelineResult res = run_pipeline(prob, cfg);
  print_result(res.solver);
  std::printf("variant:         %s\n", res.record.variant.c_str());
  std::printf("cliques:         %d\n", res.record.clique_count);
  std::printf("fr rounds:       %d\n", res.record.fr_iterations);
  std::printf("solved dim:      %d\n", res.record.final_dimension);
  std::printf("wall seconds:    %.3f\n", res.record.wall_seconds);
  if (!res.check.residuals.empty())
    std::printf("lifted solution: objective %.10g, max residual %.3e\n",
                res.check.objective, res.check.max_residual());
  if (!solution_path.empty()) write_solution(res.lifted_X, solution_path);
  return 0;
}

int cmd_bench(const std::string& dir, const CommonFlags& f, const std::string& variants,
              const std::string& out_path, const std::string& summary_path, int jobs) {
  std::vector<PipelineConfig> configs;
  std::stringstream ss(variants);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) configs.push_back(make_config(f, parse_variant(item)));
  if (configs.empty()) throw Error("no variants selected");

  std::vector<BenchRecord> records;
  if (out_path.empty()) {
    records = bench(dir, configs, std::cout, jobs);
  } else {
    std::ofstream out(out_path);
    if (!out) throw Error("cannot open '" + out_path + "' for writing");
    records = bench(dir, configs, out, jobs);
  }
  if (summary_path.empty()) {
    write_bench_summary(records, std::cerr);
  } else {
    std::ofstream sout(summary_path);
    if (!sout) throw Error("cannot open '" + summary_path + "' for writing");
    write_bench_summary(records, sout);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "sdpprep: chordal clique decomposition plus facial reduction for sparse "
      "semidefinite programs, with a built-in interior-point solver"};
  app.require_subcommand(1);

  CommonFlags f;

  auto* pre = app.add_subcommand("preprocess",
                                 "Transform an instance and write it with its sidecars");
  std::string input, out_problem = "preprocessed.dat-s", out_map, out_transform;
  bool mc_only = false;
  pre->add_option("input", input, "SDPA sparse file")->required();
  pre->add_flag("--mc-only", mc_only, "Clique decomposition without facial reduction");
  pre->add_option("--out", out_problem, "Output .dat-s path");
  pre->add_option("--map", out_map, "Decomposition map sidecar (JSON)");
  pre->add_option("--transform", out_transform, "Face transform sidecar (text)");
  add_common_flags(pre, f, true);

  auto* sol = app.add_subcommand("solve", "Solve one instance, optionally lifting "
                                          "through sidecars from preprocess");
  std::string s_input, s_map, s_transform, s_original, s_solution;
  sol->add_option("input", s_input, "SDPA sparse file")->required();
  sol->add_option("--map", s_map, "Decomposition map sidecar to recover through");
  sol->add_option("--transform", s_transform, "Face transform sidecar to lift through");
  sol->add_option("--original", s_original, "Original instance to evaluate against");
  sol->add_option("--solution", s_solution, "Write the solution entries here");
  add_common_flags(sol, f, false);

  auto* run = app.add_subcommand("run", "End-to-end: preprocess, solve, lift, validate");
  std::string r_input, r_variant = "mcfr", r_solution;
  run->add_option("input", r_input, "SDPA sparse file")->required();
  run->add_option("--variant", r_variant, "plain, mc or mcfr")
      ->check(CLI::IsMember({"plain", "mc", "mcfr"}));
  run->add_option("--solution", r_solution, "Write the lifted solution entries here");
  add_common_flags(run, f, true);

  auto* ben = app.add_subcommand("bench", "Batch all variants over a directory of .dat-s "
                                          "files, emitting per-instance CSV records");
  std::string b_dir, b_variants = "plain,mc,mcfr", b_out, b_summary;
  int b_jobs = 1;
  ben->add_option("dir", b_dir, "Directory of .dat-s instances")->required();
  ben->add_option("--variants", b_variants, "Comma-separated variant list");
  ben->add_option("--out", b_out, "Records CSV path (default: stdout)");
  ben->add_option("--summary", b_summary,
                  "Summary CSV path: solve counts and profile points (default: stderr)");
  ben->add_option("--jobs", b_jobs, "Concurrent instances")->check(CLI::PositiveNumber);
  add_common_flags(ben, f, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (pre->parsed()) return cmd_preprocess(input, f, mc_only, out_problem, out_map, out_transform);
    if (sol->parsed()) return cmd_solve(s_input, f, s_map, s_transform, s_original, s_solution);
    if (run->parsed()) return cmd_run(r_input, f, r_variant, r_solution);
    if (ben->parsed()) return cmd_bench(b_dir, f, b_variants, b_out, b_summary, b_jobs);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
