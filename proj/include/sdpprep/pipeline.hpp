#pragma once

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "sdpprep/chordal.hpp"
#include "sdpprep/decompose.hpp"
#include "sdpprep/facial.hpp"
#include "sdpprep/ipm.hpp"
#include "sdpprep/problem.hpp"
#include "sdpprep/sdpa_io.hpp"

namespace sdpprep {

enum class Variant { Plain, MC, MCFR };

inline const char* variant_name(Variant v) {
  switch (v) {
    case Variant::Plain: return "plain";
    case Variant::MC: return "mc";
    case Variant::MCFR: return "mcfr";
  }
  return "?";
}

inline Variant parse_variant(const std::string& s) {
  if (s == "plain") return Variant::Plain;
  if (s == "mc") return Variant::MC;
  if (s == "mcfr") return Variant::MCFR;
  throw Error("unknown variant '" + s + "' (expected plain, mc or mcfr)");
}

struct PipelineConfig {
  Variant variant = Variant::MCFR;
  bool reorder_enabled = true;           // the fill-reducing ordering is optional
  CertMode fr_mode = CertMode::DiagonalLP;
  bool merge_cliques_enabled = false;
  int merge_threshold = 0;
  DataSense file_sense = DataSense::dual;  // how .dat-s files are interpreted
  IpmOptions solver;
  FacialOptions facial;
  double time_limit_seconds = 0;  // 0 = no limit
  double recover_tol = 1e-6;      // separator agreement tolerance on recovery

  void validate() const {
    if (time_limit_seconds < 0) throw Error("PipelineConfig: negative time limit");
    solver.validate();
  }
};

struct BenchRecord {
  std::string instance;
  std::string variant;
  double wall_seconds = 0;
  std::string status;
  double pobj = 0;
  double dobj = 0;
  int iterations = 0;
  int final_dimension = 0;
  int clique_count = 0;
  int fr_iterations = 0;
};

// Intermediate products of the preprocessing, kept so the CLI can emit the
// transformed problem plus its sidecars.
struct PipelineArtifacts {
  std::optional<DecomposedProblem> decomposition;
  std::optional<FaceTransform> transform;
  SdpProblem solved_problem;  // what the solver actually saw
};

struct PipelineResult {
  SolverResult solver;
  Eigen::MatrixXd lifted_X;  // original-space solution on the filled pattern
  Evaluation check;          // evaluate() of lifted_X against the input
  BenchRecord record;
  PipelineArtifacts artifacts;
};

namespace pipeline_detail {

inline std::vector<Eigen::MatrixXd> clique_matrices(const Eigen::MatrixXd& dense,
                                                    const std::vector<int>& sizes) {
  std::vector<Eigen::MatrixXd> out;
  int off = 0;
  for (int s : sizes) {
    out.push_back(dense.block(off, off, s, s));
    off += s;
  }
  return out;
}

}  // namespace pipeline_detail

// Executes one configured variant end to end. Failures never throw out of
// this function; they are captured in the record status.
inline PipelineResult run_pipeline(const SdpProblem& input, const PipelineConfig& cfg) {
  cfg.validate();
  PipelineResult out;
  out.record.variant = variant_name(cfg.variant);

  auto t0 = std::chrono::steady_clock::now();
  std::optional<std::chrono::steady_clock::time_point> deadline;
  if (cfg.time_limit_seconds > 0)
    deadline = t0 + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                        std::chrono::duration<double>(cfg.time_limit_seconds));

  IpmOptions sopts = cfg.solver;
  sopts.deadline = deadline;
  FacialOptions fopts = cfg.facial;
  fopts.ipm.deadline = deadline;

  SdpProblem prob = input.to_canonical();
  out.lifted_X = Eigen::MatrixXd::Zero(prob.n, prob.n);

  try {
    prob.validate();
    if (cfg.variant == Variant::Plain) {
      out.artifacts.solved_problem = prob;
      out.solver = solve(prob, sopts);
      out.record.final_dimension = prob.n;
      out.lifted_X = out.solver.X.total_dim() == prob.n ? out.solver.X.to_dense()
                                                        : out.lifted_X;
    } else {
      SparsityGraph graph = aggregate_pattern(prob);
      Ordering order = cfg.reorder_enabled ? min_degree_order(graph)
                                           : identity_order(prob.n);
      SparsityGraph filled = chordal_extension(graph, order);
      CliqueTree tree = clique_tree(maximal_cliques(filled, order), prob.n);
      if (cfg.merge_cliques_enabled && cfg.merge_threshold > 0)
        tree = merge_cliques(tree, cfg.merge_threshold);
      DecomposedProblem dec = decompose(prob, tree);
      out.record.clique_count = static_cast<int>(dec.map.cliques.size());

      if (cfg.variant == Variant::MC) {
        out.artifacts.decomposition = dec;
        out.artifacts.solved_problem = dec.problem;
        out.solver = solve(dec.problem, sopts);
        out.record.final_dimension = dec.problem.n;
        if (out.solver.X.total_dim() == dec.problem.n) {
          SymSparseMatrix rec = recover_solution(
              pipeline_detail::clique_matrices(out.solver.X.to_dense(),
                                               dec.map.block_sizes),
              dec.map, cfg.recover_tol);
          out.lifted_X = rec.to_dense();
        }
      } else {
        ReduceResult red = reduce_loop(dec.problem, cfg.fr_mode, fopts);
        out.record.fr_iterations = red.iterations;
        out.record.final_dimension = red.problem.n;
        out.artifacts.decomposition = dec;
        out.artifacts.transform = red.transform;
        out.artifacts.solved_problem = red.problem;
        if (red.infeasible) {
          out.solver.status = SolverStatus::PrimalInfeasible;
        } else {
          out.solver = solve(red.problem, sopts);
          if (out.solver.X.total_dim() == red.problem.n) {
            Eigen::MatrixXd lifted_dec =
                lift_solution(out.solver.X.to_dense(), red.transform);
            SymSparseMatrix rec = recover_solution(
                pipeline_detail::clique_matrices(lifted_dec, dec.map.block_sizes),
                dec.map, cfg.recover_tol);
            out.lifted_X = rec.to_dense();
          }
        }
      }
    }
    out.record.status = out.solver.deadline_hit ? "Timeout" : to_string(out.solver.status);
  } catch (const std::exception&) {
    bool timed_out =
        deadline && std::chrono::steady_clock::now() >= *deadline;
    out.record.status = timed_out ? "Timeout" : "NumericalFailure";
    out.solver.status = SolverStatus::NumericalFailure;
    out.solver.deadline_hit = timed_out;
  }

  try {
    out.check = evaluate(prob, out.lifted_X);
  } catch (const std::exception&) {
  }

  out.record.pobj = out.solver.pobj;
  out.record.dobj = out.solver.dobj;
  out.record.iterations = out.solver.iterations;
  out.record.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

// --- bench CSV ---

inline const char* bench_csv_header() {
  return "instance,variant,wall_seconds,status,pobj,dobj,iterations,"
         "final_dimension,clique_count,fr_iterations";
}

inline std::string to_csv_row(const BenchRecord& r) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), ",%.6f,%s,%.17g,%.17g,%d,%d,%d,%d",
                r.wall_seconds, r.status.c_str(), r.pobj, r.dobj, r.iterations,
                r.final_dimension, r.clique_count, r.fr_iterations);
  return r.instance + "," + r.variant + buf;
}

inline BenchRecord parse_csv_row(const std::string& line) {
  std::vector<std::string> f;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      f.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  f.push_back(cur);
  if (f.size() != 10) throw Error("bench CSV row has " + std::to_string(f.size()) +
                                  " fields, expected 10");
  BenchRecord r;
  r.instance = f[0];
  r.variant = f[1];
  r.wall_seconds = std::stod(f[2]);
  r.status = f[3];
  r.pobj = std::stod(f[4]);
  r.dobj = std::stod(f[5]);
  r.iterations = std::stoi(f[6]);
  r.final_dimension = std::stoi(f[7]);
  r.clique_count = std::stoi(f[8]);
  r.fr_iterations = std::stoi(f[9]);
  return r;
}

// Runs every config over every .dat-s file in a directory. Rows are flushed
// per instance so partial runs remain usable; a failing instance never aborts
// the batch. With jobs > 1 instances run concurrently and rows appear in
// completion order.
inline std::vector<BenchRecord> bench(const std::string& instance_dir,
                                      const std::vector<PipelineConfig>& configs,
                                      std::ostream& csv, int jobs = 1) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(instance_dir))
    if (e.is_regular_file() && e.path().extension() == ".dat-s")
      files.push_back(e.path());
  std::sort(files.begin(), files.end());

  csv << bench_csv_header() << "\n";
  csv.flush();

  std::vector<std::vector<BenchRecord>> slots(files.size());
  std::mutex io_mutex;
  std::atomic<std::size_t> next{0};

  auto work = [&]() {
    while (true) {
      std::size_t idx = next.fetch_add(1);
      if (idx >= files.size()) return;
      const fs::path& path = files[idx];
      std::string name = path.stem().string();
      std::vector<BenchRecord>& rows = slots[idx];
      for (const auto& cfg : configs) {
        BenchRecord rec;
        try {
          SdpProblem prob = parse_sdpa_file(path.string(), cfg.file_sense);
          PipelineResult res = run_pipeline(prob, cfg);
          rec = res.record;
        } catch (const std::exception&) {
          rec.variant = variant_name(cfg.variant);
          rec.status = "ParseError";
        }
        rec.instance = name;
        rows.push_back(rec);
      }
      std::lock_guard<std::mutex> lock(io_mutex);
      for (const auto& r : rows) csv << to_csv_row(r) << "\n";
      csv.flush();
    }
  };

  if (jobs <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  std::vector<BenchRecord> records;
  for (const auto& rows : slots)
    for (const auto& r : rows) records.push_back(r);
  return records;
}

// Per-variant solve counts plus the points of the performance-profile curve:
// for each threshold tau, the fraction of instances the variant solved within
// tau times the best time over all variants.
inline void write_bench_summary(const std::vector<BenchRecord>& records,
                                std::ostream& out) {
  std::set<std::string> instances;
  std::map<std::string, double> best;  // instance -> best solved time
  for (const auto& r : records) {
    instances.insert(r.instance);
    if (r.status == "Optimal") {
      auto it = best.find(r.instance);
      if (it == best.end() || r.wall_seconds < it->second)
        best[r.instance] = r.wall_seconds;
    }
  }

  std::map<std::string, std::vector<double>> ratios;  // variant -> ratios
  std::map<std::string, std::pair<int, int>> counts;  // variant -> (solved, attempted)
  for (const auto& r : records) {
    auto& c = counts[r.variant];
    ++c.second;
    if (r.status == "Optimal") {
      ++c.first;
      double b = best.at(r.instance);
      ratios[r.variant].push_back(b > 0 ? r.wall_seconds / b : 1.0);
    }
  }

  out << "variant,solved,attempted\n";
  for (const auto& [v, c] : counts) out << v << "," << c.first << "," << c.second << "\n";

  std::set<double> taus{1.0};
  for (const auto& [v, rs] : ratios)
    for (double r : rs) taus.insert(r);

  out << "\nvariant,tau,fraction\n";
  const double total = static_cast<double>(instances.size());
  char buf[64];
  for (const auto& [v, rs] : ratios)
    for (double tau : taus) {
      int n = 0;
      for (double r : rs)
        if (r <= tau) ++n;
      std::snprintf(buf, sizeof(buf), "%.6g,%.6g", tau, total > 0 ? n / total : 0.0);
      out << v << "," << buf << "\n";
    }
}

}  // namespace sdpprep
