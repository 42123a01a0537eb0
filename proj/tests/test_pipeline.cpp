#include <catch2/catch.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"

using namespace sdpprep;
using namespace testutil;

namespace fs = std::filesystem;

namespace {

PipelineConfig primal_config(Variant v) {
  PipelineConfig cfg;
  cfg.variant = v;
  cfg.file_sense = DataSense::primal;
  return cfg;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("sdpprep-test-" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("run_pipeline on the worked example") {
  auto p = example_232();
  SECTION("mcfr with exact certificates solves it") {
    auto cfg = primal_config(Variant::MCFR);
    cfg.fr_mode = CertMode::FullSdp;
    auto res = run_pipeline(p, cfg);
    CHECK(res.record.status == "Optimal");
    CHECK(res.record.pobj == Approx(1.0).margin(1e-6));
    CHECK(res.record.final_dimension < 3);
    CHECK(res.record.fr_iterations >= 1);
    CHECK(res.check.max_residual() <= 1e-8);
    CHECK(res.check.objective == Approx(1.0).margin(1e-6));
  }
  SECTION("plain on the unreduced instance fails to converge") {
    auto res = run_pipeline(p, primal_config(Variant::Plain));
    CHECK(res.record.status != "Optimal");
  }
}

TEST_CASE("dense instance: mc degenerates to plain up to relabeling") {
  SdpProblem p;
  p.n = 4;
  p.m = 2;
  p.blocks = {4};
  std::mt19937 rng(9);
  std::vector<MatEntry> dense_c;
  std::normal_distribution<double> g;
  for (int i = 1; i <= 4; ++i)
    for (int j = i; j <= 4; ++j) dense_c.push_back({i, j, g(rng)});
  p.objective = SymSparseMatrix::from_entries(4, dense_c);
  p.constraints = {SymSparseMatrix::from_entries(4, {{1, 1, 1.0}, {2, 2, 1.0},
                                                     {3, 3, 1.0}, {4, 4, 1.0}}),
                   SymSparseMatrix::from_entries(4, {{1, 2, 1.0}})};
  p.rhs = {1.0, 0.1};
  p.sense = DataSense::primal;

  auto plain = run_pipeline(p, primal_config(Variant::Plain));
  auto mc = run_pipeline(p, primal_config(Variant::MC));
  REQUIRE(plain.record.status == "Optimal");
  REQUIRE(mc.record.status == "Optimal");
  CHECK(mc.record.clique_count == 1);
  CHECK(mc.record.final_dimension == 4);
  CHECK(mc.record.pobj == Approx(plain.record.pobj).margin(1e-7));
  CHECK((mc.lifted_X - plain.lifted_X).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("three-variant agreement on banded instances") {
  for (unsigned t = 0; t < 6; ++t) {
    auto p = banded_strictly_feasible(12, 2, 9500 + t);
    double objs[3];
    int k = 0;
    for (auto v : {Variant::Plain, Variant::MC, Variant::MCFR}) {
      auto res = run_pipeline(p, primal_config(v));
      REQUIRE(res.record.status == "Optimal");
      CHECK(res.check.max_residual() <= 1e-6);
      objs[k++] = res.record.pobj;
    }
    double lo = std::min({objs[0], objs[1], objs[2]});
    double hi = std::max({objs[0], objs[1], objs[2]});
    CHECK(hi - lo <= 1e-5 * (1 + std::abs(lo)));
  }
}

TEST_CASE("clique merging changes the split, not the optimum") {
  auto p = banded_strictly_feasible(12, 2, 321);
  auto plain = run_pipeline(p, primal_config(Variant::Plain));
  auto cfg = primal_config(Variant::MC);
  cfg.merge_cliques_enabled = true;
  cfg.merge_threshold = 6;
  auto merged = run_pipeline(p, cfg);
  auto unmerged = run_pipeline(p, primal_config(Variant::MC));
  REQUIRE(plain.record.status == "Optimal");
  REQUIRE(merged.record.status == "Optimal");
  REQUIRE(unmerged.record.status == "Optimal");
  CHECK(merged.record.clique_count < unmerged.record.clique_count);
  CHECK(merged.record.pobj == Approx(plain.record.pobj).margin(1e-5));
}

TEST_CASE("timeout surfaces as a Timeout record, not a crash") {
  auto p = banded_strictly_feasible(14, 3, 123);
  auto cfg = primal_config(Variant::MCFR);
  cfg.time_limit_seconds = 1e-6;
  auto res = run_pipeline(p, cfg);
  CHECK(res.record.status == "Timeout");
}

TEST_CASE("dual-sense input is canonicalized before solving") {
  auto p = maxcut_triangle();
  auto direct = run_pipeline(p, primal_config(Variant::Plain));
  SdpProblem dualized = p;
  for (auto& e : dualized.objective.entries) e.value = -e.value;
  dualized.sense = DataSense::dual;
  auto via_dual = run_pipeline(dualized, primal_config(Variant::Plain));
  REQUIRE(via_dual.record.status == "Optimal");
  CHECK(via_dual.record.pobj == Approx(direct.record.pobj).margin(1e-7));
}

TEST_CASE("a dual-convention file solves to the negated SDPA value") {
  // the triangle relaxation as an SDPLib-style file: max F0.Y s.t. Y_ii = 1
  // with F0 = L/4, whose SDPA-convention optimum is 9/4
  std::string text =
      "3\n"
      "1\n"
      "3\n"
      "1.0 1.0 1.0\n"
      "0 1 1 1 0.5\n0 1 2 2 0.5\n0 1 3 3 0.5\n"
      "0 1 1 2 -0.25\n0 1 1 3 -0.25\n0 1 2 3 -0.25\n"
      "1 1 1 1 1.0\n2 1 2 2 1.0\n3 1 3 3 1.0\n";
  auto p = parse_sdpa_string(text);  // dual-form by default
  REQUIRE(p.sense == DataSense::dual);
  PipelineConfig cfg;
  cfg.variant = Variant::Plain;
  auto res = run_pipeline(p, cfg);
  REQUIRE(res.record.status == "Optimal");
  CHECK(res.record.pobj == Approx(-2.25).margin(1e-6));
}

TEST_CASE("bench csv rows parse back to records") {
  BenchRecord r;
  r.instance = "toy";
  r.variant = "mcfr";
  r.wall_seconds = 0.25;
  r.status = "Optimal";
  r.pobj = -2.25;
  r.dobj = -2.2500001;
  r.iterations = 9;
  r.final_dimension = 3;
  r.clique_count = 1;
  r.fr_iterations = 0;
  auto q = parse_csv_row(to_csv_row(r));
  CHECK(q.instance == r.instance);
  CHECK(q.variant == r.variant);
  CHECK(q.wall_seconds == Approx(r.wall_seconds));
  CHECK(q.status == r.status);
  CHECK(q.pobj == r.pobj);
  CHECK(q.dobj == r.dobj);
  CHECK(q.iterations == r.iterations);
  CHECK(q.final_dimension == r.final_dimension);
  CHECK(q.clique_count == r.clique_count);
  CHECK(q.fr_iterations == r.fr_iterations);
  CHECK_THROWS_AS(parse_csv_row("a,b,c"), Error);
}

TEST_CASE("bench over a directory") {
  TempDir dir;
  write_sdpa_file(banded_strictly_feasible(8, 2, 1), (dir.path / "a.dat-s").string());
  write_sdpa_file(banded_strictly_feasible(9, 2, 2), (dir.path / "b.dat-s").string());
  std::ofstream junk(dir.path / "broken.dat-s");
  junk << "not a header\n";
  junk.close();

  std::vector<PipelineConfig> configs{primal_config(Variant::Plain),
                                      primal_config(Variant::MC),
                                      primal_config(Variant::MCFR)};
  std::ostringstream csv;
  auto records = bench(dir.path.string(), configs, csv, 1);

  SECTION("cardinality: one row per instance and variant") {
    CHECK(records.size() == 9);
  }
  SECTION("header is first and every row parses") {
    std::istringstream in(csv.str());
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == bench_csv_header());
    int rows = 0;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      REQUIRE_NOTHROW(parse_csv_row(line));
      ++rows;
    }
    CHECK(rows == 9);
  }
  SECTION("unreadable file becomes ParseError records") {
    int parse_errors = 0;
    for (const auto& r : records)
      if (r.instance == "broken") {
        CHECK(r.status == "ParseError");
        ++parse_errors;
      }
    CHECK(parse_errors == 3);
  }
  SECTION("variant agreement among Optimal records of one instance") {
    std::map<std::string, std::vector<double>> by_instance;
    for (const auto& r : records)
      if (r.status == "Optimal") by_instance[r.instance].push_back(r.pobj);
    for (const auto& [name, objs] : by_instance) {
      double lo = *std::min_element(objs.begin(), objs.end());
      double hi = *std::max_element(objs.begin(), objs.end());
      CHECK(hi - lo <= 1e-5 * (1 + std::abs(lo)));
    }
  }
}

TEST_CASE("bench on an empty directory emits a header-only csv") {
  TempDir dir;
  std::ostringstream csv;
  auto records = bench(dir.path.string(), {primal_config(Variant::Plain)}, csv, 1);
  CHECK(records.empty());
  CHECK(csv.str() == std::string(bench_csv_header()) + "\n");
}

TEST_CASE("bench runs instances concurrently when asked") {
  TempDir dir;
  for (int k = 0; k < 4; ++k)
    write_sdpa_file(banded_strictly_feasible(8, 2, 100 + k),
                    (dir.path / ("i" + std::to_string(k) + ".dat-s")).string());
  std::ostringstream csv;
  auto records = bench(dir.path.string(), {primal_config(Variant::Plain)}, csv, 3);
  CHECK(records.size() == 4);
  for (const auto& r : records) CHECK(r.status == "Optimal");
}

TEST_CASE("performance profile summary") {
  // variant A solves both instances, B solves one: curves end at 1.0 and 0.5
  std::vector<BenchRecord> records;
  auto mk = [](std::string inst, std::string var, std::string status, double secs) {
    BenchRecord r;
    r.instance = std::move(inst);
    r.variant = std::move(var);
    r.status = std::move(status);
    r.wall_seconds = secs;
    return r;
  };
  records.push_back(mk("p1", "a", "Optimal", 1.0));
  records.push_back(mk("p1", "b", "Optimal", 2.0));
  records.push_back(mk("p2", "a", "Optimal", 4.0));
  records.push_back(mk("p2", "b", "NumericalFailure", 0.0));

  std::ostringstream out;
  write_bench_summary(records, out);
  std::string text = out.str();
  CHECK(text.find("a,2,2") != std::string::npos);
  CHECK(text.find("b,1,2") != std::string::npos);

  // parse the profile section and find terminal fractions
  std::istringstream in(text);
  std::string line;
  double a_max = 0, b_max = 0;
  bool in_profile = false;
  while (std::getline(in, line)) {
    if (line == "variant,tau,fraction") {
      in_profile = true;
      continue;
    }
    if (!in_profile || line.empty()) continue;
    std::stringstream ls(line);
    std::string v, tau, frac;
    std::getline(ls, v, ',');
    std::getline(ls, tau, ',');
    std::getline(ls, frac, ',');
    if (v == "a") a_max = std::max(a_max, std::stod(frac));
    if (v == "b") b_max = std::max(b_max, std::stod(frac));
  }
  CHECK(a_max == Approx(1.0));
  CHECK(b_max == Approx(0.5));
}

TEST_CASE("committed fixtures: mixed block structure through every variant") {
  auto p = parse_sdpa_file(std::string(SDPPREP_TEST_DATA_DIR) + "/mixed15.dat-s",
                           DataSense::primal);
  REQUIRE(p.blocks == std::vector<int>{6, -4, 5});
  CHECK(data_equal(parse_sdpa_string(write_sdpa_string(p), DataSense::primal), p));
  double objs[3];
  int k = 0;
  for (auto v : {Variant::Plain, Variant::MC, Variant::MCFR}) {
    auto res = run_pipeline(p, primal_config(v));
    REQUIRE(res.record.status == "Optimal");
    CHECK(res.check.max_residual() <= 1e-6);
    objs[k++] = res.record.pobj;
  }
  CHECK(std::max({objs[0], objs[1], objs[2]}) - std::min({objs[0], objs[1], objs[2]}) <=
        1e-5 * (1 + std::abs(objs[0])));
}

TEST_CASE("preprocess artifacts allow a split solve-then-lift run") {
  // simulate the CLI flow: preprocess to sidecars, solve, lift, recover
  auto p = example_232();
  auto cfg = primal_config(Variant::MCFR);
  cfg.fr_mode = CertMode::FullSdp;
  auto pre = run_pipeline(p, cfg);
  REQUIRE(pre.artifacts.decomposition);
  REQUIRE(pre.artifacts.transform);

  // round-trip the artifacts through their serialized forms
  std::stringstream ms, ts, ps;
  save_map(pre.artifacts.decomposition->map, ms);
  save_transform(*pre.artifacts.transform, ts);
  write_sdpa(pre.artifacts.solved_problem, ps);

  auto prob = parse_sdpa(ps, DataSense::primal);
  auto map = load_map(ms);
  auto transform = load_transform(ts);

  auto r = solve(prob);
  REQUIRE(r.status == SolverStatus::Optimal);
  Eigen::MatrixXd lifted = lift_solution(r.X.to_dense(), transform);
  auto rec = recover_solution(pipeline_detail::clique_matrices(lifted, map.block_sizes),
                              map, 1e-6);
  auto ev = evaluate(p, rec.to_dense());
  CHECK(ev.objective == Approx(1.0).margin(1e-6));
  CHECK(ev.max_residual() <= 1e-7);
}
