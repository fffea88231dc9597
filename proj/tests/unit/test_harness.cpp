#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "doctest.h"
#include "mpmo/error.hpp"
#include "mpmo/harness.hpp"

using namespace mpmo;

namespace {

std::vector<ResultRow> sample_rows() {
  ResultRow a;
  a.run_id = 0;
  a.seed = 17;
  a.problem = "mpjcg";
  a.n = 10;
  a.param = 3;
  a.algorithm = "cpr-nsga2";
  a.fe_budget = 1000;
  a.fe_to_target = 420;
  a.fitness_evals = 450;
  a.success = true;
  a.generations = 4;

  ResultRow b = a;
  b.run_id = 1;
  b.fe_to_target.reset();
  b.success = false;
  b.fitness_evals = 1000;
  b.wall_ms = 12.5;

  ResultRow c = a;
  c.run_id = 2;
  c.problem = "bpbomst";
  c.param = 10;
  c.algorithm = "partywise-baseline";
  c.alpha = "3/2";
  c.fe_to_target = 80;
  return {a, b, c};
}

}  // namespace

TEST_CASE("result rows round-trip through both formats") {
  const auto rows = sample_rows();
  for (auto format : {ResultFormat::Csv, ResultFormat::Jsonl}) {
    const std::string text = format_rows(rows, format);
    CHECK(parse_rows(text) == rows);
    CHECK(format_rows(parse_rows(text), format) == text);
  }
  CHECK(parse_format("csv") == ResultFormat::Csv);
  CHECK(parse_format("jsonl") == ResultFormat::Jsonl);
  CHECK_THROWS_AS(parse_format("xml"), ContractViolation);
  CHECK(parse_rows("").empty());

  const std::string csv = format_rows(rows, ResultFormat::Csv);
  CHECK(csv.substr(0, csv.find('\n')) ==
        "run_id,seed,problem,n,param,algorithm,alpha,fe_budget,fe_to_target,fitness_evals,success,generations,wall_ms");
  CHECK(csv.find("1,17,mpjcg,10,3,cpr-nsga2,,1000,,1000,false,4,12.500") != std::string::npos);
  const std::string jsonl = format_rows({rows[0]}, ResultFormat::Jsonl);
  CHECK(jsonl.find("\"fe_to_target\":420") != std::string::npos);
  CHECK(jsonl.find("\"alpha\":null") != std::string::npos);
  CHECK(jsonl.find("\"wall_ms\":null") != std::string::npos);
}

TEST_CASE("malformed result files are rejected") {
  CHECK_THROWS_AS(parse_rows("a,b,c\n1,2,3\n"), ContractViolation);
  auto rows = sample_rows();
  std::string csv = format_rows(rows, ResultFormat::Csv);
  CHECK_THROWS_AS(parse_rows(csv + "1,2,3\n"), ContractViolation);
  // success without a hitting time
  rows[0].fe_to_target.reset();
  CHECK_THROWS_AS(parse_rows(format_rows(rows, ResultFormat::Csv)), ContractViolation);
  CHECK_THROWS_AS(parse_rows("{\"run_id\": 1}\n"), ContractViolation);
  CHECK_THROWS_AS(parse_rows("{not json\n"), ContractViolation);
  CHECK_THROWS_AS(read_result_file("/nonexistent/results.csv"), ContractViolation);
}

TEST_CASE("summaries recompute from raw rows") {
  std::vector<ResultRow> rows;
  const std::vector<std::optional<std::uint64_t>> hits{10, 30, std::nullopt, 20, 60};
  for (std::size_t i = 0; i < hits.size(); ++i) {
    ResultRow r;
    r.run_id = i;
    r.problem = "mpjcg";
    r.n = 8;
    r.param = 2;
    r.algorithm = i % 2 ? "payoff-baseline" : "cpr-nsga2";
    r.fe_to_target = hits[i];
    r.success = hits[i].has_value();
    rows.push_back(r);
  }
  const auto summary = summarize(rows);
  REQUIRE(summary.size() == 2);
  CHECK(summary[0].algorithm == "cpr-nsga2");
  CHECK(summary[0].runs == 3);
  CHECK(summary[0].successes == 2);
  CHECK(*summary[0].median == doctest::Approx(35.0));
  CHECK(*summary[0].mean == doctest::Approx(35.0));
  CHECK(*summary[0].stddev == doctest::Approx(35.355339).epsilon(1e-6));
  CHECK(summary[1].runs == 2);
  CHECK(*summary[1].median == doctest::Approx(25.0));
  CHECK(*summary[1].stddev == doctest::Approx(7.0710678).epsilon(1e-6));

  ResultRow lone = rows[0];
  lone.algorithm = "flattened-nsga2";
  lone.success = false;
  lone.fe_to_target.reset();
  const auto none = summarize({lone});
  CHECK(none[0].successes == 0);
  CHECK_FALSE(none[0].median.has_value());
  CHECK(format_summary(none).find("flattened-nsga2,,1,0,,,\n") != std::string::npos);

  const auto path = (std::filesystem::temp_directory_path() / "mpmo_harness_rows.csv").string();
  write_results(rows, path, ResultFormat::Csv);
  const auto back = read_result_file(path);
  CHECK(back == rows);
  std::ifstream in(path + ".summary.csv");
  std::stringstream text;
  text << in.rdbuf();
  CHECK(text.str() == format_summary(summarize(back)));
  std::filesystem::remove(path);
  std::filesystem::remove(path + ".summary.csv");
}

TEST_CASE("mpjcg experiment is deterministic and complete") {
  MpjcgExperiment cfg;
  cfg.sizes = {8, 10};
  cfg.k = 2;
  cfg.runs = 3;
  cfg.cpr.fe_budget = 20000;
  cfg.cpr.population_size = 10;
  cfg.algorithms = {"cpr-nsga2", "payoff-baseline", "flattened-nsga2"};
  cfg.threads = 1;
  const auto rows = run_experiment_mpjcg(cfg);
  REQUIRE(rows.size() == 2 * 3 * 3);
  cfg.threads = 3;
  CHECK(run_experiment_mpjcg(cfg) == rows);

  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    CHECK(r.run_id == i);
    CHECK(r.problem == "mpjcg");
    CHECK(r.param == 2);
    CHECK(r.success == r.fe_to_target.has_value());
    CHECK_FALSE(r.wall_ms.has_value());
    if (r.fe_to_target) CHECK(*r.fe_to_target <= r.fitness_evals);
  }
  // Seeds are shared across algorithms for the same (n, repetition).
  CHECK(rows[0].seed == rows[3].seed);
  CHECK(rows[0].seed == rows[6].seed);
  CHECK(rows[0].seed != rows[1].seed);
  CHECK(rows[0].seed != rows[9].seed);

  cfg.algorithms = {"bogus"};
  CHECK_THROWS_AS(run_experiment_mpjcg(cfg), ContractViolation);
  cfg.algorithms = {"cpr-nsga2"};
  cfg.runs = 0;
  CHECK_THROWS_AS(run_experiment_mpjcg(cfg), ContractViolation);
}

TEST_CASE("bpbomst experiment rows per alpha") {
  BpbomstExperiment cfg;
  cfg.sizes = {5, 6};
  cfg.runs = 2;
  cfg.fe_budget = 20000;
  cfg.threads = 2;
  const auto rows = run_experiment_bpbomst(cfg);
  REQUIRE(rows.size() == 2 * 2 * 2 * 3);
  cfg.threads = 1;
  CHECK(run_experiment_bpbomst(cfg) == rows);

  for (std::size_t i = 0; i < rows.size(); i += 3) {
    // Looser targets are met no later than tighter ones.
    const auto& a2 = rows[i];
    const auto& a3 = rows[i + 1];
    const auto& a4 = rows[i + 2];
    CHECK(a2.alpha == std::optional<std::string>("2"));
    CHECK(a4.alpha == std::optional<std::string>("4"));
    CHECK(a2.run_id == a4.run_id);
    if (a2.fe_to_target) {
      REQUIRE(a3.fe_to_target);
      REQUIRE(a4.fe_to_target);
      CHECK(*a3.fe_to_target <= *a2.fe_to_target);
      CHECK(*a4.fe_to_target <= *a3.fe_to_target);
    }
    if (a3.fe_to_target) CHECK(a4.fe_to_target.has_value());
    CHECK(a2.param == 10);
    CHECK(a2.fe_budget == 20000);
  }
  const auto instances = experiment_instances(cfg);
  REQUIRE(instances.size() == 2);
  CHECK(instances[0].graph.n_vertices() == 5);
  CHECK(serialize_instance(experiment_instances(cfg)[1]) == serialize_instance(instances[1]));

  cfg.instances = bundled_tiny_instances();
  cfg.instances.erase(cfg.instances.begin() + 2, cfg.instances.end());
  cfg.alphas = {{2, 1}};
  cfg.runs = 1;
  const auto supplied = run_experiment_bpbomst(cfg);
  CHECK(supplied.size() == 2 * 2);
  CHECK(supplied[0].n == cfg.instances[0].graph.n_vertices());

  cfg.algorithms = {"nsga3"};
  CHECK_THROWS_AS(run_experiment_bpbomst(cfg), ContractViolation);
}

TEST_CASE("oracle verification sweep") {
  const auto report = verify_oracles({4, 6, 9}, 2000);
  CHECK(report.ok());
  CHECK(report.checks == 1 + 2 + 3 + bundled_tiny_instances().size());
  CHECK(report.lines.size() == report.checks);
  CHECK_THROWS_AS(verify_oracles({30}), ContractViolation);
}

TEST_CASE("plot rendering") {
  const std::string empty = render_plot_svg({}, "empty");
  CHECK(empty.find("<svg") == 0);
  CHECK(empty.find("</svg>") != std::string::npos);
  CHECK(empty.find("polyline") == std::string::npos);

  const auto rows = sample_rows();
  const std::string svg = render_plot_svg(rows, "runs");
  CHECK(svg == render_plot_svg(rows, "runs"));
  CHECK(svg.find("cpr-nsga2") != std::string::npos);
  CHECK(svg.find("partywise-baseline alpha=3/2") != std::string::npos);
}
