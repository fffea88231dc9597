#ifndef MPMO_HARNESS_HPP
#define MPMO_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mpmo/bpbomst.hpp"
#include "mpmo/instances.hpp"
#include "mpmo/pseudoboolean.hpp"

namespace mpmo {

/// One algorithm run, or one (run, alpha) pair for spanning-tree runs.
struct ResultRow {
  std::uint64_t run_id = 0;
  std::uint64_t seed = 0;
  std::string problem;  ///< "mpjcg" or "bpbomst"
  int n = 0;
  std::int64_t param = 0;  ///< k for mpjcg, w_max for bpbomst
  std::string algorithm;
  std::optional<std::string> alpha;
  std::uint64_t fe_budget = 0;
  std::optional<std::uint64_t> fe_to_target;  ///< present iff success
  std::uint64_t fitness_evals = 0;
  bool success = false;
  std::uint64_t generations = 0;  ///< generations, or iterations for single-step loops
  std::optional<double> wall_ms;
  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

enum class ResultFormat { Csv, Jsonl };
ResultFormat parse_format(const std::string& name);

std::string format_rows(const std::vector<ResultRow>& rows, ResultFormat format);
/// Reads either format; JSON lines are detected by a leading '{'.
std::vector<ResultRow> parse_rows(const std::string& text);
std::vector<ResultRow> read_result_file(const std::string& path);

struct SummaryRow {
  std::string problem;
  int n = 0;
  std::int64_t param = 0;
  std::string algorithm;
  std::string alpha;
  std::size_t runs = 0;
  std::size_t successes = 0;
  /// Statistics of fe_to_target over successful runs; sample deviation.
  std::optional<double> median;
  std::optional<double> mean;
  std::optional<double> stddev;
};

/// Groups by (problem, n, param, algorithm, alpha) in first-seen order.
std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);
std::string format_summary(const std::vector<SummaryRow>& rows);

/// Writes `path` and `path + ".summary.csv"`.
void write_results(const std::vector<ResultRow>& rows, const std::string& path, ResultFormat format);

struct MpjcgExperiment {
  std::vector<int> sizes{10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
  int k = 3;
  int runs = 10;
  CprConfig cpr;  ///< its fe_budget applies to every algorithm
  std::vector<std::string> algorithms{"cpr-nsga2", "payoff-baseline"};
  double flattened_constant = 2.0;
  std::uint64_t master_seed = 1;
  unsigned threads = 0;  ///< 0 selects the hardware concurrency
  bool record_wall_time = false;

  void validate() const;
};

std::vector<ResultRow> run_experiment_mpjcg(const MpjcgExperiment& cfg);

struct BpbomstExperiment {
  std::vector<int> sizes{5, 6, 7, 8, 9, 10, 11, 12};
  int runs = 5;
  double p_g = 0.5;
  /// Fixed budget; unset selects 20000 n.
  std::optional<std::uint64_t> fe_budget;
  std::vector<Alpha> alphas{{2, 1}, {3, 1}, {4, 1}};
  std::vector<std::string> algorithms{"cpr-nsga2", "partywise-baseline"};
  PlantedParams planted;
  /// When nonempty these replace generated instances and `sizes` is ignored.
  std::vector<InstanceFile> instances;
  std::uint64_t master_seed = 1;
  unsigned threads = 0;
  bool record_wall_time = false;

  void validate() const;
  std::uint64_t budget_for(int n) const { return fe_budget.value_or(20000ULL * static_cast<std::uint64_t>(n)); }
};

/// The instances a spanning-tree experiment runs on, one per size.
std::vector<InstanceFile> experiment_instances(const BpbomstExperiment& cfg);
std::vector<ResultRow> run_experiment_bpbomst(const BpbomstExperiment& cfg);

struct OracleReport {
  std::vector<std::string> lines;
  std::size_t checks = 0;
  std::size_t failures = 0;
  bool ok() const { return failures == 0; }
};

/// Closed form against enumeration for every 2 <= k <= n/2, plus the
/// layered-cover checks on the bundled tiny instances.
OracleReport verify_oracles(const std::vector<int>& sizes, std::size_t tiny_cap = 2000);

/// Mean of fe_to_target per n with one-standard-deviation bars, one series
/// per (algorithm, alpha).
std::string render_plot_svg(const std::vector<ResultRow>& rows, const std::string& title);

}  // namespace mpmo

#endif  // MPMO_HARNESS_HPP
