#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mpmo/analysis.hpp"
#include "mpmo/error.hpp"
#include "mpmo/harness.hpp"
#include "mpmo/instances.hpp"

using namespace mpmo;

namespace {

constexpr int kExitMismatch = 1;
constexpr int kExitUsage = 2;

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::vector<Alpha> parse_alphas(const std::vector<std::string>& texts) {
  std::vector<Alpha> out;
  for (const auto& t : texts) out.push_back(Alpha::parse(t));
  return out;
}

nlohmann::ordered_json joint_json(const JointVector& y) { return nlohmann::ordered_json(std::vector<std::int64_t>(y.begin(), y.end())); }

std::string analyze(const InstanceFile& inst, std::size_t cap, std::uint64_t search_limit, const Rational& p_g,
                    std::optional<std::uint64_t> p_max_override) {
  const MultiWeightedGraph& g = inst.graph;
  const InstanceParams params = compute_instance_params(g, cap);
  const TreeTable table = tabulate_trees(g, cap);
  const std::uint64_t m = g.edges().size();
  const std::uint64_t p_max = p_max_override.value_or(params.c_pw);

  nlohmann::ordered_json report;
  report["instance"] = inst.name;
  report["n_vertices"] = g.n_vertices();
  report["n_edges"] = m;
  report["spanning_trees"] = table.trees.size();
  nlohmann::ordered_json pf = nlohmann::ordered_json::array();
  for (const auto& y : params.pf_com) pf.push_back(joint_json(y));
  report["pf_com"] = pf;

  nlohmann::ordered_json p;
  p["c_a"] = params.c_a;
  p["c_min_a"] = params.c_min_a;
  p["n_cpr"] = params.n_cpr;
  p["g_cpr"] = params.g_cpr;
  p["omega_cpr"] = params.omega_cpr.str();
  p["c_pw"] = params.c_pw;
  p["lambda_fill"] = to_string(params.lambda_fill);
  p["lambda_eff"] = to_string(params.lambda_eff);
  report["params"] = p;

  nlohmann::ordered_json fill = nlohmann::ordered_json::array();
  for (const auto& y : params.pf_com) {
    const AuxiliaryFront front = auxiliary_front(table, y);
    nlohmann::ordered_json entry;
    entry["y"] = joint_json(y);
    entry["aux_front_size"] = front.front.size();
    entry["support_size"] = front.support.size();
    entry["segments"] = front.segments.size();
    entry["fillability"] = to_string(check_aux_fillability(front, search_limit));
    fill.push_back(entry);
  }
  report["fillability"] = fill;

  nlohmann::ordered_json segs = nlohmann::ordered_json::array();
  for (const auto& s : params.segments) {
    nlohmann::ordered_json entry;
    entry["y_index"] = s.y_index;
    entry["segment"] = s.j;
    entry["size"] = s.size;
    entry["cpr_good"] = s.cpr_good;
    entry["omega"] = s.omega ? nlohmann::ordered_json(s.omega->str()) : nlohmann::ordered_json(nullptr);
    if (s.omega) {
      entry["shortcut_useful"] = shortcut_usefulness(s.size, *s.omega, p_g, std::max<std::uint64_t>(p_max, 1), m);
    } else {
      entry["shortcut_useful"] = nullptr;
    }
    segs.push_back(entry);
  }
  report["segments"] = segs;
  report["shortcut_inputs"] = {{"p_g", to_string(p_g)}, {"p_max", p_max}, {"m", m}};

  const LayeredCoverReport cover = verify_layered_cover(g, cap);
  nlohmann::ordered_json c;
  c["ok"] = cover.ok();
  c["lambda_in_range"] = cover.lambda_in_range;
  c["witnesses_exist"] = cover.witnesses_exist;
  c["lifting_holds"] = cover.lifting_holds;
  c["aux_front_nondominated"] = cover.aux_front_nondominated;
  c["support_cover_holds"] = cover.support_cover_holds;
  c["max_lambda"] = to_string(cover.max_lambda);
  c["failures"] = cover.failures;
  report["layered_cover"] = c;
  return report.dump(2) + "\n";
}

std::vector<int> range_sizes(int lo, int hi) {
  std::vector<int> out;
  for (int n = lo; n <= hi; ++n) out.push_back(n);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-party multi-objective experiments"};
  app.require_subcommand(1);

  // gen-instance
  auto* gen = app.add_subcommand("gen-instance", "Generate a spanning-tree instance with planted common optima");
  int gen_n = 6;
  std::uint64_t gen_seed = 1;
  PlantedParams planted;
  std::string gen_out;
  gen->add_option("--n", gen_n, "Number of vertices")->check(CLI::Range(3, 1000));
  gen->add_option("--seed", gen_seed, "Generator seed");
  gen->add_option("--w-max", planted.w_max, "Largest edge weight");
  gen->add_option("--planted", planted.planted, "Planted trees to attempt (1-3)")->check(CLI::Range(1, 3));
  gen->add_option("--out", gen_out, "Output file (default stdout)");

  // run-mpjcg
  auto* mp = app.add_subcommand("run-mpjcg", "Run the pseudo-Boolean experiment");
  MpjcgExperiment mcfg;
  std::string mp_out = "mpjcg_results.csv", mp_format = "csv";
  mp->add_option("--seed", mcfg.master_seed, "Master seed");
  mp->add_option("--n", mcfg.sizes, "Sizes")->delimiter(',');
  mp->add_option("--k", mcfg.k, "Gap parameter");
  mp->add_option("--runs", mcfg.runs, "Runs per size and algorithm");
  mp->add_option("--fe-budget", mcfg.cpr.fe_budget, "Evaluation budget per run");
  mp->add_option("--pg", mcfg.cpr.p_g, "Probability of intra-party variation");
  mp->add_option("--pc", mcfg.cpr.p_c, "Crossover probability");
  mp->add_option("--pop", mcfg.cpr.population_size, "Population size per party");
  mp->add_option("--algorithms", mcfg.algorithms, "cpr-nsga2, payoff-baseline, flattened-nsga2")->delimiter(',');
  mp->add_option("--flattened-constant", mcfg.flattened_constant, "Flattened population constant c in c(n+1)");
  mp->add_option("--threads", mcfg.threads, "Worker threads (0 = hardware)");
  mp->add_flag("--record-wall-time", mcfg.record_wall_time, "Fill the wall_ms column");
  mp->add_option("--out", mp_out, "Result file");
  mp->add_option("--format", mp_format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));

  // run-bpbomst
  auto* bp = app.add_subcommand("run-bpbomst", "Run the spanning-tree experiment");
  BpbomstExperiment bcfg;
  std::vector<std::string> bp_alphas{"2", "3", "4"}, bp_instances;
  std::uint64_t bp_budget = 0;
  std::string bp_out = "bpbomst_results.csv", bp_format = "csv";
  bp->add_option("--seed", bcfg.master_seed, "Master seed");
  bp->add_option("--n", bcfg.sizes, "Sizes of generated instances")->delimiter(',');
  bp->add_option("--runs", bcfg.runs, "Runs per instance and algorithm");
  auto* bp_budget_opt = bp->add_option("--fe-budget", bp_budget, "Fixed budget (default 20000 n)");
  bp->add_option("--pg", bcfg.p_g, "Probability of intra-party variation");
  bp->add_option("--alpha", bp_alphas, "Approximation targets")->delimiter(',');
  bp->add_option("--algorithms", bcfg.algorithms, "cpr-nsga2, partywise-baseline")->delimiter(',');
  bp->add_option("--instance", bp_instances, "Instance files replacing generated ones");
  bp->add_option("--w-max", bcfg.planted.w_max, "Largest edge weight of generated instances");
  bp->add_option("--planted", bcfg.planted.planted, "Planted trees to attempt")->check(CLI::Range(1, 3));
  bp->add_option("--threads", bcfg.threads, "Worker threads (0 = hardware)");
  bp->add_flag("--record-wall-time", bcfg.record_wall_time, "Fill the wall_ms column");
  bp->add_option("--out", bp_out, "Result file");
  bp->add_option("--format", bp_format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));

  // verify-oracles
  auto* vo = app.add_subcommand("verify-oracles", "Check closed forms against enumeration");
  std::vector<int> vo_sizes = range_sizes(4, 14);
  std::size_t vo_cap = 2000;
  std::string vo_out;
  vo->add_option("--n", vo_sizes, "Sizes")->delimiter(',');
  vo->add_option("--tiny-cap", vo_cap, "Tree cap for bundled instances");
  vo->add_option("--out", vo_out, "Report file (default stdout)");

  // analyze-instance
  auto* an = app.add_subcommand("analyze-instance", "Exact analysis of a small instance");
  std::string an_instance, an_out, an_pg = "1/2";
  std::size_t an_cap = 2000;
  std::uint64_t an_limit = 1'000'000, an_pmax = 0;
  an->add_option("--instance", an_instance, "Instance file; omit for the bundled shortcut example");
  an->add_option("--cap", an_cap, "Spanning-tree enumeration cap");
  an->add_option("--search-limit", an_limit, "Node limit of the fillability search");
  an->add_option("--pg", an_pg, "p_g for the shortcut test (rational)");
  auto* an_pmax_opt = an->add_option("--pmax", an_pmax, "Pool size bound for the shortcut test (default C_pw)");
  an->add_option("--out", an_out, "Report file (default stdout)");

  // plot
  auto* pl = app.add_subcommand("plot", "Render a result file as SVG");
  std::string pl_in, pl_out, pl_title = "fitness evaluations to target";
  pl->add_option("input", pl_in, "Result file")->required();
  pl->add_option("--out", pl_out, "SVG file (default stdout)");
  pl->add_option("--title", pl_title, "Plot title");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen) {
      write_text(gen_out, serialize_instance(generate_bpbomst_instance(gen_n, gen_seed, planted)));
    } else if (*mp) {
      write_results(run_experiment_mpjcg(mcfg), mp_out, parse_format(mp_format));
    } else if (*bp) {
      if (*bp_budget_opt) bcfg.fe_budget = bp_budget;
      bcfg.alphas = parse_alphas(bp_alphas);
      for (const auto& path : bp_instances) bcfg.instances.push_back(read_instance_file(path));
      write_results(run_experiment_bpbomst(bcfg), bp_out, parse_format(bp_format));
    } else if (*vo) {
      const OracleReport report = verify_oracles(vo_sizes, vo_cap);
      std::string text;
      for (const auto& line : report.lines) text += line + "\n";
      text += std::to_string(report.checks) + " checks, " + std::to_string(report.failures) + " mismatches\n";
      write_text(vo_out, text);
      return report.ok() ? 0 : kExitMismatch;
    } else if (*an) {
      const InstanceFile inst = an_instance.empty() ? shortcut_example_instance() : read_instance_file(an_instance);
      std::optional<std::uint64_t> pmax;
      if (*an_pmax_opt) pmax = an_pmax;
      write_text(an_out, analyze(inst, an_cap, an_limit, parse_rational(an_pg), pmax));
    } else if (*pl) {
      write_text(pl_out, render_plot_svg(read_result_file(pl_in), pl_title));
    }
  } catch (const ContractViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const RefusalError& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return 0;
}
