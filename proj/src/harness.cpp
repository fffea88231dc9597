#include "mpmo/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "mpmo/analysis.hpp"
#include "mpmo/error.hpp"
#include "mpmo/mpjcg.hpp"
#include "mpmo/rng.hpp"

namespace mpmo {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr const char* kCsvHeader =
    "run_id,seed,problem,n,param,algorithm,alpha,fe_budget,fe_to_target,fitness_evals,success,generations,wall_ms";

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::uint64_t to_u64(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ContractViolation(std::string("results: bad ") + what + " '" + s + "'");
}

std::int64_t to_i64(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const auto v = std::stoll(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ContractViolation(std::string("results: bad ") + what + " '" + s + "'");
}

void check_row(const ResultRow& r) {
  require(r.fe_to_target.has_value() == r.success, "results: fe_to_target must be present iff success");
  require(!r.problem.empty() && !r.algorithm.empty(), "results: empty problem or algorithm");
}

ResultRow row_from_csv(const std::vector<std::string>& f) {
  require(f.size() == 13, "results: expected 13 CSV fields");
  ResultRow r;
  r.run_id = to_u64(f[0], "run_id");
  r.seed = to_u64(f[1], "seed");
  r.problem = f[2];
  r.n = static_cast<int>(to_i64(f[3], "n"));
  r.param = to_i64(f[4], "param");
  r.algorithm = f[5];
  if (!f[6].empty()) r.alpha = f[6];
  r.fe_budget = to_u64(f[7], "fe_budget");
  if (!f[8].empty()) r.fe_to_target = to_u64(f[8], "fe_to_target");
  r.fitness_evals = to_u64(f[9], "fitness_evals");
  require(f[10] == "true" || f[10] == "false", "results: bad success flag");
  r.success = f[10] == "true";
  r.generations = to_u64(f[11], "generations");
  if (!f[12].empty()) {
    try {
      r.wall_ms = std::stod(f[12]);
    } catch (const std::exception&) {
      throw ContractViolation("results: bad wall_ms '" + f[12] + "'");
    }
  }
  check_row(r);
  return r;
}

ordered_json row_to_json(const ResultRow& r) {
  ordered_json j;
  j["run_id"] = r.run_id;
  j["seed"] = r.seed;
  j["problem"] = r.problem;
  j["n"] = r.n;
  j["param"] = r.param;
  j["algorithm"] = r.algorithm;
  j["alpha"] = r.alpha ? ordered_json(*r.alpha) : ordered_json(nullptr);
  j["fe_budget"] = r.fe_budget;
  j["fe_to_target"] = r.fe_to_target ? ordered_json(*r.fe_to_target) : ordered_json(nullptr);
  j["fitness_evals"] = r.fitness_evals;
  j["success"] = r.success;
  j["generations"] = r.generations;
  j["wall_ms"] = r.wall_ms ? ordered_json(std::stod(fixed(*r.wall_ms, 3))) : ordered_json(nullptr);
  return j;
}

ResultRow row_from_json(const nlohmann::json& j) {
  try {
    ResultRow r;
    r.run_id = j.at("run_id").get<std::uint64_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.problem = j.at("problem").get<std::string>();
    r.n = j.at("n").get<int>();
    r.param = j.at("param").get<std::int64_t>();
    r.algorithm = j.at("algorithm").get<std::string>();
    if (!j.at("alpha").is_null()) r.alpha = j.at("alpha").get<std::string>();
    r.fe_budget = j.at("fe_budget").get<std::uint64_t>();
    if (!j.at("fe_to_target").is_null()) r.fe_to_target = j.at("fe_to_target").get<std::uint64_t>();
    r.fitness_evals = j.at("fitness_evals").get<std::uint64_t>();
    r.success = j.at("success").get<bool>();
    r.generations = j.at("generations").get<std::uint64_t>();
    if (!j.at("wall_ms").is_null()) r.wall_ms = j.at("wall_ms").get<double>();
    check_row(r);
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ContractViolation(std::string("results: bad JSON row: ") + e.what());
  }
}

std::string optional_number(const std::optional<double>& v) { return v ? fixed(*v, 4) : std::string(); }

// Runs fn(i) for i in [0, count) on a small worker pool.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

BitString from_index(std::uint64_t idx, int n) {
  BitString x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) x.set(static_cast<std::size_t>(i), (idx >> (n - 1 - i)) & 1U);
  return x;
}

}  // namespace

ResultFormat parse_format(const std::string& name) {
  if (name == "csv") return ResultFormat::Csv;
  if (name == "jsonl") return ResultFormat::Jsonl;
  throw ContractViolation("unknown result format '" + name + "'");
}

std::string format_rows(const std::vector<ResultRow>& rows, ResultFormat format) {
  std::string out;
  if (format == ResultFormat::Jsonl) {
    for (const auto& r : rows) out += row_to_json(r).dump() + "\n";
    return out;
  }
  out = std::string(kCsvHeader) + "\n";
  for (const auto& r : rows) {
    out += std::to_string(r.run_id) + "," + std::to_string(r.seed) + "," + r.problem + "," + std::to_string(r.n) +
           "," + std::to_string(r.param) + "," + r.algorithm + "," + r.alpha.value_or("") + "," +
           std::to_string(r.fe_budget) + "," + (r.fe_to_target ? std::to_string(*r.fe_to_target) : "") + "," +
           std::to_string(r.fitness_evals) + "," + (r.success ? "true" : "false") + "," +
           std::to_string(r.generations) + "," + (r.wall_ms ? fixed(*r.wall_ms, 3) : "") + "\n";
  }
  return out;
}

std::vector<ResultRow> parse_rows(const std::string& text) {
  std::vector<ResultRow> rows;
  std::istringstream in(text);
  std::string line;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
      } catch (const nlohmann::json::parse_error& e) {
        throw ContractViolation(std::string("results: malformed JSON line: ") + e.what());
      }
      rows.push_back(row_from_json(j));
    }
    return rows;
  }
  if (!std::getline(in, line)) return rows;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  require(line == kCsvHeader, "results: unexpected CSV header");
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    rows.push_back(row_from_csv(split(line, ',')));
  }
  return rows;
}

std::vector<ResultRow> read_result_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ContractViolation("results: cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_rows(buffer.str());
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
  using Key = std::tuple<std::string, int, std::int64_t, std::string, std::string>;
  std::vector<Key> order;
  std::map<Key, std::vector<const ResultRow*>> groups;
  for (const auto& r : rows) {
    Key key{r.problem, r.n, r.param, r.algorithm, r.alpha.value_or("")};
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(&r);
  }
  std::vector<SummaryRow> out;
  for (const auto& key : order) {
    const auto& members = groups.at(key);
    SummaryRow s{std::get<0>(key), std::get<1>(key), std::get<2>(key), std::get<3>(key), std::get<4>(key),
                 members.size(), 0, std::nullopt, std::nullopt, std::nullopt};
    std::vector<double> fe;
    for (const ResultRow* r : members) {
      if (r->success) {
        ++s.successes;
        fe.push_back(static_cast<double>(*r->fe_to_target));
      }
    }
    if (!fe.empty()) {
      std::sort(fe.begin(), fe.end());
      const std::size_t m = fe.size();
      s.median = m % 2 ? fe[m / 2] : (fe[m / 2 - 1] + fe[m / 2]) / 2.0;
      double sum = 0;
      for (double v : fe) sum += v;
      const double mean = sum / static_cast<double>(m);
      double sq = 0;
      for (double v : fe) sq += (v - mean) * (v - mean);
      s.mean = mean;
      s.stddev = m > 1 ? std::sqrt(sq / static_cast<double>(m - 1)) : 0.0;
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::string format_summary(const std::vector<SummaryRow>& rows) {
  std::string out = "problem,n,param,algorithm,alpha,runs,successes,median_fe,mean_fe,std_fe\n";
  for (const auto& s : rows) {
    out += s.problem + "," + std::to_string(s.n) + "," + std::to_string(s.param) + "," + s.algorithm + "," + s.alpha +
           "," + std::to_string(s.runs) + "," + std::to_string(s.successes) + "," + optional_number(s.median) + "," +
           optional_number(s.mean) + "," + optional_number(s.stddev) + "\n";
  }
  return out;
}

void write_results(const std::vector<ResultRow>& rows, const std::string& path, ResultFormat format) {
  const auto write = [](const std::string& file, const std::string& text) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + file);
    out << text;
  };
  write(path, format_rows(rows, format));
  write(path + ".summary.csv", format_summary(summarize(rows)));
}

void MpjcgExperiment::validate() const {
  require(!sizes.empty(), "experiment: sizes must be nonempty");
  require(runs >= 1, "experiment: runs must be at least 1");
  require(!algorithms.empty(), "experiment: no algorithms selected");
  for (int n : sizes) {
    const auto inst = MpjcgInstance::make(n, k);
    cpr.validate(inst);
  }
  for (const auto& a : algorithms) {
    require(a == "cpr-nsga2" || a == "payoff-baseline" || a == "flattened-nsga2",
            "experiment: unknown algorithm '" + a + "'");
  }
}

std::vector<ResultRow> run_experiment_mpjcg(const MpjcgExperiment& cfg) {
  cfg.validate();
  struct Job {
    int n;
    std::string algorithm;
    int rep;
  };
  std::vector<Job> jobs;
  for (int n : cfg.sizes) {
    for (const auto& a : cfg.algorithms) {
      for (int r = 0; r < cfg.runs; ++r) jobs.push_back({n, a, r});
    }
  }
  std::vector<ResultRow> rows(jobs.size());
  parallel_for(jobs.size(), cfg.threads, [&](std::size_t i) {
    const Job& job = jobs[i];
    const auto inst = MpjcgInstance::make(job.n, cfg.k);
    // Algorithms share seeds per (n, repetition).
    const std::uint64_t seed =
        derive_seed(derive_seed(cfg.master_seed, static_cast<std::uint64_t>(job.n)), static_cast<std::uint64_t>(job.rep));
    const auto start = std::chrono::steady_clock::now();
    RunResult result;
    if (job.algorithm == "cpr-nsga2") {
      result = run_cpr_nsga2_mpjcg(inst, cfg.cpr, seed);
    } else if (job.algorithm == "payoff-baseline") {
      result = run_payoff_baseline(inst, cfg.cpr.fe_budget, seed);
    } else {
      result = run_flattened_nsga2(inst, cfg.flattened_constant, cfg.cpr.fe_budget, seed);
    }
    ResultRow& row = rows[i];
    row.run_id = i;
    row.seed = seed;
    row.problem = "mpjcg";
    row.n = job.n;
    row.param = cfg.k;
    row.algorithm = job.algorithm;
    row.fe_budget = cfg.cpr.fe_budget;
    row.fe_to_target = result.hit_fe;
    row.fitness_evals = result.fitness_evals;
    row.success = result.success;
    row.generations = result.generations;
    if (cfg.record_wall_time) row.wall_ms = elapsed_ms(start);
  });
  return rows;
}

void BpbomstExperiment::validate() const {
  require(runs >= 1, "experiment: runs must be at least 1");
  require(!instances.empty() || !sizes.empty(), "experiment: sizes must be nonempty");
  for (int n : sizes) require(n >= 3, "experiment: sizes must be at least 3");
  require(!alphas.empty(), "experiment: no alpha targets");
  require(!algorithms.empty(), "experiment: no algorithms selected");
  for (const auto& a : algorithms) {
    require(a == "cpr-nsga2" || a == "partywise-baseline", "experiment: unknown algorithm '" + a + "'");
  }
  BpbomstConfig probe;
  probe.p_g = p_g;
  probe.alpha_targets = alphas;
  probe.validate();
}

std::vector<InstanceFile> experiment_instances(const BpbomstExperiment& cfg) {
  if (!cfg.instances.empty()) return cfg.instances;
  std::vector<InstanceFile> out;
  const std::uint64_t stream = derive_seed(cfg.master_seed, 0x1257A9CEULL);
  for (int n : cfg.sizes) {
    out.push_back(generate_bpbomst_instance(n, derive_seed(stream, static_cast<std::uint64_t>(n)), cfg.planted));
  }
  return out;
}

std::vector<ResultRow> run_experiment_bpbomst(const BpbomstExperiment& cfg) {
  cfg.validate();
  const std::vector<InstanceFile> instances = experiment_instances(cfg);
  struct Job {
    std::size_t instance;
    std::string algorithm;
    int rep;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    for (const auto& a : cfg.algorithms) {
      for (int r = 0; r < cfg.runs; ++r) jobs.push_back({i, a, r});
    }
  }
  const std::size_t per_run = cfg.alphas.size();
  std::vector<ResultRow> rows(jobs.size() * per_run);
  parallel_for(jobs.size(), cfg.threads, [&](std::size_t j) {
    const Job& job = jobs[j];
    const InstanceFile& inst = instances[job.instance];
    const int n = inst.graph.n_vertices();
    const std::uint64_t seed = derive_seed(derive_seed(cfg.master_seed, static_cast<std::uint64_t>(job.instance)),
                                           static_cast<std::uint64_t>(job.rep));
    BpbomstConfig run_cfg;
    run_cfg.p_g = cfg.p_g;
    run_cfg.fe_budget = cfg.budget_for(n);
    run_cfg.alpha_targets = cfg.alphas;
    const auto start = std::chrono::steady_clock::now();
    const BpbomstRunResult result = job.algorithm == "cpr-nsga2"
                                        ? run_cpr_nsga2_bpbomst(inst.graph, inst.pf_com, run_cfg, seed)
                                        : run_partywise_baseline(inst.graph, inst.pf_com, run_cfg, seed);
    const double ms = elapsed_ms(start);
    for (std::size_t a = 0; a < per_run; ++a) {
      ResultRow& row = rows[j * per_run + a];
      row.run_id = j;
      row.seed = seed;
      row.problem = "bpbomst";
      row.n = n;
      row.param = inst.graph.w_max();
      row.algorithm = job.algorithm;
      row.alpha = cfg.alphas[a].to_string();
      row.fe_budget = run_cfg.fe_budget;
      row.fe_to_target = result.cover.hit_fe.empty() ? std::nullopt : result.cover.hit_fe[a];
      row.fitness_evals = result.fitness_evals;
      row.success = row.fe_to_target.has_value();
      row.generations = result.iterations;
      if (cfg.record_wall_time) row.wall_ms = ms;
    }
  });
  return rows;
}

OracleReport verify_oracles(const std::vector<int>& sizes, std::size_t tiny_cap) {
  OracleReport report;
  const auto record = [&](bool ok, const std::string& what) {
    ++report.checks;
    if (!ok) ++report.failures;
    report.lines.push_back((ok ? "ok       " : "MISMATCH ") + what);
  };
  for (int n : sizes) {
    require(n >= 4 && n <= kBruteForceMaxBits, "verify_oracles: n must lie in [4, 22]");
    for (int k = 2; k <= n / 2; ++k) {
      const auto inst = MpjcgInstance::make(n, k);
      const auto closed = closed_form_pareto(inst);
      const auto brute = brute_pareto_oracle(inst);
      std::uint64_t ps_mismatch = 0;
      for (std::uint64_t idx = 0; idx < (1ULL << n); ++idx) {
        const BitString x = from_index(idx, n);
        if (closed.ps1_membership(x) != brute.ps1_membership(x) || closed.ps2_membership(x) != brute.ps2_membership(x)) {
          ++ps_mismatch;
        }
      }
      const auto optima = common_optima(inst);
      const bool com_ok = closed.ps_com == brute.ps_com && brute.ps_com == std::set<BitString>(optima.begin(), optima.end());
      const bool flat_ok = closed.pf_flat == brute.pf_flat && brute.pf_flat.size() == static_cast<std::size_t>(n - k + 2);
      std::string what = "mpjcg n=" + std::to_string(n) + " k=" + std::to_string(k);
      if (ps_mismatch) what += " party-set mismatches=" + std::to_string(ps_mismatch);
      if (!com_ok) what += " common set differs";
      if (!flat_ok) what += " flattened front differs (|brute|=" + std::to_string(brute.pf_flat.size()) + ")";
      record(ps_mismatch == 0 && com_ok && flat_ok, what);
    }
  }
  for (const auto& inst : bundled_tiny_instances()) {
    const LayeredCoverReport r = verify_layered_cover(inst.graph, tiny_cap);
    std::string what = "layered cover " + inst.name + " trees=" + std::to_string(r.trees) +
                       " pf_com=" + std::to_string(r.pf_com_size) + " max_lambda=" + to_string(r.max_lambda);
    for (const auto& f : r.failures) what += "; " + f;
    record(r.ok(), what);
  }
  return report;
}

std::string render_plot_svg(const std::vector<ResultRow>& rows, const std::string& title) {
  struct Point {
    int n;
    double mean;
    double sd;
  };
  std::vector<std::string> names;
  std::map<std::string, std::vector<Point>> series;
  for (const auto& s : summarize(rows)) {
    if (!s.mean) continue;
    const std::string name = s.alpha.empty() ? s.algorithm : s.algorithm + " alpha=" + s.alpha;
    auto [it, inserted] = series.try_emplace(name);
    if (inserted) names.push_back(name);
    it->second.push_back({s.n, *s.mean, *s.stddev});
  }
  for (auto& [name, pts] : series) {
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.n < b.n; });
  }

  const double width = 720, height = 440, left = 80, right = 220, top = 40, bottom = 60;
  const double plot_w = width - left - right, plot_h = height - top - bottom;
  int n_lo = 0, n_hi = 1;
  double y_hi = 1;
  bool any = false;
  for (const auto& [name, pts] : series) {
    for (const auto& p : pts) {
      n_lo = any ? std::min(n_lo, p.n) : p.n;
      n_hi = any ? std::max(n_hi, p.n) : p.n;
      y_hi = std::max(y_hi, p.mean + p.sd);
      any = true;
    }
  }
  if (n_hi == n_lo) n_hi = n_lo + 1;
  // Round the y range up to 1, 2 or 5 times a power of ten.
  const double mag = std::pow(10.0, std::floor(std::log10(y_hi)));
  double y_top = mag;
  for (double step : {1.0, 2.0, 5.0, 10.0}) {
    if (step * mag >= y_hi) {
      y_top = step * mag;
      break;
    }
  }
  const auto sx = [&](double n) { return left + (n - n_lo) / (n_hi - n_lo) * plot_w; };
  const auto sy = [&](double v) { return top + plot_h - v / y_top * plot_h; };
  const auto f2 = [](double v) { return fixed(v, 2); };
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << f2(left + plot_w / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << title
      << "</text>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w << "\" y2=\""
      << top + plot_h << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + plot_h
      << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 5; ++t) {
    const double v = y_top * t / 5.0;
    svg << "<line x1=\"" << left - 4 << "\" y1=\"" << f2(sy(v)) << "\" x2=\"" << left << "\" y2=\"" << f2(sy(v))
        << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << left - 8 << "\" y=\"" << f2(sy(v) + 4) << "\" text-anchor=\"end\">" << fixed(v, 0)
        << "</text>\n";
  }
  if (any) {
    std::set<int> ticks;
    for (const auto& [name, pts] : series) {
      for (const auto& p : pts) ticks.insert(p.n);
    }
    for (int n : ticks) {
      svg << "<line x1=\"" << f2(sx(n)) << "\" y1=\"" << top + plot_h << "\" x2=\"" << f2(sx(n)) << "\" y2=\""
          << top + plot_h + 4 << "\" stroke=\"black\"/>\n";
      svg << "<text x=\"" << f2(sx(n)) << "\" y=\"" << top + plot_h + 18 << "\" text-anchor=\"middle\">" << n
          << "</text>\n";
    }
  }
  svg << "<text x=\"" << f2(left + plot_w / 2) << "\" y=\"" << height - 16 << "\" text-anchor=\"middle\">n</text>\n";
  svg << "<text x=\"18\" y=\"" << f2(top + plot_h / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << f2(top + plot_h / 2) << ")\">fitness evaluations to target</text>\n";

  for (std::size_t s = 0; s < names.size(); ++s) {
    const char* colour = palette[s % (sizeof palette / sizeof palette[0])];
    const auto& pts = series.at(names[s]);
    svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) svg << (i ? " " : "") << f2(sx(pts[i].n)) << "," << f2(sy(pts[i].mean));
    svg << "\"/>\n";
    for (const auto& p : pts) {
      const double lo = std::max(0.0, p.mean - p.sd), hi = p.mean + p.sd;
      svg << "<line x1=\"" << f2(sx(p.n)) << "\" y1=\"" << f2(sy(lo)) << "\" x2=\"" << f2(sx(p.n)) << "\" y2=\""
          << f2(sy(hi)) << "\" stroke=\"" << colour << "\"/>\n";
      svg << "<circle cx=\"" << f2(sx(p.n)) << "\" cy=\"" << f2(sy(p.mean)) << "\" r=\"3\" fill=\"" << colour
          << "\"/>\n";
    }
    const double ly = top + 12 + 18.0 * static_cast<double>(s);
    svg << "<line x1=\"" << left + plot_w + 16 << "\" y1=\"" << f2(ly - 4) << "\" x2=\"" << left + plot_w + 36
        << "\" y2=\"" << f2(ly - 4) << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << left + plot_w + 42 << "\" y=\"" << f2(ly) << "\">" << names[s] << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace mpmo
