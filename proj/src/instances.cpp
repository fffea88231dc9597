#include "mpmo/instances.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "mpmo/bpbomst.hpp"
#include "mpmo/error.hpp"

namespace mpmo {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr int kSchemaVersion = 1;

template <typename T>
T field(const json& j, const char* key) {
  require(j.contains(key), std::string("instance: missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ContractViolation(std::string("instance: bad field '") + key + "': " + e.what());
  }
}

// Largest scalarized cost on the tree path between the endpoints of `e`.
std::int64_t max_on_path(const std::vector<std::vector<std::pair<int, std::int64_t>>>& adj, int from, int to) {
  std::vector<std::int64_t> best(adj.size(), -1);
  std::vector<int> stack{from};
  best[from] = 0;
  while (!stack.empty()) {
    const int x = stack.back();
    stack.pop_back();
    for (auto [y, cost] : adj[x]) {
      if (best[y] < 0) {
        best[y] = std::max(best[x], cost);
        stack.push_back(y);
      }
    }
  }
  return best[to];
}

// `t` is the unique minimum spanning tree under c1*w1 + c2*w2 of `party`.
bool unique_mst(const SpanningTree& t, const MultiWeightedGraph& g, int party, std::int64_t c1, std::int64_t c2) {
  const std::size_t off = party == 1 ? 0 : 2;
  const auto cost = [&](EdgeId id) { return c1 * g.edge(id).w[off] + c2 * g.edge(id).w[off + 1]; };
  std::vector<std::vector<std::pair<int, std::int64_t>>> adj(static_cast<std::size_t>(g.n_vertices()));
  std::vector<char> in_tree(static_cast<std::size_t>(g.n_edges()), 0);
  for (EdgeId id : t.edge_ids) {
    in_tree[id] = 1;
    const Edge& e = g.edge(id);
    adj[e.u].emplace_back(e.v, cost(id));
    adj[e.v].emplace_back(e.u, cost(id));
  }
  for (EdgeId id = 0; id < g.n_edges(); ++id) {
    if (in_tree[id]) continue;
    if (cost(id) <= max_on_path(adj, g.edge(id).u, g.edge(id).v)) return false;
  }
  return true;
}

bool has_certificate(const SpanningTree& t, const MultiWeightedGraph& g, int party) {
  static constexpr std::array<std::array<std::int64_t, 2>, 9> kScalarizations{
      {{1, 1}, {1, 2}, {2, 1}, {1, 4}, {4, 1}, {1, 10}, {10, 1}, {1, 30}, {30, 1}}};
  return std::any_of(kScalarizations.begin(), kScalarizations.end(),
                     [&](const auto& c) { return unique_mst(t, g, party, c[0], c[1]); });
}

}  // namespace

ordered_json instance_to_json(const InstanceFile& inst) {
  ordered_json j;
  j["schema"] = kSchemaVersion;
  j["name"] = inst.name;
  j["n_vertices"] = inst.graph.n_vertices();
  j["w_max"] = inst.graph.w_max();
  ordered_json edges = ordered_json::array();
  for (const Edge& e : inst.graph.edges()) {
    ordered_json je;
    je["u"] = e.u;
    je["v"] = e.v;
    je["w"] = e.w;
    edges.push_back(std::move(je));
  }
  j["edges"] = std::move(edges);
  if (!inst.planted_trees.empty()) {
    ordered_json trees = ordered_json::array();
    for (const auto& t : inst.planted_trees) trees.push_back(t.edge_ids);
    j["planted_trees"] = std::move(trees);
  }
  if (!inst.pf_com.empty()) j["pf_com"] = inst.pf_com;
  if (inst.verified) j["verified"] = *inst.verified;
  if (inst.generator) {
    ordered_json gen;
    gen["seed"] = inst.generator->seed;
    gen["planted_requested"] = inst.generator->planted_requested;
    gen["key_cost"] = inst.generator->key_cost;
    gen["attempts"] = inst.generator->attempts;
    gen["pf_com_complete"] = inst.generator->pf_com_complete;
    gen["defaults"] = "w_max, key_cost and planted tree count are generator defaults, not measured values";
    j["generator"] = std::move(gen);
  }
  return j;
}

InstanceFile instance_from_json(const json& j) {
  require(j.is_object(), "instance: top level must be an object");
  require(field<int>(j, "schema") == kSchemaVersion, "instance: unsupported schema version");
  std::vector<Edge> edges;
  for (const auto& je : field<json>(j, "edges")) {
    edges.push_back({field<int>(je, "u"), field<int>(je, "v"), field<EdgeWeights>(je, "w")});
  }
  InstanceFile inst{j.value("name", std::string()),
                    MultiWeightedGraph(field<int>(j, "n_vertices"), std::move(edges), field<std::int64_t>(j, "w_max")),
                    {},
                    {},
                    std::nullopt,
                    std::nullopt};
  if (j.contains("planted_trees")) {
    for (const auto& ids : field<std::vector<std::vector<EdgeId>>>(j, "planted_trees")) {
      SpanningTree t(ids);
      require(is_spanning_tree(t, inst.graph), "instance: planted tree is not a spanning tree");
      inst.planted_trees.push_back(std::move(t));
    }
  }
  if (j.contains("pf_com")) inst.pf_com = field<std::vector<JointVector>>(j, "pf_com");
  if (j.contains("verified")) inst.verified = field<bool>(j, "verified");
  if (j.contains("generator")) {
    const json& gen = j.at("generator");
    inst.generator = GeneratorInfo{field<std::uint64_t>(gen, "seed"), field<int>(gen, "planted_requested"),
                                   field<std::int64_t>(gen, "key_cost"), field<int>(gen, "attempts"),
                                   field<bool>(gen, "pf_com_complete")};
  }
  return inst;
}

std::string serialize_instance(const InstanceFile& inst) { return instance_to_json(inst).dump(2) + "\n"; }

InstanceFile parse_instance(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ContractViolation(std::string("instance: malformed JSON: ") + e.what());
  }
  return instance_from_json(j);
}

InstanceFile read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ContractViolation("instance: cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_instance(buffer.str());
}

void write_instance_file(const InstanceFile& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << serialize_instance(inst);
}

InstanceFile generate_bpbomst_instance(int n, std::uint64_t seed, const PlantedParams& params) {
  require(n >= 3, "generate_bpbomst_instance: n must be at least 3");
  require(params.planted >= 1 && params.planted <= 3, "generate_bpbomst_instance: planted must be 1..3");
  require(params.key_cost >= 2, "generate_bpbomst_instance: key_cost must be at least 2");
  require(params.w_max >= 2 * params.key_cost + 2, "generate_bpbomst_instance: w_max too small for key_cost");
  const std::int64_t x = params.key_cost;
  // Key edges are cheap for one party and moderate for the other.
  const EdgeWeights key1{1, 1, x, x};
  const EdgeWeights key2{x, x, 1, 1};
  const auto uniform_in = [](Rng& r, std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(r.below(static_cast<std::uint64_t>(hi - lo + 1)));
  };

  Rng rng(seed);
  const std::size_t total_pairs = static_cast<std::size_t>(n) * (n - 1) / 2;
  const std::size_t target_edges = std::min<std::size_t>(2 * static_cast<std::size_t>(n), total_pairs);

  for (int attempt = 1; attempt <= params.max_attempts; ++attempt) {
    std::vector<std::pair<int, int>> pairs;
    std::set<std::pair<int, int>> seen;
    for (int i = 0; i + 1 < n; ++i) {
      pairs.emplace_back(i, i + 1);
      seen.insert({i, i + 1});
    }
    while (pairs.size() < target_edges) {
      int u = static_cast<int>(rng.index(n));
      int v = static_cast<int>(rng.index(n));
      if (u == v) continue;
      if (u > v) std::swap(u, v);
      if (seen.insert({u, v}).second) pairs.emplace_back(u, v);
    }
    std::vector<Edge> skeleton;
    for (auto [u, v] : pairs) skeleton.push_back({u, v, {1, 1, 1, 1}});
    const MultiWeightedGraph topology(n, skeleton, params.w_max);

    // Candidate trees with a party label per edge; the path alternates.
    std::vector<SpanningTree> candidates;
    std::vector<std::map<EdgeId, int>> labels;
    {
      std::vector<EdgeId> ids(static_cast<std::size_t>(n - 1));
      std::map<EdgeId, int> lab;
      for (int i = 0; i + 1 < n; ++i) {
        ids[i] = i;
        lab[i] = i % 2 == 0 ? 1 : 2;
      }
      candidates.emplace_back(ids);
      labels.push_back(std::move(lab));
    }
    for (int tries = 0; tries < 20 && static_cast<int>(candidates.size()) < params.planted; ++tries) {
      SpanningTree t = uniform_spanning_tree(full_subgraph(topology), topology, rng);
      if (std::find(candidates.begin(), candidates.end(), t) != candidates.end()) continue;
      std::vector<int> parties(t.edge_ids.size());
      for (std::size_t i = 0; i < parties.size(); ++i) parties[i] = i % 2 == 0 ? 1 : 2;
      for (std::size_t i = parties.size(); i > 1; --i) std::swap(parties[i - 1], parties[rng.index(i)]);
      std::map<EdgeId, int> lab;
      for (std::size_t i = 0; i < parties.size(); ++i) lab[t.edge_ids[i]] = parties[i];
      candidates.push_back(std::move(t));
      labels.push_back(std::move(lab));
    }
    // Chords trade off for one party and are expensive for the other.
    std::vector<EdgeWeights> filler(pairs.size());
    for (auto& w : filler) {
      const std::size_t off = rng.bernoulli(0.5) ? 0 : 2;
      const std::size_t other = 2 - off;
      const std::size_t cheap = off + (rng.bernoulli(0.5) ? 0 : 1);
      w[cheap] = uniform_in(rng, 1, x - 1);
      w[cheap == off ? off + 1 : off] = uniform_in(rng, 2 * x + 1 - w[cheap], params.w_max);
      w[other] = uniform_in(rng, params.w_max - 2, params.w_max);
      w[other + 1] = uniform_in(rng, params.w_max - 2, params.w_max);
    }
    std::vector<EdgeId> perm(pairs.size());
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.index(i)]);

    for (std::size_t count = candidates.size(); count >= 1; --count) {
      std::vector<Edge> edges(skeleton.size());
      for (std::size_t id = 0; id < skeleton.size(); ++id) {
        EdgeWeights w = filler[id];
        bool planted = false;
        for (std::size_t t = 0; t < count; ++t) {
          const auto it = labels[t].find(static_cast<EdgeId>(id));
          if (it == labels[t].end()) continue;
          const EdgeWeights& profile = it->second == 1 ? key1 : key2;
          for (std::size_t j = 0; j < 4; ++j) w[j] = planted ? std::min(w[j], profile[j]) : profile[j];
          planted = true;
        }
        edges[perm[id]] = {skeleton[id].u, skeleton[id].v, w};
      }
      const MultiWeightedGraph g(n, edges, params.w_max);
      std::vector<SpanningTree> planted;
      for (std::size_t t = 0; t < count; ++t) {
        std::vector<EdgeId> ids;
        for (EdgeId id : candidates[t].edge_ids) ids.push_back(perm[id]);
        planted.emplace_back(ids);
      }
      const bool certified = std::all_of(planted.begin(), planted.end(), [&](const SpanningTree& t) {
        return has_certificate(t, g, 1) && has_certificate(t, g, 2);
      });
      if (!certified) continue;

      std::set<JointVector> images;
      for (const auto& t : planted) images.insert(joint_vector(t, g));
      InstanceFile inst{"planted-n" + std::to_string(n) + "-s" + std::to_string(seed),
                        g,
                        planted,
                        std::vector<JointVector>(images.begin(), images.end()),
                        false,
                        GeneratorInfo{seed, params.planted, x, attempt, false}};
      if (n <= params.verify_max_n) {
        const CommonParetoSet oracle = brute_common_pareto(g, params.oracle_cap);
        const bool all_common = std::all_of(planted.begin(), planted.end(), [&](const SpanningTree& t) {
          return std::find(oracle.ps_com.begin(), oracle.ps_com.end(), t) != oracle.ps_com.end();
        });
        if (!all_common) continue;
        inst.verified = true;
        inst.generator->pf_com_complete = oracle.pf_com == images;
      }
      return inst;
    }
  }
  throw std::runtime_error("generate_bpbomst_instance: no certified planting for n=" + std::to_string(n) +
                           " seed=" + std::to_string(seed) + " after " + std::to_string(params.max_attempts) +
                           " attempts");
}

InstanceFile shortcut_example_instance() {
  // a=(0,1) b=(1,2) d=(2,3) e=(3,4) c=(0,2) g=(2,4) f=(1,3) h=(0,4)
  std::vector<Edge> edges{
      {0, 1, {1, 1, 4, 4}}, {1, 2, {3, 3, 1, 1}}, {2, 3, {1, 1, 4, 4}}, {3, 4, {3, 3, 1, 1}},
      {0, 2, {1, 6, 8, 8}}, {2, 4, {6, 1, 8, 8}}, {1, 3, {8, 8, 2, 7}}, {0, 4, {8, 8, 7, 2}},
  };
  MultiWeightedGraph g(5, std::move(edges), 8);
  const SpanningTree target({0, 1, 2, 3});
  return {"shortcut5", g, {target}, {joint_vector(target, g)}, std::nullopt, std::nullopt};
}

std::vector<InstanceFile> bundled_tiny_instances() {
  std::vector<InstanceFile> out;
  out.push_back(shortcut_example_instance());

  // Party 2 sees party 1's weights in swapped order, so both parties share
  // one Pareto set and the common front is a full bi-objective front.
  const auto mirrored = [](std::string name, int n, const std::vector<std::pair<int, int>>& pairs, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Edge> edges;
    for (auto [u, v] : pairs) {
      const auto a = static_cast<std::int64_t>(1 + rng.below(9));
      const auto b = static_cast<std::int64_t>(1 + rng.below(9));
      edges.push_back({u, v, {a, b, b, a}});
    }
    return InstanceFile{std::move(name), MultiWeightedGraph(n, std::move(edges), 9), {}, {}, std::nullopt,
                        std::nullopt};
  };
  std::vector<std::pair<int, int>> k4, k5, wheel;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) k4.emplace_back(i, j);
  }
  for (int i = 0; i < 5; ++i) {
    for (int j = i + 1; j < 5; ++j) k5.emplace_back(i, j);
  }
  for (int i = 1; i <= 5; ++i) {
    wheel.emplace_back(0, i);
    wheel.emplace_back(i, i % 5 + 1);
  }
  out.push_back(mirrored("k4-mirrored", 4, k4, 11));
  out.push_back(mirrored("k5-mirrored", 5, k5, 12));
  out.push_back(mirrored("wheel6-mirrored", 6, wheel, 13));
  out.push_back(generate_bpbomst_instance(5, 101));
  out.push_back(generate_bpbomst_instance(6, 102));
  out.push_back(generate_bpbomst_instance(7, 103));
  return out;
}

}  // namespace mpmo
