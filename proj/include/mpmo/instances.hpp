#ifndef MPMO_INSTANCES_HPP
#define MPMO_INSTANCES_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mpmo/graph.hpp"

namespace mpmo {

struct GeneratorInfo {
  std::uint64_t seed = 0;
  int planted_requested = 0;
  std::int64_t key_cost = 0;
  int attempts = 0;
  bool pf_com_complete = false;  ///< planted images are the whole common front
  friend bool operator==(const GeneratorInfo&, const GeneratorInfo&) = default;
};

struct InstanceFile {
  std::string name;
  MultiWeightedGraph graph;
  std::vector<SpanningTree> planted_trees;
  std::vector<JointVector> pf_com;
  std::optional<bool> verified;
  std::optional<GeneratorInfo> generator;
};

nlohmann::ordered_json instance_to_json(const InstanceFile& inst);
/// Throws ContractViolation on schema or graph violations.
InstanceFile instance_from_json(const nlohmann::json& j);
std::string serialize_instance(const InstanceFile& inst);
InstanceFile parse_instance(const std::string& text);
InstanceFile read_instance_file(const std::string& path);
void write_instance_file(const InstanceFile& inst, const std::string& path);

struct PlantedParams {
  int planted = 1;
  std::int64_t w_max = 10;
  /// Cost of a key edge under the party it is not cheap for.
  std::int64_t key_cost = 2;
  int max_attempts = 200;
  /// Oracle verification runs up to this many vertices.
  int verify_max_n = 10;
  std::size_t oracle_cap = 5'000'000;
};

/// Path backbone plus random chords up to 2n edges, with up to
/// `params.planted` planted trees. Planted edges alternate between party-1 key
/// edges (1, 1, c, c) and party-2 key edges (c, c, 1, 1); chords are a
/// trade-off for one party and near w_max for the other. Each planted tree is
/// the unique minimum spanning tree of a positive scalarization of each
/// party's two weights, so it is Pareto-optimal for both parties. The path is
/// always planted; the others are uniform spanning trees, dropped one at a
/// time if no certificate is found. Edge ids are shuffled. Small instances are
/// re-checked by exhaustive enumeration.
InstanceFile generate_bpbomst_instance(int n, std::uint64_t seed, const PlantedParams& params = {});

/// Five vertices; the party-1-cheap edges a, d and the party-2-cheap edges
/// b, e form the common optimum {a, b, d, e}.
InstanceFile shortcut_example_instance();

/// Small named instances with at most 2000 spanning trees each.
std::vector<InstanceFile> bundled_tiny_instances();

}  // namespace mpmo

#endif  // MPMO_INSTANCES_HPP
