#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "elball/ingest.hpp"

namespace elball {

/// Shape of the synthetic interaction benchmark. Function classes form a tree
/// root -> `branches` -> `modules` -> `leaves_per_module` leaves, with
/// modules spread evenly over branches. Every entity belongs to one module,
/// is annotated with `leaves_per_entity` distinct leaves of that module and,
/// with probability `extra_leaf_probability`, one further leaf drawn from the
/// whole tree. Each unordered entity pair interacts with probability
/// `p_within` when the two share a module and `p_across` otherwise, with a
/// confidence drawn uniformly from [400, 1000).
struct SyntheticConfig {
  std::size_t entities = 200;
  std::size_t branches = 4;
  std::size_t modules = 16;
  std::size_t leaves_per_module = 3;
  std::size_t leaves_per_entity = 2;
  double extra_leaf_probability = 0.3;
  double p_within = 0.35;
  double p_across = 0.006;
  std::uint64_t seed = 7;
};

struct SyntheticData {
  InteractionDataset dataset;
  /// (subclass, superclass) edges of the function tree.
  std::vector<std::pair<std::string, std::string>> taxonomy;
  std::vector<std::size_t> module_of;
};

SyntheticData make_synthetic(const SyntheticConfig& config = {});

/// Writes the taxonomy as "Sub < Super" lines.
std::string format_taxonomy(const std::vector<std::pair<std::string, std::string>>& edges);

}  // namespace elball
