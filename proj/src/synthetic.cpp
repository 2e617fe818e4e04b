#include "elball/synthetic.hpp"

#include <algorithm>
#include <cstdio>

#include "elball/error.hpp"
#include "elball/trainer.hpp"

namespace elball {

namespace {

std::string entity_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "P%03zu", i);
  return buf;
}

}  // namespace

SyntheticData make_synthetic(const SyntheticConfig& cfg) {
  if (cfg.branches == 0 || cfg.modules < cfg.branches || cfg.leaves_per_module == 0 ||
      cfg.leaves_per_entity > cfg.leaves_per_module) {
    throw Error("inconsistent synthetic configuration");
  }
  SyntheticData out;
  Rng rng(cfg.seed);

  const std::string root = "F0";
  std::vector<std::string> modules, leaves;
  for (std::size_t b = 0; b < cfg.branches; ++b) {
    out.taxonomy.emplace_back(root + "." + std::to_string(b), root);
  }
  for (std::size_t m = 0; m < cfg.modules; ++m) {
    const std::size_t b = m % cfg.branches;
    const std::string branch = root + "." + std::to_string(b);
    modules.push_back(branch + "." + std::to_string(m));
    out.taxonomy.emplace_back(modules.back(), branch);
    for (std::size_t l = 0; l < cfg.leaves_per_module; ++l) {
      leaves.push_back(modules.back() + "." + std::to_string(l));
      out.taxonomy.emplace_back(leaves.back(), modules.back());
    }
  }

  auto& ds = out.dataset;
  for (std::size_t i = 0; i < cfg.entities; ++i) {
    const std::size_t m = rng.index(cfg.modules);
    out.module_of.push_back(m);
    std::vector<std::size_t> picks(cfg.leaves_per_module);
    for (std::size_t l = 0; l < picks.size(); ++l) picks[l] = l;
    for (std::size_t k = 0; k < cfg.leaves_per_entity; ++k) {
      std::swap(picks[k], picks[k + rng.index(picks.size() - k)]);
      ds.annotations.emplace_back(entity_name(i), leaves[m * cfg.leaves_per_module + picks[k]]);
    }
    if (rng.uniform() < cfg.extra_leaf_probability) {
      const auto& leaf = leaves[rng.index(leaves.size())];
      const Annotation a{entity_name(i), leaf};
      if (std::ranges::find(ds.annotations, a) == ds.annotations.end()) ds.annotations.push_back(a);
    }
  }

  for (std::size_t i = 0; i < cfg.entities; ++i) {
    for (std::size_t j = i + 1; j < cfg.entities; ++j) {
      const double p = out.module_of[i] == out.module_of[j] ? cfg.p_within : cfg.p_across;
      if (rng.uniform() < p) {
        ds.pairs.push_back({entity_name(i), entity_name(j), 400.0 + 600.0 * rng.uniform()});
      }
    }
  }
  return out;
}

std::string format_taxonomy(const std::vector<std::pair<std::string, std::string>>& edges) {
  std::string out;
  for (const auto& [sub, super] : edges) out += sub + " < " + super + "\n";
  return out;
}

}  // namespace elball
