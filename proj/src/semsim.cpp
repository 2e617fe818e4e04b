#include "elball/semsim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "elball/error.hpp"

namespace elball {

namespace {

template <class T, class Sim>
double best_match_average(const std::vector<T>& a, const std::vector<T>& b, const Sim& sim) {
  if (a.empty() || b.empty()) throw Error("best-match average needs nonempty annotation sets");
  auto directed = [&](const std::vector<T>& from, const std::vector<T>& to, bool flip) {
    double total = 0.0;
    for (const auto& x : from) {
      double best = -std::numeric_limits<double>::infinity();
      for (const auto& y : to) best = std::max(best, flip ? sim(y, x) : sim(x, y));
      total += best;
    }
    return total / static_cast<double>(from.size());
  };
  return 0.5 * (directed(a, b, false) + directed(b, a, true));
}

}  // namespace

TaxonomyIndex TaxonomyIndex::build(
    const std::vector<std::pair<std::string, std::string>>& edges,
    const std::vector<std::pair<std::string, std::string>>& annotations,
    const std::vector<std::string>& classes) {
  TaxonomyIndex ix;
  for (const auto& c : classes) ix.names_.intern(c);
  for (const auto& [sub, super] : edges) {
    ix.names_.intern(sub);
    ix.names_.intern(super);
  }
  const std::size_t n = ix.names_.size();

  std::vector<std::vector<std::size_t>> parents(n);
  for (const auto& [sub, super] : edges) {
    parents[ix.class_index(sub)].push_back(ix.class_index(super));
  }

  // Reflexive-transitive closure by DFS from each class.
  ix.ancestors_.resize(n);
  std::vector<std::uint8_t> seen(n);
  std::vector<std::size_t> stack;
  for (std::size_t c = 0; c < n; ++c) {
    std::fill(seen.begin(), seen.end(), 0);
    stack.assign(1, c);
    seen[c] = 1;
    while (!stack.empty()) {
      const std::size_t x = stack.back();
      stack.pop_back();
      ix.ancestors_[c].push_back(x);
      for (std::size_t p : parents[x]) {
        if (!seen[p]) {
          seen[p] = 1;
          stack.push_back(p);
        }
      }
    }
    std::ranges::sort(ix.ancestors_[c]);
  }

  for (const auto& [entity, cls] : annotations) {
    if (!ix.names_.find(cls)) {
      throw Error("entity " + entity + " is annotated with unknown class " + cls);
    }
    const auto id = ix.entities_.intern(entity).value;
    if (id >= ix.entity_classes_.size()) {
      ix.entity_classes_.resize(id + 1);
      ix.entity_class_names_.resize(id + 1);
    }
    const std::size_t ci = ix.class_index(cls);
    auto& list = ix.entity_classes_[id];
    if (std::ranges::find(list, ci) == list.end()) {
      list.push_back(ci);
      ix.entity_class_names_[id].push_back(cls);
    }
  }

  std::vector<std::size_t> counts(n, 0);
  for (const auto& list : ix.entity_classes_) {
    std::set<std::size_t> covered;
    for (std::size_t c : list) covered.insert(ix.ancestors_[c].begin(), ix.ancestors_[c].end());
    for (std::size_t c : covered) ++counts[c];
  }
  ix.annotated_ = ix.entity_classes_.size();
  ix.ic_.resize(n);
  for (std::size_t c = 0; c < n; ++c) {
    if (counts[c] > 0) {
      ix.ic_[c] = -std::log(static_cast<double>(counts[c]) / static_cast<double>(ix.annotated_));
    }
  }
  return ix;
}

std::vector<std::pair<std::string, std::string>> TaxonomyIndex::edges_of(
    const NormalizedTheory& t) {
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(t.nf1.size());
  for (const auto& a : t.nf1) out.emplace_back(t.classes.name(a.sub), t.classes.name(a.super));
  return out;
}

bool TaxonomyIndex::has_class(const std::string& name) const {
  return names_.find(name).has_value();
}

std::size_t TaxonomyIndex::class_index(const std::string& name) const {
  const auto id = names_.find(name);
  if (!id) throw Error("unknown class " + name);
  return id->value;
}

std::optional<double> TaxonomyIndex::information_content(const std::string& cls) const {
  return ic_[class_index(cls)];
}

double TaxonomyIndex::resnik(std::size_t a, std::size_t b) const {
  const auto& x = ancestors_[a];
  const auto& y = ancestors_[b];
  double best = 0.0;
  // Both lists are sorted: walk them in step.
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    if (x[i] < y[j]) {
      ++i;
    } else if (y[j] < x[i]) {
      ++j;
    } else {
      if (ic_[x[i]]) best = std::max(best, *ic_[x[i]]);
      ++i;
      ++j;
    }
  }
  return best;
}

double TaxonomyIndex::lin(std::size_t a, std::size_t b) const {
  if (!ic_[a] || !ic_[b]) return 0.0;
  const double denom = *ic_[a] + *ic_[b];
  if (denom == 0.0) return 0.0;
  return 2.0 * resnik(a, b) / denom;
}

double TaxonomyIndex::sim(std::size_t a, std::size_t b, SimilarityMeasure m) const {
  return m == SimilarityMeasure::kResnik ? resnik(a, b) : lin(a, b);
}

double TaxonomyIndex::resnik(const std::string& c1, const std::string& c2) const {
  return resnik(class_index(c1), class_index(c2));
}

double TaxonomyIndex::lin(const std::string& c1, const std::string& c2) const {
  return lin(class_index(c1), class_index(c2));
}

double TaxonomyIndex::similarity(const std::string& c1, const std::string& c2,
                                 SimilarityMeasure m) const {
  return sim(class_index(c1), class_index(c2), m);
}

const std::vector<std::string>* TaxonomyIndex::annotations_of(const std::string& entity) const {
  const auto id = entities_.find(entity);
  if (!id) return nullptr;
  return &entity_class_names_[id->value];
}

double TaxonomyIndex::bma(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b,
                          SimilarityMeasure m) const {
  return best_match_average(a, b, [&](std::size_t x, std::size_t y) { return sim(x, y, m); });
}

double TaxonomyIndex::bma(const std::string& e1, const std::string& e2,
                          SimilarityMeasure m) const {
  const auto a = entities_.find(e1);
  const auto b = entities_.find(e2);
  if (!a) throw Error("entity " + e1 + " has no annotations");
  if (!b) throw Error("entity " + e2 + " has no annotations");
  return bma(entity_classes_[a->value], entity_classes_[b->value], m);
}

double bma_similarity(const std::vector<std::string>& a, const std::vector<std::string>& b,
                      const std::function<double(const std::string&, const std::string&)>& sim) {
  return best_match_average(a, b, sim);
}

Scorer semsim_scorer(const TaxonomyIndex& index, const LinkSplit& split, SimilarityMeasure m) {
  std::vector<std::string> names;
  std::vector<std::uint8_t> annotated;
  for (std::uint32_t i = 0; i < split.entities.size(); ++i) {
    names.push_back(split.entities.name(EntityId{i}));
    annotated.push_back(index.annotations_of(names.back()) != nullptr ? 1 : 0);
  }
  return [&index, names = std::move(names), annotated = std::move(annotated), m](EntityId h,
                                                                                EntityId t) {
    if (!annotated[h.value] || !annotated[t.value]) {
      return -std::numeric_limits<double>::infinity();
    }
    return index.bma(names[h.value], names[t.value], m);
  };
}

}  // namespace elball
