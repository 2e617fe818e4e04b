#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "elball/eval.hpp"
#include "elball/normalizer.hpp"

namespace elball {

enum class SimilarityMeasure { kResnik, kLin };

struct TaxonTag {};
struct AnnotatedTag {};

/// Subsumption closure over named classes plus annotation-frequency
/// information content: IC(c) = -log(n(c) / n), where n(c) counts annotated
/// entities whose classes have c as an ancestor and n counts all annotated
/// entities. Cycles in the edge set simply give their members identical
/// ancestor sets.
class TaxonomyIndex {
 public:
  /// `edges` are (subclass, superclass) pairs; `classes` may declare extra
  /// classes without edges. Annotations are (entity, class) pairs and must
  /// use known classes.
  static TaxonomyIndex build(const std::vector<std::pair<std::string, std::string>>& edges,
                             const std::vector<std::pair<std::string, std::string>>& annotations,
                             const std::vector<std::string>& classes = {});

  /// Atomic NF1 edges of a normalized theory.
  static std::vector<std::pair<std::string, std::string>> edges_of(const NormalizedTheory& t);

  bool has_class(const std::string& name) const;
  /// Information content, or nullopt for classes with no annotated entity.
  std::optional<double> information_content(const std::string& cls) const;
  std::size_t annotated_entities() const noexcept { return annotated_; }

  double resnik(const std::string& c1, const std::string& c2) const;
  double lin(const std::string& c1, const std::string& c2) const;
  double similarity(const std::string& c1, const std::string& c2, SimilarityMeasure m) const;

  const std::vector<std::string>* annotations_of(const std::string& entity) const;

  /// Best-match average of two entities' annotation sets: the mean best
  /// match of each e1 class in e2, averaged with the reverse direction.
  double bma(const std::string& e1, const std::string& e2, SimilarityMeasure m) const;

 private:
  std::size_t class_index(const std::string& name) const;
  double resnik(std::size_t a, std::size_t b) const;
  double lin(std::size_t a, std::size_t b) const;
  double sim(std::size_t a, std::size_t b, SimilarityMeasure m) const;
  double bma(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b,
             SimilarityMeasure m) const;

  Vocabulary<Handle<TaxonTag>> names_;
  std::vector<std::vector<std::size_t>> ancestors_;  // sorted, self included
  std::vector<std::optional<double>> ic_;
  Vocabulary<Handle<AnnotatedTag>> entities_;
  std::vector<std::vector<std::size_t>> entity_classes_;
  std::vector<std::vector<std::string>> entity_class_names_;
  std::size_t annotated_ = 0;
};

/// Best-match average over explicit class lists with a caller-supplied
/// pairwise similarity. Throws on an empty list.
double bma_similarity(const std::vector<std::string>& a, const std::vector<std::string>& b,
                      const std::function<double(const std::string&, const std::string&)>& sim);

/// Ranks with score(head, tail) = BMA similarity of their annotations;
/// entities without annotations score -infinity.
Scorer semsim_scorer(const TaxonomyIndex& index, const LinkSplit& split, SimilarityMeasure m);

}  // namespace elball
