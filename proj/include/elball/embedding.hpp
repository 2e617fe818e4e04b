#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "elball/ontology.hpp"

namespace elball {

/// Radius standing in for an infinite Top ball. Never trained.
inline constexpr double kTopRadius = std::numeric_limits<double>::max();

/// Class balls and relation translation vectors.
///
/// All trainable scalars live in one flat parameter vector laid out as
/// [class centers | class radii | relation vectors], so optimizers and
/// gradients can treat the whole embedding as a single span. Class and
/// relation order follow the vocabularies they were built from: index 0 is
/// Top and index 1 is Bot.
class EmbeddingSet {
 public:
  EmbeddingSet() = default;
  EmbeddingSet(std::size_t dim, std::vector<std::string> class_names,
               std::vector<std::string> relation_names);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t class_count() const noexcept { return class_names_.size(); }
  std::size_t relation_count() const noexcept { return relation_names_.size(); }
  const std::vector<std::string>& class_names() const noexcept { return class_names_; }
  const std::vector<std::string>& relation_names() const noexcept { return relation_names_; }

  std::span<const double> center(ClassId c) const {
    return {params_.data() + center_offset(c), dim_};
  }
  std::span<double> center(ClassId c) { return {params_.data() + center_offset(c), dim_}; }
  double radius(ClassId c) const { return params_[radius_offset(c)]; }
  double& radius(ClassId c) { return params_[radius_offset(c)]; }
  std::span<const double> relation(RelationId r) const {
    return {params_.data() + relation_offset(r), dim_};
  }
  std::span<double> relation(RelationId r) {
    return {params_.data() + relation_offset(r), dim_};
  }

  std::size_t center_offset(ClassId c) const noexcept { return c.value * dim_; }
  std::size_t radius_offset(ClassId c) const noexcept {
    return class_count() * dim_ + c.value;
  }
  std::size_t relation_offset(RelationId r) const noexcept {
    return class_count() * (dim_ + 1) + r.value * dim_;
  }

  std::span<double> params() noexcept { return params_; }
  std::span<const double> params() const noexcept { return params_; }

  /// Top and Bot are fixed: Top is the whole space, Bot the empty ball.
  static bool frozen(ClassId c) noexcept {
    return c == ClassVocabulary::kTop || c == ClassVocabulary::kBot;
  }
  /// Restores the fixed Top/Bot parameters.
  void reset_frozen();

  /// Index of a class or relation by name; throws MissingSymbol.
  ClassId class_id(const std::string& name) const;
  RelationId relation_id(const std::string& name) const;

  friend bool operator==(const EmbeddingSet&, const EmbeddingSet&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> class_names_;
  std::vector<std::string> relation_names_;
  std::vector<double> params_;
};

/// Reorders an embedding to the given class/relation vocabularies by name.
/// Throws MissingSymbol when a vocabulary entry has no embedding.
EmbeddingSet align_embedding(const EmbeddingSet& e, const std::vector<std::string>& class_names,
                             const std::vector<std::string>& relation_names);

}  // namespace elball
