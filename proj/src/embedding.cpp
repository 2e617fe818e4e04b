#include "elball/embedding.hpp"

#include <algorithm>
#include <unordered_map>

#include "elball/error.hpp"

namespace elball {

EmbeddingSet::EmbeddingSet(std::size_t dim, std::vector<std::string> class_names,
                           std::vector<std::string> relation_names)
    : dim_(dim),
      class_names_(std::move(class_names)),
      relation_names_(std::move(relation_names)),
      params_(class_names_.size() * (dim + 1) + relation_names_.size() * dim, 0.0) {
  if (dim == 0) throw DimensionMismatch("embedding dimension must be positive");
  if (class_names_.size() < 2 || class_names_[0] != "Top" || class_names_[1] != "Bot") {
    throw Error("class table must start with Top and Bot");
  }
  reset_frozen();
}

void EmbeddingSet::reset_frozen() {
  for (ClassId c : {ClassVocabulary::kTop, ClassVocabulary::kBot}) {
    auto x = center(c);
    std::fill(x.begin(), x.end(), 0.0);
    x[0] = 1.0;
  }
  radius(ClassVocabulary::kTop) = kTopRadius;
  radius(ClassVocabulary::kBot) = 0.0;
}

ClassId EmbeddingSet::class_id(const std::string& name) const {
  auto it = std::find(class_names_.begin(), class_names_.end(), name);
  if (it == class_names_.end()) throw MissingSymbol("no embedding for class " + name);
  return ClassId{static_cast<std::uint32_t>(it - class_names_.begin())};
}

RelationId EmbeddingSet::relation_id(const std::string& name) const {
  auto it = std::find(relation_names_.begin(), relation_names_.end(), name);
  if (it == relation_names_.end()) throw MissingSymbol("no embedding for relation " + name);
  return RelationId{static_cast<std::uint32_t>(it - relation_names_.begin())};
}

EmbeddingSet align_embedding(const EmbeddingSet& e, const std::vector<std::string>& class_names,
                             const std::vector<std::string>& relation_names) {
  std::unordered_map<std::string, std::uint32_t> classes, relations;
  for (std::uint32_t i = 0; i < e.class_count(); ++i) classes.emplace(e.class_names()[i], i);
  for (std::uint32_t i = 0; i < e.relation_count(); ++i) relations.emplace(e.relation_names()[i], i);

  EmbeddingSet out(e.dim(), class_names, relation_names);
  for (std::uint32_t i = 0; i < class_names.size(); ++i) {
    auto it = classes.find(class_names[i]);
    if (it == classes.end()) throw MissingSymbol("no embedding for class " + class_names[i]);
    const ClassId src{it->second};
    const ClassId dst{i};
    std::ranges::copy(e.center(src), out.center(dst).begin());
    out.radius(dst) = e.radius(src);
  }
  for (std::uint32_t i = 0; i < relation_names.size(); ++i) {
    auto it = relations.find(relation_names[i]);
    if (it == relations.end()) throw MissingSymbol("no embedding for relation " + relation_names[i]);
    std::ranges::copy(e.relation(RelationId{it->second}), out.relation(RelationId{i}).begin());
  }
  return out;
}

}  // namespace elball
