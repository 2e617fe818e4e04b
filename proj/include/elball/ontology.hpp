#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace elball {

/// Typed integer handle. The tag keeps class, relation and individual ids
/// from being mixed up at compile time.
template <class Tag>
struct Handle {
  std::uint32_t value = 0;

  friend constexpr bool operator==(Handle, Handle) = default;
  friend constexpr auto operator<=>(Handle, Handle) = default;
};

struct ClassTag {};
struct RelationTag {};
struct IndividualTag {};

using ClassId = Handle<ClassTag>;
using RelationId = Handle<RelationTag>;
using IndividualId = Handle<IndividualTag>;

/// Bijective name <-> handle interning table.
template <class Id>
class Vocabulary {
 public:
  Id intern(std::string_view name) {
    auto it = index_.find(std::string(name));
    if (it != index_.end()) return Id{it->second};
    const auto id = static_cast<std::uint32_t>(names_.size());
    names_.emplace_back(name);
    index_.emplace(names_.back(), id);
    return Id{id};
  }

  std::optional<Id> find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return Id{it->second};
  }

  const std::string& name(Id id) const { return names_.at(id.value); }
  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  bool operator==(const Vocabulary& other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

/// Class vocabulary with the reserved names "Top" and "Bot" pre-interned at
/// handles 0 and 1.
class ClassVocabulary : public Vocabulary<ClassId> {
 public:
  static constexpr ClassId kTop{0};
  static constexpr ClassId kBot{1};

  ClassVocabulary() {
    intern("Top");
    intern("Bot");
  }
};

using RelationVocabulary = Vocabulary<RelationId>;
using IndividualVocabulary = Vocabulary<IndividualId>;

/// Immutable EL++ concept expression. Copies share structure.
class Concept {
 public:
  enum class Kind { kAtomic, kNominal, kConjunction, kExistential, kTop, kBot };

  static Concept top();
  static Concept bot();
  static Concept atomic(ClassId c);
  static Concept nominal(IndividualId a);
  static Concept conjunction(Concept lhs, Concept rhs);
  static Concept existential(RelationId r, Concept filler);

  Kind kind() const noexcept { return node_->kind; }
  ClassId class_id() const { return ClassId{node_->symbol}; }
  IndividualId individual() const { return IndividualId{node_->symbol}; }
  RelationId relation() const { return RelationId{node_->symbol}; }

  /// Left operand of a conjunction.
  const Concept& lhs() const { return *node_->left; }
  /// Right operand of a conjunction, or the filler of an existential.
  const Concept& rhs() const { return *node_->right; }
  const Concept& filler() const { return *node_->right; }

  /// Single class name, nominal, Top or Bot.
  bool is_primitive() const noexcept {
    return kind() != Kind::kConjunction && kind() != Kind::kExistential;
  }
  /// Height of the expression tree; a single symbol has depth 1.
  std::size_t depth() const noexcept;

  friend bool operator==(const Concept& a, const Concept& b);

 private:
  struct Node {
    Kind kind;
    std::uint32_t symbol = 0;
    std::shared_ptr<const Concept> left;
    std::shared_ptr<const Concept> right;
  };

  explicit Concept(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

struct SourcePos {
  std::size_t line = 0;
  std::size_t column = 0;
};

struct GeneralInclusion {
  Concept sub;
  Concept super;
  friend bool operator==(const GeneralInclusion&, const GeneralInclusion&) = default;
};

/// C(a)
struct ClassAssertion {
  Concept type;
  IndividualId individual;
  friend bool operator==(const ClassAssertion&, const ClassAssertion&) = default;
};

/// r(a, b)
struct RoleAssertion {
  RelationId relation;
  IndividualId subject;
  IndividualId object;
  friend bool operator==(const RoleAssertion&, const RoleAssertion&) = default;
};

struct Axiom {
  std::variant<GeneralInclusion, ClassAssertion, RoleAssertion> body;
  SourcePos pos{};

  bool is_abox() const noexcept { return body.index() != 0; }

  /// Positions are diagnostics only and do not take part in equality.
  friend bool operator==(const Axiom& a, const Axiom& b) { return a.body == b.body; }
};

struct Ontology {
  ClassVocabulary classes;
  RelationVocabulary relations;
  IndividualVocabulary individuals;
  std::vector<Axiom> axioms;

  Axiom gci(Concept sub, Concept super) const {
    return Axiom{GeneralInclusion{std::move(sub), std::move(super)}};
  }
  Concept cls(std::string_view name) { return Concept::atomic(classes.intern(name)); }
  Concept nominal(std::string_view name) {
    return Concept::nominal(individuals.intern(name));
  }
  Concept some(std::string_view relation, Concept filler) {
    return Concept::existential(relations.intern(relation), std::move(filler));
  }
};

/// Parses the line-oriented text format:
///
///   Male < Person
///   Female and Male < Bot
///   Parent < hasChild some Top
///   {john} : Father
///   hasChild(john, mary)
///
/// "some" binds tighter than "and", "and" is left-associative, parentheses
/// group, "#" starts a comment. Symbols are declared on first use.
Ontology parse_ontology(std::string_view text);

/// Parses more axioms into an existing ontology, sharing its vocabularies.
void parse_into(Ontology& ontology, std::string_view text);

std::string format_concept(const Concept& c, const Ontology& o);
std::string format_axiom(const Axiom& a, const Ontology& o);
std::string format_ontology(const Ontology& o);

}  // namespace elball
