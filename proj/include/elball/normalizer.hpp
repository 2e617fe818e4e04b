#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "elball/ontology.hpp"

namespace elball {

/// C < D
struct Nf1 {
  ClassId sub, super;
  friend auto operator<=>(const Nf1&, const Nf1&) = default;
};
/// C and D < E
struct Nf2 {
  ClassId left, right, super;
  friend auto operator<=>(const Nf2&, const Nf2&) = default;
};
/// C < R some D
struct Nf3 {
  ClassId sub;
  RelationId relation;
  ClassId filler;
  friend auto operator<=>(const Nf3&, const Nf3&) = default;
};
/// R some C < D
struct Nf4 {
  RelationId relation;
  ClassId filler;
  ClassId super;
  friend auto operator<=>(const Nf4&, const Nf4&) = default;
};
/// C < Bot
struct Bot1 {
  ClassId sub;
  friend auto operator<=>(const Bot1&, const Bot1&) = default;
};
/// C and D < Bot
struct Bot2 {
  ClassId left, right;
  friend auto operator<=>(const Bot2&, const Bot2&) = default;
};
/// R some C < Bot
struct Bot4 {
  RelationId relation;
  ClassId filler;
  friend auto operator<=>(const Bot4&, const Bot4&) = default;
};

enum class NormalForm { kNf1, kNf2, kNf3, kNf4, kBot1, kBot2, kBot4, kNotNormal };

std::string_view to_string(NormalForm f);

/// Axioms bucketed by normal form over an augmented class vocabulary.
/// Nominals {a} become classes named "{a}"; fresh classes are named "N#<k>".
struct NormalizedTheory {
  ClassVocabulary classes;
  RelationVocabulary relations;

  std::vector<Nf1> nf1;
  std::vector<Nf2> nf2;
  std::vector<Nf3> nf3;
  std::vector<Nf4> nf4;
  std::vector<Bot1> bot1;
  std::vector<Bot2> bot2;
  std::vector<Bot4> bot4;

  /// Classes introduced by normalization, in creation order.
  std::vector<ClassId> fresh;

  std::size_t axiom_count() const noexcept {
    return nf1.size() + nf2.size() + nf3.size() + nf4.size() + bot1.size() + bot2.size() +
           bot4.size();
  }
  bool empty() const noexcept { return axiom_count() == 0; }
};

/// Replaces r(a,b) by {a} < r some {b} and C(a) by {a} < C.
Ontology eliminate_abox(const Ontology& o);

/// Which normal-form bucket a TBox axiom already fits, if any. ABox axioms
/// are NotNormal.
NormalForm classify_axiom(const Axiom& a);

/// Rewrites the TBox into normal forms. Requires an ABox-free ontology; throws
/// UnsupportedAxiom for C < R some Bot on a right-hand side.
NormalizedTheory normalize(const Ontology& o);

/// The theory in the text format with one "# NF1" style header per bucket.
std::string format_theory(const NormalizedTheory& t);

}  // namespace elball
