#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "elball/embedding.hpp"
#include "elball/normalizer.hpp"

namespace elball {

struct Ball {
  std::vector<double> center;
  double radius = 0.0;
};

double euclidean_distance(std::span<const double> a, std::span<const double> b);
double euclidean_norm(std::span<const double> a);

/// max(0, |c_inner - c_outer| + r_inner - r_outer); zero iff the closed inner
/// ball lies inside the closed outer ball.
double containment_violation(const Ball& inner, const Ball& outer);

/// Smallest ball enclosing the intersection of two balls, or nullopt when
/// they do not overlap (touching spheres count as disjoint).
std::optional<Ball> intersection_ball(const Ball& a, const Ball& b);

/// How NF2 axioms C and D < E are judged.
enum class Nf2Criterion {
  /// The exact ball around C and D must lie inside E.
  kExact,
  /// The four max-terms of the training loss at zero margin must vanish.
  kLossTerms,
};

struct AxiomCheck {
  NormalForm form;
  std::size_t index;  // position within its bucket
  std::string text;
  double violation;
  bool satisfied;
  bool informational;  // excluded from the overall verdict
};

struct ModelReport {
  std::vector<AxiomCheck> checks;
  bool overall = true;
  double tolerance = 0.0;
  double max_violation = 0.0;

  /// True when every non-informational check of this form passed.
  bool all_satisfied(NormalForm form) const;
};

/// Reads the embedding as an interpretation (open balls, relations as
/// translations) and checks every normal-form axiom against it. The
/// embedding must be aligned with the theory's vocabularies.
ModelReport check_model(const NormalizedTheory& t, const EmbeddingSet& e, double tol,
                        Nf2Criterion nf2 = Nf2Criterion::kExact);

std::string to_json(const ModelReport& report);

}  // namespace elball
