#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "elball/embedding.hpp"
#include "elball/ontology.hpp"
#include "elball/parallel.hpp"

namespace elball {

struct EntityTag {};
using EntityId = Handle<EntityTag>;

struct Triple {
  EntityId head;
  RelationId relation;
  EntityId tail;
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

/// Link triples split for evaluation. Entity and relation handles are local
/// to the split; scorers map them onto a model by name.
struct LinkSplit {
  Vocabulary<EntityId> entities;
  RelationVocabulary relations;
  std::vector<Triple> train;
  std::vector<Triple> valid;
  std::vector<Triple> test;

  Triple triple(std::string_view head, std::string_view relation, std::string_view tail) {
    return {entities.intern(head), relations.intern(relation), entities.intern(tail)};
  }
};

/// Plausibility of head --relation--> tail; larger is more plausible.
/// Must be safe to call concurrently.
using Scorer = std::function<double(EntityId head, EntityId tail)>;

/// -max(0, ‖c + r - d‖ - r_c - r_d - margin); never positive.
double score(const EmbeddingSet& e, ClassId c, RelationId r, ClassId d, double margin);

/// Scores split entities with an embedding. Entity "x" resolves to the class
/// "{x}" when present, otherwise to a class named "x".
Scorer embedding_scorer(const EmbeddingSet& e, const LinkSplit& split,
                        const std::string& relation, double margin);

struct QueryRank {
  std::size_t rank = 0;
  /// Candidates that were scored, the true tail included.
  std::size_t scored = 0;
};

/// Rank of the candidate at `true_index` among the non-excluded candidates.
/// Ties count against the true tail: rank = 1 + #{others with score >= its
/// score}. `excluded` (optional) flags candidates to skip; the true tail is
/// never skipped.
QueryRank rank_query(std::size_t true_index, std::span<const double> scores,
                     std::span<const std::uint8_t> excluded = {});

/// Ranks `true_tail` among `candidates` for the query (head, ?).
QueryRank rank_query(EntityId head, EntityId true_tail, std::span<const EntityId> candidates,
                     const Scorer& scorer, const std::set<EntityId>& exclude = {});

/// Per-query AUC with a single positive: (N - rank) / (N - 1).
double query_auc(const QueryRank& q);

struct RankMetrics {
  double hits_at_10 = 0.0;
  double hits_at_100 = 0.0;
  double mean_rank = 0.0;
  double auc = 0.0;
  friend bool operator==(const RankMetrics&, const RankMetrics&) = default;
};

struct RankingReport {
  RankMetrics raw;
  RankMetrics filtered;
  std::size_t queries = 0;
  std::size_t candidates = 0;
  friend bool operator==(const RankingReport&, const RankingReport&) = default;
};

/// Tails of `relation` over train, valid and test, ascending.
std::vector<EntityId> candidate_tails(const LinkSplit& split, RelationId relation);

/// Ranks the true tail of every test triple of `relation` against all
/// candidate tails. Filtered ranks skip tails known from train or valid for
/// the same head and relation.
RankingReport ranking_report(const LinkSplit& split, const std::string& relation,
                             const Scorer& scorer, Execution exec = Execution::kParallel);

/// JSON object keyed by the usual column names ("Raw Hits@10", ...).
std::string to_json(const RankingReport& r);

}  // namespace elball
