#include "elball/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "json.hpp"

#include "elball/error.hpp"

namespace elball {

double score(const EmbeddingSet& e, ClassId c, RelationId r, ClassId d, double margin) {
  const auto x = e.center(c);
  const auto v = e.relation(r);
  const auto y = e.center(d);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double u = x[i] + v[i] - y[i];
    s += u * u;
  }
  return -std::max(0.0, std::sqrt(s) - e.radius(c) - e.radius(d) - margin);
}

Scorer embedding_scorer(const EmbeddingSet& e, const LinkSplit& split,
                        const std::string& relation, double margin) {
  std::map<std::string, std::uint32_t> by_name;
  for (std::uint32_t i = 0; i < e.class_count(); ++i) by_name.emplace(e.class_names()[i], i);

  std::vector<ClassId> classes(split.entities.size());
  for (std::uint32_t i = 0; i < split.entities.size(); ++i) {
    const auto& name = split.entities.name(EntityId{i});
    auto it = by_name.find("{" + name + "}");
    if (it == by_name.end()) it = by_name.find(name);
    if (it == by_name.end()) throw MissingSymbol("no embedding for entity " + name);
    classes[i] = ClassId{it->second};
  }
  const RelationId r = e.relation_id(relation);
  return [&e, classes = std::move(classes), r, margin](EntityId h, EntityId t) {
    return score(e, classes[h.value], r, classes[t.value], margin);
  };
}

QueryRank rank_query(std::size_t true_index, std::span<const double> scores,
                     std::span<const std::uint8_t> excluded) {
  if (true_index >= scores.size()) throw Error("true tail is not among the candidates");
  const double target = scores[true_index];
  QueryRank q{1, 1};
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (i == true_index) continue;
    if (!excluded.empty() && excluded[i]) continue;
    ++q.scored;
    if (scores[i] >= target) ++q.rank;
  }
  return q;
}

QueryRank rank_query(EntityId head, EntityId true_tail, std::span<const EntityId> candidates,
                     const Scorer& scorer, const std::set<EntityId>& exclude) {
  const auto it = std::find(candidates.begin(), candidates.end(), true_tail);
  if (it == candidates.end()) throw Error("true tail is not among the candidates");
  std::vector<double> scores(candidates.size());
  std::vector<std::uint8_t> skip(candidates.size(), 0);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    scores[i] = scorer(head, candidates[i]);
    skip[i] = exclude.contains(candidates[i]) ? 1 : 0;
  }
  return rank_query(static_cast<std::size_t>(it - candidates.begin()), scores, skip);
}

double query_auc(const QueryRank& q) {
  if (q.scored <= 1) return 1.0;
  return static_cast<double>(q.scored - q.rank) / static_cast<double>(q.scored - 1);
}

std::vector<EntityId> candidate_tails(const LinkSplit& split, RelationId relation) {
  std::vector<EntityId> out;
  for (const auto* part : {&split.train, &split.valid, &split.test}) {
    for (const auto& t : *part) {
      if (t.relation == relation) out.push_back(t.tail);
    }
  }
  std::ranges::sort(out);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

struct QueryResult {
  QueryRank raw;
  QueryRank filtered;
};

RankMetrics summarize(const std::vector<QueryRank>& ranks) {
  RankMetrics m;
  for (const auto& q : ranks) {
    m.hits_at_10 += q.rank <= 10 ? 1.0 : 0.0;
    m.hits_at_100 += q.rank <= 100 ? 1.0 : 0.0;
    m.mean_rank += static_cast<double>(q.rank);
    m.auc += query_auc(q);
  }
  const double n = static_cast<double>(ranks.size());
  m.hits_at_10 /= n;
  m.hits_at_100 /= n;
  m.mean_rank /= n;
  m.auc /= n;
  return m;
}

}  // namespace

RankingReport ranking_report(const LinkSplit& split, const std::string& relation,
                             const Scorer& scorer, Execution exec) {
  const auto rel = split.relations.find(relation);
  if (!rel) throw Error("relation " + relation + " does not occur in the split");

  std::vector<Triple> queries;
  for (const auto& t : split.test) {
    if (t.relation == *rel) queries.push_back(t);
  }
  if (queries.empty()) throw Error("no test triples for relation " + relation);

  const auto candidates = candidate_tails(split, *rel);
  std::vector<std::size_t> position(split.entities.size(), candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) position[candidates[i].value] = i;

  std::map<EntityId, std::vector<std::size_t>> known;
  for (const auto* part : {&split.train, &split.valid}) {
    for (const auto& t : *part) {
      if (t.relation == *rel) known[t.head].push_back(position[t.tail.value]);
    }
  }

  std::vector<QueryResult> results(queries.size());
  auto run_query = [&](std::size_t qi, std::vector<double>& scores,
                       std::vector<std::uint8_t>& skip) {
    const Triple& q = queries[qi];
    for (std::size_t i = 0; i < candidates.size(); ++i) scores[i] = scorer(q.head, candidates[i]);
    const std::size_t truth = position[q.tail.value];
    results[qi].raw = rank_query(truth, scores);
    std::fill(skip.begin(), skip.end(), 0);
    if (auto it = known.find(q.head); it != known.end()) {
      for (std::size_t p : it->second) skip[p] = 1;
    }
    skip[truth] = 0;
    results[qi].filtered = rank_query(truth, scores, skip);
  };

  if (exec == Execution::kSerial) {
    std::vector<double> scores(candidates.size());
    std::vector<std::uint8_t> skip(candidates.size());
    for (std::size_t qi = 0; qi < queries.size(); ++qi) run_query(qi, scores, skip);
  } else {
#pragma omp parallel
    {
      std::vector<double> scores(candidates.size());
      std::vector<std::uint8_t> skip(candidates.size());
#pragma omp for schedule(dynamic, 8)
      for (std::ptrdiff_t qi = 0; qi < static_cast<std::ptrdiff_t>(queries.size()); ++qi) {
        run_query(static_cast<std::size_t>(qi), scores, skip);
      }
    }
  }

  std::vector<QueryRank> raw, filtered;
  raw.reserve(results.size());
  filtered.reserve(results.size());
  for (const auto& r : results) {
    raw.push_back(r.raw);
    filtered.push_back(r.filtered);
  }
  RankingReport report;
  report.raw = summarize(raw);
  report.filtered = summarize(filtered);
  report.queries = queries.size();
  report.candidates = candidates.size();
  return report;
}

std::string to_json(const RankingReport& r) {
  nlohmann::ordered_json j;
  j["Raw Hits@10"] = r.raw.hits_at_10;
  j["Filtered Hits@10"] = r.filtered.hits_at_10;
  j["Raw Hits@100"] = r.raw.hits_at_100;
  j["Filtered Hits@100"] = r.filtered.hits_at_100;
  j["Raw Mean Rank"] = r.raw.mean_rank;
  j["Filtered Mean Rank"] = r.filtered.mean_rank;
  j["Raw AUC"] = r.raw.auc;
  j["Filtered AUC"] = r.filtered.auc;
  j["queries"] = r.queries;
  j["candidates"] = r.candidates;
  return j.dump(2);
}

}  // namespace elball
