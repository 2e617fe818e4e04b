// Shared fixtures and brute-force oracles for the unit and acceptance tests.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "elball/embedding.hpp"
#include "elball/eval.hpp"
#include "elball/geometry.hpp"
#include "elball/losses.hpp"
#include "elball/normalizer.hpp"
#include "elball/ontology.hpp"

namespace elball::testing {

inline constexpr const char* kFamilyText =
    "Male < Person\n"
    "Female < Person\n"
    "Father < Male\n"
    "Mother < Female\n"
    "Father < Parent\n"
    "Mother < Parent\n"
    "Female and Male < Bot\n"
    "Female and Parent < Mother\n"
    "Male and Parent < Father\n"
    "hasChild some Person < Parent\n"
    "Parent < Person\n"
    "Parent < hasChild some Top\n";

inline Ball ball(std::vector<double> c, double r) { return Ball{std::move(c), r}; }

/// Embedding over Top, Bot and the given names, all parameters zero.
inline EmbeddingSet make_embedding(std::size_t dim, const std::vector<std::string>& classes,
                                   const std::vector<std::string>& relations) {
  std::vector<std::string> names{"Top", "Bot"};
  names.insert(names.end(), classes.begin(), classes.end());
  EmbeddingSet e(dim, names, relations);
  e.reset_frozen();
  return e;
}

inline void set_ball(EmbeddingSet& e, ClassId c, const std::vector<double>& center, double r) {
  std::copy(center.begin(), center.end(), e.center(c).begin());
  e.radius(c) = r;
}

inline void set_vector(EmbeddingSet& e, RelationId r, const std::vector<double>& v) {
  std::copy(v.begin(), v.end(), e.relation(r).begin());
}

/// Embedding aligned to a normalized theory, parameters zero.
inline EmbeddingSet embedding_for(const NormalizedTheory& t, std::size_t dim) {
  EmbeddingSet e(dim, t.classes.names(), t.relations.names());
  e.reset_frozen();
  return e;
}

// Printed loss formulas, evaluated directly on dense vectors.
namespace printed {

inline double norm(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}
inline std::vector<double> combine(const std::vector<double>& a, double sa,
                                   const std::vector<double>& b, double sb) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = sa * a[i] + sb * b[i];
  return out;
}
inline std::vector<double> sub(const std::vector<double>& a, const std::vector<double>& b) {
  return combine(a, 1, b, -1);
}
inline std::vector<double> add(const std::vector<double>& a, const std::vector<double>& b) {
  return combine(a, 1, b, 1);
}
inline double unit(const std::vector<double>& c) { return std::fabs(norm(c) - 1); }
inline double pos(double x) { return x > 0 ? x : 0; }

inline double nf1(const Ball& c, const Ball& d, double g) {
  return pos(norm(sub(c.center, d.center)) + c.radius - d.radius - g) + unit(c.center) +
         unit(d.center);
}
inline double nf2(const Ball& c, const Ball& d, const Ball& e, double g) {
  return pos(norm(sub(c.center, d.center)) - c.radius - d.radius - g) +
         pos(norm(sub(c.center, e.center)) - c.radius - g) +
         pos(norm(sub(d.center, e.center)) - c.radius - g) +
         pos(std::min(c.radius, d.radius) - e.radius - g) + unit(c.center) + unit(d.center) +
         unit(e.center);
}
inline double nf3(const Ball& c, const Ball& d, const std::vector<double>& r, double g) {
  return pos(norm(sub(add(c.center, r), d.center)) + c.radius - d.radius - g) +
         unit(c.center) + unit(d.center);
}
inline double nf4(const Ball& c, const Ball& d, const std::vector<double>& r, double g) {
  return pos(norm(sub(sub(c.center, r), d.center)) - c.radius - d.radius - g) +
         unit(c.center) + unit(d.center);
}
inline double bot2(const Ball& c, const Ball& d, double g) {
  return pos(c.radius + d.radius - norm(sub(c.center, d.center)) + g) + unit(c.center) +
         unit(d.center);
}
inline double neg(const Ball& c, const Ball& d, const std::vector<double>& r, double g) {
  return pos(c.radius + d.radius - norm(sub(add(c.center, r), d.center)) + g) +
         unit(c.center) + unit(d.center);
}

}  // namespace printed

/// Central finite-difference gradient of batch_loss over every parameter.
inline std::vector<double> numeric_gradient(const LossBatch& b, EmbeddingSet e, double step) {
  std::vector<double> g(e.params().size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = e.params()[i];
    e.params()[i] = x + step;
    const double up = batch_loss(b, e);
    e.params()[i] = x - step;
    const double down = batch_loss(b, e);
    e.params()[i] = x;
    g[i] = (up - down) / (2 * step);
  }
  return g;
}

/// Distance to the nearest non-differentiable point of the tuple losses in a
/// batch: arguments of max(0, .), norms, |norm - 1| and min ties.
inline double kink_distance(const LossBatch& b, const EmbeddingSet& e) {
  using namespace printed;
  auto vec = [&](std::span<const double> s) { return std::vector<double>(s.begin(), s.end()); };
  auto bl = [&](ClassId c) { return Ball{vec(e.center(c)), e.radius(c)}; };
  auto rv = [&](RelationId r) { return vec(e.relation(r)); };
  const double g = b.margin;
  double k = std::numeric_limits<double>::infinity();
  auto at = [&](double x) { k = std::min(k, std::fabs(x)); };
  auto centers = [&](std::initializer_list<ClassId> cs) {
    for (ClassId c : cs) {
      if (!EmbeddingSet::frozen(c)) at(norm(vec(e.center(c))) - 1);
    }
  };
  for (const auto& a : b.nf1) {
    const auto c = bl(a.sub), d = bl(a.super);
    const double n = norm(sub(c.center, d.center));
    at(n);
    at(n + c.radius - d.radius - g);
    centers({a.sub, a.super});
  }
  for (const auto& a : b.nf2) {
    const auto c = bl(a.left), d = bl(a.right), x = bl(a.super);
    const double n1 = norm(sub(c.center, d.center)), n2 = norm(sub(c.center, x.center)),
                 n3 = norm(sub(d.center, x.center));
    at(n1), at(n2), at(n3);
    at(n1 - c.radius - d.radius - g);
    at(n2 - c.radius - g);
    at(n3 - c.radius - g);
    at(c.radius - d.radius);
    at(std::min(c.radius, d.radius) - x.radius - g);
    centers({a.left, a.right, a.super});
  }
  auto translated = [&](ClassId ci, RelationId ri, ClassId di, double sign, bool neg_form,
                        bool sum_radii) {
    const auto c = bl(ci), d = bl(di);
    const double n = norm(sub(combine(c.center, 1, rv(ri), sign), d.center));
    at(n);
    if (neg_form) {
      at(c.radius + d.radius - n + g);
    } else if (sum_radii) {
      at(n - c.radius - d.radius - g);
    } else {
      at(n + c.radius - d.radius - g);
    }
    centers({ci, di});
  };
  for (const auto& a : b.nf3) translated(a.sub, a.relation, a.filler, 1, false, false);
  for (const auto& a : b.nf4) translated(a.filler, a.relation, a.super, -1, false, true);
  for (const auto& a : b.neg) translated(a.sub, a.relation, a.filler, 1, true, false);
  for (const auto& a : b.bot2) {
    const auto c = bl(a.left), d = bl(a.right);
    const double n = norm(sub(c.center, d.center));
    at(n);
    at(c.radius + d.radius - n + g);
    centers({a.left, a.right});
  }
  return k;
}

// ---------------------------------------------------------------------------
// EL subsumption oracle: saturation over the subconcepts of a TBox. Every
// subconcept is a node; S(x) collects the subconcepts subsuming x and R(r)
// links x to the filler node of each existential in S(x).

class SubsumptionOracle {
 public:
  SubsumptionOracle(const Ontology& o, const std::vector<std::string>& query_classes) {
    top_ = node_of(Concept::top(), o);
    bot_ = node_of(Concept::bot(), o);
    for (const auto& ax : o.axioms) {
      const auto& g = std::get<GeneralInclusion>(ax.body);
      gcis_.emplace_back(node_of(g.sub, o), node_of(g.super, o));
    }
    for (const auto& name : query_classes) atomic(name);
    saturate();
  }

  /// o |= a < b for atomic names a, b.
  bool subsumes(const std::string& a, const std::string& b) const {
    const auto ia = atoms_.at(a), ib = atoms_.at(b);
    return s_[ia].contains(ib) || s_[ia].contains(bot_);
  }
  bool unsatisfiable(const std::string& a) const { return s_[atoms_.at(a)].contains(bot_); }

 private:
  struct Node {
    int kind;  // 0 atom, 1 top, 2 bot, 3 and, 4 some
    std::string relation;
    int left = -1, right = -1;
  };

  int intern(const std::string& key, Node n) {
    auto [it, fresh] = index_.emplace(key, static_cast<int>(nodes_.size()));
    if (fresh) nodes_.push_back(std::move(n));
    return it->second;
  }
  int atomic(const std::string& name) {
    const int id = intern("A:" + name, Node{0, {}, -1, -1});
    atoms_[name] = id;
    return id;
  }
  int node_of(const Concept& c, const Ontology& o) {
    using K = Concept::Kind;
    switch (c.kind()) {
      case K::kTop: return intern("T", Node{1});
      case K::kBot: return intern("B", Node{2});
      case K::kAtomic: return atomic(o.classes.name(c.class_id()));
      case K::kNominal: return atomic("{" + o.individuals.name(c.individual()) + "}");
      case K::kConjunction: {
        const int l = node_of(c.lhs(), o), r = node_of(c.rhs(), o);
        return intern("(" + std::to_string(l) + "&" + std::to_string(r) + ")", Node{3, {}, l, r});
      }
      case K::kExistential: {
        const auto rel = o.relations.name(c.relation());
        const int f = node_of(c.filler(), o);
        return intern("E" + rel + "." + std::to_string(f), Node{4, rel, -1, f});
      }
    }
    return -1;
  }

  void saturate() {
    const std::size_t n = nodes_.size();
    s_.assign(n, {});
    for (std::size_t x = 0; x < n; ++x) {
      s_[x].insert(static_cast<int>(x));
      s_[x].insert(top_);
    }
    std::set<std::tuple<std::string, int, int>> edges;
    bool changed = true;
    while (changed) {
      changed = false;
      auto add = [&](std::size_t x, int c) {
        if (s_[x].insert(c).second) changed = true;
      };
      for (std::size_t x = 0; x < n; ++x) {
        const std::vector<int> current(s_[x].begin(), s_[x].end());
        for (int c : current) {
          const Node& nc = nodes_[c];
          if (nc.kind == 3) {
            add(x, nc.left);
            add(x, nc.right);
          }
          if (nc.kind == 4 &&
              edges.emplace(nc.relation, static_cast<int>(x), nc.right).second) {
            changed = true;
          }
          for (const auto& [sub, super] : gcis_) {
            if (sub == c) add(x, super);
          }
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Node& nk = nodes_[k];
          if (nk.kind == 3 && s_[x].contains(nk.left) && s_[x].contains(nk.right)) {
            add(x, static_cast<int>(k));
          }
        }
      }
      for (const auto& [rel, x, y] : edges) {
        if (s_[y].contains(bot_)) {
          if (s_[x].insert(bot_).second) changed = true;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Node& nk = nodes_[k];
          if (nk.kind == 4 && nk.relation == rel && s_[y].contains(nk.right)) {
            if (s_[x].insert(static_cast<int>(k)).second) changed = true;
          }
        }
      }
    }
  }

  std::vector<Node> nodes_;
  std::map<std::string, int> index_;
  std::map<std::string, int> atoms_;
  std::vector<std::pair<int, int>> gcis_;
  std::vector<std::set<int>> s_;
  int top_ = -1, bot_ = -1;
};

// ---------------------------------------------------------------------------
// Random EL ontologies over a small vocabulary, written in the text format.

class OntologyGenerator {
 public:
  explicit OntologyGenerator(std::uint64_t seed, std::size_t classes = 6)
      : rng_(seed), classes_(classes) {}

  std::string class_name() { return std::string(1, static_cast<char>('A' + pick(classes_))); }
  std::string relation_name() { return pick(2) == 0 ? "r" : "s"; }

  /// Concept text without Bot, at most `depth` constructors deep.
  std::string expression(std::size_t depth) {
    if (depth == 0 || chance(0.35)) return chance(0.08) ? "Top" : class_name();
    if (chance(0.5)) return "(" + expression(depth - 1) + " and " + expression(depth - 1) + ")";
    return relation_name() + " some (" + expression(depth - 1) + ")";
  }

  std::string tbox(std::size_t axioms, std::size_t depth) {
    std::string out;
    for (std::size_t i = 0; i < axioms; ++i) {
      const std::string lhs = chance(0.04) ? "Bot" : expression(depth);
      const std::string rhs = chance(0.1) ? "Bot" : expression(depth);
      out += lhs + " < " + rhs + "\n";
    }
    return out;
  }

  std::vector<std::string> class_names() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < classes_; ++i) out.emplace_back(1, static_cast<char>('A' + i));
    return out;
  }

  bool chance(double p) { return std::uniform_real_distribution<double>(0, 1)(rng_) < p; }
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

 private:
  std::mt19937_64 rng_;
  std::size_t classes_;
};

// ---------------------------------------------------------------------------
// Ranking metrics by sorting every candidate list.

struct OracleMetrics {
  double hits10 = 0, hits100 = 0, mean_rank = 0, auc = 0;
};

struct OracleReport {
  OracleMetrics raw, filtered;
};

inline OracleReport brute_force_ranking(const LinkSplit& split, RelationId rel,
                                        const std::function<double(EntityId, EntityId)>& score) {
  std::set<EntityId> tails;
  for (const auto* part : {&split.train, &split.valid, &split.test}) {
    for (const auto& t : *part) {
      if (t.relation == rel) tails.insert(t.tail);
    }
  }
  std::vector<Triple> queries;
  for (const auto& t : split.test) {
    if (t.relation == rel) queries.push_back(t);
  }

  auto measure = [&](bool filtered) {
    OracleMetrics m;
    for (const auto& q : queries) {
      std::vector<std::pair<double, int>> list;  // (score, 1 for the true tail)
      for (EntityId c : tails) {
        if (c == q.tail) {
          list.emplace_back(score(q.head, c), 1);
          continue;
        }
        bool known = false;
        if (filtered) {
          for (const auto* part : {&split.train, &split.valid}) {
            for (const auto& t : *part) {
              if (t.head == q.head && t.relation == rel && t.tail == c) known = true;
            }
          }
        }
        if (!known) list.emplace_back(score(q.head, c), 0);
      }
      // Best first; among equal scores the true tail goes last.
      std::sort(list.begin(), list.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
      });
      std::size_t rank = 0;
      for (std::size_t i = 0; i < list.size(); ++i) {
        if (list[i].second == 1) rank = i + 1;
      }
      const double target = list[rank - 1].first;
      std::size_t below = 0;
      for (const auto& [s, truth] : list) {
        if (!truth && s < target) ++below;
      }
      const std::size_t negatives = list.size() - 1;
      m.hits10 += rank <= 10 ? 1.0 : 0.0;
      m.hits100 += rank <= 100 ? 1.0 : 0.0;
      m.mean_rank += static_cast<double>(rank);
      m.auc += negatives == 0 ? 1.0
                              : static_cast<double>(below) / static_cast<double>(negatives);
    }
    const double n = static_cast<double>(queries.size());
    m.hits10 /= n;
    m.hits100 /= n;
    m.mean_rank /= n;
    m.auc /= n;
    return m;
  };
  return {measure(false), measure(true)};
}

/// Random split over `entities` entities and one relation, with integer
/// scores in a small range so that ties are common.
struct RankingInstance {
  LinkSplit split;
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> scores;

  double score(EntityId h, EntityId t) const { return scores.at({h.value, t.value}); }
};

inline RankingInstance random_ranking_instance(std::mt19937_64& rng, std::size_t entities,
                                               std::size_t triples) {
  RankingInstance inst;
  std::uniform_int_distribution<std::size_t> ent(0, entities - 1);
  std::uniform_int_distribution<int> level(0, 6);
  std::uniform_int_distribution<int> part(0, 9);
  for (std::size_t i = 0; i < entities; ++i) inst.split.entities.intern("e" + std::to_string(i));
  std::set<std::pair<std::size_t, std::size_t>> used;
  for (std::size_t k = 0; k < triples; ++k) {
    const auto h = ent(rng), t = ent(rng);
    if (!used.emplace(h, t).second) continue;
    const auto tr = inst.split.triple("e" + std::to_string(h), "rel", "e" + std::to_string(t));
    const int p = part(rng);
    (p < 6 ? inst.split.train : p < 8 ? inst.split.valid : inst.split.test).push_back(tr);
  }
  if (inst.split.test.empty()) {
    inst.split.test.push_back(inst.split.triple("e0", "rel", "e1"));
  }
  for (std::uint32_t h = 0; h < entities; ++h) {
    for (std::uint32_t t = 0; t < entities; ++t) inst.scores[{h, t}] = level(rng) * 0.5 - 1.0;
  }
  return inst;
}

}  // namespace elball::testing
