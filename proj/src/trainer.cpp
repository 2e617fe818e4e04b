#include "elball/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <set>
#include <tuple>

#include "elball/error.hpp"

namespace elball {

EmbeddingSet init_embeddings(const NormalizedTheory& t, std::size_t dim, Rng& rng) {
  EmbeddingSet e(dim, t.classes.names(), t.relations.names());
  for (std::uint32_t i = 0; i < e.class_count(); ++i) {
    for (double& x : e.center(ClassId{i})) x = rng.uniform();
    e.radius(ClassId{i}) = rng.uniform();
  }
  for (std::uint32_t i = 0; i < e.relation_count(); ++i) {
    for (double& x : e.relation(RelationId{i})) x = rng.uniform();
  }
  e.reset_frozen();
  return e;
}

EmbeddingSet init_embeddings(const NormalizedTheory& t, const TrainConfig& cfg) {
  Rng rng(cfg.seed);
  return init_embeddings(t, cfg.dim, rng);
}

NegativeSample generate_negatives(std::span<const Nf3> nf3, std::span<const ClassId> candidates,
                                  std::size_t k, Rng& rng, std::size_t retry_budget) {
  NegativeSample out;
  if (k == 0 || nf3.empty()) return out;
  if (candidates.empty()) throw Error("no candidate classes for negative generation");

  const std::set<Nf3> asserted(nf3.begin(), nf3.end());
  for (const auto& pos : nf3) {
    for (std::size_t j = 0; j < k; ++j) {
      bool found = false;
      for (std::size_t attempt = 0; attempt < retry_budget && !found; ++attempt) {
        Nf3 corrupted = pos;
        const bool replace_sub = rng.coin();
        const ClassId c = candidates[rng.index(candidates.size())];
        (replace_sub ? corrupted.sub : corrupted.filler) = c;
        if (!asserted.contains(corrupted)) {
          out.tuples.push_back(corrupted);
          found = true;
        }
      }
      if (!found) {
        ++out.skipped;
        break;
      }
    }
  }
  return out;
}

std::vector<ClassId> negative_candidates(const NormalizedTheory& t) {
  std::set<ClassId> seen;
  for (const auto& a : t.nf3) {
    seen.insert(a.sub);
    seen.insert(a.filler);
  }
  seen.erase(ClassVocabulary::kTop);
  seen.erase(ClassVocabulary::kBot);
  return {seen.begin(), seen.end()};
}

LossBatch full_batch(const NormalizedTheory& t, std::span<const Nf3> negatives, double margin) {
  LossBatch b;
  b.nf1 = t.nf1;
  b.nf2 = t.nf2;
  b.nf3 = t.nf3;
  b.nf4 = t.nf4;
  b.bot1 = t.bot1;
  b.bot2 = t.bot2;
  b.bot4 = t.bot4;
  b.neg.assign(negatives.begin(), negatives.end());
  b.margin = margin;
  return b;
}

namespace {

template <class T>
void sample_into(std::vector<T>& out, const std::vector<T>& from, std::size_t n, Rng& rng) {
  out.clear();
  if (from.empty()) return;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(from[rng.index(from.size())]);
}

void project_radii(EmbeddingSet& e) {
  for (std::uint32_t i = 0; i < e.class_count(); ++i) {
    double& r = e.radius(ClassId{i});
    if (r < 0.0) r = 0.0;
  }
  e.reset_frozen();
}

}  // namespace

TrainResult train(const NormalizedTheory& t, const TrainConfig& cfg) {
  if (t.empty()) throw Error("cannot train on an empty theory");
  if (cfg.dim == 0 || cfg.batch_size == 0 || cfg.steps_per_epoch == 0) {
    throw Error("dimension, batch size and steps per epoch must be positive");
  }

  Rng rng(cfg.seed);
  TrainResult result;
  result.embeddings = init_embeddings(t, cfg.dim, rng);
  EmbeddingSet& e = result.embeddings;

  const auto candidates = negative_candidates(t);
  auto make_negatives = [&] {
    if (cfg.negatives_per_positive == 0 || candidates.empty()) return NegativeSample{};
    auto s = generate_negatives(t.nf3, candidates, cfg.negatives_per_positive, rng,
                                cfg.negative_retry_budget);
    result.skipped_negatives += s.skipped;
    return s;
  };
  NegativeSample negatives = make_negatives();

  AdamState adam(e.params().size());
  LossBatch batch;
  batch.margin = cfg.margin;

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (cfg.negative_mode == NegativeMode::kFresh && epoch > 0) negatives = make_negatives();

    double epoch_loss = 0.0;
    for (std::size_t step = 0; step < cfg.steps_per_epoch; ++step) {
      sample_into(batch.nf1, t.nf1, cfg.batch_size, rng);
      sample_into(batch.nf2, t.nf2, cfg.batch_size, rng);
      sample_into(batch.nf3, t.nf3, cfg.batch_size, rng);
      sample_into(batch.nf4, t.nf4, cfg.batch_size, rng);
      sample_into(batch.bot1, t.bot1, cfg.batch_size, rng);
      sample_into(batch.bot2, t.bot2, cfg.batch_size, rng);
      sample_into(batch.bot4, t.bot4, cfg.batch_size, rng);
      sample_into(batch.neg, negatives.tuples, cfg.batch_size, rng);

      const BatchGradient g = batch_gradient(batch, e, cfg.execution);
      if (!std::isfinite(g.loss)) {
        const auto parts = bucket_losses(batch, e);
        std::string offending;
        for (std::size_t b = 0; b < parts.size(); ++b) {
          if (!std::isfinite(parts[b])) {
            offending += (offending.empty() ? "" : ", ") + std::string(LossBatch::kBucketNames[b]);
          }
        }
        if (offending.empty()) offending = "sum overflow";
        throw Error("non-finite loss at epoch " + std::to_string(epoch) +
                    " in bucket(s): " + offending);
      }
      epoch_loss += g.loss;
      adam_step(e.params(), g.grad, adam, cfg.adam);
      project_radii(e);
    }
    result.trace.minibatch.push_back(epoch_loss / static_cast<double>(cfg.steps_per_epoch));
    result.epochs_completed = epoch + 1;

    if (cfg.eval_every > 0 && (epoch + 1) % cfg.eval_every == 0) {
      const LossBatch all = full_batch(t, negatives.tuples, cfg.margin);
      result.trace.full.emplace_back(epoch + 1, batch_loss(all, e, Execution::kDeterministic));
    }
  }
  return result;
}

}  // namespace elball
