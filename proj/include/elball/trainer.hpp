#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "elball/adam.hpp"
#include "elball/embedding.hpp"
#include "elball/losses.hpp"
#include "elball/normalizer.hpp"
#include "elball/parallel.hpp"

namespace elball {

/// 64-bit Mersenne Twister with portable uniform helpers, so seeded runs
/// match across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform on {0, ..., n-1}; n must be positive.
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  bool coin() { return (engine_() >> 63) != 0; }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

enum class NegativeMode {
  /// Corrupt once before training.
  kStatic,
  /// Corrupt again at the start of every epoch.
  kFresh,
};

struct TrainConfig {
  std::size_t dim = 50;
  double margin = -0.1;
  std::size_t epochs = 1000;
  std::size_t batch_size = 256;
  AdamConfig adam{};
  std::uint64_t seed = 0;
  std::size_t negatives_per_positive = 1;
  std::size_t steps_per_epoch = 1;
  NegativeMode negative_mode = NegativeMode::kStatic;
  /// Full-theory loss is recorded every this many epochs (0 = never).
  std::size_t eval_every = 0;
  std::size_t negative_retry_budget = 100;
  Execution execution = Execution::kParallel;
};

struct LossTrace {
  /// Minibatch loss per epoch, averaged over the epoch's steps.
  std::vector<double> minibatch;
  /// (epoch, loss over every axiom and current negative).
  std::vector<std::pair<std::size_t, double>> full;
};

struct NegativeSample {
  std::vector<Nf3> tuples;
  /// Positives for which no unasserted corruption was found in budget.
  std::size_t skipped = 0;
};

struct TrainResult {
  EmbeddingSet embeddings;
  LossTrace trace;
  std::size_t epochs_completed = 0;
  std::size_t skipped_negatives = 0;
};

/// Centers, radii and relation vectors drawn from uniform(0, 1) in class
/// order then relation order. Top gets the infinite-radius sentinel and Bot
/// a zero radius; both are frozen.
EmbeddingSet init_embeddings(const NormalizedTheory& t, const TrainConfig& cfg);
EmbeddingSet init_embeddings(const NormalizedTheory& t, std::size_t dim, Rng& rng);

/// For each C < R some D emits `k` corruptions that replace C or D (fair
/// coin) by a candidate such that the corrupted axiom is not asserted.
NegativeSample generate_negatives(std::span<const Nf3> nf3, std::span<const ClassId> candidates,
                                  std::size_t k, Rng& rng, std::size_t retry_budget = 100);

/// Classes that take part in some NF3 axiom, excluding Top and Bot.
std::vector<ClassId> negative_candidates(const NormalizedTheory& t);

/// Every axiom of the theory plus the given negatives as one batch.
LossBatch full_batch(const NormalizedTheory& t, std::span<const Nf3> negatives, double margin);

/// Minibatch Adam training. Each step draws `batch_size` tuples with
/// replacement from every nonempty bucket, then clamps radii at zero.
TrainResult train(const NormalizedTheory& t, const TrainConfig& cfg);

}  // namespace elball
