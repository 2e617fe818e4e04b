#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "elball/embedding.hpp"
#include "elball/geometry.hpp"
#include "elball/normalizer.hpp"
#include "elball/parallel.hpp"

namespace elball {

/// A loss split into its geometric max-terms and the unit-sphere terms
/// |‖center‖ - 1| of the classes involved.
struct LossTerms {
  double geometric = 0.0;
  double normalization = 0.0;

  double total() const noexcept { return geometric + normalization; }
};

// Single-axiom losses on explicit balls. `margin` is the slack γ; negative
// values demand strict interiors.

/// C < D
LossTerms loss_nf1(const Ball& c, const Ball& d, double margin);
/// C and D < E
LossTerms loss_nf2(const Ball& c, const Ball& d, const Ball& e, double margin);
/// C < R some D
LossTerms loss_nf3(const Ball& c, const Ball& d, std::span<const double> r, double margin);
/// R some C < D
LossTerms loss_nf4(const Ball& c, const Ball& d, std::span<const double> r, double margin);
/// C and D < Bot
LossTerms loss_bot2(const Ball& c, const Ball& d, double margin);
/// C < Bot
double loss_bot1(const Ball& c);
/// R some C < Bot. The translation cannot shrink a ball, so only the radius
/// matters.
double loss_bot4(const Ball& c, std::span<const double> r);
/// C is not below R some D
LossTerms loss_neg(const Ball& c, const Ball& d, std::span<const double> r, double margin);

/// Axiom tuples drawn for one optimizer step.
struct LossBatch {
  std::vector<Nf1> nf1;
  std::vector<Nf2> nf2;
  std::vector<Nf3> nf3;
  std::vector<Nf4> nf4;
  std::vector<Bot1> bot1;
  std::vector<Bot2> bot2;
  std::vector<Bot4> bot4;
  std::vector<Nf3> neg;
  double margin = 0.0;

  static constexpr std::array<std::string_view, 8> kBucketNames = {
      "nf1", "nf2", "nf3", "nf4", "bot1", "bot2", "bot4", "neg"};

  std::array<std::size_t, 8> bucket_sizes() const noexcept {
    return {nf1.size(), nf2.size(), nf3.size(), nf4.size(),
            bot1.size(), bot2.size(), bot4.size(), neg.size()};
  }
  std::size_t size() const noexcept;
};

/// Sum of every tuple's loss, unweighted.
double batch_loss(const LossBatch& b, const EmbeddingSet& e, Execution exec = Execution::kSerial);

/// Per-bucket loss sums in LossBatch::kBucketNames order.
std::array<double, 8> bucket_losses(const LossBatch& b, const EmbeddingSet& e);

struct BatchGradient {
  double loss = 0.0;
  /// Same layout as EmbeddingSet::params(). Top and Bot entries stay zero.
  std::vector<double> grad;
};

/// Loss and gradient over all trainable scalars. At kinks (max at zero,
/// norm of a zero vector, |x| at zero, min at a tie) the one-sided
/// derivative from the zero side is used.
BatchGradient batch_gradient(const LossBatch& b, const EmbeddingSet& e,
                             Execution exec = Execution::kSerial);

}  // namespace elball
