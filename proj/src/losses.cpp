#include "elball/losses.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "elball/error.hpp"

namespace elball {

std::size_t LossBatch::size() const noexcept {
  const auto s = bucket_sizes();
  return std::accumulate(s.begin(), s.end(), std::size_t{0});
}

namespace {

// ---------------------------------------------------------------------------
// Gradient sinks. Every kernel pushes (parameter index, partial derivative)
// pairs through a sink in a fixed order, so dense accumulation and recorded
// replay perform the same floating-point additions.

struct NoGrad {
  static constexpr bool kEnabled = false;
  void add(std::size_t, double) {}
};

struct DenseSink {
  static constexpr bool kEnabled = true;
  double* grad;
  void add(std::size_t i, double v) { grad[i] += v; }
};

struct RecordSink {
  static constexpr bool kEnabled = true;
  std::pair<std::size_t, double>* out;
  std::size_t count = 0;
  void add(std::size_t i, double v) { out[count++] = {i, v}; }
};

struct BallRef {
  std::span<const double> center;
  double radius;
  std::size_t center_slot = 0;
  std::size_t radius_slot = 0;
  bool trainable = false;
};

struct VecRef {
  std::span<const double> v;
  std::size_t slot = 0;
  bool trainable = false;
};

// One signed operand of a vector combination such as c + r - d.
struct Operand {
  std::span<const double> v;
  std::size_t slot;
  bool trainable;
  double sign;
};

Operand op(const BallRef& b, double sign) { return {b.center, b.center_slot, b.trainable, sign}; }
Operand op(const VecRef& r, double sign) { return {r.v, r.slot, r.trainable, sign}; }

template <std::size_t N>
double combo_norm(const std::array<Operand, N>& ops) {
  const std::size_t dim = ops[0].v.size();
  double s = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    double u = 0.0;
    for (const auto& o : ops) u += o.sign * o.v[i];
    s += u * u;
  }
  return std::sqrt(s);
}

// Adds scale * d‖Σ sign·v‖ / dv to every trainable operand.
template <class Sink, std::size_t N>
void combo_grad(const std::array<Operand, N>& ops, double norm, double scale, Sink& sink) {
  if constexpr (Sink::kEnabled) {
    if (norm == 0.0) return;
    const std::size_t dim = ops[0].v.size();
    for (std::size_t i = 0; i < dim; ++i) {
      double u = 0.0;
      for (const auto& o : ops) u += o.sign * o.v[i];
      const double g = scale * u / norm;
      for (const auto& o : ops) {
        if (o.trainable) sink.add(o.slot + i, o.sign * g);
      }
    }
  }
}

template <class Sink>
void radius_grad(const BallRef& b, double g, Sink& sink) {
  if constexpr (Sink::kEnabled) {
    if (b.trainable) sink.add(b.radius_slot, g);
  }
}

// |‖x‖ - 1|
template <class Sink>
double unit_term(const BallRef& b, Sink& sink) {
  const double n = euclidean_norm(b.center);
  const double dev = n - 1.0;
  if constexpr (Sink::kEnabled) {
    if (b.trainable && dev != 0.0 && n > 0.0) {
      const double sign = dev > 0.0 ? 1.0 : -1.0;
      for (std::size_t i = 0; i < b.center.size(); ++i) {
        sink.add(b.center_slot + i, sign * b.center[i] / n);
      }
    }
  }
  return std::abs(dev);
}

template <class Sink>
LossTerms nf1_kernel(const BallRef& c, const BallRef& d, double margin, Sink& sink) {
  const std::array ops{op(c, 1.0), op(d, -1.0)};
  const double dist = combo_norm(ops);
  const double z = dist + c.radius - d.radius - margin;
  LossTerms out;
  if (z > 0.0) {
    out.geometric = z;
    combo_grad(ops, dist, 1.0, sink);
    radius_grad(c, 1.0, sink);
    radius_grad(d, -1.0, sink);
  }
  out.normalization = unit_term(c, sink) + unit_term(d, sink);
  return out;
}

template <class Sink>
LossTerms nf2_kernel(const BallRef& c, const BallRef& d, const BallRef& e, double margin,
                     Sink& sink) {
  LossTerms out;
  const std::array cd{op(c, 1.0), op(d, -1.0)};
  const double dist_cd = combo_norm(cd);
  if (const double z = dist_cd - c.radius - d.radius - margin; z > 0.0) {
    out.geometric += z;
    combo_grad(cd, dist_cd, 1.0, sink);
    radius_grad(c, -1.0, sink);
    radius_grad(d, -1.0, sink);
  }
  const std::array ce{op(c, 1.0), op(e, -1.0)};
  const double dist_ce = combo_norm(ce);
  if (const double z = dist_ce - c.radius - margin; z > 0.0) {
    out.geometric += z;
    combo_grad(ce, dist_ce, 1.0, sink);
    radius_grad(c, -1.0, sink);
  }
  // Uses C's radius, not D's, exactly as the published objective does.
  const std::array de{op(d, 1.0), op(e, -1.0)};
  const double dist_de = combo_norm(de);
  if (const double z = dist_de - c.radius - margin; z > 0.0) {
    out.geometric += z;
    combo_grad(de, dist_de, 1.0, sink);
    radius_grad(c, -1.0, sink);
  }
  const bool c_smaller = c.radius <= d.radius;
  const double smaller = c_smaller ? c.radius : d.radius;
  if (const double z = smaller - e.radius - margin; z > 0.0) {
    out.geometric += z;
    radius_grad(c_smaller ? c : d, 1.0, sink);
    radius_grad(e, -1.0, sink);
  }
  out.normalization = unit_term(c, sink) + unit_term(d, sink) + unit_term(e, sink);
  return out;
}

template <class Sink>
LossTerms nf3_kernel(const BallRef& c, const BallRef& d, const VecRef& r, double margin,
                     Sink& sink) {
  const std::array ops{op(c, 1.0), op(r, 1.0), op(d, -1.0)};
  const double dist = combo_norm(ops);
  LossTerms out;
  if (const double z = dist + c.radius - d.radius - margin; z > 0.0) {
    out.geometric = z;
    combo_grad(ops, dist, 1.0, sink);
    radius_grad(c, 1.0, sink);
    radius_grad(d, -1.0, sink);
  }
  out.normalization = unit_term(c, sink) + unit_term(d, sink);
  return out;
}

template <class Sink>
LossTerms nf4_kernel(const BallRef& c, const BallRef& d, const VecRef& r, double margin,
                     Sink& sink) {
  const std::array ops{op(c, 1.0), op(r, -1.0), op(d, -1.0)};
  const double dist = combo_norm(ops);
  LossTerms out;
  if (const double z = dist - c.radius - d.radius - margin; z > 0.0) {
    out.geometric = z;
    combo_grad(ops, dist, 1.0, sink);
    radius_grad(c, -1.0, sink);
    radius_grad(d, -1.0, sink);
  }
  out.normalization = unit_term(c, sink) + unit_term(d, sink);
  return out;
}

template <class Sink>
LossTerms bot2_kernel(const BallRef& c, const BallRef& d, double margin, Sink& sink) {
  const std::array ops{op(c, 1.0), op(d, -1.0)};
  const double dist = combo_norm(ops);
  LossTerms out;
  if (const double z = c.radius + d.radius - dist + margin; z > 0.0) {
    out.geometric = z;
    radius_grad(c, 1.0, sink);
    radius_grad(d, 1.0, sink);
    combo_grad(ops, dist, -1.0, sink);
  }
  out.normalization = unit_term(c, sink) + unit_term(d, sink);
  return out;
}

template <class Sink>
double radius_kernel(const BallRef& c, Sink& sink) {
  radius_grad(c, 1.0, sink);
  return c.radius;
}

template <class Sink>
LossTerms neg_kernel(const BallRef& c, const BallRef& d, const VecRef& r, double margin,
                     Sink& sink) {
  const std::array ops{op(c, 1.0), op(r, 1.0), op(d, -1.0)};
  const double dist = combo_norm(ops);
  LossTerms out;
  if (const double z = c.radius + d.radius - dist + margin; z > 0.0) {
    out.geometric = z;
    radius_grad(c, 1.0, sink);
    radius_grad(d, 1.0, sink);
    combo_grad(ops, dist, -1.0, sink);
  }
  out.normalization = unit_term(c, sink) + unit_term(d, sink);
  return out;
}

BallRef ref(const Ball& b) { return {b.center, b.radius}; }
VecRef ref(std::span<const double> v) { return {v}; }

void require_dims(std::size_t a, std::size_t b) {
  if (a != b) {
    throw DimensionMismatch("dimension mismatch: " + std::to_string(a) + " vs " +
                            std::to_string(b));
  }
}

}  // namespace

LossTerms loss_nf1(const Ball& c, const Ball& d, double margin) {
  require_dims(c.center.size(), d.center.size());
  NoGrad s;
  return nf1_kernel(ref(c), ref(d), margin, s);
}

LossTerms loss_nf2(const Ball& c, const Ball& d, const Ball& e, double margin) {
  require_dims(c.center.size(), d.center.size());
  require_dims(c.center.size(), e.center.size());
  NoGrad s;
  return nf2_kernel(ref(c), ref(d), ref(e), margin, s);
}

LossTerms loss_nf3(const Ball& c, const Ball& d, std::span<const double> r, double margin) {
  require_dims(c.center.size(), d.center.size());
  require_dims(c.center.size(), r.size());
  NoGrad s;
  return nf3_kernel(ref(c), ref(d), ref(r), margin, s);
}

LossTerms loss_nf4(const Ball& c, const Ball& d, std::span<const double> r, double margin) {
  require_dims(c.center.size(), d.center.size());
  require_dims(c.center.size(), r.size());
  NoGrad s;
  return nf4_kernel(ref(c), ref(d), ref(r), margin, s);
}

LossTerms loss_bot2(const Ball& c, const Ball& d, double margin) {
  require_dims(c.center.size(), d.center.size());
  NoGrad s;
  return bot2_kernel(ref(c), ref(d), margin, s);
}

double loss_bot1(const Ball& c) { return c.radius; }

double loss_bot4(const Ball& c, std::span<const double> /*r*/) { return c.radius; }

LossTerms loss_neg(const Ball& c, const Ball& d, std::span<const double> r, double margin) {
  require_dims(c.center.size(), d.center.size());
  require_dims(c.center.size(), r.size());
  NoGrad s;
  return neg_kernel(ref(c), ref(d), ref(r), margin, s);
}

namespace {

BallRef ref(const EmbeddingSet& e, ClassId c) {
  return {e.center(c), e.radius(c), e.center_offset(c), e.radius_offset(c),
          !EmbeddingSet::frozen(c)};
}

VecRef ref(const EmbeddingSet& e, RelationId r) {
  return {e.relation(r), e.relation_offset(r), true};
}

// Loss of the t-th tuple in bucket order nf1, nf2, nf3, nf4, bot1, bot2,
// bot4, neg.
class TupleEvaluator {
 public:
  TupleEvaluator(const LossBatch& b, const EmbeddingSet& e) : b_(b), e_(e) {
    const auto sizes = b.bucket_sizes();
    std::partial_sum(sizes.begin(), sizes.end(), ends_.begin());
  }

  std::size_t size() const noexcept { return ends_.back(); }

  std::size_t bucket_of(std::size_t t) const {
    return static_cast<std::size_t>(std::upper_bound(ends_.begin(), ends_.end(), t) -
                                    ends_.begin());
  }

  template <class Sink>
  double operator()(std::size_t t, Sink& sink) const {
    const std::size_t bucket = bucket_of(t);
    const std::size_t i = t - (bucket == 0 ? 0 : ends_[bucket - 1]);
    const double m = b_.margin;
    switch (bucket) {
      case 0: {
        const auto& a = b_.nf1[i];
        return nf1_kernel(ref(e_, a.sub), ref(e_, a.super), m, sink).total();
      }
      case 1: {
        const auto& a = b_.nf2[i];
        return nf2_kernel(ref(e_, a.left), ref(e_, a.right), ref(e_, a.super), m, sink).total();
      }
      case 2: {
        const auto& a = b_.nf3[i];
        return nf3_kernel(ref(e_, a.sub), ref(e_, a.filler), ref(e_, a.relation), m, sink)
            .total();
      }
      case 3: {
        const auto& a = b_.nf4[i];
        return nf4_kernel(ref(e_, a.filler), ref(e_, a.super), ref(e_, a.relation), m, sink)
            .total();
      }
      case 4:
        return radius_kernel(ref(e_, b_.bot1[i].sub), sink);
      case 5: {
        const auto& a = b_.bot2[i];
        return bot2_kernel(ref(e_, a.left), ref(e_, a.right), m, sink).total();
      }
      case 6:
        return radius_kernel(ref(e_, b_.bot4[i].filler), sink);
      default: {
        const auto& a = b_.neg[i];
        return neg_kernel(ref(e_, a.sub), ref(e_, a.filler), ref(e_, a.relation), m, sink)
            .total();
      }
    }
  }

 private:
  const LossBatch& b_;
  const EmbeddingSet& e_;
  std::array<std::size_t, 8> ends_{};
};

void validate(const LossBatch& b, const EmbeddingSet& e) {
  auto cls = [&](ClassId c) {
    if (c.value >= e.class_count()) {
      throw MissingSymbol("batch references class #" + std::to_string(c.value) +
                          " with no embedding");
    }
  };
  auto rel = [&](RelationId r) {
    if (r.value >= e.relation_count()) {
      throw MissingSymbol("batch references relation #" + std::to_string(r.value) +
                          " with no embedding");
    }
  };
  for (const auto& a : b.nf1) cls(a.sub), cls(a.super);
  for (const auto& a : b.nf2) cls(a.left), cls(a.right), cls(a.super);
  for (const auto& a : b.nf3) cls(a.sub), rel(a.relation), cls(a.filler);
  for (const auto& a : b.nf4) rel(a.relation), cls(a.filler), cls(a.super);
  for (const auto& a : b.bot1) cls(a.sub);
  for (const auto& a : b.bot2) cls(a.left), cls(a.right);
  for (const auto& a : b.bot4) rel(a.relation), cls(a.filler);
  for (const auto& a : b.neg) cls(a.sub), rel(a.relation), cls(a.filler);
}

int thread_id() {
#ifdef _OPENMP
  return omp_get_thread_num();
#else
  return 0;
#endif
}

int team_size() {
#ifdef _OPENMP
  return omp_get_num_threads();
#else
  return 1;
#endif
}

BatchGradient gradient_serial(const TupleEvaluator& eval, std::size_t nparams) {
  BatchGradient out{0.0, std::vector<double>(nparams, 0.0)};
  DenseSink sink{out.grad.data()};
  for (std::size_t t = 0; t < eval.size(); ++t) out.loss += eval(t, sink);
  return out;
}

BatchGradient gradient_parallel(const TupleEvaluator& eval, std::size_t nparams) {
  const std::size_t n = eval.size();
  std::vector<std::vector<double>> partial_grad(max_threads());
  std::vector<double> partial_loss(max_threads(), 0.0);
  int used = 1;
#pragma omp parallel
  {
    const int tid = thread_id();
    const int nt = team_size();
#pragma omp single
    used = nt;
    auto& g = partial_grad[tid];
    g.assign(nparams, 0.0);
    DenseSink sink{g.data()};
    const std::size_t begin = n * tid / nt;
    const std::size_t end = n * (tid + 1) / nt;
    double loss = 0.0;
    for (std::size_t t = begin; t < end; ++t) loss += eval(t, sink);
    partial_loss[tid] = loss;
  }
  BatchGradient out{0.0, std::move(partial_grad[0])};
  out.loss = partial_loss[0];
  for (int t = 1; t < used; ++t) {
    out.loss += partial_loss[t];
    const auto& g = partial_grad[t];
    for (std::size_t i = 0; i < nparams; ++i) out.grad[i] += g[i];
  }
  return out;
}

BatchGradient gradient_deterministic(const TupleEvaluator& eval, const EmbeddingSet& e) {
  const std::size_t n = eval.size();
  // Most entries one tuple can emit: NF2 has three two-operand norms and
  // three unit terms (9 * dim) plus at most six radius entries.
  const std::size_t stride = 9 * e.dim() + 8;
  constexpr std::size_t kChunk = 512;
  std::vector<std::pair<std::size_t, double>> records(std::min(n, kChunk) * stride);
  std::vector<std::size_t> counts(kChunk, 0);
  std::vector<double> losses(kChunk, 0.0);
  BatchGradient out{0.0, std::vector<double>(e.params().size(), 0.0)};
  for (std::size_t begin = 0; begin < n; begin += kChunk) {
    const std::size_t len = std::min(kChunk, n - begin);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(len); ++k) {
      RecordSink sink{records.data() + k * stride};
      losses[k] = eval(begin + k, sink);
      counts[k] = sink.count;
    }
    for (std::size_t k = 0; k < len; ++k) {
      out.loss += losses[k];
      const auto* r = records.data() + k * stride;
      for (std::size_t j = 0; j < counts[k]; ++j) out.grad[r[j].first] += r[j].second;
    }
  }
  return out;
}

}  // namespace

double batch_loss(const LossBatch& b, const EmbeddingSet& e, Execution exec) {
  validate(b, e);
  const TupleEvaluator eval(b, e);
  const std::size_t n = eval.size();
  NoGrad none;
  if (exec == Execution::kSerial) {
    double s = 0.0;
    for (std::size_t t = 0; t < n; ++t) s += eval(t, none);
    return s;
  }
  std::vector<double> losses(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(n); ++t) {
    NoGrad local;
    losses[t] = eval(t, local);
  }
  double s = 0.0;
  for (double v : losses) s += v;
  return s;
}

std::array<double, 8> bucket_losses(const LossBatch& b, const EmbeddingSet& e) {
  validate(b, e);
  const TupleEvaluator eval(b, e);
  std::array<double, 8> out{};
  NoGrad none;
  for (std::size_t t = 0; t < eval.size(); ++t) out[eval.bucket_of(t)] += eval(t, none);
  return out;
}

BatchGradient batch_gradient(const LossBatch& b, const EmbeddingSet& e, Execution exec) {
  validate(b, e);
  const TupleEvaluator eval(b, e);
  switch (exec) {
    case Execution::kSerial: return gradient_serial(eval, e.params().size());
    case Execution::kParallel: return gradient_parallel(eval, e.params().size());
    case Execution::kDeterministic: return gradient_deterministic(eval, e);
  }
  return {};
}

}  // namespace elball
