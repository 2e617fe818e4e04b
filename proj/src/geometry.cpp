#include "elball/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"

#include "elball/error.hpp"

namespace elball {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_same_dim(std::size_t a, std::size_t b) {
  if (a != b) {
    throw DimensionMismatch("dimension mismatch: " + std::to_string(a) + " vs " +
                            std::to_string(b));
  }
}

}  // namespace

double euclidean_norm(std::span<const double> a) {
  double s = 0.0;
  for (double x : a) s += x * x;
  return std::sqrt(s);
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  require_same_dim(a.size(), b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

double containment_violation(const Ball& inner, const Ball& outer) {
  const double d = euclidean_distance(inner.center, outer.center);
  return std::max(0.0, d + inner.radius - outer.radius);
}

std::optional<Ball> intersection_ball(const Ball& a, const Ball& b) {
  const double d = euclidean_distance(a.center, b.center);
  if (d >= a.radius + b.radius) return std::nullopt;
  if (d == 0.0) return a.radius <= b.radius ? a : b;

  // Signed distance from a's center to the radical plane, along a -> b.
  const double h = (a.radius * a.radius - b.radius * b.radius + d * d) / (2.0 * d);
  // When the plane lies behind one center, the lens holds more than half of
  // that ball and the ball itself is the tightest enclosure.
  if (h <= 0.0) return a;
  if (d - h <= 0.0) return b;

  Ball out;
  out.center.resize(a.center.size());
  for (std::size_t i = 0; i < a.center.size(); ++i) {
    out.center[i] = a.center[i] + (h / d) * (b.center[i] - a.center[i]);
  }
  out.radius = std::sqrt(std::max(0.0, a.radius * a.radius - h * h));
  return out;
}

bool ModelReport::all_satisfied(NormalForm form) const {
  return std::ranges::all_of(checks, [form](const AxiomCheck& c) {
    return c.form != form || c.informational || c.satisfied;
  });
}

namespace {

constexpr ClassId kTop = ClassVocabulary::kTop;

Ball ball_of(const EmbeddingSet& e, ClassId c) {
  const auto x = e.center(c);
  return Ball{{x.begin(), x.end()}, e.radius(c)};
}

double nf1_violation(const EmbeddingSet& e, const Nf1& a) {
  if (a.super == kTop) return 0.0;
  if (a.sub == kTop) return kInf;
  return containment_violation(ball_of(e, a.sub), ball_of(e, a.super));
}

double nf2_violation(const EmbeddingSet& e, const Nf2& a, Nf2Criterion criterion) {
  if (a.super == kTop) return 0.0;
  if (a.left == kTop && a.right == kTop) return kInf;
  if (a.left == kTop) return containment_violation(ball_of(e, a.right), ball_of(e, a.super));
  if (a.right == kTop) return containment_violation(ball_of(e, a.left), ball_of(e, a.super));

  const Ball c = ball_of(e, a.left);
  const Ball d = ball_of(e, a.right);
  const Ball x = ball_of(e, a.super);
  if (criterion == Nf2Criterion::kLossTerms) {
    const double cd = euclidean_distance(c.center, d.center);
    const double ce = euclidean_distance(c.center, x.center);
    const double de = euclidean_distance(d.center, x.center);
    return std::max({0.0, cd - c.radius - d.radius, ce - c.radius, de - c.radius,
                     std::min(c.radius, d.radius) - x.radius});
  }
  const auto lens = intersection_ball(c, d);
  if (!lens) return 0.0;
  return containment_violation(*lens, x);
}

double nf3_violation(const EmbeddingSet& e, const Nf3& a) {
  if (a.filler == kTop) return 0.0;
  if (a.sub == kTop) return kInf;
  Ball moved = ball_of(e, a.sub);
  const auto r = e.relation(a.relation);
  for (std::size_t i = 0; i < moved.center.size(); ++i) moved.center[i] += r[i];
  return containment_violation(moved, ball_of(e, a.filler));
}

double nf4_violation(const EmbeddingSet& e, const Nf4& a) {
  if (a.filler == kTop || a.super == kTop) return 0.0;
  const auto c = e.center(a.filler);
  const auto r = e.relation(a.relation);
  const auto d = e.center(a.super);
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double v = c[i] - r[i] - d[i];
    s += v * v;
  }
  return std::max(0.0, std::sqrt(s) - e.radius(a.filler) - e.radius(a.super));
}

double empty_violation(const EmbeddingSet& e, ClassId c) {
  return c == kTop ? kInf : std::max(0.0, e.radius(c));
}

double bot2_violation(const EmbeddingSet& e, const Bot2& a) {
  if (a.left == kTop && a.right == kTop) return kInf;
  if (a.left == kTop) return empty_violation(e, a.right);
  if (a.right == kTop) return empty_violation(e, a.left);
  const double d = euclidean_distance(e.center(a.left), e.center(a.right));
  return std::max(0.0, e.radius(a.left) + e.radius(a.right) - d);
}

void require_aligned(const NormalizedTheory& t, const EmbeddingSet& e) {
  for (std::uint32_t i = 0; i < t.classes.size(); ++i) {
    if (i >= e.class_count() || e.class_names()[i] != t.classes.name(ClassId{i})) {
      throw MissingSymbol("no embedding for class " + t.classes.name(ClassId{i}));
    }
  }
  for (std::uint32_t i = 0; i < t.relations.size(); ++i) {
    if (i >= e.relation_count() || e.relation_names()[i] != t.relations.name(RelationId{i})) {
      throw MissingSymbol("no embedding for relation " + t.relations.name(RelationId{i}));
    }
  }
}

}  // namespace

ModelReport check_model(const NormalizedTheory& t, const EmbeddingSet& e, double tol,
                        Nf2Criterion nf2) {
  require_aligned(t, e);
  ModelReport report;
  report.tolerance = tol;
  auto name = [&](ClassId c) { return t.classes.name(c); };
  auto rel = [&](RelationId r) { return t.relations.name(r); };

  auto add = [&](NormalForm form, std::size_t index, std::string text, double violation,
                 bool informational = false) {
    report.checks.push_back(
        {form, index, std::move(text), violation, violation <= tol, informational});
  };

  // Each bucket is checked into its own slice so the loops can run in
  // parallel while the report keeps bucket order.
  const std::size_t n1 = t.nf1.size();
  std::vector<double> v1(n1);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n1); ++i) {
    v1[i] = nf1_violation(e, t.nf1[i]);
  }
  for (std::size_t i = 0; i < n1; ++i) {
    const auto& a = t.nf1[i];
    add(NormalForm::kNf1, i, name(a.sub) + " < " + name(a.super), v1[i]);
  }

  const std::size_t n2 = t.nf2.size();
  std::vector<double> v2(n2);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n2); ++i) {
    v2[i] = nf2_violation(e, t.nf2[i], nf2);
  }
  for (std::size_t i = 0; i < n2; ++i) {
    const auto& a = t.nf2[i];
    add(NormalForm::kNf2, i, name(a.left) + " and " + name(a.right) + " < " + name(a.super),
        v2[i]);
  }

  const std::size_t n3 = t.nf3.size();
  std::vector<double> v3(n3);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n3); ++i) {
    v3[i] = nf3_violation(e, t.nf3[i]);
  }
  for (std::size_t i = 0; i < n3; ++i) {
    const auto& a = t.nf3[i];
    add(NormalForm::kNf3, i, name(a.sub) + " < " + rel(a.relation) + " some " + name(a.filler),
        v3[i]);
  }

  for (std::size_t i = 0; i < t.nf4.size(); ++i) {
    const auto& a = t.nf4[i];
    add(NormalForm::kNf4, i, rel(a.relation) + " some " + name(a.filler) + " < " + name(a.super),
        nf4_violation(e, a), true);
  }
  for (std::size_t i = 0; i < t.bot1.size(); ++i) {
    const auto& a = t.bot1[i];
    add(NormalForm::kBot1, i, name(a.sub) + " < Bot", empty_violation(e, a.sub));
  }
  for (std::size_t i = 0; i < t.bot2.size(); ++i) {
    const auto& a = t.bot2[i];
    add(NormalForm::kBot2, i, name(a.left) + " and " + name(a.right) + " < Bot",
        bot2_violation(e, a));
  }
  for (std::size_t i = 0; i < t.bot4.size(); ++i) {
    const auto& a = t.bot4[i];
    add(NormalForm::kBot4, i, rel(a.relation) + " some " + name(a.filler) + " < Bot",
        empty_violation(e, a.filler));
  }

  for (const auto& c : report.checks) {
    if (c.informational) continue;
    report.max_violation = std::max(report.max_violation, c.violation);
    report.overall = report.overall && c.satisfied;
  }
  return report;
}

std::string to_json(const ModelReport& report) {
  nlohmann::ordered_json j;
  j["overall"] = report.overall;
  j["tolerance"] = report.tolerance;
  auto finite_or_string = [](double v) -> nlohmann::ordered_json {
    if (std::isinf(v)) return "inf";
    return v;
  };
  j["max_violation"] = finite_or_string(report.max_violation);
  auto& arr = j["axioms"] = nlohmann::ordered_json::array();
  for (const auto& c : report.checks) {
    arr.push_back({{"form", std::string(to_string(c.form))},
                   {"index", c.index},
                   {"axiom", c.text},
                   {"violation", finite_or_string(c.violation)},
                   {"satisfied", c.satisfied},
                   {"informational", c.informational}});
  }
  return j.dump(2);
}

}  // namespace elball
