// Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any FAIL.

#include <chrono>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>

#include "elball/checkpoint.hpp"
#include "elball/eval.hpp"
#include "elball/geometry.hpp"
#include "elball/ingest.hpp"
#include "elball/losses.hpp"
#include "elball/normalizer.hpp"
#include "elball/semsim.hpp"
#include "elball/synthetic.hpp"
#include "elball/trainer.hpp"
#include "support.hpp"

using namespace elball;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(const char* name, bool ok, const std::string& detail) {
  std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <class... Args>
std::string format(const char* fmt, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

// ---------------------------------------------------------------------------

void family_convergence() {
  const auto t0 = Clock::now();
  const auto theory = normalize(parse_ontology(testing::kFamilyText));
  TrainConfig cfg;
  cfg.dim = 2;
  cfg.margin = 0.0;
  cfg.epochs = 2000;
  cfg.seed = 42;
  cfg.execution = Execution::kDeterministic;
  const auto result = train(theory, cfg);
  const auto check = check_model(theory, result.embeddings, 0.1);
  const double elapsed = seconds_since(t0);

  bool forms_ok = true;
  double female_male = -1;
  for (const auto& c : check.checks) {
    const bool required = c.form == NormalForm::kNf1 || c.form == NormalForm::kNf2 ||
                          c.form == NormalForm::kNf3 || c.form == NormalForm::kBot2;
    if (required && !c.satisfied) forms_ok = false;
    if (c.form == NormalForm::kBot2) female_male = c.violation;
  }
  const bool ok = forms_ok && female_male >= 0 && female_male <= 0.1 && elapsed < 30.0;
  report("family-convergence", ok,
         format("epochs=%zu max_violation=%.4g female_male_overlap=%.4g time=%.2fs",
                result.epochs_completed, check.max_violation, female_male, elapsed));
}

// Nested concentric balls per tree, trees on distinct axis points of the
// unit sphere, Bot2 only across trees.
void theorem_one_oracle() {
  std::mt19937_64 rng(2718);
  int passed = 0, nonempty_bot2 = 0;
  const int rounds = 50;
  std::string first_failure;
  for (int round = 0; round < rounds; ++round) {
    const std::size_t n = 2 + rng() % 4;  // 2..5 classes
    std::vector<int> parent(n, -1), depth(n, 0), root(n);
    for (std::size_t c = 0; c < n; ++c) {
      if (c > 0 && rng() % 3 != 0) {
        parent[c] = static_cast<int>(rng() % c);
        depth[c] = depth[parent[c]] + 1;
      }
      root[c] = parent[c] < 0 ? static_cast<int>(c) : root[parent[c]];
    }
    auto name = [](std::size_t c) { return std::string(1, static_cast<char>('A' + c)); };

    std::string text;
    for (std::size_t c = 0; c < n; ++c) {
      // Every ancestor, so transitive edges appear too.
      for (int a = parent[c]; a >= 0; a = parent[a]) {
        if (a == parent[c] || rng() % 2) text += name(c) + " < " + name(a) + "\n";
      }
      text += name(c) + " < " + name(c) + "\n";
    }
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        if (root[a] != root[b] && rng() % 2) {
          text += name(a) + " and " + name(b) + " < Bot\n";
          ++nonempty_bot2;
        }
      }
    }
    const auto theory = normalize(parse_ontology(text));

    const std::size_t dim = 3;
    EmbeddingSet e(dim, theory.classes.names(), theory.relations.names());
    e.reset_frozen();
    std::vector<int> root_slot(n, -1);
    int next_slot = 0;
    for (std::size_t c = 0; c < n; ++c) {
      if (parent[c] < 0) root_slot[c] = next_slot++;
    }
    for (std::size_t c = 0; c < n; ++c) {
      const auto id = theory.classes.find(name(c));
      if (!id) continue;
      const int slot = root_slot[root[c]];
      auto center = e.center(*id);
      std::fill(center.begin(), center.end(), 0.0);
      center[slot % dim] = slot < static_cast<int>(dim) ? 1.0 : -1.0;
      e.radius(*id) = 0.5 / (1 + depth[c]);
    }
    const double loss = batch_loss(full_batch(theory, {}, 0.0), e);
    const bool model = check_model(theory, e, 0.0).overall;
    if (loss == 0.0 && model) {
      ++passed;
    } else if (first_failure.empty()) {
      first_failure = format(" first failure round %d loss=%.3g", round, loss);
    }
  }
  report("theorem-1-oracle", passed == rounds,
         format("%d/%d theories with zero loss and a tol-0 model, %d disjointness axioms%s", passed,
                rounds, nonempty_bot2, first_failure.c_str()));
}

void gradient_correctness() {
  const auto t0 = Clock::now();
  std::size_t compared = 0, mismatched = 0, skipped = 0;
  double worst = 0;
  for (int form = 0; form < 8; ++form) {
    for (int trial = 0; trial < 100; ++trial) {
      std::mt19937_64 rng(50000 + 100 * form + trial);
      const std::size_t dim = 1 + trial % 4;
      auto e = testing::make_embedding(dim, {"A", "B", "C", "D"}, {"r"});
      std::uniform_real_distribution<double> u(-1, 1), rad(0, 1);
      for (std::uint32_t c = 2; c < e.class_count(); ++c) {
        for (auto& x : e.center(ClassId{c})) x = u(rng);
        e.radius(ClassId{c}) = rad(rng);
      }
      for (auto& x : e.relation(RelationId{0})) x = u(rng);
      std::array<std::uint32_t, 4> ids{2, 3, 4, 5};
      std::shuffle(ids.begin(), ids.end(), rng);
      const ClassId x{ids[0]}, y{ids[1]}, z{ids[2]};
      const RelationId r{0};
      LossBatch b;
      b.margin = (trial % 3 - 1) * 0.1;
      switch (form) {
        case 0: b.nf1 = {{x, y}}; break;
        case 1: b.nf2 = {{x, y, z}}; break;
        case 2: b.nf3 = {{x, r, y}}; break;
        case 3: b.nf4 = {{r, x, y}}; break;
        case 4: b.bot1 = {{x}}; break;
        case 5: b.bot2 = {{x, y}}; break;
        case 6: b.bot4 = {{r, x}}; break;
        default: b.neg = {{x, r, y}}; break;
      }
      if (testing::kink_distance(b, e) < 1e-6) {
        ++skipped;
        continue;
      }
      const auto g = batch_gradient(b, e);
      const auto num = testing::numeric_gradient(b, e, 1e-5);
      for (std::size_t i = 2 * dim; i < num.size(); ++i) {
        if (i == e.radius_offset(ClassVocabulary::kTop) || i == e.radius_offset(ClassVocabulary::kBot)) {
          continue;
        }
        const double scale = std::max({1.0, std::fabs(g.grad[i]), std::fabs(num[i])});
        const double rel = std::fabs(g.grad[i] - num[i]) / scale;
        worst = std::max(worst, rel);
        ++compared;
        if (rel > 1e-4) ++mismatched;
      }
    }
  }
  const double elapsed = seconds_since(t0);
  report("gradient-correctness", mismatched == 0 && compared > 0 && elapsed < 10.0,
         format("%zu entries over 8 ops x 100 configs, %zu mismatched, %zu configs near a kink, "
                "worst relative error %.2e, time=%.2fs",
                compared, mismatched, skipped, worst, elapsed));
}

void normalizer_goldens() {
  bool ok = true;
  std::string detail;
  const auto fam = normalize(eliminate_abox(parse_ontology(testing::kFamilyText)));
  const bool family_ok = fam.nf1.size() == 7 && fam.nf2.size() == 2 && fam.bot2.size() == 1 &&
                         fam.nf4.size() == 1 && fam.nf3.size() == 1 && fam.bot1.empty() &&
                         fam.bot4.empty() && fam.fresh.empty();
  ok &= family_ok;
  detail += format("family nf1=%zu nf2=%zu nf3=%zu nf4=%zu bot2=%zu fresh=%zu", fam.nf1.size(),
                   fam.nf2.size(), fam.nf3.size(), fam.nf4.size(), fam.bot2.size(),
                   fam.fresh.size());

  const auto composed = normalize(parse_ontology("Father and Mother < hasChild some Person"));
  const bool composed_ok = composed.fresh.size() == 1 && composed.nf2.size() == 1 &&
                           composed.nf3.size() == 1 && composed.axiom_count() == 2;
  ok &= composed_ok;
  detail += format("; composed fresh=%zu forms=%zu", composed.fresh.size(), composed.axiom_count());

  testing::OntologyGenerator gen(4242);
  const auto names = gen.class_names();
  std::size_t disagreements = 0, entailed = 0;
  for (int round = 0; round < 100; ++round) {
    const auto original = parse_ontology(gen.tbox(2 + gen.pick(5), 3));
    const auto rewritten = parse_ontology(format_theory(normalize(original)));
    const testing::SubsumptionOracle before(original, names), after(rewritten, names);
    for (const auto& a : names) {
      for (const auto& b : names) {
        if (before.subsumes(a, b) != after.subsumes(a, b)) ++disagreements;
        if (a != b && before.subsumes(a, b)) ++entailed;
      }
    }
  }
  ok &= disagreements == 0;
  detail += format("; oracle over 100 ontologies: %zu disagreements, %zu non-trivial subsumptions",
                   disagreements, entailed);
  report("normalizer-goldens", ok, detail);
}

void metric_oracle() {
  std::mt19937_64 rng(31337);
  int matched = 0;
  const int rounds = 50;
  for (int round = 0; round < rounds; ++round) {
    auto inst = testing::random_ranking_instance(rng, 5 + rng() % 26, 20 + rng() % 60);
    while (inst.split.test.size() > 10) inst.split.test.pop_back();
    const auto rel = *inst.split.relations.find("rel");
    const auto scorer = [&](EntityId h, EntityId t) { return inst.score(h, t); };
    const auto oracle = testing::brute_force_ranking(inst.split, rel, scorer);
    const auto lib = ranking_report(inst.split, "rel", scorer);
    auto same = [](const RankMetrics& a, const testing::OracleMetrics& b) {
      return a.hits_at_10 == b.hits10 && a.hits_at_100 == b.hits100 && a.mean_rank == b.mean_rank &&
             a.auc == b.auc;
    };
    if (same(lib.raw, oracle.raw) && same(lib.filtered, oracle.filtered) &&
        lib.candidates <= 30) {
      ++matched;
    }
  }
  // Edge cases: true tail strictly best, then strictly worst, among N = 7.
  LinkSplit split;
  for (int i = 0; i < 6; ++i) split.train.push_back(split.triple("x", "rel", "c" + std::to_string(i)));
  split.test.push_back(split.triple("h", "rel", "t"));
  const auto truth = *split.entities.find("t");
  const auto best = ranking_report(split, "rel", [&](EntityId, EntityId c) { return c == truth ? 1.0 : 0.0; });
  const auto worst = ranking_report(split, "rel", [&](EntityId, EntityId c) { return c == truth ? -1.0 : 0.0; });
  const bool edges = best.raw.auc == 1.0 && best.raw.mean_rank == 1.0 && worst.raw.auc == 0.0 &&
                     worst.raw.mean_rank == 7.0;
  report("metric-oracle", matched == rounds && edges,
         format("%d/%d instances match the brute-force ranking exactly; rank 1 AUC=%g, rank N AUC=%g",
                matched, rounds, best.raw.auc, worst.raw.auc));
}

struct SyntheticRun {
  SyntheticData data;
  IngestResult ingested;
  NormalizedTheory theory;
};

SyntheticRun synthetic_run() {
  SyntheticRun run;
  SyntheticConfig sc;
  sc.seed = 7;
  run.data = make_synthetic(sc);
  IngestOptions io;
  io.seed = 1;
  run.ingested = ingest(run.data.dataset, io);
  parse_into(run.ingested.ontology, format_taxonomy(run.data.taxonomy));
  run.theory = normalize(eliminate_abox(run.ingested.ontology));
  return run;
}

TrainConfig synthetic_config(std::size_t epochs) {
  TrainConfig cfg;
  cfg.dim = 50;
  cfg.epochs = epochs;
  cfg.seed = 3;
  cfg.execution = Execution::kDeterministic;
  return cfg;
}

void link_prediction(const SyntheticRun& run) {
  const auto t0 = Clock::now();
  const auto& split = run.ingested.split;
  const auto trained = train(run.theory, synthetic_config(1000));
  const auto untrained = train(run.theory, synthetic_config(0));
  const auto margin = synthetic_config(0).margin;
  const auto scorer = embedding_scorer(trained.embeddings, split, "interacts", margin);
  const auto base_scorer = embedding_scorer(untrained.embeddings, split, "interacts", margin);
  const auto r = ranking_report(split, "interacts", scorer);
  const auto r0 = ranking_report(split, "interacts", base_scorer);
  const double elapsed = seconds_since(t0);
  const bool ok = r.filtered.auc >= 0.5 + 0.15 && r.filtered.auc > r0.filtered.auc && elapsed < 300;
  report("synthetic-link-prediction", ok,
         format("%zu entities, %zu test queries, filtered AUC %.4f (untrained %.4f), "
                "filtered Hits@10 %.3f, time=%.1fs",
                split.entities.size(), r.queries, r.filtered.auc, r0.filtered.auc,
                r.filtered.hits_at_10, elapsed));
}

void determinism(const SyntheticRun& run) {
  bool ok = true;
  std::string detail;
  for (Execution exec : {Execution::kDeterministic, Execution::kParallel}) {
    auto cfg = synthetic_config(150);
    cfg.execution = exec;
    std::string bytes[2];
    RankingReport reports[2];
    for (int k = 0; k < 2; ++k) {
      auto result = train(run.theory, cfg);
      const Checkpoint c{{cfg.dim, cfg.margin, cfg.seed, result.epochs_completed,
                          result.trace.minibatch},
                         std::move(result.embeddings)};
      bytes[k] = serialize_checkpoint(c);
      const auto loaded = parse_checkpoint(bytes[k]);
      reports[k] = ranking_report(
          run.ingested.split, "interacts",
          embedding_scorer(loaded.embeddings, run.ingested.split, "interacts", cfg.margin), exec);
    }
    const bool same = bytes[0] == bytes[1] && reports[0] == reports[1];
    ok &= same;
    detail += format("%s%s: checkpoints %s (%zu bytes), reports %s",
                     detail.empty() ? "" : "; ",
                     exec == Execution::kDeterministic ? "deterministic" : "parallel",
                     bytes[0] == bytes[1] ? "identical" : "differ", bytes[0].size(),
                     reports[0] == reports[1] ? "identical" : "differ");
  }
  report("determinism", ok, detail);
}

void semsim_sanity(const SyntheticRun& run) {
  const auto tax_theory = normalize(parse_ontology(format_taxonomy(run.data.taxonomy)));
  const auto index =
      TaxonomyIndex::build(TaxonomyIndex::edges_of(tax_theory), run.data.dataset.annotations);
  const auto r = ranking_report(run.ingested.split, "interacts",
                                semsim_scorer(index, run.ingested.split, SimilarityMeasure::kResnik));
  report("semsim-sanity", r.filtered.auc > 0.5,
         format("Resnik-BMA filtered AUC %.4f, raw AUC %.4f", r.filtered.auc, r.raw.auc));
}

}  // namespace

int main() {
  configure_threads_from_env();
  family_convergence();
  theorem_one_oracle();
  gradient_correctness();
  normalizer_goldens();
  metric_oracle();
  const auto run = synthetic_run();
  link_prediction(run);
  determinism(run);
  semsim_sanity(run);
  return failures == 0 ? 0 : 1;
}
