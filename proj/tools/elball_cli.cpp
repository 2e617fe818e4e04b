// elball: normalize, train, check and evaluate EL++ ball embeddings.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "elball/checkpoint.hpp"
#include "elball/error.hpp"
#include "elball/eval.hpp"
#include "elball/geometry.hpp"
#include "elball/ingest.hpp"
#include "elball/normalizer.hpp"
#include "elball/parallel.hpp"
#include "elball/semsim.hpp"
#include "elball/synthetic.hpp"
#include "elball/trainer.hpp"

namespace fs = std::filesystem;
using namespace elball;

namespace {

NormalizedTheory load_theory(const std::string& path) {
  return normalize(eliminate_abox(parse_ontology(read_text_file(path))));
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    write_text_file(out, text);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EL++ ball embeddings"};
  app.require_subcommand(1);
  std::uint64_t seed = 0;
  bool deterministic = false;
  app.add_option("--seed", seed, "Random seed")->capture_default_str();
  app.add_flag("--deterministic", deterministic,
               "Reduce in item order so results do not depend on the thread count");
  auto execution = [&] { return deterministic ? Execution::kDeterministic : Execution::kParallel; };

  // normalize
  auto* normalize_cmd = app.add_subcommand("normalize", "Print the normal-form theory");
  std::string onto_path, out_path;
  normalize_cmd->add_option("ontology,--theory", onto_path)->required()->check(CLI::ExistingFile);
  normalize_cmd->add_option("-o,--out", out_path);

  // train
  auto* train_cmd = app.add_subcommand("train", "Train an embedding and write a checkpoint");
  TrainConfig tc;
  std::string ckpt_path;
  std::size_t tail = 10;
  train_cmd->add_option("ontology,--theory", onto_path)->required()->check(CLI::ExistingFile);
  train_cmd->add_option("-o,--out", ckpt_path)->required();
  train_cmd->add_option("--dim", tc.dim)->capture_default_str();
  train_cmd->add_option("--margin", tc.margin)->capture_default_str();
  train_cmd->add_option("--epochs", tc.epochs)->capture_default_str();
  train_cmd->add_option("--batch,--batch-size", tc.batch_size)->capture_default_str();
  train_cmd->add_option("--steps-per-epoch", tc.steps_per_epoch)->capture_default_str();
  train_cmd->add_option("--lr", tc.adam.learning_rate)->capture_default_str();
  train_cmd->add_option("--neg-per-pos", tc.negatives_per_positive)->capture_default_str();
  std::string neg_mode = "static";
  train_cmd->add_option("--neg-mode", neg_mode, "static or fresh")
      ->check(CLI::IsMember({"static", "fresh"}))
      ->capture_default_str();
  train_cmd->add_option("--eval-every", tc.eval_every)->capture_default_str();
  train_cmd->add_option("--trace-tail", tail, "Minibatch losses kept in the checkpoint")
      ->capture_default_str();

  // check
  auto* check_cmd = app.add_subcommand("check", "Check a checkpoint as a model of the theory");
  double tol = 0.0;
  std::string nf2_mode = "exact";
  check_cmd->add_option("ontology,--theory", onto_path)->required()->check(CLI::ExistingFile);
  check_cmd->add_option("checkpoint,--ckpt", ckpt_path)->required()->check(CLI::ExistingFile);
  check_cmd->add_option("--tol", tol)->capture_default_str();
  check_cmd->add_option("--nf2", nf2_mode, "exact or loss")
      ->check(CLI::IsMember({"exact", "loss"}))
      ->capture_default_str();

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "Link-prediction ranking of a checkpoint");
  std::string split_dir, relation = "interacts";
  std::optional<double> eval_margin;
  std::optional<std::size_t> expected_dim;
  eval_cmd->add_option("checkpoint,--ckpt", ckpt_path)->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("split,--split", split_dir, "Directory with train/valid/test.tsv")
      ->required()
      ->check(CLI::ExistingDirectory);
  eval_cmd->add_option("--relation", relation)->capture_default_str();
  eval_cmd->add_option("--margin", eval_margin, "Defaults to the checkpoint's margin");
  eval_cmd->add_option("--dim", expected_dim, "Refuse checkpoints of another dimension");
  eval_cmd->add_option("-o,--out", out_path);

  // semsim
  auto* semsim_cmd = app.add_subcommand("semsim", "Rank with annotation similarity");
  std::string annotations_path, taxonomy_path, measure = "resnik";
  semsim_cmd->add_option("split,--split", split_dir)->required()->check(CLI::ExistingDirectory);
  semsim_cmd->add_option("annotations,--annotations", annotations_path)->required()->check(CLI::ExistingFile);
  semsim_cmd->add_option("taxonomy,--taxonomy", taxonomy_path, "Ontology whose NF1 axioms form the hierarchy")
      ->required()
      ->check(CLI::ExistingFile);
  semsim_cmd->add_option("--measure", measure)
      ->check(CLI::IsMember({"resnik", "lin"}))
      ->capture_default_str();
  semsim_cmd->add_option("--relation", relation)->capture_default_str();
  std::string combine = "bma";
  semsim_cmd->add_option("--combine", combine)->check(CLI::IsMember({"bma"}))->capture_default_str();
  semsim_cmd->add_option("-o,--out", out_path);

  // ingest
  auto* ingest_cmd = app.add_subcommand("ingest", "Build an ontology and split from TSV files");
  std::string pairs_path, out_dir;
  IngestOptions io;
  bool asymmetric = false;
  ingest_cmd->add_option("pairs,--pairs", pairs_path)->required()->check(CLI::ExistingFile);
  ingest_cmd->add_option("annotations,--annotations", annotations_path)->required()->check(CLI::ExistingFile);
  ingest_cmd->add_option("-o,--out", out_dir)->required();
  ingest_cmd->add_option("--min-confidence", io.min_confidence)->capture_default_str();
  ingest_cmd->add_flag("--symmetric", io.symmetric, "Assert both directions (default)");
  ingest_cmd->add_flag("--no-symmetric", asymmetric, "Assert pairs only as listed");
  ingest_cmd->add_option("--taxonomy", taxonomy_path, "Axioms appended to the ontology")
      ->check(CLI::ExistingFile);

  // export2d
  auto* export_cmd = app.add_subcommand("export2d", "Plot table of a 2-D checkpoint");
  export_cmd->add_option("checkpoint,--ckpt", ckpt_path)->required()->check(CLI::ExistingFile);
  export_cmd->add_option("-o,--out", out_path);

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "Write the synthetic interaction benchmark");
  SyntheticConfig sc;
  synth_cmd->add_option("-o,--out", out_dir)->required();
  synth_cmd->add_option("--entities", sc.entities)->capture_default_str();

  CLI11_PARSE(app, argc, argv);
  configure_threads_from_env();

  try {
    if (normalize_cmd->parsed()) {
      emit(format_theory(load_theory(onto_path)), out_path);
    } else if (train_cmd->parsed()) {
      tc.seed = seed;
      tc.execution = execution();
      if (neg_mode == "fresh") tc.negative_mode = NegativeMode::kFresh;
      const auto theory = load_theory(onto_path);
      auto result = train(theory, tc);
      Checkpoint c{{tc.dim, tc.margin, seed, result.epochs_completed, {}},
                   std::move(result.embeddings)};
      const auto& trace = result.trace.minibatch;
      const std::size_t keep = std::min(tail, trace.size());
      c.meta.loss_trace_tail.assign(trace.end() - static_cast<std::ptrdiff_t>(keep), trace.end());
      save_checkpoint(ckpt_path, c);
      for (const auto& [epoch, loss] : result.trace.full) {
        std::cerr << "epoch " << epoch << " loss " << loss << '\n';
      }
      if (!trace.empty()) std::cerr << "final minibatch loss " << trace.back() << '\n';
      if (result.skipped_negatives > 0) {
        std::cerr << result.skipped_negatives << " positives got no negative sample\n";
      }
    } else if (check_cmd->parsed()) {
      const auto theory = load_theory(onto_path);
      const auto c = load_checkpoint(ckpt_path);
      const auto e = align_embedding(c.embeddings, theory.classes.names(), theory.relations.names());
      const auto report = check_model(
          theory, e, tol, nf2_mode == "loss" ? Nf2Criterion::kLossTerms : Nf2Criterion::kExact);
      std::cout << to_json(report) << '\n';
      return report.overall ? 0 : 3;
    } else if (eval_cmd->parsed()) {
      const auto c = load_checkpoint(ckpt_path, expected_dim);
      const auto split = read_split(split_dir);
      const auto scorer =
          embedding_scorer(c.embeddings, split, relation, eval_margin.value_or(c.meta.margin));
      emit(to_json(ranking_report(split, relation, scorer, execution())), out_path);
    } else if (semsim_cmd->parsed()) {
      const auto split = read_split(split_dir);
      const auto annotations = parse_annotations_tsv(read_text_file(annotations_path));
      const auto index =
          TaxonomyIndex::build(TaxonomyIndex::edges_of(load_theory(taxonomy_path)), annotations);
      const auto scorer = semsim_scorer(
          index, split, measure == "lin" ? SimilarityMeasure::kLin : SimilarityMeasure::kResnik);
      emit(to_json(ranking_report(split, relation, scorer, execution())), out_path);
    } else if (ingest_cmd->parsed()) {
      if (asymmetric) io.symmetric = false;
      io.seed = seed;
      InteractionDataset data{parse_pairs_tsv(read_text_file(pairs_path)),
                              parse_annotations_tsv(read_text_file(annotations_path))};
      auto result = ingest(data, io);
      if (!taxonomy_path.empty()) parse_into(result.ontology, read_text_file(taxonomy_path));
      fs::create_directories(out_dir);
      write_text_file(fs::path(out_dir) / "ontology.txt", format_ontology(result.ontology));
      write_split(out_dir, result.split);
      std::cerr << "pairs below confidence: " << result.dropped_low_confidence
                << ", duplicates: " << result.duplicates << ", triples train/valid/test: "
                << result.split.train.size() << "/" << result.split.valid.size() << "/"
                << result.split.test.size() << '\n';
    } else if (export_cmd->parsed()) {
      emit(export_2d(load_checkpoint(ckpt_path)), out_path);
    } else if (synth_cmd->parsed()) {
      sc.seed = seed;
      const auto data = make_synthetic(sc);
      fs::create_directories(out_dir);
      std::string pairs, annotations;
      char buf[64];
      for (const auto& p : data.dataset.pairs) {
        std::snprintf(buf, sizeof buf, "\t%.1f\n", *p.confidence);
        pairs += p.first + "\t" + p.second + buf;
      }
      for (const auto& [entity, cls] : data.dataset.annotations) {
        annotations += entity + "\t" + cls + "\n";
      }
      write_text_file(fs::path(out_dir) / "pairs.tsv", pairs);
      write_text_file(fs::path(out_dir) / "annotations.tsv", annotations);
      write_text_file(fs::path(out_dir) / "taxonomy.txt", format_taxonomy(data.taxonomy));
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
