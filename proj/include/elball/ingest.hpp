#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "elball/eval.hpp"
#include "elball/ontology.hpp"

namespace elball {

struct InteractionPair {
  std::string first;
  std::string second;
  std::optional<double> confidence;
  friend bool operator==(const InteractionPair&, const InteractionPair&) = default;
};

using Annotation = std::pair<std::string, std::string>;  // (entity, class)

struct InteractionDataset {
  std::vector<InteractionPair> pairs;
  std::vector<Annotation> annotations;
};

/// `entity1\tentity2[\tconfidence]`; blank lines and lines starting with '#'
/// are skipped. Throws ParseError with the offending line.
std::vector<InteractionPair> parse_pairs_tsv(std::string_view text);
/// `entity\tclass`.
std::vector<Annotation> parse_annotations_tsv(std::string_view text);

struct IngestOptions {
  double min_confidence = 700.0;
  bool symmetric = true;
  std::uint64_t seed = 0;
  std::string interaction_relation = "interacts";
  std::string annotation_relation = "hasFunction";
  double valid_fraction = 0.1;
  double test_fraction = 0.1;
};

struct IngestResult {
  Ontology ontology;
  LinkSplit split;
  std::size_t dropped_low_confidence = 0;
  std::size_t duplicates = 0;
};

/// Filters by confidence (pairs without a score are kept), removes duplicate
/// pairs (unordered when symmetric), shuffles with the seed and splits off
/// floor(n * valid_fraction) validation and floor(n * test_fraction) test
/// pairs. With `symmetric` each split then holds both directions.
///
/// The ontology gets "{a} < R some {b}" for every training triple,
/// "{P} < hasFunction some F" for every annotation and "{x} < Top" for split
/// entities mentioned nowhere else, so each of them receives an embedding.
IngestResult ingest(const InteractionDataset& data, const IngestOptions& options);

/// Columns head, relation, tail.
std::string format_triples_tsv(const LinkSplit& split, const std::vector<Triple>& triples);

/// train.tsv, valid.tsv and test.tsv in `dir`. Missing files read as empty.
void write_split(const std::filesystem::path& dir, const LinkSplit& split);
LinkSplit read_split(const std::filesystem::path& dir);

}  // namespace elball
