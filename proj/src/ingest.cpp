#include "elball/ingest.hpp"

#include <charconv>
#include <cmath>
#include <set>
#include <unordered_set>

#include "elball/checkpoint.hpp"
#include "elball/error.hpp"
#include "elball/trainer.hpp"

namespace elball {

namespace {

/// Calls fn(line_number, fields) for every non-blank, non-comment line.
template <class Fn>
void for_each_row(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const auto tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    fn(line_no, fields);
  }
}

void require_fields(const std::vector<std::string_view>& fields, std::size_t line,
                    std::size_t min, std::size_t max, const char* what) {
  if (fields.size() < min || fields.size() > max) {
    throw ParseError(std::string("expected ") + what + ", got " +
                         std::to_string(fields.size()) + " tab-separated fields",
                     line, 1);
  }
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (fields[i].empty()) {
      throw ParseError("empty field " + std::to_string(i + 1), line, 1);
    }
  }
}

}  // namespace

std::vector<InteractionPair> parse_pairs_tsv(std::string_view text) {
  std::vector<InteractionPair> out;
  for_each_row(text, [&](std::size_t line, const std::vector<std::string_view>& f) {
    require_fields(f, line, 2, 3, "entity1, entity2 and an optional confidence");
    InteractionPair p{std::string(f[0]), std::string(f[1]), std::nullopt};
    if (f.size() == 3) {
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(f[2].data(), f[2].data() + f[2].size(), value);
      if (ec != std::errc{} || ptr != f[2].data() + f[2].size() || !std::isfinite(value)) {
        throw ParseError("confidence '" + std::string(f[2]) + "' is not a number", line,
                         static_cast<std::size_t>(f[2].data() - f[0].data()) + 1);
      }
      p.confidence = value;
    }
    out.push_back(std::move(p));
  });
  return out;
}

std::vector<Annotation> parse_annotations_tsv(std::string_view text) {
  std::vector<Annotation> out;
  for_each_row(text, [&](std::size_t line, const std::vector<std::string_view>& f) {
    require_fields(f, line, 2, 2, "entity and class");
    out.emplace_back(std::string(f[0]), std::string(f[1]));
  });
  return out;
}

IngestResult ingest(const InteractionDataset& data, const IngestOptions& options) {
  if (options.valid_fraction < 0 || options.test_fraction < 0 ||
      options.valid_fraction + options.test_fraction > 1.0) {
    throw Error("split fractions must be nonnegative and sum to at most 1");
  }
  IngestResult result;

  std::vector<std::pair<std::string, std::string>> pairs;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& p : data.pairs) {
    if (p.confidence && *p.confidence < options.min_confidence) {
      ++result.dropped_low_confidence;
      continue;
    }
    auto key = std::make_pair(p.first, p.second);
    if (options.symmetric && key.second < key.first) std::swap(key.first, key.second);
    if (!seen.insert(key).second) {
      ++result.duplicates;
      continue;
    }
    pairs.emplace_back(p.first, p.second);
  }

  Rng rng(options.seed);
  for (std::size_t i = pairs.size(); i > 1; --i) std::swap(pairs[i - 1], pairs[rng.index(i)]);

  const std::size_t n = pairs.size();
  const auto n_valid = static_cast<std::size_t>(std::floor(static_cast<double>(n) * options.valid_fraction));
  const auto n_test = static_cast<std::size_t>(std::floor(static_cast<double>(n) * options.test_fraction));
  const std::size_t n_train = n - n_valid - n_test;

  LinkSplit& split = result.split;
  auto add = [&](std::vector<Triple>& part, const std::pair<std::string, std::string>& p) {
    part.push_back(split.triple(p.first, options.interaction_relation, p.second));
    if (options.symmetric && p.first != p.second) {
      part.push_back(split.triple(p.second, options.interaction_relation, p.first));
    }
  };
  for (std::size_t i = 0; i < n; ++i) {
    auto& part = i < n_train ? split.train : i < n_train + n_valid ? split.valid : split.test;
    add(part, pairs[i]);
  }

  Ontology& o = result.ontology;
  std::unordered_set<std::string> mentioned;
  for (const auto& t : split.train) {
    const auto& h = split.entities.name(t.head);
    const auto& tl = split.entities.name(t.tail);
    o.axioms.push_back(o.gci(o.nominal(h), o.some(options.interaction_relation, o.nominal(tl))));
    mentioned.insert(h);
    mentioned.insert(tl);
  }
  for (const auto& [entity, cls] : data.annotations) {
    o.axioms.push_back(o.gci(o.nominal(entity), o.some(options.annotation_relation, o.cls(cls))));
    mentioned.insert(entity);
  }
  for (const auto& name : split.entities.names()) {
    if (!mentioned.contains(name)) {
      o.axioms.push_back(o.gci(o.nominal(name), Concept::top()));
    }
  }
  return result;
}

std::string format_triples_tsv(const LinkSplit& split, const std::vector<Triple>& triples) {
  std::string out;
  for (const auto& t : triples) {
    out += split.entities.name(t.head);
    out += '\t';
    out += split.relations.name(t.relation);
    out += '\t';
    out += split.entities.name(t.tail);
    out += '\n';
  }
  return out;
}

void write_split(const std::filesystem::path& dir, const LinkSplit& split) {
  std::filesystem::create_directories(dir);
  write_text_file(dir / "train.tsv", format_triples_tsv(split, split.train));
  write_text_file(dir / "valid.tsv", format_triples_tsv(split, split.valid));
  write_text_file(dir / "test.tsv", format_triples_tsv(split, split.test));
}

LinkSplit read_split(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw Error("no split directory " + dir.string());
  LinkSplit split;
  auto load = [&](const char* file, std::vector<Triple>& part) {
    const auto path = dir / file;
    if (!std::filesystem::exists(path)) return;
    for_each_row(read_text_file(path), [&](std::size_t line, const std::vector<std::string_view>& f) {
      try {
        require_fields(f, line, 3, 3, "head, relation and tail");
      } catch (const ParseError& e) {
        throw Error(path.string() + ":" + e.what());
      }
      part.push_back(split.triple(f[0], f[1], f[2]));
    });
  };
  load("train.tsv", split.train);
  load("valid.tsv", split.valid);
  load("test.tsv", split.test);
  return split;
}

}  // namespace elball
