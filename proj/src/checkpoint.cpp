#include "elball/checkpoint.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "elball/error.hpp"

namespace elball {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kFormat = "elball-checkpoint";

}  // namespace

std::string serialize_checkpoint(const Checkpoint& c) {
  const EmbeddingSet& e = c.embeddings;
  Json j;
  j["format"] = kFormat;
  j["version"] = kCheckpointVersion;
  j["dim"] = c.meta.dim;
  j["margin"] = c.meta.margin;
  j["seed"] = c.meta.seed;
  j["epochs_completed"] = c.meta.epochs_completed;
  j["loss_trace_tail"] = c.meta.loss_trace_tail;
  auto& classes = j["classes"] = Json::array();
  for (std::uint32_t i = 0; i < e.class_count(); ++i) {
    const auto x = e.center(ClassId{i});
    classes.push_back({{"name", e.class_names()[i]},
                       {"center", std::vector<double>(x.begin(), x.end())},
                       {"radius", e.radius(ClassId{i})}});
  }
  auto& relations = j["relations"] = Json::array();
  for (std::uint32_t i = 0; i < e.relation_count(); ++i) {
    const auto v = e.relation(RelationId{i});
    relations.push_back(
        {{"name", e.relation_names()[i]}, {"vector", std::vector<double>(v.begin(), v.end())}});
  }
  return j.dump(1) + "\n";
}

Checkpoint parse_checkpoint(std::string_view text, std::optional<std::size_t> expected_dim) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    throw CheckpointError(std::string("corrupt checkpoint: ") + ex.what());
  }
  try {
    if (j.at("format").get<std::string>() != kFormat) {
      throw CheckpointError("not an elball checkpoint");
    }
    const int version = j.at("version").get<int>();
    if (version != kCheckpointVersion) {
      throw CheckpointError("checkpoint version " + std::to_string(version) +
                            " is not supported (expected " +
                            std::to_string(kCheckpointVersion) + ")");
    }
    Checkpoint c;
    c.meta.dim = j.at("dim").get<std::size_t>();
    c.meta.margin = j.at("margin").get<double>();
    c.meta.seed = j.at("seed").get<std::uint64_t>();
    c.meta.epochs_completed = j.at("epochs_completed").get<std::size_t>();
    c.meta.loss_trace_tail = j.at("loss_trace_tail").get<std::vector<double>>();
    if (expected_dim && *expected_dim != c.meta.dim) {
      throw DimensionMismatch("checkpoint has dimension " + std::to_string(c.meta.dim) +
                              ", expected " + std::to_string(*expected_dim));
    }

    std::vector<std::string> class_names, relation_names;
    for (const auto& cls : j.at("classes")) class_names.push_back(cls.at("name").get<std::string>());
    for (const auto& rel : j.at("relations")) {
      relation_names.push_back(rel.at("name").get<std::string>());
    }
    c.embeddings = EmbeddingSet(c.meta.dim, class_names, relation_names);

    auto copy_vector = [&](const Json& arr, std::span<double> out, const std::string& who) {
      const auto v = arr.get<std::vector<double>>();
      if (v.size() != out.size()) {
        throw DimensionMismatch(who + " has " + std::to_string(v.size()) +
                                " components, checkpoint dimension is " +
                                std::to_string(out.size()));
      }
      std::ranges::copy(v, out.begin());
    };
    std::uint32_t i = 0;
    for (const auto& cls : j.at("classes")) {
      const ClassId id{i++};
      copy_vector(cls.at("center"), c.embeddings.center(id), "class " + class_names[id.value]);
      c.embeddings.radius(id) = cls.at("radius").get<double>();
    }
    i = 0;
    for (const auto& rel : j.at("relations")) {
      const RelationId id{i++};
      copy_vector(rel.at("vector"), c.embeddings.relation(id),
                  "relation " + relation_names[id.value]);
    }
    return c;
  } catch (const nlohmann::json::exception& ex) {
    throw CheckpointError(std::string("corrupt checkpoint: ") + ex.what());
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& c) {
  write_text_file(path, serialize_checkpoint(c));
}

Checkpoint load_checkpoint(const std::filesystem::path& path,
                           std::optional<std::size_t> expected_dim) {
  return parse_checkpoint(read_text_file(path), expected_dim);
}

std::string export_2d(const Checkpoint& c) {
  const EmbeddingSet& e = c.embeddings;
  if (e.dim() != 2) {
    throw DimensionMismatch("2-D export needs a 2-dimensional checkpoint, got " +
                            std::to_string(e.dim()));
  }
  std::string out = "class\tx\ty\tr\n";
  char buf[128];
  for (std::uint32_t i = 0; i < e.class_count(); ++i) {
    const ClassId id{i};
    const auto x = e.center(id);
    std::snprintf(buf, sizeof buf, "\t%.17g\t%.17g\t%.17g\n", x[0], x[1], e.radius(id));
    out += e.class_names()[i];
    out += buf;
  }
  return out;
}

}  // namespace elball
