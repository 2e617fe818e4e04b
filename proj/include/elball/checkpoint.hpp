#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "elball/embedding.hpp"

namespace elball {

inline constexpr int kCheckpointVersion = 1;

struct CheckpointMeta {
  std::size_t dim = 0;
  double margin = 0.0;
  std::uint64_t seed = 0;
  std::size_t epochs_completed = 0;
  std::vector<double> loss_trace_tail;
  friend bool operator==(const CheckpointMeta&, const CheckpointMeta&) = default;
};

struct Checkpoint {
  CheckpointMeta meta;
  EmbeddingSet embeddings;
  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

/// JSON with a fixed field order; doubles are written in shortest
/// round-trip form, so save -> load -> save reproduces the bytes.
std::string serialize_checkpoint(const Checkpoint& c);

/// Throws CheckpointError on malformed input or version mismatch, and
/// DimensionMismatch when vectors disagree with the stored dimension or with
/// `expected_dim`.
Checkpoint parse_checkpoint(std::string_view json,
                            std::optional<std::size_t> expected_dim = std::nullopt);

/// Writes to a sibling temporary file and renames it into place.
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& c);
Checkpoint load_checkpoint(const std::filesystem::path& path,
                           std::optional<std::size_t> expected_dim = std::nullopt);

/// Plot table for 2-D embeddings: header "class\tx\ty\tr", one row per class.
std::string export_2d(const Checkpoint& c);

std::string read_text_file(const std::filesystem::path& path);
/// Atomic write via a temporary file in the same directory.
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace elball
