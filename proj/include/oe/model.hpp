#ifndef OE_MODEL_HPP
#define OE_MODEL_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>

#include "oe/corpus.hpp"
#include "oe/embedding.hpp"
#include "oe/objectives.hpp"
#include "oe/optimizer.hpp"

namespace oe {

enum class ModelKind : std::uint8_t { order = 0, bilinear = 1 };

std::string_view to_string(ModelKind k);
std::optional<ModelKind> parse_model_kind(std::string_view s);

struct OptimizerCheckpoint {
    AdamState table;
    std::optional<AdamState> bilinear;
    friend bool operator==(const OptimizerCheckpoint&, const OptimizerCheckpoint&) = default;
};

struct Model {
    ModelKind kind = ModelKind::order;
    Vocabulary vocab;
    EmbeddingTable table;
    std::optional<BilinearParams> bilinear;  // present iff kind == bilinear
    std::optional<OptimizerCheckpoint> optimizer;

    std::size_t dim() const noexcept { return table.dim(); }
};

// Binary container, all integers and floats little-endian:
//   "OEMB" | u32 version | u32 dim | u32 vocab | u8 kind | u8 flags | u16 0
//   vocab  : per token u32 byte length, bytes, u64 count
//   matrix : vocab x dim f32, row-major
//   [flags & 1] bilinear : dim x dim f32
//   [flags & 2] "ADAM" then per block (table, then bilinear if present):
//               u64 step per row, first moments f32, second moments f32
inline constexpr std::uint32_t kModelVersion = 1;

void save_model(const Model& m, std::ostream& out);
void save_model(const Model& m, const std::filesystem::path& file);
Model load_model(std::istream& in);
Model load_model(const std::filesystem::path& file);

// `token \t v1 v2 ... vN`, shortest round-trip float formatting.
void export_tsv(const Model& m, std::ostream& out);

}  // namespace oe

#endif  // OE_MODEL_HPP
