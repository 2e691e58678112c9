#ifndef OE_EMBEDDING_HPP
#define OE_EMBEDDING_HPP

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "oe/random.hpp"

namespace oe {

using TokenId = std::uint32_t;
using Vec = std::vector<double>;

// Row-major float matrix view shared by the embedding table and the
// bilinear form so the optimizer can treat both as parameter blocks.
struct MatrixView {
    std::span<float> data;
    std::size_t cols = 0;
    std::size_t rows() const noexcept { return cols == 0 ? 0 : data.size() / cols; }
    std::span<float> row(std::size_t r) const { return data.subspan(r * cols, cols); }
};

// Gradient rows keyed by row index. Iteration follows first-insertion order,
// which keeps optimizer updates deterministic.
class SparseGrad {
   public:
    explicit SparseGrad(std::size_t dim = 0) : dim_(dim) {}

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return rows_.size(); }
    bool empty() const noexcept { return rows_.empty(); }
    std::span<const std::uint32_t> rows() const noexcept { return rows_; }
    std::span<const double> values(std::size_t slot) const {
        return std::span<const double>(data_).subspan(slot * dim_, dim_);
    }
    // Gradient for `row`, or empty span when absent.
    std::span<const double> find(std::uint32_t row) const;

    void add(std::uint32_t row, std::span<const double> g, double scale = 1.0);
    void merge(const SparseGrad& other, double scale = 1.0);
    void clear();

   private:
    std::size_t dim_;
    std::unordered_map<std::uint32_t, std::size_t> slot_;
    std::vector<std::uint32_t> rows_;
    std::vector<double> data_;
};

class EmbeddingTable {
   public:
    EmbeddingTable() = default;
    EmbeddingTable(std::size_t rows, std::size_t dim) : rows_(rows), dim_(dim), data_(rows * dim, 0.0f) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t dim() const noexcept { return dim_; }
    std::span<float> row(std::size_t r) { return std::span<float>(data_).subspan(r * dim_, dim_); }
    std::span<const float> row(std::size_t r) const {
        return std::span<const float>(data_).subspan(r * dim_, dim_);
    }
    std::span<const float> data() const noexcept { return data_; }
    std::span<float> data() noexcept { return data_; }
    MatrixView view() noexcept { return {data_, dim_}; }

    friend bool operator==(const EmbeddingTable&, const EmbeddingTable&) = default;

   private:
    std::size_t rows_ = 0;
    std::size_t dim_ = 0;
    std::vector<float> data_;
};

// A multi-word term: the mean of its constituent token rows.
struct PhraseRef {
    std::vector<TokenId> tokens;
    friend bool operator==(const PhraseRef&, const PhraseRef&) = default;
};

// Entries uniform in [0, scale].
EmbeddingTable init_table(std::size_t vocab_size, std::size_t dim, Rng& rng, double scale = 0.1);

// Throws std::invalid_argument for an empty phrase or out-of-range token.
Vec lookup_phrase(const EmbeddingTable& table, const PhraseRef& phrase);

// Absolute value of every entry in the listed rows.
void project_nonneg(EmbeddingTable& table, std::span<const std::uint32_t> touched_rows);

// Chain rule through the phrase mean: each constituent gets g / |phrase|
// (repeated tokens accumulate once per occurrence).
void gradient_accumulate_phrase(const PhraseRef& phrase, std::span<const double> g, SparseGrad& out,
                                double scale = 1.0);

}  // namespace oe

#endif  // OE_EMBEDDING_HPP
