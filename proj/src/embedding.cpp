#include "oe/embedding.hpp"

#include <cmath>
#include <stdexcept>

namespace oe {

std::span<const double> SparseGrad::find(std::uint32_t row) const {
    auto it = slot_.find(row);
    if (it == slot_.end()) return {};
    return values(it->second);
}

void SparseGrad::add(std::uint32_t row, std::span<const double> g, double scale) {
    if (g.size() != dim_) throw std::invalid_argument("gradient width mismatch");
    auto [it, inserted] = slot_.try_emplace(row, rows_.size());
    if (inserted) {
        rows_.push_back(row);
        data_.resize(data_.size() + dim_, 0.0);
    }
    double* dst = data_.data() + it->second * dim_;
    for (std::size_t i = 0; i < dim_; ++i) dst[i] += scale * g[i];
}

void SparseGrad::merge(const SparseGrad& other, double scale) {
    for (std::size_t s = 0; s < other.size(); ++s) add(other.rows_[s], other.values(s), scale);
}

void SparseGrad::clear() {
    slot_.clear();
    rows_.clear();
    data_.clear();
}

EmbeddingTable init_table(std::size_t vocab_size, std::size_t dim, Rng& rng, double scale) {
    if (dim == 0) throw std::invalid_argument("embedding dimension must be >= 1");
    EmbeddingTable t(vocab_size, dim);
    for (float& v : t.data()) v = static_cast<float>(uniform01(rng) * scale);
    return t;
}

Vec lookup_phrase(const EmbeddingTable& table, const PhraseRef& phrase) {
    if (phrase.tokens.empty()) throw std::invalid_argument("empty phrase");
    Vec out(table.dim(), 0.0);
    for (TokenId t : phrase.tokens) {
        if (t >= table.rows()) throw std::invalid_argument("token index out of range");
        auto r = table.row(t);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += r[i];
    }
    if (phrase.tokens.size() > 1) {
        const double inv = 1.0 / static_cast<double>(phrase.tokens.size());
        for (double& v : out) v *= inv;
    }
    return out;
}

void project_nonneg(EmbeddingTable& table, std::span<const std::uint32_t> touched_rows) {
    for (std::uint32_t r : touched_rows)
        for (float& v : table.row(r)) v = std::fabs(v);
}

void gradient_accumulate_phrase(const PhraseRef& phrase, std::span<const double> g, SparseGrad& out,
                                double scale) {
    if (phrase.tokens.empty()) throw std::invalid_argument("empty phrase");
    const double share = scale / static_cast<double>(phrase.tokens.size());
    for (TokenId t : phrase.tokens) out.add(t, g, share);
}

}  // namespace oe
