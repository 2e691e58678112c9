#include <cstdint>

#include "oe/embedding.hpp"
#include "oe/kernels.hpp"
#include "oe/objectives.hpp"

namespace oe::kernels {

namespace {

template <class Score>
std::vector<double> score_all(std::span<const std::pair<PhraseRef, PhraseRef>> pairs, Exec exec, Score score) {
    const auto n = static_cast<std::int64_t>(pairs.size());
    std::vector<double> out(pairs.size());
    if (exec == Exec::serial) {
        for (std::int64_t i = 0; i < n; ++i) out[i] = score(pairs[i]);
        return out;
    }
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) out[i] = score(pairs[i]);
    return out;
}

}  // namespace

std::vector<double> order_energies(const EmbeddingTable& table,
                                   std::span<const std::pair<PhraseRef, PhraseRef>> pairs, Exec exec) {
    return score_all(pairs, exec, [&](const auto& p) {
        return order_energy(lookup_phrase(table, p.first), lookup_phrase(table, p.second));
    });
}

std::vector<double> bilinear_scores(const EmbeddingTable& table, const BilinearParams& params,
                                    std::span<const std::pair<PhraseRef, PhraseRef>> pairs, Exec exec) {
    return score_all(pairs, exec, [&](const auto& p) {
        return bilinear_score(lookup_phrase(table, p.first), lookup_phrase(table, p.second), params);
    });
}

}  // namespace oe::kernels
