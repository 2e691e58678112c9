#include "oe/optimizer.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "oe/error.hpp"

namespace oe {

void adam_step(const AdamConfig& cfg, AdamState& state, MatrixView params, const SparseGrad& grads) {
    const std::size_t cols = params.cols;
    if (grads.dim() != cols || state.cols != cols) throw DimensionMismatch(grads.dim(), cols);
    if (state.rows() != params.rows()) throw std::invalid_argument("optimizer state does not match parameters");
    for (std::size_t s = 0; s < grads.size(); ++s) {
        std::uint32_t r = grads.rows()[s];
        if (r >= params.rows()) throw std::out_of_range("gradient row " + std::to_string(r) + " out of range");
        for (double g : grads.values(s))
            if (!std::isfinite(g)) throw NonFiniteError("non-finite gradient in row " + std::to_string(r));
    }

    for (std::size_t s = 0; s < grads.size(); ++s) {
        std::uint32_t r = grads.rows()[s];
        auto g = grads.values(s);
        auto p = params.row(r);
        if (cfg.plain_sgd) {
            for (std::size_t i = 0; i < cols; ++i) p[i] = static_cast<float>(p[i] - cfg.learning_rate * g[i]);
            continue;
        }
        const auto t = static_cast<double>(++state.row_steps[r]);
        const double c1 = 1.0 - std::pow(cfg.beta1, t);
        const double c2 = 1.0 - std::pow(cfg.beta2, t);
        float* m = state.first_moment.data() + r * cols;
        float* v = state.second_moment.data() + r * cols;
        for (std::size_t i = 0; i < cols; ++i) {
            double mi = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
            double vi = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
            m[i] = static_cast<float>(mi);
            v[i] = static_cast<float>(vi);
            double step = cfg.learning_rate * (mi / c1) / (std::sqrt(vi / c2) + cfg.epsilon);
            p[i] = static_cast<float>(p[i] - step);
        }
    }
}

}  // namespace oe
