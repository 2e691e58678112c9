#ifndef OE_OPTIMIZER_HPP
#define OE_OPTIMIZER_HPP

#include <cstdint>
#include <vector>

#include "oe/embedding.hpp"

namespace oe {

struct AdamConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    bool plain_sgd = false;  // debug mode: p -= lr * g, moments untouched
};

// Lazy Adam: moments and bias-correction step counters are kept per row and
// only advance for rows that receive a gradient.
struct AdamState {
    std::size_t cols = 0;
    std::vector<float> first_moment;
    std::vector<float> second_moment;
    std::vector<std::uint64_t> row_steps;

    AdamState() = default;
    AdamState(std::size_t rows, std::size_t width)
        : cols(width), first_moment(rows * width, 0.0f), second_moment(rows * width, 0.0f), row_steps(rows, 0) {}
    std::size_t rows() const noexcept { return row_steps.size(); }
    friend bool operator==(const AdamState&, const AdamState&) = default;
};

// Updates exactly the rows present in `grads`. Throws NonFiniteError naming
// the row before anything is modified if any gradient entry is not finite.
void adam_step(const AdamConfig& cfg, AdamState& state, MatrixView params, const SparseGrad& grads);

}  // namespace oe

#endif  // OE_OPTIMIZER_HPP
