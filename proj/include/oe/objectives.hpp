#ifndef OE_OBJECTIVES_HPP
#define OE_OBJECTIVES_HPP

#include <span>
#include <vector>

#include "oe/embedding.hpp"

namespace oe {

using VecView = std::span<const double>;

// Loss on a handful of argument vectors. `grads[k]` is the (sub)gradient
// with respect to argument k, and `grads` is empty when the loss is flat
// (inactive hinge or zero penalty).
struct VectorLoss {
    double value = 0.0;
    std::vector<Vec> grads;
    bool active() const noexcept { return !grads.empty(); }
};

// Row-level loss after scattering argument gradients onto table rows.
struct LossValue {
    double value = 0.0;
    SparseGrad grads;
};

// Square N x N bilinear form, row-major.
struct BilinearParams {
    std::size_t dim = 0;
    std::vector<float> weights;

    BilinearParams() = default;
    explicit BilinearParams(std::size_t n) : dim(n), weights(n * n, 0.0f) {}
    float at(std::size_t r, std::size_t c) const { return weights[r * dim + c]; }
    MatrixView view() noexcept { return {weights, dim}; }
    friend bool operator==(const BilinearParams&, const BilinearParams&) = default;
};

// Identity plus uniform noise in [-noise, noise].
BilinearParams init_bilinear(std::size_t dim, Rng& rng, double noise = 0.01);

// sum_i max(0, y_i - x_i)^2 with x the specific (child) vector and y the
// general (parent) one. Zero exactly when x dominates y coordinatewise.
double order_energy(VecView child, VecView parent);

// max(0, m + d(x, y) - d(x', y')); grads ordered (x, y, x', y').
VectorLoss order_margin_loss(VecView x, VecView y, VecView neg_x, VecView neg_y, double margin);

// max(0, m + |v1 - v2|_1 - |v1' - v2'|_1); grads ordered (v1, v2, v1', v2').
// Coordinates with v1 == v2 contribute a zero subgradient.
VectorLoss cbow_l1_loss(VecView target, VecView context_avg, VecView neg_target, VecView neg_context_avg,
                        double margin);

// |max(0, (w1 v w2) - wc)|^2 where v is the pointwise max; grads (w1, w2, wc).
// On ties of the max the gradient goes to w1.
VectorLoss join_penalty(VecView w1, VecView w2, VecView wc);

// |max(0, wp - (w1 ^ w2))|^2 where ^ is the pointwise min; grads (w1, w2, wp).
VectorLoss meet_penalty(VecView w1, VecView w2, VecView wp);

// max(0, m + d_c(w1, w2, wc) - d_c(w1, w2, wc')); grads (w1, w2, wc, wc').
VectorLoss join_margin_loss(VecView w1, VecView w2, VecView wc, VecView neg_wc, double margin);
// max(0, m + d_p(w1, w2, wp) - d_p(w1, w2, wp')); grads (w1, w2, wp, wp').
VectorLoss meet_margin_loss(VecView w1, VecView w2, VecView wp, VecView neg_wp, double margin);

// alpha1 * order + alpha2 * cbow. A zero weight drops that term entirely,
// gradient rows included.
LossValue joint_loss(const LossValue& order_term, const LossValue& cbow_term, double alpha1, double alpha2);

// x . (W y); higher means more likely Is-A.
double bilinear_score(VecView x, VecView y, const BilinearParams& p);

struct BilinearLoss {
    VectorLoss vectors;           // grads (x, y, x', y')
    std::vector<double> weights;  // dL/dW row-major, empty when inactive
};

// max(0, m - s(x, y) + s(x', y')).
BilinearLoss bilinear_margin_loss(VecView x, VecView y, VecView neg_x, VecView neg_y, const BilinearParams& p,
                                  double margin);

}  // namespace oe

#endif  // OE_OBJECTIVES_HPP
