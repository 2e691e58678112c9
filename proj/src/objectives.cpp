#include "oe/objectives.hpp"

#include <algorithm>
#include <cmath>

#include "oe/error.hpp"

namespace oe {

namespace {

void check_dims(VecView a, VecView b) {
    if (a.size() != b.size()) throw DimensionMismatch(a.size(), b.size());
}

double sign(double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }

double l1_distance(VecView a, VecView b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::fabs(a[i] - b[i]);
    return s;
}

// d/dchild and d/dparent of order_energy, accumulated with `scale`.
void order_energy_grad(VecView x, VecView y, double scale, Vec& gx, Vec& gy) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        double diff = y[i] - x[i];
        if (diff > 0) {
            gx[i] -= scale * 2.0 * diff;
            gy[i] += scale * 2.0 * diff;
        }
    }
}

double join_value(VecView w1, VecView w2, VecView wc) {
    double s = 0.0;
    for (std::size_t i = 0; i < w1.size(); ++i) {
        double diff = std::max(w1[i], w2[i]) - wc[i];
        if (diff > 0) s += diff * diff;
    }
    return s;
}

double meet_value(VecView w1, VecView w2, VecView wp) {
    double s = 0.0;
    for (std::size_t i = 0; i < w1.size(); ++i) {
        double diff = wp[i] - std::min(w1[i], w2[i]);
        if (diff > 0) s += diff * diff;
    }
    return s;
}

void join_grad(VecView w1, VecView w2, VecView wc, double scale, Vec& g1, Vec& g2, Vec& gc) {
    for (std::size_t i = 0; i < w1.size(); ++i) {
        bool first = w1[i] >= w2[i];
        double diff = (first ? w1[i] : w2[i]) - wc[i];
        if (diff <= 0) continue;
        (first ? g1 : g2)[i] += scale * 2.0 * diff;
        gc[i] -= scale * 2.0 * diff;
    }
}

void meet_grad(VecView w1, VecView w2, VecView wp, double scale, Vec& g1, Vec& g2, Vec& gp) {
    for (std::size_t i = 0; i < w1.size(); ++i) {
        bool first = w1[i] <= w2[i];
        double diff = wp[i] - (first ? w1[i] : w2[i]);
        if (diff <= 0) continue;
        (first ? g1 : g2)[i] -= scale * 2.0 * diff;
        gp[i] += scale * 2.0 * diff;
    }
}

std::vector<Vec> zero_grads(std::size_t count, std::size_t dim) { return std::vector<Vec>(count, Vec(dim, 0.0)); }

}  // namespace

BilinearParams init_bilinear(std::size_t dim, Rng& rng, double noise) {
    BilinearParams p(dim);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c)
            p.weights[r * dim + c] =
                static_cast<float>((r == c ? 1.0 : 0.0) + noise * (2.0 * uniform01(rng) - 1.0));
    return p;
}

double order_energy(VecView child, VecView parent) {
    check_dims(child, parent);
    double s = 0.0;
    for (std::size_t i = 0; i < child.size(); ++i) {
        double diff = parent[i] - child[i];
        if (diff > 0) s += diff * diff;
    }
    return s;
}

VectorLoss order_margin_loss(VecView x, VecView y, VecView neg_x, VecView neg_y, double margin) {
    check_dims(x, y);
    check_dims(x, neg_x);
    check_dims(x, neg_y);
    VectorLoss out;
    double slack = margin + order_energy(x, y) - order_energy(neg_x, neg_y);
    if (slack <= 0) return out;
    out.value = slack;
    out.grads = zero_grads(4, x.size());
    order_energy_grad(x, y, 1.0, out.grads[0], out.grads[1]);
    order_energy_grad(neg_x, neg_y, -1.0, out.grads[2], out.grads[3]);
    return out;
}

VectorLoss cbow_l1_loss(VecView target, VecView context_avg, VecView neg_target, VecView neg_context_avg,
                        double margin) {
    check_dims(target, context_avg);
    check_dims(target, neg_target);
    check_dims(target, neg_context_avg);
    VectorLoss out;
    double slack = margin + l1_distance(target, context_avg) - l1_distance(neg_target, neg_context_avg);
    if (slack <= 0) return out;
    out.value = slack;
    out.grads = zero_grads(4, target.size());
    for (std::size_t i = 0; i < target.size(); ++i) {
        double sp = sign(target[i] - context_avg[i]);
        double sn = sign(neg_target[i] - neg_context_avg[i]);
        out.grads[0][i] += sp;
        out.grads[1][i] -= sp;
        out.grads[2][i] -= sn;
        out.grads[3][i] += sn;
    }
    return out;
}

VectorLoss join_penalty(VecView w1, VecView w2, VecView wc) {
    check_dims(w1, w2);
    check_dims(w1, wc);
    VectorLoss out;
    out.value = join_value(w1, w2, wc);
    if (out.value <= 0) return out;
    out.grads = zero_grads(3, w1.size());
    join_grad(w1, w2, wc, 1.0, out.grads[0], out.grads[1], out.grads[2]);
    return out;
}

VectorLoss meet_penalty(VecView w1, VecView w2, VecView wp) {
    check_dims(w1, w2);
    check_dims(w1, wp);
    VectorLoss out;
    out.value = meet_value(w1, w2, wp);
    if (out.value <= 0) return out;
    out.grads = zero_grads(3, w1.size());
    meet_grad(w1, w2, wp, 1.0, out.grads[0], out.grads[1], out.grads[2]);
    return out;
}

VectorLoss join_margin_loss(VecView w1, VecView w2, VecView wc, VecView neg_wc, double margin) {
    check_dims(w1, w2);
    check_dims(w1, wc);
    check_dims(w1, neg_wc);
    VectorLoss out;
    double slack = margin + join_value(w1, w2, wc) - join_value(w1, w2, neg_wc);
    if (slack <= 0) return out;
    out.value = slack;
    out.grads = zero_grads(4, w1.size());
    join_grad(w1, w2, wc, 1.0, out.grads[0], out.grads[1], out.grads[2]);
    join_grad(w1, w2, neg_wc, -1.0, out.grads[0], out.grads[1], out.grads[3]);
    return out;
}

VectorLoss meet_margin_loss(VecView w1, VecView w2, VecView wp, VecView neg_wp, double margin) {
    check_dims(w1, w2);
    check_dims(w1, wp);
    check_dims(w1, neg_wp);
    VectorLoss out;
    double slack = margin + meet_value(w1, w2, wp) - meet_value(w1, w2, neg_wp);
    if (slack <= 0) return out;
    out.value = slack;
    out.grads = zero_grads(4, w1.size());
    meet_grad(w1, w2, wp, 1.0, out.grads[0], out.grads[1], out.grads[2]);
    meet_grad(w1, w2, neg_wp, -1.0, out.grads[0], out.grads[1], out.grads[3]);
    return out;
}

LossValue joint_loss(const LossValue& order_term, const LossValue& cbow_term, double alpha1, double alpha2) {
    std::size_t dim = std::max(order_term.grads.dim(), cbow_term.grads.dim());
    LossValue out{0.0, SparseGrad(dim)};
    if (alpha1 != 0.0) {
        out.value += alpha1 * order_term.value;
        out.grads.merge(order_term.grads, alpha1);
    }
    if (alpha2 != 0.0) {
        out.value += alpha2 * cbow_term.value;
        out.grads.merge(cbow_term.grads, alpha2);
    }
    return out;
}

double bilinear_score(VecView x, VecView y, const BilinearParams& p) {
    check_dims(x, y);
    if (x.size() != p.dim) throw DimensionMismatch(x.size(), p.dim);
    double s = 0.0;
    for (std::size_t r = 0; r < p.dim; ++r) {
        double wy = 0.0;
        for (std::size_t c = 0; c < p.dim; ++c) wy += static_cast<double>(p.at(r, c)) * y[c];
        s += x[r] * wy;
    }
    return s;
}

BilinearLoss bilinear_margin_loss(VecView x, VecView y, VecView neg_x, VecView neg_y, const BilinearParams& p,
                                  double margin) {
    check_dims(x, neg_x);
    check_dims(x, neg_y);
    BilinearLoss out;
    double slack = margin - bilinear_score(x, y, p) + bilinear_score(neg_x, neg_y, p);
    if (slack <= 0) return out;
    const std::size_t n = p.dim;
    out.vectors.value = slack;
    out.vectors.grads = zero_grads(4, n);
    out.weights.assign(n * n, 0.0);
    auto& g = out.vectors.grads;
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            double w = p.at(r, c);
            g[0][r] -= w * y[c];
            g[1][c] -= w * x[r];
            g[2][r] += w * neg_y[c];
            g[3][c] += w * neg_x[r];
            out.weights[r * n + c] = -x[r] * y[c] + neg_x[r] * neg_y[c];
        }
    }
    return out;
}

}  // namespace oe
