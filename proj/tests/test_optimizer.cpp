#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>

#include "oe/error.hpp"
#include "oe/optimizer.hpp"

using namespace oe;

namespace {

// Scalar Adam written straight from the update rule.
struct ScalarAdam {
    double m = 0, v = 0;
    int t = 0;
    double step(double p, double g, const AdamConfig& c) {
        ++t;
        m = c.beta1 * m + (1 - c.beta1) * g;
        v = c.beta2 * v + (1 - c.beta2) * g * g;
        double mh = m / (1 - std::pow(c.beta1, t));
        double vh = v / (1 - std::pow(c.beta2, t));
        return p - c.learning_rate * mh / (std::sqrt(vh) + c.epsilon);
    }
};

}  // namespace

TEST_CASE("adam matches a scalar reference over many steps") {
    AdamConfig cfg;
    cfg.learning_rate = 0.05;
    std::vector<float> params{0.7f};
    AdamState state(1, 1);
    ScalarAdam ref;
    double p = 0.7;
    for (int i = 0; i < 200; ++i) {
        double g = std::sin(0.3 * i) + 0.1 * i;
        SparseGrad grads(1);
        std::vector<double> gv{g};
        grads.add(0, gv);
        adam_step(cfg, state, MatrixView{params, 1}, grads);
        p = ref.step(p, g, cfg);
        CHECK(params[0] == doctest::Approx(p).epsilon(1e-4));
    }
}

TEST_CASE("rows without a gradient keep parameters, moments and step count") {
    AdamConfig cfg;
    std::vector<float> params{1, 2, 3, 4, 5, 6};
    AdamState state(3, 2);
    SparseGrad grads(2);
    std::vector<double> g{0.5, -0.5};
    grads.add(1, g);
    adam_step(cfg, state, MatrixView{params, 2}, grads);
    CHECK(params[0] == 1);
    CHECK(params[1] == 2);
    CHECK(params[4] == 5);
    CHECK(params[5] == 6);
    CHECK(params[2] < 3);
    CHECK(params[3] > 4);
    CHECK(state.row_steps[0] == 0);
    CHECK(state.row_steps[1] == 1);
    CHECK(state.row_steps[2] == 0);
    CHECK(state.first_moment[0] == 0);
    CHECK(state.second_moment[5] == 0);
}

TEST_CASE("bias correction is per row") {
    AdamConfig cfg;
    cfg.learning_rate = 0.1;
    std::vector<float> params{0, 0};
    AdamState state(2, 1);
    std::vector<double> g{1.0};
    for (int i = 0; i < 5; ++i) {
        SparseGrad only0(1);
        only0.add(0, g);
        adam_step(cfg, state, MatrixView{params, 1}, only0);
    }
    SparseGrad only1(1);
    only1.add(1, g);
    adam_step(cfg, state, MatrixView{params, 1}, only1);
    // A fresh row's first step moves by lr regardless of how often others stepped.
    CHECK(params[1] == doctest::Approx(-0.1).epsilon(1e-5));
    CHECK(state.row_steps[0] == 5);
}

TEST_CASE("non-finite gradients are rejected before any update") {
    AdamConfig cfg;
    std::vector<float> params{1, 1};
    AdamState state(2, 1);
    SparseGrad grads(1);
    std::vector<double> ok{1.0}, bad{std::numeric_limits<double>::quiet_NaN()};
    grads.add(0, ok);
    grads.add(1, bad);
    CHECK_THROWS_AS(adam_step(cfg, state, MatrixView{params, 1}, grads), NonFiniteError);
    CHECK(params[0] == 1);
    CHECK(state.row_steps[0] == 0);
}

TEST_CASE("plain sgd mode") {
    AdamConfig cfg;
    cfg.plain_sgd = true;
    cfg.learning_rate = 0.5;
    std::vector<float> params{1};
    AdamState state(1, 1);
    SparseGrad grads(1);
    std::vector<double> g{2.0};
    grads.add(0, g);
    adam_step(cfg, state, MatrixView{params, 1}, grads);
    CHECK(params[0] == doctest::Approx(0.0));
    CHECK(state.first_moment[0] == 0);
}

TEST_CASE("converges on a separable quadratic") {
    AdamConfig cfg;
    cfg.learning_rate = 1e-2;
    std::vector<float> params{3.0f, -2.0f, 0.5f};
    const double target[3] = {1.0, 1.0, -1.0};
    AdamState state(3, 1);
    auto loss = [&] {
        double s = 0;
        for (int i = 0; i < 3; ++i) s += (params[i] - target[i]) * (params[i] - target[i]);
        return s;
    };
    const double start = loss();
    for (int it = 0; it < 500; ++it) {
        SparseGrad grads(1);
        for (std::uint32_t i = 0; i < 3; ++i) {
            std::vector<double> g{2.0 * (params[i] - target[i])};
            grads.add(i, g);
        }
        adam_step(cfg, state, MatrixView{params, 1}, grads);
    }
    CHECK(loss() < 0.1 * start);
}

TEST_CASE("a zero gradient leaves a fresh row alone and only decays moments") {
    AdamConfig cfg;
    std::vector<float> params{0.3f, 0.4f};
    AdamState state(2, 1);
    std::vector<double> zero{0.0};
    SparseGrad z(1);
    z.add(0, zero);
    adam_step(cfg, state, MatrixView{params, 1}, z);
    CHECK(params[0] == 0.3f);
    CHECK(state.first_moment[0] == 0.0f);

    std::vector<double> one{1.0};
    SparseGrad g(1);
    g.add(1, one);
    adam_step(cfg, state, MatrixView{params, 1}, g);
    float m = state.first_moment[1], v = state.second_moment[1];
    SparseGrad z1(1);
    z1.add(1, zero);
    adam_step(cfg, state, MatrixView{params, 1}, z1);
    CHECK(state.first_moment[1] == doctest::Approx(cfg.beta1 * m));
    CHECK(state.second_moment[1] == doctest::Approx(cfg.beta2 * v));
}

TEST_CASE("a single step moves by about the learning rate") {
    AdamConfig cfg;
    for (double g : {0.5, -3.0, 1e-3}) {
        std::vector<float> params{0.0f};
        AdamState state(1, 1);
        SparseGrad grads(1);
        std::vector<double> gv{g};
        grads.add(0, gv);
        adam_step(cfg, state, MatrixView{params, 1}, grads);
        ScalarAdam ref;
        CHECK(params[0] == doctest::Approx(ref.step(0.0, g, cfg)));
        CHECK(std::fabs(std::fabs(params[0]) - cfg.learning_rate) < 1e-6);
    }
}

TEST_CASE("an untouched parameter is bit-identical after 100 steps") {
    AdamConfig cfg;
    std::vector<float> params{0.123456f, 0.654321f};
    AdamState state(2, 1);
    const float untouched = params[1];
    for (int i = 0; i < 100; ++i) {
        SparseGrad grads(1);
        std::vector<double> g{std::cos(i * 0.1)};
        grads.add(0, g);
        adam_step(cfg, state, MatrixView{params, 1}, grads);
    }
    CHECK(std::memcmp(&params[1], &untouched, sizeof(float)) == 0);
}
