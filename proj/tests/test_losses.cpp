// Copyright 2026 the voxaug authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "voxaug/losses.hpp"
#include "voxaug/rng.hpp"

using namespace voxaug;

TEST_CASE("bce hand values") {
    CHECK(bce(Prediction{{0.5}}, Target({1.0})) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(bce(Prediction{{0.9, 0.1}}, Target({1.0, 0.0})) ==
          doctest::Approx(0.10536051565782630).epsilon(1e-12));
    // Perfect prediction collapses to the clamp floor.
    CHECK(bce(Prediction{{1.0}}, Target({1.0})) == doctest::Approx(-std::log(1.0 - kLossEps)));
    CHECK(bce(Prediction{{1.0}}, Target({1.0})) < 1e-6);
}

TEST_CASE("bce validation") {
    CHECK_THROWS_AS(bce(Prediction{{}}, Target({})), Error);
    CHECK_THROWS_AS(bce(Prediction{{0.5, 0.5}}, Target({1.0})), Error);
    CHECK_THROWS_AS(Target({0.5}), Error);
}

TEST_CASE("ce hand values and validation") {
    CHECK(ce({{1.0 - 1e-9, 1e-9}}, {{1.0, 0.0}}) == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(ce({{0.5, 0.5}}, {{1.0, 0.0}}) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(ce({{0.5, 0.4}}, {{1.0, 0.0}}), Error);   // NotNormalized
    CHECK_THROWS_AS(ce({{0.5, 0.5}}, {{1.0, 1.0}}), Error);   // not one-hot
}

TEST_CASE("two-class ce equals bce") {
    RngStream rng(123, 0, 0);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = 1 + rng.uniform_int(10);
        std::vector<std::vector<double>> rows, hots;
        Prediction pred;
        std::vector<double> tgt;
        for (std::size_t i = 0; i < n; ++i) {
            double p = rng.uniform(0.01, 0.99);
            double y = rng.bernoulli(0.5) ? 1.0 : 0.0;
            rows.push_back({p, 1.0 - p});
            hots.push_back({y, 1.0 - y});
            pred.probs.push_back(p);
            tgt.push_back(y);
        }
        CHECK(std::abs(ce(rows, hots) - bce(pred, Target(tgt))) <= 1e-7);
    }
}

TEST_CASE("dice loss") {
    Prediction perfect{{1.0, 0.0, 1.0}};
    Target same({1.0, 0.0, 1.0});
    CHECK(dice_loss(perfect, same) == doctest::Approx(0.0).epsilon(2e-5));

    Prediction disjoint{{1.0, 0.0}};
    Target other({0.0, 1.0});
    CHECK(dice_loss(disjoint, other) == doctest::Approx(1.0).epsilon(2e-5));

    CHECK(dice_loss(Prediction{{1.0, 1.0, 0.0, 0.0}}, Target({1.0, 0.0, 1.0, 0.0}), 0.0) ==
          doctest::Approx(0.5));
}

TEST_CASE("combined loss composition") {
    Prediction p{{0.5}};
    Target t({1.0});
    CHECK(combined_loss(p, t) == doctest::Approx(dice_loss(p, t) + bce(p, t)));
    CHECK(combined_loss(p, t, {1.0, 0.0}) == doctest::Approx(dice_loss(p, t)));
    Prediction good{{1.0, 0.0}};
    Target same({1.0, 0.0});
    CHECK(combined_loss(good, same) == doctest::Approx(0.0).epsilon(1e-4));
}

TEST_CASE("deep supervision weights and sum") {
    CHECK(deep_supervision_loss({1.0, 1.0, 1.0}) == 1.75);
    CHECK(deep_supervision_loss({0.37}) == 0.37);
    CHECK(deep_supervision_loss({0.0, 0.0, 0.0, 0.0}) == 0.0);
    CHECK(deep_supervision_weights(4) == std::vector<double>{1.0, 0.5, 0.25, 0.125});
    CHECK_THROWS_AS(deep_supervision_loss({}), Error);

    // Linearity in the level losses.
    RngStream rng(4, 0, 0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> a(3), b(3), sum(3);
        for (int i = 0; i < 3; ++i) {
            a[i] = rng.uniform(-2, 2);
            b[i] = rng.uniform(-2, 2);
            sum[i] = a[i] + b[i];
        }
        CHECK(deep_supervision_loss(sum) ==
              doctest::Approx(deep_supervision_loss(a) + deep_supervision_loss(b)).epsilon(1e-12));
    }
}

TEST_CASE("poly_lr schedule") {
    LrSchedule sched{0.01, 300, 0.9};
    CHECK(poly_lr(sched, 0) == 0.01);
    CHECK(poly_lr(sched, 300) == 0.0);
    CHECK(poly_lr(sched, 150) == doctest::Approx(0.0053588673126814658).epsilon(1e-12));
    CHECK_THROWS_AS(poly_lr(sched, 301), Error);
    CHECK_THROWS_AS(poly_lr(sched, -1), Error);

    double previous = poly_lr(sched, 0);
    for (std::int64_t epoch = 1; epoch <= 300; ++epoch) {
        double lr = poly_lr(sched, epoch);
        CHECK(lr <= previous);
        previous = lr;
    }
}

TEST_CASE("analytic gradients") {
    CHECK(grad_bce(Prediction{{0.5}}, Target({1.0}))[0] == doctest::Approx(-2.0));

    SUBCASE("match central finite differences on random inputs") {
        RngStream rng(9, 0, 0);
        const double h = 1e-4;
        for (int trial = 0; trial < 100; ++trial) {
            std::size_t n = 2 + rng.uniform_int(8);
            Prediction pred;
            std::vector<double> tgt;
            for (std::size_t i = 0; i < n; ++i) {
                pred.probs.push_back(rng.uniform(0.05, 0.95));
                tgt.push_back(rng.bernoulli(0.5) ? 1.0 : 0.0);
            }
            Target target(tgt);
            auto gb = grad_bce(pred, target);
            auto gd = grad_dice(pred, target);
            for (std::size_t i = 0; i < n; ++i) {
                Prediction up = pred, down = pred;
                up.probs[i] += h;
                down.probs[i] -= h;
                double fd_b = (bce(up, target) - bce(down, target)) / (2 * h);
                double fd_d = (dice_loss(up, target) - dice_loss(down, target)) / (2 * h);
                CHECK(std::abs(gb[i] - fd_b) <= 1e-5 * std::max(1.0, std::abs(fd_b)));
                CHECK(std::abs(gd[i] - fd_d) <= 1e-5 * std::max(1.0, std::abs(fd_d)));
            }
        }
    }

    SUBCASE("clamped gradients stay finite and bounded by 1/eps") {
        auto g1 = grad_bce(Prediction{{1.0}}, Target({1.0}));
        auto g0 = grad_bce(Prediction{{0.0}}, Target({1.0}));
        CHECK(std::isfinite(g1[0]));
        CHECK(std::isfinite(g0[0]));
        CHECK(std::abs(g1[0]) <= 1.0 / kLossEps + 1.0);
        CHECK(std::abs(g0[0]) <= 1.0 / kLossEps + 1.0);
    }
}

TEST_CASE("losses are non-negative; zero only at match") {
    RngStream rng(21, 0, 0);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t n = 1 + rng.uniform_int(12);
        Prediction pred;
        std::vector<double> tgt;
        for (std::size_t i = 0; i < n; ++i) {
            pred.probs.push_back(rng.uniform(0.01, 0.99));
            tgt.push_back(rng.bernoulli(0.5) ? 1.0 : 0.0);
        }
        Target target(tgt);
        CHECK(bce(pred, target) >= 0.0);
        double d = dice_loss(pred, target);
        CHECK(d >= 0.0);
        CHECK(d <= 1.0);
    }
}
