// Copyright 2026 the voxaug authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VOXAUG_LOSSES_HPP
#define VOXAUG_LOSSES_HPP

#include <cstdint>
#include <vector>

#include "voxaug/types.hpp"

namespace voxaug {

/// Log arguments are clamped to [kLossEps, 1 - kLossEps]; the loss formulas
/// are undefined at exact 0/1 probabilities.
inline constexpr double kLossEps = 1e-7;

/// Post-sigmoid probabilities.
struct Prediction {
    std::vector<double> probs;
};

/// Binary labels; every entry must be exactly 0 or 1.
struct Target {
    std::vector<double> labels;
    explicit Target(std::vector<double> values);
};

double bce(const Prediction& pred, const Target& tgt);

/// Rows of class probabilities (each summing to 1 within 1e-5) against
/// one-hot target rows; returns the mean per-row cross-entropy.
double ce(const std::vector<std::vector<double>>& pred_rows,
          const std::vector<std::vector<double>>& tgt_rows);

double dice_loss(const Prediction& pred, const Target& tgt, double smooth = 1e-5);

struct CombinedLossWeights {
    double dice = 1.0;
    double bce = 1.0;
};

double combined_loss(const Prediction& pred, const Target& tgt,
                     const CombinedLossWeights& weights = {}, double smooth = 1e-5);

/// Auxiliary-output losses combined with geometrically decaying weights.
std::vector<double> deep_supervision_weights(std::size_t levels);
double deep_supervision_loss(const std::vector<double>& level_losses);

struct LrSchedule {
    double lr0 = 0.01;
    std::int64_t epoch_max = 300;
    double exponent = 0.9;
};

double poly_lr(const LrSchedule& sched, std::int64_t epoch);

std::vector<double> grad_bce(const Prediction& pred, const Target& tgt);
std::vector<double> grad_dice(const Prediction& pred, const Target& tgt, double smooth = 1e-5);

}  // namespace voxaug

#endif
