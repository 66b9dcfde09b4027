// Copyright 2026 the voxaug authors
// SPDX-License-Identifier: Apache-2.0

#include "voxaug/losses.hpp"

#include <algorithm>
#include <cmath>

namespace voxaug {

namespace {

double clamp_prob(double v) { return std::clamp(v, kLossEps, 1.0 - kLossEps); }

void require_pair(const Prediction& pred, const Target& tgt) {
    if (pred.probs.empty()) throw Error(ErrorCode::EmptyInput, "empty prediction");
    if (pred.probs.size() != tgt.labels.size())
        throw Error(ErrorCode::LengthMismatch, "prediction and target lengths differ");
}

}  // namespace

Target::Target(std::vector<double> values) : labels(std::move(values)) {
    for (double v : labels)
        if (v != 0.0 && v != 1.0)
            throw Error(ErrorCode::InvalidArgument, "target labels must be exactly 0 or 1");
}

double bce(const Prediction& pred, const Target& tgt) {
    require_pair(pred, tgt);
    const std::size_t n = pred.probs.size();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double yhat = clamp_prob(pred.probs[i]);
        double y = tgt.labels[i];
        total += y * std::log(yhat) + (1.0 - y) * std::log(1.0 - yhat);
    }
    return -total / static_cast<double>(n);
}

double ce(const std::vector<std::vector<double>>& pred_rows,
          const std::vector<std::vector<double>>& tgt_rows) {
    if (pred_rows.empty()) throw Error(ErrorCode::EmptyInput, "empty prediction");
    if (pred_rows.size() != tgt_rows.size())
        throw Error(ErrorCode::LengthMismatch, "prediction and target row counts differ");

    double total = 0.0;
    for (std::size_t r = 0; r < pred_rows.size(); ++r) {
        const auto& probs = pred_rows[r];
        const auto& onehot = tgt_rows[r];
        if (probs.size() != onehot.size())
            throw Error(ErrorCode::LengthMismatch, "row " + std::to_string(r) + ": length mismatch");
        if (probs.empty()) throw Error(ErrorCode::EmptyInput, "row " + std::to_string(r) + " is empty");

        double row_sum = 0.0;
        for (double v : probs) row_sum += v;
        if (std::abs(row_sum - 1.0) > 1e-5)
            throw Error(ErrorCode::NotNormalized,
                        "row " + std::to_string(r) + " sums to " + std::to_string(row_sum));

        double hot_total = 0.0;
        double row = 0.0;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            double y = onehot[i];
            if (y != 0.0 && y != 1.0)
                throw Error(ErrorCode::InvalidArgument, "targets must be one-hot rows");
            hot_total += y;
            if (y == 1.0) row -= std::log(clamp_prob(probs[i]));
        }
        if (hot_total != 1.0)
            throw Error(ErrorCode::InvalidArgument,
                        "row " + std::to_string(r) + " target is not one-hot");
        total += row;
    }
    return total / static_cast<double>(pred_rows.size());
}

double dice_loss(const Prediction& pred, const Target& tgt, double smooth) {
    require_pair(pred, tgt);
    if (smooth < 0.0) throw Error(ErrorCode::InvalidArgument, "smooth must be >= 0");
    double intersection = 0.0, pred_sum = 0.0, tgt_sum = 0.0;
    for (std::size_t i = 0; i < pred.probs.size(); ++i) {
        intersection += pred.probs[i] * tgt.labels[i];
        pred_sum += pred.probs[i];
        tgt_sum += tgt.labels[i];
    }
    return 1.0 - (2.0 * intersection + smooth) / (pred_sum + tgt_sum + smooth);
}

double combined_loss(const Prediction& pred, const Target& tgt, const CombinedLossWeights& weights,
                     double smooth) {
    return weights.dice * dice_loss(pred, tgt, smooth) + weights.bce * bce(pred, tgt);
}

std::vector<double> deep_supervision_weights(std::size_t levels) {
    if (levels < 1) throw Error(ErrorCode::EmptyInput, "at least one supervision level required");
    std::vector<double> weights(levels);
    double w = 1.0;
    for (std::size_t i = 0; i < levels; ++i, w *= 0.5) weights[i] = w;
    return weights;
}

double deep_supervision_loss(const std::vector<double>& level_losses) {
    if (level_losses.empty()) throw Error(ErrorCode::EmptyInput, "no level losses given");
    double total = 0.0, w = 1.0;
    for (double loss : level_losses) {
        total += w * loss;
        w *= 0.5;
    }
    return total;
}

double poly_lr(const LrSchedule& sched, std::int64_t epoch) {
    if (!(sched.lr0 > 0.0)) throw Error(ErrorCode::InvalidArgument, "lr0 must be > 0");
    if (sched.epoch_max < 1) throw Error(ErrorCode::InvalidArgument, "epoch_max must be >= 1");
    if (epoch < 0 || epoch > sched.epoch_max)
        throw Error(ErrorCode::EpochOutOfRange,
                    "epoch " + std::to_string(epoch) + " outside [0, " +
                        std::to_string(sched.epoch_max) + "]");
    double base = 1.0 - static_cast<double>(epoch) / static_cast<double>(sched.epoch_max);
    return sched.lr0 * std::pow(base, sched.exponent);
}

std::vector<double> grad_bce(const Prediction& pred, const Target& tgt) {
    require_pair(pred, tgt);
    const auto n = static_cast<double>(pred.probs.size());
    std::vector<double> grad(pred.probs.size());
    for (std::size_t i = 0; i < pred.probs.size(); ++i) {
        double yhat = clamp_prob(pred.probs[i]);
        double y = tgt.labels[i];
        grad[i] = -(y / yhat - (1.0 - y) / (1.0 - yhat)) / n;
    }
    return grad;
}

std::vector<double> grad_dice(const Prediction& pred, const Target& tgt, double smooth) {
    require_pair(pred, tgt);
    double intersection = 0.0, pred_sum = 0.0, tgt_sum = 0.0;
    for (std::size_t i = 0; i < pred.probs.size(); ++i) {
        intersection += pred.probs[i] * tgt.labels[i];
        pred_sum += pred.probs[i];
        tgt_sum += tgt.labels[i];
    }
    const double denom = pred_sum + tgt_sum + smooth;
    std::vector<double> grad(pred.probs.size());
    for (std::size_t i = 0; i < pred.probs.size(); ++i)
        grad[i] = -(2.0 * tgt.labels[i] * denom - (2.0 * intersection + smooth)) / (denom * denom);
    return grad;
}

}  // namespace voxaug
