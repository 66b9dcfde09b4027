// Copyright 2026 the voxaug authors
// SPDX-License-Identifier: Apache-2.0

#include "voxaug/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace voxaug {

void ScoreMatrix::validate() const {
    if (subjects.size() < 2) throw Error(ErrorCode::IncompleteMatrix, "need at least 2 subjects");
    if (conditions.size() < 2) throw Error(ErrorCode::IncompleteMatrix, "need at least 2 conditions");
    if (values.size() != subjects.size() * conditions.size())
        throw Error(ErrorCode::IncompleteMatrix, "score matrix has missing cells");
    for (double v : values)
        if (!std::isfinite(v)) throw Error(ErrorCode::IncompleteMatrix, "non-finite score");
}

std::size_t ScoreMatrix::condition_index(const std::string& name) const {
    for (std::size_t i = 0; i < conditions.size(); ++i)
        if (conditions[i] == name) return i;
    throw Error(ErrorCode::NotFound, "condition '" + name + "' not in matrix");
}

AnovaResult rm_anova(const ScoreMatrix& m) {
    m.validate();
    const std::size_t n = m.subjects.size();
    const std::size_t k = m.conditions.size();

    double grand = 0.0;
    for (double v : m.values) grand += v;
    grand /= static_cast<double>(n * k);

    std::vector<double> cond_mean(k, 0.0), subj_mean(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            cond_mean[j] += m.at(i, j);
            subj_mean[i] += m.at(i, j);
        }
    for (double& v : cond_mean) v /= static_cast<double>(n);
    for (double& v : subj_mean) v /= static_cast<double>(k);

    AnovaResult result;
    double ss_total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            double d = m.at(i, j) - grand;
            ss_total += d * d;
        }
    for (std::size_t j = 0; j < k; ++j) {
        double d = cond_mean[j] - grand;
        result.ss_conditions += static_cast<double>(n) * d * d;
    }
    for (std::size_t i = 0; i < n; ++i) {
        double d = subj_mean[i] - grand;
        result.ss_subjects += static_cast<double>(k) * d * d;
    }
    result.ss_error = ss_total - result.ss_conditions - result.ss_subjects;
    if (result.ss_error < 0.0) result.ss_error = 0.0;  // cancellation guard

    result.df_conditions = static_cast<std::int64_t>(k) - 1;
    result.df_error = static_cast<std::int64_t>(n - 1) * static_cast<std::int64_t>(k - 1);

    const double zero_floor = 1e-12 * std::max(ss_total, 1.0);
    if (result.ss_conditions <= zero_floor) {
        result.f_statistic = 0.0;
        result.p_value = 1.0;
        return result;
    }
    if (result.ss_error <= zero_floor) {
        // Perfectly consistent condition shift; p lies below any machine floor.
        result.degenerate = true;
        result.f_statistic = std::numeric_limits<double>::infinity();
        result.p_value = 0.0;
        return result;
    }
    result.f_statistic = (result.ss_conditions / static_cast<double>(result.df_conditions)) /
                         (result.ss_error / static_cast<double>(result.df_error));
    result.p_value = 1.0 - f_cdf(result.f_statistic, result.df_conditions, result.df_error);
    return result;
}

PairedResult paired_comparison(const ScoreMatrix& m, const std::string& cond_a,
                               const std::string& cond_b) {
    m.validate();
    const std::size_t a = m.condition_index(cond_a);
    const std::size_t b = m.condition_index(cond_b);
    const std::size_t n = m.subjects.size();

    std::vector<double> diff(n);
    for (std::size_t i = 0; i < n; ++i) diff[i] = m.at(i, a) - m.at(i, b);

    PairedResult result;
    result.df = static_cast<std::int64_t>(n) - 1;
    for (double d : diff) result.mean_diff += d;
    result.mean_diff /= static_cast<double>(n);

    double ss = 0.0;
    for (double d : diff) {
        double c = d - result.mean_diff;
        ss += c * c;
    }
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (sd == 0.0) {
        if (result.mean_diff == 0.0) {
            result.t_statistic = 0.0;
            result.p_value = 1.0;
            return result;
        }
        throw Error(ErrorCode::ZeroVarianceDifferences,
                    "all per-subject differences equal " + std::to_string(result.mean_diff));
    }
    result.t_statistic = result.mean_diff / (sd / std::sqrt(static_cast<double>(n)));
    result.p_value = 2.0 * (1.0 - t_cdf(std::abs(result.t_statistic), result.df));
    result.p_value = std::clamp(result.p_value, 0.0, 1.0);
    return result;
}

namespace {

// Continued fraction for the incomplete beta (Lentz's method).
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-16;
    constexpr double kFpMin = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0))
        throw Error(ErrorCode::InvalidArgument, "incomplete_beta requires a, b > 0");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log(1.0 - x);
    const double front = std::exp(ln_front);
    // The continued fraction converges fastest for x < (a+1)/(a+b+2); use the
    // symmetry I_x(a,b) = 1 - I_{1-x}(b,a) on the other side.
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double t_cdf(double x, std::int64_t df) {
    if (df < 1) throw Error(ErrorCode::InvalidDf, "t distribution requires df >= 1");
    if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "t_cdf requires finite x");
    if (x == 0.0) return 0.5;
    const double v = static_cast<double>(df);
    const double tail = 0.5 * incomplete_beta(v / 2.0, 0.5, v / (v + x * x));
    return x > 0.0 ? 1.0 - tail : tail;
}

double f_cdf(double x, std::int64_t d1, std::int64_t d2) {
    if (d1 < 1 || d2 < 1) throw Error(ErrorCode::InvalidDf, "F distribution requires df >= 1");
    if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "f_cdf requires finite x");
    if (x <= 0.0) return 0.0;
    const double a = static_cast<double>(d1);
    const double b = static_cast<double>(d2);
    return incomplete_beta(a / 2.0, b / 2.0, a * x / (a * x + b));
}

namespace {

// Type-7 quantile: linear interpolation between order statistics.
double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.size() == 1) return sorted[0];
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

std::vector<BoxPlotSummary> boxplot_summary(const ScoreMatrix& m) {
    if (m.subjects.empty() || m.conditions.empty())
        throw Error(ErrorCode::EmptyInput, "empty score matrix");
    std::vector<BoxPlotSummary> out;
    out.reserve(m.conditions.size());
    for (std::size_t j = 0; j < m.conditions.size(); ++j) {
        std::vector<double> column(m.subjects.size());
        for (std::size_t i = 0; i < m.subjects.size(); ++i) column[i] = m.at(i, j);
        std::sort(column.begin(), column.end());

        BoxPlotSummary s;
        s.condition = m.conditions[j];
        s.min = column.front();
        s.max = column.back();
        s.q1 = quantile_sorted(column, 0.25);
        s.median = quantile_sorted(column, 0.50);
        s.q3 = quantile_sorted(column, 0.75);

        const double iqr = s.q3 - s.q1;
        const double lo_fence = s.q1 - 1.5 * iqr;
        const double hi_fence = s.q3 + 1.5 * iqr;
        double wl = s.q1, wh = s.q3;
        for (double v : column) {
            if (v < lo_fence || v > hi_fence) {
                s.outliers.push_back(v);
            } else {
                wl = std::min(wl, v);
                wh = std::max(wh, v);
            }
        }
        s.whisker_low = wl;
        s.whisker_high = wh;

        if (column.size() > 1) {
            double mean = 0.0;
            for (double v : column) mean += v;
            mean /= static_cast<double>(column.size());
            double ss = 0.0;
            for (double v : column) ss += (v - mean) * (v - mean);
            s.variance = ss / static_cast<double>(column.size() - 1);
        }
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace voxaug
