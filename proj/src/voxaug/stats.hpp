// Copyright 2026 the voxaug authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VOXAUG_STATS_HPP
#define VOXAUG_STATS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "voxaug/types.hpp"

namespace voxaug {

/// Complete n-subjects x k-conditions score table (repeated-measures design:
/// every subject is measured under every condition).
struct ScoreMatrix {
    std::vector<std::string> subjects;    // n
    std::vector<std::string> conditions;  // k
    std::vector<double> values;           // n*k, row-major

    double at(std::size_t subject, std::size_t condition) const {
        return values[subject * conditions.size() + condition];
    }
    void validate() const;
    std::size_t condition_index(const std::string& name) const;
};

struct AnovaResult {
    double ss_conditions = 0.0;
    double ss_subjects = 0.0;
    double ss_error = 0.0;
    std::int64_t df_conditions = 0;
    std::int64_t df_error = 0;
    double f_statistic = 0.0;
    double p_value = 1.0;
    bool degenerate = false;  // ss_error == 0 with ss_conditions > 0
};

/// One-way repeated-measures decomposition:
/// ss_total = ss_conditions + ss_subjects + ss_error,
/// F = (ss_conditions/df_conditions) / (ss_error/df_error).
AnovaResult rm_anova(const ScoreMatrix& m);

struct PairedResult {
    double t_statistic = 0.0;
    double p_value = 1.0;
    double mean_diff = 0.0;
    std::int64_t df = 0;
};

/// Two-sided paired t-test on per-subject differences cond_a - cond_b.
PairedResult paired_comparison(const ScoreMatrix& m, const std::string& cond_a,
                               const std::string& cond_b);

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

double t_cdf(double x, std::int64_t df);
double f_cdf(double x, std::int64_t d1, std::int64_t d2);

struct BoxPlotSummary {
    std::string condition;
    double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
    double whisker_low = 0, whisker_high = 0;
    std::vector<double> outliers;
    double variance = 0;  // sample variance
};

/// Quartiles by linear interpolation of order statistics; whiskers at the most
/// extreme points inside q1/q3 ± 1.5·IQR, clamped to the box edges so the
/// min ≤ whisker ≤ quartile chain always holds.
std::vector<BoxPlotSummary> boxplot_summary(const ScoreMatrix& m);

}  // namespace voxaug

#endif
