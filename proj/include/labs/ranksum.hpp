#pragma once

#include <vector>

namespace labsearch {

struct RankSumResult {
    double u1 = 0.0;       // Mann-Whitney U of the first sample
    double rank_sum1 = 0;  // W: rank sum of the first sample (midranks)
    double z = 0.0;        // normal approximation, tie-corrected variance
    double p_value = 1.0;  // two-sided
};

/// Two-sided Wilcoxon rank-sum test via the normal approximation with mid
/// ranks and tie-corrected variance (no continuity correction). A degenerate
/// comparison (zero variance, all values tied) reports p = 1.
RankSumResult rank_sum_test(const std::vector<double>& a, const std::vector<double>& b);

double median(std::vector<double> values);

} // namespace labsearch
