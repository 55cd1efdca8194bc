#include "labs/ranksum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace labsearch {

RankSumResult rank_sum_test(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n1 = a.size(), n2 = b.size();
    if (n1 == 0 || n2 == 0) throw std::invalid_argument("rank_sum_test: empty sample");
    const std::size_t n = n1 + n2;

    std::vector<std::pair<double, int>> all;  // (value, sample id)
    all.reserve(n);
    for (double v : a) all.emplace_back(v, 0);
    for (double v : b) all.emplace_back(v, 1);
    std::sort(all.begin(), all.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });

    RankSumResult res;
    double tie_sum = 0.0;  // sum of t^3 - t over tie groups
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && all[j].first == all[i].first) ++j;
        const double midrank = 0.5 * static_cast<double>(i + 1 + j);  // average of ranks i+1..j
        const auto t = static_cast<double>(j - i);
        tie_sum += t * t * t - t;
        for (std::size_t q = i; q < j; ++q)
            if (all[q].second == 0) res.rank_sum1 += midrank;
        i = j;
    }

    const double dn1 = static_cast<double>(n1), dn2 = static_cast<double>(n2);
    const double dn = static_cast<double>(n);
    res.u1 = res.rank_sum1 - dn1 * (dn1 + 1) / 2.0;
    const double mean_u = dn1 * dn2 / 2.0;
    const double var_u = dn1 * dn2 / 12.0 * ((dn + 1) - tie_sum / (dn * (dn - 1)));
    if (var_u <= 0.0) {
        res.z = 0.0;
        res.p_value = 1.0;
        return res;
    }
    res.z = (res.u1 - mean_u) / std::sqrt(var_u);
    res.p_value = std::erfc(std::abs(res.z) / std::sqrt(2.0));
    return res;
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median: empty input");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

} // namespace labsearch
