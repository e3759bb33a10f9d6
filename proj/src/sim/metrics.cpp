#include "accessim/sim/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace accessim::sim {

std::uint64_t MetricsSink::total(const std::string& metric) const
{
    std::uint64_t sum = 0;
    for (const auto& [key, n] : counters_) {
        if (key.metric == metric) {
            sum += n;
        }
    }
    return sum;
}

std::uint64_t MetricsSink::total_for_ai(const std::string& metric, int ai) const
{
    std::uint64_t sum = 0;
    for (const auto& [key, n] : counters_) {
        if (key.metric == metric && (ai == -1 || key.ai == ai)) {
            sum += n;
        }
    }
    return sum;
}

std::uint64_t MetricsSink::count(const MetricKey& key) const
{
    auto it = counters_.find(key);
    return it == counters_.end() ? 0 : it->second;
}

double MetricsSink::percentile(std::vector<double> values, double p)
{
    if (values.empty()) {
        return 0.0;
    }
    std::sort(values.begin(), values.end());
    double rank = std::ceil(p / 100.0 * static_cast<double>(values.size()));
    auto idx = static_cast<std::size_t>(std::max(1.0, rank)) - 1;
    idx = std::min(idx, values.size() - 1);
    return values[idx];
}

} // namespace accessim::sim
