#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace accessim::sim {

/// Dimensions a metric is broken down by. -1 and "" mean not applicable.
struct MetricKey {
    std::string metric;
    int ai = -1;
    int ac = -1;
    std::string slice;
    std::string cause;

    auto operator<=>(const MetricKey&) const = default;
};

/// Counter and sample store for one run. Counters are event counts;
/// samples feed the percentile columns of the report.
class MetricsSink {
public:
    void add(const MetricKey& key, std::uint64_t n = 1) { counters_[key] += n; }
    void sample(const MetricKey& key, double value) { samples_[key].push_back(value); }

    const std::map<MetricKey, std::uint64_t>& counters() const { return counters_; }
    const std::map<MetricKey, std::vector<double>>& samples() const { return samples_; }

    /// Sum of one counter across all key breakdowns.
    std::uint64_t total(const std::string& metric) const;

    /// Sum across keys matching (metric, ai); -1 matches any ai.
    std::uint64_t total_for_ai(const std::string& metric, int ai) const;

    std::uint64_t count(const MetricKey& key) const;

    /// Nearest-rank percentile; p in [0, 100]. Empty input yields 0.
    static double percentile(std::vector<double> values, double p);

private:
    std::map<MetricKey, std::uint64_t> counters_;
    std::map<MetricKey, std::vector<double>> samples_;
};

namespace metric {
inline const std::string kAttempts = "attempts";
inline const std::string kAccessSuccess = "access_success";
inline const std::string kBarredUac = "barred_uac";
inline const std::string kBarredWait = "barred_wait";
inline const std::string kBarredCell = "barred_cell";
inline const std::string kRaFailures = "ra_failures";
inline const std::string kRaCollisions = "ra_collisions";
inline const std::string kPagingDropped = "paging_dropped";
inline const std::string kPagingPaged = "paging_paged";
inline const std::string kPreemptions = "preemptions";
inline const std::string kRejects = "rejects";
inline const std::string kQueueWaits = "queue_waits";
inline const std::string kUacFirstAllowed = "uac_first_allowed";
inline const std::string kUacFirstBarred = "uac_first_barred";
inline const std::string kMessages = "messages";
inline const std::string kWarnings = "warnings";
inline const std::string kSkippedConnected = "skipped_connected";
inline const std::string kSkippedBusy = "skipped_busy";
inline const std::string kChurnSkipped = "churn_skipped";
inline const std::string kLatencyConnect = "latency_connect";
inline const std::string kMessagesPerAccess = "messages_per_access";
} // namespace metric

} // namespace accessim::sim
