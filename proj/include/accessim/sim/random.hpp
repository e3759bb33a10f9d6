#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace accessim::sim {

/// Stateless mixing step with full avalanche; the basis for every draw.
constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t purpose_tag(std::string_view name)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : name) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Named substreams. Every consumer draws under its own tag so enabling or
/// disabling one feature cannot shift another feature's values.
namespace purpose {
inline constexpr std::uint64_t kUac = purpose_tag("uac");
inline constexpr std::uint64_t kJitter = purpose_tag("jitter");
inline constexpr std::uint64_t kBackoff = purpose_tag("backoff");
inline constexpr std::uint64_t kPreamble = purpose_tag("preamble");
inline constexpr std::uint64_t kBeam = purpose_tag("beam");
inline constexpr std::uint64_t kContention = purpose_tag("contention");
inline constexpr std::uint64_t kTraffic = purpose_tag("traffic");
inline constexpr std::uint64_t kPaging = purpose_tag("paging");
} // namespace purpose

struct DrawRecord {
    std::uint64_t purpose = 0;
    std::uint64_t a = 0;
    std::uint64_t b = 0;
    std::uint64_t c = 0;
    double value = 0.0;
};

/// Counter-based generator: a draw is a pure function of
/// (seed, purpose, a, b, c), not of how many draws came before it. Callers
/// key each draw by the entity and occurrence it belongs to, which makes
/// substreams independent by construction.
class RandomStreams {
public:
    explicit RandomStreams(std::uint64_t seed) : seed_(seed) {}

    double uniform(std::uint64_t purpose, std::uint64_t a = 0, std::uint64_t b = 0,
                   std::uint64_t c = 0);

    /// Exponential with the given mean, from the keyed uniform.
    double exponential(std::uint64_t purpose, double mean, std::uint64_t a = 0,
                       std::uint64_t b = 0, std::uint64_t c = 0);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t draw_count() const { return draw_count_; }

    void set_logging(bool on) { logging_ = on; }
    const std::vector<DrawRecord>& log() const { return log_; }

private:
    std::uint64_t seed_;
    std::uint64_t draw_count_ = 0;
    bool logging_ = false;
    std::vector<DrawRecord> log_;
};

} // namespace accessim::sim
