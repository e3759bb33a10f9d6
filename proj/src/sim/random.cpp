#include "accessim/sim/random.hpp"

#include <cmath>

namespace accessim::sim {

double RandomStreams::uniform(std::uint64_t purpose, std::uint64_t a, std::uint64_t b,
                              std::uint64_t c)
{
    std::uint64_t h = splitmix64(seed_ ^ purpose);
    h = splitmix64(h ^ a);
    h = splitmix64(h ^ b);
    h = splitmix64(h ^ c);
    double value = static_cast<double>(h >> 11) * 0x1.0p-53;
    ++draw_count_;
    if (logging_) {
        log_.push_back({purpose, a, b, c, value});
    }
    return value;
}

double RandomStreams::exponential(std::uint64_t purpose, double mean, std::uint64_t a,
                                  std::uint64_t b, std::uint64_t c)
{
    double u = uniform(purpose, a, b, c);
    return -mean * std::log(1.0 - u);
}

} // namespace accessim::sim
