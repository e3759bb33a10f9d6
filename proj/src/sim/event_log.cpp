#include "accessim/sim/event_log.hpp"

#include <cstdio>

namespace accessim::sim {

std::uint64_t EventLog::fold(std::uint64_t digest, const std::string& line)
{
    for (unsigned char c : line) {
        digest ^= c;
        digest *= kFnvPrime;
    }
    // Terminator so "ab"+"c" and "a"+"bc" fold differently.
    digest ^= '\n';
    digest *= kFnvPrime;
    return digest;
}

void EventLog::append(const std::string& line, const std::string& slice_tag)
{
    digest_ = fold(digest_, line);
    ++line_count_;
    if (!slice_tag.empty()) {
        auto [it, inserted] = slice_digests_.try_emplace(slice_tag, kFnvOffset);
        it->second = fold(it->second, line);
    }
    if (keep_lines_) {
        lines_.push_back(line);
    }
}

std::string EventLog::hex(std::uint64_t digest)
{
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(digest));
    return buf;
}

} // namespace accessim::sim
