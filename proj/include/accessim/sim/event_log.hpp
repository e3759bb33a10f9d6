#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace accessim::sim {

/// Append-only run log with rolling 64-bit FNV-1a digests: one global, one
/// per slice tag. Digests make golden-run and paired-run comparisons cheap;
/// line retention is optional because big runs only need the hashes.
class EventLog {
public:
    static constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
    static constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

    explicit EventLog(bool keep_lines = false) : keep_lines_(keep_lines) {}

    void append(const std::string& line, const std::string& slice_tag = "");

    std::uint64_t digest() const { return digest_; }
    const std::map<std::string, std::uint64_t>& slice_digests() const
    {
        return slice_digests_;
    }
    const std::vector<std::string>& lines() const { return lines_; }
    std::uint64_t line_count() const { return line_count_; }

    static std::string hex(std::uint64_t digest);

private:
    static std::uint64_t fold(std::uint64_t digest, const std::string& line);

    bool keep_lines_;
    std::uint64_t digest_ = kFnvOffset;
    std::uint64_t line_count_ = 0;
    std::map<std::string, std::uint64_t> slice_digests_;
    std::vector<std::string> lines_;
};

} // namespace accessim::sim
