#pragma once

#include <cassert>
#include <cstdint>
#include <queue>
#include <vector>

#include "accessim/core/time.hpp"

namespace accessim::sim {

/// Min-heap keyed by (fire time, insertion sequence). The sequence makes
/// same-instant ordering deterministic: earlier-scheduled fires first.
template <typename Payload>
class EventQueue {
public:
    struct Entry {
        SimTime t = 0;
        std::uint64_t seq = 0;
        Payload payload;
    };

    void push(SimTime t, Payload payload)
    {
        heap_.push_back(Entry{t, next_seq_++, std::move(payload)});
        std::push_heap(heap_.begin(), heap_.end(), later);
    }

    bool empty() const { return heap_.empty(); }
    std::size_t size() const { return heap_.size(); }

    const Entry& top() const
    {
        assert(!heap_.empty());
        return heap_.front();
    }

    Entry pop()
    {
        assert(!heap_.empty());
        std::pop_heap(heap_.begin(), heap_.end(), later);
        Entry e = std::move(heap_.back());
        heap_.pop_back();
        return e;
    }

private:
    static bool later(const Entry& a, const Entry& b)
    {
        if (a.t != b.t) {
            return a.t > b.t;
        }
        return a.seq > b.seq;
    }

    std::vector<Entry> heap_;
    std::uint64_t next_seq_ = 0;
};

} // namespace accessim::sim
