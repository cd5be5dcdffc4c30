#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include "pabo/rng.hpp"
#include "pabo/time.hpp"

namespace pabo {

// Raised for impossible simulation states: scheduling in the past,
// unroutable destinations, queue bookkeeping gone wrong. These abort the
// run with a diagnostic rather than producing silently wrong results.
class SimError : public std::runtime_error {
  public:
    explicit SimError(const std::string& what) : std::runtime_error(what) {}
};

enum class EventKind : uint8_t {
    frame_arrival,
    tx_complete,
    generator_tick,
    timer,
};

inline const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::frame_arrival: return "frame-arrival";
        case EventKind::tx_complete: return "transmission-complete";
        case EventKind::generator_tick: return "generator-tick";
        case EventKind::timer: return "timer-expiry";
    }
    return "?";
}

// Handle returned by schedule(); usable for cancellation. The pair
// (fire_time, insertion sequence) is also the queue key, which forces a
// stable FIFO tie-break between events scheduled for the same instant.
struct EventId {
    TimeNs at = -1;
    uint64_t seq = 0;
    bool valid() const { return at >= 0; }
};

struct RunStats {
    uint64_t scheduled = 0;
    uint64_t dispatched = 0;
    uint64_t cancelled = 0;
    uint64_t remaining = 0;
    TimeNs end_clock = 0;
};

// Deterministic single-threaded discrete-event core: a virtual clock, an
// ordered event queue, and the set of named random streams. One Engine per
// simulation instance; instances share nothing and may run on any thread.
class Engine {
  public:
    explicit Engine(uint64_t seed = 1) : seed_(seed) {}

    TimeNs now() const { return now_; }
    uint64_t base_seed() const { return seed_; }

    EventId schedule(TimeNs at, EventKind kind, std::function<void()> fn) {
        if (at < now_)
            throw SimError("schedule in the past: " + format_time(at) + " < now " +
                           format_time(now_));
        EventId id{at, next_seq_++};
        queue_.emplace(std::make_pair(at, id.seq), Ev{kind, std::move(fn)});
        ++stats_.scheduled;
        return id;
    }

    bool cancel(const EventId& id) {
        if (!id.valid()) return false;
        auto n = queue_.erase(std::make_pair(id.at, id.seq));
        stats_.cancelled += n;
        return n > 0;
    }

    // Dispatches every event with fire_time <= until, in (time, insertion)
    // order, then advances the clock to the horizon.
    RunStats run(TimeNs until) {
        while (!queue_.empty() && queue_.begin()->first.first <= until) {
            auto node = queue_.extract(queue_.begin());
            now_ = node.key().first;
            ++stats_.dispatched;
            try {
                node.mapped().fn();
            } catch (const std::exception& e) {
                throw SimError(std::string("event handler failed [") +
                               to_string(node.mapped().kind) + " at " + format_time(now_) +
                               "]: " + e.what());
            }
        }
        if (until > now_) now_ = until;
        stats_.remaining = queue_.size();
        stats_.end_clock = now_;
        return stats_;
    }

    bool empty() const { return queue_.empty(); }
    const RunStats& stats() const { return stats_; }

    // Streams are created lazily; the seed depends only on (base seed,
    // name), never on creation order.
    RngStream& stream(std::string_view name) {
        auto it = streams_.find(name);
        if (it == streams_.end())
            it = streams_.emplace(std::string(name), RngStream(mix_seed(seed_, fnv1a64(name))))
                     .first;
        return it->second;
    }

  private:
    struct Ev {
        EventKind kind;
        std::function<void()> fn;
    };

    uint64_t seed_;
    TimeNs now_ = 0;
    uint64_t next_seq_ = 0;
    std::map<std::pair<TimeNs, uint64_t>, Ev> queue_;
    std::map<std::string, RngStream, std::less<>> streams_;
    RunStats stats_;
};

}  // namespace pabo
