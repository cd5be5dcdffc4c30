#pragma once

#include <cstddef>
#include <deque>

#include "pabo/frame.hpp"

namespace pabo {

// The two egress sub-queues of an output port. Bounced frames get strict
// priority: nothing leaves the normal queue while the bounce queue holds a
// frame. Capacities are counted in frames, matching drop-tail semantics.
class DualQueue {
  public:
    DualQueue() = default;
    DualQueue(int normal_cap, int bounce_cap) : ncap_(normal_cap), bcap_(bounce_cap) {}

    // deque's move is formally allowed to throw, which would poison vector
    // relocation of any holder; these never throw in practice
    DualQueue(DualQueue&& o) noexcept
        : normal_(std::move(o.normal_)),
          bounce_(std::move(o.bounce_)),
          ncap_(o.ncap_),
          bcap_(o.bcap_) {}
    DualQueue& operator=(DualQueue&& o) noexcept {
        normal_ = std::move(o.normal_);
        bounce_ = std::move(o.bounce_);
        ncap_ = o.ncap_;
        bcap_ = o.bcap_;
        return *this;
    }

    int normal_capacity() const { return ncap_; }
    int bounce_capacity() const { return bcap_; }
    size_t normal_size() const { return normal_.size(); }
    size_t bounce_size() const { return bounce_.size(); }
    bool normal_full() const { return static_cast<int>(normal_.size()) >= ncap_; }
    bool bounce_full() const { return static_cast<int>(bounce_.size()) >= bcap_; }
    bool empty() const { return normal_.empty() && bounce_.empty(); }
    size_t total_size() const { return normal_.size() + bounce_.size(); }

    void push_normal(FramePtr f) { normal_.push_back(std::move(f)); }
    void push_bounce(FramePtr f) { bounce_.push_back(std::move(f)); }

    struct Popped {
        FramePtr frame;
        bool from_normal = false;
    };

    // Head of the bounce queue if any, else head of the normal queue.
    Popped pop_next() {
        Popped p;
        if (!bounce_.empty()) {
            p.frame = std::move(bounce_.front());
            bounce_.pop_front();
        } else if (!normal_.empty()) {
            p.frame = std::move(normal_.front());
            normal_.pop_front();
            p.from_normal = true;
        }
        return p;
    }

  private:
    std::deque<FramePtr> normal_, bounce_;
    int ncap_ = 0;
    int bcap_ = 0;
};

}  // namespace pabo
