#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "pabo/engine.hpp"

using namespace pabo;

TEST_CASE("events dispatch in time order, FIFO on ties") {
    Engine eng(1);
    std::vector<int> order;
    eng.schedule(from_seconds(1.0), EventKind::timer, [&] { order.push_back(2); });
    eng.schedule(0, EventKind::generator_tick, [&] { order.push_back(1); });
    // two events at the same instant keep insertion order
    eng.schedule(from_seconds(1.0), EventKind::timer, [&] { order.push_back(3); });
    auto st = eng.run(from_seconds(2.0));
    CHECK(order == std::vector<int>{1, 2, 3});
    CHECK(st.dispatched == 3);
    CHECK(st.end_clock == from_seconds(2.0));
}

TEST_CASE("an event scheduled at the current instant runs first") {
    Engine eng(1);
    bool ran = false;
    eng.schedule(0, EventKind::generator_tick, [&] { ran = true; });
    eng.run(from_seconds(1.0));
    CHECK(ran);
}

TEST_CASE("cancellation prevents dispatch") {
    Engine eng(1);
    bool ran = false;
    auto id = eng.schedule(from_seconds(0.5), EventKind::timer, [&] { ran = true; });
    CHECK(eng.cancel(id));
    CHECK_FALSE(eng.cancel(id));  // second cancel is a no-op
    auto st = eng.run(from_seconds(1.0));
    CHECK_FALSE(ran);
    CHECK(st.dispatched == 0);
    CHECK(st.cancelled == 1);
}

TEST_CASE("empty queue still advances the clock to the horizon") {
    Engine eng(1);
    auto st = eng.run(from_seconds(1.0));
    CHECK(st.dispatched == 0);
    CHECK(st.end_clock == from_seconds(1.0));
}

TEST_CASE("one event at 0.3 dispatches at clock 0.3") {
    Engine eng(1);
    TimeNs seen = -1;
    eng.schedule(from_seconds(0.3), EventKind::timer, [&] { seen = eng.now(); });
    eng.run(from_seconds(1.0));
    CHECK(seen == from_seconds(0.3));
}

TEST_CASE("scheduling in the past is fatal") {
    Engine eng(1);
    eng.schedule(from_seconds(0.5), EventKind::timer, [] {});
    eng.run(from_seconds(0.5));
    CHECK_THROWS_AS(eng.schedule(from_seconds(0.1), EventKind::timer, [] {}), SimError);
}

TEST_CASE("events beyond the horizon stay queued") {
    Engine eng(1);
    bool ran = false;
    eng.schedule(from_seconds(2.0), EventKind::timer, [&] { ran = true; });
    auto st = eng.run(from_seconds(1.0));
    CHECK_FALSE(ran);
    CHECK(st.remaining == 1);
    CHECK(st.end_clock == from_seconds(1.0));
}

TEST_CASE("clock is non-decreasing across dispatches") {
    Engine eng(7);
    TimeNs last = -1;
    bool monotone = true;
    auto& jitter = eng.stream("jitter");
    for (int i = 0; i < 1000; ++i)
        eng.schedule(static_cast<TimeNs>(jitter.next_below(1000000)), EventKind::timer, [&] {
            if (eng.now() < last) monotone = false;
            last = eng.now();
        });
    eng.run(from_seconds(1.0));
    CHECK(monotone);
}

TEST_CASE("handler exceptions surface with event context") {
    Engine eng(1);
    eng.schedule(from_seconds(0.25), EventKind::frame_arrival,
                 [] { throw std::runtime_error("boom"); });
    CHECK_THROWS_WITH_AS(eng.run(from_seconds(1.0)),
                         doctest::Contains("frame-arrival"), SimError);
}

TEST_CASE("same seed reproduces the same draw sequence") {
    Engine a(42), b(42);
    auto& sa = a.stream("bounce/S7");
    auto& sb = b.stream("bounce/S7");
    for (int i = 0; i < 100; ++i) CHECK(sa.next_u64() == sb.next_u64());
    CHECK(sa.draw_count() == 100);
}

TEST_CASE("distinct stream names give distinct sequences") {
    Engine eng(42);
    auto& s1 = eng.stream("bounce/S1");
    auto& s2 = eng.stream("bounce/S2");
    int differing = 0;
    for (int i = 0; i < 64; ++i)
        if (s1.next_u64() != s2.next_u64()) ++differing;
    CHECK(differing == 64);
}

TEST_CASE("uniform draws have the right mean") {
    RngStream s(123456789);
    double sum = 0;
    const int n = 1'000'000;
    for (int i = 0; i < n; ++i) sum += s.next_double();
    double mean = sum / n;
    CHECK(mean > 0.499);
    CHECK(mean < 0.501);
}

TEST_CASE("draws stay in [0,1)") {
    RngStream s(99);
    for (int i = 0; i < 10000; ++i) {
        double x = s.next_double();
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
    }
}
