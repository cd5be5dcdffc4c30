#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>
#include <vector>

#include "pabo/report.hpp"
#include "pabo/sim.hpp"

namespace pabo {

// Grid over theta, lambda and/or many-to-one server count. Empty dimensions
// stay at the base scenario's value.
struct GridSpec {
    std::vector<double> thetas;
    std::vector<double> lambdas;
    std::vector<int> servers;
};

struct SweepRow {
    double theta = 0;
    double lambda = 0;
    int servers = 0;
    uint64_t seed = 0;
    bool ok = false;
    std::string error;

    double entropy = 0, util_variance = 0, time_ratio = 0;
    double bounce_fraction = 0, mean_total_hop = 0;
    double mean_fct_ns = 0, mean_delay_ns = 0, drop_rate = 0;
    int64_t created = 0, delivered = 0, dropped = 0, bounced_frames = 0, bounce_events = 0;
};

// The scenario for one grid point: overrides, a derived seed that depends
// only on (base seed, coordinates), and a stable name.
inline ScenarioConfig point_config(const ScenarioConfig& base, double theta, double lambda,
                                   int servers) {
    ScenarioConfig c = base;
    c.theta = theta;
    c.lambda = lambda;
    if (servers > 0) {
        bool applied = false;
        for (auto& t : c.traffic) {
            if (t.kind != TrafficBlock::Kind::request_reply) continue;
            if (servers > static_cast<int>(t.rr.servers.size()))
                throw ConfigError("sweep servers=" + std::to_string(servers) +
                                  " exceeds the scenario's server list (" +
                                  std::to_string(t.rr.servers.size()) + ")");
            t.rr.servers.resize(servers);
            applied = true;
            break;  // the first request-reply block carries the grid dimension
        }
        if (!applied)
            throw ConfigError("sweep servers dimension needs a request_reply traffic block");
    }
    c.seed = derive_point_seed(base.seed, theta, lambda, servers);
    c.name = base.name + "@theta=" + detail::fmt_double(theta) +
             ",lambda=" + detail::fmt_double(lambda) +
             (servers > 0 ? ",servers=" + std::to_string(servers) : "");
    return c;
}

inline std::vector<SweepRow> run_sweep(const ScenarioConfig& base, const GridSpec& grid,
                                       int jobs = 0) {
    std::vector<double> thetas = grid.thetas.empty() ? std::vector<double>{base.theta}
                                                     : grid.thetas;
    std::vector<double> lambdas = grid.lambdas.empty() ? std::vector<double>{base.lambda}
                                                       : grid.lambdas;
    std::vector<int> servers = grid.servers.empty() ? std::vector<int>{0} : grid.servers;

    struct Point {
        double theta, lambda;
        int servers;
    };
    std::vector<Point> points;
    for (double t : thetas)
        for (double l : lambdas)
            for (int s : servers) points.push_back({t, l, s});

    std::vector<SweepRow> rows(points.size());
    if (jobs <= 0)
        jobs = static_cast<int>(std::min<size_t>(points.size(),
                                                 std::thread::hardware_concurrency()));
    jobs = std::max(jobs, 1);

    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= points.size()) return;
            const Point& pt = points[i];
            SweepRow& row = rows[i];
            row.theta = pt.theta;
            row.lambda = pt.lambda;
            row.servers = pt.servers;
            try {
                ScenarioConfig cfg = point_config(base, pt.theta, pt.lambda, pt.servers);
                row.seed = cfg.seed;
                RunResult r = run_scenario(cfg, /*collect_series=*/false);
                row.ok = true;
                row.entropy = r.entropy_pooled;
                row.util_variance = r.util_variance;
                row.time_ratio = r.time_ratio;
                row.bounce_fraction = r.bounce_fraction();
                row.mean_total_hop = r.mean_total_hop();
                row.mean_fct_ns = r.mean_fct_ns();
                row.mean_delay_ns = r.mean_delay_ns();
                row.drop_rate = r.drop_rate();
                row.created = r.data_created;
                row.delivered = r.data_delivered;
                row.dropped = r.data_dropped;
                row.bounced_frames = r.bounced_frames;
                row.bounce_events = r.bounce_events;
            } catch (const std::exception& e) {
                row.ok = false;
                row.error = e.what();  // recorded; the sweep continues
            }
        }
    };
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return rows;
}

inline void write_sweep_csv(const std::vector<SweepRow>& rows,
                            const std::filesystem::path& path) {
    using detail::fmt_g12;
    auto f = detail::open_out(path);
    f << "theta,lambda,servers,seed,ok,entropy,util_variance,time_ratio,bounce_fraction,"
         "mean_total_hop,mean_fct_ns,mean_delay_ns,drop_rate,created,delivered,dropped,"
         "bounced_frames,bounce_events,error\n";
    for (const auto& r : rows) {
        f << fmt_g12(r.theta) << "," << fmt_g12(r.lambda) << "," << r.servers << "," << r.seed
          << "," << (r.ok ? 1 : 0) << "," << fmt_g12(r.entropy) << ","
          << fmt_g12(r.util_variance) << "," << fmt_g12(r.time_ratio) << ","
          << fmt_g12(r.bounce_fraction) << "," << fmt_g12(r.mean_total_hop) << ","
          << fmt_g12(r.mean_fct_ns) << "," << fmt_g12(r.mean_delay_ns) << ","
          << fmt_g12(r.drop_rate) << "," << r.created << "," << r.delivered << ","
          << r.dropped << "," << r.bounced_frames << "," << r.bounce_events << ","
          << r.error << "\n";
    }
}

}  // namespace pabo
