#include "subthz/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "subthz/link.hpp"

namespace subthz {
namespace {

double value_or_inf(const std::optional<double>& v) {
    return v ? *v : std::numeric_limits<double>::infinity();
}

std::vector<DropOutcome> run_chunk(const LinkSimulator& sim, double snr_db, int snr_index,
                                   std::uint64_t first, int count, int threads) {
    std::vector<DropOutcome> out(static_cast<std::size_t>(count));
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (int i = next++; i < count; i = next++) {
            out[static_cast<std::size_t>(i)] = sim.run_drop(snr_db, snr_index, first + static_cast<std::uint64_t>(i));
        }
    };
    const int n = std::max(1, std::min(threads, count));
    if (n == 1) {
        worker();
        return out;
    }
    std::vector<std::thread> pool;
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return out;
}

}  // namespace

SweepResult run_sweep(const LinkConfig& cfg, const SweepOptions& options) {
    const auto t0 = std::chrono::steady_clock::now();
    const LinkSimulator sim(cfg);
    const auto& sw = cfg.sweep;
    SweepResult result;
    result.config = cfg;
    const int threads = std::max(1, options.threads);
    const auto snrs = sw.snr_points();
    int below = 0;
    for (std::size_t si = 0; si < snrs.size(); ++si) {
        SweepPoint pt;
        pt.snr_db = snrs[si];
        bool done = false;
        std::uint64_t next_drop = 0;
        while (!done) {
            const int chunk = std::min(sw.max_blocks - pt.blocks, std::max(threads * 2, 4));
            const auto outcomes = run_chunk(sim, pt.snr_db, static_cast<int>(si), next_drop, chunk, threads);
            next_drop += static_cast<std::uint64_t>(chunk);
            for (const auto& o : outcomes) {
                ++pt.blocks;
                pt.errors += o.block_error ? 1 : 0;
                pt.numerical_failures += o.numerical_failure ? 1 : 0;
                pt.undetected_errors += o.undetected_error ? 1 : 0;
                pt.delay_exceeds_cp = pt.delay_exceeds_cp || o.delay_exceeds_cp;
                if ((pt.errors >= sw.min_errors && pt.blocks >= sw.min_blocks) || pt.blocks >= sw.max_blocks) {
                    done = true;
                    break;
                }
            }
        }
        result.points.push_back(pt);
        if (options.on_point) options.on_point(pt);
        below = pt.bler() < sw.stop_bler ? below + 1 : 0;
        if (below >= sw.stop_points) break;
    }
    result.required_snr_db = required_snr(result.points);
    result.required_snr_bracketed =
        !(result.required_snr_db && !result.points.empty() && result.points.front().bler() <= kTargetBler);
    result.monotonicity_violations = find_monotonicity_violations(result.points);
    result.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

std::optional<double> required_snr(const std::vector<SweepPoint>& points, double target) {
    auto log_bler = [](const SweepPoint& p) {
        const double b = p.errors > 0 ? p.bler() : 0.5 / std::max(p.blocks, 1);
        return std::log10(b);
    };
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].blocks == 0 || points[i].bler() > target) continue;
        if (i == 0) return points[0].snr_db;
        const double l0 = log_bler(points[i - 1]);
        const double l1 = log_bler(points[i]);
        const double lt = std::log10(target);
        const double s0 = points[i - 1].snr_db;
        const double s1 = points[i].snr_db;
        if (l0 == l1) return s1;
        return s0 + (lt - l0) / (l1 - l0) * (s1 - s0);
    }
    return std::nullopt;
}

std::vector<int> find_monotonicity_violations(const std::vector<SweepPoint>& points) {
    std::vector<int> out;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        const auto& a = points[i];
        const auto& b = points[i + 1];
        if (a.blocks == 0 || b.blocks == 0) continue;
        const double pa = a.bler();
        const double pb = b.bler();
        const double sigma = std::sqrt(pa * (1.0 - pa) / a.blocks + pb * (1.0 - pb) / b.blocks);
        if (pb > pa + 2.0 * sigma) out.push_back(static_cast<int>(i));
    }
    return out;
}

SchemeComparison compare_schemes(const std::vector<SchemeEntry>& entries, bool expect_ordered, double tie_db) {
    SchemeComparison cmp;
    cmp.entries = entries;
    const std::size_t n = entries.size();
    cmp.delta.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const auto& a = entries[i].required_snr_db;
            const auto& b = entries[j].required_snr_db;
            if (a && b) {
                cmp.delta[i][j] = *a - *b;
            } else if (!a && !b) {
                cmp.delta[i][j] = std::numeric_limits<double>::quiet_NaN();
            } else {
                cmp.delta[i][j] = a ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
            }
        }
    }
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(2);
    for (std::size_t i = 0; i < n; ++i) {
        os << entries[i].label << ": ";
        if (entries[i].required_snr_db) os << *entries[i].required_snr_db << " dB";
        else os << "N/A";
        os << "\n";
    }
    if (expect_ordered) {
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double a = value_or_inf(entries[i].required_snr_db);
            const double b = value_or_inf(entries[i + 1].required_snr_db);
            const bool ok = std::isinf(b) || a <= b + tie_db;
            if (!ok) {
                cmp.ordering_ok = false;
                os << "ordering violated: " << entries[i].label << " > " << entries[i + 1].label << "\n";
            }
        }
    }
    cmp.report = os.str();
    return cmp;
}

}  // namespace subthz
