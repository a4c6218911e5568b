#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "subthz/config.hpp"

namespace subthz {

inline constexpr double kTargetBler = 0.1;

struct SweepPoint {
    double snr_db = 0.0;
    int blocks = 0;
    int errors = 0;
    int numerical_failures = 0;
    int undetected_errors = 0;
    bool delay_exceeds_cp = false;

    double bler() const { return blocks > 0 ? static_cast<double>(errors) / blocks : 0.0; }
};

struct SweepResult {
    LinkConfig config;
    std::vector<SweepPoint> points;
    std::optional<double> required_snr_db;
    /// False when the first simulated point already met the target, so the
    /// reported value is only an upper bound.
    bool required_snr_bracketed = true;
    /// Indices i where point i+1 has a higher BLER than point i by more
    /// than two binomial standard deviations.
    std::vector<int> monotonicity_violations;
    double wall_time_s = 0.0;
};

struct SweepOptions {
    int threads = 1;
    /// Called after every finished SNR point.
    std::function<void(const SweepPoint&)> on_point;
};

/// Monte-Carlo BLER sweep over the configured SNR grid. Each point runs
/// until it has min_errors errors and min_blocks blocks, or max_blocks
/// blocks; the grid stops after stop_points consecutive points below
/// stop_bler. Drops are evaluated in parallel but accepted strictly in
/// index order, so the result does not depend on the thread count.
SweepResult run_sweep(const LinkConfig& cfg, const SweepOptions& options = {});

/// SNR at which BLER crosses `target`, by linear interpolation of
/// log10(BLER) between the last point above and the first point at or
/// below the target. Zero-error points count as 0.5/blocks. Empty when no
/// point reaches the target.
std::optional<double> required_snr(const std::vector<SweepPoint>& points, double target = kTargetBler);

std::vector<int> find_monotonicity_violations(const std::vector<SweepPoint>& points);

struct SchemeEntry {
    std::string label;
    std::optional<double> required_snr_db;
};

struct SchemeComparison {
    std::vector<SchemeEntry> entries;
    /// delta[i][j] = required(i) - required(j); +inf/-inf/NaN involving N/A.
    std::vector<std::vector<double>> delta;
    bool ordering_ok = true;
    std::string report;
};

/// Tabulates required SNRs and pairwise deltas. When `expect_ordered` is
/// set, checks required(i) <= required(i+1) + tie_db for consecutive
/// entries, N/A counting as +infinity.
SchemeComparison compare_schemes(const std::vector<SchemeEntry>& entries, bool expect_ordered = false,
                                 double tie_db = 0.3);

}  // namespace subthz
