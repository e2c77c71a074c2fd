#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "adr/featmat.hpp"
#include "adr/readcode.hpp"

namespace adr {

/// Degenerate marks the zero-variance nonzero-difference case, which is
/// reported as (t = +-inf, p = 0) to keep rankings total yet auditable.
/// A zero-variance zero difference is the natural limit (t = 0, p = 1)
/// and is not flagged.
struct TTestResult {
    double t = 0.0;
    double df = 0.0;
    double p = 1.0;
    bool degenerate = false;
};

/// Paired t on per-group counts: d = y - x, t = mean(d) / (sd(d)/sqrt(G)),
/// sample sd (G-1 divisor), df = G-1. Two-tailed p.
TTestResult paired_t(std::span<const std::int64_t> x, std::span<const std::int64_t> y);

/// Pooled-variance two-sample t, df = len(x) + len(y) - 2, sign from
/// mean(y) - mean(x). Two-tailed p; same degeneracy contract as paired_t.
TTestResult two_sample_t(std::span<const std::int64_t> x,
                         std::span<const std::int64_t> y);

struct Ratios {
    double r1 = 0.0;
    double r2 = 0.0;
};

/// R1 = N_A / N_B, or N_A itself when N_B = 0. R2 = 100 * N_A / N.
Ratios compute_ratios(std::int64_t n_before, std::int64_t n_after, std::int64_t cohort_n);

struct EventStats {
    ReadCode code;
    std::int64_t n_before = 0;
    std::int64_t n_after = 0;
    double t_stat = 0.0;
    double df = 0.0;
    double p_value = 1.0;
    double r1 = 0.0;
    double r2 = 0.0;
    bool degenerate = false;
};

enum class TestVariant {
    paired,
    two_sample,
};

/// One EventStats per shared column of x (before) and y (after) grouped
/// counts. N_B/N_A come from the ungrouped column totals. Columns are
/// processed in parallel across `threads` workers (0 = hardware
/// concurrency); output order and values are independent of thread count.
std::vector<EventStats> event_stats_for_all(const GroupedCounts& x, const GroupedCounts& y,
                                            std::span<const std::int64_t> totals_before,
                                            std::span<const std::int64_t> totals_after,
                                            std::int64_t cohort_n,
                                            TestVariant variant = TestVariant::paired,
                                            unsigned threads = 0);

}  // namespace adr
