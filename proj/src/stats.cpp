#include "adr/stats.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <thread>

#include "adr/error.hpp"
#include "adr/tdist.hpp"

namespace adr {

namespace {

double mean_of(std::span<const std::int64_t> v) {
    double sum = 0.0;
    for (std::int64_t x : v) {
        sum += static_cast<double>(x);
    }
    return sum / static_cast<double>(v.size());
}

// Sum of squared deviations from the mean.
double ss_of(std::span<const std::int64_t> v, double mean) {
    double ss = 0.0;
    for (std::int64_t x : v) {
        const double d = static_cast<double>(x) - mean;
        ss += d * d;
    }
    return ss;
}

TTestResult finish(double t, double df) {
    TTestResult r;
    r.t = t;
    r.df = df;
    r.p = std::clamp(2.0 * t_survival(std::fabs(t), df), 0.0, 1.0);
    return r;
}

// Shared degenerate-case contract: constant zero difference is the natural
// t = 0 limit; a constant nonzero difference forces p = 0 with the flag.
TTestResult degenerate_case(std::int64_t constant_diff, double df) {
    TTestResult r;
    r.df = df;
    if (constant_diff == 0) {
        return r;
    }
    r.t = constant_diff > 0 ? std::numeric_limits<double>::infinity()
                            : -std::numeric_limits<double>::infinity();
    r.p = 0.0;
    r.degenerate = true;
    return r;
}

}  // namespace

TTestResult paired_t(std::span<const std::int64_t> x, std::span<const std::int64_t> y) {
    if (x.size() != y.size()) {
        fail("ShapeMismatch", "paired samples differ in length: " +
                                  std::to_string(x.size()) + " vs " +
                                  std::to_string(y.size()));
    }
    const std::size_t g = x.size();
    if (g < 2) {
        fail("InvalidArgument", "paired t needs at least 2 groups");
    }

    std::vector<std::int64_t> d(g);
    for (std::size_t i = 0; i < g; ++i) {
        d[i] = y[i] - x[i];
    }
    const double df = static_cast<double>(g - 1);
    // Integer equality, not a floating sd == 0 test: the degeneracy contract
    // must not depend on rounding.
    if (std::all_of(d.begin(), d.end(), [&](std::int64_t v) { return v == d[0]; })) {
        return degenerate_case(d[0], df);
    }
    const double mean = mean_of(d);
    const double sd = std::sqrt(ss_of(d, mean) / df);
    const double t = mean / (sd / std::sqrt(static_cast<double>(g)));
    return finish(t, df);
}

TTestResult two_sample_t(std::span<const std::int64_t> x,
                         std::span<const std::int64_t> y) {
    const std::size_t n1 = x.size();
    const std::size_t n2 = y.size();
    if (n1 < 2 || n2 < 2) {
        fail("InvalidArgument", "two-sample t needs at least 2 values per side");
    }
    const double df = static_cast<double>(n1 + n2 - 2);

    const bool x_const =
        std::all_of(x.begin(), x.end(), [&](std::int64_t v) { return v == x[0]; });
    const bool y_const =
        std::all_of(y.begin(), y.end(), [&](std::int64_t v) { return v == y[0]; });
    if (x_const && y_const) {
        return degenerate_case(y[0] - x[0], df);
    }

    const double mx = mean_of(x);
    const double my = mean_of(y);
    const double pooled = (ss_of(x, mx) + ss_of(y, my)) / df;
    const double se = std::sqrt(pooled * (1.0 / static_cast<double>(n1) +
                                          1.0 / static_cast<double>(n2)));
    return finish((my - mx) / se, df);
}

Ratios compute_ratios(std::int64_t n_before, std::int64_t n_after, std::int64_t cohort_n) {
    if (cohort_n < 1) {
        fail("InvalidArgument", "cohort size must be at least 1");
    }
    if (n_before < 0 || n_after < 0) {
        fail("InvalidArgument", "patient counts must be nonnegative");
    }
    Ratios r;
    r.r1 = n_before > 0 ? static_cast<double>(n_after) / static_cast<double>(n_before)
                        : static_cast<double>(n_after);
    r.r2 = 100.0 * static_cast<double>(n_after) / static_cast<double>(cohort_n);
    return r;
}

std::vector<EventStats> event_stats_for_all(const GroupedCounts& x, const GroupedCounts& y,
                                            std::span<const std::int64_t> totals_before,
                                            std::span<const std::int64_t> totals_after,
                                            std::int64_t cohort_n, TestVariant variant,
                                            unsigned threads) {
    if (x.columns != y.columns) {
        fail("ShapeMismatch", "before/after grouped counts have different columns");
    }
    if (x.n_groups != y.n_groups || x.group_sizes != y.group_sizes) {
        fail("ShapeMismatch", "before/after grouped counts have different group structure");
    }
    const std::size_t n_columns = x.columns.size();
    if (totals_before.size() != n_columns || totals_after.size() != n_columns) {
        fail("ShapeMismatch", "column totals do not match column count");
    }
    if (cohort_n < 1) {
        fail("InvalidArgument", "cohort size must be at least 1");
    }

    std::vector<EventStats> out(n_columns);
    auto compute_range = [&](std::size_t begin, std::size_t end) {
        std::vector<std::int64_t> xcol(x.n_groups);
        std::vector<std::int64_t> ycol(x.n_groups);
        for (std::size_t c = begin; c < end; ++c) {
            for (std::size_t g = 0; g < x.n_groups; ++g) {
                xcol[g] = x.counts[g][c];
                ycol[g] = y.counts[g][c];
            }
            TTestResult tt = variant == TestVariant::paired ? paired_t(xcol, ycol)
                                                            : two_sample_t(xcol, ycol);
            Ratios ratios = compute_ratios(totals_before[c], totals_after[c], cohort_n);
            EventStats& s = out[c];
            s.code = x.columns[c];
            s.n_before = totals_before[c];
            s.n_after = totals_after[c];
            s.t_stat = tt.t;
            s.df = tt.df;
            s.p_value = tt.p;
            s.r1 = ratios.r1;
            s.r2 = ratios.r2;
            s.degenerate = tt.degenerate;
        }
    };

    unsigned n_workers = threads != 0 ? threads : std::thread::hardware_concurrency();
    n_workers = std::max(1u, std::min<unsigned>(n_workers, 64));
    if (n_workers == 1 || n_columns < 2 * n_workers) {
        compute_range(0, n_columns);
        return out;
    }

    // Static partition into one contiguous range per worker; each column's
    // result is a pure function of its inputs, so the thread count cannot
    // change the output.
    const std::size_t chunk = (n_columns + n_workers - 1) / n_workers;
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) {
        const std::size_t begin = std::min<std::size_t>(w * chunk, n_columns);
        const std::size_t end = std::min(begin + chunk, n_columns);
        workers.emplace_back([&, w, begin, end] {
            try {
                compute_range(begin, end);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& worker : workers) {
        worker.join();
    }
    for (const auto& error : errors) {
        if (error) {
            std::rethrow_exception(error);
        }
    }
    return out;
}

}  // namespace adr
