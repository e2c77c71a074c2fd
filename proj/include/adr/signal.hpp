#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "adr/readcode.hpp"
#include "adr/stats.hpp"

namespace adr {

enum class ReportMode {
    by_p,             // ascending p-value
    by_r1,            // descending R1
    prefix_filtered,  // produced by filter_prefix, source order kept
};

enum class ReportFormat {
    tsv,
    aligned_text,
};

struct SignalRow {
    int rank = 0;
    EventStats stats;
};

/// Rows all satisfy p < alpha; ranks are 1..len contiguous.
struct SignalReport {
    ReportMode mode = ReportMode::by_p;
    double alpha = 0.05;
    std::vector<SignalRow> rows;
};

/// Filter to p < alpha (strict), sort per mode with ties broken by
/// canonical code string ascending, rank, and optionally keep the top_k.
/// mode must be by_p or by_r1.
SignalReport rank_signals(std::vector<EventStats> stats, ReportMode mode,
                          double alpha = 0.05,
                          std::optional<std::size_t> top_k = std::nullopt);

/// Keep rows whose 5-character code part starts with prefix, preserving
/// order and re-ranking contiguously. Empty prefix is an error.
SignalReport filter_prefix(const SignalReport& report, std::string_view prefix);

/// Fixed-point with exactly 2 decimals, ties rounded away from zero.
std::string format_fixed2(double value);

/// Scientific notation with 4 significant digits, e.g. "3.709e-02".
std::string format_pvalue(double value);

/// Columns: Rank, Readcode, MedicalEvent, NB, NA, R1, R2, p (the last
/// omitted when include_p is false). Byte-deterministic, LF line endings.
void emit_report(const SignalReport& report, const CodeDictionary& dict,
                 std::ostream& out, ReportFormat format = ReportFormat::tsv,
                 bool include_p = true);

}  // namespace adr
