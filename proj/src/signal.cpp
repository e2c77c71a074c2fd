#include "adr/signal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "adr/error.hpp"

namespace adr {

namespace {

bool precedes(const EventStats& a, const EventStats& b, ReportMode mode) {
    if (mode == ReportMode::by_p) {
        if (a.p_value != b.p_value) {
            return a.p_value < b.p_value;
        }
    } else {
        if (a.r1 != b.r1) {
            return a.r1 > b.r1;
        }
    }
    return a.code < b.code;
}

void assign_ranks(SignalReport& report) {
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        report.rows[i].rank = static_cast<int>(i + 1);
    }
}

}  // namespace

SignalReport rank_signals(std::vector<EventStats> stats, ReportMode mode, double alpha,
                          std::optional<std::size_t> top_k) {
    if (mode != ReportMode::by_p && mode != ReportMode::by_r1) {
        fail("InvalidArgument", "rank_signals mode must be by_p or by_r1");
    }
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        fail("InvalidArgument", "alpha must be in [0, 1]");
    }
    std::erase_if(stats, [&](const EventStats& s) { return !(s.p_value < alpha); });
    std::sort(stats.begin(), stats.end(),
              [&](const EventStats& a, const EventStats& b) {
                  return precedes(a, b, mode);
              });
    if (top_k && stats.size() > *top_k) {
        stats.resize(*top_k);
    }

    SignalReport report;
    report.mode = mode;
    report.alpha = alpha;
    report.rows.reserve(stats.size());
    for (auto& s : stats) {
        report.rows.push_back({0, std::move(s)});
    }
    assign_ranks(report);
    return report;
}

SignalReport filter_prefix(const SignalReport& report, std::string_view prefix) {
    if (prefix.empty()) {
        fail("InvalidArgument", "prefix filter requires a nonempty prefix");
    }
    SignalReport out;
    out.mode = ReportMode::prefix_filtered;
    out.alpha = report.alpha;
    for (const auto& row : report.rows) {
        if (row.stats.code.code().starts_with(prefix)) {
            out.rows.push_back(row);
        }
    }
    assign_ranks(out);
    return out;
}

std::string format_fixed2(double value) {
    // llround ties away from zero; printf %.2f would round half to even and
    // drift from the established renderings of exact .xx5 ratios.
    const long long cents = std::llround(value * 100.0);
    const long long whole = std::llabs(cents) / 100;
    const long long frac = std::llabs(cents) % 100;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%lld.%02lld", cents < 0 ? "-" : "", whole, frac);
    return buf;
}

std::string format_pvalue(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", value);
    return buf;
}

namespace {

std::vector<std::string> header_cells(bool include_p) {
    std::vector<std::string> h = {"Rank", "Readcode", "MedicalEvent",
                                  "NB",   "NA",       "R1",
                                  "R2"};
    if (include_p) {
        h.push_back("p");
    }
    return h;
}

std::vector<std::string> row_cells(const SignalRow& row, const CodeDictionary& dict,
                                   bool include_p) {
    std::vector<std::string> cells = {
        std::to_string(row.rank),          row.stats.code.str(),
        dict.describe(row.stats.code),     std::to_string(row.stats.n_before),
        std::to_string(row.stats.n_after), format_fixed2(row.stats.r1),
        format_fixed2(row.stats.r2),
    };
    if (include_p) {
        cells.push_back(format_pvalue(row.stats.p_value));
    }
    return cells;
}

void emit_tsv(const std::vector<std::vector<std::string>>& table, std::ostream& out) {
    for (const auto& cells : table) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) {
                out << '\t';
            }
            out << cells[i];
        }
        out << '\n';
    }
}

void emit_aligned(const std::vector<std::vector<std::string>>& table, std::ostream& out) {
    const std::size_t n_cols = table.front().size();
    std::vector<std::size_t> widths(n_cols, 0);
    for (const auto& cells : table) {
        for (std::size_t i = 0; i < n_cols; ++i) {
            widths[i] = std::max(widths[i], cells[i].size());
        }
    }
    // Readcode and MedicalEvent read left-aligned; numbers right-aligned.
    const auto left_aligned = [](std::size_t i) { return i == 1 || i == 2; };
    for (const auto& cells : table) {
        for (std::size_t i = 0; i < n_cols; ++i) {
            if (i > 0) {
                out << "  ";
            }
            const std::size_t pad = widths[i] - cells[i].size();
            const bool last = i + 1 == n_cols;
            if (left_aligned(i)) {
                out << cells[i];
                if (!last) {
                    out << std::string(pad, ' ');
                }
            } else {
                out << std::string(pad, ' ') << cells[i];
            }
        }
        out << '\n';
    }
}

}  // namespace

void emit_report(const SignalReport& report, const CodeDictionary& dict,
                 std::ostream& out, ReportFormat format, bool include_p) {
    std::vector<std::vector<std::string>> table;
    table.reserve(report.rows.size() + 1);
    table.push_back(header_cells(include_p));
    for (const auto& row : report.rows) {
        table.push_back(row_cells(row, dict, include_p));
    }
    if (format == ReportFormat::tsv) {
        emit_tsv(table, out);
    } else {
        emit_aligned(table, out);
    }
    if (!out) {
        fail("IoError", "failed writing report");
    }
}

}  // namespace adr
