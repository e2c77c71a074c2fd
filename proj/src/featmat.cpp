#include "adr/featmat.hpp"

#include <algorithm>
#include <unordered_map>

#include "adr/error.hpp"

namespace adr {

bool SparseFeatureMatrix::cell(std::uint32_t patient_row, std::size_t column) const {
    const auto& rows = rows_with_event[column];
    return std::binary_search(rows.begin(), rows.end(), patient_row);
}

std::size_t SparseFeatureMatrix::cell_count() const {
    std::size_t n = 0;
    for (const auto& rows : rows_with_event) {
        n += rows.size();
    }
    return n;
}

WindowMatrices build_window_matrices(const Cohort& cohort, int window_days, int level) {
    if (window_days < 1) {
        fail("InvalidArgument", "window_days must be at least 1");
    }
    if (level < 1 || level > ReadCode::max_level) {
        fail("InvalidArgument", "level must be in 1..5");
    }

    // First pass: truncate codes and bucket each event by window side.
    // (row, code) pairs; duplicates collapse later, cells are binary.
    std::vector<std::pair<ReadCode, std::uint32_t>> before_hits;
    std::vector<std::pair<ReadCode, std::uint32_t>> after_hits;
    for (std::size_t i = 0; i < cohort.events.size(); ++i) {
        std::uint32_t row = cohort.event_rows[i];
        int delta = cohort.events[i].date - cohort.patients[row].index_date;
        if (delta < -window_days || delta >= window_days) {
            continue;
        }
        ReadCode code = cohort.events[i].code.truncated(level);
        if (delta < 0) {
            before_hits.emplace_back(code, row);
        } else {
            after_hits.emplace_back(code, row);
        }
    }

    std::vector<ReadCode> columns;
    columns.reserve(before_hits.size() + after_hits.size());
    for (const auto& [code, row] : before_hits) {
        columns.push_back(code);
    }
    for (const auto& [code, row] : after_hits) {
        columns.push_back(code);
    }
    std::sort(columns.begin(), columns.end());
    columns.erase(std::unique(columns.begin(), columns.end()), columns.end());

    std::unordered_map<ReadCode, std::size_t> column_of;
    column_of.reserve(columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
        column_of.emplace(columns[c], c);
    }

    auto fill = [&](const std::vector<std::pair<ReadCode, std::uint32_t>>& hits) {
        SparseFeatureMatrix m;
        m.n_patients = cohort.size();
        m.columns = columns;
        m.rows_with_event.resize(columns.size());
        for (const auto& [code, row] : hits) {
            m.rows_with_event[column_of.at(code)].push_back(row);
        }
        for (auto& rows : m.rows_with_event) {
            std::sort(rows.begin(), rows.end());
            rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
        }
        return m;
    };

    return {fill(before_hits), fill(after_hits)};
}

GroupedCounts group_matrix(const SparseFeatureMatrix& m, std::size_t group_size,
                           RemainderPolicy policy) {
    if (group_size < 1) {
        fail("InvalidArgument", "group_size must be at least 1");
    }
    if (m.n_patients < group_size) {
        fail("CohortTooSmall", "cohort of " + std::to_string(m.n_patients) +
                                   " patients cannot form a group of " +
                                   std::to_string(group_size));
    }

    GroupedCounts g;
    g.n_groups = m.n_patients / group_size;
    g.columns = m.columns;
    g.group_sizes.assign(g.n_groups, group_size);
    if (policy == RemainderPolicy::merge_last) {
        g.group_sizes.back() += m.n_patients % group_size;
    }
    g.counts.assign(g.n_groups, std::vector<std::int64_t>(m.columns.size(), 0));

    for (std::size_t c = 0; c < m.columns.size(); ++c) {
        for (std::uint32_t row : m.rows_with_event[c]) {
            std::size_t group = row / group_size;
            if (group >= g.n_groups) {
                if (policy == RemainderPolicy::drop) {
                    continue;
                }
                group = g.n_groups - 1;
            }
            ++g.counts[group][c];
        }
    }
    return g;
}

std::vector<std::int64_t> column_totals(const SparseFeatureMatrix& m) {
    std::vector<std::int64_t> totals(m.columns.size(), 0);
    for (std::size_t c = 0; c < m.columns.size(); ++c) {
        totals[c] = static_cast<std::int64_t>(m.rows_with_event[c].size());
    }
    return totals;
}

void dump_sparse(const SparseFeatureMatrix& m, std::ostream& out, char delimiter) {
    for (std::size_t c = 0; c < m.columns.size(); ++c) {
        for (std::uint32_t row : m.rows_with_event[c]) {
            out << row << delimiter << m.columns[c].view() << delimiter << 1 << '\n';
        }
    }
}

void dump_grouped(const GroupedCounts& g, std::ostream& out, char delimiter) {
    for (std::size_t c = 0; c < g.columns.size(); ++c) {
        for (std::size_t group = 0; group < g.n_groups; ++group) {
            out << group << delimiter << g.columns[c].view() << delimiter
                << g.counts[group][c] << '\n';
        }
    }
}

}  // namespace adr
