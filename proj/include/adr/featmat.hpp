#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "adr/ingest.hpp"
#include "adr/readcode.hpp"

namespace adr {

/// Binary incidence matrix over the cohort, stored column-wise: for each
/// code column, the sorted unique patient rows that had the event at least
/// once inside the window. Columns are sorted by canonical code string.
struct SparseFeatureMatrix {
    std::size_t n_patients = 0;
    std::vector<ReadCode> columns;
    std::vector<std::vector<std::uint32_t>> rows_with_event;

    std::size_t column_count() const { return columns.size(); }
    bool cell(std::uint32_t patient_row, std::size_t column) const;
    std::size_t cell_count() const;
};

/// Before and after matrices share one column list: the union of codes seen
/// on either side, so every event is comparable across the exposure split.
struct WindowMatrices {
    SparseFeatureMatrix before;
    SparseFeatureMatrix after;
};

/// Windows are [index-window_days, index-1] before and
/// [index, index+window_days-1] after; an index-date event is post-exposure.
/// Codes are truncated to the given level (1..5) before aggregation.
WindowMatrices build_window_matrices(const Cohort& cohort, int window_days = 60,
                                     int level = 5);

enum class RemainderPolicy {
    merge_last,  // trailing remainder joins the final group
    drop,        // trailing remainder is discarded
};

/// Group-by-group patient counts per code column; counts[g][c] is the number
/// of patients in group g with column c set.
struct GroupedCounts {
    std::size_t n_groups = 0;
    std::vector<std::size_t> group_sizes;
    std::vector<ReadCode> columns;
    std::vector<std::vector<std::int64_t>> counts;
};

/// Fold consecutive runs of group_size patients (in matrix row order) into
/// groups. Either remainder policy yields floor(n_patients / group_size)
/// groups; they differ only in whether the last group absorbs the remainder.
GroupedCounts group_matrix(const SparseFeatureMatrix& m, std::size_t group_size = 100,
                           RemainderPolicy policy = RemainderPolicy::merge_last);

/// Distinct-patient count per column: N_B for the before matrix, N_A for
/// the after matrix.
std::vector<std::int64_t> column_totals(const SparseFeatureMatrix& m);

/// Debug dumps: sparse triplets (patient_index, code, 1) and grouped counts
/// (group_index, code, count), both in column-major order.
void dump_sparse(const SparseFeatureMatrix& m, std::ostream& out, char delimiter = ',');
void dump_grouped(const GroupedCounts& g, std::ostream& out, char delimiter = ',');

}  // namespace adr
