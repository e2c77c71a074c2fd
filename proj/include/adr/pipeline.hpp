#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "adr/featmat.hpp"
#include "adr/signal.hpp"
#include "adr/stats.hpp"

namespace adr {

/// Everything a detect run needs; every field has a CLI flag and a config
/// file key of the same name.
struct RunConfig {
    std::filesystem::path patients;
    std::filesystem::path prescriptions;
    std::filesystem::path events;
    std::filesystem::path dict;  // empty: descriptions render as placeholders
    std::vector<std::string> drug_codes;
    int level = 5;  // truncation level for event aggregation
    int window_days = 60;
    int min_registration_days = 365;
    std::size_t group_size = 100;
    RemainderPolicy remainder = RemainderPolicy::merge_last;
    TestVariant variant = TestVariant::paired;
    double alpha = 0.05;
    ReportMode mode = ReportMode::by_p;
    std::string prefix;  // nonempty: apply filter_prefix to the ranked report
    std::optional<std::size_t> top_k;
    std::filesystem::path out;
    std::filesystem::path stats_out;  // empty: out with a .stats.tsv extension
    ReportFormat format = ReportFormat::tsv;
    bool include_p = true;
    char delimiter = ',';
    bool dict_header = false;
    bool strict = false;
    unsigned threads = 0;             // 0 = hardware concurrency
    std::filesystem::path dump_dir;   // nonempty: write matrix debug dumps
};

struct RunSummary {
    std::size_t cohort_n = 0;
    std::size_t n_columns = 0;
    std::size_t n_groups = 0;
    std::int64_t rejects = 0;
    std::size_t n_significant = 0;  // rows passing the alpha filter
    std::size_t n_rows = 0;         // rows in the emitted report
};

/// Full batch run: ingest, window matrices, grouping, per-event stats, a
/// replayable stats dump, then the ranked report. Summary lines go to
/// diagnostics when given. Identical config and inputs give identical
/// output bytes regardless of thread count.
RunSummary run_detect(const RunConfig& config, std::ostream* diagnostics = nullptr);

/// Re-rank a stats dump without recomputation.
struct ReportConfig {
    std::filesystem::path stats_in;
    std::filesystem::path dict;
    double alpha = 0.05;
    ReportMode mode = ReportMode::by_p;
    std::string prefix;
    std::optional<std::size_t> top_k;
    std::filesystem::path out;
    ReportFormat format = ReportFormat::tsv;
    bool include_p = true;
    char delimiter = ',';
    bool dict_header = false;
};

std::size_t run_report(const ReportConfig& config, std::ostream* diagnostics = nullptr);

/// Stats dump TSV: one row per event column with full-precision values, so
/// a replayed ranking reproduces the original bytes exactly.
void write_stats_tsv(const std::vector<EventStats>& stats,
                     const std::filesystem::path& path);
std::vector<EventStats> read_stats_tsv(const std::filesystem::path& path);

}  // namespace adr
