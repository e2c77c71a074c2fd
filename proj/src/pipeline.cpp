#include "adr/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>

#include "adr/error.hpp"
#include "adr/ingest.hpp"

namespace adr {

namespace {

std::string render_double(double v) {
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double_field(const std::string& field, const std::filesystem::path& path,
                          int line_no) {
    if (field == "inf") {
        return std::numeric_limits<double>::infinity();
    }
    if (field == "-inf") {
        return -std::numeric_limits<double>::infinity();
    }
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end != field.c_str() + field.size() || field.empty()) {
        fail("FormatError", path.string() + ":" + std::to_string(line_no) +
                                ": cannot parse number \"" + field + "\"");
    }
    return v;
}

std::int64_t parse_count_field(const std::string& field, const std::filesystem::path& path,
                               int line_no) {
    char* end = nullptr;
    const long long v = std::strtoll(field.c_str(), &end, 10);
    if (end != field.c_str() + field.size() || field.empty()) {
        fail("FormatError", path.string() + ":" + std::to_string(line_no) +
                                ": cannot parse count \"" + field + "\"");
    }
    return v;
}

constexpr char kStatsHeader[] = "code\tn_before\tn_after\tt\tdf\tp\tr1\tr2\tdegenerate";

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        fail("IoError", "cannot create output file " + path.string());
    }
    return out;
}

CodeDictionary load_dictionary(const std::filesystem::path& path, char delimiter,
                               bool header) {
    if (path.empty()) {
        return {};
    }
    return CodeDictionary::load(path, delimiter, header);
}

SignalReport build_report(std::vector<EventStats> stats, ReportMode mode, double alpha,
                          const std::string& prefix, std::optional<std::size_t> top_k,
                          std::size_t& n_significant) {
    n_significant = static_cast<std::size_t>(
        std::count_if(stats.begin(), stats.end(),
                      [alpha](const EventStats& s) { return s.p_value < alpha; }));
    SignalReport ranked = rank_signals(std::move(stats), mode, alpha, top_k);
    if (!prefix.empty()) {
        return filter_prefix(ranked, prefix);
    }
    return ranked;
}

}  // namespace

void write_stats_tsv(const std::vector<EventStats>& stats,
                     const std::filesystem::path& path) {
    std::ofstream out = open_output(path);
    out << kStatsHeader << '\n';
    for (const auto& s : stats) {
        out << s.code.view() << '\t' << s.n_before << '\t' << s.n_after << '\t'
            << render_double(s.t_stat) << '\t' << render_double(s.df) << '\t'
            << render_double(s.p_value) << '\t' << render_double(s.r1) << '\t'
            << render_double(s.r2) << '\t' << (s.degenerate ? 1 : 0) << '\n';
    }
    out.flush();
    if (!out) {
        fail("IoError", "failed writing stats dump " + path.string());
    }
}

std::vector<EventStats> read_stats_tsv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        fail("IoError", "cannot open stats dump " + path.string());
    }
    std::vector<EventStats> stats;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line_no == 1) {
            if (line != kStatsHeader) {
                fail("FormatError", path.string() + ": not a stats dump (bad header)");
            }
            continue;
        }
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            auto pos = line.find('\t', start);
            if (pos == std::string::npos) {
                fields.push_back(line.substr(start));
                break;
            }
            fields.push_back(line.substr(start, pos - start));
            start = pos + 1;
        }
        if (fields.size() != 9) {
            fail("FormatError", path.string() + ":" + std::to_string(line_no) +
                                    ": expected 9 columns");
        }
        EventStats s;
        s.code = ReadCode::parse(fields[0]);
        s.n_before = parse_count_field(fields[1], path, line_no);
        s.n_after = parse_count_field(fields[2], path, line_no);
        s.t_stat = parse_double_field(fields[3], path, line_no);
        s.df = parse_double_field(fields[4], path, line_no);
        s.p_value = parse_double_field(fields[5], path, line_no);
        s.r1 = parse_double_field(fields[6], path, line_no);
        s.r2 = parse_double_field(fields[7], path, line_no);
        if (fields[8] != "0" && fields[8] != "1") {
            fail("FormatError", path.string() + ":" + std::to_string(line_no) +
                                    ": degenerate flag must be 0 or 1");
        }
        s.degenerate = fields[8] == "1";
        stats.push_back(std::move(s));
    }
    return stats;
}

RunSummary run_detect(const RunConfig& config, std::ostream* diagnostics) {
    if (config.out.empty()) {
        fail("InvalidArgument", "output path is required");
    }

    LoadOptions load_options;
    load_options.delimiter = config.delimiter;
    load_options.strict = config.strict;
    RawRecords records = load_records(config.patients, config.prescriptions,
                                      config.events, load_options);
    Cohort cohort =
        build_cohort(records, config.drug_codes, config.min_registration_days);

    WindowMatrices matrices =
        build_window_matrices(cohort, config.window_days, config.level);
    GroupedCounts x = group_matrix(matrices.before, config.group_size, config.remainder);
    GroupedCounts y = group_matrix(matrices.after, config.group_size, config.remainder);

    if (!config.dump_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(config.dump_dir, ec);
        if (ec) {
            fail("IoError", "cannot create dump directory " + config.dump_dir.string());
        }
        auto before_dump = open_output(config.dump_dir / "before.triplets");
        dump_sparse(matrices.before, before_dump, config.delimiter);
        auto after_dump = open_output(config.dump_dir / "after.triplets");
        dump_sparse(matrices.after, after_dump, config.delimiter);
        auto x_dump = open_output(config.dump_dir / "grouped_before.counts");
        dump_grouped(x, x_dump, config.delimiter);
        auto y_dump = open_output(config.dump_dir / "grouped_after.counts");
        dump_grouped(y, y_dump, config.delimiter);
    }

    std::vector<EventStats> stats = event_stats_for_all(
        x, y, column_totals(matrices.before), column_totals(matrices.after),
        static_cast<std::int64_t>(cohort.size()), config.variant, config.threads);

    std::filesystem::path stats_path = config.stats_out;
    if (stats_path.empty()) {
        stats_path = config.out;
        stats_path.replace_extension(".stats.tsv");
    }
    write_stats_tsv(stats, stats_path);

    RunSummary summary;
    summary.cohort_n = cohort.size();
    summary.n_columns = matrices.before.column_count();
    summary.n_groups = x.n_groups;
    summary.rejects = records.rejects.total();

    CodeDictionary dict =
        load_dictionary(config.dict, config.delimiter, config.dict_header);
    SignalReport report = build_report(std::move(stats), config.mode, config.alpha,
                                       config.prefix, config.top_k,
                                       summary.n_significant);
    summary.n_rows = report.rows.size();
    std::ofstream out = open_output(config.out);
    emit_report(report, dict, out, config.format, config.include_p);

    if (diagnostics) {
        *diagnostics << "cohort: " << summary.cohort_n << " patients\n"
                     << "event columns: " << summary.n_columns << '\n'
                     << "groups: " << summary.n_groups << '\n'
                     << "rejected lines: " << summary.rejects << '\n';
        for (const auto& sample : records.rejects.samples) {
            *diagnostics << "  reject: " << sample << '\n';
        }
        *diagnostics << "significant events: " << summary.n_significant << '\n'
                     << "report rows: " << summary.n_rows << " -> "
                     << config.out.string() << '\n'
                     << "stats dump: " << stats_path.string() << '\n';
    }
    return summary;
}

std::size_t run_report(const ReportConfig& config, std::ostream* diagnostics) {
    if (config.out.empty()) {
        fail("InvalidArgument", "output path is required");
    }
    std::vector<EventStats> stats = read_stats_tsv(config.stats_in);
    CodeDictionary dict =
        load_dictionary(config.dict, config.delimiter, config.dict_header);
    std::size_t n_significant = 0;
    SignalReport report = build_report(std::move(stats), config.mode, config.alpha,
                                       config.prefix, config.top_k, n_significant);
    std::ofstream out = open_output(config.out);
    emit_report(report, dict, out, config.format, config.include_p);
    if (diagnostics) {
        *diagnostics << "significant events: " << n_significant << '\n'
                     << "report rows: " << report.rows.size() << " -> "
                     << config.out.string() << '\n';
    }
    return report.rows.size();
}

}  // namespace adr
