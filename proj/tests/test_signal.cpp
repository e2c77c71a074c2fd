#include "adr/signal.hpp"

#include <cstdint>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "adr/error.hpp"
#include "adr/readcode.hpp"
#include "adr/stats.hpp"
#include "adr/synth.hpp"
#include "doctest.h"

using adr::CodeDictionary;
using adr::emit_report;
using adr::Error;
using adr::EventStats;
using adr::filter_prefix;
using adr::format_fixed2;
using adr::format_pvalue;
using adr::rank_signals;
using adr::ReadCode;
using adr::ReportFormat;
using adr::ReportMode;
using adr::SignalReport;

namespace {

EventStats make_stats(const char* code, std::int64_t nb, std::int64_t na,
                      double p, double r1 = 1.0, double r2 = 1.0) {
    EventStats s;
    s.code = ReadCode::parse(code);
    s.n_before = nb;
    s.n_after = na;
    s.t_stat = 2.0;
    s.df = 99.0;
    s.p_value = p;
    s.r1 = r1;
    s.r2 = r2;
    return s;
}

}  // namespace

TEST_CASE("ranking keeps significant rows ordered by p") {
    std::vector<EventStats> all = {
        make_stats("A000100", 1, 2, 0.01),
        make_stats("B000200", 1, 2, 0.04),
        make_stats("C000300", 1, 2, 0.06),
        make_stats("D000400", 1, 2, 0.001),
    };
    SignalReport report = rank_signals(all, ReportMode::by_p, 0.05, std::nullopt);
    REQUIRE(report.rows.size() == 3);
    CHECK(report.rows[0].stats.code.str() == "D000400");
    CHECK(report.rows[1].stats.code.str() == "A000100");
    CHECK(report.rows[2].stats.code.str() == "B000200");
    CHECK(report.rows[0].rank == 1);
    CHECK(report.rows[1].rank == 2);
    CHECK(report.rows[2].rank == 3);

    SignalReport none = rank_signals(all, ReportMode::by_p, 0.0, std::nullopt);
    CHECK(none.rows.empty());
}

TEST_CASE("the threshold is strict") {
    std::vector<EventStats> all = {make_stats("A000100", 1, 2, 0.05)};
    SignalReport report = rank_signals(all, ReportMode::by_p, 0.05, std::nullopt);
    CHECK(report.rows.empty());
}

TEST_CASE("ratio ordering is descending with code tie-break") {
    std::vector<EventStats> all = {
        make_stats("C000300", 1, 2, 0.01, 3.0),
        make_stats("A000100", 1, 2, 0.02, 7.0),
        make_stats("D000400", 1, 2, 0.03, 3.0),
        make_stats("B000200", 1, 2, 0.04, 3.0),
    };
    SignalReport report = rank_signals(all, ReportMode::by_r1, 0.05, std::nullopt);
    REQUIRE(report.rows.size() == 4);
    CHECK(report.rows[0].stats.code.str() == "A000100");
    CHECK(report.rows[1].stats.code.str() == "B000200");
    CHECK(report.rows[2].stats.code.str() == "C000300");
    CHECK(report.rows[3].stats.code.str() == "D000400");
}

TEST_CASE("p ordering breaks ties on the code") {
    std::vector<EventStats> all = {
        make_stats("B000200", 1, 2, 0.02),
        make_stats("A000100", 1, 2, 0.02),
    };
    SignalReport report = rank_signals(all, ReportMode::by_p, 0.05, std::nullopt);
    REQUIRE(report.rows.size() == 2);
    CHECK(report.rows[0].stats.code.str() == "A000100");
    CHECK(report.rows[1].stats.code.str() == "B000200");
}

TEST_CASE("top-k truncates after sorting") {
    std::vector<EventStats> all = {
        make_stats("A000100", 1, 2, 0.03),
        make_stats("B000200", 1, 2, 0.01),
        make_stats("C000300", 1, 2, 0.02),
    };
    SignalReport report = rank_signals(all, ReportMode::by_p, 0.05, 2);
    REQUIRE(report.rows.size() == 2);
    CHECK(report.rows[0].stats.code.str() == "B000200");
    CHECK(report.rows[1].stats.code.str() == "C000300");
    CHECK(report.rows[1].rank == 2);

    SignalReport generous = rank_signals(all, ReportMode::by_p, 0.05, 50);
    CHECK(generous.rows.size() == 3);
}

TEST_CASE("filtering first and ranking with alpha 1 gives the same rows") {
    adr::SplitMix64 rng{777};
    std::vector<EventStats> all;
    for (int i = 0; i < 60; ++i) {
        char raw[8];
        std::snprintf(raw, sizeof(raw), "R%04d00", i);
        all.push_back(make_stats(raw, 1, 2, rng.next_unit(),
                                 1.0 + rng.next_unit() * 9.0));
    }
    const double alpha = 0.3;
    SignalReport direct = rank_signals(all, ReportMode::by_p, alpha, std::nullopt);

    std::vector<EventStats> kept;
    for (const auto& s : all) {
        if (s.p_value < alpha) {
            kept.push_back(s);
        }
    }
    SignalReport staged = rank_signals(kept, ReportMode::by_p, 1.0, std::nullopt);
    REQUIRE(direct.rows.size() == staged.rows.size());
    for (std::size_t i = 0; i < direct.rows.size(); ++i) {
        CHECK(direct.rows[i].stats.code == staged.rows[i].stats.code);
        CHECK(direct.rows[i].rank == staged.rows[i].rank);
    }
}

TEST_CASE("alpha outside the unit interval is rejected") {
    std::vector<EventStats> all = {make_stats("A000100", 1, 2, 0.01)};
    CHECK_THROWS_AS(
        static_cast<void>(rank_signals(all, ReportMode::by_p, -0.1, std::nullopt)),
        Error);
    CHECK_THROWS_AS(
        static_cast<void>(rank_signals(all, ReportMode::by_p, 1.5, std::nullopt)),
        Error);
    CHECK_THROWS_AS(
        static_cast<void>(rank_signals(all, ReportMode::prefix_filtered, 0.05,
                                       std::nullopt)),
        Error);
}

TEST_CASE("prefix filtering keeps relative order and renumbers") {
    std::vector<EventStats> all = {
        make_stats("B33..00", 10, 20, 0.001),
        make_stats("H06z000", 5, 50, 0.002),
        make_stats("B34..00", 3, 30, 0.003),
        make_stats("N245.00", 2, 9, 0.004),
        make_stats("B32..00", 1, 8, 0.005),
    };
    SignalReport base = rank_signals(all, ReportMode::by_p, 0.05, std::nullopt);
    SignalReport filtered = filter_prefix(base, "B3");
    CHECK(filtered.mode == ReportMode::prefix_filtered);
    REQUIRE(filtered.rows.size() == 3);
    CHECK(filtered.rows[0].stats.code.str() == "B33..00");
    CHECK(filtered.rows[1].stats.code.str() == "B34..00");
    CHECK(filtered.rows[2].stats.code.str() == "B32..00");
    CHECK(filtered.rows[0].rank == 1);
    CHECK(filtered.rows[1].rank == 2);
    CHECK(filtered.rows[2].rank == 3);
    // The source report is left alone.
    CHECK(base.rows.size() == 5);

    CHECK_THROWS_AS(static_cast<void>(filter_prefix(base, "")), Error);

    SignalReport empty = filter_prefix(base, "ZZ");
    CHECK(empty.rows.empty());
}

TEST_CASE("tsv rendering matches the documented row format") {
    std::vector<EventStats> all = {make_stats("I212.00", 177, 1169, 1.53e-12,
                                              1169.0 / 177.0,
                                              100.0 * 1169.0 / 17125.0)};
    SignalReport report = rank_signals(all, ReportMode::by_p, 0.05, std::nullopt);
    CodeDictionary dict;
    dict.add(ReadCode::parse("I212.00"), "Chronic kidney disease stage 3");

    std::ostringstream out;
    emit_report(report, dict, out, ReportFormat::tsv, true);
    const std::string text = out.str();
    CHECK(text ==
          "Rank\tReadcode\tMedicalEvent\tNB\tNA\tR1\tR2\tp\n"
          "1\tI212.00\tChronic kidney disease stage 3\t177\t1169\t6.60\t6.83\t"
          "1.530e-12\n");

    std::ostringstream hidden;
    emit_report(report, dict, hidden, ReportFormat::tsv, false);
    CHECK(hidden.str() ==
          "Rank\tReadcode\tMedicalEvent\tNB\tNA\tR1\tR2\n"
          "1\tI212.00\tChronic kidney disease stage 3\t177\t1169\t6.60\t6.83\n");

    std::ostringstream again;
    emit_report(report, dict, again, ReportFormat::tsv, true);
    CHECK(again.str() == text);
}

TEST_CASE("empty report renders the header only") {
    SignalReport report = rank_signals({}, ReportMode::by_p, 0.05, std::nullopt);
    CodeDictionary dict;
    std::ostringstream out;
    emit_report(report, dict, out, ReportFormat::tsv, true);
    CHECK(out.str() == "Rank\tReadcode\tMedicalEvent\tNB\tNA\tR1\tR2\tp\n");
}

TEST_CASE("aligned text is deterministic and column-aligned") {
    std::vector<EventStats> all = {
        make_stats("I212.00", 177, 1169, 1.53e-12, 6.6045, 6.8262),
        make_stats("N245.00", 5, 38, 0.004, 7.6, 0.22),
    };
    SignalReport report = rank_signals(all, ReportMode::by_p, 0.05, std::nullopt);
    CodeDictionary dict;
    dict.add(ReadCode::parse("I212.00"), "Chronic kidney disease stage 3");
    dict.add(ReadCode::parse("N245.00"), "Acute kidney injury");

    std::ostringstream a;
    std::ostringstream b;
    emit_report(report, dict, a, ReportFormat::aligned_text, true);
    emit_report(report, dict, b, ReportFormat::aligned_text, true);
    CHECK(a.str() == b.str());

    std::istringstream lines(a.str());
    std::string header;
    std::string row1;
    std::string row2;
    REQUIRE(std::getline(lines, header));
    REQUIRE(std::getline(lines, row1));
    REQUIRE(std::getline(lines, row2));
    CHECK(header.find("Rank") == 0);
    CHECK(header.find("MedicalEvent") != std::string::npos);
    CHECK(row1.find("Chronic kidney disease stage 3") != std::string::npos);
    CHECK(row1.find('\t') == std::string::npos);
    // No trailing padding on any line.
    CHECK(header.back() != ' ');
    CHECK(row1.back() != ' ');
    CHECK(row2.back() != ' ');
}

TEST_CASE("fixed-point rendering rounds halves away from zero") {
    CHECK(format_fixed2(58.0 / 16.0) == "3.63");
    CHECK(format_fixed2(-3.625) == "-3.63");
    CHECK(format_fixed2(0.0) == "0.00");
    CHECK(format_fixed2(38.0) == "38.00");
    CHECK(format_fixed2(6.825) == "6.83");
    CHECK(format_fixed2(1169.0 / 177.0) == "6.60");
}

TEST_CASE("p-value rendering uses three-digit scientific form") {
    CHECK(format_pvalue(0.0) == "0.000e+00");
    CHECK(format_pvalue(0.0123) == "1.230e-02");
    CHECK(format_pvalue(1.0) == "1.000e+00");
    CHECK(format_pvalue(2.5e-101) == "2.500e-101");
}
