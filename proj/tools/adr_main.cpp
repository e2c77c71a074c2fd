#include <cstdint>
#include <exception>
#include <fstream>
#include <initializer_list>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "adr/error.hpp"
#include "adr/pipeline.hpp"
#include "adr/synth.hpp"

namespace {

// Raw CLI values; enums stay strings so CLI11 owns the validation and the
// config-file spelling matches the flag spelling.
struct DetectArgs {
    adr::RunConfig config;
    std::string config_path;
    std::string remainder = "merge";
    std::string test = "paired";
    std::string mode = "p";
    std::string format = "tsv";
    std::string delimiter = ",";
    std::size_t top_k = 0;
    bool hide_p = false;
};

struct ReportArgs {
    adr::ReportConfig config;
    std::string mode = "p";
    std::string format = "tsv";
    std::string delimiter = ",";
    std::size_t top_k = 0;
    bool hide_p = false;
};

struct SynthArgs {
    std::filesystem::path spec_path;
    std::filesystem::path out_dir;
    std::uint64_t seed = 0;
};

char single_char(const std::string& value, const char* flag) {
    if (value.size() != 1) {
        adr::fail("InvalidArgument", std::string(flag) + " must be a single character");
    }
    return value[0];
}

adr::ReportMode mode_from(const std::string& value) {
    return value == "p" ? adr::ReportMode::by_p : adr::ReportMode::by_r1;
}

adr::ReportFormat format_from(const std::string& value) {
    return value == "tsv" ? adr::ReportFormat::tsv : adr::ReportFormat::aligned_text;
}

void add_ranking_options(CLI::App* cmd, std::string& mode, std::string& format,
                         std::size_t& top_k, bool& hide_p, double& alpha,
                         std::string& prefix) {
    cmd->add_option("--alpha", alpha, "Significance threshold (p < alpha)")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--mode", mode, "Ranking: p (ascending p) or r1 (descending R1)")
        ->check(CLI::IsMember({"p", "r1"}))
        ->capture_default_str();
    cmd->add_option("--prefix", prefix,
                    "Keep only codes starting with this prefix, e.g. B for neoplasms");
    cmd->add_option("--top-k", top_k, "Keep only the first k ranked rows")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--format", format, "Report format: tsv or text (aligned columns)")
        ->check(CLI::IsMember({"tsv", "text"}))
        ->capture_default_str();
    cmd->add_flag("--hide-p", hide_p, "Omit the p column from the report");
}

void echo_config(const CLI::App& cmd, std::ostream& out) {
    std::istringstream lines(cmd.config_to_str(true, false));
    std::string line;
    while (std::getline(lines, line)) {
        if (!line.empty()) {
            out << "config: " << line << '\n';
        }
    }
}

// CLI11 processes config files on the root app only, so the subcommand's file
// is fed in by hand after the flag parse. Options already set on the command
// line are left alone; required options are checked after the merge so the
// file can satisfy them.
void merge_config_file(CLI::App* cmd, const std::string& path,
                       std::initializer_list<const char*> required) {
    if (!path.empty()) {
        std::ifstream file(path);
        if (!file) {
            adr::fail("IoError", "cannot open config file: " + path);
        }
        cmd->parse_from_stream(file);
    }
    for (const char* name : required) {
        if (cmd->count(name) == 0) {
            throw CLI::RequiredError(name);
        }
    }
}

int run_detect_command(CLI::App* cmd, DetectArgs& args) {
    merge_config_file(cmd, args.config_path,
                      {"--patients", "--prescriptions", "--events",
                       "--drug-code", "--out"});
    adr::RunConfig& config = args.config;
    config.remainder = args.remainder == "merge" ? adr::RemainderPolicy::merge_last
                                                 : adr::RemainderPolicy::drop;
    config.variant = args.test == "paired" ? adr::TestVariant::paired
                                           : adr::TestVariant::two_sample;
    config.mode = mode_from(args.mode);
    config.format = format_from(args.format);
    config.delimiter = single_char(args.delimiter, "--delimiter");
    config.include_p = !args.hide_p;
    if (cmd->count("--top-k") > 0) {
        config.top_k = args.top_k;
    }
    echo_config(*cmd, std::cerr);
    adr::run_detect(config, &std::cerr);
    return 0;
}

int run_report_command(CLI::App* cmd, ReportArgs& args) {
    adr::ReportConfig& config = args.config;
    config.mode = mode_from(args.mode);
    config.format = format_from(args.format);
    config.delimiter = single_char(args.delimiter, "--delimiter");
    config.include_p = !args.hide_p;
    if (cmd->count("--top-k") > 0) {
        config.top_k = args.top_k;
    }
    echo_config(*cmd, std::cerr);
    adr::run_report(config, &std::cerr);
    return 0;
}

int run_synth_command(CLI::App* cmd, SynthArgs& args) {
    adr::SynthSpec spec = adr::load_synth_spec(args.spec_path);
    if (cmd->count("--seed") > 0) {
        spec.seed = args.seed;
    }
    adr::GeneratedFiles files = adr::generate(spec, args.out_dir);
    std::cerr << "patients: " << files.patients.string() << '\n'
              << "prescriptions: " << files.prescriptions.string() << '\n'
              << "events: " << files.events.string() << '\n'
              << "ground truth: " << files.ground_truth.string() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Detect adverse-drug-reaction signals in longitudinal patient records"};
    app.require_subcommand(1);

    DetectArgs detect_args;
    CLI::App* detect = app.add_subcommand(
        "detect", "Run the full pipeline: ingest, window matrices, t-tests, report");
    {
        adr::RunConfig& c = detect_args.config;
        detect->allow_config_extras(CLI::config_extras_mode::error);
        detect
            ->add_option("--config", detect_args.config_path,
                         "Config file (key=value); flags override its values")
            ->configurable(false);
        // Required inputs are enforced after the config merge, not here.
        detect->add_option("--patients", c.patients, "Patients CSV (required)");
        detect->add_option("--prescriptions", c.prescriptions,
                           "Prescriptions CSV (required)");
        detect->add_option("--events", c.events, "Events CSV (required)");
        detect->add_option("--dict", c.dict, "Code dictionary (code,description)");
        detect->add_option("--drug-code", c.drug_codes,
                           "Target drug code; repeat for a set (required)");
        detect->add_option("--level", c.level, "Code aggregation level: 3 or 5")
            ->check(CLI::IsMember({3, 5}))
            ->capture_default_str();
        detect
            ->add_option("--window-days", c.window_days,
                         "Observation window length in days")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        detect
            ->add_option("--min-registration-days", c.min_registration_days,
                         "Required registration lead time before the index date")
            ->check(CLI::NonNegativeNumber)
            ->capture_default_str();
        detect->add_option("--group-size", c.group_size, "Patients per group")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        detect
            ->add_option("--remainder", detect_args.remainder,
                         "Trailing patients: merge into the last group, or drop")
            ->check(CLI::IsMember({"merge", "drop"}))
            ->capture_default_str();
        detect
            ->add_option("--test", detect_args.test,
                         "Test variant: paired or two-sample")
            ->check(CLI::IsMember({"paired", "two-sample"}))
            ->capture_default_str();
        add_ranking_options(detect, detect_args.mode, detect_args.format,
                            detect_args.top_k, detect_args.hide_p, c.alpha, c.prefix);
        detect->add_option("--out", c.out, "Report output path (required)");
        detect->add_option("--stats-out", c.stats_out,
                           "Stats dump path (default: report path with .stats.tsv)");
        detect
            ->add_option("--delimiter", detect_args.delimiter,
                         "Input field delimiter")
            ->capture_default_str();
        detect->add_flag("--dict-header", c.dict_header,
                         "Skip the dictionary's first line");
        detect->add_flag("--strict", c.strict,
                         "Treat malformed input lines as errors instead of rejects");
        detect
            ->add_option("--threads", c.threads,
                         "Worker threads for per-event stats (0 = all cores)")
            ->capture_default_str();
        detect->add_option("--dump-dir", c.dump_dir,
                           "Write matrix debug dumps into this directory");
    }

    ReportArgs report_args;
    CLI::App* report =
        app.add_subcommand("report", "Re-rank an existing stats dump into a report");
    {
        adr::ReportConfig& c = report_args.config;
        report->add_option("--stats", c.stats_in, "Stats dump from a detect run")
            ->required();
        report->add_option("--dict", c.dict, "Code dictionary (code,description)");
        add_ranking_options(report, report_args.mode, report_args.format,
                            report_args.top_k, report_args.hide_p, c.alpha, c.prefix);
        report->add_option("--out", c.out, "Report output path")->required();
        report
            ->add_option("--delimiter", report_args.delimiter,
                         "Dictionary field delimiter")
            ->capture_default_str();
        report->add_flag("--dict-header", c.dict_header,
                         "Skip the dictionary's first line");
    }

    SynthArgs synth_args;
    CLI::App* synth =
        app.add_subcommand("synth", "Generate a synthetic cohort from a spec file");
    synth->add_option("--spec", synth_args.spec_path, "Key-value spec file")->required();
    synth->add_option("--out-dir", synth_args.out_dir, "Output directory")->required();
    synth->add_option("--seed", synth_args.seed, "Override the spec's seed");

    try {
        app.parse(argc, argv);
        if (*detect) {
            return run_detect_command(detect, detect_args);
        }
        if (*report) {
            return run_report_command(report, report_args);
        }
        return run_synth_command(synth, synth_args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const adr::Error& e) {
        std::cerr << "error: [" << e.tag() << "] " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: [Internal] " << e.what() << '\n';
        return 1;
    }
}
