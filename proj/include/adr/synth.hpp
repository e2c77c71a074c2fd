#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "adr/readcode.hpp"
#include "adr/signal.hpp"

namespace adr {

/// SplitMix64: a 64-bit counter-based generator using only integer
/// arithmetic, so streams are identical across platforms.
struct SplitMix64 {
    std::uint64_t state = 0;

    std::uint64_t next();

    /// Uniform double in [0, 1) with 53 random bits.
    double next_unit();

    /// Uniform integer in [0, bound), bound >= 1; unbiased via 128-bit
    /// multiply-shift with rejection.
    std::uint64_t next_below(std::uint64_t bound);
};

/// Seed for an independent substream; stream 0 is reserved for spec-level
/// draws and stream i+1 drives patient i.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

struct CodeSpec {
    ReadCode code;
    double baseline = 0.0;    // per-day event probability before exposure
    double multiplier = 1.0;  // after-window rate multiplier; 1.0 = uninjected
};

/// The injected set is the universe entries with multiplier != 1, so it is
/// a subset of the universe by construction.
struct SynthSpec {
    std::uint64_t seed = 0;
    std::int64_t n_patients = 0;
    int window_days = 60;
    std::string drug_code = "DRUG01";
    std::vector<CodeSpec> universe;

    std::vector<ReadCode> injected_codes() const;
    /// Throws InvalidSpec: probabilities outside [0,1], multiplier <= 0,
    /// baseline*multiplier > 1, duplicate universe codes, empty drug code,
    /// n_patients < 1, window_days < 1.
    void validate() const;
};

/// Procedural universe: codes 'A'+i%26 then 4 digits of i, baselines
/// uniform in [baseline_min, baseline_max] drawn from stream 0 of seed,
/// n_injected codes at evenly spaced universe positions.
SynthSpec make_spec(std::uint64_t seed, std::int64_t n_patients, std::size_t n_codes,
                    double baseline_min, double baseline_max, std::size_t n_injected,
                    double multiplier, int window_days = 60);

/// Key-value spec file. Scalar keys: seed, n_patients, window_days,
/// drug_code. The universe is either procedural (n_codes, baseline_min,
/// baseline_max, n_injected, multiplier) or explicit (repeated
/// code=CODE,baseline[,multiplier] entries); mixing the two is an error.
SynthSpec load_synth_spec(const std::filesystem::path& path);

struct GeneratedFiles {
    std::filesystem::path patients;
    std::filesystem::path prescriptions;
    std::filesystem::path events;
    std::filesystem::path ground_truth;
};

/// Write the ingest-format cohort into out_dir: every patient registered
/// 365+ days before their single prescription of spec.drug_code, with
/// per-day Bernoulli events at baseline rates before the index date and
/// multiplied rates after. Byte-identical for a given spec.
GeneratedFiles generate(const SynthSpec& spec, const std::filesystem::path& out_dir);

struct DetectionOutcome {
    std::vector<ReadCode> recovered;  // injected codes present in the report
    std::vector<int> ranks;           // their report ranks, parallel to recovered
    double recall = 0.0;
};

/// Score a report produced from generate(spec)'s files. Injected codes are
/// truncated to the report's level and deduplicated before matching; with
/// nothing injected there is nothing to miss, so recall is 1.
DetectionOutcome evaluate(const SynthSpec& spec, const SignalReport& report,
                          int level = 5);

}  // namespace adr
