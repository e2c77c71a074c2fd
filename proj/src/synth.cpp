#include "adr/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include "adr/config.hpp"
#include "adr/date.hpp"
#include "adr/error.hpp"

namespace adr {

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double SplitMix64::next_unit() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::uint64_t SplitMix64::next_below(std::uint64_t bound) {
    if (bound == 0) {
        fail("InvalidArgument", "next_below requires bound >= 1");
    }
    auto widen = [](std::uint64_t v, std::uint64_t b) {
        return static_cast<unsigned __int128>(v) * b;
    };
    unsigned __int128 m = widen(next(), bound);
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        const std::uint64_t threshold = -bound % bound;
        while (low < threshold) {
            m = widen(next(), bound);
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 g{seed + stream * 0x9e3779b97f4a7c15ULL};
    return g.next();
}

std::vector<ReadCode> SynthSpec::injected_codes() const {
    std::vector<ReadCode> out;
    for (const auto& c : universe) {
        if (c.multiplier != 1.0) {
            out.push_back(c.code);
        }
    }
    return out;
}

void SynthSpec::validate() const {
    if (n_patients < 1) {
        fail("InvalidSpec", "n_patients must be at least 1");
    }
    if (window_days < 1) {
        fail("InvalidSpec", "window_days must be at least 1");
    }
    if (drug_code.empty()) {
        fail("InvalidSpec", "drug_code must be nonempty");
    }
    std::unordered_set<ReadCode> seen;
    for (const auto& c : universe) {
        if (!(c.baseline >= 0.0 && c.baseline <= 1.0)) {
            fail("InvalidSpec",
                 "baseline probability out of [0,1] for code " + c.code.str());
        }
        if (!(c.multiplier > 0.0)) {
            fail("InvalidSpec", "multiplier must be positive for code " + c.code.str());
        }
        if (c.baseline * c.multiplier > 1.0) {
            fail("InvalidSpec", "after-window probability exceeds 1 for code " +
                                    c.code.str());
        }
        if (!seen.insert(c.code).second) {
            fail("InvalidSpec", "duplicate universe code " + c.code.str());
        }
    }
}

SynthSpec make_spec(std::uint64_t seed, std::int64_t n_patients, std::size_t n_codes,
                    double baseline_min, double baseline_max, std::size_t n_injected,
                    double multiplier, int window_days) {
    if (n_codes > 10000) {
        fail("InvalidSpec", "procedural universe supports at most 10000 codes");
    }
    if (n_injected > n_codes) {
        fail("InvalidSpec", "cannot inject more codes than the universe holds");
    }
    if (!(baseline_min >= 0.0 && baseline_min <= baseline_max && baseline_max <= 1.0)) {
        fail("InvalidSpec", "baseline range must satisfy 0 <= min <= max <= 1");
    }

    SynthSpec spec;
    spec.seed = seed;
    spec.n_patients = n_patients;
    spec.window_days = window_days;

    SplitMix64 rng{mix_seed(seed, 0)};
    spec.universe.reserve(n_codes);
    for (std::size_t i = 0; i < n_codes; ++i) {
        char raw[8];
        std::snprintf(raw, sizeof(raw), "%c%04zu00", static_cast<char>('A' + i % 26), i);
        CodeSpec c;
        c.code = ReadCode::parse(std::string_view(raw, 7));
        c.baseline = baseline_min + rng.next_unit() * (baseline_max - baseline_min);
        spec.universe.push_back(c);
    }
    if (n_injected > 0) {
        const std::size_t step = n_codes / n_injected;
        for (std::size_t k = 0; k < n_injected; ++k) {
            spec.universe[k * step].multiplier = multiplier;
        }
    }
    spec.validate();
    return spec;
}

namespace {

template <typename T>
T parse_number(const KvEntry& entry) {
    T value{};
    const char* begin = entry.value.data();
    const char* end = begin + entry.value.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        fail("InvalidSpec", "line " + std::to_string(entry.line) + ": cannot parse \"" +
                                entry.value + "\" as a number for key " + entry.key);
    }
    return value;
}

CodeSpec parse_code_entry(const KvEntry& entry) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        auto pos = entry.value.find(',', start);
        if (pos == std::string::npos) {
            parts.push_back(entry.value.substr(start));
            break;
        }
        parts.push_back(entry.value.substr(start, pos - start));
        start = pos + 1;
    }
    if (parts.size() < 2 || parts.size() > 3) {
        fail("InvalidSpec", "line " + std::to_string(entry.line) +
                                ": code entry needs CODE,baseline[,multiplier]");
    }
    CodeSpec c;
    try {
        c.code = ReadCode::parse(parts[0]);
    } catch (const Error& e) {
        fail("InvalidSpec",
             "line " + std::to_string(entry.line) + ": " + std::string(e.what()));
    }
    KvEntry baseline{entry.key, parts[1], entry.line};
    c.baseline = parse_number<double>(baseline);
    if (parts.size() == 3) {
        KvEntry multiplier{entry.key, parts[2], entry.line};
        c.multiplier = parse_number<double>(multiplier);
    }
    return c;
}

}  // namespace

SynthSpec load_synth_spec(const std::filesystem::path& path) {
    SynthSpec spec;
    std::vector<CodeSpec> explicit_universe;
    bool have_procedural = false;
    std::size_t n_codes = 0;
    double baseline_min = 0.0;
    double baseline_max = 0.0;
    std::size_t n_injected = 0;
    double multiplier = 1.0;

    std::unordered_set<std::string> seen_keys;
    for (const KvEntry& entry : parse_kv_file(path)) {
        if (entry.key != "code" && !seen_keys.insert(entry.key).second) {
            fail("InvalidSpec",
                 "line " + std::to_string(entry.line) + ": duplicate key " + entry.key);
        }
        if (entry.key == "seed") {
            spec.seed = parse_number<std::uint64_t>(entry);
        } else if (entry.key == "n_patients") {
            spec.n_patients = parse_number<std::int64_t>(entry);
        } else if (entry.key == "window_days") {
            spec.window_days = parse_number<int>(entry);
        } else if (entry.key == "drug_code") {
            spec.drug_code = entry.value;
        } else if (entry.key == "n_codes") {
            n_codes = parse_number<std::size_t>(entry);
            have_procedural = true;
        } else if (entry.key == "baseline_min") {
            baseline_min = parse_number<double>(entry);
            have_procedural = true;
        } else if (entry.key == "baseline_max") {
            baseline_max = parse_number<double>(entry);
            have_procedural = true;
        } else if (entry.key == "n_injected") {
            n_injected = parse_number<std::size_t>(entry);
            have_procedural = true;
        } else if (entry.key == "multiplier") {
            multiplier = parse_number<double>(entry);
            have_procedural = true;
        } else if (entry.key == "code") {
            explicit_universe.push_back(parse_code_entry(entry));
        } else {
            fail("InvalidSpec",
                 "line " + std::to_string(entry.line) + ": unknown key " + entry.key);
        }
    }

    if (have_procedural && !explicit_universe.empty()) {
        fail("InvalidSpec", path.string() +
                                ": cannot mix a procedural universe with code entries");
    }
    if (have_procedural) {
        SynthSpec built = make_spec(spec.seed, spec.n_patients, n_codes, baseline_min,
                                    baseline_max, n_injected, multiplier,
                                    spec.window_days);
        built.drug_code = spec.drug_code;
        return built;
    }
    spec.universe = std::move(explicit_universe);
    spec.validate();
    return spec;
}

namespace {

// Binomial(window, p) sampling tables: P(0 events) plus the odds ratio
// driving the pmf recurrence pmf(k+1) = pmf(k) * odds * (w-k)/(k+1).
struct BinomialTable {
    double p_none = 1.0;  // (1-p)^window
    double odds = 0.0;    // p / (1-p)
    bool always_full = false;
};

BinomialTable make_table(double p, int window) {
    BinomialTable t;
    if (p >= 1.0) {
        t.always_full = true;
        return t;
    }
    const double q = 1.0 - p;
    double q_pow = 1.0;
    for (int i = 0; i < window; ++i) {
        q_pow *= q;
    }
    t.p_none = q_pow;
    t.odds = p / q;
    return t;
}

int draw_binomial(SplitMix64& rng, int window, const BinomialTable& table) {
    if (table.always_full) {
        return window;
    }
    if (table.odds == 0.0) {
        return 0;
    }
    const double u = rng.next_unit();
    double pmf = table.p_none;
    double cdf = pmf;
    int k = 0;
    while (u >= cdf && k < window) {
        const double step = table.odds * static_cast<double>(window - k);
        pmf = pmf * step / static_cast<double>(k + 1);
        ++k;
        cdf += pmf;
    }
    return k;
}

// Floyd's k-subset sampling of distinct days in [0, window); the
// distribution over day sets matches independent per-day Bernoulli draws
// conditioned on their count.
void sample_days(SplitMix64& rng, int window, int k, std::vector<int>& out) {
    out.clear();
    for (int j = window - k; j < window; ++j) {
        const int r = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(j) + 1));
        if (std::find(out.begin(), out.end(), r) != out.end()) {
            out.push_back(j);
        } else {
            out.push_back(r);
        }
    }
    std::sort(out.begin(), out.end());
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        fail("IoError", "cannot create output file " + path.string());
    }
    return out;
}

}  // namespace

GeneratedFiles generate(const SynthSpec& spec, const std::filesystem::path& out_dir) {
    spec.validate();
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        fail("IoError", "cannot create output directory " + out_dir.string());
    }

    GeneratedFiles files{out_dir / "patients.csv", out_dir / "prescriptions.csv",
                         out_dir / "events.csv", out_dir / "ground_truth.csv"};
    std::ofstream patients = open_output(files.patients);
    std::ofstream prescriptions = open_output(files.prescriptions);
    std::ofstream events = open_output(files.events);
    std::ofstream truth = open_output(files.ground_truth);

    const int window = spec.window_days;
    std::vector<BinomialTable> before_tables;
    std::vector<BinomialTable> after_tables;
    before_tables.reserve(spec.universe.size());
    after_tables.reserve(spec.universe.size());
    for (const auto& c : spec.universe) {
        before_tables.push_back(make_table(c.baseline, window));
        after_tables.push_back(make_table(c.baseline * c.multiplier, window));
    }

    const Date base_index = *Date::make(2015, 6, 1);
    std::vector<int> days;
    for (std::int64_t i = 0; i < spec.n_patients; ++i) {
        // Per-patient substream; the draw order below is part of the
        // generator's definition.
        SplitMix64 rng{mix_seed(spec.seed, static_cast<std::uint64_t>(i) + 1)};
        const Date index =
            base_index.plus_days(static_cast<int>(rng.next_below(28)));
        const Date registration =
            index.plus_days(-(365 + static_cast<int>(rng.next_below(1000))));

        char id[32];
        std::snprintf(id, sizeof(id), "P%07lld", static_cast<long long>(i) + 1);
        patients << id << ',' << registration.str() << '\n';
        prescriptions << id << ',' << spec.drug_code << ',' << index.str() << '\n';

        for (std::size_t c = 0; c < spec.universe.size(); ++c) {
            const std::string_view code = spec.universe[c].code.view();
            const int k_before = draw_binomial(rng, window, before_tables[c]);
            if (k_before > 0) {
                sample_days(rng, window, k_before, days);
                for (int day : days) {
                    events << id << ',' << code << ','
                           << index.plus_days(day - window).str() << '\n';
                }
            }
            const int k_after = draw_binomial(rng, window, after_tables[c]);
            if (k_after > 0) {
                sample_days(rng, window, k_after, days);
                for (int day : days) {
                    events << id << ',' << code << ',' << index.plus_days(day).str()
                           << '\n';
                }
            }
        }
    }

    for (const auto& c : spec.universe) {
        char mult[32];
        std::snprintf(mult, sizeof(mult), "%.17g", c.multiplier);
        truth << c.code.view() << ',' << mult << '\n';
    }

    for (std::ofstream* out : {&patients, &prescriptions, &events, &truth}) {
        out->flush();
        if (!*out) {
            fail("IoError", "failed writing generated dataset in " + out_dir.string());
        }
    }
    return files;
}

DetectionOutcome evaluate(const SynthSpec& spec, const SignalReport& report, int level) {
    std::vector<ReadCode> injected;
    for (const ReadCode& code : spec.injected_codes()) {
        injected.push_back(code.truncated(level));
    }
    std::sort(injected.begin(), injected.end());
    injected.erase(std::unique(injected.begin(), injected.end()), injected.end());

    std::unordered_map<ReadCode, int> rank_of;
    rank_of.reserve(report.rows.size());
    for (const auto& row : report.rows) {
        rank_of.emplace(row.stats.code, row.rank);
    }

    DetectionOutcome outcome;
    for (const ReadCode& code : injected) {
        auto it = rank_of.find(code);
        if (it != rank_of.end()) {
            outcome.recovered.push_back(code);
            outcome.ranks.push_back(it->second);
        }
    }
    outcome.recall = injected.empty()
                         ? 1.0
                         : static_cast<double>(outcome.recovered.size()) /
                               static_cast<double>(injected.size());
    return outcome;
}

}  // namespace adr
