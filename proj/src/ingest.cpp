#include "adr/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "adr/error.hpp"

namespace adr {

void RejectLog::note(std::int64_t& counter, const std::string& message) {
    ++counter;
    if (samples.size() < max_samples) {
        samples.push_back(message);
    }
}

namespace {

// Splits into exactly n_fields at the delimiter; no quoting rules. Returns
// false on a wrong field count or any empty field.
bool split_fields(const std::string& line, char delimiter, std::vector<std::string>& out,
                  std::size_t n_fields) {
    out.clear();
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(delimiter, start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    if (out.size() != n_fields) {
        return false;
    }
    return std::none_of(out.begin(), out.end(),
                        [](const std::string& f) { return f.empty(); });
}

// Per-line reader shared by the three input files. handle() returns an
// error message for a malformed line, empty string otherwise.
template <typename Handler>
void read_lines(const std::filesystem::path& path, const LoadOptions& options,
                std::int64_t& reject_counter, RejectLog& log, Handler&& handle) {
    std::ifstream in(path);
    if (!in) {
        fail("IoError", "cannot open input file " + path.string());
    }
    std::string line;
    std::vector<std::string> fields;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        std::string message = handle(line, fields);
        if (message.empty()) {
            continue;
        }
        message = path.string() + ":" + std::to_string(line_no) + ": " + message;
        if (options.strict) {
            fail("FormatError", message);
        }
        log.note(reject_counter, message);
    }
}

}  // namespace

RawRecords load_records(const std::filesystem::path& patients_path,
                        const std::filesystem::path& prescriptions_path,
                        const std::filesystem::path& events_path,
                        const LoadOptions& options) {
    RawRecords out;
    const char delim = options.delimiter;

    std::unordered_set<std::string> seen_ids;
    read_lines(patients_path, options, out.rejects.patients, out.rejects,
               [&](const std::string& line, std::vector<std::string>& f) -> std::string {
                   if (!split_fields(line, delim, f, 2)) {
                       return "expected patient_id" + std::string(1, delim) +
                              "registration_date";
                   }
                   auto date = Date::parse(f[1]);
                   if (!date) {
                       return "invalid registration date \"" + f[1] + "\"";
                   }
                   if (!seen_ids.insert(f[0]).second) {
                       fail("DuplicatePatientId",
                            "patient id \"" + f[0] + "\" appears more than once in " +
                                patients_path.string());
                   }
                   out.patients.push_back({f[0], *date});
                   return {};
               });

    read_lines(prescriptions_path, options, out.rejects.prescriptions, out.rejects,
               [&](const std::string& line, std::vector<std::string>& f) -> std::string {
                   if (!split_fields(line, delim, f, 3)) {
                       return "expected patient_id" + std::string(1, delim) + "drug_code" +
                              std::string(1, delim) + "date";
                   }
                   auto date = Date::parse(f[2]);
                   if (!date) {
                       return "invalid prescription date \"" + f[2] + "\"";
                   }
                   out.prescriptions.push_back({f[0], f[1], *date});
                   return {};
               });

    read_lines(events_path, options, out.rejects.events, out.rejects,
               [&](const std::string& line, std::vector<std::string>& f) -> std::string {
                   if (!split_fields(line, delim, f, 3)) {
                       return "expected patient_id" + std::string(1, delim) + "readcode" +
                              std::string(1, delim) + "date";
                   }
                   auto date = Date::parse(f[2]);
                   if (!date) {
                       return "invalid event date \"" + f[2] + "\"";
                   }
                   ReadCode code;
                   try {
                       code = ReadCode::parse(f[1]);
                   } catch (const Error& e) {
                       return e.what();
                   }
                   out.events.push_back({f[0], code, *date});
                   return {};
               });

    return out;
}

Cohort build_cohort(const RawRecords& records, const std::vector<std::string>& drug_codes,
                    int min_registration_days) {
    if (min_registration_days < 0) {
        fail("InvalidArgument", "min_registration_days must be nonnegative");
    }
    std::unordered_set<std::string> targets(drug_codes.begin(), drug_codes.end());
    if (targets.empty()) {
        fail("InvalidArgument", "drug code set is empty");
    }

    std::unordered_map<std::string, Date> registration;
    registration.reserve(records.patients.size());
    for (const auto& p : records.patients) {
        registration.emplace(p.patient_id, p.registration_date);
    }

    // Earliest matching prescription per patient; later exposures are
    // ignored, so each patient has a single before/after split.
    std::unordered_map<std::string, Date> index_dates;
    for (const auto& rx : records.prescriptions) {
        if (!targets.contains(rx.drug_code) || !registration.contains(rx.patient_id)) {
            continue;
        }
        auto [it, inserted] = index_dates.emplace(rx.patient_id, rx.date);
        if (!inserted && rx.date < it->second) {
            it->second = rx.date;
        }
    }

    Cohort cohort;
    for (const auto& [id, index_date] : index_dates) {
        Date registered = registration.at(id);
        if (registered.plus_days(min_registration_days) <= index_date) {
            cohort.patients.push_back({id, index_date});
        }
    }
    if (cohort.patients.empty()) {
        fail("EmptyCohort", "no patient has a qualifying prescription");
    }
    std::sort(cohort.patients.begin(), cohort.patients.end(),
              [](const CohortPatient& a, const CohortPatient& b) {
                  if (a.index_date != b.index_date) {
                      return a.index_date < b.index_date;
                  }
                  return a.patient_id < b.patient_id;
              });

    std::unordered_map<std::string, std::uint32_t> row_of;
    row_of.reserve(cohort.patients.size());
    for (std::uint32_t row = 0; row < cohort.patients.size(); ++row) {
        row_of.emplace(cohort.patients[row].patient_id, row);
    }
    for (const auto& ev : records.events) {
        auto it = row_of.find(ev.patient_id);
        if (it == row_of.end()) {
            continue;
        }
        cohort.events.push_back(ev);
        cohort.event_rows.push_back(it->second);
    }
    return cohort;
}

}  // namespace adr
