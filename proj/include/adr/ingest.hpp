#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "adr/date.hpp"
#include "adr/readcode.hpp"

namespace adr {

struct PatientRecord {
    std::string patient_id;
    Date registration_date;
};

struct PrescriptionRecord {
    std::string patient_id;
    std::string drug_code;
    Date date;
};

struct EventRecord {
    std::string patient_id;
    ReadCode code;
    Date date;
};

/// Malformed input lines are counted per file and a few sample messages are
/// kept verbatim, so a lenient run still reports what it dropped.
struct RejectLog {
    static constexpr std::size_t max_samples = 5;

    std::int64_t patients = 0;
    std::int64_t prescriptions = 0;
    std::int64_t events = 0;
    std::vector<std::string> samples;

    std::int64_t total() const { return patients + prescriptions + events; }
    void note(std::int64_t& counter, const std::string& message);
};

struct LoadOptions {
    char delimiter = ',';
    // Strict mode turns any malformed line into a FormatError instead of a
    // reject-log entry. Duplicate patient ids are an error either way.
    bool strict = false;
};

struct RawRecords {
    std::vector<PatientRecord> patients;
    std::vector<PrescriptionRecord> prescriptions;
    std::vector<EventRecord> events;
    RejectLog rejects;
};

/// Load the three delimited inputs. Columns: patients(patient_id,
/// registration_date), prescriptions(patient_id, drug_code, date),
/// events(patient_id, readcode, date). No quoting; dates are ISO-8601.
RawRecords load_records(const std::filesystem::path& patients_path,
                        const std::filesystem::path& prescriptions_path,
                        const std::filesystem::path& events_path,
                        const LoadOptions& options = {});

struct CohortPatient {
    std::string patient_id;
    Date index_date;
};

/// Patients exposed to the target drug set, with their events.
/// patients is sorted by (index_date, patient_id); that order is the
/// grouping order downstream. events holds only cohort patients' records,
/// and event_rows[i] is the patient row of events[i].
struct Cohort {
    std::vector<CohortPatient> patients;
    std::vector<EventRecord> events;
    std::vector<std::uint32_t> event_rows;

    std::size_t size() const { return patients.size(); }
};

/// Select the cohort: index date is the earliest prescription whose drug
/// code is in drug_codes, and the patient must have been registered at
/// least min_registration_days before it. Prescriptions whose patient_id
/// has no patient record cannot qualify and are ignored.
Cohort build_cohort(const RawRecords& records, const std::vector<std::string>& drug_codes,
                    int min_registration_days = 365);

}  // namespace adr
