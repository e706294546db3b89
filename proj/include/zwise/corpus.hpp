#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zwise/attribute_a.hpp"

namespace zwise {

struct Response {
    int dilemma_id = 0;
    std::string transcript;
    double confidence = 1.0; // raw 1..10 rating
};

struct Demographics {
    std::optional<int> age;
    std::string gender;   // free-form; grouping key for the validity battery
    std::string category; // cohort label, e.g. student group
};

struct ParticipantRecord {
    std::string participant_id;
    std::optional<Demographics> demographics;
    std::vector<Response> responses; // sorted by dilemma_id after validation
};

// Reads a corpus file, dispatching on extension: .jsonl/.ndjson for
// line-delimited records, .csv for the tabular layout. Validation collects
// every violation (duplicate ids, missing/duplicate dilemmas, out-of-range
// ratings, parse failures) before raising a single ValidationError.
std::vector<ParticipantRecord> ingest_corpus(const std::string& path,
                                             std::size_t expected_responses = kDilemmaCount);

// One participant object per line:
//   {"participant_id":"P001","demographics":{"age":21,"gender":"female",
//    "category":"STEM"},"responses":[{"dilemma_id":1,"transcript":"...",
//    "confidence":7.5}, ...]}
std::vector<ParticipantRecord> ingest_jsonl(std::istream& in, const std::string& origin,
                                            std::size_t expected_responses = kDilemmaCount);

// Tabular alternate: header participant_id,dilemma_id,transcript,confidence
// with optional trailing age,gender,category columns (read from each
// participant's first row).
std::vector<ParticipantRecord> ingest_csv(std::istream& in, const std::string& origin,
                                          std::size_t expected_responses = kDilemmaCount);

// External instrument scores: CSV keyed by participant_id, one column per
// measure. Values must be numeric; blanks are not allowed.
struct ExternalScales {
    std::vector<std::string> measures;
    std::map<std::string, std::vector<double>> by_participant; // id -> values, measure order
};

ExternalScales read_external_scales(const std::string& path);

} // namespace zwise
