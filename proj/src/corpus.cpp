#include "zwise/corpus.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "zwise/csvio.hpp"
#include "zwise/errors.hpp"

namespace zwise {

namespace {

using nlohmann::json;

std::optional<double> parse_double(const std::string& s) {
    if (s.empty()) return std::nullopt;
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::optional<int> parse_int(const std::string& s) {
    if (s.empty()) return std::nullopt;
    char* end = nullptr;
    long v = std::strtol(s.c_str(), &end, 10);
    if (end != s.c_str() + s.size()) return std::nullopt;
    return static_cast<int>(v);
}

// Structural checks shared by both input formats. Violations accumulate so a
// broken file surfaces everything wrong with it at once.
void validate_records(std::vector<ParticipantRecord>& records, std::size_t expected,
                      std::vector<std::string>& violations) {
    std::set<std::string> seen;
    for (auto& rec : records) {
        const std::string& id = rec.participant_id;
        if (id.empty()) {
            violations.push_back("record with empty participant_id");
            continue;
        }
        if (!seen.insert(id).second) {
            violations.push_back("duplicate participant_id: " + id);
        }

        std::set<int> dilemmas;
        for (const auto& r : rec.responses) {
            if (r.dilemma_id < 1 || r.dilemma_id > static_cast<int>(expected)) {
                violations.push_back("participant " + id + ": dilemma_id " +
                                     std::to_string(r.dilemma_id) + " outside 1.." +
                                     std::to_string(expected));
            } else if (!dilemmas.insert(r.dilemma_id).second) {
                violations.push_back("participant " + id + ": duplicate dilemma " +
                                     std::to_string(r.dilemma_id));
            }
            if (!std::isfinite(r.confidence) || r.confidence < 1.0 || r.confidence > 10.0) {
                violations.push_back("participant " + id + " dilemma " +
                                     std::to_string(r.dilemma_id) + ": rating " +
                                     format_double(r.confidence) + " outside [1,10]");
            }
        }
        for (int d = 1; d <= static_cast<int>(expected); ++d) {
            if (!dilemmas.count(d)) {
                violations.push_back("participant " + id + ": missing dilemma " +
                                     std::to_string(d));
            }
        }
        std::sort(rec.responses.begin(), rec.responses.end(),
                  [](const Response& a, const Response& b) { return a.dilemma_id < b.dilemma_id; });
    }
}

[[noreturn]] void raise_validation(std::vector<std::string> violations) {
    std::string what = "corpus validation failed with " + std::to_string(violations.size()) +
                       " violation(s); first: " + violations.front();
    throw ValidationError(std::move(violations), what);
}

ParticipantRecord record_from_json(const json& j) {
    ParticipantRecord rec;
    if (!j.is_object()) throw InputError("record is not an object");
    rec.participant_id = j.at("participant_id").get<std::string>();
    if (j.contains("demographics") && !j.at("demographics").is_null()) {
        const json& d = j.at("demographics");
        Demographics demo;
        if (d.contains("age") && !d.at("age").is_null()) demo.age = d.at("age").get<int>();
        if (d.contains("gender")) demo.gender = d.at("gender").get<std::string>();
        if (d.contains("category")) demo.category = d.at("category").get<std::string>();
        rec.demographics = std::move(demo);
    }
    for (const json& r : j.at("responses")) {
        Response resp;
        resp.dilemma_id = r.at("dilemma_id").get<int>();
        resp.transcript = r.at("transcript").get<std::string>();
        resp.confidence = r.at("confidence").get<double>();
        rec.responses.push_back(std::move(resp));
    }
    return rec;
}

} // namespace

std::vector<ParticipantRecord> ingest_jsonl(std::istream& in, const std::string& origin,
                                            std::size_t expected_responses) {
    std::vector<ParticipantRecord> records;
    std::vector<std::string> violations;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        try {
            records.push_back(record_from_json(json::parse(line)));
        } catch (const json::exception& e) {
            violations.push_back(origin + ":" + std::to_string(lineno) +
                                 ": parse error: " + e.what());
        } catch (const Error& e) {
            violations.push_back(origin + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    validate_records(records, expected_responses, violations);
    if (!violations.empty()) raise_validation(std::move(violations));
    return records;
}

std::vector<ParticipantRecord> ingest_csv(std::istream& in, const std::string& origin,
                                          std::size_t expected_responses) {
    std::vector<std::string> violations;
    std::string line;
    if (!std::getline(in, line)) {
        raise_validation({origin + ": empty file"});
    }
    std::vector<std::string> header = parse_csv_line(line);
    auto column = [&](const std::string& name) -> std::optional<std::size_t> {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) return std::nullopt;
        return static_cast<std::size_t>(it - header.begin());
    };
    auto need = [&](const char* name) {
        auto c = column(name);
        if (!c) raise_validation({origin + ": missing required column " + name});
        return *c;
    };
    std::size_t c_id = need("participant_id");
    std::size_t c_dilemma = need("dilemma_id");
    std::size_t c_text = need("transcript");
    std::size_t c_conf = need("confidence");
    auto c_age = column("age");
    auto c_gender = column("gender");
    auto c_category = column("category");

    std::vector<ParticipantRecord> records;
    std::map<std::string, std::size_t> index_of; // participant -> records slot
    // A participant named on a broken row still enters the coverage check, so
    // the report says which dilemmas they are missing instead of dropping them.
    auto register_id = [&](const std::string& id) {
        if (id.empty() || index_of.count(id)) return;
        ParticipantRecord rec;
        rec.participant_id = id;
        index_of.emplace(id, records.size());
        records.push_back(std::move(rec));
    };
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<std::string> fields;
        try {
            fields = parse_csv_line(line);
        } catch (const Error& e) {
            violations.push_back(origin + ":" + std::to_string(lineno) + ": " + e.what());
            std::string prefix = line.substr(0, line.find(','));
            if (c_id == 0 && prefix.find('"') == std::string::npos) register_id(prefix);
            continue;
        }
        if (fields.size() < header.size()) {
            violations.push_back(origin + ":" + std::to_string(lineno) + ": expected " +
                                 std::to_string(header.size()) + " fields, got " +
                                 std::to_string(fields.size()));
            if (c_id < fields.size()) register_id(fields[c_id]);
            continue;
        }
        const std::string& id = fields[c_id];
        register_id(id);
        auto it = index_of.find(id);
        if (!records[it->second].demographics && (c_age || c_gender || c_category)) {
            Demographics demo;
            if (c_age) demo.age = parse_int(fields[*c_age]);
            if (c_gender) demo.gender = fields[*c_gender];
            if (c_category) demo.category = fields[*c_category];
            if (demo.age || !demo.gender.empty() || !demo.category.empty()) {
                records[it->second].demographics = std::move(demo);
            }
        }
        Response resp;
        auto dilemma = parse_int(fields[c_dilemma]);
        auto conf = parse_double(fields[c_conf]);
        if (!dilemma) {
            violations.push_back(origin + ":" + std::to_string(lineno) +
                                 ": bad dilemma_id \"" + fields[c_dilemma] + "\"");
            continue;
        }
        if (!conf) {
            violations.push_back(origin + ":" + std::to_string(lineno) + ": bad confidence \"" +
                                 fields[c_conf] + "\"");
            continue;
        }
        resp.dilemma_id = *dilemma;
        resp.confidence = *conf;
        resp.transcript = fields[c_text];
        records[it->second].responses.push_back(std::move(resp));
    }
    validate_records(records, expected_responses, violations);
    if (!violations.empty()) raise_validation(std::move(violations));
    return records;
}

std::vector<ParticipantRecord> ingest_corpus(const std::string& path,
                                             std::size_t expected_responses) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open corpus file: " + path);
    auto dot = path.find_last_of('.');
    std::string ext = dot == std::string::npos ? "" : path.substr(dot);
    if (ext == ".csv") return ingest_csv(in, path, expected_responses);
    if (ext == ".jsonl" || ext == ".ndjson") return ingest_jsonl(in, path, expected_responses);
    throw InputError("unrecognized corpus extension (want .jsonl, .ndjson or .csv): " + path);
}

ExternalScales read_external_scales(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open external scales file: " + path);

    std::vector<std::string> violations;
    std::string line;
    if (!std::getline(in, line)) raise_validation({path + ": empty file"});
    std::vector<std::string> header = parse_csv_line(line);
    if (header.empty() || header[0] != "participant_id") {
        raise_validation({path + ": first column must be participant_id"});
    }
    if (header.size() < 2) raise_validation({path + ": no measure columns"});

    ExternalScales scales;
    scales.measures.assign(header.begin() + 1, header.end());
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<std::string> fields;
        try {
            fields = parse_csv_line(line);
        } catch (const Error& e) {
            violations.push_back(path + ":" + std::to_string(lineno) + ": " + e.what());
            continue;
        }
        if (fields.size() != header.size()) {
            violations.push_back(path + ":" + std::to_string(lineno) + ": expected " +
                                 std::to_string(header.size()) + " fields, got " +
                                 std::to_string(fields.size()));
            continue;
        }
        if (scales.by_participant.count(fields[0])) {
            violations.push_back(path + ":" + std::to_string(lineno) +
                                 ": duplicate participant_id " + fields[0]);
            continue;
        }
        std::vector<double> values;
        bool ok = true;
        for (std::size_t i = 1; i < fields.size(); ++i) {
            auto v = parse_double(fields[i]);
            if (!v) {
                violations.push_back(path + ":" + std::to_string(lineno) + ": bad value \"" +
                                     fields[i] + "\" for " + scales.measures[i - 1]);
                ok = false;
                break;
            }
            values.push_back(*v);
        }
        if (ok) scales.by_participant.emplace(fields[0], std::move(values));
    }
    if (!violations.empty()) raise_validation(std::move(violations));
    return scales;
}

} // namespace zwise
