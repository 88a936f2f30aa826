#include "lcta/types.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

namespace lcta {

char response_code(Response r) {
    switch (r) {
    case Response::Correct: return '1';
    case Response::Incorrect: return '0';
    case Response::Absent: return 'A';
    }
    return '?';
}

Response response_from_code(char c) {
    switch (c) {
    case '1': return Response::Correct;
    case '0': return Response::Incorrect;
    case 'A': return Response::Absent;
    default:
        throw FormatError(std::string("unknown response code '") + c + "'");
    }
}

namespace {

template <typename Id>
void require_unique_nonempty(const std::vector<Id>& ids, const char* what) {
    std::unordered_set<std::string> seen;
    for (const auto& id : ids) {
        if (id.empty()) throw FormatError(std::string("empty ") + what + " identifier");
        if (!seen.insert(id).second)
            throw DuplicateError(std::string("duplicate ") + what + " '" + id + "'");
    }
}

} // namespace

ResponseMatrix::ResponseMatrix(std::string session_id,
                               std::vector<StudentId> students,
                               std::vector<ItemId> items,
                               std::vector<Response> cells)
    : session_id_(std::move(session_id)),
      students_(std::move(students)),
      items_(std::move(items)),
      cells_(std::move(cells)) {
    if (students_.empty() || items_.empty())
        throw EmptyInputError("response matrix must have at least one student and one item");
    if (cells_.size() != students_.size() * items_.size())
        throw ShapeError("response matrix cells do not form a full rectangle");
    require_unique_nonempty(students_, "student");
    require_unique_nonempty(items_, "item");
}

std::optional<std::size_t> ResponseMatrix::index_of_student(const StudentId& id) const {
    auto it = std::find(students_.begin(), students_.end(), id);
    if (it == students_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - students_.begin());
}

ResponseMatrix pool_sessions(const std::vector<ResponseMatrix>& sessions) {
    if (sessions.empty()) throw EmptyInputError("no sessions to pool");

    std::vector<StudentId> students;
    std::unordered_map<std::string, std::size_t> student_index;
    for (const auto& session : sessions) {
        for (const auto& id : session.students()) {
            if (student_index.emplace(id, students.size()).second) students.push_back(id);
        }
    }

    std::vector<ItemId> items;
    std::size_t n_items = 0;
    for (const auto& session : sessions) n_items += session.n_items();
    items.reserve(n_items);

    std::vector<Response> cells(students.size() * n_items, Response::Absent);
    std::size_t column_offset = 0;
    for (const auto& session : sessions) {
        for (const auto& item : session.items())
            items.push_back(session.session_id() + ":" + item);
        for (std::size_t i = 0; i < session.n_students(); ++i) {
            const std::size_t row = student_index.at(session.students()[i]);
            for (std::size_t j = 0; j < session.n_items(); ++j)
                cells[row * n_items + column_offset + j] = session.at(i, j);
        }
        column_offset += session.n_items();
    }
    return ResponseMatrix("pooled", std::move(students), std::move(items), std::move(cells));
}

namespace {

void require_score_range(double score, const char* what, const StudentId& id) {
    if (!(score >= 0.0 && score <= 100.0))
        throw DataError(std::string(what) + " out of [0,100] for student '" + id + "'");
}

} // namespace

void validate_record(const StudentRecord& record) {
    if (record.id.empty()) throw FormatError("student record with empty id");
    if (record.placement_fundamental)
        require_score_range(*record.placement_fundamental, "placement_fund", record.id);
    if (record.placement_advanced)
        require_score_range(*record.placement_advanced, "placement_adv", record.id);
    require_score_range(record.final_exam, "final_exam", record.id);
    for (int count : {record.lct_success_count, record.lct_failure_count,
                      record.class_absence_count, record.fpc_absence_count,
                      record.fpt_not_required_count}) {
        if (count < 0)
            throw DataError("negative count for student '" + record.id + "'");
    }
}

void validate_record_counts(const StudentRecord& record, std::size_t t_sessions) {
    const int t = static_cast<int>(t_sessions);
    if (record.lct_success_count + record.lct_failure_count > t)
        throw DataError("lct_success + lct_fail exceeds session count for student '" +
                        record.id + "'");
    for (int count : {record.lct_success_count, record.lct_failure_count,
                      record.class_absence_count, record.fpc_absence_count,
                      record.fpt_not_required_count}) {
        if (count > t)
            throw DataError("count exceeds session count for student '" + record.id + "'");
    }
}

ScoreBand band_of(double score) {
    if (!(score >= 0.0 && score <= 100.0))
        throw DomainError("score outside [0,100]");
    const double floored = std::floor(score);
    if (floored <= 39.0) return ScoreBand::Fail0_39;
    if (floored <= 59.0) return ScoreBand::Fail40_59;
    return ScoreBand::Pass60_100;
}

std::optional<SubBand> sub_band_of(double score) {
    if (band_of(score) != ScoreBand::Pass60_100) return std::nullopt;
    const double floored = std::floor(score);
    if (floored <= 69.0) return SubBand::C;
    if (floored <= 79.0) return SubBand::B;
    if (floored <= 89.0) return SubBand::A;
    return SubBand::APlus;
}

const char* to_string(ScoreBand band) {
    switch (band) {
    case ScoreBand::Fail0_39: return "fail0_39";
    case ScoreBand::Fail40_59: return "fail40_59";
    case ScoreBand::Pass60_100: return "pass60_100";
    }
    return "?";
}

const char* to_string(SubBand band) {
    switch (band) {
    case SubBand::C: return "C";
    case SubBand::B: return "B";
    case SubBand::A: return "A";
    case SubBand::APlus: return "A+";
    }
    return "?";
}

const std::vector<StudentRecord>& ScorePartition::group(ScoreBand band) const {
    switch (band) {
    case ScoreBand::Fail0_39: return fail0_39;
    case ScoreBand::Fail40_59: return fail40_59;
    case ScoreBand::Pass60_100: return pass60_100;
    }
    return pass60_100;
}

ScorePartition partition_by_score_group(const std::vector<StudentRecord>& records) {
    ScorePartition partition;
    for (const auto& record : records) {
        switch (band_of(record.final_exam)) {
        case ScoreBand::Fail0_39: partition.fail0_39.push_back(record); break;
        case ScoreBand::Fail40_59: partition.fail40_59.push_back(record); break;
        case ScoreBand::Pass60_100: partition.pass60_100.push_back(record); break;
        }
    }
    return partition;
}

std::optional<std::size_t> CardAttendance::index_of_student(const StudentId& id) const {
    auto it = std::find(students.begin(), students.end(), id);
    if (it == students.end()) return std::nullopt;
    return static_cast<std::size_t>(it - students.begin());
}

const StudentRecord* Dataset::find_record(const StudentId& id) const {
    for (const auto& record : records)
        if (record.id == id) return &record;
    return nullptr;
}

void validate(const Dataset& dataset) {
    std::unordered_set<std::string> record_ids;
    for (const auto& record : dataset.records) {
        validate_record(record);
        validate_record_counts(record, dataset.session_count());
        if (!record_ids.insert(record.id).second)
            throw DuplicateError("duplicate student record '" + record.id + "'");
    }
    for (const auto& session : dataset.sessions) {
        for (const auto& id : session.students()) {
            if (record_ids.find(id) == record_ids.end())
                throw DataError("student '" + id + "' in session '" + session.session_id() +
                                "' has no record");
        }
    }
    if (dataset.attendance) {
        if (dataset.attendance->sessions.size() != dataset.session_count())
            throw ShapeError("attendance table session count does not match dataset");
        for (const auto& id : dataset.attendance->students) {
            if (record_ids.find(id) == record_ids.end())
                throw DataError("student '" + id + "' in attendance table has no record");
        }
    }
}

} // namespace lcta
