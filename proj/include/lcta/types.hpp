#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lcta/errors.hpp"

namespace lcta {

using StudentId = std::string;
using ItemId = std::string;

// One graded cell of a response matrix. Absent is kept distinct at the data
// level; likelihood code scores it as a failure (delta = 0).
enum class Response : unsigned char { Correct, Incorrect, Absent };

char response_code(Response r);               // '1' / '0' / 'A'
Response response_from_code(char c);          // throws FormatError on unknown code

// Rectangular student x item record of one testing session.
//
// Construction validates rectangularity and identifier uniqueness. The
// dataset-level minimums (at least two students and two items) are enforced
// at ingestion and by the estimators, so tests and intermediate code may
// build smaller matrices.
class ResponseMatrix {
public:
    ResponseMatrix(std::string session_id,
                   std::vector<StudentId> students,
                   std::vector<ItemId> items,
                   std::vector<Response> cells);

    const std::string& session_id() const { return session_id_; }
    const std::vector<StudentId>& students() const { return students_; }
    const std::vector<ItemId>& items() const { return items_; }

    std::size_t n_students() const { return students_.size(); }
    std::size_t n_items() const { return items_.size(); }

    Response at(std::size_t student, std::size_t item) const {
        return cells_[student * items_.size() + item];
    }

    // delta of Eq.-style scoring: Correct -> 1, Incorrect/Absent -> 0.
    double delta(std::size_t student, std::size_t item) const {
        return at(student, item) == Response::Correct ? 1.0 : 0.0;
    }

    std::optional<std::size_t> index_of_student(const StudentId& id) const;

    bool operator==(const ResponseMatrix&) const = default;

private:
    std::string session_id_;
    std::vector<StudentId> students_;
    std::vector<ItemId> items_;
    std::vector<Response> cells_; // row-major
};

// Concatenates session matrices column-wise into one wide matrix.
// Students are the union across sessions in first-appearance order; items are
// namespaced "<session_id>:<item_id>"; cells missing for a student/session
// pair become Absent.
ResponseMatrix pool_sessions(const std::vector<ResponseMatrix>& sessions);

// One row of the student table: placement scores, final examination score,
// and the per-semester counts used by the regression and the reports.
struct StudentRecord {
    StudentId id;
    std::optional<double> placement_fundamental; // 0-100, may be missing
    std::optional<double> placement_advanced;    // 0-100, may be missing
    double final_exam = 0.0;                     // 0-100, required
    int lct_success_count = 0;
    int lct_failure_count = 0;
    int class_absence_count = 0;
    int fpc_absence_count = 0;
    int fpt_not_required_count = 0;
};

// Range and sign checks that do not need the session count.
void validate_record(const StudentRecord& record);

// Count checks against the session count T.
void validate_record_counts(const StudentRecord& record, std::size_t t_sessions);

// Final-examination score bands. Boundaries are integer-inclusive;
// non-integer scores are floored before banding.
enum class ScoreBand : unsigned char { Fail0_39, Fail40_59, Pass60_100 };

// Sub-bands of the passing range.
enum class SubBand : unsigned char { C, B, A, APlus };

ScoreBand band_of(double score);                    // throws DomainError outside [0,100]
std::optional<SubBand> sub_band_of(double score);   // none below 60

const char* to_string(ScoreBand band);
const char* to_string(SubBand band);

struct ScorePartition {
    std::vector<StudentRecord> fail0_39;
    std::vector<StudentRecord> fail40_59;
    std::vector<StudentRecord> pass60_100;

    const std::vector<StudentRecord>& group(ScoreBand band) const;
};

// Splits records into the three score groups, preserving input order.
ScorePartition partition_by_score_group(const std::vector<StudentRecord>& records);

// Electric-card attendance per (student, session). Missing means the card
// system produced no record at all.
enum class CardRecord : unsigned char { Present, Absent, Missing };

struct CardAttendance {
    std::vector<StudentId> students;
    std::vector<std::string> sessions; // session ids, column order
    std::vector<CardRecord> cells;     // row-major

    CardRecord at(std::size_t student, std::size_t session) const {
        return cells[student * sessions.size() + session];
    }
    std::optional<std::size_t> index_of_student(const StudentId& id) const;
};

// Everything one cohort produced: per-session response matrices, the student
// table, and (when available) the card attendance table. The session count T
// is a dataset property, not a constant.
struct Dataset {
    std::vector<ResponseMatrix> sessions;
    std::vector<StudentRecord> records;
    std::optional<CardAttendance> attendance;

    std::size_t session_count() const { return sessions.size(); }
    const StudentRecord* find_record(const StudentId& id) const;
};

// Dataset-wide invariants: every student appearing in a matrix has a record,
// records are unique, and counts fit the session count.
void validate(const Dataset& dataset);

} // namespace lcta
