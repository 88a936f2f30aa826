#include "lcta/attendance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>

#include "lcta/errors.hpp"

namespace lcta::enc {

namespace {

void require_code(int code, const char* what) {
    if (code < 1 || code > 5)
        throw DomainError(std::string(what) + " code " + std::to_string(code) +
                          " outside {1..5}");
}

} // namespace

void CodeMap::validate() const {
    require_code(x_success, "x_success");
    require_code(x_failed, "x_failed");
    require_code(x_not_taken, "x_not_taken");
    require_code(y_present, "y_present");
    require_code(y_absent, "y_absent");
    require_code(y_missing, "y_missing");
    if (x_success != 1 || y_present != 1)
        throw ConfigError("(Success, Present) must map to (1, 1)");
    if (x_not_taken != 5 || y_absent != 5)
        throw ConfigError("(NotTaken, Absent) must map to (5, 5)");
}

int CodeMap::x_of(LctOutcome outcome) const {
    switch (outcome) {
    case LctOutcome::Success: return x_success;
    case LctOutcome::Failed: return x_failed;
    case LctOutcome::NotTaken: return x_not_taken;
    }
    return x_not_taken;
}

int CodeMap::y_of(CardRecord record) const {
    switch (record) {
    case CardRecord::Present: return y_present;
    case CardRecord::Absent: return y_absent;
    case CardRecord::Missing: return y_missing;
    }
    return y_missing;
}

int encode_cell(int x, int y) {
    require_code(x, "x");
    require_code(y, "y");
    return 10 * x + y;
}

std::pair<int, int> decode_cell(int s) {
    const int x = s / 10;
    const int y = s % 10;
    require_code(x, "x");
    require_code(y, "y");
    return {x, y};
}

double ramp_position(int s) {
    decode_cell(s); // validates the range
    return static_cast<double>(s - 11) / 44.0;
}

std::string ramp_hex(int s) {
    const double t = ramp_position(s);
    const int red = static_cast<int>(std::lround(255.0 * t));
    const int green = static_cast<int>(std::lround(255.0 * (1.0 - t)));
    char buffer[8];
    std::snprintf(buffer, sizeof(buffer), "#%02x%02x00", red, green);
    return buffer;
}

std::vector<LctOutcome> derive_lct_outcomes(const ResponseMatrix& matrix,
                                            std::size_t min_correct) {
    if (min_correct == 0) min_correct = (matrix.n_items() + 1) / 2;
    if (min_correct > matrix.n_items())
        throw ConfigError("min_correct exceeds the item count");

    std::vector<LctOutcome> outcomes;
    outcomes.reserve(matrix.n_students());
    for (std::size_t i = 0; i < matrix.n_students(); ++i) {
        std::size_t correct = 0;
        bool all_absent = true;
        for (std::size_t j = 0; j < matrix.n_items(); ++j) {
            const Response response = matrix.at(i, j);
            if (response != Response::Absent) all_absent = false;
            if (response == Response::Correct) ++correct;
        }
        if (all_absent) {
            outcomes.push_back(LctOutcome::NotTaken);
        } else {
            outcomes.push_back(correct >= min_correct ? LctOutcome::Success
                                                      : LctOutcome::Failed);
        }
    }
    return outcomes;
}

std::vector<GroupMatrix> build_group_matrices(const Dataset& dataset, const CodeMap& codemap,
                                              std::size_t min_correct) {
    codemap.validate();
    if (dataset.sessions.empty()) throw EmptyInputError("dataset has no sessions");
    if (!dataset.attendance)
        throw DataError("dataset has no card attendance table");

    // Outcome and card record per (student id, session index).
    struct PerStudent {
        std::vector<LctOutcome> outcomes;
        std::vector<CardRecord> cards;
    };
    const std::size_t t_sessions = dataset.session_count();
    std::unordered_map<std::string, PerStudent> observations;
    for (const auto& record : dataset.records) {
        PerStudent per;
        // Students missing from a session matrix did not take that test and
        // have no card record for it.
        per.outcomes.assign(t_sessions, LctOutcome::NotTaken);
        per.cards.assign(t_sessions, CardRecord::Missing);
        observations.emplace(record.id, std::move(per));
    }

    for (std::size_t t = 0; t < t_sessions; ++t) {
        const auto outcomes = derive_lct_outcomes(dataset.sessions[t], min_correct);
        for (std::size_t i = 0; i < dataset.sessions[t].n_students(); ++i) {
            auto it = observations.find(dataset.sessions[t].students()[i]);
            if (it == observations.end())
                throw DataError("student '" + dataset.sessions[t].students()[i] +
                                "' in session '" + dataset.sessions[t].session_id() +
                                "' has no record");
            it->second.outcomes[t] = outcomes[i];
        }
    }
    const CardAttendance& attendance = *dataset.attendance;
    if (attendance.sessions.size() != t_sessions)
        throw ShapeError("attendance table session count does not match dataset");
    for (std::size_t i = 0; i < attendance.students.size(); ++i) {
        auto it = observations.find(attendance.students[i]);
        if (it == observations.end())
            throw DataError("student '" + attendance.students[i] +
                            "' in attendance table has no record");
        for (std::size_t t = 0; t < t_sessions; ++t)
            it->second.cards[t] = attendance.at(i, t);
    }

    std::vector<std::string> session_ids;
    session_ids.reserve(t_sessions);
    for (const auto& session : dataset.sessions) session_ids.push_back(session.session_id());

    const ScorePartition partition = partition_by_score_group(dataset.records);
    std::vector<GroupMatrix> matrices;
    for (ScoreBand band :
         {ScoreBand::Fail0_39, ScoreBand::Fail40_59, ScoreBand::Pass60_100}) {
        GroupMatrix group;
        group.band = band;
        group.sessions = session_ids;
        for (const auto& record : partition.group(band)) group.students.push_back(record.id);
        std::sort(group.students.begin(), group.students.end());
        group.cells.reserve(group.students.size() * t_sessions);
        for (const auto& id : group.students) {
            const PerStudent& per = observations.at(id);
            for (std::size_t t = 0; t < t_sessions; ++t)
                group.cells.push_back(
                    encode_cell(codemap.x_of(per.outcomes[t]), codemap.y_of(per.cards[t])));
        }
        matrices.push_back(std::move(group));
    }
    return matrices;
}

void export_heatmap(const std::vector<GroupMatrix>& matrices,
                    const std::filesystem::path& out_dir) {
    if (matrices.empty()) throw EmptyInputError("no group matrices to export");
    for (const auto& group : matrices) {
        const std::string stem = std::string("heatmap_") + to_string(group.band);
        for (const bool colors : {false, true}) {
            const auto path = out_dir / (stem + (colors ? "_colors.csv" : ".csv"));
            std::ofstream out(path);
            if (!out) throw IoError("cannot write '" + path.string() + "'");
            out << "student_id";
            for (std::size_t t = 0; t < group.sessions.size(); ++t)
                out << ",session_" << (t + 1);
            out << '\n';
            for (std::size_t i = 0; i < group.students.size(); ++i) {
                out << group.students[i];
                for (std::size_t t = 0; t < group.sessions.size(); ++t) {
                    out << ',';
                    if (colors) {
                        out << ramp_hex(group.at(i, t));
                    } else {
                        out << group.at(i, t);
                    }
                }
                out << '\n';
            }
            if (!out) throw IoError("write failed for '" + path.string() + "'");
        }
    }
}

} // namespace lcta::enc
