#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lcta/types.hpp"

namespace lcta::enc {

// Session-level outcome of one student's learning check testing.
enum class LctOutcome : unsigned char { Success, Failed, NotTaken };

// Maps raw (LCT outcome, card record) observations onto the (x, y) code grid
// of s = 10x + y. The endpoints are fixed: (Success, Present) -> (1, 1),
// "absolutely attended", and (NotTaken, Absent) -> (5, 5), "absolutely
// absent". The interior codes are configurable; a missing card record is
// encoded through an explicit rule, never silently defaulted.
struct CodeMap {
    int x_success = 1;
    int x_failed = 3;
    int x_not_taken = 5;
    int y_present = 1;
    int y_absent = 5;
    int y_missing = 5;

    void validate() const;
    int x_of(LctOutcome outcome) const;
    int y_of(CardRecord record) const;
};

// s = 10x + y for codes in {1..5}.
int encode_cell(int x, int y);

// (x, y) = (s div 10, s mod 10); inverse of encode_cell on the code grid.
std::pair<int, int> decode_cell(int s);

// Linear position of s on the green-to-red ramp: 11 -> 0.0, 55 -> 1.0.
double ramp_position(int s);

// Hex color on the green-to-red ramp, e.g. 11 -> "#00ff00", 55 -> "#ff0000".
std::string ramp_hex(int s);

// Session outcomes for every student of one session matrix. A row of all
// Absent cells is NotTaken; otherwise Success iff the number of correct
// responses reaches min_correct (0 selects the majority rule, ceil(n/2)).
std::vector<LctOutcome> derive_lct_outcomes(const ResponseMatrix& matrix,
                                            std::size_t min_correct = 0);

// One score group's student x session matrix of s values, rows ordered by
// student id, columns by session order.
struct GroupMatrix {
    ScoreBand band = ScoreBand::Pass60_100;
    std::vector<StudentId> students;
    std::vector<std::string> sessions;
    std::vector<int> cells; // row-major

    int at(std::size_t student, std::size_t session) const {
        return cells[student * sessions.size() + session];
    }
};

// Builds the three group matrices from a dataset with response matrices and
// a card attendance table.
std::vector<GroupMatrix> build_group_matrices(const Dataset& dataset,
                                              const CodeMap& codemap = {},
                                              std::size_t min_correct = 0);

// Writes heatmap_<group>.csv with s values and heatmap_<group>_colors.csv
// with the hex ramp colors into out_dir.
void export_heatmap(const std::vector<GroupMatrix>& matrices,
                    const std::filesystem::path& out_dir);

} // namespace lcta::enc
