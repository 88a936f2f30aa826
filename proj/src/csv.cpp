#include "lcta/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "lcta/errors.hpp"

namespace lcta {

namespace {

std::string trim(const std::string& s) {
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && (s[begin] == ' ' || s[begin] == '\t')) ++begin;
    while (end > begin && (s[end - 1] == ' ' || s[end - 1] == '\t' || s[end - 1] == '\r')) --end;
    return s.substr(begin, end - begin);
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file '" + path.string() + "'");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        lines.push_back(line);
    }
    return lines;
}

double parse_score(const std::string& field, const std::filesystem::path& path,
                   std::size_t row) {
    try {
        std::size_t used = 0;
        const double value = std::stod(field, &used);
        if (used != field.size()) throw std::invalid_argument(field);
        return value;
    } catch (const std::exception&) {
        throw FormatError("bad numeric field '" + field + "' in '" + path.string() +
                          "' row " + std::to_string(row));
    }
}

int parse_count(const std::string& field, const std::filesystem::path& path,
                std::size_t row) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size())
        throw FormatError("bad integer field '" + field + "' in '" + path.string() +
                          "' row " + std::to_string(row));
    return value;
}

std::string format_score(double value) {
    // Integral scores print without a decimal point; fractional scores keep
    // enough digits to round-trip.
    if (value == std::floor(value) && std::abs(value) < 1e15) {
        return std::to_string(static_cast<long long>(value));
    }
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

} // namespace

ResponseMatrix ingest_responses(const std::filesystem::path& path,
                                const std::string& session_id) {
    const auto lines = read_lines(path);
    if (lines.empty()) throw EmptyInputError("empty response file '" + path.string() + "'");

    const auto header = split_line(lines[0]);
    if (header.size() < 2 || header[0] != "student_id")
        throw FormatError("response header must start with student_id in '" + path.string() + "'");
    std::vector<ItemId> items(header.begin() + 1, header.end());

    if (lines.size() < 2)
        throw EmptyInputError("response file '" + path.string() + "' has no data rows");

    std::vector<StudentId> students;
    std::vector<Response> cells;
    std::unordered_set<std::string> seen;
    for (std::size_t row = 1; row < lines.size(); ++row) {
        const auto fields = split_line(lines[row]);
        if (fields.size() != items.size() + 1)
            throw FormatError("ragged row " + std::to_string(row + 1) + " in '" +
                              path.string() + "' (expected " + std::to_string(items.size() + 1) +
                              " fields, got " + std::to_string(fields.size()) + ")");
        if (fields[0].empty())
            throw FormatError("empty student_id at row " + std::to_string(row + 1) + " in '" +
                              path.string() + "'");
        if (!seen.insert(fields[0]).second)
            throw DuplicateError("duplicate student_id '" + fields[0] + "' in '" +
                                 path.string() + "'");
        students.push_back(fields[0]);
        for (std::size_t j = 1; j < fields.size(); ++j) {
            if (fields[j].size() != 1)
                throw FormatError("bad cell '" + fields[j] + "' at row " +
                                  std::to_string(row + 1) + " in '" + path.string() + "'");
            try {
                cells.push_back(response_from_code(fields[j][0]));
            } catch (const FormatError&) {
                throw FormatError("unknown response code '" + fields[j] + "' at row " +
                                  std::to_string(row + 1) + " in '" + path.string() + "'");
            }
        }
    }

    if (students.size() < 2)
        throw DataError("response file '" + path.string() + "' has fewer than 2 students");
    if (items.size() < 2)
        throw DataError("response file '" + path.string() + "' has fewer than 2 items");
    return ResponseMatrix(session_id, std::move(students), std::move(items), std::move(cells));
}

void write_responses(const ResponseMatrix& matrix, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << "student_id";
    for (const auto& item : matrix.items()) out << ',' << item;
    out << '\n';
    for (std::size_t i = 0; i < matrix.n_students(); ++i) {
        out << matrix.students()[i];
        for (std::size_t j = 0; j < matrix.n_items(); ++j)
            out << ',' << response_code(matrix.at(i, j));
        out << '\n';
    }
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

namespace {

const char* kRecordHeader =
    "student_id,placement_fund,placement_adv,final_exam,lct_success,lct_fail,"
    "class_absent,fpc_absent,fpt_not_required";

} // namespace

std::vector<StudentRecord> ingest_records(const std::filesystem::path& path) {
    const auto lines = read_lines(path);
    if (lines.empty()) throw EmptyInputError("empty record file '" + path.string() + "'");

    const auto header = split_line(lines[0]);
    const auto expected = split_line(kRecordHeader);
    if (header != expected)
        throw FormatError("record header mismatch in '" + path.string() + "'");

    std::vector<StudentRecord> records;
    std::unordered_set<std::string> seen;
    for (std::size_t row = 1; row < lines.size(); ++row) {
        const auto fields = split_line(lines[row]);
        if (fields.size() != expected.size())
            throw FormatError("ragged row " + std::to_string(row + 1) + " in '" +
                              path.string() + "'");
        StudentRecord record;
        record.id = fields[0];
        if (record.id.empty())
            throw FormatError("empty student_id at row " + std::to_string(row + 1) + " in '" +
                              path.string() + "'");
        if (!seen.insert(record.id).second)
            throw DuplicateError("duplicate student_id '" + record.id + "' in '" +
                                 path.string() + "'");
        if (!fields[1].empty())
            record.placement_fundamental = parse_score(fields[1], path, row + 1);
        if (!fields[2].empty())
            record.placement_advanced = parse_score(fields[2], path, row + 1);
        if (fields[3].empty())
            throw FormatError("missing final_exam at row " + std::to_string(row + 1) + " in '" +
                              path.string() + "'");
        record.final_exam = parse_score(fields[3], path, row + 1);
        record.lct_success_count = parse_count(fields[4], path, row + 1);
        record.lct_failure_count = parse_count(fields[5], path, row + 1);
        record.class_absence_count = parse_count(fields[6], path, row + 1);
        record.fpc_absence_count = parse_count(fields[7], path, row + 1);
        record.fpt_not_required_count = parse_count(fields[8], path, row + 1);
        validate_record(record);
        records.push_back(std::move(record));
    }
    if (records.empty())
        throw EmptyInputError("record file '" + path.string() + "' has no data rows");
    return records;
}

void write_records(const std::vector<StudentRecord>& records,
                   const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << kRecordHeader << '\n';
    for (const auto& r : records) {
        out << r.id << ',';
        if (r.placement_fundamental) out << format_score(*r.placement_fundamental);
        out << ',';
        if (r.placement_advanced) out << format_score(*r.placement_advanced);
        out << ',' << format_score(r.final_exam) << ',' << r.lct_success_count << ','
            << r.lct_failure_count << ',' << r.class_absence_count << ',' << r.fpc_absence_count
            << ',' << r.fpt_not_required_count << '\n';
    }
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

CardAttendance ingest_attendance(const std::filesystem::path& path) {
    const auto lines = read_lines(path);
    if (lines.empty()) throw EmptyInputError("empty attendance file '" + path.string() + "'");

    const auto header = split_line(lines[0]);
    if (header.size() < 2 || header[0] != "student_id")
        throw FormatError("attendance header must start with student_id in '" +
                          path.string() + "'");

    CardAttendance table;
    table.sessions.assign(header.begin() + 1, header.end());
    std::unordered_set<std::string> seen;
    for (std::size_t row = 1; row < lines.size(); ++row) {
        const auto fields = split_line(lines[row]);
        if (fields.size() != header.size())
            throw FormatError("ragged row " + std::to_string(row + 1) + " in '" +
                              path.string() + "'");
        if (!seen.insert(fields[0]).second)
            throw DuplicateError("duplicate student_id '" + fields[0] + "' in '" +
                                 path.string() + "'");
        table.students.push_back(fields[0]);
        for (std::size_t j = 1; j < fields.size(); ++j) {
            if (fields[j].empty()) {
                table.cells.push_back(CardRecord::Missing);
            } else if (fields[j] == "P") {
                table.cells.push_back(CardRecord::Present);
            } else if (fields[j] == "A") {
                table.cells.push_back(CardRecord::Absent);
            } else {
                throw FormatError("unknown attendance code '" + fields[j] + "' at row " +
                                  std::to_string(row + 1) + " in '" + path.string() + "'");
            }
        }
    }
    if (table.students.empty())
        throw EmptyInputError("attendance file '" + path.string() + "' has no data rows");
    return table;
}

void write_attendance(const CardAttendance& attendance, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << "student_id";
    for (const auto& session : attendance.sessions) out << ',' << session;
    out << '\n';
    for (std::size_t i = 0; i < attendance.students.size(); ++i) {
        out << attendance.students[i];
        for (std::size_t j = 0; j < attendance.sessions.size(); ++j) {
            out << ',';
            switch (attendance.at(i, j)) {
            case CardRecord::Present: out << 'P'; break;
            case CardRecord::Absent: out << 'A'; break;
            case CardRecord::Missing: break;
            }
        }
        out << '\n';
    }
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

} // namespace lcta
