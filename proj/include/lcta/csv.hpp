#pragma once

#include <filesystem>
#include <vector>

#include "lcta/types.hpp"

namespace lcta {

// Response CSV: header "student_id,<item_id>...", cells 1 / 0 / A.
ResponseMatrix ingest_responses(const std::filesystem::path& path,
                                const std::string& session_id);
void write_responses(const ResponseMatrix& matrix, const std::filesystem::path& path);

// Student-record CSV. Header is fixed:
// student_id,placement_fund,placement_adv,final_exam,lct_success,lct_fail,
// class_absent,fpc_absent,fpt_not_required. Empty field = missing.
std::vector<StudentRecord> ingest_records(const std::filesystem::path& path);
void write_records(const std::vector<StudentRecord>& records,
                   const std::filesystem::path& path);

// Card-attendance CSV: header "student_id,<session_id>...", cells P / A,
// empty = missing record.
CardAttendance ingest_attendance(const std::filesystem::path& path);
void write_attendance(const CardAttendance& attendance,
                      const std::filesystem::path& path);

} // namespace lcta
