#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lcta/types.hpp"

namespace lcta::report {

struct HistogramSpec {
    double lo = -3.5;
    double hi = 3.5;
    double bin_width = 0.25;

    std::size_t bin_count() const;
    std::size_t bin_of(double value) const; // out-of-range values land in the edge bins
    void validate() const;
};

// Aligned pass/fail histograms of estimated abilities, plus per-group means
// computed over all group members including clamped values.
struct AbilityHistograms {
    HistogramSpec spec;
    std::vector<std::int64_t> pass_counts;
    std::vector<std::int64_t> fail_counts;
    std::optional<double> pass_mean;
    std::optional<double> fail_mean;
};

AbilityHistograms ability_histograms(const std::map<StudentId, double>& abilities,
                                     const std::vector<StudentRecord>& records,
                                     const HistogramSpec& spec = {});

struct ScatterRow {
    StudentId id;
    double theta = 0.0;
    double placement_fundamental = 0.0;
    ScoreBand band = ScoreBand::Pass60_100;
};

struct ScatterTable {
    std::vector<ScatterRow> rows;
    std::size_t dropped_rows = 0; // records without a placement score
};

ScatterTable ability_placement_scatter(const std::map<StudentId, double>& abilities,
                                       const std::vector<StudentRecord>& records);

// Joint counts of (number of LCT successes, number of FPC absences) per
// score group; both axes run 0..T.
struct JointFrequencyTable {
    std::size_t t_sessions = 0;
    // counts[band][successes][absences]
    std::map<ScoreBand, std::vector<std::vector<std::int64_t>>> counts;
    std::map<ScoreBand, std::int64_t> group_sizes;

    // flat per-student form (the scatter reading of the same data)
    struct FlatRow {
        StudentId id;
        int successes = 0;
        int fpc_absences = 0;
        ScoreBand band = ScoreBand::Pass60_100;
    };
    std::vector<FlatRow> flat;
};

JointFrequencyTable lct_fpc_joint(const std::vector<StudentRecord>& records,
                                  std::size_t t_sessions);

// Six reporting bands: the four passing sub-bands plus the two failing bands.
enum class GradeBand : unsigned char { APlus, A, B, C, Fail40_59, Fail0_39 };

inline constexpr std::array<GradeBand, 6> kGradeBands = {
    GradeBand::APlus, GradeBand::A, GradeBand::B,
    GradeBand::C,     GradeBand::Fail40_59, GradeBand::Fail0_39,
};

GradeBand grade_band_of(double score);
const char* to_string(GradeBand band);

// Risk-rule thresholds. The risk flag fires when failures > risk_fail_gt;
// the strong flag fires when successes >= strong_succ_ge. Defaults derive
// from T as risk_fail_gt = ceil(T/2) and strong_succ_ge = ceil(2T/3) + 1,
// which at T = 13 gives failures > 7 and successes >= 10.
struct RuleThresholds {
    int risk_fail_gt = 7;
    int strong_succ_ge = 10;

    static RuleThresholds defaults(std::size_t t_sessions);
};

struct StudentRuleFlags {
    StudentId id;
    int successes = 0;
    int failures = 0;
    bool risk = false;
    bool strong = false;
};

// Frequency of lct_success_count per grade band, plus the per-student rule
// flags.
struct SuccessCountReport {
    std::size_t t_sessions = 0;
    RuleThresholds rules;
    std::map<GradeBand, std::vector<std::int64_t>> counts; // index = success count 0..T
    std::map<GradeBand, std::int64_t> group_sizes;
    std::vector<StudentRuleFlags> flags;
};

SuccessCountReport success_count_report(const std::vector<StudentRecord>& records,
                                        std::size_t t_sessions,
                                        std::optional<RuleThresholds> rules = std::nullopt);

} // namespace lcta::report
