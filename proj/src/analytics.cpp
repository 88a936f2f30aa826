#include "lcta/analytics.hpp"

#include <algorithm>
#include <cmath>

#include "lcta/errors.hpp"
#include "lcta/log.hpp"

namespace lcta::report {

void HistogramSpec::validate() const {
    if (!(lo < hi)) throw ConfigError("histogram range is degenerate");
    if (!(bin_width > 0.0)) throw ConfigError("bin width must be > 0");
}

std::size_t HistogramSpec::bin_count() const {
    return static_cast<std::size_t>(std::ceil((hi - lo) / bin_width));
}

std::size_t HistogramSpec::bin_of(double value) const {
    const auto bins = static_cast<long>(bin_count());
    auto index = static_cast<long>(std::floor((value - lo) / bin_width));
    index = std::max(0L, std::min(bins - 1, index));
    return static_cast<std::size_t>(index);
}

AbilityHistograms ability_histograms(const std::map<StudentId, double>& abilities,
                                     const std::vector<StudentRecord>& records,
                                     const HistogramSpec& spec) {
    spec.validate();
    AbilityHistograms result;
    result.spec = spec;
    result.pass_counts.assign(spec.bin_count(), 0);
    result.fail_counts.assign(spec.bin_count(), 0);

    double pass_sum = 0.0, fail_sum = 0.0;
    std::int64_t pass_n = 0, fail_n = 0;
    for (const auto& record : records) {
        auto it = abilities.find(record.id);
        if (it == abilities.end())
            throw DataError("no ability estimate for student '" + record.id + "'");
        const bool passed = band_of(record.final_exam) == ScoreBand::Pass60_100;
        const std::size_t bin = spec.bin_of(it->second);
        if (passed) {
            ++result.pass_counts[bin];
            pass_sum += it->second;
            ++pass_n;
        } else {
            ++result.fail_counts[bin];
            fail_sum += it->second;
            ++fail_n;
        }
    }
    if (pass_n > 0) result.pass_mean = pass_sum / static_cast<double>(pass_n);
    if (fail_n > 0) result.fail_mean = fail_sum / static_cast<double>(fail_n);
    return result;
}

ScatterTable ability_placement_scatter(const std::map<StudentId, double>& abilities,
                                       const std::vector<StudentRecord>& records) {
    ScatterTable table;
    for (const auto& record : records) {
        auto it = abilities.find(record.id);
        if (it == abilities.end())
            throw DataError("no ability estimate for student '" + record.id + "'");
        if (!record.placement_fundamental) {
            ++table.dropped_rows;
            continue;
        }
        table.rows.push_back(ScatterRow{record.id, it->second,
                                        *record.placement_fundamental,
                                        band_of(record.final_exam)});
    }
    if (table.dropped_rows > 0)
        log::info("scatter dropped " + std::to_string(table.dropped_rows) +
                  " record(s) without a fundamental placement score");
    return table;
}

JointFrequencyTable lct_fpc_joint(const std::vector<StudentRecord>& records,
                                  std::size_t t_sessions) {
    if (t_sessions < 1) throw ConfigError("session count must be >= 1");
    JointFrequencyTable table;
    table.t_sessions = t_sessions;
    const std::size_t axis = t_sessions + 1;
    for (ScoreBand band :
         {ScoreBand::Fail0_39, ScoreBand::Fail40_59, ScoreBand::Pass60_100}) {
        table.counts[band].assign(axis, std::vector<std::int64_t>(axis, 0));
        table.group_sizes[band] = 0;
    }
    for (const auto& record : records) {
        if (record.lct_success_count < 0 ||
            record.lct_success_count > static_cast<int>(t_sessions))
            throw DataError("lct_success out of [0,T] for student '" + record.id + "'");
        if (record.fpc_absence_count < 0 ||
            record.fpc_absence_count > static_cast<int>(t_sessions))
            throw DataError("fpc_absent out of [0,T] for student '" + record.id + "'");
        const ScoreBand band = band_of(record.final_exam);
        ++table.counts[band][static_cast<std::size_t>(record.lct_success_count)]
                      [static_cast<std::size_t>(record.fpc_absence_count)];
        ++table.group_sizes[band];
        table.flat.push_back(JointFrequencyTable::FlatRow{
            record.id, record.lct_success_count, record.fpc_absence_count, band});
    }
    return table;
}

GradeBand grade_band_of(double score) {
    const auto sub = sub_band_of(score);
    if (sub) {
        switch (*sub) {
        case SubBand::APlus: return GradeBand::APlus;
        case SubBand::A: return GradeBand::A;
        case SubBand::B: return GradeBand::B;
        case SubBand::C: return GradeBand::C;
        }
    }
    return band_of(score) == ScoreBand::Fail40_59 ? GradeBand::Fail40_59
                                                  : GradeBand::Fail0_39;
}

const char* to_string(GradeBand band) {
    switch (band) {
    case GradeBand::APlus: return "A+";
    case GradeBand::A: return "A";
    case GradeBand::B: return "B";
    case GradeBand::C: return "C";
    case GradeBand::Fail40_59: return "fail40_59";
    case GradeBand::Fail0_39: return "fail0_39";
    }
    return "?";
}

RuleThresholds RuleThresholds::defaults(std::size_t t_sessions) {
    const auto t = static_cast<double>(t_sessions);
    RuleThresholds thresholds;
    thresholds.risk_fail_gt = static_cast<int>(std::ceil(t / 2.0));
    thresholds.strong_succ_ge = static_cast<int>(std::ceil(2.0 * t / 3.0)) + 1;
    return thresholds;
}

SuccessCountReport success_count_report(const std::vector<StudentRecord>& records,
                                        std::size_t t_sessions,
                                        std::optional<RuleThresholds> rules) {
    if (t_sessions < 1) throw ConfigError("session count must be >= 1");
    SuccessCountReport report;
    report.t_sessions = t_sessions;
    report.rules = rules.value_or(RuleThresholds::defaults(t_sessions));
    for (GradeBand band : kGradeBands) {
        report.counts[band].assign(t_sessions + 1, 0);
        report.group_sizes[band] = 0;
    }
    for (const auto& record : records) {
        if (record.lct_success_count > static_cast<int>(t_sessions) ||
            record.lct_failure_count > static_cast<int>(t_sessions) ||
            record.lct_success_count + record.lct_failure_count >
                static_cast<int>(t_sessions))
            throw DataError("LCT counts inconsistent with session count for student '" +
                            record.id + "'");
        const GradeBand band = grade_band_of(record.final_exam);
        ++report.counts[band][static_cast<std::size_t>(record.lct_success_count)];
        ++report.group_sizes[band];
        StudentRuleFlags flags;
        flags.id = record.id;
        flags.successes = record.lct_success_count;
        flags.failures = record.lct_failure_count;
        flags.risk = record.lct_failure_count > report.rules.risk_fail_gt;
        flags.strong = record.lct_success_count >= report.rules.strong_succ_ge;
        report.flags.push_back(std::move(flags));
    }
    return report;
}

} // namespace lcta::report
