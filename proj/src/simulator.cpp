#include "lcta/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "lcta/attendance.hpp"
#include "lcta/errors.hpp"

namespace lcta::sim {

namespace {

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

std::string padded(std::size_t value, std::size_t width) {
    std::string text = std::to_string(value);
    while (text.size() < width) text.insert(text.begin(), '0');
    return text;
}

std::size_t digits(std::size_t value) {
    std::size_t count = 1;
    while (value >= 10) {
        value /= 10;
        ++count;
    }
    return count;
}

// z-scores a driver column in place; a constant column becomes all zeros.
std::vector<double> zscore(const std::vector<double>& values) {
    const auto n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double variance = 0.0;
    for (double v : values) variance += (v - mean) * (v - mean);
    variance /= n;
    std::vector<double> z(values.size(), 0.0);
    if (variance < 1e-16) return z;
    const double sd = std::sqrt(variance);
    for (std::size_t i = 0; i < values.size(); ++i) z[i] = (values[i] - mean) / sd;
    return z;
}

} // namespace

void SimConfig::validate() const {
    if (n_students < 2) throw ConfigError("need at least 2 students");
    if (n_sessions < 1) throw ConfigError("need at least 1 session");
    if (items_per_session < 2) throw ConfigError("need at least 2 items per session");
    if (!(a_min > 0.0 && a_min < a_max)) throw ConfigError("bad discrimination range");
    if (!(b_min < b_max)) throw ConfigError("bad difficulty range");
    for (double p : {ghost_card_prob, fpt_extra_exemption_prob, placement_missing_prob}) {
        if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("probability outside [0,1]");
    }
    if (!(noise_sd >= 0.0)) throw ConfigError("noise_sd must be >= 0");
    if (logistic(absence_intercept) > 0.99)
        throw ConfigError("absence propensity is ~1 for an average student; "
                          "nothing would ever be observed");
    if (min_correct > items_per_session)
        throw ConfigError("min_correct exceeds items_per_session");
}

Response draw_response(std::mt19937_64& engine, double theta,
                       const irt::ItemParameters& params) {
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    return uniform(engine) < irt::prob_2pl(theta, params) ? Response::Correct
                                                          : Response::Incorrect;
}

SimResult simulate(const SimConfig& config) {
    config.validate();

    std::mt19937_64 engine(config.seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);

    const std::size_t n = config.n_students;
    const std::size_t t_sessions = config.n_sessions;
    const std::size_t items = config.items_per_session;

    SimResult result;
    result.truth.theta.resize(n);
    for (double& theta : result.truth.theta) theta = normal(engine);

    result.truth.items.assign(t_sessions, std::vector<irt::ItemParameters>(items));
    for (auto& session_items : result.truth.items) {
        for (auto& params : session_items) {
            params.a = config.a_min + (config.a_max - config.a_min) * uniform(engine);
            params.b = config.b_min + (config.b_max - config.b_min) * uniform(engine);
        }
    }

    const std::size_t id_width = digits(n);
    std::vector<StudentId> student_ids(n);
    for (std::size_t i = 0; i < n; ++i) student_ids[i] = "s" + padded(i + 1, id_width);
    const std::size_t session_width = std::max<std::size_t>(2, digits(t_sessions));
    std::vector<std::string> session_ids(t_sessions);
    for (std::size_t t = 0; t < t_sessions; ++t)
        session_ids[t] = "lct" + padded(t + 1, session_width);

    // Response matrices and card attendance, session by session.
    std::vector<std::vector<Response>> cells(
        t_sessions, std::vector<Response>(n * items, Response::Absent));
    CardAttendance attendance;
    attendance.students = student_ids;
    attendance.sessions = session_ids;
    attendance.cells.assign(n * t_sessions, CardRecord::Absent);
    std::vector<std::vector<bool>> absent(t_sessions, std::vector<bool>(n, false));

    for (std::size_t t = 0; t < t_sessions; ++t) {
        for (std::size_t i = 0; i < n; ++i) {
            const double p_absent = logistic(config.absence_intercept -
                                             config.absence_ability_weight *
                                                 result.truth.theta[i]);
            if (uniform(engine) < p_absent) {
                absent[t][i] = true;
                // the card reader sometimes shows Present for students who
                // exposed their card and disappeared
                if (uniform(engine) < config.ghost_card_prob)
                    attendance.cells[i * t_sessions + t] = CardRecord::Present;
                continue;
            }
            attendance.cells[i * t_sessions + t] = CardRecord::Present;
            for (std::size_t j = 0; j < items; ++j)
                cells[t][i * items + j] =
                    draw_response(engine, result.truth.theta[i], result.truth.items[t][j]);
        }
    }

    std::vector<ItemId> item_ids(items);
    for (std::size_t j = 0; j < items; ++j) item_ids[j] = "q" + std::to_string(j + 1);
    for (std::size_t t = 0; t < t_sessions; ++t)
        result.dataset.sessions.emplace_back(session_ids[t], student_ids, item_ids,
                                             std::move(cells[t]));
    result.dataset.attendance = std::move(attendance);

    // Session outcomes through the same rule the encoder uses.
    std::vector<std::vector<enc::LctOutcome>> outcomes(t_sessions);
    for (std::size_t t = 0; t < t_sessions; ++t)
        outcomes[t] = enc::derive_lct_outcomes(result.dataset.sessions[t], config.min_correct);

    // Per-student counts, FPC behaviour, and score drivers.
    std::vector<double> drv_ability(n), drv_attendance(n), drv_fpc_absence(n),
        drv_fpt(n), drv_success(n);
    std::vector<StudentRecord> records(n);
    for (std::size_t i = 0; i < n; ++i) {
        StudentRecord& record = records[i];
        record.id = student_ids[i];
        int successes = 0, failures = 0, absences = 0, fpc_absences = 0, exemptions = 0;
        for (std::size_t t = 0; t < t_sessions; ++t) {
            switch (outcomes[t][i]) {
            case enc::LctOutcome::Success:
                ++successes;
                ++exemptions; // took the LCT and passed: FPT not required
                continue;
            case enc::LctOutcome::Failed:
                ++failures;
                break;
            case enc::LctOutcome::NotTaken:
                ++absences;
                break;
            }
            // failed or missed: the follow-up program applies
            const double p_attend = logistic(config.fpc_attend_intercept +
                                             config.fpc_attend_ability_weight *
                                                 result.truth.theta[i]);
            if (uniform(engine) >= p_attend) ++fpc_absences;
            if (uniform(engine) < config.fpt_extra_exemption_prob) ++exemptions;
        }
        record.lct_success_count = successes;
        record.lct_failure_count = failures;
        record.class_absence_count = absences;
        record.fpc_absence_count = fpc_absences;
        record.fpt_not_required_count = exemptions;

        drv_ability[i] = result.truth.theta[i];
        drv_attendance[i] =
            1.0 - static_cast<double>(absences) / static_cast<double>(t_sessions);
        drv_fpc_absence[i] = fpc_absences;
        drv_fpt[i] = exemptions;
        drv_success[i] = successes;
    }

    // Placement scores, correlated with ability, occasionally missing.
    for (std::size_t i = 0; i < n; ++i) {
        const double fund_latent =
            0.7 * result.truth.theta[i] + std::sqrt(1.0 - 0.49) * normal(engine);
        const double adv_latent =
            0.6 * result.truth.theta[i] + std::sqrt(1.0 - 0.36) * normal(engine);
        const double fund = std::clamp(std::round(55.0 + 15.0 * fund_latent), 0.0, 100.0);
        const double adv = std::clamp(std::round(50.0 + 18.0 * adv_latent), 0.0, 100.0);
        if (uniform(engine) >= config.placement_missing_prob)
            records[i].placement_fundamental = fund;
        if (uniform(engine) >= config.placement_missing_prob)
            records[i].placement_advanced = adv;
    }

    const auto z_ability = zscore(drv_ability);
    const auto z_attendance = zscore(drv_attendance);
    const auto z_fpc = zscore(drv_fpc_absence);
    const auto z_fpt = zscore(drv_fpt);
    const auto z_success = zscore(drv_success);
    for (std::size_t i = 0; i < n; ++i) {
        const double score = config.score_intercept + config.w_ability * z_ability[i] +
                             config.w_attendance * z_attendance[i] +
                             config.w_fpc_absence * z_fpc[i] + config.w_fpt * z_fpt[i] +
                             config.w_success * z_success[i] +
                             config.noise_sd * normal(engine);
        records[i].final_exam = std::clamp(score, 0.0, 100.0);
    }

    result.dataset.records = std::move(records);
    result.truth.effect_weights = {
        {"lct_ability", config.w_ability},   {"attendance_rate", config.w_attendance},
        {"fpc_absent", config.w_fpc_absence}, {"fpt_not_required", config.w_fpt},
        {"lct_success", config.w_success},
    };
    validate(result.dataset);
    return result;
}

void write_truth_json(const SimConfig& config, const GroundTruth& truth,
                      const std::string& path) {
    nlohmann::json doc;
    doc["config"] = {
        {"n_students", config.n_students},
        {"n_sessions", config.n_sessions},
        {"items_per_session", config.items_per_session},
        {"seed", config.seed},
        {"score_intercept", config.score_intercept},
        {"noise_sd", config.noise_sd},
    };
    doc["effect_weights"] = truth.effect_weights;
    doc["theta"] = truth.theta;
    auto& items = doc["items"];
    items = nlohmann::json::array();
    for (const auto& session_items : truth.items) {
        nlohmann::json row = nlohmann::json::array();
        for (const auto& params : session_items)
            row.push_back({{"a", params.a}, {"b", params.b}});
        items.push_back(std::move(row));
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << doc.dump(2) << '\n';
    if (!out) throw IoError("write failed for '" + path + "'");
}

} // namespace lcta::sim
