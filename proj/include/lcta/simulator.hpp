#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "lcta/irt.hpp"
#include "lcta/types.hpp"

namespace lcta::sim {

// Seeded synthetic-cohort generator. Abilities are standard normal; item
// discriminations and difficulties are uniform on the configured ranges;
// responses are Bernoulli draws from the two-parameter logistic curve at the
// true parameters; absences override responses to Absent. The final score is
// an affine function of z-scored drivers plus Gaussian noise, truncated to
// [0, 100], so the configured weights are standardized effect sizes.
struct SimConfig {
    std::size_t n_students = 1043;
    std::size_t n_sessions = 13;
    std::size_t items_per_session = 5;

    double a_min = 0.5;
    double a_max = 2.0;
    double b_min = -2.0;
    double b_max = 2.0;

    // P(absent from a session) = logistic(absence_intercept - absence_ability_weight * theta)
    double absence_intercept = -2.5;
    double absence_ability_weight = 1.0;
    // chance the card reader still shows Present for a session the student skipped
    double ghost_card_prob = 0.05;

    // session pass rule: correct count >= min_correct (0 selects the majority rule)
    std::size_t min_correct = 0;

    // P(attend FPC | LCT failed or missed) = logistic(fpc_attend_intercept
    //                                                 + fpc_attend_ability_weight * theta)
    double fpc_attend_intercept = 0.3;
    double fpc_attend_ability_weight = 1.2;
    // chance a failed/missed session is exempted from the FPT anyway
    double fpt_extra_exemption_prob = 0.08;

    // chance a placement score is missing from the records
    double placement_missing_prob = 0.02;

    // final score = score_intercept + sum of weight * z(driver) + noise, in [0, 100]
    double score_intercept = 73.0;
    double w_ability = 5.0;
    double w_attendance = 4.0;     // driver: attended sessions / T
    double w_fpc_absence = -3.0;   // driver: fpc_absence_count
    double w_fpt = 7.0;            // driver: fpt_not_required_count
    double w_success = 0.0;        // driver: lct_success_count
    double noise_sd = 8.0;

    std::uint64_t seed = 1;

    void validate() const;
};

struct GroundTruth {
    std::vector<double> theta;                              // by student index
    std::vector<std::vector<irt::ItemParameters>> items;    // [session][item]
    std::map<std::string, double> effect_weights;           // standardized score weights
};

struct SimResult {
    Dataset dataset;
    GroundTruth truth;
};

SimResult simulate(const SimConfig& config);

// Single Bernoulli response draw at the true parameters; exposed so tests can
// check the empirical rate against prob_2pl directly.
Response draw_response(std::mt19937_64& engine, double theta,
                       const irt::ItemParameters& params);

// Ground truth JSON, written beside the dataset but never read by the
// analysis modules.
void write_truth_json(const SimConfig& config, const GroundTruth& truth,
                      const std::string& path);

} // namespace lcta::sim
