#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lcta/types.hpp"

namespace lcta::irt {

// Discrimination (slope) and difficulty (location) of one item's logistic
// response curve.
struct ItemParameters {
    double a = 1.0;
    double b = 0.0;
};

struct AbilityEstimate {
    double theta = 0.0;
    bool converged = false;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double clamp(double x) const { return x < lo ? lo : (x > hi ? hi : x); }
    bool contains(double x) const { return x >= lo && x <= hi; }
};

struct CalibrationConfig {
    int max_sweeps = 200;
    double tolerance = 1e-6; // absolute log-likelihood change
    Interval ability_bounds{-3.0, 3.0};
    Interval a_bounds{0.1, 4.0};
    Interval b_bounds{-4.0, 4.0};
    double scaling_constant = 1.7;

    void validate() const;
};

// Two-parameter logistic response probability
// P = 1 / (1 + exp(-scaling * a * (theta - b))).
double prob_2pl(double theta, const ItemParameters& params, double scaling = 1.7);

// Joint log-likelihood of a response matrix: sum over cells of
// delta*ln P + (1-delta)*ln Q, Absent scored as delta = 0.
double log_likelihood(const ResponseMatrix& matrix,
                      const std::vector<AbilityEstimate>& thetas,
                      const std::vector<ItemParameters>& items,
                      double scaling = 1.7);

struct LogLikelihoodGradients {
    std::vector<double> d_theta; // one per student
    std::vector<double> d_a;     // one per item
    std::vector<double> d_b;     // one per item
};

LogLikelihoodGradients log_likelihood_gradients(const ResponseMatrix& matrix,
                                                const std::vector<AbilityEstimate>& thetas,
                                                const std::vector<ItemParameters>& items,
                                                double scaling = 1.7);

struct CalibrationDiagnostics {
    int sweeps = 0;
    bool converged = false;
    double initial_log_likelihood = 0.0;
    double final_log_likelihood = 0.0;
    std::vector<double> sweep_log_likelihoods; // recorded at the end of each sweep
    int clamped_abilities = 0;                 // thetas at the ability bounds
    int clamped_items = 0;                     // items with a or b at their bounds
    std::vector<ItemId> excluded_items;        // all-correct / all-incorrect columns
    std::vector<std::size_t> excluded_item_indices;
};

struct CalibrationResult {
    std::vector<AbilityEstimate> abilities; // aligned with matrix.students()
    std::vector<ItemParameters> items;      // aligned with matrix.items()
    std::vector<bool> item_included;        // false for excluded columns
    CalibrationDiagnostics diagnostics;
};

// Joint maximum-likelihood calibration: alternating bounded Newton updates of
// abilities and item parameters, with the ability scale fixed each sweep by
// standardizing interior thetas to mean 0 / variance 1 and absorbing the
// affine change into the item parameters. Finishes with a bounded per-student
// re-fit against the final items, so extreme response patterns land exactly
// on the ability bounds.
CalibrationResult estimate_joint(const ResponseMatrix& matrix,
                                 const CalibrationConfig& config = {});

// Per-student bounded Newton MLE with item parameters held fixed.
std::vector<AbilityEstimate> estimate_abilities_fixed_items(
    const ResponseMatrix& matrix,
    const std::vector<ItemParameters>& items,
    const CalibrationConfig& config = {});

// Calibration output file: arrays of {item_id, a, b} and
// {student_id, theta, converged} plus a diagnostics block.
void write_calibration_json(const ResponseMatrix& matrix,
                            const CalibrationResult& result,
                            const std::string& path);

struct CalibrationFile {
    std::vector<std::pair<ItemId, ItemParameters>> items;
    std::vector<std::pair<StudentId, AbilityEstimate>> abilities;
};

CalibrationFile read_calibration_json(const std::string& path);

} // namespace lcta::irt
