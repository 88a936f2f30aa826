#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lcta/types.hpp"

namespace lcta::classify {

// Observed (pass/fail in the final examination) versus predicted counts.
struct ConfusionMatrix {
    std::int64_t obs_pass_pred_pass = 0;
    std::int64_t obs_pass_pred_fail = 0;
    std::int64_t obs_fail_pred_pass = 0;
    std::int64_t obs_fail_pred_fail = 0;

    std::int64_t obs_pass_total() const { return obs_pass_pred_pass + obs_pass_pred_fail; }
    std::int64_t obs_fail_total() const { return obs_fail_pred_pass + obs_fail_pred_fail; }
    std::int64_t pred_pass_total() const { return obs_pass_pred_pass + obs_fail_pred_pass; }
    std::int64_t pred_fail_total() const { return obs_pass_pred_fail + obs_fail_pred_fail; }
    std::int64_t total() const { return obs_pass_total() + obs_fail_total(); }
};

// Depth-one decision tree over ability values. FailBelow predicts fail for
// abilities strictly below the threshold (an ability equal to the threshold
// predicts pass). FailBelowOrEqual only arises from the degenerate fit where
// every ability is identical and the majority class is fail.
enum class StumpOrientation : unsigned char { FailBelow, FailBelowOrEqual };

struct StumpModel {
    double threshold = 0.0;
    StumpOrientation orientation = StumpOrientation::FailBelow;

    bool predicts_fail(double ability) const {
        return orientation == StumpOrientation::FailBelow ? ability < threshold
                                                          : ability <= threshold;
    }
};

// Threshold minimizing the misclassification count over the midpoints
// between consecutive distinct sorted ability values. Ties choose the lowest
// threshold. labels[i] is true for an observed pass.
StumpModel fit_stump(const std::vector<double>& abilities, const std::vector<bool>& passed);

ConfusionMatrix apply_stump(const StumpModel& model, const std::vector<double>& abilities,
                            const std::vector<bool>& passed);

struct StumpMetrics {
    double misclassification_rate = 0.0;
    std::optional<double> fail_precision; // "hitting ratio"; missing when nothing predicted fail
    std::optional<double> fail_recall;    // missing when nothing observed fail
};

StumpMetrics metrics(const ConfusionMatrix& cm);

// pass label = final examination score in the 60-100 band
std::vector<bool> pass_labels(const std::vector<StudentRecord>& records);

// Report layout: rows observed {pass, fail, total} x columns predicted
// {pass, fail, total}.
std::string confusion_csv(const ConfusionMatrix& cm);

} // namespace lcta::classify
