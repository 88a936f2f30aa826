#include "lcta/stump.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "lcta/errors.hpp"

namespace lcta::classify {

StumpModel fit_stump(const std::vector<double>& abilities, const std::vector<bool>& passed) {
    if (abilities.size() != passed.size())
        throw ShapeError("abilities and labels differ in length");
    if (abilities.size() < 2) throw DataError("need at least 2 points to fit a stump");

    const std::int64_t n_pass = std::count(passed.begin(), passed.end(), true);
    const std::int64_t n_fail = static_cast<std::int64_t>(passed.size()) - n_pass;
    if (n_pass == 0 || n_fail == 0)
        throw DegenerateLabelsError("both pass and fail labels are required");

    std::vector<std::size_t> order(abilities.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t lhs, std::size_t rhs) {
        return abilities[lhs] < abilities[rhs];
    });

    const bool all_equal = abilities[order.front()] == abilities[order.back()];
    if (all_equal) {
        // No distinct midpoints: the single candidate is the common value,
        // oriented so every prediction matches the majority class.
        StumpModel model;
        model.threshold = abilities[order.front()];
        model.orientation = n_fail > n_pass ? StumpOrientation::FailBelowOrEqual
                                            : StumpOrientation::FailBelow;
        return model;
    }

    // Sweep the sorted points once. At the midpoint after sorted position k,
    // everything at positions <= k is predicted fail, the rest pass.
    std::int64_t fails_below = 0; // observed fails predicted fail so far
    std::int64_t passes_below = 0;
    std::int64_t best_errors = n_fail + n_pass + 1;
    double best_threshold = 0.0;
    for (std::size_t k = 0; k + 1 < order.size(); ++k) {
        if (passed[order[k]]) {
            ++passes_below;
        } else {
            ++fails_below;
        }
        const double lo = abilities[order[k]];
        const double hi = abilities[order[k + 1]];
        if (lo == hi) continue; // not a boundary between distinct values
        const double threshold = (lo + hi) / 2.0;
        const std::int64_t errors = passes_below + (n_fail - fails_below);
        if (errors < best_errors) {
            best_errors = errors;
            best_threshold = threshold;
        }
    }
    return StumpModel{best_threshold, StumpOrientation::FailBelow};
}

ConfusionMatrix apply_stump(const StumpModel& model, const std::vector<double>& abilities,
                            const std::vector<bool>& passed) {
    if (abilities.size() != passed.size())
        throw ShapeError("abilities and labels differ in length");
    if (std::isnan(model.threshold)) throw DomainError("stump threshold is NaN");

    ConfusionMatrix cm;
    for (std::size_t i = 0; i < abilities.size(); ++i) {
        const bool predicted_fail = model.predicts_fail(abilities[i]);
        if (passed[i]) {
            (predicted_fail ? cm.obs_pass_pred_fail : cm.obs_pass_pred_pass)++;
        } else {
            (predicted_fail ? cm.obs_fail_pred_fail : cm.obs_fail_pred_pass)++;
        }
    }
    return cm;
}

StumpMetrics metrics(const ConfusionMatrix& cm) {
    if (cm.total() <= 0) throw DataError("empty confusion matrix");
    StumpMetrics m;
    m.misclassification_rate =
        static_cast<double>(cm.obs_pass_pred_fail + cm.obs_fail_pred_pass) /
        static_cast<double>(cm.total());
    if (cm.pred_fail_total() > 0)
        m.fail_precision = static_cast<double>(cm.obs_fail_pred_fail) /
                           static_cast<double>(cm.pred_fail_total());
    if (cm.obs_fail_total() > 0)
        m.fail_recall = static_cast<double>(cm.obs_fail_pred_fail) /
                        static_cast<double>(cm.obs_fail_total());
    return m;
}

std::vector<bool> pass_labels(const std::vector<StudentRecord>& records) {
    std::vector<bool> labels;
    labels.reserve(records.size());
    for (const auto& record : records)
        labels.push_back(band_of(record.final_exam) == ScoreBand::Pass60_100);
    return labels;
}

std::string confusion_csv(const ConfusionMatrix& cm) {
    std::ostringstream out;
    out << ",predicted_pass,predicted_fail,predicted_total\n";
    out << "observed_pass," << cm.obs_pass_pred_pass << ',' << cm.obs_pass_pred_fail << ','
        << cm.obs_pass_total() << '\n';
    out << "observed_fail," << cm.obs_fail_pred_pass << ',' << cm.obs_fail_pred_fail << ','
        << cm.obs_fail_total() << '\n';
    out << "observed_total," << cm.pred_pass_total() << ',' << cm.pred_fail_total() << ','
        << cm.total() << '\n';
    return out.str();
}

} // namespace lcta::classify
