#include "lcta/irt.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "lcta/errors.hpp"
#include "lcta/log.hpp"

namespace lcta::irt {

namespace {

// log(1 + e^x) without overflow.
double log1pexp(double x) {
    if (x > 0.0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

// Per-cell log-likelihood term: delta*ln P + (1-delta)*ln Q for
// z = scaling*a*(theta-b). Uses ln P = -log1pexp(-z), ln Q = -log1pexp(z).
double cell_loglik(double z, double delta) {
    return delta > 0.5 ? -log1pexp(-z) : -log1pexp(z);
}

struct Workspace {
    const ResponseMatrix& matrix;
    const std::vector<bool>& included;
    double scaling;

    double student_loglik(std::size_t i, double theta,
                          const std::vector<ItemParameters>& items) const {
        double total = 0.0;
        for (std::size_t j = 0; j < matrix.n_items(); ++j) {
            if (!included[j]) continue;
            const double z = scaling * items[j].a * (theta - items[j].b);
            total += cell_loglik(z, matrix.delta(i, j));
        }
        return total;
    }

    double item_loglik(std::size_t j, double a, double b,
                       const std::vector<double>& thetas) const {
        double total = 0.0;
        for (std::size_t i = 0; i < matrix.n_students(); ++i) {
            const double z = scaling * a * (thetas[i] - b);
            total += cell_loglik(z, matrix.delta(i, j));
        }
        return total;
    }

    double total_loglik(const std::vector<double>& thetas,
                        const std::vector<ItemParameters>& items) const {
        double total = 0.0;
        for (std::size_t i = 0; i < matrix.n_students(); ++i)
            total += student_loglik(i, thetas[i], items);
        return total;
    }
};

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double clamped_logit(double p, const Interval& bounds) {
    if (p <= 0.0) return bounds.lo;
    if (p >= 1.0) return bounds.hi;
    return bounds.clamp(std::log(p / (1.0 - p)));
}

constexpr int kMaxInnerIterations = 30;
constexpr int kMaxHalvings = 30;
constexpr double kStepTolerance = 1e-11;
constexpr double kGradientTolerance = 1e-10;

// Bounded one-dimensional Newton ascent of a student's log-likelihood with
// items fixed. Proposals are clamped into the ability bounds; a step is
// accepted only if it does not decrease the student's log-likelihood.
double newton_theta(const Workspace& ws, std::size_t i, double theta,
                    const std::vector<ItemParameters>& items, const Interval& bounds,
                    bool* converged) {
    if (converged) *converged = false;
    double current_ll = ws.student_loglik(i, theta, items);
    for (int iter = 0; iter < kMaxInnerIterations; ++iter) {
        double g = 0.0;
        double h = 0.0;
        for (std::size_t j = 0; j < ws.matrix.n_items(); ++j) {
            if (!ws.included[j]) continue;
            const double da = ws.scaling * items[j].a;
            const double p = logistic(da * (theta - items[j].b));
            g += da * (ws.matrix.delta(i, j) - p);
            h -= da * da * p * (1.0 - p);
        }
        if (std::abs(g) < kGradientTolerance) {
            if (converged) *converged = true;
            break;
        }
        double step = (h < -1e-300) ? -g / h : (g > 0.0 ? 1.0 : -1.0);
        bool accepted = false;
        for (int halving = 0; halving < kMaxHalvings; ++halving) {
            const double candidate = bounds.clamp(theta + step);
            const double candidate_ll = ws.student_loglik(i, candidate, items);
            if (candidate_ll >= current_ll) {
                if (std::abs(candidate - theta) < kStepTolerance) {
                    theta = candidate;
                    current_ll = candidate_ll;
                    if (converged) *converged = true;
                    return theta;
                }
                theta = candidate;
                current_ll = candidate_ll;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break; // boundary or numerically flat: no improving step
    }
    return theta;
}

// Bounded two-dimensional Newton ascent of one item's log-likelihood with
// abilities fixed. Falls back to a scaled gradient direction when the
// Hessian is not negative definite.
ItemParameters newton_item(const Workspace& ws, std::size_t j, ItemParameters params,
                           const std::vector<double>& thetas, const Interval& a_bounds,
                           const Interval& b_bounds) {
    const double d = ws.scaling;
    double current_ll = ws.item_loglik(j, params.a, params.b, thetas);
    for (int iter = 0; iter < kMaxInnerIterations; ++iter) {
        double ga = 0.0, gb = 0.0, haa = 0.0, hbb = 0.0, hab = 0.0;
        for (std::size_t i = 0; i < ws.matrix.n_students(); ++i) {
            const double centered = thetas[i] - params.b;
            const double p = logistic(d * params.a * centered);
            const double residual = ws.matrix.delta(i, j) - p;
            const double pq = p * (1.0 - p);
            ga += d * centered * residual;
            gb += -d * params.a * residual;
            haa -= d * d * centered * centered * pq;
            hbb -= d * d * params.a * params.a * pq;
            hab += d * d * params.a * centered * pq - d * residual;
        }
        if (std::abs(ga) < kGradientTolerance && std::abs(gb) < kGradientTolerance) break;

        const double det = haa * hbb - hab * hab;
        double da, db;
        if (det > 0.0 && haa < 0.0) {
            da = (hab * gb - hbb * ga) / det;
            db = (hab * ga - haa * gb) / det;
        } else {
            const double scale = std::abs(haa) + std::abs(hbb) + 1.0;
            da = ga / scale;
            db = gb / scale;
        }
        if (ga * da + gb * db <= 0.0) { // not an ascent direction
            const double scale = std::abs(haa) + std::abs(hbb) + 1.0;
            da = ga / scale;
            db = gb / scale;
        }

        bool accepted = false;
        double fraction = 1.0;
        for (int halving = 0; halving < kMaxHalvings; ++halving) {
            const double cand_a = a_bounds.clamp(params.a + fraction * da);
            const double cand_b = b_bounds.clamp(params.b + fraction * db);
            const double cand_ll = ws.item_loglik(j, cand_a, cand_b, thetas);
            if (cand_ll >= current_ll) {
                const bool tiny = std::abs(cand_a - params.a) < kStepTolerance &&
                                  std::abs(cand_b - params.b) < kStepTolerance;
                params.a = cand_a;
                params.b = cand_b;
                current_ll = cand_ll;
                if (tiny) return params;
                accepted = true;
                break;
            }
            fraction *= 0.5;
        }
        if (!accepted) break;
    }
    return params;
}

bool is_interior(double theta, const Interval& bounds) {
    return theta > bounds.lo + 1e-9 && theta < bounds.hi - 1e-9;
}

// Standardizes interior thetas to mean 0 / variance 1 and absorbs the affine
// change into the item parameters (a *= s, b = (b-m)/s), which leaves the
// likelihood invariant. Re-runs when the interior set changes under the map
// so the identification holds exactly on the post-state interior set.
void standardize(std::vector<double>& thetas, std::vector<ItemParameters>& items,
                 const std::vector<bool>& included, const Interval& ability_bounds) {
    for (int pass = 0; pass < 8; ++pass) {
        std::vector<std::size_t> interior;
        for (std::size_t i = 0; i < thetas.size(); ++i)
            if (is_interior(thetas[i], ability_bounds)) interior.push_back(i);
        if (interior.size() < 2) return;

        double mean = 0.0;
        for (std::size_t i : interior) mean += thetas[i];
        mean /= static_cast<double>(interior.size());
        double variance = 0.0;
        for (std::size_t i : interior) variance += (thetas[i] - mean) * (thetas[i] - mean);
        variance /= static_cast<double>(interior.size());
        if (variance < 1e-16) return;
        const double sd = std::sqrt(variance);
        if (std::abs(mean) < 1e-12 && std::abs(sd - 1.0) < 1e-12) return;

        for (double& theta : thetas) theta = (theta - mean) / sd;
        for (std::size_t j = 0; j < items.size(); ++j) {
            if (!included[j]) continue;
            items[j].a *= sd;
            items[j].b = (items[j].b - mean) / sd;
        }
    }
}

std::vector<bool> included_columns(const ResponseMatrix& matrix) {
    std::vector<bool> included(matrix.n_items(), false);
    for (std::size_t j = 0; j < matrix.n_items(); ++j) {
        bool any_correct = false;
        bool any_incorrect = false;
        for (std::size_t i = 0; i < matrix.n_students(); ++i) {
            if (matrix.delta(i, j) > 0.5) {
                any_correct = true;
            } else {
                any_incorrect = true;
            }
        }
        included[j] = any_correct && any_incorrect;
    }
    return included;
}

} // namespace

void CalibrationConfig::validate() const {
    if (max_sweeps < 1) throw ConfigError("max_sweeps must be >= 1");
    if (!(tolerance > 0.0)) throw ConfigError("tolerance must be > 0");
    if (!(scaling_constant > 0.0)) throw ConfigError("scaling constant must be > 0");
    for (const Interval& bounds : {ability_bounds, a_bounds, b_bounds}) {
        if (!(bounds.lo < bounds.hi)) throw ConfigError("degenerate bounds interval");
    }
}

double prob_2pl(double theta, const ItemParameters& params, double scaling) {
    return 1.0 / (1.0 + std::exp(-scaling * params.a * (theta - params.b)));
}

double log_likelihood(const ResponseMatrix& matrix,
                      const std::vector<AbilityEstimate>& thetas,
                      const std::vector<ItemParameters>& items, double scaling) {
    if (thetas.size() != matrix.n_students() || items.size() != matrix.n_items())
        throw ShapeError("log_likelihood dimensions do not match matrix");
    double total = 0.0;
    for (std::size_t i = 0; i < matrix.n_students(); ++i) {
        for (std::size_t j = 0; j < matrix.n_items(); ++j) {
            const double z = scaling * items[j].a * (thetas[i].theta - items[j].b);
            total += cell_loglik(z, matrix.delta(i, j));
        }
    }
    return total;
}

LogLikelihoodGradients log_likelihood_gradients(const ResponseMatrix& matrix,
                                                const std::vector<AbilityEstimate>& thetas,
                                                const std::vector<ItemParameters>& items,
                                                double scaling) {
    if (thetas.size() != matrix.n_students() || items.size() != matrix.n_items())
        throw ShapeError("gradient dimensions do not match matrix");
    LogLikelihoodGradients grads;
    grads.d_theta.assign(matrix.n_students(), 0.0);
    grads.d_a.assign(matrix.n_items(), 0.0);
    grads.d_b.assign(matrix.n_items(), 0.0);
    for (std::size_t i = 0; i < matrix.n_students(); ++i) {
        for (std::size_t j = 0; j < matrix.n_items(); ++j) {
            const double centered = thetas[i].theta - items[j].b;
            const double p = logistic(scaling * items[j].a * centered);
            const double residual = matrix.delta(i, j) - p;
            grads.d_theta[i] += scaling * items[j].a * residual;
            grads.d_a[j] += scaling * centered * residual;
            grads.d_b[j] += -scaling * items[j].a * residual;
        }
    }
    return grads;
}

CalibrationResult estimate_joint(const ResponseMatrix& matrix,
                                 const CalibrationConfig& config) {
    config.validate();
    if (matrix.n_items() < 2)
        throw ShapeError("joint estimation needs at least 2 items");

    CalibrationResult result;
    result.item_included = included_columns(matrix);
    for (std::size_t j = 0; j < matrix.n_items(); ++j) {
        if (!result.item_included[j]) {
            result.diagnostics.excluded_items.push_back(matrix.items()[j]);
            result.diagnostics.excluded_item_indices.push_back(j);
            log::info("excluding item '" + matrix.items()[j] +
                      "': single-valued column, its MLE diverges");
        }
    }
    const std::size_t n_included =
        static_cast<std::size_t>(std::count(result.item_included.begin(),
                                            result.item_included.end(), true));
    if (n_included < 2)
        throw DataError("fewer than 2 calibratable items after excluding "
                        "single-valued columns");

    const std::size_t n_students = matrix.n_students();
    const std::size_t n_items = matrix.n_items();
    Workspace ws{matrix, result.item_included, config.scaling_constant};

    // Initialization: thetas from the logit of each student's proportion
    // correct, a = 1, b from the logit of each item's proportion incorrect.
    std::vector<double> thetas(n_students, 0.0);
    for (std::size_t i = 0; i < n_students; ++i) {
        double correct = 0.0;
        for (std::size_t j = 0; j < n_items; ++j)
            if (result.item_included[j]) correct += matrix.delta(i, j);
        thetas[i] = clamped_logit(correct / static_cast<double>(n_included),
                                  config.ability_bounds);
    }
    std::vector<ItemParameters> items(n_items);
    for (std::size_t j = 0; j < n_items; ++j) {
        if (!result.item_included[j]) continue;
        double incorrect = 0.0;
        for (std::size_t i = 0; i < n_students; ++i)
            incorrect += 1.0 - matrix.delta(i, j);
        items[j].a = 1.0;
        items[j].b = clamped_logit(incorrect / static_cast<double>(n_students),
                                   config.b_bounds);
    }

    double previous_ll = ws.total_loglik(thetas, items);
    result.diagnostics.initial_log_likelihood = previous_ll;

    for (int sweep = 0; sweep < config.max_sweeps; ++sweep) {
        for (std::size_t i = 0; i < n_students; ++i)
            thetas[i] = newton_theta(ws, i, thetas[i], items, config.ability_bounds, nullptr);
        for (std::size_t j = 0; j < n_items; ++j) {
            if (!result.item_included[j]) continue;
            items[j] = newton_item(ws, j, items[j], thetas, config.a_bounds, config.b_bounds);
        }
        standardize(thetas, items, result.item_included, config.ability_bounds);

        const double ll = ws.total_loglik(thetas, items);
        result.diagnostics.sweep_log_likelihoods.push_back(ll);
        result.diagnostics.sweeps = sweep + 1;
        if (std::abs(ll - previous_ll) < config.tolerance) {
            result.diagnostics.converged = true;
            previous_ll = ll;
            break;
        }
        previous_ll = ll;
    }

    // Standardization may have drifted parameters slightly past their boxes;
    // project the reported values back in.
    for (std::size_t j = 0; j < n_items; ++j) {
        if (!result.item_included[j]) {
            items[j] = ItemParameters{};
            continue;
        }
        items[j].a = config.a_bounds.clamp(items[j].a);
        items[j].b = config.b_bounds.clamp(items[j].b);
        if (!is_interior(items[j].a, config.a_bounds) ||
            !is_interior(items[j].b, config.b_bounds))
            ++result.diagnostics.clamped_items;
    }

    // Final bounded re-fit of every ability against the reported items, so
    // extreme response patterns land exactly on the bounds.
    result.abilities.assign(n_students, AbilityEstimate{});
    for (std::size_t i = 0; i < n_students; ++i) {
        bool student_converged = false;
        double theta = config.ability_bounds.clamp(thetas[i]);
        theta = newton_theta(ws, i, theta, items, config.ability_bounds, &student_converged);
        result.abilities[i].theta = theta;
        result.abilities[i].converged = result.diagnostics.converged && student_converged;
        if (!is_interior(theta, config.ability_bounds)) ++result.diagnostics.clamped_abilities;
    }

    result.items = std::move(items);
    result.diagnostics.final_log_likelihood =
        ws.total_loglik([&] {
            std::vector<double> values(n_students);
            for (std::size_t i = 0; i < n_students; ++i) values[i] = result.abilities[i].theta;
            return values;
        }(), result.items);
    return result;
}

std::vector<AbilityEstimate> estimate_abilities_fixed_items(
    const ResponseMatrix& matrix, const std::vector<ItemParameters>& items,
    const CalibrationConfig& config) {
    config.validate();
    if (items.empty()) throw ShapeError("no item parameters given");
    if (items.size() != matrix.n_items())
        throw ShapeError("item parameter count does not match matrix");

    const std::vector<bool> all_included(matrix.n_items(), true);
    Workspace ws{matrix, all_included, config.scaling_constant};

    std::vector<AbilityEstimate> estimates(matrix.n_students());
    for (std::size_t i = 0; i < matrix.n_students(); ++i) {
        double correct = 0.0;
        for (std::size_t j = 0; j < matrix.n_items(); ++j) correct += matrix.delta(i, j);
        double theta = clamped_logit(correct / static_cast<double>(matrix.n_items()),
                                     config.ability_bounds);
        bool converged = false;
        theta = newton_theta(ws, i, theta, items, config.ability_bounds, &converged);
        estimates[i] = AbilityEstimate{theta, converged};
    }
    return estimates;
}

void write_calibration_json(const ResponseMatrix& matrix, const CalibrationResult& result,
                            const std::string& path) {
    nlohmann::json doc;
    auto& items = doc["items"];
    items = nlohmann::json::array();
    for (std::size_t j = 0; j < matrix.n_items(); ++j) {
        if (!result.item_included[j]) continue;
        items.push_back({{"item_id", matrix.items()[j]},
                         {"a", result.items[j].a},
                         {"b", result.items[j].b}});
    }
    auto& abilities = doc["abilities"];
    abilities = nlohmann::json::array();
    for (std::size_t i = 0; i < matrix.n_students(); ++i) {
        abilities.push_back({{"student_id", matrix.students()[i]},
                             {"theta", result.abilities[i].theta},
                             {"converged", result.abilities[i].converged}});
    }
    doc["diagnostics"] = {
        {"sweeps", result.diagnostics.sweeps},
        {"converged", result.diagnostics.converged},
        {"initial_log_likelihood", result.diagnostics.initial_log_likelihood},
        {"final_log_likelihood", result.diagnostics.final_log_likelihood},
        {"clamped_abilities", result.diagnostics.clamped_abilities},
        {"clamped_items", result.diagnostics.clamped_items},
        {"excluded_items", result.diagnostics.excluded_items},
    };
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << doc.dump(2) << '\n';
    if (!out) throw IoError("write failed for '" + path + "'");
}

CalibrationFile read_calibration_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open calibration file '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("bad calibration JSON in '" + path + "': " + e.what());
    }
    CalibrationFile file;
    try {
        for (const auto& item : doc.at("items"))
            file.items.emplace_back(item.at("item_id").get<std::string>(),
                                    ItemParameters{item.at("a").get<double>(),
                                                   item.at("b").get<double>()});
        for (const auto& ability : doc.at("abilities"))
            file.abilities.emplace_back(
                ability.at("student_id").get<std::string>(),
                AbilityEstimate{ability.at("theta").get<double>(),
                                ability.at("converged").get<bool>()});
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("bad calibration JSON in '" + path + "': " + e.what());
    }
    return file;
}

} // namespace lcta::irt
