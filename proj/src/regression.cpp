#include "lcta/regression.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>

#include "lcta/errors.hpp"
#include "lcta/log.hpp"

namespace lcta::ols {

namespace {

// Value of one factor for one record, or nullopt when the record is missing it.
std::optional<double> factor_value(const StudentRecord& record,
                                   const std::map<StudentId, double>& mean_ability,
                                   const std::string& factor) {
    if (factor == "lct_ability") {
        auto it = mean_ability.find(record.id);
        if (it == mean_ability.end()) return std::nullopt;
        return it->second;
    }
    if (factor == "placement_fund") {
        if (!record.placement_fundamental) return std::nullopt;
        return *record.placement_fundamental;
    }
    if (factor == "placement_adv") {
        if (!record.placement_advanced) return std::nullopt;
        return *record.placement_advanced;
    }
    if (factor == "class_absent") return record.class_absence_count;
    if (factor == "fpc_absent") return record.fpc_absence_count;
    if (factor == "fpt_not_required") return record.fpt_not_required_count;
    if (factor == "lct_success") return record.lct_success_count;
    throw ConfigError("unknown factor '" + factor + "'");
}

} // namespace

Design build_design(const std::vector<StudentRecord>& records,
                    const std::map<StudentId, double>& mean_ability,
                    const std::vector<std::string>& factors) {
    if (factors.empty()) throw ConfigError("no factors requested");
    for (const auto& factor : factors) {
        if (std::find_if(kCanonicalFactors.begin(), kCanonicalFactors.end(),
                         [&](const char* name) { return factor == name; }) ==
            kCanonicalFactors.end())
            throw ConfigError("unknown factor '" + factor + "'");
    }

    std::vector<std::vector<double>> rows;
    std::vector<double> responses;
    Design result;
    for (const auto& record : records) {
        std::vector<double> row;
        row.reserve(factors.size() + 1);
        row.push_back(1.0);
        bool complete = true;
        for (const auto& factor : factors) {
            const auto value = factor_value(record, mean_ability, factor);
            if (!value) {
                complete = false;
                break;
            }
            row.push_back(*value);
        }
        if (!complete) {
            ++result.design.dropped_rows;
            continue;
        }
        rows.push_back(std::move(row));
        responses.push_back(record.final_exam);
        result.design.row_ids.push_back(record.id);
    }
    if (result.design.dropped_rows > 0)
        log::info("dropped " + std::to_string(result.design.dropped_rows) +
                  " record(s) with missing predictors");
    if (rows.empty()) throw DataError("no usable rows for the requested factors");

    result.design.column_names.push_back("(Intercept)");
    for (const auto& factor : factors) result.design.column_names.push_back(factor);

    result.design.X.resize(static_cast<Eigen::Index>(rows.size()),
                           static_cast<Eigen::Index>(factors.size() + 1));
    result.y.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            result.design.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                rows[i][j];
        result.y(static_cast<Eigen::Index>(i)) = responses[i];
    }
    return result;
}

RegressionResult fit_ols(const DesignMatrix& design, const Eigen::VectorXd& y) {
    const Eigen::Index n = design.X.rows();
    const Eigen::Index p = design.X.cols();
    if (y.size() != n) throw ShapeError("response length does not match design rows");
    if (static_cast<std::size_t>(p) != design.column_names.size())
        throw ShapeError("column names do not match design columns");
    if (n <= p)
        throw DataError("underdetermined system: " + std::to_string(n) + " rows for " +
                        std::to_string(p) + " columns");

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design.X);
    qr.setThreshold(1e-10);
    if (qr.rank() < p) {
        // The permutation sorts dependent columns last; name the first one.
        const auto& permutation = qr.colsPermutation().indices();
        const Eigen::Index dependent = permutation(qr.rank());
        throw CollinearityError("design column '" +
                                design.column_names[static_cast<std::size_t>(dependent)] +
                                "' is linearly dependent on the others");
    }

    const Eigen::VectorXd beta = qr.solve(y);
    const Eigen::VectorXd residuals = y - design.X * beta;
    const double rss = residuals.squaredNorm();
    const long dof = static_cast<long>(n - p);
    const double s2 = rss / static_cast<double>(dof);

    // (X^T X)^-1 = P R^-1 R^-T P^T from the pivoted factorization X P = Q R.
    const Eigen::MatrixXd r_factor =
        qr.matrixQR().topRows(p).template triangularView<Eigen::Upper>();
    const Eigen::MatrixXd r_inverse =
        r_factor.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
    const Eigen::MatrixXd xtx_inverse =
        qr.colsPermutation() * (r_inverse * r_inverse.transpose()) *
        qr.colsPermutation().transpose();

    const boost::math::students_t t_dist(static_cast<double>(dof));

    RegressionResult result;
    result.degrees_of_freedom = dof;
    result.residual_std_error = std::sqrt(s2);
    const double y_mean = y.mean();
    const double tss = (y.array() - y_mean).matrix().squaredNorm();
    result.r_squared = tss > 0.0 ? 1.0 - rss / tss : 0.0;

    for (Eigen::Index k = 0; k < p; ++k) {
        Coefficient coefficient;
        coefficient.name = design.column_names[static_cast<std::size_t>(k)];
        coefficient.estimate = beta(k);
        coefficient.std_error = std::sqrt(s2 * xtx_inverse(k, k));
        coefficient.t_value = coefficient.estimate / coefficient.std_error;
        coefficient.p_value =
            2.0 * boost::math::cdf(boost::math::complement(t_dist,
                                                           std::abs(coefficient.t_value)));
        coefficient.significance_code = significance_code(coefficient.p_value);
        result.coefficients.push_back(std::move(coefficient));
    }
    return result;
}

std::string significance_code(double p_value) {
    if (p_value < 0.001) return "***";
    if (p_value < 0.01) return "**";
    if (p_value < 0.05) return "*";
    if (p_value < 0.1) return ".";
    return "";
}

std::vector<std::string> rank_factors(const RegressionResult& result) {
    std::vector<const Coefficient*> factors;
    for (const auto& coefficient : result.coefficients) {
        if (coefficient.name == "(Intercept)") continue;
        factors.push_back(&coefficient);
    }
    std::stable_sort(factors.begin(), factors.end(),
                     [](const Coefficient* lhs, const Coefficient* rhs) {
                         return lhs->p_value < rhs->p_value;
                     });
    std::vector<std::string> names;
    names.reserve(factors.size());
    for (const auto* coefficient : factors) names.push_back(coefficient->name);
    return names;
}

std::string format_report(const RegressionResult& result) {
    std::ostringstream out;
    out << "Coefficients:\n";
    char line[160];
    std::snprintf(line, sizeof(line), "%-18s %12s %12s %9s %12s\n", "", "Estimate",
                  "Std. Error", "t value", "Pr(>|t|)");
    out << line;
    for (const auto& c : result.coefficients) {
        std::snprintf(line, sizeof(line), "%-18s %12.5f %12.5f %9.3f %12.5g %s\n",
                      c.name.c_str(), c.estimate, c.std_error, c.t_value, c.p_value,
                      c.significance_code.c_str());
        out << line;
    }
    out << "---\n";
    out << "Signif. codes: 0 '***' 0.001 '**' 0.01 '*' 0.05 '.' 0.1 ' ' 1\n";
    std::snprintf(line, sizeof(line),
                  "Residual standard error: %.4f on %ld degrees of freedom\n",
                  result.residual_std_error, result.degrees_of_freedom);
    out << line;
    std::snprintf(line, sizeof(line), "Multiple R-squared: %.4f\n", result.r_squared);
    out << line;
    return out.str();
}

} // namespace lcta::ols
