#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lcta/types.hpp"

namespace lcta::ols {

// Canonical factor names, in the default model order. "lct_ability" is the
// per-student mean estimated ability; the rest map onto student-record
// columns of the same name.
inline constexpr std::array<const char*, 7> kCanonicalFactors = {
    "lct_ability", "placement_fund",  "placement_adv",  "class_absent",
    "fpc_absent",  "fpt_not_required", "lct_success",
};

struct DesignMatrix {
    Eigen::MatrixXd X;                     // intercept first, then factors in request order
    std::vector<std::string> column_names; // "(Intercept)", then factor names
    std::vector<StudentId> row_ids;
    std::size_t dropped_rows = 0;          // rows lost to missing predictors
};

struct Design {
    DesignMatrix design;
    Eigen::VectorXd y; // final examination scores
};

Design build_design(const std::vector<StudentRecord>& records,
                    const std::map<StudentId, double>& mean_ability,
                    const std::vector<std::string>& factors);

struct Coefficient {
    std::string name;
    double estimate = 0.0;
    double std_error = 0.0;
    double t_value = 0.0;
    double p_value = 0.0;
    std::string significance_code;
};

struct RegressionResult {
    std::vector<Coefficient> coefficients;
    double residual_std_error = 0.0;
    double r_squared = 0.0;
    long degrees_of_freedom = 0;
};

// Ordinary least squares via column-pivoted QR, classical standard errors
// from s^2 (X^T X)^-1, two-sided p-values from the Student t distribution
// with n-p degrees of freedom.
RegressionResult fit_ols(const DesignMatrix& design, const Eigen::VectorXd& y);

// p < 0.001 "***", p < 0.01 "**", p < 0.05 "*", p < 0.1 ".".
std::string significance_code(double p_value);

// Factor names sorted by ascending p-value, stable, intercept excluded.
std::vector<std::string> rank_factors(const RegressionResult& result);

std::string format_report(const RegressionResult& result);

} // namespace lcta::ols
