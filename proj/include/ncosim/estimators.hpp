#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ncosim/dataset.hpp"
#include "ncosim/estimating.hpp"
#include "ncosim/matrix.hpp"

namespace ncosim {

enum class Method { JointNC, JointMH, JointReg, SSJoint, NaiveMH, NaiveReg };

const char* method_name(Method m);
Method method_from_string(const std::string& s);

// Covariates per outcome equation: intercept and T always; W_age powers
// 1..age_poly; W_site as two dummy indicators (reference site 0). The same
// specification is used for both outcomes.
struct RegressionSpec {
    int age_poly = 2;
    bool site_dummies = true;

    static RegressionSpec intercept_t_only() { return {0, false}; }
};

// per-outcome coefficient count
int regression_dim(const RegressionSpec& spec);

struct StrataBy {
    bool by_site = true;
    bool by_age = true;
};

// Per-stratum treated/untreated outcome sums and arm sizes, with the
// Mantel-Haenszel weight omega = n1*n0/n (0 when an arm is empty).
struct Stratum {
    int site = -1;
    double age = 0.0;
    double x1 = 0, z1 = 0;  // treated / untreated Y1 sums
    double x2 = 0, z2 = 0;  // treated / untreated Y2 sums
    double n1 = 0, n0 = 0, nn = 0;
    double omega = 0;
};

std::vector<Stratum> build_strata(const StudyDataset& data, const StrataBy& by);

struct EstimateReport {
    Method method;
    Vec theta;
    Matrix cov;
    double contrast = 0;
    double contrast_var = 0;
    double exp_contrast = 0;
    double exp_contrast_var = 0;
    int zero_weight_strata = 0;  // MH strata retained with omega = 0
    int dropped_strata = 0;      // SS-Joint strata where the fit errored
    bool degenerate_cov = false;
};

EstimateReport joint_nc(const StudyDataset& data);
EstimateReport joint_mh(const StudyDataset& data, const StrataBy& by = {});
EstimateReport joint_reg(const StudyDataset& data, const RegressionSpec& spec = {});
EstimateReport ss_joint(const StudyDataset& data, const StrataBy& by = {});
EstimateReport naive_mh(const StudyDataset& data, const StrataBy& by = {});
EstimateReport naive_reg(const StudyDataset& data, const RegressionSpec& spec = {});

EstimateReport estimate(const StudyDataset& data, Method method,
                        const StrataBy& by = {}, const RegressionSpec& spec = {});

// Estimating-equation views for solver and variance checks.
std::unique_ptr<EstimatingSystem> make_nc_system(const StudyDataset& data);
std::unique_ptr<EstimatingSystem> make_mh_system(const StudyDataset& data,
                                                 const StrataBy& by = {});
std::unique_ptr<EstimatingSystem> make_naive_mh_system(const StudyDataset& data,
                                                       const StrataBy& by = {});
std::unique_ptr<EstimatingSystem> make_reg_system(const StudyDataset& data,
                                                  const RegressionSpec& spec = {});
std::unique_ptr<EstimatingSystem> make_naive_reg_system(const StudyDataset& data,
                                                        const RegressionSpec& spec = {});

}  // namespace ncosim
