#include "ncosim/params.hpp"

#include <cmath>
#include <limits>

#include <json.hpp>

#include "ncosim/errors.hpp"

namespace ncosim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// P(W_age | W_site), rows = site
constexpr double kWAge[3][13] = {
    {0.076, 0.076, 0.081, 0.076, 0.076, 0.081, 0.081, 0.076, 0.076, 0.076, 0.081, 0.070, 0.076},
    {0.077, 0.083, 0.077, 0.077, 0.077, 0.077, 0.071, 0.077, 0.077, 0.077, 0.071, 0.077, 0.077},
    {0.082, 0.076, 0.076, 0.076, 0.076, 0.076, 0.076, 0.082, 0.076, 0.076, 0.076, 0.076, 0.076},
};

// P(A = level | W_site, W_age), one table per level, rows = site, cols = age
constexpr double kALow[3][13] = {
    {0.621, 0.569, 0.594, 0.452, 0.445, 0.392, 0.333, 0.386, 0.238, 0.312, 0.251, 0.136, 0.234},
    {0.567, 0.547, 0.538, 0.450, 0.400, 0.375, 0.283, 0.296, 0.248, 0.291, 0.196, 0.174, 0.133},
    {0.619, 0.633, 0.525, 0.465, 0.380, 0.395, 0.307, 0.303, 0.305, 0.327, 0.227, 0.230, 0.189},
};
constexpr double kAMed[3][13] = {
    {0.292, 0.312, 0.300, 0.476, 0.394, 0.415, 0.439, 0.390, 0.489, 0.440, 0.527, 0.612, 0.533},
    {0.342, 0.368, 0.325, 0.381, 0.388, 0.372, 0.528, 0.452, 0.456, 0.458, 0.535, 0.507, 0.601},
    {0.260, 0.226, 0.264, 0.319, 0.406, 0.397, 0.467, 0.428, 0.451, 0.453, 0.479, 0.495, 0.471},
};
constexpr double kAHigh[3][13] = {
    {0.088, 0.120, 0.106, 0.072, 0.161, 0.193, 0.228, 0.224, 0.273, 0.248, 0.221, 0.252, 0.233},
    {0.092, 0.085, 0.137, 0.169, 0.212, 0.253, 0.189, 0.252, 0.296, 0.252, 0.270, 0.319, 0.266},
    {0.121, 0.141, 0.211, 0.216, 0.214, 0.208, 0.226, 0.268, 0.243, 0.220, 0.294, 0.275, 0.340},
};

// P(Atilde = level | W_age, A, T = 1), one table per target level,
// rows = A level (low, medium, high), cols = age
constexpr double kAtLow[3][13] = {
    {0.908, 0.907, 0.906, 0.906, 0.905, 0.904, 0.903, 0.902, 0.901, 0.900, 0.899, 0.898, 0.897},
    {0.009, 0.009, 0.009, 0.009, 0.009, 0.010, 0.010, 0.010, 0.010, 0.010, 0.010, 0.010, 0.010},
    {0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000},
};
constexpr double kAtMed[3][13] = {
    {0.073, 0.074, 0.075, 0.076, 0.076, 0.077, 0.078, 0.078, 0.079, 0.080, 0.081, 0.082, 0.082},
    {0.900, 0.899, 0.898, 0.897, 0.896, 0.895, 0.894, 0.893, 0.892, 0.891, 0.890, 0.889, 0.888},
    {0.010, 0.010, 0.010, 0.010, 0.010, 0.010, 0.010, 0.010, 0.010, 0.010, 0.010, 0.010, 0.010},
};
constexpr double kAtHigh[3][13] = {
    {0.018, 0.019, 0.019, 0.019, 0.019, 0.019, 0.019, 0.020, 0.020, 0.020, 0.020, 0.020, 0.021},
    {0.091, 0.092, 0.093, 0.094, 0.094, 0.095, 0.096, 0.097, 0.098, 0.099, 0.100, 0.101, 0.102},
    {0.990, 0.990, 0.990, 0.990, 0.990, 0.990, 0.990, 0.990, 0.990, 0.990, 0.990, 0.990, 0.990},
};

constexpr double kY2Targets[20] = {0.07,  0.03, 0.0145, 0.055, 0.075, 0.04, 0.02,
                                   0.055, 0.065, 0.075, 0.09,  0.03,  0.095, 0.02,
                                   0.09,  0.07, 0.04,   0.07,  0.085, 0.06};
constexpr double kLambda2[20] = {0.0035, 0.0026, 0.0071, 0.0156, 0.0004, 0.0090, 0.0073,
                                 0.0078, 0.0054, 0.0015, 0.0082, 0.0036, 0.0085, 0.0052,
                                 0.0077, 0.0120, 0.0112, 0.0143, 0.0011, 0.0019};
constexpr double kMu2[20] = {-0.2504, -0.1048, -0.0994, -0.3612, -0.1164, -0.2218, -0.2030,
                             -0.0325, 0.1126,  0.3296,  -0.1547, 0.3212,  -0.2316, 0.1313,
                             0.5098,  -0.0070, -0.1339, -0.0015, 0.3554,  -0.2277};

void renormalize3(std::array<double, 3>& row) {
    const double s = row[0] + row[1] + row[2];
    row[0] /= s;
    row[1] /= s;
    row[2] /= s;
}

}  // namespace

std::string design_name(Design d) {
    switch (d) {
        case Design::Observational: return "Observational";
        case Design::BlindedRCT: return "BlindedRCT";
        case Design::UnblindedRCT: return "UnblindedRCT";
    }
    return "?";
}

Design design_from_string(const std::string& s) {
    if (s == "Observational") return Design::Observational;
    if (s == "BlindedRCT") return Design::BlindedRCT;
    if (s == "UnblindedRCT") return Design::UnblindedRCT;
    throw ConfigError("unknown design: " + s);
}

bool GenerativeParams::calibrated() const {
    if (std::isnan(alpha1)) return false;
    for (double a : alpha2)
        if (std::isnan(a)) return false;
    return true;
}

GenerativeParams default_params(const std::array<double, 3>& a_levels, double p_y1_target) {
    GenerativeParams p{};
    p.w_site_probs = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    for (int i = 0; i < 13; ++i) p.w_age_grid[i] = 15.0 + 0.5 * i;

    for (int s = 0; s < 3; ++s) {
        double tot = 0.0;
        for (int a = 0; a < 13; ++a) tot += kWAge[s][a];
        for (int a = 0; a < 13; ++a) p.w_age_probs[s][a] = kWAge[s][a] / tot;
        for (int a = 0; a < 13; ++a) {
            p.a_probs[s][a] = {kALow[s][a], kAMed[s][a], kAHigh[s][a]};
            renormalize3(p.a_probs[s][a]);
        }
    }
    for (int a = 0; a < 13; ++a)
        for (int lvl = 0; lvl < 3; ++lvl) {
            p.mediator[a][lvl] = {kAtLow[lvl][a], kAtMed[lvl][a], kAtHigh[lvl][a]};
            renormalize3(p.mediator[a][lvl]);
        }

    p.a_levels = a_levels;
    p.alpha_t = -0.91;
    p.gamma_t = 1.5;
    p.delta_t = -1.0 / 18.0;
    p.zeta_t = 1.0;

    p.alpha1 = kNaN;
    p.beta1 = -0.73;
    p.lambda1 = 0.01;
    p.mu_site = {0.06, -0.26, 0.50};

    for (int j = 0; j < 20; ++j) {
        p.alpha2[j] = kNaN;
        p.lambda2[j] = kLambda2[j];
        p.mu2[j] = kMu2[j];
        p.y2_targets[j] = kY2Targets[j];
    }
    p.p_y1_target = p_y1_target;
    return p;
}

std::string params_to_json(const GenerativeParams& p) {
    nlohmann::json j;
    j["w_site_probs"] = p.w_site_probs;
    j["w_age_grid"] = p.w_age_grid;
    j["w_age_probs"] = p.w_age_probs;
    j["a_probs"] = p.a_probs;
    j["a_levels"] = p.a_levels;
    j["treat"] = {{"alpha_t", p.alpha_t},
                  {"gamma_t", p.gamma_t},
                  {"delta_t", p.delta_t},
                  {"zeta_t", p.zeta_t}};
    j["mediator"] = p.mediator;
    j["y1"] = {{"alpha1", p.alpha1},
               {"beta1", p.beta1},
               {"lambda1", p.lambda1},
               {"mu_site", p.mu_site}};
    j["y2"] = {{"alpha2", p.alpha2},
               {"lambda2", p.lambda2},
               {"mu2", p.mu2},
               {"targets", p.y2_targets}};
    j["p_y1_target"] = p.p_y1_target;
    j["n_strains"] = GenerativeParams::n_strains;
    return j.dump(2);
}

}  // namespace ncosim
