#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace ncosim {

enum class Design { Observational, BlindedRCT, UnblindedRCT };

std::string design_name(Design d);
Design design_from_string(const std::string& s);

// Every parameter of the data-generating process: confounder tables, the
// logistic treatment model, the post-vaccination behavior (mediator) table,
// and the log-linear outcome models. Intercepts alpha1 / alpha2 start as NaN
// and are set by oracle calibration against the marginal prevalence targets.
struct GenerativeParams {
    static constexpr int n_sites = 3;
    static constexpr int n_ages = 13;
    static constexpr int n_levels = 3;  // behavior levels: low, medium, high
    static constexpr int n_strains = 20;

    std::array<double, n_sites> w_site_probs;
    std::array<double, n_ages> w_age_grid;
    // P(W_age | W_site)
    std::array<std::array<double, n_ages>, n_sites> w_age_probs;
    // P(A level | W_site, W_age)
    std::array<std::array<std::array<double, n_levels>, n_ages>, n_sites> a_probs;
    std::array<double, n_levels> a_levels;

    double alpha_t, gamma_t, delta_t, zeta_t;

    // P(Atilde level | W_age, A level) under T = 1; Atilde = A under T = 0
    std::array<std::array<std::array<double, n_levels>, n_levels>, n_ages> mediator;

    double alpha1, beta1, lambda1;
    std::array<double, n_sites> mu_site;

    std::array<double, n_strains> alpha2;
    std::array<double, n_strains> lambda2;
    std::array<double, n_strains> mu2;
    std::array<double, n_strains> y2_targets;

    double p_y1_target;

    bool calibrated() const;
};

// All table values at their published defaults, probability rows renormalized
// to exact simplex membership; intercepts left NaN pending calibration.
GenerativeParams default_params(const std::array<double, 3>& a_levels, double p_y1_target);

std::string params_to_json(const GenerativeParams& p);

}  // namespace ncosim
