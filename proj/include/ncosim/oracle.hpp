#pragma once

#include <array>
#include <vector>

#include "ncosim/params.hpp"

namespace ncosim {

// Exact log-scale causal effects; multiplicative decomposition makes
// log_ate = log_nde + log_nie an identity.
struct TrueEffects {
    double log_ate;
    double log_nde;
    double log_nie;
};

// One cell of the exact joint law over (W_site, W_age, A, T, Atilde);
// 3 x 13 x 3 x 2 x 3 = 702 cells, probabilities summing to 1.
struct State {
    double p;
    int site;
    int age_index;
    int a_level;
    int t;
    int at_level;
};

std::vector<State> state_space(const GenerativeParams& p, Design design);

// Closed-form intercepts making the marginal prevalences hit their targets
// exactly under the given design; verifies every reachable per-state mean
// stays within [0,1].
GenerativeParams calibrate_intercepts(GenerativeParams p, Design design, double p_y1_target,
                                      const std::array<double, GenerativeParams::n_strains>&
                                          p_y2_targets);

TrueEffects true_effects(const GenerativeParams& p, Design design);

// Log population contrast of Y2 between arms; defined for the RCT designs,
// where treatment is unconfounded.
double true_y2_contrast(const GenerativeParams& p, Design design);

struct NaiveContrasts {
    double log_c1;
    double log_c2;
};

// Marginal (unadjusted) population log contrasts E(Y|T=1) vs E(Y|T=0) for
// both outcomes, conditioning on T by Bayes over the state space: the targets
// of the unstratified naive estimators.
NaiveContrasts naive_population_contrasts(const GenerativeParams& p, Design design);

// The same contrasts conditionally on each (site, age) stratum. Within any
// stratum the two log contrasts differ by exactly beta1 whenever the
// nontargeted outcome responds to behavior proportionally to the targeted
// one, which is the cancellation the joint estimators exploit; marginally the
// strata mix with different weights per outcome and the difference drifts.
struct StratumContrast {
    int site;
    int age_index;
    double weight;  // P(stratum)
    double log_c1;
    double log_c2;
};

std::vector<StratumContrast> stratum_population_contrasts(const GenerativeParams& p,
                                                          Design design);

// Exact population limits of the stratified Mantel-Haenszel functionals for
// both outcomes; predicts the stratified estimators' asymptotic bias without
// Monte Carlo.
struct MhLimits {
    double beta1;
    double beta2;
};

MhLimits population_mh_limits(const GenerativeParams& p, Design design);

}  // namespace ncosim
