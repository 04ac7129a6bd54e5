#pragma once

#include <array>
#include <cstdint>

#include "ncosim/dataset.hpp"
#include "ncosim/params.hpp"

namespace ncosim {

// P(T = 1 | W, A); 1/2 unconditionally under either RCT design.
double treatment_prob(const GenerativeParams& p, Design design, int w_site, double w_age,
                      double a_value);

struct OutcomeMeans {
    double m1;
    std::array<double, GenerativeParams::n_strains> m2;
};

// Conditional outcome means given covariates, treatment, and realized
// behavior. Throws MeanOutOfRange instead of clipping.
OutcomeMeans outcome_means(const GenerativeParams& p, int w_site, double w_age, int t,
                           double a_tilde_value);

// Latent per-subject draws, exposed for distribution-level tests.
struct GenTrace {
    std::vector<int> a_level;
    std::vector<int> at_level;
    std::vector<int> age_index;
};

// Draws n subjects under the factorized law
// W_site -> W_age -> A -> T -> Atilde -> (Y1, Y2 strains); y2 is the strain
// sum. Output depends only on (params, design, n, seed, replicate): the
// replicate index selects an independent substream, so the thread schedule
// cannot alter the data. Requires calibrated params.
StudyDataset gen_study(const GenerativeParams& p, Design design, int n, uint64_t seed,
                       uint64_t replicate, bool keep_strains = false,
                       GenTrace* trace = nullptr);

}  // namespace ncosim
