#include "ncosim/datagen.hpp"

#include <cmath>
#include <string>

#include "ncosim/errors.hpp"
#include "ncosim/rng.hpp"

namespace ncosim {

double treatment_prob(const GenerativeParams& p, Design design, int w_site, double w_age,
                      double a_value) {
    if (design != Design::Observational) return 0.5;
    const double x = p.alpha_t + p.gamma_t * w_site + p.delta_t * w_age + p.zeta_t * a_value;
    return 1.0 / (1.0 + std::exp(-x));
}

OutcomeMeans outcome_means(const GenerativeParams& p, int w_site, double w_age, int t,
                           double a_tilde_value) {
    if (!p.calibrated()) throw CalibrationMissing();
    OutcomeMeans m;
    m.m1 = a_tilde_value *
           std::exp(p.alpha1 + p.beta1 * t + p.lambda1 * w_age + p.mu_site[w_site]);
    if (m.m1 < 0.0 || m.m1 > 1.0)
        throw MeanOutOfRange("y1, site " + std::to_string(w_site), m.m1);
    for (int j = 0; j < GenerativeParams::n_strains; ++j) {
        m.m2[j] =
            a_tilde_value * std::exp(p.alpha2[j] + p.mu2[j] * w_site + p.lambda2[j] * w_age);
        if (m.m2[j] < 0.0 || m.m2[j] > 1.0)
            throw MeanOutOfRange("y2 strain " + std::to_string(j + 1), m.m2[j]);
    }
    return m;
}

StudyDataset gen_study(const GenerativeParams& p, Design design, int n, uint64_t seed,
                       uint64_t replicate, bool keep_strains, GenTrace* trace) {
    if (!p.calibrated()) throw CalibrationMissing();
    Rng rng(seed, replicate);

    StudyDataset d;
    d.t.reserve(n);
    d.y1.reserve(n);
    d.y2.reserve(n);
    d.w_site.reserve(n);
    d.w_age.reserve(n);
    if (keep_strains) {
        d.n_strains = GenerativeParams::n_strains;
        d.y2_strains.reserve(static_cast<size_t>(n) * GenerativeParams::n_strains);
    }
    if (trace) {
        trace->a_level.reserve(n);
        trace->at_level.reserve(n);
        trace->age_index.reserve(n);
    }

    for (int i = 0; i < n; ++i) {
        const int site = rng.categorical(p.w_site_probs.data(), 3);
        const int age_i = rng.categorical(p.w_age_probs[site].data(), 13);
        const double age = p.w_age_grid[age_i];
        const int a_lvl = rng.categorical(p.a_probs[site][age_i].data(), 3);
        const double a_val = p.a_levels[a_lvl];

        const int t = rng.bernoulli(treatment_prob(p, design, site, age, a_val)) ? 1 : 0;

        int at_lvl = a_lvl;
        if (t == 1 && design != Design::BlindedRCT)
            at_lvl = rng.categorical(p.mediator[age_i][a_lvl].data(), 3);
        const double at_val = p.a_levels[at_lvl];

        const OutcomeMeans m = outcome_means(p, site, age, t, at_val);
        const int y1 = rng.bernoulli(m.m1) ? 1 : 0;
        int y2 = 0;
        for (int j = 0; j < GenerativeParams::n_strains; ++j) {
            const int s = rng.bernoulli(m.m2[j]) ? 1 : 0;
            y2 += s;
            if (keep_strains) d.y2_strains.push_back(s);
        }

        d.t.push_back(t);
        d.y1.push_back(y1);
        d.y2.push_back(y2);
        d.w_site.push_back(site);
        d.w_age.push_back(age);
        if (trace) {
            trace->a_level.push_back(a_lvl);
            trace->at_level.push_back(at_lvl);
            trace->age_index.push_back(age_i);
        }
    }

    require_both_arms(d);
    return d;
}

}  // namespace ncosim
