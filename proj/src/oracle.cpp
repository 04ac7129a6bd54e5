#include "ncosim/oracle.hpp"

#include <cmath>
#include <string>

#include "ncosim/datagen.hpp"
#include "ncosim/errors.hpp"

namespace ncosim {

namespace {

double mediator_prob(const GenerativeParams& p, Design design, int age_i, int a_lvl, int t,
                     int at_lvl) {
    if (t == 0 || design == Design::BlindedRCT) return at_lvl == a_lvl ? 1.0 : 0.0;
    return p.mediator[age_i][a_lvl][at_lvl];
}

double y1_base(const GenerativeParams& p, int site, double age, int t) {
    return std::exp(p.beta1 * t + p.lambda1 * age + p.mu_site[site]);
}

double y2_base(const GenerativeParams& p, int site, double age, int j) {
    return std::exp(p.mu2[j] * site + p.lambda2[j] * age);
}

// sum over strains of the calibrated per-strain means at a_tilde = 1
double y2_total(const GenerativeParams& p, int site, double age) {
    double s = 0.0;
    for (int j = 0; j < GenerativeParams::n_strains; ++j)
        s += std::exp(p.alpha2[j]) * y2_base(p, site, age, j);
    return s;
}

void require_calibrated(const GenerativeParams& p) {
    if (!p.calibrated()) throw CalibrationMissing();
}

}  // namespace

std::vector<State> state_space(const GenerativeParams& p, Design design) {
    std::vector<State> out;
    out.reserve(702);
    for (int s = 0; s < 3; ++s)
        for (int a = 0; a < 13; ++a) {
            const double p_wa_base = p.w_site_probs[s] * p.w_age_probs[s][a];
            for (int lvl = 0; lvl < 3; ++lvl) {
                const double p_wa = p_wa_base * p.a_probs[s][a][lvl];
                const double pt1 =
                    treatment_prob(p, design, s, p.w_age_grid[a], p.a_levels[lvl]);
                for (int t = 0; t <= 1; ++t) {
                    const double pt = t == 1 ? pt1 : 1.0 - pt1;
                    for (int at = 0; at < 3; ++at)
                        out.push_back({p_wa * pt * mediator_prob(p, design, a, lvl, t, at),
                                       s, a, lvl, t, at});
                }
            }
        }
    return out;
}

GenerativeParams calibrate_intercepts(GenerativeParams p, Design design, double p_y1_target,
                                      const std::array<double, GenerativeParams::n_strains>&
                                          p_y2_targets) {
    if (p_y1_target <= 0.0 || p_y1_target >= 1.0)
        throw ConfigError("p_y1_target must be in (0,1)");
    for (double tgt : p_y2_targets)
        if (tgt <= 0.0 || tgt >= 1.0) throw ConfigError("y2 target must be in (0,1)");

    p.p_y1_target = p_y1_target;
    p.y2_targets = p_y2_targets;
    const auto states = state_space(p, design);

    double s1 = 0.0;
    for (const State& st : states)
        s1 += st.p * p.a_levels[st.at_level] *
              y1_base(p, st.site, p.w_age_grid[st.age_index], st.t);
    if (s1 <= 0.0)
        throw CalibrationImpossible("E(Y1) is zero for every intercept (all behavior levels 0?)");
    p.alpha1 = std::log(p_y1_target) - std::log(s1);

    for (int j = 0; j < GenerativeParams::n_strains; ++j) {
        double s2 = 0.0;
        for (const State& st : states)
            s2 += st.p * p.a_levels[st.at_level] *
                  y2_base(p, st.site, p.w_age_grid[st.age_index], j);
        if (s2 <= 0.0) throw CalibrationImpossible("E(Y2 strain) is zero for every intercept");
        p.alpha2[j] = std::log(p_y2_targets[j]) - std::log(s2);
    }

    for (const State& st : states) {
        if (st.p <= 0.0) continue;
        const double age = p.w_age_grid[st.age_index];
        const double at_val = p.a_levels[st.at_level];
        const double m1 = at_val * std::exp(p.alpha1) * y1_base(p, st.site, age, st.t);
        if (m1 > 1.0)
            throw MeanOutOfRange("y1 state (site " + std::to_string(st.site) + ", age " +
                                     std::to_string(age) + ", t " + std::to_string(st.t) +
                                     ", behavior " + std::to_string(st.at_level) + ")",
                                 m1);
        for (int j = 0; j < GenerativeParams::n_strains; ++j) {
            const double m2 = at_val * std::exp(p.alpha2[j]) * y2_base(p, st.site, age, j);
            if (m2 > 1.0)
                throw MeanOutOfRange("y2 strain " + std::to_string(j + 1) + " state (site " +
                                         std::to_string(st.site) + ", age " +
                                         std::to_string(age) + ")",
                                     m2);
        }
    }
    return p;
}

TrueEffects true_effects(const GenerativeParams& p, Design design) {
    require_calibrated(p);
    // E(Y1^{t, Atilde^{t*}}) by enumeration over (W, A) and the mediator law at t*
    double e[2][2];
    for (int t = 0; t <= 1; ++t)
        for (int ts = 0; ts <= 1; ++ts) {
            double acc = 0.0;
            for (int s = 0; s < 3; ++s)
                for (int a = 0; a < 13; ++a) {
                    const double age = p.w_age_grid[a];
                    const double base = y1_base(p, s, age, t);
                    for (int lvl = 0; lvl < 3; ++lvl) {
                        const double p_wa =
                            p.w_site_probs[s] * p.w_age_probs[s][a] * p.a_probs[s][a][lvl];
                        double ea = 0.0;
                        for (int at = 0; at < 3; ++at)
                            ea += mediator_prob(p, design, a, lvl, ts, at) * p.a_levels[at];
                        acc += p_wa * ea * std::exp(p.alpha1) * base;
                    }
                }
            e[t][ts] = acc;
        }
    TrueEffects te;
    te.log_ate = std::log(e[1][1]) - std::log(e[0][0]);
    te.log_nde = std::log(e[1][0]) - std::log(e[0][0]);
    te.log_nie = te.log_ate - te.log_nde;
    return te;
}

double true_y2_contrast(const GenerativeParams& p, Design design) {
    require_calibrated(p);
    if (design == Design::Observational)
        throw ConfigError("y2 population contrast is defined for the RCT designs");
    double e[2] = {0.0, 0.0};
    for (int t = 0; t <= 1; ++t)
        for (int s = 0; s < 3; ++s)
            for (int a = 0; a < 13; ++a) {
                const double age = p.w_age_grid[a];
                const double tot = y2_total(p, s, age);
                for (int lvl = 0; lvl < 3; ++lvl) {
                    const double p_wa =
                        p.w_site_probs[s] * p.w_age_probs[s][a] * p.a_probs[s][a][lvl];
                    double ea = 0.0;
                    for (int at = 0; at < 3; ++at)
                        ea += mediator_prob(p, design, a, lvl, t, at) * p.a_levels[at];
                    e[t] += p_wa * ea * tot;
                }
            }
    return std::log(e[1]) - std::log(e[0]);
}

NaiveContrasts naive_population_contrasts(const GenerativeParams& p, Design design) {
    require_calibrated(p);
    const auto states = state_space(p, design);
    double pt[2] = {0.0, 0.0};
    double e1[2] = {0.0, 0.0};
    double e2[2] = {0.0, 0.0};
    for (const State& st : states) {
        const double age = p.w_age_grid[st.age_index];
        const double at_val = p.a_levels[st.at_level];
        pt[st.t] += st.p;
        e1[st.t] += st.p * at_val * std::exp(p.alpha1) * y1_base(p, st.site, age, st.t);
        e2[st.t] += st.p * at_val * y2_total(p, st.site, age);
    }
    NaiveContrasts c;
    c.log_c1 = std::log(e1[1] / pt[1]) - std::log(e1[0] / pt[0]);
    c.log_c2 = std::log(e2[1] / pt[1]) - std::log(e2[0] / pt[0]);
    return c;
}

std::vector<StratumContrast> stratum_population_contrasts(const GenerativeParams& p,
                                                          Design design) {
    require_calibrated(p);
    std::vector<StratumContrast> out;
    out.reserve(39);
    for (int s = 0; s < 3; ++s)
        for (int a = 0; a < 13; ++a) {
            const double age = p.w_age_grid[a];
            const double tot2 = y2_total(p, s, age);
            double pt[2] = {0.0, 0.0};
            double e1[2] = {0.0, 0.0};
            double e2[2] = {0.0, 0.0};
            for (int lvl = 0; lvl < 3; ++lvl) {
                const double pa = p.a_probs[s][a][lvl];
                const double pt1 = treatment_prob(p, design, s, age, p.a_levels[lvl]);
                for (int t = 0; t <= 1; ++t) {
                    const double w = pa * (t == 1 ? pt1 : 1.0 - pt1);
                    double ea = 0.0;
                    for (int at = 0; at < 3; ++at)
                        ea += mediator_prob(p, design, a, lvl, t, at) * p.a_levels[at];
                    pt[t] += w;
                    e1[t] += w * ea * std::exp(p.alpha1) * y1_base(p, s, age, t);
                    e2[t] += w * ea * tot2;
                }
            }
            StratumContrast sc;
            sc.site = s;
            sc.age_index = a;
            sc.weight = p.w_site_probs[s] * p.w_age_probs[s][a];
            sc.log_c1 = std::log(e1[1] / pt[1]) - std::log(e1[0] / pt[0]);
            sc.log_c2 = std::log(e2[1] / pt[1]) - std::log(e2[0] / pt[0]);
            out.push_back(sc);
        }
    return out;
}

MhLimits population_mh_limits(const GenerativeParams& p, Design design) {
    require_calibrated(p);
    double num1 = 0.0, den1 = 0.0, num2 = 0.0, den2 = 0.0;
    for (int s = 0; s < 3; ++s)
        for (int a = 0; a < 13; ++a) {
            const double age = p.w_age_grid[a];
            const double pk = p.w_site_probs[s] * p.w_age_probs[s][a];
            const double tot2 = y2_total(p, s, age);
            double tbar = 0.0;
            double ty1 = 0.0, cy1 = 0.0, ty2 = 0.0, cy2 = 0.0;  // E(TY | k), E((1-T)Y | k)
            for (int lvl = 0; lvl < 3; ++lvl) {
                const double pa = p.a_probs[s][a][lvl];
                const double tau = treatment_prob(p, design, s, age, p.a_levels[lvl]);
                double g1 = 0.0;
                for (int at = 0; at < 3; ++at)
                    g1 += mediator_prob(p, design, a, lvl, 1, at) * p.a_levels[at];
                const double g0 = p.a_levels[lvl];
                tbar += pa * tau;
                ty1 += pa * tau * g1 * std::exp(p.alpha1) * y1_base(p, s, age, 1);
                cy1 += pa * (1.0 - tau) * g0 * std::exp(p.alpha1) * y1_base(p, s, age, 0);
                ty2 += pa * tau * g1 * tot2;
                cy2 += pa * (1.0 - tau) * g0 * tot2;
            }
            num1 += pk * (1.0 - tbar) * ty1;
            den1 += pk * tbar * cy1;
            num2 += pk * (1.0 - tbar) * ty2;
            den2 += pk * tbar * cy2;
        }
    return {std::log(num1 / den1), std::log(num2 / den2)};
}

}  // namespace ncosim
