#include <array>
#include <cmath>

#include "doctest.h"
#include "ncosim/datagen.hpp"
#include "ncosim/errors.hpp"
#include "ncosim/oracle.hpp"

using namespace ncosim;

namespace {

const std::array<std::array<double, 3>, 3> kTriples{
    {{0.0, 1.0, 2.5}, {0.0, 1.0, 2.0}, {0.0, 0.75, 1.5}}};
const std::array<double, 3> kPrevalences{0.14, 0.05, 0.025};

GenerativeParams calibrated(Design design, double p_y1, const std::array<double, 3>& a) {
    const GenerativeParams base = default_params(a, p_y1);
    return calibrate_intercepts(base, design, p_y1, base.y2_targets);
}

double marginal_y1(const GenerativeParams& p, Design design) {
    double acc = 0.0;
    for (const State& st : state_space(p, design))
        acc += st.p *
               outcome_means(p, st.site, p.w_age_grid[st.age_index], st.t,
                             p.a_levels[st.at_level])
                   .m1;
    return acc;
}

double marginal_y2_strain(const GenerativeParams& p, Design design, int j) {
    double acc = 0.0;
    for (const State& st : state_space(p, design))
        acc += st.p *
               outcome_means(p, st.site, p.w_age_grid[st.age_index], st.t,
                             p.a_levels[st.at_level])
                   .m2[j];
    return acc;
}

}  // namespace

TEST_CASE("state space is a proper joint distribution") {
    const GenerativeParams p = default_params({0.0, 1.0, 2.5}, 0.14);
    for (Design design : {Design::Observational, Design::BlindedRCT, Design::UnblindedRCT}) {
        const auto states = state_space(p, design);
        REQUIRE(states.size() == 702);
        double sum = 0.0;
        for (const State& st : states) {
            REQUIRE(st.p >= 0.0);
            sum += st.p;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
    for (const State& st : state_space(p, Design::BlindedRCT))
        if (st.at_level != st.a_level) REQUIRE(st.p == 0.0);
}

TEST_CASE("mediator renormalization keeps the published ratios") {
    const GenerativeParams p = default_params({0.0, 1.0, 2.5}, 0.14);
    // age grid starts at 15; raw row (0.018, 0.073, 0.908) sums to 0.999
    CHECK(p.mediator[0][0][2] == doctest::Approx(0.018 / 0.999).epsilon(1e-15));
}

TEST_CASE("calibrated intercepts match the enumeration closed forms") {
    const std::array<std::array<double, 3>, 3> alpha1{
        {{-1.784431365070782, -1.691247687639867, -1.444211551103633},
         {-2.814050782251940, -2.720867104821025, -2.473830968284791},
         {-3.507197962811885, -3.414014285380970, -3.166978148844737}}};
    const std::array<double, 3> alpha2_strain1{-2.478265818025976, -2.354630416417206,
                                               -2.065151127251323};
    for (int pi = 0; pi < 3; ++pi)
        for (int ti = 0; ti < 3; ++ti) {
            const GenerativeParams p =
                calibrated(Design::Observational, kPrevalences[pi], kTriples[ti]);
            CHECK(p.alpha1 == doctest::Approx(alpha1[pi][ti]).epsilon(1e-9));
            CHECK(p.alpha2[0] == doctest::Approx(alpha2_strain1[ti]).epsilon(1e-9));
        }
}

TEST_CASE("calibration hits every marginal target") {
    for (Design design : {Design::Observational, Design::UnblindedRCT}) {
        for (double prev : kPrevalences) {
            const GenerativeParams p = calibrated(design, prev, kTriples[0]);
            CHECK(std::fabs(marginal_y1(p, design) - prev) < 1e-10);
            for (int j = 0; j < GenerativeParams::n_strains; ++j)
                CHECK(std::fabs(marginal_y2_strain(p, design, j) - p.y2_targets[j]) < 1e-10);
        }
    }
}

TEST_CASE("true effects match the enumeration values") {
    const std::array<double, 3> ate{-0.630251685420995, -0.642663716657631,
                                    -0.642663716657631};
    const std::array<double, 3> nie{0.099748314579005, 0.087336283342369, 0.087336283342369};
    for (int ti = 0; ti < 3; ++ti) {
        const GenerativeParams p = calibrated(Design::Observational, 0.14, kTriples[ti]);
        const TrueEffects obs = true_effects(p, Design::Observational);
        CHECK(obs.log_nde == doctest::Approx(-0.73).epsilon(1e-12));
        CHECK(obs.log_ate == doctest::Approx(ate[ti]).epsilon(1e-9));
        CHECK(obs.log_nie == doctest::Approx(nie[ti]).epsilon(1e-9));
        CHECK(obs.log_ate == doctest::Approx(obs.log_nde + obs.log_nie).epsilon(1e-12));

        const TrueEffects unb = true_effects(p, Design::UnblindedRCT);
        CHECK(unb.log_ate == doctest::Approx(obs.log_ate).epsilon(1e-12));
        CHECK(unb.log_nde == doctest::Approx(obs.log_nde).epsilon(1e-12));
        CHECK(unb.log_nie == doctest::Approx(obs.log_nie).epsilon(1e-12));
    }
}

TEST_CASE("blinded design has no indirect effect") {
    const GenerativeParams p = calibrated(Design::BlindedRCT, 0.14, kTriples[0]);
    const TrueEffects fx = true_effects(p, Design::BlindedRCT);
    CHECK(fx.log_nie == 0.0);
    CHECK(fx.log_ate == doctest::Approx(-0.73).epsilon(1e-12));
    CHECK(fx.log_nde == doctest::Approx(-0.73).epsilon(1e-12));
}

TEST_CASE("uncalibrated params are rejected by the effect oracles") {
    const GenerativeParams p = default_params(kTriples[0], 0.14);
    CHECK_THROWS_AS(true_effects(p, Design::Observational), CalibrationMissing);
    CHECK_THROWS_AS(naive_population_contrasts(p, Design::Observational), CalibrationMissing);
}

TEST_CASE("y2 population contrast vanishes without mediation") {
    const GenerativeParams blinded = calibrated(Design::BlindedRCT, 0.14, kTriples[0]);
    CHECK(std::fabs(true_y2_contrast(blinded, Design::BlindedRCT)) < 1e-14);

    const GenerativeParams constant = calibrated(Design::UnblindedRCT, 0.14, {1.0, 1.0, 1.0});
    CHECK(std::fabs(true_y2_contrast(constant, Design::UnblindedRCT)) < 1e-14);
}

TEST_CASE("y2 population contrast approximates the indirect effect when unblinded") {
    const GenerativeParams p = calibrated(Design::UnblindedRCT, 0.14, kTriples[0]);
    const double c2 = true_y2_contrast(p, Design::UnblindedRCT);
    const double nie = true_effects(p, Design::UnblindedRCT).log_nie;
    const double gap = std::fabs(c2 - nie);
    // structurally nonzero: the strain mixture reweights age strata away from
    // the Y1 mixture; frozen as a regression band
    CHECK(gap < 1e-3);
    CHECK(gap > 1e-4);
}

TEST_CASE("marginal naive contrasts carry a frozen stratum-mixing drift") {
    const std::array<double, 3> obs_gap{0.177, 0.184, 0.197};
    for (int ti = 0; ti < 3; ++ti) {
        const GenerativeParams p = calibrated(Design::Observational, 0.14, kTriples[ti]);
        const NaiveContrasts nc = naive_population_contrasts(p, Design::Observational);
        const double gap = nc.log_c1 - nc.log_c2 - (-0.73);
        CHECK(std::fabs(gap - obs_gap[ti]) < 2e-3);
    }
    const GenerativeParams p = calibrated(Design::UnblindedRCT, 0.14, kTriples[0]);
    const NaiveContrasts nc = naive_population_contrasts(p, Design::UnblindedRCT);
    const double gap = std::fabs(nc.log_c1 - nc.log_c2 - (-0.73));
    CHECK(gap < 1e-3);
    CHECK(gap > 1e-4);
}

TEST_CASE("blinded naive contrasts separate the outcomes exactly") {
    const GenerativeParams p = calibrated(Design::BlindedRCT, 0.14, kTriples[0]);
    const NaiveContrasts nc = naive_population_contrasts(p, Design::BlindedRCT);
    CHECK(nc.log_c1 == doctest::Approx(-0.73).epsilon(1e-12));
    CHECK(std::fabs(nc.log_c2) < 1e-14);
}

TEST_CASE("the correction identity is exact within every covariate stratum") {
    for (Design design : {Design::Observational, Design::UnblindedRCT}) {
        const GenerativeParams p = calibrated(design, 0.14, kTriples[0]);
        const auto strata = stratum_population_contrasts(p, design);
        REQUIRE(strata.size() == 39);
        double wsum = 0.0;
        for (const StratumContrast& s : strata) {
            wsum += s.weight;
            CHECK(std::fabs(s.log_c1 - s.log_c2 - (-0.73)) < 1e-12);
        }
        CHECK(wsum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("without confounding or mediation the naive contrast is the total effect") {
    GenerativeParams p = default_params(kTriples[0], 0.14);
    p.zeta_t = 0.0;
    p.gamma_t = 0.0;
    p.delta_t = 0.0;
    for (int a = 0; a < GenerativeParams::n_ages; ++a)
        for (int l = 0; l < GenerativeParams::n_levels; ++l)
            for (int m = 0; m < GenerativeParams::n_levels; ++m)
                p.mediator[a][l][m] = l == m ? 1.0 : 0.0;
    p = calibrate_intercepts(p, Design::Observational, 0.14, p.y2_targets);
    const TrueEffects fx = true_effects(p, Design::Observational);
    const NaiveContrasts nc = naive_population_contrasts(p, Design::Observational);
    CHECK(fx.log_nie == doctest::Approx(0.0));
    CHECK(nc.log_c1 == doctest::Approx(-0.73).epsilon(1e-12));
    CHECK(nc.log_c1 == doctest::Approx(fx.log_ate).epsilon(1e-12));
}

TEST_CASE("degenerate behavior levels make calibration impossible") {
    const GenerativeParams p = default_params({0.0, 0.0, 0.0}, 0.14);
    CHECK_THROWS_AS(
        calibrate_intercepts(p, Design::Observational, 0.14, p.y2_targets),
        CalibrationImpossible);
}

TEST_CASE("treatment prevalence under confounding matches enumeration") {
    const std::array<double, 3> pt{0.586829, 0.573698, 0.538953};
    for (int ti = 0; ti < 3; ++ti) {
        const GenerativeParams p = default_params(kTriples[ti], 0.14);
        double acc = 0.0;
        for (const State& st : state_space(p, Design::Observational))
            if (st.t == 1) acc += st.p;
        CHECK(acc == doctest::Approx(pt[ti]).epsilon(1e-5));
    }
}

TEST_CASE("stratified estimator population limits predict the bias table") {
    const GenerativeParams p = calibrated(Design::Observational, 0.14, kTriples[0]);
    const MhLimits mh = population_mh_limits(p, Design::Observational);
    const double joint_rel = std::fabs((mh.beta1 - mh.beta2) - (-0.73)) / 0.73;
    const double naive_rel = std::fabs(mh.beta1 - (-0.73)) / 0.73;
    CHECK(std::fabs(joint_rel - 0.0211) < 1e-3);
    CHECK(std::fabs(naive_rel - 1.1499) < 1e-3);
}
