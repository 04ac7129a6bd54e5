#include <cmath>

#include "doctest.h"
#include "ncosim/datagen.hpp"
#include "ncosim/errors.hpp"
#include "ncosim/estimating.hpp"
#include "ncosim/estimators.hpp"
#include "ncosim/oracle.hpp"
#include "ncosim/rng.hpp"

using namespace ncosim;

namespace {

struct ExpSystem : EstimatingSystem {
    double c = 5.0;
    int dim() const override { return 1; }
    int units() const override { return 1; }
    void score(int, const Vec& theta, double* out) const override {
        out[0] = c - std::exp(theta[0]);
    }
    void jacobian(int, const Vec& theta, Matrix& out) const override {
        out(0, 0) = -std::exp(theta[0]);
    }
};

struct FlatSystem : EstimatingSystem {
    int dim() const override { return 1; }
    int units() const override { return 1; }
    void score(int, const Vec&, double* out) const override { out[0] = 1.0; }
    void jacobian(int, const Vec&, Matrix& out) const override { out(0, 0) = 0.0; }
};

struct NoRootSystem : EstimatingSystem {
    int dim() const override { return 1; }
    int units() const override { return 1; }
    void score(int, const Vec& theta, double* out) const override {
        out[0] = std::exp(theta[0]);
    }
    void jacobian(int, const Vec& theta, Matrix& out) const override {
        out(0, 0) = std::exp(theta[0]);
    }
};

StudyDataset random_small_dataset(Rng& rng) {
    const int n = 30 + static_cast<int>(rng.uniform() * 70);
    StudyDataset d;
    for (int i = 0; i < n; ++i) {
        d.t.push_back(rng.bernoulli(0.5) ? 1 : 0);
        d.y1.push_back(rng.bernoulli(0.35) ? 1 : 0);
        int y2 = 0;
        for (int j = 0; j < 3; ++j) y2 += rng.bernoulli(0.4) ? 1 : 0;
        d.y2.push_back(y2);
    }
    return d;
}

StudyDataset study_dataset(int n, uint64_t seed) {
    const GenerativeParams base = default_params({0.0, 1.0, 2.5}, 0.14);
    const GenerativeParams p =
        calibrate_intercepts(base, Design::Observational, 0.14, base.y2_targets);
    return gen_study(p, Design::Observational, n, seed, 0);
}

void check_fd_jacobian(const EstimatingSystem& sys, const Vec& theta) {
    const int p = sys.dim();
    const double h = 1e-6;
    Matrix analytic(p, p);
    Vec up(p), down(p);
    Vec shifted = theta;
    const int n = sys.units();
    // a spread of units rather than all of them keeps the suite quick
    for (int unit : {0, n / 3, n / 2, n - 1}) {
        sys.jacobian(unit, theta, analytic);
        for (int j = 0; j < p; ++j) {
            shifted[j] = theta[j] + h;
            sys.score(unit, shifted, up.data());
            shifted[j] = theta[j] - h;
            sys.score(unit, shifted, down.data());
            shifted[j] = theta[j];
            for (int r = 0; r < p; ++r) {
                const double fd = (up[r] - down[r]) / (2.0 * h);
                REQUIRE(std::fabs(fd - analytic(r, j)) <=
                        1e-4 * (1.0 + std::fabs(analytic(r, j))));
            }
        }
    }
}

void fd_sweep(const EstimatingSystem& sys, const Vec& center, Rng& rng) {
    Vec point = center;
    for (int rep = 0; rep < 10; ++rep) {
        for (size_t j = 0; j < point.size(); ++j)
            point[j] = center[j] + 0.04 * rng.uniform() - 0.02;
        if (!sys.feasible(point)) {
            --rep;
            continue;
        }
        check_fd_jacobian(sys, point);
    }
}

}  // namespace

TEST_CASE("newton finds the closed-form root of a scalar system") {
    ExpSystem sys;
    const NewtonResult res = newton_solve(sys, {0.0});
    // |U| <= 1e-10 near the root bounds |theta - log 5| by 1e-10 / 5
    CHECK(res.theta[0] == doctest::Approx(std::log(5.0)).epsilon(1e-10));
    CHECK(res.score_norm <= 1e-10);
    CHECK(res.iterations >= 1);
}

TEST_CASE("a zero jacobian raises SingularMatrix") {
    FlatSystem sys;
    CHECK_THROWS_AS(newton_solve(sys, {0.0}), SingularMatrix);
}

TEST_CASE("a rootless system reports its best iterate") {
    NoRootSystem sys;
    NewtonOptions opts;
    opts.max_iter = 3;
    try {
        newton_solve(sys, {5.0}, opts);
        FAIL("expected NonConvergence");
    } catch (const NonConvergence& e) {
        REQUIRE(e.best_theta.size() == 1);
        CHECK(e.best_theta[0] == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(e.residual == doctest::Approx(std::exp(2.0)).epsilon(1e-9));
    }
}

TEST_CASE("an infeasible start is rejected up front") {
    struct Fenced : ExpSystem {
        bool feasible(const Vec& theta) const override { return theta[0] < 10.0; }
    } sys;
    CHECK_THROWS_AS(newton_solve(sys, {20.0}), NonConvergence);
}

TEST_CASE("newton on the four-parameter score reproduces the closed forms") {
    Rng rng(314);
    int done = 0;
    while (done < 100) {
        const StudyDataset d = random_small_dataset(rng);
        EstimateReport closed;
        try {
            closed = joint_nc(d);
        } catch (const Error&) {
            continue;
        }
        const auto sys = make_nc_system(d);
        double m1 = 0, m2 = 0;
        for (int i = 0; i < d.n(); ++i) {
            m1 += d.y1[i];
            m2 += d.y2[i];
        }
        const Vec theta0{std::log(m1 / d.n()), 0.0, std::log(m2 / d.n()), 0.0};
        const NewtonResult res = newton_solve(*sys, theta0);
        for (int j = 0; j < 4; ++j)
            REQUIRE(std::fabs(res.theta[j] - closed.theta[j]) < 1e-10);
        ++done;
    }
}

TEST_CASE("sandwich variance of the treated-rate ratio matches the analytic form") {
    auto analytic_var = [](const StudyDataset& d) {
        double ty1 = 0, t = 0, cy1 = 0, c = 0;
        for (int i = 0; i < d.n(); ++i) {
            if (d.t[i]) {
                t += 1;
                ty1 += d.y1[i];
            } else {
                c += 1;
                cy1 += d.y1[i];
            }
        }
        return 1 / ty1 - 1 / t + 1 / cy1 - 1 / c;
    };

    StudyDataset hand;
    hand.t = {1, 1, 1, 1, 0, 0, 0, 0};
    hand.y1 = {1, 0, 0, 0, 1, 1, 0, 0};
    hand.y2 = {2, 1, 1, 0, 1, 1, 0, 0};
    const EstimateReport rep = joint_nc(hand);
    CHECK(rep.cov(1, 1) == doctest::Approx(analytic_var(hand)).epsilon(1e-10));

    Rng rng(99);
    for (int k = 0; k < 5;) {
        const StudyDataset d = random_small_dataset(rng);
        try {
            const EstimateReport r = joint_nc(d);
            CHECK(r.cov(1, 1) == doctest::Approx(analytic_var(d)).epsilon(1e-10));
            ++k;
        } catch (const Error&) {
        }
    }
}

TEST_CASE("one-unit systems are finite but flagged degenerate") {
    ExpSystem sys;
    const SandwichResult sw = sandwich_cov(sys, {std::log(5.0)});
    CHECK(sw.degenerate);
    CHECK(std::isfinite(sw.cov(0, 0)));
}

TEST_CASE("analytic jacobians agree with finite differences for every system") {
    const StudyDataset d = study_dataset(400, 21);
    Rng rng(55);

    fd_sweep(*make_nc_system(d), joint_nc(d).theta, rng);
    fd_sweep(*make_mh_system(d), joint_mh(d).theta, rng);
    fd_sweep(*make_naive_mh_system(d), naive_mh(d).theta, rng);
    fd_sweep(*make_reg_system(d), joint_reg(d).theta, rng);
    fd_sweep(*make_naive_reg_system(d), naive_reg(d).theta, rng);
}

TEST_CASE("total_score accumulates only weighted units") {
    const StudyDataset d = study_dataset(300, 8);
    const auto sys = make_mh_system(d);
    const Vec theta = joint_mh(d).theta;
    const Vec score = sys->total_score(theta);
    CHECK(inf_norm(score) < 1e-9);
}
