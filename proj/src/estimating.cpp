#include "ncosim/estimating.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ncosim/errors.hpp"

namespace ncosim {

Vec EstimatingSystem::total_score(const Vec& theta) const {
    const int p = dim();
    const int n = units();
    std::vector<long double> acc(p, 0.0L);
    std::vector<double> u(p);
    for (int i = 0; i < n; ++i) {
        const double w = weight(i);
        if (w == 0.0) continue;
        score(i, theta, u.data());
        for (int j = 0; j < p; ++j) acc[j] += static_cast<long double>(w) * u[j];
    }
    Vec out(p);
    for (int j = 0; j < p; ++j) out[j] = static_cast<double>(acc[j]);
    return out;
}

namespace {

Matrix total_jacobian(const EstimatingSystem& sys, const Vec& theta) {
    const int p = sys.dim();
    const int n = sys.units();
    Matrix total(p, p);
    Matrix ji(p, p);
    for (int i = 0; i < n; ++i) {
        const double w = sys.weight(i);
        if (w == 0.0) continue;
        sys.jacobian(i, theta, ji);
        for (int r = 0; r < p; ++r)
            for (int c = 0; c < p; ++c) total(r, c) += w * ji(r, c);
    }
    return total;
}

}  // namespace

NewtonResult newton_solve(const EstimatingSystem& sys, Vec theta0,
                          const NewtonOptions& opts) {
    const int p = sys.dim();
    if (static_cast<int>(theta0.size()) != p)
        throw ConfigError("newton_solve: initial point has wrong dimension");
    if (!sys.feasible(theta0))
        throw NonConvergence(theta0, inf_norm(sys.total_score(theta0)));

    Vec theta = std::move(theta0);
    Vec score = sys.total_score(theta);
    double norm = inf_norm(score);
    Vec best_theta = theta;
    double best_norm = norm;

    for (int iter = 1; iter <= opts.max_iter; ++iter) {
        if (norm <= opts.tol) return {theta, iter - 1, norm};

        Matrix jac = total_jacobian(sys, theta);
        Vec rhs(p);
        for (int j = 0; j < p; ++j) rhs[j] = -score[j];
        Vec step = solve_linear(jac, rhs);

        double scale = 1.0;
        bool accepted = false;
        Vec cand(p);
        for (int h = 0; h <= opts.max_halvings; ++h) {
            for (int j = 0; j < p; ++j) cand[j] = theta[j] + scale * step[j];
            if (sys.feasible(cand)) {
                Vec cand_score = sys.total_score(cand);
                double cand_norm = inf_norm(cand_score);
                if (cand_norm < norm || !std::isfinite(norm)) {
                    theta = cand;
                    score = std::move(cand_score);
                    norm = cand_norm;
                    accepted = true;
                    break;
                }
            }
            scale *= 0.5;
        }
        if (!accepted) break;
        if (norm < best_norm) {
            best_theta = theta;
            best_norm = norm;
        }
    }
    if (norm <= opts.tol) return {theta, opts.max_iter, norm};
    throw NonConvergence(best_theta, best_norm);
}

SandwichResult sandwich_cov(const EstimatingSystem& sys, const Vec& theta_hat) {
    const int p = sys.dim();
    const int n = sys.units();
    if (n <= 0) throw ConfigError("sandwich_cov: system has no units");

    Matrix bread = total_jacobian(sys, theta_hat);
    for (int r = 0; r < p; ++r)
        for (int c = 0; c < p; ++c) bread(r, c) /= static_cast<double>(n);

    Matrix meat(p, p);
    Vec u(p);
    for (int i = 0; i < n; ++i) {
        const double w = sys.weight(i);
        if (w == 0.0) continue;
        sys.score(i, theta_hat, u.data());
        for (int r = 0; r < p; ++r)
            for (int c = 0; c < p; ++c) meat(r, c) += (w * u[r]) * (w * u[c]);
    }
    double denom = static_cast<double>(n);
    const bool degenerate = n == 1;  // one unit: no spread information in the meat
    if (sys.meat_denominator() == MeatDenominator::UnitsMinusOne)
        denom = std::max(1.0, static_cast<double>(n - 1));
    for (int r = 0; r < p; ++r)
        for (int c = 0; c < p; ++c) meat(r, c) /= denom;

    Matrix bread_inv = invert(bread);
    Matrix cov = matmul(matmul(bread_inv, meat), transpose(bread_inv));
    const double n_eff = static_cast<double>(n);
    for (int r = 0; r < p; ++r)
        for (int c = 0; c < p; ++c) cov(r, c) /= n_eff;
    // enforce exact symmetry lost to floating-point noise
    for (int r = 0; r < p; ++r)
        for (int c = r + 1; c < p; ++c) {
            double s = 0.5 * (cov(r, c) + cov(c, r));
            cov(r, c) = s;
            cov(c, r) = s;
        }
    return {std::move(cov), degenerate};
}

}  // namespace ncosim
