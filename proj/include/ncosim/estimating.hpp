#pragma once

#include "ncosim/matrix.hpp"

namespace ncosim {

enum class MeatDenominator { N, UnitsMinusOne };

// Estimating-equation interface: theta solves sum_i w_i U(unit_i; theta) = 0.
// Units are subjects for the unstratified and regression systems and weighted
// strata for the Mantel-Haenszel system.
class EstimatingSystem {
  public:
    virtual ~EstimatingSystem() = default;

    virtual int dim() const = 0;
    virtual int units() const = 0;
    // writes the dim score components for one unit into out
    virtual void score(int unit, const Vec& theta, double* out) const = 0;
    // writes the dim x dim Jacobian d U / d theta for one unit into out
    virtual void jacobian(int unit, const Vec& theta, Matrix& out) const = 0;
    virtual double weight(int /*unit*/) const { return 1.0; }
    virtual MeatDenominator meat_denominator() const { return MeatDenominator::N; }
    // feasible region for step-halving (e.g. fitted risks below 1)
    virtual bool feasible(const Vec& /*theta*/) const { return true; }

    // sum_i w_i U_i, accumulated in extended precision so the convergence
    // tolerance stays meaningful when covariates are large
    Vec total_score(const Vec& theta) const;
};

struct NewtonOptions {
    double tol = 1e-10;     // on the infinity norm of the total score
    int max_iter = 100;
    int max_halvings = 30;
};

struct NewtonResult {
    Vec theta;
    int iterations;
    double score_norm;
};

// Newton-Raphson with step-halving against score-norm increase or feasibility
// violation. Throws NonConvergence (carrying the best iterate and residual)
// or SingularMatrix.
NewtonResult newton_solve(const EstimatingSystem& sys, Vec theta0,
                          const NewtonOptions& opts = {});

struct SandwichResult {
    Matrix cov;
    bool degenerate;  // single-unit system (meat denominator clamped)
};

// (1/N_eff) B^{-1} M B^{-T} with B = (1/N) sum w_i J_i and
// M = (1/D) sum (w_i U_i)(w_i U_i)^T; D = N or units-1 per meat_denominator.
// Result symmetrized.
SandwichResult sandwich_cov(const EstimatingSystem& sys, const Vec& theta_hat);

}  // namespace ncosim
