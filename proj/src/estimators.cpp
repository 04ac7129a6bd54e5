#include "ncosim/estimators.hpp"

#include <cctype>
#include <cmath>
#include <map>
#include <numeric>
#include <utility>

#include "ncosim/errors.hpp"

namespace ncosim {

const char* method_name(Method m) {
    switch (m) {
        case Method::JointNC: return "joint_nc";
        case Method::JointMH: return "joint_mh";
        case Method::JointReg: return "joint_reg";
        case Method::SSJoint: return "ss_joint";
        case Method::NaiveMH: return "naive_mh";
        case Method::NaiveReg: return "naive_reg";
    }
    return "unknown";
}

Method method_from_string(const std::string& s) {
    std::string key;
    key.reserve(s.size());
    for (char c : s)
        key += c == '-' ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (key == "joint_nc") return Method::JointNC;
    if (key == "joint_mh") return Method::JointMH;
    if (key == "joint_reg") return Method::JointReg;
    if (key == "ss_joint") return Method::SSJoint;
    if (key == "naive_mh" || key == "mh") return Method::NaiveMH;
    if (key == "naive_reg" || key == "reg") return Method::NaiveReg;
    throw ConfigError("unknown method: " + s);
}

int regression_dim(const RegressionSpec& spec) {
    return 2 + spec.age_poly + (spec.site_dummies ? 2 : 0);
}

namespace {

using StratumKey = std::pair<int, double>;

std::vector<int> stratum_ids(const StudyDataset& d, const StrataBy& by,
                             std::vector<StratumKey>& keys) {
    if (by.by_site && d.w_site.empty()) throw MissingColumn("w_site");
    if (by.by_age && d.w_age.empty()) throw MissingColumn("w_age");
    auto key_of = [&](int i) {
        return StratumKey{by.by_site ? d.w_site[i] : -1, by.by_age ? d.w_age[i] : 0.0};
    };
    std::map<StratumKey, int> index;
    for (int i = 0; i < d.n(); ++i) index.emplace(key_of(i), 0);
    keys.clear();
    keys.reserve(index.size());
    for (auto& [key, id] : index) {
        id = static_cast<int>(keys.size());
        keys.push_back(key);
    }
    std::vector<int> ids(d.n());
    for (int i = 0; i < d.n(); ++i) ids[i] = index.find(key_of(i))->second;
    return ids;
}

void finish_exp(EstimateReport& rep) {
    rep.exp_contrast = std::exp(rep.contrast);
    rep.exp_contrast_var = rep.contrast_var * rep.exp_contrast * rep.exp_contrast;
}

void apply_contrast(EstimateReport& rep, int i, int j) {
    rep.contrast = rep.theta[i] - rep.theta[j];
    rep.contrast_var = rep.cov(i, i) + rep.cov(j, j) - 2.0 * rep.cov(i, j);
    finish_exp(rep);
}

void apply_naive_contrast(EstimateReport& rep, int i) {
    rep.contrast = rep.theta[i];
    rep.contrast_var = rep.cov(i, i);
    finish_exp(rep);
}

// theta = (alpha1*, beta1*, alpha2*, beta2*)
class NcSystem final : public EstimatingSystem {
  public:
    explicit NcSystem(const StudyDataset& d) : d_(&d) {}

    int dim() const override { return 4; }
    int units() const override { return d_->n(); }

    void score(int i, const Vec& th, double* out) const override {
        const double t = d_->t[i];
        const double p1 = std::exp(th[0] + th[1] * t);
        const double r1 = (d_->y1[i] - p1) / (1.0 - p1);
        const double r2 = d_->y2[i] - std::exp(th[2] + th[3] * t);
        out[0] = r1;
        out[1] = t * r1;
        out[2] = r2;
        out[3] = t * r2;
    }

    void jacobian(int i, const Vec& th, Matrix& out) const override {
        const double t = d_->t[i];
        const double p1 = std::exp(th[0] + th[1] * t);
        const double p2 = std::exp(th[2] + th[3] * t);
        const double q = 1.0 - p1;
        const double f1 = p1 * (d_->y1[i] - 1.0) / (q * q);
        out.fill(0.0);
        out(0, 0) = f1;
        out(0, 1) = t * f1;
        out(1, 0) = t * f1;
        out(1, 1) = t * f1;
        out(2, 2) = -p2;
        out(2, 3) = -t * p2;
        out(3, 2) = -t * p2;
        out(3, 3) = -t * p2;
    }

    bool feasible(const Vec& th) const override {
        return th[0] < 0.0 && th[0] + th[1] < 0.0;
    }

  private:
    const StudyDataset* d_;
};

// Y1 half of the NC system; theta = (alpha1*, beta1*).
class NaiveNcSystem final : public EstimatingSystem {
  public:
    explicit NaiveNcSystem(const StudyDataset& d) : d_(&d) {}

    int dim() const override { return 2; }
    int units() const override { return d_->n(); }

    void score(int i, const Vec& th, double* out) const override {
        const double t = d_->t[i];
        const double p1 = std::exp(th[0] + th[1] * t);
        const double r1 = (d_->y1[i] - p1) / (1.0 - p1);
        out[0] = r1;
        out[1] = t * r1;
    }

    void jacobian(int i, const Vec& th, Matrix& out) const override {
        const double t = d_->t[i];
        const double p1 = std::exp(th[0] + th[1] * t);
        const double q = 1.0 - p1;
        const double f1 = p1 * (d_->y1[i] - 1.0) / (q * q);
        out(0, 0) = f1;
        out(0, 1) = t * f1;
        out(1, 0) = t * f1;
        out(1, 1) = t * f1;
    }

    bool feasible(const Vec& th) const override {
        return th[0] < 0.0 && th[0] + th[1] < 0.0;
    }

  private:
    const StudyDataset* d_;
};

// Weighted per-stratum system; theta = (beta1*, beta2*) or (beta1*) alone.
// Zero-weight strata are retained as units but contribute nothing.
class MhSystem final : public EstimatingSystem {
  public:
    MhSystem(std::vector<Stratum> strata, bool joint)
        : strata_(std::move(strata)), joint_(joint) {}

    int dim() const override { return joint_ ? 2 : 1; }
    int units() const override { return static_cast<int>(strata_.size()); }
    double weight(int k) const override { return strata_[k].omega; }
    MeatDenominator meat_denominator() const override { return MeatDenominator::UnitsMinusOne; }

    void score(int k, const Vec& th, double* out) const override {
        const Stratum& s = strata_[k];
        if (s.omega == 0.0) {
            out[0] = 0.0;
            if (joint_) out[1] = 0.0;
            return;
        }
        out[0] = s.x1 / s.n1 - std::exp(th[0]) * s.z1 / s.n0;
        if (joint_) out[1] = s.x2 / s.n1 - std::exp(th[1]) * s.z2 / s.n0;
    }

    void jacobian(int k, const Vec& th, Matrix& out) const override {
        const Stratum& s = strata_[k];
        out.fill(0.0);
        if (s.omega == 0.0) return;
        out(0, 0) = -std::exp(th[0]) * s.z1 / s.n0;
        if (joint_) out(1, 1) = -std::exp(th[1]) * s.z2 / s.n0;
    }

  private:
    std::vector<Stratum> strata_;
    bool joint_;
};

// Stacked log-link regression system over the two outcomes; theta holds the
// Y1 coefficients then, when joint, the Y2 coefficients.
class RegSystem final : public EstimatingSystem {
  public:
    RegSystem(const StudyDataset& d, const RegressionSpec& spec, bool joint)
        : d_(&d), p_(regression_dim(spec)), joint_(joint) {
        if (spec.age_poly > 0 && d.w_age.empty()) throw MissingColumn("w_age");
        if (spec.site_dummies && d.w_site.empty()) throw MissingColumn("w_site");
        x_.resize(static_cast<size_t>(d.n()) * p_);
        for (int i = 0; i < d.n(); ++i) {
            double* row = &x_[static_cast<size_t>(i) * p_];
            int c = 0;
            row[c++] = 1.0;
            row[c++] = d.t[i];
            double a = 1.0;
            for (int k = 0; k < spec.age_poly; ++k) {
                a *= d.w_age[i];
                row[c++] = a;
            }
            if (spec.site_dummies) {
                row[c++] = d.w_site[i] == 1 ? 1.0 : 0.0;
                row[c++] = d.w_site[i] == 2 ? 1.0 : 0.0;
            }
        }
    }

    int dim() const override { return joint_ ? 2 * p_ : p_; }
    int units() const override { return d_->n(); }
    int pdim() const { return p_; }
    const double* row(int i) const { return &x_[static_cast<size_t>(i) * p_]; }

    // per-coefficient sup norm of its covariate column, repeated across both
    // outcome blocks
    Vec column_scales() const {
        Vec s(dim(), 1.0);
        for (int i = 0; i < d_->n(); ++i) {
            const double* x = row(i);
            for (int c = 0; c < p_; ++c) s[c] = std::max(s[c], std::fabs(x[c]));
        }
        if (joint_)
            for (int c = 0; c < p_; ++c) s[p_ + c] = s[c];
        return s;
    }

    void score(int i, const Vec& th, double* out) const override {
        const double* x = row(i);
        const double p1 = std::exp(dot(x, th.data()));
        const double r1 = (d_->y1[i] - p1) / (1.0 - p1);
        for (int j = 0; j < p_; ++j) out[j] = x[j] * r1;
        if (joint_) {
            const double r2 = d_->y2[i] - std::exp(dot(x, th.data() + p_));
            for (int j = 0; j < p_; ++j) out[p_ + j] = x[j] * r2;
        }
    }

    void jacobian(int i, const Vec& th, Matrix& out) const override {
        const double* x = row(i);
        const double p1 = std::exp(dot(x, th.data()));
        const double q = 1.0 - p1;
        const double f1 = p1 * (d_->y1[i] - 1.0) / (q * q);
        out.fill(0.0);
        for (int r = 0; r < p_; ++r)
            for (int c = 0; c < p_; ++c) out(r, c) = f1 * x[r] * x[c];
        if (joint_) {
            const double f2 = -std::exp(dot(x, th.data() + p_));
            for (int r = 0; r < p_; ++r)
                for (int c = 0; c < p_; ++c) out(p_ + r, p_ + c) = f2 * x[r] * x[c];
        }
    }

    bool feasible(const Vec& th) const override {
        for (int i = 0; i < d_->n(); ++i)
            if (dot(row(i), th.data()) >= 0.0) return false;
        return true;
    }

  private:
    double dot(const double* x, const double* coef) const {
        double eta = 0.0;
        for (int j = 0; j < p_; ++j) eta += x[j] * coef[j];
        return eta;
    }

    const StudyDataset* d_;
    int p_;
    bool joint_;
    std::vector<double> x_;
};

// Reparameterized view theta'_c = s_c * theta_c over unit-sup-norm columns, so
// the solver's absolute score tolerance stays meaningful when age powers make
// the raw columns large. Estimates are mapped back to the raw scale.
class ScaledView final : public EstimatingSystem {
  public:
    ScaledView(const EstimatingSystem& inner, Vec scales)
        : inner_(&inner), s_(std::move(scales)) {}

    int dim() const override { return inner_->dim(); }
    int units() const override { return inner_->units(); }
    double weight(int u) const override { return inner_->weight(u); }
    MeatDenominator meat_denominator() const override { return inner_->meat_denominator(); }

    Vec to_raw(const Vec& th) const {
        Vec r(th);
        for (size_t c = 0; c < r.size(); ++c) r[c] /= s_[c];
        return r;
    }
    Vec to_scaled(const Vec& th) const {
        Vec r(th);
        for (size_t c = 0; c < r.size(); ++c) r[c] *= s_[c];
        return r;
    }

    void score(int u, const Vec& th, double* out) const override {
        inner_->score(u, to_raw(th), out);
        for (int c = 0; c < dim(); ++c) out[c] /= s_[c];
    }
    void jacobian(int u, const Vec& th, Matrix& out) const override {
        inner_->jacobian(u, to_raw(th), out);
        for (int r = 0; r < dim(); ++r)
            for (int c = 0; c < dim(); ++c) out(r, c) /= s_[r] * s_[c];
    }
    bool feasible(const Vec& th) const override { return inner_->feasible(to_raw(th)); }

  private:
    const EstimatingSystem* inner_;
    Vec s_;
};

void check_full_rank(const RegSystem& sys, int n) {
    const int p = sys.pdim();
    std::vector<long double> gram(static_cast<size_t>(p) * p, 0.0L);
    for (int i = 0; i < n; ++i) {
        const double* x = sys.row(i);
        for (int r = 0; r < p; ++r)
            for (int c = 0; c < p; ++c)
                gram[static_cast<size_t>(r) * p + c] +=
                    static_cast<long double>(x[r]) * x[c];
    }
    // unit-diagonal scaling keeps the pivot threshold scale-free
    std::vector<long double> scale(p);
    for (int j = 0; j < p; ++j) {
        scale[j] = sqrtl(gram[static_cast<size_t>(j) * p + j]);
        if (!(scale[j] > 0.0L)) throw RankDeficientDesign();
    }
    Matrix normalized(p, p);
    for (int r = 0; r < p; ++r)
        for (int c = 0; c < p; ++c)
            normalized(r, c) = static_cast<double>(
                gram[static_cast<size_t>(r) * p + c] / (scale[r] * scale[c]));
    try {
        invert(normalized);
    } catch (const SingularMatrix&) {
        throw RankDeficientDesign();
    }
}

struct ArmSums {
    double n1 = 0, n0 = 0;
    double x1 = 0, z1 = 0;  // Y1 sums, treated / untreated
    double x2 = 0, z2 = 0;  // Y2 sums
    double u1 = 0, u0 = 0;  // counts of y1 = 0, treated / untreated
};

ArmSums arm_sums(const StudyDataset& d) {
    ArmSums s;
    for (int i = 0; i < d.n(); ++i) {
        if (d.t[i] == 1) {
            s.n1 += 1;
            s.x1 += d.y1[i];
            s.x2 += d.y2[i];
            s.u1 += 1 - d.y1[i];
        } else {
            s.n0 += 1;
            s.z1 += d.y1[i];
            s.z2 += d.y2[i];
            s.u0 += 1 - d.y1[i];
        }
    }
    return s;
}

Vec nc_theta(const ArmSums& s) {
    const double a1 = std::log(s.z1 / s.n0);
    const double b1 = std::log(s.x1 / s.n1) - a1;
    const double a2 = std::log(s.z2 / s.n0);
    // reduce the y2 fraction to lowest terms so that rescaling every y2 by an
    // integer constant leaves b2 bit-identical, and keep the log difference
    // form so that relabeling the arms negates it bit-exactly
    const double g = static_cast<double>(
        std::max(1LL, std::gcd(std::llround(s.x2), std::llround(s.z2))));
    const double b2 = std::log(s.x2 / g / s.n1) - std::log(s.z2 / g / s.n0);
    return {a1, b1, a2, b2};
}

}  // namespace

std::vector<Stratum> build_strata(const StudyDataset& d, const StrataBy& by) {
    std::vector<StratumKey> keys;
    std::vector<int> ids = stratum_ids(d, by, keys);
    std::vector<Stratum> strata(keys.size());
    for (size_t k = 0; k < keys.size(); ++k) {
        strata[k].site = keys[k].first;
        strata[k].age = keys[k].second;
    }
    for (int i = 0; i < d.n(); ++i) {
        Stratum& s = strata[ids[i]];
        if (d.t[i] == 1) {
            s.n1 += 1;
            s.x1 += d.y1[i];
            s.x2 += d.y2[i];
        } else {
            s.n0 += 1;
            s.z1 += d.y1[i];
            s.z2 += d.y2[i];
        }
    }
    for (Stratum& s : strata) {
        s.nn = s.n1 + s.n0;
        s.omega = s.n1 > 0 && s.n0 > 0 ? s.n1 * s.n0 / s.nn : 0.0;
    }
    return strata;
}

EstimateReport joint_nc(const StudyDataset& d) {
    require_both_arms(d);
    const ArmSums s = arm_sums(d);
    if (s.x1 == 0) throw ZeroCell("treated y1 sum");
    if (s.z1 == 0) throw ZeroCell("untreated y1 sum");
    if (s.x2 == 0) throw ZeroCell("treated y2 sum");
    if (s.z2 == 0) throw ZeroCell("untreated y2 sum");
    if (s.u1 == 0) throw ZeroCell("treated y1=0 count");
    if (s.u0 == 0) throw ZeroCell("untreated y1=0 count");

    EstimateReport rep;
    rep.method = Method::JointNC;
    rep.theta = nc_theta(s);
    NcSystem sys(d);
    SandwichResult sw = sandwich_cov(sys, rep.theta);
    rep.cov = std::move(sw.cov);
    rep.degenerate_cov = sw.degenerate;
    apply_contrast(rep, 1, 3);
    return rep;
}

namespace {

EstimateReport mh_impl(const StudyDataset& d, const StrataBy& by, bool joint) {
    require_both_arms(d);
    std::vector<Stratum> strata = build_strata(d, by);
    // factor the common integer divisor out of the y2 sums so that rescaling
    // every y2 by an integer constant reproduces the same summands bit for bit
    long long g2 = 0;
    for (const Stratum& s : strata) {
        g2 = std::gcd(g2, std::llround(s.x2));
        g2 = std::gcd(g2, std::llround(s.z2));
    }
    const double g = static_cast<double>(std::max(1LL, g2));
    double num1 = 0, den1 = 0, num2 = 0, den2 = 0;
    int informative = 0;
    for (const Stratum& s : strata) {
        if (s.omega > 0) ++informative;
        num1 += s.n0 * s.x1 / s.nn;
        den1 += s.n1 * s.z1 / s.nn;
        num2 += s.n0 * (s.x2 / g) / s.nn;
        den2 += s.n1 * (s.z2 / g) / s.nn;
    }
    if (informative == 0) throw NoInformativeStrata();
    if (num1 == 0) throw ZeroCell("MH treated y1 sum");
    if (den1 == 0) throw ZeroCell("MH untreated y1 sum");
    if (joint) {
        if (num2 == 0) throw ZeroCell("MH treated y2 sum");
        if (den2 == 0) throw ZeroCell("MH untreated y2 sum");
    }

    EstimateReport rep;
    rep.method = joint ? Method::JointMH : Method::NaiveMH;
    rep.zero_weight_strata = static_cast<int>(strata.size()) - informative;
    // log differences rather than log(num/den): arm relabeling swaps num and
    // den, so the estimates negate bit-exactly
    if (joint)
        rep.theta = {std::log(num1) - std::log(den1),
                     std::log(num2) - std::log(den2)};
    else
        rep.theta = {std::log(num1) - std::log(den1)};

    if (strata.size() > 1) {
        MhSystem sys(std::move(strata), joint);
        SandwichResult sw = sandwich_cov(sys, rep.theta);
        rep.cov = std::move(sw.cov);
        rep.degenerate_cov = sw.degenerate;
    } else {
        // The stratum-level meat vanishes identically at K=1, where the MH
        // estimates collapse to the unstratified closed forms; use the
        // subject-level system for the covariance instead.
        const ArmSums s = arm_sums(d);
        if (s.u1 > 0 && s.u0 > 0) {
            Vec full = nc_theta(s);
            if (joint) {
                full[1] = rep.theta[0];
                full[3] = rep.theta[1];
                NcSystem sys(d);
                SandwichResult sw = sandwich_cov(sys, full);
                rep.cov = Matrix(2, 2);
                rep.cov(0, 0) = sw.cov(1, 1);
                rep.cov(0, 1) = sw.cov(1, 3);
                rep.cov(1, 0) = sw.cov(3, 1);
                rep.cov(1, 1) = sw.cov(3, 3);
                rep.degenerate_cov = sw.degenerate;
            } else {
                Vec half = {full[0], rep.theta[0]};
                NaiveNcSystem sys(d);
                SandwichResult sw = sandwich_cov(sys, half);
                rep.cov = Matrix(1, 1);
                rep.cov(0, 0) = sw.cov(1, 1);
                rep.degenerate_cov = sw.degenerate;
            }
        } else {
            // saturated arm: subject-level scores are undefined as well
            MhSystem sys(std::move(strata), joint);
            SandwichResult sw = sandwich_cov(sys, rep.theta);
            rep.cov = std::move(sw.cov);
            rep.degenerate_cov = true;
        }
    }

    if (joint)
        apply_contrast(rep, 0, 1);
    else
        apply_naive_contrast(rep, 0);
    return rep;
}

EstimateReport reg_impl(const StudyDataset& d, const RegressionSpec& spec, bool joint) {
    require_both_arms(d);
    RegSystem sys(d, spec, joint);
    check_full_rank(sys, d.n());

    double sum1 = 0, sum2 = 0;
    for (int i = 0; i < d.n(); ++i) {
        sum1 += d.y1[i];
        sum2 += d.y2[i];
    }
    if (sum1 == 0) throw ZeroCell("y1 sum");
    if (joint && sum2 == 0) throw ZeroCell("y2 sum");

    const int p = sys.pdim();
    Vec theta0(sys.dim(), 0.0);
    theta0[0] = std::log(sum1 / d.n());
    if (joint) theta0[p] = std::log(sum2 / d.n());

    const ScaledView view(sys, sys.column_scales());
    NewtonResult nr = newton_solve(view, view.to_scaled(theta0));
    EstimateReport rep;
    rep.method = joint ? Method::JointReg : Method::NaiveReg;
    rep.theta = view.to_raw(nr.theta);
    SandwichResult sw = sandwich_cov(sys, rep.theta);
    rep.cov = std::move(sw.cov);
    rep.degenerate_cov = sw.degenerate;
    if (joint)
        apply_contrast(rep, 1, p + 1);
    else
        apply_naive_contrast(rep, 1);
    return rep;
}

}  // namespace

EstimateReport joint_mh(const StudyDataset& d, const StrataBy& by) {
    return mh_impl(d, by, true);
}

EstimateReport naive_mh(const StudyDataset& d, const StrataBy& by) {
    return mh_impl(d, by, false);
}

EstimateReport joint_reg(const StudyDataset& d, const RegressionSpec& spec) {
    return reg_impl(d, spec, true);
}

EstimateReport naive_reg(const StudyDataset& d, const RegressionSpec& spec) {
    return reg_impl(d, spec, false);
}

EstimateReport ss_joint(const StudyDataset& d, const StrataBy& by) {
    require_both_arms(d);
    std::vector<StratumKey> keys;
    std::vector<int> ids = stratum_ids(d, by, keys);
    std::vector<StudyDataset> subs(keys.size());
    for (int i = 0; i < d.n(); ++i) {
        StudyDataset& sub = subs[ids[i]];
        sub.t.push_back(d.t[i]);
        sub.y1.push_back(d.y1[i]);
        sub.y2.push_back(d.y2[i]);
    }

    double sum_inv_v = 0, sum_b_inv_v = 0;
    int used = 0, dropped = 0;
    for (const StudyDataset& sub : subs) {
        try {
            EstimateReport r = joint_nc(sub);
            sum_inv_v += 1.0 / r.contrast_var;
            sum_b_inv_v += r.contrast / r.contrast_var;
            ++used;
        } catch (const Error&) {
            ++dropped;
        }
    }
    if (used == 0) throw NoInformativeStrata();

    EstimateReport rep;
    rep.method = Method::SSJoint;
    rep.dropped_strata = dropped;
    rep.contrast_var = 1.0 / sum_inv_v;
    rep.contrast = sum_b_inv_v * rep.contrast_var;
    rep.theta = {rep.contrast};
    rep.cov = Matrix(1, 1);
    rep.cov(0, 0) = rep.contrast_var;
    finish_exp(rep);
    return rep;
}

EstimateReport estimate(const StudyDataset& d, Method method, const StrataBy& by,
                        const RegressionSpec& spec) {
    switch (method) {
        case Method::JointNC: return joint_nc(d);
        case Method::JointMH: return joint_mh(d, by);
        case Method::JointReg: return joint_reg(d, spec);
        case Method::SSJoint: return ss_joint(d, by);
        case Method::NaiveMH: return naive_mh(d, by);
        case Method::NaiveReg: return naive_reg(d, spec);
    }
    throw ConfigError("unknown method");
}

std::unique_ptr<EstimatingSystem> make_nc_system(const StudyDataset& d) {
    return std::make_unique<NcSystem>(d);
}

std::unique_ptr<EstimatingSystem> make_mh_system(const StudyDataset& d, const StrataBy& by) {
    return std::make_unique<MhSystem>(build_strata(d, by), true);
}

std::unique_ptr<EstimatingSystem> make_naive_mh_system(const StudyDataset& d,
                                                       const StrataBy& by) {
    return std::make_unique<MhSystem>(build_strata(d, by), false);
}

std::unique_ptr<EstimatingSystem> make_reg_system(const StudyDataset& d,
                                                  const RegressionSpec& spec) {
    return std::make_unique<RegSystem>(d, spec, true);
}

std::unique_ptr<EstimatingSystem> make_naive_reg_system(const StudyDataset& d,
                                                        const RegressionSpec& spec) {
    return std::make_unique<RegSystem>(d, spec, false);
}

}  // namespace ncosim
