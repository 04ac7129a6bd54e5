#include "ncosim/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "ncosim/datagen.hpp"
#include "ncosim/errors.hpp"

namespace ncosim {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void append_double(std::string& out, double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

double mean_of(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_sd(const std::vector<double>& v) {
    const double m = mean_of(v);
    double s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

const char* quantity_name(Quantity q) {
    switch (q) {
        case Quantity::Contrast: return "contrast";
        case Quantity::Beta1: return "beta1";
        case Quantity::Beta2: return "beta2";
    }
    return "unknown";
}

void ScenarioConfig::check() const {
    if (n < 2) throw ConfigError("n must be at least 2");
    if (reps < 1) throw ConfigError("reps must be at least 1");
    if (!(p_y1_target > 0.0 && p_y1_target < 1.0))
        throw ConfigError("p_y1_target must lie in (0,1)");
    if (a_levels[0] < 0.0) throw ConfigError("a_levels must be nonnegative");
    if (a_levels[0] > a_levels[1] || a_levels[1] > a_levels[2])
        throw ConfigError("a_levels must be nondecreasing");
    if (methods.empty()) throw ConfigError("methods must be nonempty");
}

ScenarioConfig scenario_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (key != "n" && key != "reps" && key != "seed" && key != "design" &&
            key != "p_y1_target" && key != "a_levels" && key != "methods")
            throw ConfigError("unknown config key: " + key);
    }
    ScenarioConfig cfg;
    try {
        cfg.n = j.at("n").get<long long>();
        cfg.reps = j.at("reps").get<long long>();
        cfg.seed = j.at("seed").get<uint64_t>();
        cfg.design = design_from_string(j.at("design").get<std::string>());
        cfg.p_y1_target = j.at("p_y1_target").get<double>();
        const auto& levels = j.at("a_levels");
        if (!levels.is_array() || levels.size() != 3)
            throw ConfigError("a_levels must be a 3-element array");
        for (int i = 0; i < 3; ++i) cfg.a_levels[i] = levels.at(i).get<double>();
        cfg.methods.clear();
        for (const auto& m : j.at("methods"))
            cfg.methods.push_back(method_from_string(m.get<std::string>()));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config error: ") + e.what());
    }
    cfg.check();
    return cfg;
}

ScenarioConfig load_scenario_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return scenario_from_json_text(buf.str());
}

double relative_bias(const std::vector<double>& estimates, double truth) {
    if (estimates.empty()) throw ConfigError("relative bias of an empty sample");
    if (truth == 0.0) throw ZeroTruth();
    return std::fabs(mean_of(estimates) - truth) / std::fabs(truth);
}

double signed_relative_bias(const std::vector<double>& estimates, double truth) {
    if (estimates.empty()) throw ConfigError("relative bias of an empty sample");
    if (truth == 0.0) throw ZeroTruth();
    return (mean_of(estimates) - truth) / truth;
}

double corr_y1_y2(const StudyDataset& d) {
    const int n = d.n();
    double m1 = 0, m2 = 0;
    for (int i = 0; i < n; ++i) {
        m1 += d.y1[i];
        m2 += d.y2[i];
    }
    m1 /= n;
    m2 /= n;
    double s11 = 0, s22 = 0, s12 = 0;
    for (int i = 0; i < n; ++i) {
        const double a = d.y1[i] - m1;
        const double b = d.y2[i] - m2;
        s11 += a * a;
        s22 += b * b;
        s12 += a * b;
    }
    if (s11 == 0.0) throw ConstantColumn("y1");
    if (s22 == 0.0) throw ConstantColumn("y2");
    return s12 / std::sqrt(s11 * s22);
}

namespace {

RepEstimate to_rep_estimate(const EstimateReport& er) {
    RepEstimate re;
    re.ok = true;
    re.contrast = er.contrast;
    re.contrast_se = std::sqrt(er.contrast_var);
    switch (er.method) {
        case Method::JointNC:
            re.has_b1 = re.has_b2 = true;
            re.b1 = er.theta[1];
            re.b1_se = std::sqrt(er.cov(1, 1));
            re.b2 = er.theta[3];
            re.b2_se = std::sqrt(er.cov(3, 3));
            break;
        case Method::JointMH:
            re.has_b1 = re.has_b2 = true;
            re.b1 = er.theta[0];
            re.b1_se = std::sqrt(er.cov(0, 0));
            re.b2 = er.theta[1];
            re.b2_se = std::sqrt(er.cov(1, 1));
            break;
        case Method::JointReg: {
            const int p = static_cast<int>(er.theta.size()) / 2;
            re.has_b1 = re.has_b2 = true;
            re.b1 = er.theta[1];
            re.b1_se = std::sqrt(er.cov(1, 1));
            re.b2 = er.theta[p + 1];
            re.b2_se = std::sqrt(er.cov(p + 1, p + 1));
            break;
        }
        case Method::SSJoint:
            break;
        case Method::NaiveMH:
            re.has_b1 = true;
            re.b1 = er.theta[0];
            re.b1_se = std::sqrt(er.cov(0, 0));
            break;
        case Method::NaiveReg:
            re.has_b1 = true;
            re.b1 = er.theta[1];
            re.b1_se = std::sqrt(er.cov(1, 1));
            break;
    }
    return re;
}

struct RepSlot {
    bool gen_ok = false;
    bool corr_ok = false;
    double corr = 0;
    std::vector<RepEstimate> est;
};

struct QuantityPlan {
    Quantity quantity;
    const char* truth_name;
    double truth;
};

std::vector<QuantityPlan> quantity_plan(Design design, const TrueEffects& truth) {
    if (design == Design::Observational)
        return {{Quantity::Contrast, "log_nde", truth.log_nde}};
    std::vector<QuantityPlan> plan{{Quantity::Contrast, "log_nde", truth.log_nde},
                                   {Quantity::Beta1, "log_ate", truth.log_ate}};
    if (truth.log_nie != 0.0) plan.push_back({Quantity::Beta2, "log_nie", truth.log_nie});
    return plan;
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& cfg, int threads) {
    cfg.check();
    const GenerativeParams base = default_params(cfg.a_levels, cfg.p_y1_target);
    const GenerativeParams params =
        calibrate_intercepts(base, cfg.design, cfg.p_y1_target, base.y2_targets);
    const TrueEffects truth = true_effects(params, cfg.design);
    if (truth.log_nde == 0.0) throw ZeroTruth();

    const size_t n_methods = cfg.methods.size();
    std::vector<RepSlot> slots(cfg.reps);
    for (RepSlot& s : slots) s.est.resize(n_methods);

    int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    workers = static_cast<int>(std::min<long long>(workers, cfg.reps));

    std::atomic<long long> next{0};
    auto run_replicates = [&]() {
        for (;;) {
            const long long r = next.fetch_add(1, std::memory_order_relaxed);
            if (r >= cfg.reps) break;
            RepSlot& slot = slots[r];
            StudyDataset data;
            try {
                data = gen_study(params, cfg.design, static_cast<int>(cfg.n), cfg.seed,
                                 static_cast<uint64_t>(r));
            } catch (const Error&) {
                continue;
            }
            slot.gen_ok = true;
            try {
                slot.corr = corr_y1_y2(data);
                slot.corr_ok = true;
            } catch (const ConstantColumn&) {
            }
            for (size_t m = 0; m < n_methods; ++m) {
                try {
                    slot.est[m] = to_rep_estimate(estimate(data, cfg.methods[m]));
                } catch (const Error&) {
                }
            }
        }
    };
    if (workers == 1) {
        run_replicates();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(run_replicates);
        for (std::thread& t : pool) t.join();
    }

    ScenarioResult result;
    result.config = cfg;
    result.params = params;
    result.truth = truth;
    result.n_gen_failed = 0;
    result.mean_corr_y1_y2 = kNan;

    double corr_sum = 0;
    long long corr_count = 0;
    for (const RepSlot& s : slots) {
        if (!s.gen_ok) ++result.n_gen_failed;
        if (s.corr_ok) {
            corr_sum += s.corr;
            ++corr_count;
        }
    }
    if (corr_count > 0) result.mean_corr_y1_y2 = corr_sum / static_cast<double>(corr_count);

    result.estimates.resize(n_methods);
    for (size_t m = 0; m < n_methods; ++m) {
        result.estimates[m].resize(cfg.reps);
        for (long long r = 0; r < cfg.reps; ++r) result.estimates[m][r] = slots[r].est[m];
    }

    const std::vector<QuantityPlan> plan = quantity_plan(cfg.design, truth);
    for (size_t m = 0; m < n_methods; ++m) {
        for (const QuantityPlan& qp : plan) {
            std::vector<double> values;
            std::vector<double> ses;
            values.reserve(cfg.reps);
            ses.reserve(cfg.reps);
            for (long long r = 0; r < cfg.reps; ++r) {
                const RepEstimate& re = result.estimates[m][r];
                if (!re.ok) continue;
                switch (qp.quantity) {
                    case Quantity::Contrast:
                        values.push_back(re.contrast);
                        ses.push_back(re.contrast_se);
                        break;
                    case Quantity::Beta1:
                        if (!re.has_b1) continue;
                        values.push_back(re.b1);
                        ses.push_back(re.b1_se);
                        break;
                    case Quantity::Beta2:
                        if (!re.has_b2) continue;
                        values.push_back(re.b2);
                        ses.push_back(re.b2_se);
                        break;
                }
            }
            if (qp.quantity != Quantity::Contrast && values.empty())
                continue;  // method does not report this parameter
            MetricRow row;
            row.method = cfg.methods[m];
            row.quantity = qp.quantity;
            row.n_failed = cfg.reps - static_cast<long long>(values.size());
            row.truth_used = qp.truth_name;
            row.truth_value = qp.truth;
            row.degenerate_sd = values.size() < 2;
            if (values.empty()) {
                row.mean_relative_bias = kNan;
                row.signed_bias = kNan;
                row.sample_sd = kNan;
                row.mean_sandwich_se = kNan;
            } else {
                row.mean_relative_bias = relative_bias(values, qp.truth);
                row.signed_bias = signed_relative_bias(values, qp.truth);
                row.sample_sd = values.size() < 2 ? 0.0 : sample_sd(values);
                row.mean_sandwich_se = mean_of(ses);
            }
            result.rows.push_back(std::move(row));
        }
    }
    return result;
}

const MetricRow& find_row(const ScenarioResult& result, Method method, Quantity quantity) {
    for (const MetricRow& row : result.rows)
        if (row.method == method && row.quantity == quantity) return row;
    throw ConfigError(std::string("no metric row for ") + method_name(method) + "/" +
                      quantity_name(quantity));
}

namespace {

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file: " + path);
    out << content;
    if (!out) throw ConfigError("write failed: " + path);
}

void append_config_fields(std::string& line, const ScenarioConfig& cfg) {
    line += design_name(cfg.design);
    line += ',';
    line += std::to_string(cfg.n);
    line += ',';
    line += std::to_string(cfg.reps);
    line += ',';
    line += std::to_string(cfg.seed);
    line += ',';
    append_double(line, cfg.p_y1_target);
    for (double a : cfg.a_levels) {
        line += ',';
        append_double(line, a);
    }
}

void append_estimate_rows(std::string& out, const ScenarioResult& result) {
    for (size_t m = 0; m < result.config.methods.size(); ++m) {
        for (size_t r = 0; r < result.estimates[m].size(); ++r) {
            const RepEstimate& re = result.estimates[m][r];
            append_config_fields(out, result.config);
            out += ',';
            out += std::to_string(r);
            out += ',';
            out += method_name(result.config.methods[m]);
            out += ',';
            out += re.ok ? '1' : '0';
            out += ',';
            if (re.ok) {
                append_double(out, re.contrast);
                out += ',';
                append_double(out, re.contrast_se);
            } else {
                out += ',';
            }
            out += ',';
            if (re.ok && re.has_b1) {
                append_double(out, re.b1);
                out += ',';
                append_double(out, re.b1_se);
            } else {
                out += ',';
            }
            out += ',';
            if (re.ok && re.has_b2) {
                append_double(out, re.b2);
                out += ',';
                append_double(out, re.b2_se);
            } else {
                out += ',';
            }
            out += '\n';
        }
    }
}

const char* kEstimateHeader =
    "design,n,reps,seed,p_y1,a_low,a_medium,a_high,replicate,method,ok,"
    "contrast,contrast_se,b1,b1_se,b2,b2_se\n";

}  // namespace

void write_metrics_csv(const ScenarioResult& result, const std::string& path) {
    std::string out =
        "design,n,reps,seed,p_y1,a_low,a_medium,a_high,method,quantity,"
        "mean_relative_bias,signed_bias,sample_sd,mean_sandwich_se,n_failed,"
        "truth_used,truth,mean_corr_y1_y2\n";
    for (const MetricRow& row : result.rows) {
        append_config_fields(out, result.config);
        out += ',';
        out += method_name(row.method);
        out += ',';
        out += quantity_name(row.quantity);
        out += ',';
        append_double(out, row.mean_relative_bias);
        out += ',';
        append_double(out, row.signed_bias);
        out += ',';
        append_double(out, row.sample_sd);
        out += ',';
        append_double(out, row.mean_sandwich_se);
        out += ',';
        out += std::to_string(row.n_failed);
        out += ',';
        out += row.truth_used;
        out += ',';
        append_double(out, row.truth_value);
        out += ',';
        append_double(out, result.mean_corr_y1_y2);
        out += '\n';
    }
    write_file(path, out);
}

void write_estimates_csv(const ScenarioResult& result, const std::string& path) {
    std::string out = kEstimateHeader;
    append_estimate_rows(out, result);
    write_file(path, out);
}

namespace {

constexpr std::array<double, 3> kPrevalences{0.14, 0.05, 0.025};
constexpr std::array<std::array<double, 3>, 3> kTriples{
    {{0.0, 1.0, 2.5}, {0.0, 1.0, 2.0}, {0.0, 0.75, 1.5}}};

void append_bias_block(std::string& line, const ScenarioResult& res, Method m, Quantity q,
                       int field) {
    const MetricRow& row = find_row(res, m, q);
    switch (field) {
        case 0: append_double(line, row.mean_relative_bias); break;
        case 1: append_double(line, row.sample_sd); break;
        case 2: append_double(line, row.mean_sandwich_se); break;
        case 3: append_double(line, row.signed_bias); break;
        case 4: line += std::to_string(row.n_failed); break;
    }
}

}  // namespace

void run_table(TablePreset preset, long long reps, long long n, uint64_t seed, int threads,
               const std::string& out_path, const std::string& dump_path) {
    const bool s11 = preset == TablePreset::TableS11;
    std::string out;
    if (s11)
        out =
            "bias_contrast,bias_beta2,bias_beta1,sd_contrast,sd_beta2,sd_beta1,"
            "se_contrast,se_beta2,se_beta1,p_y1,a_low,a_medium,a_high,corr_y1_y2,"
            "truth_nde,truth_nie,truth_ate,signed_bias_contrast,signed_bias_beta2,"
            "signed_bias_beta1,n_failed\n";
    else
        out =
            "bias_joint_mh,bias_joint_reg,bias_mh,bias_reg,sd_joint_mh,sd_joint_reg,"
            "se_joint_mh,se_joint_reg,p_y1,a_low,a_medium,a_high,corr_y1_y2,"
            "truth_used,truth,signed_bias_joint_mh,signed_bias_joint_reg,"
            "signed_bias_mh,signed_bias_reg,n_failed_joint_mh,n_failed_joint_reg,"
            "n_failed_mh,n_failed_reg\n";
    std::string dump = kEstimateHeader;

    const std::vector<Method> table1_methods{Method::JointMH, Method::JointReg,
                                             Method::NaiveMH, Method::NaiveReg};
    for (double p : kPrevalences) {
        for (const auto& triple : kTriples) {
            ScenarioConfig cfg;
            cfg.n = n;
            cfg.reps = reps;
            cfg.seed = seed;
            cfg.p_y1_target = p;
            cfg.a_levels = triple;
            cfg.design = s11 ? Design::UnblindedRCT : Design::Observational;
            cfg.methods = s11 ? std::vector<Method>{Method::JointNC} : table1_methods;
            ScenarioResult res = run_scenario(cfg, threads);

            std::string line;
            if (s11) {
                const Method m = Method::JointNC;
                const std::array<Quantity, 3> qs{Quantity::Contrast, Quantity::Beta2,
                                                 Quantity::Beta1};
                for (Quantity q : qs) {
                    append_bias_block(line, res, m, q, 0);
                    line += ',';
                }
                for (Quantity q : qs) {
                    append_bias_block(line, res, m, q, 1);
                    line += ',';
                }
                for (Quantity q : qs) {
                    append_bias_block(line, res, m, q, 2);
                    line += ',';
                }
                append_double(line, p);
                for (double a : triple) {
                    line += ',';
                    append_double(line, a);
                }
                line += ',';
                append_double(line, res.mean_corr_y1_y2);
                line += ',';
                append_double(line, res.truth.log_nde);
                line += ',';
                append_double(line, res.truth.log_nie);
                line += ',';
                append_double(line, res.truth.log_ate);
                for (Quantity q : qs) {
                    line += ',';
                    append_bias_block(line, res, m, q, 3);
                }
                line += ',';
                append_bias_block(line, res, m, Quantity::Contrast, 4);
            } else {
                for (Method m : table1_methods) {
                    append_bias_block(line, res, m, Quantity::Contrast, 0);
                    line += ',';
                }
                for (Method m : {Method::JointMH, Method::JointReg}) {
                    append_bias_block(line, res, m, Quantity::Contrast, 1);
                    line += ',';
                }
                for (Method m : {Method::JointMH, Method::JointReg}) {
                    append_bias_block(line, res, m, Quantity::Contrast, 2);
                    line += ',';
                }
                append_double(line, p);
                for (double a : triple) {
                    line += ',';
                    append_double(line, a);
                }
                line += ',';
                append_double(line, res.mean_corr_y1_y2);
                line += ",log_nde,";
                append_double(line, res.truth.log_nde);
                for (Method m : table1_methods) {
                    line += ',';
                    append_bias_block(line, res, m, Quantity::Contrast, 3);
                }
                for (Method m : table1_methods) {
                    line += ',';
                    append_bias_block(line, res, m, Quantity::Contrast, 4);
                }
            }
            line += '\n';
            out += line;
            if (!dump_path.empty()) append_estimate_rows(dump, res);
        }
    }
    write_file(out_path, out);
    if (!dump_path.empty()) write_file(dump_path, dump);
}

}  // namespace ncosim
