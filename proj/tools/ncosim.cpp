#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ncosim/datagen.hpp"
#include "ncosim/errors.hpp"
#include "ncosim/estimators.hpp"
#include "ncosim/oracle.hpp"
#include "ncosim/scenario.hpp"

namespace {

using namespace ncosim;

constexpr double kZ95 = 1.959963984540054;

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file: " + path);
    out << content;
    if (!out) throw ConfigError("write failed: " + path);
}

nlohmann::json report_to_json(const EstimateReport& er) {
    nlohmann::json j;
    j["method"] = method_name(er.method);
    j["theta"] = er.theta;
    std::vector<std::vector<double>> cov(er.cov.rows(), std::vector<double>(er.cov.cols()));
    std::vector<double> se(er.cov.rows());
    for (int r = 0; r < er.cov.rows(); ++r) {
        for (int c = 0; c < er.cov.cols(); ++c) cov[r][c] = er.cov(r, c);
        se[r] = std::sqrt(er.cov(r, r));
    }
    j["cov"] = cov;
    j["se"] = se;
    const double cse = std::sqrt(er.contrast_var);
    j["contrast"] = er.contrast;
    j["contrast_var"] = er.contrast_var;
    j["contrast_se"] = cse;
    j["contrast_ci95"] = {er.contrast - kZ95 * cse, er.contrast + kZ95 * cse};
    j["exp_contrast"] = er.exp_contrast;
    j["exp_contrast_var"] = er.exp_contrast_var;
    j["exp_contrast_ci95"] = {std::exp(er.contrast - kZ95 * cse),
                              std::exp(er.contrast + kZ95 * cse)};
    j["zero_weight_strata"] = er.zero_weight_strata;
    j["dropped_strata"] = er.dropped_strata;
    j["degenerate_cov"] = er.degenerate_cov;
    return j;
}

StrataBy parse_strata(const std::string& spec) {
    StrataBy by{false, false};
    if (spec.empty() || spec == "none") return by;
    size_t pos = 0;
    while (pos < spec.size()) {
        size_t comma = spec.find(',', pos);
        if (comma == std::string::npos) comma = spec.size();
        const std::string tok = spec.substr(pos, comma - pos);
        if (tok == "w_site")
            by.by_site = true;
        else if (tok == "w_age")
            by.by_age = true;
        else
            throw ConfigError("unknown stratification variable: " + tok);
        pos = comma + 1;
    }
    return by;
}

void print_rows(const ScenarioResult& res) {
    for (const MetricRow& row : res.rows) {
        std::cout << method_name(row.method) << " " << quantity_name(row.quantity)
                  << ": bias=" << row.mean_relative_bias << " sd=" << row.sample_sd
                  << " se=" << row.mean_sandwich_se << " truth(" << row.truth_used
                  << ")=" << row.truth_value << " failed=" << row.n_failed << "\n";
    }
    std::cout << "mean corr(y1,y2)=" << res.mean_corr_y1_y2
              << " gen_failed=" << res.n_gen_failed << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"negative-control joint estimators: simulation and estimation"};
    app.require_subcommand(1);
    app.fallthrough();

    int threads = 0;
    uint64_t seed = 42;
    app.add_option("--threads", threads, "worker threads, 0 = hardware count");
    auto* seed_opt = app.add_option("--seed", seed, "RNG seed (overrides config seed)");

    auto* sim = app.add_subcommand("simulate", "run one scenario from a JSON config");
    std::string sim_config, sim_out;
    std::string sim_dump_est, sim_dump_params, sim_dump_data;
    sim->add_option("--config", sim_config, "scenario JSON")->required()->check(CLI::ExistingFile);
    sim->add_option("--out", sim_out, "aggregate metrics CSV")->required();
    sim->add_option("--dump-estimates", sim_dump_est, "replicate-level estimates CSV");
    sim->add_option("--dump-params", sim_dump_params, "calibrated generative parameters JSON");
    sim->add_option("--dump-dataset", sim_dump_data, "replicate 0 dataset CSV");

    auto* t1 = app.add_subcommand("table1", "observational 9-scenario bias grid");
    auto* rct = app.add_subcommand("rct", "unblinded RCT 9-scenario bias grid");
    long long tab_reps = 500, tab_n = 10000;
    std::string tab_out, tab_dump;
    for (CLI::App* t : {t1, rct}) {
        t->add_option("--reps", tab_reps, "replicates per scenario");
        t->add_option("--n", tab_n, "subjects per replicate");
        t->add_option("--out", tab_out, "grid CSV")->required();
        t->add_option("--dump-estimates", tab_dump, "replicate-level estimates CSV");
    }

    auto* est = app.add_subcommand("estimate", "fit one method to a dataset CSV");
    std::string est_data, est_method, est_strata = "w_site,w_age", est_out;
    int est_age_poly = 2;
    bool est_site_dummies = true;
    est->add_option("--data", est_data, "dataset CSV")->required()->check(CLI::ExistingFile);
    est->add_option("--method", est_method,
                    "joint_nc | joint_mh | joint_reg | ss_joint | naive_mh | naive_reg")
        ->required();
    est->add_option("--strata", est_strata, "stratification variables, e.g. w_site,w_age");
    est->add_option("--age-poly", est_age_poly, "age polynomial degree in the regressions");
    est->add_flag("--site-dummies,!--no-site-dummies", est_site_dummies,
                  "include site indicators in the regressions");
    est->add_option("--out", est_out, "write the report JSON here instead of stdout");

    auto* orc = app.add_subcommand("oracle", "exact effects and naive limits for a config");
    std::string orc_config, orc_out, orc_dump_params;
    orc->add_option("--config", orc_config, "scenario JSON")->required()->check(CLI::ExistingFile);
    orc->add_option("--out", orc_out, "write the oracle JSON here instead of stdout");
    orc->add_option("--dump-params", orc_dump_params, "calibrated generative parameters JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            ScenarioConfig cfg = load_scenario_config(sim_config);
            if (seed_opt->count() > 0) cfg.seed = seed;
            ScenarioResult res = run_scenario(cfg, threads);
            print_rows(res);
            write_metrics_csv(res, sim_out);
            std::cout << "wrote " << sim_out << "\n";
            if (!sim_dump_est.empty()) {
                write_estimates_csv(res, sim_dump_est);
                std::cout << "wrote " << sim_dump_est << "\n";
            }
            if (!sim_dump_params.empty()) {
                write_text(sim_dump_params, params_to_json(res.params));
                std::cout << "wrote " << sim_dump_params << "\n";
            }
            if (!sim_dump_data.empty()) {
                StudyDataset d = gen_study(res.params, cfg.design, static_cast<int>(cfg.n),
                                           cfg.seed, 0, true);
                write_dataset(d, sim_dump_data);
                std::cout << "wrote " << sim_dump_data << "\n";
            }
        } else if (t1->parsed() || rct->parsed()) {
            const TablePreset preset = t1->parsed() ? TablePreset::Table1 : TablePreset::TableS11;
            run_table(preset, tab_reps, tab_n, seed, threads, tab_out, tab_dump);
            std::cout << "wrote " << tab_out << "\n";
            if (!tab_dump.empty()) std::cout << "wrote " << tab_dump << "\n";
        } else if (est->parsed()) {
            const StudyDataset data = load_dataset(est_data);
            const Method method = method_from_string(est_method);
            const StrataBy by = parse_strata(est_strata);
            const RegressionSpec spec{est_age_poly, est_site_dummies};
            const EstimateReport er = estimate(data, method, by, spec);
            const std::string text = report_to_json(er).dump(2) + "\n";
            if (est_out.empty())
                std::cout << text;
            else {
                write_text(est_out, text);
                std::cout << "wrote " << est_out << "\n";
            }
        } else if (orc->parsed()) {
            ScenarioConfig cfg = load_scenario_config(orc_config);
            const GenerativeParams base = default_params(cfg.a_levels, cfg.p_y1_target);
            const GenerativeParams params =
                calibrate_intercepts(base, cfg.design, cfg.p_y1_target, base.y2_targets);
            const TrueEffects fx = true_effects(params, cfg.design);
            const NaiveContrasts nc = naive_population_contrasts(params, cfg.design);
            const MhLimits mh = population_mh_limits(params, cfg.design);
            nlohmann::json j;
            j["design"] = design_name(cfg.design);
            j["p_y1_target"] = cfg.p_y1_target;
            j["a_levels"] = cfg.a_levels;
            j["log_ate"] = fx.log_ate;
            j["log_nde"] = fx.log_nde;
            j["log_nie"] = fx.log_nie;
            j["naive_log_c1"] = nc.log_c1;
            j["naive_log_c2"] = nc.log_c2;
            j["mh_limit_beta1"] = mh.beta1;
            j["mh_limit_beta2"] = mh.beta2;
            const std::string text = j.dump(2) + "\n";
            if (orc_out.empty())
                std::cout << text;
            else {
                write_text(orc_out, text);
                std::cout << "wrote " << orc_out << "\n";
            }
            if (!orc_dump_params.empty()) {
                write_text(orc_dump_params, params_to_json(params));
                std::cout << "wrote " << orc_dump_params << "\n";
            }
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
