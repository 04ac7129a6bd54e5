#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ncosim/dataset.hpp"
#include "ncosim/estimators.hpp"
#include "ncosim/oracle.hpp"
#include "ncosim/params.hpp"

namespace ncosim {

struct ScenarioConfig {
    long long n = 10000;
    long long reps = 500;
    uint64_t seed = 42;
    Design design = Design::Observational;
    double p_y1_target = 0.14;
    std::array<double, 3> a_levels{0.0, 1.0, 2.5};
    std::vector<Method> methods{Method::JointMH, Method::JointReg, Method::NaiveMH,
                                Method::NaiveReg};

    void check() const;  // throws ConfigError on invariant violations
};

// Strict JSON parse: exactly the documented keys, unknown keys rejected.
ScenarioConfig scenario_from_json_text(const std::string& text);
ScenarioConfig load_scenario_config(const std::string& path);

// |mean - truth| / |truth|; the absolute value matches the reporting
// convention of the reproduced tables, where the naive methods' signed ratio
// against a negative truth would flip sign.
double relative_bias(const std::vector<double>& estimates, double truth);
double signed_relative_bias(const std::vector<double>& estimates, double truth);

// Pearson correlation over subjects.
double corr_y1_y2(const StudyDataset& d);

struct RepEstimate {
    bool ok = false;
    double contrast = 0, contrast_se = 0;
    bool has_b1 = false, has_b2 = false;
    double b1 = 0, b1_se = 0;
    double b2 = 0, b2_se = 0;

    bool operator==(const RepEstimate&) const = default;
};

enum class Quantity { Contrast, Beta1, Beta2 };
const char* quantity_name(Quantity q);

struct MetricRow {
    Method method;
    Quantity quantity;
    double mean_relative_bias;
    double signed_bias;
    double sample_sd;
    double mean_sandwich_se;
    long long n_failed;
    std::string truth_used;  // log_nde | log_ate | log_nie
    double truth_value;
    bool degenerate_sd;  // fewer than two surviving replicates

    bool operator==(const MetricRow&) const = default;
};

struct ScenarioResult {
    ScenarioConfig config;
    GenerativeParams params;  // calibrated
    TrueEffects truth;
    std::vector<MetricRow> rows;
    double mean_corr_y1_y2;  // NaN when no replicate yielded a correlation
    long long n_gen_failed;
    // replicate-level estimates, [method index][replicate]; failed replicates
    // keep ok = false
    std::vector<std::vector<RepEstimate>> estimates;
};

// Calibrates, computes exact truth, runs the replicates across a worker pool
// (threads <= 0 picks the hardware count), and aggregates. The result is
// bit-identical for any thread count at a fixed seed.
ScenarioResult run_scenario(const ScenarioConfig& cfg, int threads = 0);

const MetricRow& find_row(const ScenarioResult& result, Method method, Quantity quantity);

enum class TablePreset { Table1, TableS11 };

// 9-scenario grid (3 prevalences x 3 behavior triples); writes the wide
// aggregate CSV; optionally dumps every replicate estimate. Values are
// reported, never graded here.
void run_table(TablePreset preset, long long reps, long long n, uint64_t seed, int threads,
               const std::string& out_path, const std::string& dump_path = "");

// Long-format aggregate rows for a single scenario.
void write_metrics_csv(const ScenarioResult& result, const std::string& path);
void write_estimates_csv(const ScenarioResult& result, const std::string& path);

}  // namespace ncosim
