#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ncosim {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SingularMatrix : Error {
    int pivot_index;
    explicit SingularMatrix(int idx)
        : Error("singular matrix: pivot underflow at index " + std::to_string(idx)),
          pivot_index(idx) {}
};

struct NonConvergence : Error {
    std::vector<double> best_theta;
    double residual;
    NonConvergence(std::vector<double> theta, double res)
        : Error("estimating equation solver did not converge; residual " +
                std::to_string(res)),
          best_theta(std::move(theta)), residual(res) {}
};

struct MissingColumn : Error {
    explicit MissingColumn(const std::string& col)
        : Error("missing column: " + col) {}
};

struct CsvTypeError : Error {
    long row;
    CsvTypeError(const std::string& what, long row_idx)
        : Error("row " + std::to_string(row_idx) + ": " + what), row(row_idx) {}
};

struct EmptyArm : Error {
    EmptyArm() : Error("a treatment arm has zero subjects") {}
};

struct ZeroCell : Error {
    explicit ZeroCell(const std::string& which)
        : Error("zero cell: " + which) {}
};

struct NoInformativeStrata : Error {
    NoInformativeStrata() : Error("no stratum has subjects in both arms") {}
};

struct RankDeficientDesign : Error {
    RankDeficientDesign() : Error("design matrix is rank deficient") {}
};

struct MeanOutOfRange : Error {
    double mean;
    MeanOutOfRange(const std::string& where, double m)
        : Error("outcome mean " + std::to_string(m) + " out of [0,1] at " + where),
          mean(m) {}
};

struct CalibrationMissing : Error {
    CalibrationMissing() : Error("intercepts not calibrated") {}
};

struct CalibrationImpossible : Error {
    explicit CalibrationImpossible(const std::string& why)
        : Error("calibration impossible: " + why) {}
};

struct ZeroTruth : Error {
    ZeroTruth() : Error("relative bias undefined for zero truth") {}
};

struct ConstantColumn : Error {
    explicit ConstantColumn(const std::string& col)
        : Error("column is constant: " + col) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error(what) {}
};

}  // namespace ncosim
