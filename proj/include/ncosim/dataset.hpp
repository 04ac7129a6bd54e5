#pragma once

#include <string>
#include <vector>

namespace ncosim {

// Columnar subject-level study data. Required columns: treatment indicator t,
// targeted infection y1, total nontargeted infections y2. Optional: per-strain
// nontargeted indicators (flattened n x n_strains), site and age covariates.
struct StudyDataset {
    std::vector<int> t;
    std::vector<int> y1;
    std::vector<int> y2;
    std::vector<int> y2_strains;  // empty, or n * n_strains row-major
    int n_strains = 0;
    std::vector<int> w_site;      // empty or length n, values in {0,1,2}
    std::vector<double> w_age;    // empty or length n

    int n() const { return static_cast<int>(t.size()); }
    bool has_w() const { return !w_site.empty() && !w_age.empty(); }
    bool has_strains() const { return n_strains > 0; }
    int strain(int i, int j) const { return y2_strains[static_cast<size_t>(i) * n_strains + j]; }
};

struct Violation {
    std::string invariant;
    long row;

    std::string describe() const { return invariant + " at row " + std::to_string(row); }
};

// Checks every dataset invariant; empty result means the dataset is valid.
std::vector<Violation> validate(const StudyDataset& d);

// Throws EmptyArm unless both arms are nonempty.
void require_both_arms(const StudyDataset& d);

// CSV interchange, header id,t,y1,y2[,w_site,w_age][,y2_1..y2_K]. Loading a
// file whose strain columns are present without y2 fills y2 with row sums.
StudyDataset load_dataset(const std::string& path);
void write_dataset(const StudyDataset& d, const std::string& path);

}  // namespace ncosim
