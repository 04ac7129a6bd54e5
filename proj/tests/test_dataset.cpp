#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "ncosim/dataset.hpp"
#include "ncosim/errors.hpp"

using namespace ncosim;

namespace {

struct TempCsv {
    std::string path;
    TempCsv(const std::string& name, const std::string& content) : path(name) {
        std::ofstream f(path, std::ios::binary);
        f << content;
    }
    ~TempCsv() { std::remove(path.c_str()); }
};

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("load_dataset parses a minimal file") {
    TempCsv f("tmp_ds_minimal.csv", "id,t,y1,y2\n1,1,1,2\n2,1,0,1\n3,0,1,1\n4,0,1,0\n");
    const StudyDataset d = load_dataset(f.path);
    CHECK(d.n() == 4);
    CHECK(d.t[0] + d.t[1] + d.t[2] + d.t[3] == 2);
    CHECK(d.y2[0] == 2);
    CHECK_FALSE(d.has_w());
    CHECK_FALSE(d.has_strains());
}

TEST_CASE("strain columns without y2 fill y2 with row sums") {
    TempCsv f("tmp_ds_strains.csv",
              "id,t,y1,y2_1,y2_2,y2_3\n1,1,1,1,0,1\n2,0,0,0,1,1\n3,0,1,0,0,0\n");
    const StudyDataset d = load_dataset(f.path);
    CHECK(d.n_strains == 3);
    CHECK(d.y2[0] == 2);
    CHECK(d.y2[1] == 2);
    CHECK(d.y2[2] == 0);
}

TEST_CASE("single-arm file is rejected") {
    TempCsv f("tmp_ds_onearm.csv", "id,t,y1,y2\n1,1,1,2\n2,1,0,1\n");
    CHECK_THROWS_AS(load_dataset(f.path), EmptyArm);
}

TEST_CASE("missing required columns are reported by name") {
    TempCsv a("tmp_ds_noy1.csv", "id,t,y2\n1,1,2\n2,0,1\n");
    CHECK_THROWS_AS(load_dataset(a.path), MissingColumn);
    TempCsv b("tmp_ds_halfw.csv", "id,t,y1,y2,w_site\n1,1,1,2,0\n2,0,0,1,1\n");
    CHECK_THROWS_AS(load_dataset(b.path), MissingColumn);
}

TEST_CASE("unparsable field reports the row index") {
    TempCsv f("tmp_ds_badint.csv", "id,t,y1,y2\n1,1,1,2\n2,x,0,1\n3,0,1,1\n");
    try {
        load_dataset(f.path);
        FAIL("expected CsvTypeError");
    } catch (const CsvTypeError& e) {
        CHECK(e.row == 1);
    }
}

TEST_CASE("validate flags a nonbinary y1 with its row") {
    StudyDataset d;
    d.t = {1, 0, 1, 0};
    d.y1 = {0, 1, 0, 2};
    d.y2 = {0, 1, 2, 0};
    const auto v = validate(d);
    REQUIRE(v.size() == 1);
    CHECK(v[0].invariant == "BinaryViolation(y1)");
    CHECK(v[0].row == 3);
}

TEST_CASE("validate accepts a clean dataset") {
    StudyDataset d;
    d.t = {1, 0};
    d.y1 = {1, 0};
    d.y2 = {2, 0};
    CHECK(validate(d).empty());
}

TEST_CASE("validate flags a strain sum mismatch at its first row") {
    StudyDataset d;
    d.t = {1, 0};
    d.y1 = {1, 0};
    d.y2 = {2, 1};
    d.n_strains = 2;
    d.y2_strains = {1, 0, 1, 0};  // row 0 sums to 1, not 2
    const auto v = validate(d);
    REQUIRE(v.size() == 1);
    CHECK(v[0].invariant == "StrainSumMismatch");
    CHECK(v[0].row == 0);
}

TEST_CASE("write then load round-trips bit-exactly for canonical files") {
    StudyDataset d;
    d.t = {1, 0, 1, 0, 1};
    d.y1 = {1, 1, 0, 0, 1};
    d.y2 = {2, 1, 0, 1, 1};
    d.w_site = {0, 1, 2, 1, 0};
    d.w_age = {15.0, 16.5, 18.0, 20.5, 21.0};
    d.n_strains = 2;
    d.y2_strains = {1, 1, 0, 1, 0, 0, 1, 0, 1, 0};

    const std::string p1 = "tmp_ds_rt1.csv", p2 = "tmp_ds_rt2.csv";
    write_dataset(d, p1);
    const StudyDataset loaded = load_dataset(p1);
    write_dataset(loaded, p2);
    CHECK(slurp(p1) == slurp(p2));
    CHECK(loaded.t == d.t);
    CHECK(loaded.y2_strains == d.y2_strains);
    CHECK(loaded.w_age == d.w_age);
    std::remove(p1.c_str());
    std::remove(p2.c_str());
}

TEST_CASE("loading rejects a file whose strain sums contradict y2") {
    TempCsv f("tmp_ds_badsum.csv", "id,t,y1,y2,y2_1,y2_2\n1,1,1,2,1,0\n2,0,0,1,0,1\n");
    CHECK_THROWS_AS(load_dataset(f.path), CsvTypeError);
}
