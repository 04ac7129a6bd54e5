#include "ncosim/dataset.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

#include "ncosim/errors.hpp"

namespace ncosim {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

int parse_int(const std::string& tok, long row, const std::string& col) {
    int v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size())
        throw CsvTypeError("cannot parse '" + tok + "' as integer in column " + col, row);
    return v;
}

double parse_double(const std::string& tok, long row, const std::string& col) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size())
        throw CsvTypeError("cannot parse '" + tok + "' as number in column " + col, row);
    return v;
}

void append_double(std::string& out, double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, p);
}

}  // namespace

std::vector<Violation> validate(const StudyDataset& d) {
    std::vector<Violation> out;
    const size_t n = d.t.size();
    auto check_len = [&](size_t len, const char* col) {
        if (len != n) out.push_back({std::string("LengthMismatch(") + col + ")", -1});
    };
    check_len(d.y1.size(), "y1");
    check_len(d.y2.size(), "y2");
    if (!d.w_site.empty()) check_len(d.w_site.size(), "w_site");
    if (!d.w_age.empty()) check_len(d.w_age.size(), "w_age");
    if (d.has_strains()) check_len(d.y2_strains.size() / d.n_strains, "y2_strains");
    if (!out.empty()) return out;

    auto first_bad = [&](const std::vector<int>& v, auto pred) -> long {
        for (size_t i = 0; i < v.size(); ++i)
            if (!pred(v[i])) return static_cast<long>(i);
        return -1;
    };
    auto binary = [](int x) { return x == 0 || x == 1; };
    if (long r = first_bad(d.t, binary); r >= 0) out.push_back({"BinaryViolation(t)", r});
    if (long r = first_bad(d.y1, binary); r >= 0) out.push_back({"BinaryViolation(y1)", r});
    if (long r = first_bad(d.y2, [](int x) { return x >= 0; }); r >= 0)
        out.push_back({"NegativeCount(y2)", r});
    if (!d.w_site.empty())
        if (long r = first_bad(d.w_site, [](int x) { return x >= 0 && x <= 2; }); r >= 0)
            out.push_back({"CategoryViolation(w_site)", r});
    if (d.has_strains()) {
        for (size_t i = 0; i < n; ++i) {
            int sum = 0;
            bool bin = true;
            for (int j = 0; j < d.n_strains; ++j) {
                const int s = d.y2_strains[i * d.n_strains + j];
                bin = bin && binary(s);
                sum += s;
            }
            if (!bin) {
                out.push_back({"BinaryViolation(y2_strains)", static_cast<long>(i)});
                break;
            }
            if (sum != d.y2[i]) {
                out.push_back({"StrainSumMismatch", static_cast<long>(i)});
                break;
            }
        }
    }
    return out;
}

void require_both_arms(const StudyDataset& d) {
    int n1 = 0;
    for (int ti : d.t) n1 += ti;
    if (n1 == 0 || n1 == d.n()) throw EmptyArm();
}

StudyDataset load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw MissingColumn("id (empty file)");
    const auto header = split_csv_line(line);

    std::map<std::string, int> col;
    int max_strain = 0;
    for (size_t i = 0; i < header.size(); ++i) {
        const std::string& h = header[i];
        if (col.count(h)) throw CsvTypeError("duplicate column " + h, 0);
        if (h == "id" || h == "t" || h == "y1" || h == "y2" || h == "w_site" || h == "w_age") {
            col[h] = static_cast<int>(i);
        } else if (h.rfind("y2_", 0) == 0) {
            const int j = parse_int(h.substr(3), 0, h);
            if (j < 1) throw CsvTypeError("bad strain column " + h, 0);
            col[h] = static_cast<int>(i);
            max_strain = std::max(max_strain, j);
        } else {
            throw CsvTypeError("unrecognized column " + h, 0);
        }
    }
    for (const char* req : {"id", "t", "y1"})
        if (!col.count(req)) throw MissingColumn(req);
    if (!col.count("y2") && max_strain == 0) throw MissingColumn("y2");
    if (col.count("w_site") != col.count("w_age"))
        throw MissingColumn(col.count("w_site") ? "w_age" : "w_site");
    std::vector<int> strain_cols;
    for (int j = 1; j <= max_strain; ++j) {
        const std::string name = "y2_" + std::to_string(j);
        if (!col.count(name)) throw MissingColumn(name);
        strain_cols.push_back(col[name]);
    }

    StudyDataset d;
    d.n_strains = max_strain;
    const bool has_w = col.count("w_site") > 0;
    const bool has_y2 = col.count("y2") > 0;
    long row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto tok = split_csv_line(line);
        if (tok.size() != header.size())
            throw CsvTypeError("expected " + std::to_string(header.size()) + " fields, got " +
                                   std::to_string(tok.size()),
                               row);
        d.t.push_back(parse_int(tok[col["t"]], row, "t"));
        d.y1.push_back(parse_int(tok[col["y1"]], row, "y1"));
        int strain_sum = 0;
        for (int j = 0; j < max_strain; ++j) {
            const int s = parse_int(tok[strain_cols[j]], row, header[strain_cols[j]]);
            d.y2_strains.push_back(s);
            strain_sum += s;
        }
        d.y2.push_back(has_y2 ? parse_int(tok[col["y2"]], row, "y2") : strain_sum);
        if (has_w) {
            d.w_site.push_back(parse_int(tok[col["w_site"]], row, "w_site"));
            d.w_age.push_back(parse_double(tok[col["w_age"]], row, "w_age"));
        }
        ++row;
    }

    const auto violations = validate(d);
    if (!violations.empty())
        throw CsvTypeError(violations.front().invariant, violations.front().row);
    require_both_arms(d);
    return d;
}

void write_dataset(const StudyDataset& d, const std::string& path) {
    std::string out = "id,t,y1,y2";
    if (d.has_w()) out += ",w_site,w_age";
    for (int j = 1; j <= d.n_strains; ++j) out += ",y2_" + std::to_string(j);
    out += '\n';
    for (int i = 0; i < d.n(); ++i) {
        out += std::to_string(i + 1);
        out += ',';
        out += std::to_string(d.t[i]);
        out += ',';
        out += std::to_string(d.y1[i]);
        out += ',';
        out += std::to_string(d.y2[i]);
        if (d.has_w()) {
            out += ',';
            out += std::to_string(d.w_site[i]);
            out += ',';
            append_double(out, d.w_age[i]);
        }
        for (int j = 0; j < d.n_strains; ++j) {
            out += ',';
            out += std::to_string(d.strain(i, j));
        }
        out += '\n';
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path);
    f << out;
}

}  // namespace ncosim
