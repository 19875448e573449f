#include "fisherlab/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "fisherlab/errors.hpp"

namespace fisherlab {

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace {

const char* csv_header = "t,ix,ip,product,analytic_product,rel_err";

std::string csv_body(const CurveSeries& series) {
    std::string out;
    out += csv_header;
    out += '\n';
    for (const CurveEntry& e : series.entries) {
        out += format_double(e.t);
        out += ',';
        out += format_double(e.i_x);
        out += ',';
        out += format_double(e.i_p);
        out += ',';
        out += format_double(e.product);
        out += ',';
        if (e.analytic_product) {
            out += format_double(*e.analytic_product);
            out += ',';
            if (const auto re = e.rel_err()) out += format_double(*re);
        } else {
            out += ',';
        }
        out += '\n';
    }
    return out;
}

nlohmann::json to_json(const CurveSeries& series) {
    nlohmann::json j;
    j["meta"] = nlohmann::json::object();
    for (const auto& [k, v] : series.meta) j["meta"][k] = v;
    j["entries"] = nlohmann::json::array();
    for (const CurveEntry& e : series.entries) {
        nlohmann::json je{{"t", e.t}, {"ix", e.i_x}, {"ip", e.i_p}, {"product", e.product}};
        if (e.analytic_product) {
            je["analytic_product"] = *e.analytic_product;
            if (const auto re = e.rel_err()) je["rel_err"] = *re;
        }
        j["entries"].push_back(std::move(je));
    }
    if (series.fit) {
        j["fit"] = {{"amplitude", series.fit->amplitude}, {"exponent", series.fit->exponent},
                    {"t_lo", series.fit->t_lo},           {"t_hi", series.fit->t_hi},
                    {"residual", series.fit->residual}};
    }
    return j;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) fail_io("cannot open '" + path.string() + "' for writing");
    f << content;
    f.flush();
    if (!f) fail_io("write to '" + path.string() + "' failed");
}

double parse_field(const std::string& s, const std::string& where) {
    const char* b = s.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(b, &end);
    if (end == b || *end != '\0' || errno == ERANGE)
        fail_io("malformed number '" + s + "' in " + where);
    return v;
}

}  // namespace

void write_csv(const CurveSeries& series, std::ostream& out) { out << csv_body(series); }

void write_csv(const CurveSeries& series, const std::filesystem::path& path) {
    write_file(path, csv_body(series));
}

CurveSeries read_csv(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) fail_io("cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(f, line) || line != csv_header)
        fail_io("'" + path.string() + "' does not start with the expected header");
    CurveSeries series;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) fields.push_back(cell);
        while (fields.size() < 6) fields.emplace_back();
        if (fields.size() != 6) fail_io("unexpected column count in '" + path.string() + "'");
        CurveEntry e;
        e.t = parse_field(fields[0], path.string());
        e.i_x = parse_field(fields[1], path.string());
        e.i_p = parse_field(fields[2], path.string());
        e.product = parse_field(fields[3], path.string());
        if (!fields[4].empty()) e.analytic_product = parse_field(fields[4], path.string());
        series.entries.push_back(e);
    }
    return series;
}

void write_json(const CurveSeries& series, std::ostream& out) { out << to_json(series).dump(2) << '\n'; }

void write_json(const CurveSeries& series, const std::filesystem::path& path) {
    write_file(path, to_json(series).dump(2) + "\n");
}

WaveFunction load_state(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) fail_io("cannot open state file '" + path.string() + "'");

    std::vector<double> xs;
    std::vector<complexd> amps;
    std::string line;
    size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ss(line);
        double x, re, im;
        if (!(ss >> x >> re >> im))
            fail_io("state file '" + path.string() + "' line " + std::to_string(lineno) +
                    ": expected three columns (x, Re, Im)");
        std::string rest;
        if (ss >> rest)
            fail_io("state file '" + path.string() + "' line " + std::to_string(lineno) +
                    ": trailing garbage '" + rest + "'");
        xs.push_back(x);
        amps.emplace_back(re, im);
    }
    if (xs.size() < 8) fail_io("state file '" + path.string() + "' has fewer than 8 rows");

    const int n = static_cast<int>(xs.size());
    const double dx = (xs.back() - xs.front()) / (n - 1);
    if (!(dx > 0.0)) fail_io("state file '" + path.string() + "': x column must ascend");
    for (int i = 1; i < n; ++i) {
        const double step = xs[i] - xs[i - 1];
        if (std::abs(step - dx) > 1e-9 * std::abs(dx))
            fail_io("state file '" + path.string() + "': non-uniform x spacing at row " +
                    std::to_string(i + 1));
    }

    WaveFunction wf;
    wf.grid = Grid{xs.front(), dx, n};
    wf.space = Space::position;
    wf.amp = std::move(amps);
    if (!(norm_sq(wf) > 0.0)) fail_bad_state("state file '" + path.string() + "' has zero norm");
    wf = normalize(wf);

    // Band-limit proxy: a sampled state whose momentum content reaches the
    // lattice Nyquist is not resolved by its own sampling; reject it.
    const WaveFunction wfp = to_momentum(wf);
    const double p_edge = 0.9 * std::abs(wfp.grid.p_min());
    double outer = 0.0;
    for (int m = 0; m < n; ++m)
        if (std::abs(wfp.grid.p(m)) > p_edge) outer += std::norm(wfp.amp[m]);
    outer *= wfp.grid.dp();
    if (outer > 1e-6)
        fail_bad_state("state file '" + path.string() + "' is not band-limited on its own grid (" +
                       format_double(outer) + " of the momentum mass sits near the Nyquist edge)");
    return wf;
}

}  // namespace fisherlab
