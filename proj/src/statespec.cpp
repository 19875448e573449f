#include "fisherlab/statespec.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include "fisherlab/analytic.hpp"
#include "fisherlab/errors.hpp"
#include "fisherlab/io.hpp"

namespace fisherlab {

namespace {

struct Cursor {
    const std::string& s;
    size_t i = 0;

    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eof() {
        skip_ws();
        return i >= s.size();
    }
    char peek() {
        skip_ws();
        return i < s.size() ? s[i] : '\0';
    }
    bool consume(char c) {
        skip_ws();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!consume(c))
            fail_usage("state spec: expected '" + std::string(1, c) + "' at position " +
                       std::to_string(i) + " in '" + s + "'");
    }
    std::string ident() {
        skip_ws();
        const size_t start = i;
        while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
        if (i == start) fail_usage("state spec: expected a name at position " +
                                   std::to_string(i) + " in '" + s + "'");
        return s.substr(start, i - start);
    }
    double number() {
        skip_ws();
        const char* b = s.c_str() + i;
        char* end = nullptr;
        const double v = std::strtod(b, &end);
        if (end == b) fail_usage("state spec: expected a number at position " +
                                 std::to_string(i) + " in '" + s + "'");
        i += end - b;
        return v;
    }
    // Raw text up to the matching ')' (for file paths).
    std::string until_close() {
        skip_ws();
        int depth = 0;
        const size_t start = i;
        while (i < s.size()) {
            if (s[i] == '(') ++depth;
            if (s[i] == ')') {
                if (depth == 0) break;
                --depth;
            }
            ++i;
        }
        std::string out = s.substr(start, i - start);
        while (!out.empty() && std::isspace(static_cast<unsigned char>(out.back()))) out.pop_back();
        return out;
    }
};

StateSpec parse_spec(Cursor& c);

complexd parse_coefficient(Cursor& c) {
    if (c.consume('(')) {
        const double re = c.number();
        c.expect(',');
        const double im = c.number();
        c.expect(')');
        return complexd(re, im);
    }
    return complexd(c.number(), 0.0);
}

void parse_args(Cursor& c, StateSpec& spec, bool wants_k) {
    // key=value pairs, or positional (k first when applicable, then delta);
    // positional arguments may not follow named ones
    int positional = 0;
    bool seen_named = false;
    if (c.peek() == ')') return;
    for (;;) {
        c.skip_ws();
        const size_t mark = c.i;
        bool named = false;
        if (std::isalpha(static_cast<unsigned char>(c.peek()))) {
            const std::string key = c.ident();
            if (c.consume('=')) {
                named = true;
                seen_named = true;
                const double v = c.number();
                if (key == "delta") {
                    spec.delta = v;
                } else if (key == "k" && wants_k) {
                    spec.k = static_cast<int>(std::lround(v));
                } else {
                    fail_usage("state spec: unknown argument '" + key + "'");
                }
            } else {
                c.i = mark;
            }
        }
        if (!named) {
            if (seen_named)
                fail_usage("state spec: positional argument after a named one");
            const double v = c.number();
            if (wants_k && positional == 0) {
                spec.k = static_cast<int>(std::lround(v));
            } else if (positional <= (wants_k ? 1 : 0)) {
                spec.delta = v;
            } else {
                fail_usage("state spec: too many positional arguments");
            }
            ++positional;
        }
        if (!c.consume(',')) break;
    }
}

StateSpec parse_spec(Cursor& c) {
    const std::string name = c.ident();
    StateSpec spec;
    c.expect('(');
    if (name == "gaussian") {
        spec.kind = StateSpec::Kind::gaussian;
        parse_args(c, spec, false);
    } else if (name == "hermite") {
        spec.kind = StateSpec::Kind::hermite;
        parse_args(c, spec, true);
    } else if (name == "superposition") {
        spec.kind = StateSpec::Kind::superposition;
        do {
            const complexd coef = parse_coefficient(c);
            c.expect('*');
            StateSpec part = parse_spec(c);
            if (part.kind == StateSpec::Kind::file)
                fail_usage("state spec: file() cannot appear inside superposition()");
            spec.parts.emplace_back(coef, std::move(part));
        } while (c.consume(','));
        if (spec.parts.empty()) fail_usage("state spec: empty superposition");
    } else if (name == "file") {
        spec.kind = StateSpec::Kind::file;
        spec.path = c.until_close();
        if (spec.path.empty()) fail_usage("state spec: file() needs a path");
    } else {
        fail_usage("state spec: unknown kind '" + name + "'");
    }
    c.expect(')');
    if (spec.kind != StateSpec::Kind::file) {
        if (!(spec.delta > 0.0)) fail_usage("state spec: delta must be positive");
        if (spec.k < 0 || spec.k > 64) fail_usage("state spec: k must be in 0..64");
    }
    return spec;
}

std::string fmt_num(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

// psi at t=0 for analytic kinds, composed recursively for superpositions.
complexd eval_analytic(const StateSpec& spec, double x) {
    switch (spec.kind) {
        case StateSpec::Kind::gaussian:
            return psi_k(AnalyticState{0, spec.delta, 0.0}, x);
        case StateSpec::Kind::hermite:
            return psi_k(AnalyticState{spec.k, spec.delta, 0.0}, x);
        case StateSpec::Kind::superposition: {
            complexd v(0.0, 0.0);
            for (const auto& [coef, part] : spec.parts) v += coef * eval_analytic(part, x);
            return v;
        }
        case StateSpec::Kind::file:
            break;
    }
    fail_usage("state spec: no analytic evaluation for file states");
}

// Half-extent and sample count that comfortably hold the t=0 state.
double bootstrap_half_extent(const StateSpec& spec) {
    switch (spec.kind) {
        case StateSpec::Kind::gaussian:
            return 16.0 * spec.delta;
        case StateSpec::Kind::hermite:
            return 16.0 * spec.delta * std::sqrt(spec.k + 1.0);
        case StateSpec::Kind::superposition: {
            double h = 0.0;
            for (const auto& [coef, part] : spec.parts)
                h = std::max(h, bootstrap_half_extent(part));
            return h;
        }
        case StateSpec::Kind::file:
            break;
    }
    return 16.0;
}

double bootstrap_min_dx(const StateSpec& spec) {
    switch (spec.kind) {
        case StateSpec::Kind::gaussian:
            return spec.delta;
        case StateSpec::Kind::hermite:
            return spec.delta / std::sqrt(spec.k + 1.0);
        case StateSpec::Kind::superposition: {
            double d = 1e300;
            for (const auto& [coef, part] : spec.parts) d = std::min(d, bootstrap_min_dx(part));
            return d;
        }
        case StateSpec::Kind::file:
            break;
    }
    return 1.0;
}

}  // namespace

StateSpec parse_state_spec(const std::string& text) {
    Cursor c{text};
    StateSpec spec = parse_spec(c);
    if (!c.eof())
        fail_usage("state spec: trailing characters after position " + std::to_string(c.i) +
                   " in '" + text + "'");
    return spec;
}

std::string describe(const StateSpec& spec) {
    switch (spec.kind) {
        case StateSpec::Kind::gaussian:
            return "gaussian(delta=" + fmt_num(spec.delta) + ")";
        case StateSpec::Kind::hermite:
            return "hermite(k=" + std::to_string(spec.k) + ",delta=" + fmt_num(spec.delta) + ")";
        case StateSpec::Kind::superposition: {
            std::string out = "superposition(";
            bool first = true;
            for (const auto& [coef, part] : spec.parts) {
                if (!first) out += ",";
                first = false;
                if (coef.imag() == 0.0)
                    out += fmt_num(coef.real());
                else
                    out += "(" + fmt_num(coef.real()) + "," + fmt_num(coef.imag()) + ")";
                out += "*" + describe(part);
            }
            return out + ")";
        }
        case StateSpec::Kind::file:
            return "file(" + spec.path + ")";
    }
    return "?";
}

StateSource build_source(const StateSpec& spec) {
    StateSource src;
    src.label = describe(spec);
    if (spec.kind == StateSpec::Kind::file) {
        src.wf0 = load_state(spec.path);
        return src;
    }
    src.eval_t0 = [spec](double x) { return eval_analytic(spec, x); };

    const double half = bootstrap_half_extent(spec);
    const double dx_scale = bootstrap_min_dx(spec);
    int n = 1024;
    while (n * dx_scale < 64.0 * half && n < (1 << 16)) n <<= 1;  // keep dx ~ dx_scale/32
    src.wf0 = normalize(sample(src.eval_t0, make_grid(-half, half, n)));
    return src;
}

}  // namespace fisherlab
