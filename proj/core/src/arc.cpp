#include "germflow/arc.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <sstream>

namespace germflow {

namespace {

double pow_int(double s, int e) {
    // exact repeated multiplication keeps evaluation reproducible
    double acc = 1.0;
    const int n = e < 0 ? -e : e;
    for (int i = 0; i < n; ++i) acc *= s;
    return e < 0 ? 1.0 / acc : acc;
}

}  // namespace

LaurentSeries::LaurentSeries(std::map<int, Scalar> terms) : terms_(std::move(terms)) {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (it->first < -kMaxExponent || it->first > kMaxExponent)
            throw InputError("LaurentSeries: exponent " + std::to_string(it->first) +
                             " outside [-12, 12]");
        if (!is_finite(it->second)) throw InputError("LaurentSeries: non-finite coefficient");
        if (it->second == Scalar{0.0, 0.0})
            it = terms_.erase(it);
        else
            ++it;
    }
}

bool LaurentSeries::is_constant() const {
    for (const auto& [e, c] : terms_)
        if (e != 0) return false;
    return true;
}

Scalar LaurentSeries::eval(double s) const {
    Scalar acc{0.0, 0.0};
    for (const auto& [e, c] : terms_) acc += c * pow_int(s, e);
    return acc;
}

int LaurentSeries::leading_exponent() const {
    return terms_.empty() ? 0 : terms_.begin()->first;
}

Arc::Arc(std::vector<LaurentSeries> space, TMode t_mode, LaurentSeries t_series, int id)
    : space_(std::move(space)), t_mode_(t_mode), t_series_(std::move(t_series)), id_(id) {
    if (space_.empty()) throw InputError("Arc: needs at least one spatial coordinate");
    bool nonconstant = t_mode_ == TMode::Explicit && !t_series_.is_constant();
    for (const auto& c : space_) nonconstant = nonconstant || !c.is_constant();
    if (!nonconstant) throw InputError("Arc: every coordinate is constant");
}

Point Arc::eval_space(double s) const {
    Point x(space_.size());
    for (std::size_t i = 0; i < space_.size(); ++i) x[i] = space_[i].eval(s);
    return x;
}

Scalar Arc::eval_t(double s, const GermFamily* fam) const {
    switch (t_mode_) {
        case TMode::None: return Scalar{0.0, 0.0};
        case TMode::Explicit: return t_series_.eval(s);
        case TMode::Lifted: {
            if (fam == nullptr) throw InputError("Arc: lifted t needs the family");
            const Point x = eval_space(s);
            const Scalar gv = fam->eval_g(x);
            if (gv == Scalar{0.0, 0.0}) throw NotLiftableError("Arc: g vanishes on a lifted arc sample");
            return -fam->eval_f(x) / gv;
        }
    }
    throw InputError("Arc: bad t mode");
}

Point Arc::eval_point(double s, const GermFamily* fam) const {
    Point p = eval_space(s);
    p.push_back(eval_t(s, fam));
    return p;
}

Arc make_monomial_arc(const std::vector<int>& leading_exponents,
                      const std::vector<Scalar>& coefficients,
                      const std::vector<std::map<int, Scalar>>& corrections) {
    if (leading_exponents.size() != coefficients.size())
        throw InputError("make_monomial_arc: exponent and coefficient vectors differ in length");
    if (!corrections.empty() && corrections.size() != coefficients.size())
        throw InputError("make_monomial_arc: corrections must cover every coordinate");
    std::vector<LaurentSeries> coords;
    coords.reserve(coefficients.size());
    for (std::size_t i = 0; i < coefficients.size(); ++i) {
        std::map<int, Scalar> terms;
        if (coefficients[i] != Scalar{0.0, 0.0}) terms[leading_exponents[i]] = coefficients[i];
        if (!corrections.empty())
            for (const auto& [e, c] : corrections[i]) terms[e] += c;
        coords.emplace_back(std::move(terms));
    }
    return Arc(std::move(coords));
}

namespace {

void append_series(std::string& out, const LaurentSeries& series) {
    out += "[";
    bool first = true;
    for (const auto& [e, c] : series.terms()) {
        if (!first) out += ",";
        char buf[96];
        std::snprintf(buf, sizeof buf, "(%d,%.17g,%.17g)", e, c.real(), c.imag());
        out += buf;
        first = false;
    }
    out += "]";
}

LaurentSeries read_series(const std::string& text, std::size_t& pos) {
    if (pos >= text.size() || text[pos] != '[') throw InputError("arc: expected '['");
    ++pos;
    std::map<int, Scalar> terms;
    while (pos < text.size() && text[pos] != ']') {
        if (text[pos] == ',') { ++pos; continue; }
        int e = 0, used = 0;
        double re = 0.0, im = 0.0;
        if (std::sscanf(text.c_str() + pos, "(%d,%lf,%lf)%n", &e, &re, &im, &used) != 3)
            throw InputError("arc: malformed coefficient triple");
        terms[e] = Scalar{re, im};
        pos += static_cast<std::size_t>(used);
    }
    if (pos >= text.size()) throw InputError("arc: unterminated series");
    ++pos;  // ']'
    return LaurentSeries(std::move(terms));
}

}  // namespace

std::string serialize_arc(const Arc& arc) {
    std::string out = "arc{";
    switch (arc.t_mode()) {
        case Arc::TMode::None: out += "t=none;"; break;
        case Arc::TMode::Explicit: out += "t=explicit;"; break;
        case Arc::TMode::Lifted: out += "t=lifted;"; break;
    }
    for (int i = 0; i < arc.arity(); ++i) append_series(out, arc.space()[i]);
    if (arc.t_mode() == Arc::TMode::Explicit) append_series(out, arc.t_series());
    out += "}";
    return out;
}

Arc deserialize_arc(const std::string& text) {
    std::size_t pos = 0;
    const auto expect = [&](const char* token) {
        const std::size_t len = std::strlen(token);
        if (text.compare(pos, len, token) != 0) throw InputError("arc: malformed serialization");
        pos += len;
    };
    expect("arc{t=");
    Arc::TMode mode;
    if (text.compare(pos, 5, "none;") == 0) { mode = Arc::TMode::None; pos += 5; }
    else if (text.compare(pos, 9, "explicit;") == 0) { mode = Arc::TMode::Explicit; pos += 9; }
    else if (text.compare(pos, 7, "lifted;") == 0) { mode = Arc::TMode::Lifted; pos += 7; }
    else throw InputError("arc: unknown t mode");

    std::vector<LaurentSeries> series;
    while (pos < text.size() && text[pos] == '[') series.push_back(read_series(text, pos));
    expect("}");

    LaurentSeries t_series;
    if (mode == Arc::TMode::Explicit) {
        if (series.empty()) throw InputError("arc: missing t series");
        t_series = series.back();
        series.pop_back();
    }
    return Arc(std::move(series), mode, std::move(t_series));
}

}  // namespace germflow
