#include "germflow/polynomial.hpp"

#include <algorithm>
#include <string>

namespace germflow {

namespace {

// Kahan-compensated accumulator, componentwise over re/im.
struct CompensatedSum {
    Scalar sum{0.0, 0.0};
    Scalar carry{0.0, 0.0};

    void add(Scalar v) {
        const Scalar y = v - carry;
        const Scalar t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

Scalar int_pow(Scalar base, int e) {
    Scalar acc{1.0, 0.0};
    for (int i = 0; i < e; ++i) acc *= base;
    return acc;
}

}  // namespace

int Polynomial::check_nvars(int nvars) {
    if (nvars < 1) throw InputError("Polynomial: nvars must be positive, got " + std::to_string(nvars));
    return nvars;
}

Polynomial::Polynomial(int nvars, TermMap terms) : nvars_(check_nvars(nvars)), terms_(std::move(terms)) {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (static_cast<int>(it->first.size()) != nvars_)
            throw InputError("Polynomial: exponent vector length does not match nvars");
        for (int e : it->first)
            if (e < 0) throw InputError("Polynomial: negative exponent");
        if (!is_finite(it->second)) throw InputError("Polynomial: non-finite coefficient");
        if (it->second == Scalar{0.0, 0.0})
            it = terms_.erase(it);
        else
            ++it;
    }
}

Polynomial Polynomial::constant(int nvars, Scalar c) {
    Polynomial p(nvars);
    if (c != Scalar{0.0, 0.0}) p.terms_[Exponents(nvars, 0)] = c;
    return Polynomial(nvars, std::move(p.terms_));
}

Polynomial Polynomial::monomial(int nvars, int var, int power, Scalar c) {
    if (var < 0 || var >= nvars) throw InputError("Polynomial::monomial: variable index out of range");
    if (power < 0) throw InputError("Polynomial::monomial: negative power");
    Exponents e(nvars, 0);
    e[var] = power;
    TermMap terms;
    terms[std::move(e)] = c;
    return Polynomial(nvars, std::move(terms));
}

int Polynomial::degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) {
        int total = 0;
        for (int k : e) total += k;
        d = std::max(d, total);
    }
    return d;
}

Scalar Polynomial::eval(std::span<const Scalar> pt) const {
    if (static_cast<int>(pt.size()) != nvars_)
        throw InputError("Polynomial::eval: point has arity " + std::to_string(pt.size()) +
                         ", polynomial has " + std::to_string(nvars_));
    CompensatedSum acc;
    for (const auto& [e, c] : terms_) {
        Scalar term = c;
        for (int i = 0; i < nvars_; ++i)
            if (e[i] != 0) term *= int_pow(pt[i], e[i]);
        acc.add(term);
    }
    return acc.sum;
}

Polynomial Polynomial::partial(int var) const {
    if (var < 0 || var >= nvars_) throw InputError("Polynomial::partial: variable index out of range");
    TermMap out;
    for (const auto& [e, c] : terms_) {
        if (e[var] == 0) continue;
        Exponents de = e;
        de[var] -= 1;
        out[std::move(de)] = c * static_cast<double>(e[var]);
    }
    return Polynomial(nvars_, std::move(out));
}

Polynomial Polynomial::operator+(const Polynomial& rhs) const {
    if (rhs.nvars_ != nvars_) throw InputError("Polynomial::operator+: nvars mismatch");
    TermMap out = terms_;
    for (const auto& [e, c] : rhs.terms_) out[e] += c;
    return Polynomial(nvars_, std::move(out));
}

Polynomial Polynomial::operator-(const Polynomial& rhs) const {
    if (rhs.nvars_ != nvars_) throw InputError("Polynomial::operator-: nvars mismatch");
    TermMap out = terms_;
    for (const auto& [e, c] : rhs.terms_) out[e] -= c;
    return Polynomial(nvars_, std::move(out));
}

Polynomial Polynomial::operator*(const Polynomial& rhs) const {
    if (rhs.nvars_ != nvars_) throw InputError("Polynomial::operator*: nvars mismatch");
    TermMap out;
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : rhs.terms_) {
            Exponents e(nvars_);
            for (int i = 0; i < nvars_; ++i) e[i] = ea[i] + eb[i];
            out[std::move(e)] += ca * cb;
        }
    }
    return Polynomial(nvars_, std::move(out));
}

Polynomial Polynomial::scaled(Scalar c) const {
    TermMap out;
    for (const auto& [e, coeff] : terms_) out[e] = coeff * c;
    return Polynomial(nvars_, std::move(out));
}

Polynomial Polynomial::extended_to(int nvars) const {
    if (nvars < nvars_) throw InputError("Polynomial::extended_to: cannot shrink variable count");
    if (nvars == nvars_) return *this;
    TermMap out;
    for (const auto& [e, c] : terms_) {
        Exponents ext = e;
        ext.resize(nvars, 0);
        out[std::move(ext)] = c;
    }
    return Polynomial(nvars, std::move(out));
}

std::vector<Scalar> raw_partials_at(const Polynomial& p, std::span<const Scalar> pt) {
    if (static_cast<int>(pt.size()) != p.nvars())
        throw InputError("raw_partials_at: point arity does not match polynomial");
    std::vector<Scalar> out(p.nvars());
    for (int i = 0; i < p.nvars(); ++i) out[i] = p.partial(i).eval(pt);
    return out;
}

GradientVector gradient(const Polynomial& p, std::span<const Scalar> pt, FieldTag field) {
    GradientVector g = raw_partials_at(p, pt);
    if (field == FieldTag::Complex)
        for (Scalar& z : g) z = std::conj(z);
    return g;
}

GradientVector finite_diff_gradient(const Polynomial& p, std::span<const Scalar> pt, double h) {
    if (!(h > 0.0)) throw InputError("finite_diff_gradient: h must be positive");
    if (static_cast<int>(pt.size()) != p.nvars())
        throw InputError("finite_diff_gradient: point arity does not match polynomial");
    GradientVector out(p.nvars());
    Point shifted(pt.begin(), pt.end());
    for (int i = 0; i < p.nvars(); ++i) {
        shifted[i] = pt[i] + h;
        const Scalar hi = p.eval(shifted);
        shifted[i] = pt[i] - h;
        const Scalar lo = p.eval(shifted);
        shifted[i] = pt[i];
        out[i] = (hi - lo) / (2.0 * h);
    }
    return out;
}

Polynomial shift_variable(const Polynomial& p, int var, int along, Scalar c) {
    if (var < 0 || var >= p.nvars() || along < 0 || along >= p.nvars() || var == along)
        throw InputError("shift_variable: bad variable indices");
    if (c == Scalar{0.0, 0.0}) return p;
    Polynomial out = Polynomial::zero(p.nvars());
    const Polynomial replacement =
        Polynomial::monomial(p.nvars(), var, 1) + Polynomial::monomial(p.nvars(), along, 1, c);
    for (const auto& [e, coeff] : p.terms()) {
        Polynomial::Exponents rest = e;
        rest[static_cast<std::size_t>(var)] = 0;
        Polynomial::TermMap single;
        single[std::move(rest)] = coeff;
        Polynomial term(p.nvars(), std::move(single));
        for (int k = 0; k < e[static_cast<std::size_t>(var)]; ++k) term = term * replacement;
        out = out + term;
    }
    return out;
}

Polynomial homogenize(const Polynomial& p, int d) {
    const int deg = p.degree();
    if (d < deg)
        throw InputError("homogenize: d = " + std::to_string(d) + " is below deg = " + std::to_string(deg));
    Polynomial::TermMap out;
    for (const auto& [e, c] : p.terms()) {
        int total = 0;
        for (int k : e) total += k;
        Polynomial::Exponents ext;
        ext.reserve(e.size() + 1);
        ext.push_back(d - total);
        ext.insert(ext.end(), e.begin(), e.end());
        out[std::move(ext)] = c;
    }
    return Polynomial(p.nvars() + 1, std::move(out));
}

Polynomial chart_at_infinity(const Polynomial& p) {
    if (p.is_zero()) throw InputError("chart_at_infinity: zero polynomial has no chart form");
    const Polynomial h = homogenize(p, p.degree());
    // h has variables (x0, x1, ..., xn); drop the exponent of xn (set xn = 1).
    Polynomial::TermMap out;
    for (const auto& [e, c] : h.terms()) {
        Polynomial::Exponents chart(e.begin(), e.end() - 1);
        out[std::move(chart)] += c;
    }
    return Polynomial(p.nvars(), std::move(out));
}

}  // namespace germflow
