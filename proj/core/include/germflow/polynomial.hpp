#pragma once

#include <map>
#include <span>
#include <vector>

#include "germflow/errors.hpp"
#include "germflow/scalar.hpp"

namespace germflow {

/// Sparse multivariate polynomial: exponent vector -> coefficient.
///
/// Invariants: no stored zero coefficients, every exponent vector has length
/// nvars(), all coefficients finite. Instances are immutable after
/// construction, so any operation may run concurrently.
///
/// Evaluation order is canonical (exponent vectors sorted lexicographically
/// by the term map) and summation is compensated, so values reproduce
/// bit-for-bit across runs.
class Polynomial {
public:
    using Exponents = std::vector<int>;
    using TermMap = std::map<Exponents, Scalar>;

    explicit Polynomial(int nvars) : nvars_(check_nvars(nvars)) {}

    Polynomial(int nvars, TermMap terms);

    static Polynomial zero(int nvars) { return Polynomial(nvars); }
    static Polynomial constant(int nvars, Scalar c);
    /// c * x_var^power  (var is 0-based)
    static Polynomial monomial(int nvars, int var, int power, Scalar c = 1.0);

    int nvars() const { return nvars_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    /// max total exponent; -1 for the zero polynomial
    int degree() const;

    Scalar eval(std::span<const Scalar> pt) const;

    /// exact partial derivative d/dx_var
    Polynomial partial(int var) const;

    Polynomial operator+(const Polynomial& rhs) const;
    Polynomial operator-(const Polynomial& rhs) const;
    Polynomial operator*(const Polynomial& rhs) const;
    Polynomial scaled(Scalar c) const;

    /// same terms in a ring with more variables (new ones unused)
    Polynomial extended_to(int nvars) const;

    bool operator==(const Polynomial& rhs) const = default;

private:
    static int check_nvars(int nvars);

    int nvars_;
    TermMap terms_;
};

/// Unconjugated partial derivatives evaluated at pt.
std::vector<Scalar> raw_partials_at(const Polynomial& p, std::span<const Scalar> pt);

/// Gradient under the session convention: the raw partials for Real, their
/// component-wise conjugates for Complex.
GradientVector gradient(const Polynomial& p, std::span<const Scalar> pt, FieldTag field);

/// Central-difference approximation of the unconjugated partials; the test
/// oracle for gradient(). Differences are taken along the real axis of each
/// coordinate, which for polynomials recovers the full complex derivative.
GradientVector finite_diff_gradient(const Polynomial& p, std::span<const Scalar> pt, double h);

/// p with the substitution x_var := x_var + c * x_along (a linear shear;
/// degree is preserved). Used to translate chart centers along the
/// hyperplane at infinity.
Polynomial shift_variable(const Polynomial& p, int var, int along, Scalar c);

/// Homogenization to degree d: one extra variable x0 prepended, each term
/// multiplied by x0^(d - |alpha|). Requires d >= deg(p).
Polynomial homogenize(const Polynomial& p, int d);

/// Local form of p at the point (0:...:0:1) of the hyperplane at infinity:
/// homogenize to deg(p), then restrict the last original variable to 1.
/// The result lives in n variables (y0, ..., y_{n-1}) with y0 the chart
/// coordinate 1/x_n. Other centers are reached by permuting variables first.
Polynomial chart_at_infinity(const Polynomial& p);

}  // namespace germflow
