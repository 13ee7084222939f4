#pragma once

#include <span>
#include <vector>

#include "germflow/polynomial.hpp"

namespace germflow {

/// The deformation F(x,t) = f(x) + t*g(x).
///
/// Partial-derivative polynomials are precomputed once; all evaluation is
/// const and thread-safe. The germ condition f(0) = g(0) = 0 is what the
/// origin-based analyses assume but is not a structural invariant here: the
/// local families at infinity (F = f_loc - t*y0^d) violate it legitimately.
/// Call require_germ_at_origin() at entry points that need it.
class GermFamily {
public:
    GermFamily(Polynomial f, Polynomial g, FieldTag field);

    const Polynomial& f() const { return f_; }
    const Polynomial& g() const { return g_; }
    FieldTag field() const { return field_; }
    int nvars() const { return f_.nvars(); }

    Scalar eval_f(std::span<const Scalar> x) const { return f_.eval(x); }
    Scalar eval_g(std::span<const Scalar> x) const { return g_.eval(x); }
    /// F(x, t)
    Scalar eval_F(std::span<const Scalar> x, Scalar t) const;

    /// unconjugated x-partials of f, g, F at x (resp. (x,t))
    std::vector<Scalar> raw_grad_f(std::span<const Scalar> x) const;
    std::vector<Scalar> raw_grad_g(std::span<const Scalar> x) const;
    std::vector<Scalar> raw_grad_F(std::span<const Scalar> x, Scalar t) const;

    /// conjugation-convention gradients
    GradientVector grad_f(std::span<const Scalar> x) const;
    GradientVector grad_g(std::span<const Scalar> x) const;
    GradientVector grad_F(std::span<const Scalar> x, Scalar t) const;

    /// Splits a point of K^n x K into (x, t).
    std::pair<Point, Scalar> split(std::span<const Scalar> p) const;

private:
    Polynomial f_;
    Polynomial g_;
    FieldTag field_;
    std::vector<Polynomial> df_;
    std::vector<Polynomial> dg_;
};

/// Throws InputError unless f(0) = g(0) = 0.
void require_germ_at_origin(const GermFamily& fam);

}  // namespace germflow
