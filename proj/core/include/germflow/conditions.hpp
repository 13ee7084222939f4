#pragma once

#include <string>
#include <utility>

#include "germflow/family.hpp"

namespace germflow {

/// The asymptotic inequalities this tool can probe. Each kind maps to one
/// numerator/denominator recipe in condition_point_values(); the asymptotic
/// verdict along arcs lives in the arcs layer (a single point cannot decide
/// an asymptotic statement).
enum class ConditionKind {
    C0_1,           // |g(x)|  vs  |grad_x F(x,t)|
    C1_1,           // |g(x)|  vs  |p| * inf_eta |eta grad F(p) + grad g(p)|
    C1_2,           // |g(x)|  vs  inf_eta |eta grad F(p) + grad g(p)|
    C2_6_LeSaito,   // |dF/dt| vs  |grad F(x,t)|
    C2_7_Kuo,       // |g(x)|  vs  |x| * |grad F(x,t)|
    C3_1_Malgrange, // 1       vs  |x| * |grad f(x)|
    C3_2,           // |dF/dt| vs  |(dF/dy_1..dF/dy_{n-1})|   (chart family)
    C3_3,           // |dF/dt| vs  |(dF/dy_0..dF/dy_{n-1})|   (chart family)
    CorAg_ii,       // |g(x)|  vs  inf_lambda |grad_x F(x,t) + lambda grad_x g(x)|
};

std::string to_string(ConditionKind kind);
ConditionKind condition_kind_from_string(const std::string& name);

/// min over lambda in K of |u + lambda*w|, with the closed-form minimizer.
struct InfLambdaResult {
    double value = 0.0;
    Scalar minimizer{0.0, 0.0};
    bool degenerate = false;  // |w| below the relative floor; value = |u|, minimizer = 0
};

/// Closed-form minimizer lambda = -<u,w>/|w|^2 (Hermitian inner product);
/// the value equals sqrt(|u|^2 |w|^2 - |<u,w>|^2) / |w| and is computed as
/// the projection-residual norm, which is stable when u is nearly parallel
/// to w. Degenerates to |u| when |w| <= 1e-12 * (|u| + |w|).
InfLambdaResult line_distance(std::span<const Scalar> u, std::span<const Scalar> w);

/// Delta = |grad f|^2 |grad g|^2 - |<grad g, grad f>|^2 at x, clamped to 0
/// when roundoff produces a tiny negative value. A negative value below
/// -1e-12 * |grad f|^2 |grad g|^2 throws NumericError.
double delta(const GermFamily& fam, std::span<const Scalar> x);

/// Unclamped Delta, for diagnostics and the Cauchy-Schwarz tests.
double delta_raw(const GermFamily& fam, std::span<const Scalar> x);

struct PhiRatio {
    double value = 0.0;  // +infinity when only the denominator vanishes
    bool indeterminate = false;  // 0/0: both sides below their floors
};

/// phi(x) = |g(x)| / inf_lambda |grad f(x) + lambda grad g(x)|. Depends on
/// x only; t never enters.
PhiRatio phi_ratio(const GermFamily& fam, std::span<const Scalar> x);

/// One sampled point of a condition: the pair whose ratio the condition
/// constrains, plus the degeneracy flag for denominators computed through
/// the cancellation-prone closed form (where values below ~sqrt(eps) of the
/// ingredient scale are indistinguishable from zero).
struct ConditionSample {
    double numerator = 0.0;
    double denominator = 0.0;
    bool denominator_degenerate = false;
};

ConditionSample condition_sample(const GermFamily& fam, ConditionKind kind,
                                 std::span<const Scalar> p);

/// The (numerator, denominator) pair of `kind` at the point p = (x, t).
std::pair<double, double> condition_point_values(const GermFamily& fam, ConditionKind kind,
                                                 std::span<const Scalar> p);

/// (x, t~) with t~ = -f(x)/g(x), the canonical lift of x onto F^{-1}(0).
/// Throws NotLiftableError when |g(x)| <= 1e-12 * (1 + |f(x)|).
Point lift_to_zero_set(const GermFamily& fam, std::span<const Scalar> x);

/// Diagnostic split bound: inf over eta of
///   |x| * |eta grad_x F(p) + grad_x g(p)| + |t| * |eta dF/dt(p)|,
/// minimized by dense 1-D (real) or 2-D (complex) grid refinement; no closed
/// form is claimed. Returns (|g(x)|, bound).
std::pair<double, double> eta_split_bound(const GermFamily& fam, std::span<const Scalar> p);

}  // namespace germflow
