#include "germflow/conditions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace germflow {

namespace {

constexpr double kDegenerateRel = 1e-12;
// Floor below which a line_distance value cannot be told from roundoff.
// The value is computed as the norm of the projection residual, whose
// componentwise error is ~eps * |u|; 100x headroom on top of that.
constexpr double kLineDistanceFloorRel = 1e-13;

double stable_norm(std::span<const Scalar> v) {
    double m = 0.0;
    for (const Scalar& z : v) m = std::max(m, std::max(std::abs(z.real()), std::abs(z.imag())));
    if (m == 0.0 || !std::isfinite(m)) return m;
    double acc = 0.0;
    for (const Scalar& z : v) {
        const double re = z.real() / m, im = z.imag() / m;
        acc += re * re + im * im;
    }
    return m * std::sqrt(acc);
}

std::vector<Scalar> full_grad_F(const GermFamily& fam, std::span<const Scalar> x, Scalar t) {
    std::vector<Scalar> gf = fam.raw_grad_F(x, t);
    gf.push_back(fam.eval_g(x));  // dF/dt = g(x)
    if (fam.field() == FieldTag::Complex)
        for (Scalar& z : gf) z = std::conj(z);
    return gf;
}

std::vector<Scalar> full_grad_g(const GermFamily& fam, std::span<const Scalar> x) {
    std::vector<Scalar> gg = fam.grad_g(x);
    gg.push_back(Scalar{0.0, 0.0});  // g does not depend on t
    return gg;
}

// g must be a (scaled) pure power of the chart variable y0, the shape of
// local families at the hyperplane at infinity.
void require_chart_family(const GermFamily& fam, ConditionKind kind) {
    const auto& terms = fam.g().terms();
    bool ok = terms.size() == 1;
    if (ok) {
        const auto& e = terms.begin()->first;
        for (std::size_t i = 1; i < e.size(); ++i) ok = ok && e[i] == 0;
        ok = ok && e[0] > 0;
    }
    if (!ok)
        throw InputError("condition " + to_string(kind) +
                         " expects a local at-infinity family with g = c * y0^d");
}

}  // namespace

std::string to_string(ConditionKind kind) {
    switch (kind) {
        case ConditionKind::C0_1: return "C0_1";
        case ConditionKind::C1_1: return "C1_1";
        case ConditionKind::C1_2: return "C1_2";
        case ConditionKind::C2_6_LeSaito: return "C2_6";
        case ConditionKind::C2_7_Kuo: return "C2_7";
        case ConditionKind::C3_1_Malgrange: return "C3_1";
        case ConditionKind::C3_2: return "C3_2";
        case ConditionKind::C3_3: return "C3_3";
        case ConditionKind::CorAg_ii: return "CorAg_ii";
    }
    return "?";
}

ConditionKind condition_kind_from_string(const std::string& name) {
    if (name == "C0_1") return ConditionKind::C0_1;
    if (name == "C1_1") return ConditionKind::C1_1;
    if (name == "C1_2") return ConditionKind::C1_2;
    if (name == "C2_6") return ConditionKind::C2_6_LeSaito;
    if (name == "C2_7") return ConditionKind::C2_7_Kuo;
    if (name == "C3_1") return ConditionKind::C3_1_Malgrange;
    if (name == "C3_2") return ConditionKind::C3_2;
    if (name == "C3_3") return ConditionKind::C3_3;
    if (name == "CorAg_ii") return ConditionKind::CorAg_ii;
    throw InputError("unknown condition kind '" + name + "'");
}

InfLambdaResult line_distance(std::span<const Scalar> u, std::span<const Scalar> w) {
    if (u.size() != w.size()) throw InputError("line_distance: vectors differ in length");
    InfLambdaResult r;
    const double nu = stable_norm(u);
    const double nw = stable_norm(w);
    if (nw <= kDegenerateRel * (nu + nw)) {
        r.value = nu;
        r.minimizer = Scalar{0.0, 0.0};
        r.degenerate = true;
        return r;
    }
    const Scalar uw = hermitian_dot(u, w);
    r.minimizer = -uw / (nw * nw);
    // |u + lambda* w| via the projection residual: algebraically equal to
    // sqrt(|u|^2|w|^2 - |<u,w>|^2)/|w| but free of the catastrophic
    // cancellation when u is nearly parallel to w
    std::vector<Scalar> residual(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) residual[i] = u[i] + r.minimizer * w[i];
    r.value = stable_norm(residual);
    return r;
}

double delta_raw(const GermFamily& fam, std::span<const Scalar> x) {
    const GradientVector gf = fam.grad_f(x);
    const GradientVector gg = fam.grad_g(x);
    const Scalar gfg = hermitian_dot(gg, gf);
    return norm_sq(gf) * norm_sq(gg) - std::norm(gfg);
}

double delta(const GermFamily& fam, std::span<const Scalar> x) {
    const GradientVector gf = fam.grad_f(x);
    const GradientVector gg = fam.grad_g(x);
    const Scalar gfg = hermitian_dot(gg, gf);
    const double scale = norm_sq(gf) * norm_sq(gg);
    const double d = scale - std::norm(gfg);
    if (d >= 0.0) return d;
    if (d >= -1e-12 * scale) return 0.0;
    throw NumericError("delta: Cauchy-Schwarz violated beyond the roundoff margin");
}

PhiRatio phi_ratio(const GermFamily& fam, std::span<const Scalar> x) {
    const GradientVector gf = fam.grad_f(x);
    const GradientVector gg = fam.grad_g(x);
    const InfLambdaResult dist = line_distance(gf, gg);
    const double num = std::abs(fam.eval_g(x));
    const double den_floor = kDegenerateRel * (stable_norm(gf) + stable_norm(gg));
    const double num_floor = kDegenerateRel * (1.0 + std::abs(fam.eval_f(x)));
    PhiRatio out;
    if (dist.value <= den_floor) {
        if (num <= num_floor) {
            out.indeterminate = true;
            return out;
        }
        out.value = std::numeric_limits<double>::infinity();
        return out;
    }
    out.value = num / dist.value;
    return out;
}

ConditionSample condition_sample(const GermFamily& fam, ConditionKind kind,
                                 std::span<const Scalar> p) {
    ConditionSample s;
    switch (kind) {
        case ConditionKind::C0_1: {
            const auto [x, t] = fam.split(p);
            s.numerator = std::abs(fam.eval_g(x));
            s.denominator = stable_norm(fam.raw_grad_F(x, t));
            return s;
        }
        case ConditionKind::C1_1:
        case ConditionKind::C1_2: {
            const auto [x, t] = fam.split(p);
            const auto gF = full_grad_F(fam, x, t);
            const auto gg = full_grad_g(fam, x);
            // inf over eta of |eta grad F + grad g|: eta scales grad F.
            const InfLambdaResult dist = line_distance(gg, gF);
            s.numerator = std::abs(fam.eval_g(x));
            s.denominator = dist.value;
            s.denominator_degenerate =
                !dist.degenerate && dist.value <= kLineDistanceFloorRel * stable_norm(gg);
            if (kind == ConditionKind::C1_1) s.denominator *= stable_norm(p);
            return s;
        }
        case ConditionKind::CorAg_ii: {
            // min over lambda of |grad_x F + lambda grad_x g|: the shift
            // lambda -> lambda - t absorbs t exactly, so the quantity equals
            // phi's denominator and is computed t-free (the t-dependent form
            // loses everything to roundoff when |t| blows up on lifted arcs)
            const auto [x, t] = fam.split(p);
            (void)t;
            const auto gf = fam.grad_f(x);
            const auto gg = fam.grad_g(x);
            const InfLambdaResult dist = line_distance(gf, gg);
            s.numerator = std::abs(fam.eval_g(x));
            s.denominator = dist.value;
            s.denominator_degenerate =
                dist.value <= kLineDistanceFloorRel * stable_norm(gf);
            return s;
        }
        case ConditionKind::C2_6_LeSaito: {
            const auto [x, t] = fam.split(p);
            auto gF = fam.raw_grad_F(x, t);
            gF.push_back(fam.eval_g(x));
            s.numerator = std::abs(fam.eval_g(x));  // |dF/dt|
            s.denominator = stable_norm(gF);
            return s;
        }
        case ConditionKind::C2_7_Kuo: {
            const auto [x, t] = fam.split(p);
            auto gF = fam.raw_grad_F(x, t);
            gF.push_back(fam.eval_g(x));
            s.numerator = std::abs(fam.eval_g(x));
            s.denominator = stable_norm(x) * stable_norm(gF);
            return s;
        }
        case ConditionKind::C3_1_Malgrange: {
            const auto [x, t] = fam.split(p);
            s.numerator = 1.0;
            s.denominator = stable_norm(x) * stable_norm(fam.raw_grad_f(x));
            return s;
        }
        case ConditionKind::C3_2:
        case ConditionKind::C3_3: {
            require_chart_family(fam, kind);
            const auto [y, t] = fam.split(p);
            const auto gF = fam.raw_grad_F(y, t);
            const std::size_t first = kind == ConditionKind::C3_2 ? 1 : 0;
            std::vector<Scalar> tail(gF.begin() + first, gF.end());
            s.numerator = std::abs(fam.eval_g(y));  // |dF/dt| = |c| |y0|^d
            s.denominator = stable_norm(tail);
            return s;
        }
    }
    throw InputError("condition_sample: unknown kind");
}

std::pair<double, double> condition_point_values(const GermFamily& fam, ConditionKind kind,
                                                 std::span<const Scalar> p) {
    const ConditionSample s = condition_sample(fam, kind, p);
    return {s.numerator, s.denominator};
}

Point lift_to_zero_set(const GermFamily& fam, std::span<const Scalar> x) {
    const Scalar fv = fam.eval_f(x);
    const Scalar gv = fam.eval_g(x);
    if (std::abs(gv) <= 1e-12 * (1.0 + std::abs(fv)))
        throw NotLiftableError("lift_to_zero_set: g vanishes at the requested point");
    Point p(x.begin(), x.end());
    p.push_back(-fv / gv);
    return p;
}

std::pair<double, double> eta_split_bound(const GermFamily& fam, std::span<const Scalar> p) {
    const auto [x, t] = fam.split(p);
    const auto gF = fam.raw_grad_F(x, t);
    const auto gg = fam.raw_grad_g(x);
    const double xn = stable_norm(x);
    const double tn = std::abs(t);
    const double gval = std::abs(fam.eval_g(x));

    const auto objective = [&](Scalar eta) {
        std::vector<Scalar> mix(gF.size());
        for (std::size_t i = 0; i < gF.size(); ++i) mix[i] = eta * gF[i] + gg[i];
        return xn * stable_norm(mix) + tn * std::abs(eta * gval);
    };

    // Coarse-to-fine grid refinement around the best eta; 1-D on the real
    // axis for Real families, 2-D over the complex plane otherwise.
    Scalar best_eta{0.0, 0.0};
    double best = objective(best_eta);
    double radius = 64.0;
    const int levels = 24;
    const int grid = 17;
    for (int level = 0; level < levels; ++level) {
        const Scalar center = best_eta;
        for (int i = -grid / 2; i <= grid / 2; ++i) {
            const double re = center.real() + radius * i / (grid / 2);
            if (fam.field() == FieldTag::Real) {
                const Scalar eta{re, 0.0};
                const double v = objective(eta);
                if (v < best) { best = v; best_eta = eta; }
            } else {
                for (int j = -grid / 2; j <= grid / 2; ++j) {
                    const Scalar eta{re, center.imag() + radius * j / (grid / 2)};
                    const double v = objective(eta);
                    if (v < best) { best = v; best_eta = eta; }
                }
            }
        }
        radius *= 0.5;
    }
    return {gval, best};
}

}  // namespace germflow
