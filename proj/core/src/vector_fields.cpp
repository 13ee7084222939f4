#include "germflow/vector_fields.hpp"

#include <cmath>
#include <limits>

namespace germflow {

std::string to_string(FieldKind kind) {
    switch (kind) {
        case FieldKind::V_paper: return "v";
        case FieldKind::W_kuo: return "w";
        case FieldKind::Glued: return "glued";
    }
    return "?";
}

FieldKind field_kind_from_string(const std::string& name) {
    if (name == "v") return FieldKind::V_paper;
    if (name == "w") return FieldKind::W_kuo;
    if (name == "glued") return FieldKind::Glued;
    throw InputError("unknown field kind '" + name + "'");
}

namespace {

bool on_extension_locus(const GermFamily& fam, std::span<const Scalar> x, Scalar& g_out) {
    g_out = fam.eval_g(x);
    const double f_abs = std::abs(fam.eval_f(x));
    return std::abs(g_out) <= 1e-12 * (1.0 + f_abs);
}

FieldVector dt_extension(int n) {
    FieldVector v;
    v.x.assign(static_cast<std::size_t>(n), Scalar{0.0, 0.0});
    return v;
}

}  // namespace

FieldVector field_v(const GermFamily& fam, std::span<const Scalar> x, Scalar t,
                    const FieldOptions& opts) {
    (void)t;  // v is t-independent; parameter kept for the uniform field signature
    Scalar g;
    if (on_extension_locus(fam, x, g)) return dt_extension(fam.nvars());

    const auto df = fam.raw_grad_f(x);
    const auto dg = fam.raw_grad_g(x);
    const double a2 = norm_sq(df);
    const double b2 = norm_sq(dg);
    const Scalar p = hermitian_dot(df, dg);
    const double delta = a2 * b2 - std::norm(p);
    if (delta <= opts.delta_sing * std::max(a2 * b2, 1e-300))
        throw SingularLocusError("field_v: gradients nearly dependent (Delta at floor)", delta,
                                 std::abs(g), std::sqrt(a2), std::sqrt(b2));

    const Scalar ca = -g * b2 / delta;
    const Scalar cb = g * std::conj(p) / delta;
    FieldVector v;
    v.x.resize(df.size());
    for (std::size_t i = 0; i < df.size(); ++i)
        v.x[i] = ca * std::conj(df[i]) + cb * std::conj(dg[i]);
    if (fam.field() == FieldTag::Real)
        for (Scalar& z : v.x) z = Scalar{z.real(), 0.0};
    return v;
}

FieldVector field_w(const GermFamily& fam, std::span<const Scalar> x, Scalar t,
                    const FieldOptions& opts) {
    Scalar g;
    if (on_extension_locus(fam, x, g)) return dt_extension(fam.nvars());

    const auto dF = fam.raw_grad_F(x, t);
    const double d2 = norm_sq(dF);
    if (d2 <= opts.delta_sing * std::max(std::abs(g), 1e-300))
        throw SingularLocusError("field_w: grad_x F at floor against |g|", d2, std::abs(g),
                                 vec_norm(fam.raw_grad_f(x)), vec_norm(fam.raw_grad_g(x)));

    const Scalar c = -g / d2;
    FieldVector w;
    w.x.resize(dF.size());
    for (std::size_t i = 0; i < dF.size(); ++i) w.x[i] = c * std::conj(dF[i]);
    if (fam.field() == FieldTag::Real)
        for (Scalar& z : w.x) z = Scalar{z.real(), 0.0};
    return w;
}

std::pair<double, double> partition_weights(const GermFamily& fam, std::span<const Scalar> x,
                                            Scalar t, const PartitionParams& params) {
    if (!(params.tau1 > 0.0) || !(params.tau2 > params.tau1))
        throw InputError("partition_weights: need 0 < tau1 < tau2");
    const double u = std::abs(fam.eval_F(x, t));
    double rho1;
    if (u <= params.tau1) {
        rho1 = 1.0;
    } else if (u >= params.tau2) {
        rho1 = 0.0;
    } else {
        const double theta = (params.tau2 - u) / (params.tau2 - params.tau1);
        rho1 = theta * theta * (3.0 - 2.0 * theta);
    }
    return {rho1, 1.0 - rho1};
}

FieldVector field_glued(const GermFamily& fam, std::span<const Scalar> x, Scalar t,
                        const FieldOptions& opts) {
    const auto [rho1, rho2] = partition_weights(fam, x, t, opts.partition);
    FieldVector out = dt_extension(fam.nvars());
    if (rho1 > 0.0) {
        const FieldVector v = field_v(fam, x, t, opts);
        for (std::size_t i = 0; i < out.x.size(); ++i) out.x[i] += rho1 * v.x[i];
    }
    if (rho2 > 0.0) {
        const FieldVector w = field_w(fam, x, t, opts);
        for (std::size_t i = 0; i < out.x.size(); ++i) out.x[i] += rho2 * w.x[i];
    }
    return out;  // t-component stays exactly 1
}

FieldVector eval_field(const GermFamily& fam, FieldKind kind, std::span<const Scalar> x, Scalar t,
                       const FieldOptions& opts) {
    switch (kind) {
        case FieldKind::V_paper: return field_v(fam, x, t, opts);
        case FieldKind::W_kuo: return field_w(fam, x, t, opts);
        case FieldKind::Glued: return field_glued(fam, x, t, opts);
    }
    throw InputError("eval_field: unknown kind");
}

std::pair<Scalar, Scalar> tangency_residuals(const GermFamily& fam, std::span<const Scalar> x,
                                             Scalar t, FieldKind kind, const FieldOptions& opts) {
    const FieldVector field = eval_field(fam, kind, x, t, opts);
    const auto dF = fam.raw_grad_F(x, t);
    const auto dg = fam.raw_grad_g(x);
    Scalar rF = fam.eval_g(x) * field.t;  // dF/dt contribution
    Scalar rg{0.0, 0.0};
    for (std::size_t i = 0; i < dF.size(); ++i) {
        rF += dF[i] * field.x[i];
        rg += dg[i] * field.x[i];
    }
    return {rF, rg};
}

DecayGap decay_gap(const GermFamily& fam, std::span<const Scalar> x, Scalar t,
                   const FieldOptions& opts) {
    DecayGap gap;
    const FieldVector v = field_v(fam, x, t, opts);
    gap.from_field = vec_norm(v.x);

    Scalar g;
    if (on_extension_locus(fam, x, g)) {
        gap.closed_form = 0.0;
        return gap;
    }
    const auto df = fam.raw_grad_f(x);
    const auto dg = fam.raw_grad_g(x);
    const double delta = norm_sq(df) * norm_sq(dg) - std::norm(hermitian_dot(df, dg));
    gap.closed_form = std::sqrt(std::norm(g) * norm_sq(dg) / delta);
    return gap;
}

double field_health(const GermFamily& fam, FieldKind kind, std::span<const Scalar> x, Scalar t,
                    const FieldOptions& opts) {
    Scalar g;
    if (on_extension_locus(fam, x, g)) return std::numeric_limits<double>::infinity();

    const auto health_v = [&]() {
        const auto df = fam.raw_grad_f(x);
        const auto dg = fam.raw_grad_g(x);
        const double a2 = norm_sq(df), b2 = norm_sq(dg);
        const double delta = a2 * b2 - std::norm(hermitian_dot(df, dg));
        return delta / (opts.delta_sing * std::max(a2 * b2, 1e-300));
    };
    const auto health_w = [&]() {
        const double d2 = norm_sq(fam.raw_grad_F(x, t));
        return d2 / (opts.delta_sing * std::max(std::abs(g), 1e-300));
    };

    switch (kind) {
        case FieldKind::V_paper: return health_v();
        case FieldKind::W_kuo: return health_w();
        case FieldKind::Glued: {
            const auto [rho1, rho2] = partition_weights(fam, x, t, opts.partition);
            double h = std::numeric_limits<double>::infinity();
            if (rho1 > 0.0) h = std::min(h, health_v());
            if (rho2 > 0.0) h = std::min(h, health_w());
            return h;
        }
    }
    throw InputError("field_health: unknown kind");
}

}  // namespace germflow
