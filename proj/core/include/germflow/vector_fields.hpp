#pragma once

#include "germflow/family.hpp"

namespace germflow {

enum class FieldKind { V_paper, W_kuo, Glued };

std::string to_string(FieldKind kind);
FieldKind field_kind_from_string(const std::string& name);

/// Thresholds on |F(x,t)| steering the partition of unity: rho1 = 1 where
/// |F| <= tau1 (near the zero set), rho2 = 1 where |F| >= tau2.
struct PartitionParams {
    double tau1 = 0.01;
    double tau2 = 0.1;
};

struct FieldOptions {
    /// relative floor on the field denominators (Delta for v, |grad_x F|^2
    /// for w); below it the coefficient formulas amplify roundoff into
    /// garbage and a SingularLocusError is thrown instead
    double delta_sing = 1e-10;
    PartitionParams partition;
};

/// A trivializing vector-field value; the t-component is exactly 1 for all
/// three field kinds.
struct FieldVector {
    std::vector<Scalar> x;
    Scalar t{1.0, 0.0};
};

/// The level-preserving field tangent to the levels of both F and g,
/// with the coefficient conjugation resolved so dF(v) = dg(v) = 0 hold
/// exactly (g unconjugated times the conjugated gradients). On g = 0
/// (numerically: |g| below the roundoff floor) returns exactly (0, 1),
/// the dt extension over Y.
FieldVector field_v(const GermFamily& fam, std::span<const Scalar> x, Scalar t,
                    const FieldOptions& opts = {});

/// Kuo field: tangent to the levels of F; same conjugation resolution.
FieldVector field_w(const GermFamily& fam, std::span<const Scalar> x, Scalar t,
                    const FieldOptions& opts = {});

/// (rho1, rho2): cubic smoothstep in |F(x,t)| between tau1 and tau2;
/// rho1 + rho2 = 1 exactly, continuously differentiable in |F|.
std::pair<double, double> partition_weights(const GermFamily& fam, std::span<const Scalar> x,
                                            Scalar t, const PartitionParams& params);

/// rho1 * v + rho2 * w; only the fields carrying nonzero weight are
/// evaluated, so their singular loci do not poison the other region.
FieldVector field_glued(const GermFamily& fam, std::span<const Scalar> x, Scalar t,
                        const FieldOptions& opts = {});

FieldVector eval_field(const GermFamily& fam, FieldKind kind, std::span<const Scalar> x, Scalar t,
                       const FieldOptions& opts = {});

/// (dF(field), dg(field)) via unconjugated partials contracted with the
/// field vector, the dF term including d/dt. Test oracle for the tangency
/// contracts.
std::pair<Scalar, Scalar> tangency_residuals(const GermFamily& fam, std::span<const Scalar> x,
                                             Scalar t, FieldKind kind,
                                             const FieldOptions& opts = {});

/// |v - dt| both ways: from the constructed field and from the closed form
/// sqrt(|g|^2 |grad g|^2 / Delta).
struct DecayGap {
    double from_field = 0.0;
    double closed_form = 0.0;
};

DecayGap decay_gap(const GermFamily& fam, std::span<const Scalar> x, Scalar t,
                   const FieldOptions& opts = {});

/// Distance of the field's denominator from its singular floor, as a
/// multiple of the floor (+inf on Y where the field is the exact dt
/// extension). The flow layer stops early when this drops below 10.
double field_health(const GermFamily& fam, FieldKind kind, std::span<const Scalar> x, Scalar t,
                    const FieldOptions& opts = {});

}  // namespace germflow
