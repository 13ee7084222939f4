#pragma once

#include <optional>

#include "germflow/vector_fields.hpp"

namespace germflow {

struct IntegratorConfig {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    int max_steps = 200000;
    double min_step = 1e-12;
    /// the "sufficiently small neighbourhood" of the source argument, as a
    /// runtime parameter: flows are expected to live in |x| <= r, |t| <= r
    double box_radius = 0.5;
    FieldOptions field;
};

/// StepUnderflow also covers an exhausted step budget (max_steps reached
/// before t_target).
enum class FlowStatus { Completed, HitSingularLocus, StepUnderflow };

std::string to_string(FlowStatus status);

struct TrajectorySample {
    double t_param = 0.0;  // real part of t; the flow parameter itself
    Point point;           // (x_1..x_n, t)
};

struct Trajectory {
    std::vector<TrajectorySample> samples;  // ordered by t_param advance
    double F_drift = 0.0;                   // max |F - F(start)| / (1 + |F(start)|)
    std::optional<double> g_drift;          // tracked along v-flows only
    FlowStatus status = FlowStatus::Completed;
    bool left_box = false;                  // |x| or |t| exceeded box_radius somewhere
    int steps_taken = 0;
};

/// Integrates the chosen field from (x_start, t_start) until the real part
/// of t reaches t_target, with an embedded Dormand-Prince 4(5) pair. All
/// fields have t-component exactly 1, so the flow parameter is t itself.
/// Failures are statuses, never exceptions; the partial trajectory is kept.
Trajectory integrate(const GermFamily& fam, FieldKind kind, const Point& x_start, Scalar t_start,
                     double t_target, const IntegratorConfig& cfg = {});

/// Transports x across the family parameter along the glued field,
/// realizing the trivialization homeomorphism between the t0 and t1 fibres.
/// The start must lie in the configured neighbourhood box.
std::pair<Point, Trajectory> trivialization_map(const GermFamily& fam, const Point& x_start,
                                                double t0, double t1,
                                                const IntegratorConfig& cfg = {},
                                                FieldKind kind = FieldKind::Glued);

struct ContinuityPair {
    double initial_distance = 0.0;
    double max_separation = 0.0;
    double g_abs = 0.0;  // |g| at the offset start, the control value
    bool completed = false;
};

/// Empirical modulus of continuity of the flow against the control function
/// g: for base points on Y (where the flow is exactly dt) and nearby offset
/// starts, the growth of the separation over the flow is tabulated against
/// |g(offset start)|.
struct ContinuityEstimate {
    std::vector<ContinuityPair> pairs;
    /// eta -> max over pairs with |g| <= eta of (separation - initial)/|span|
    std::vector<std::pair<double, double>> epsilon_table;
    bool decays = false;      // the table tends to 0 with eta
    bool unreliable = false;  // too few completed pairs
};

ContinuityEstimate continuity_probe(const GermFamily& fam, const std::vector<Point>& base_points,
                                    const std::vector<Point>& offsets, double t0, double t1,
                                    const IntegratorConfig& cfg = {},
                                    FieldKind kind = FieldKind::V_paper);

/// Fit of the control band rho(0) e^{-C|s|} <= |x(s)| <= rho(0) e^{C|s|}
/// along a completed trajectory, with rho = |x|.
struct KuoControlReport {
    double fitted_c = 0.0;  // smallest C for which the band holds at all samples
    bool band_degenerate = false;  // trajectory meets x = 0
    int samples_used = 0;
    std::optional<double> arc_constant;  // echoed Kuo-condition constant, when supplied
};

KuoControlReport kuo_control_check(const GermFamily& fam, const Trajectory& trajectory,
                                   std::optional<double> kuo_arc_constant = std::nullopt);

}  // namespace germflow
