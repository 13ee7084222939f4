#pragma once

#include "germflow/verdicts.hpp"

namespace germflow {

/// The local family at a chart of the hyperplane at infinity:
/// F(y, t) = f_loc(y) - t * y0^d with f_loc = homogenize(f, d) restricted to
/// the chart direction, y0 the reciprocal chart coordinate.
struct InfinityFamily {
    Polynomial base;    // the affine polynomial f
    int degree = 0;     // d = deg f
    int chart_index = 0;  // 1-based affine direction of the chart center
    Polynomial f_loc;   // n variables (y0, y1, ..., y_{n-1})
    Polynomial g_loc;   // exactly y0^d
    GermFamily family;  // (f_loc, -y0^d): plugs into conditions/arcs with C3_2/C3_3
};

/// chart_index selects which affine direction hosts the chart center
/// (0 : ... : 1 in that slot); the remaining variables keep their order.
/// chart_shift translates the center along the hyperplane at infinity to
/// (0 : a_1 : ... : a_{n-1} : 1) in the permuted coordinates (one entry per
/// non-chart variable). Covering all of X_infinity by iterating charts and
/// shifts is the caller's loop.
InfinityFamily build_infinity_family(const Polynomial& f, int chart_index,
                                     const std::vector<Scalar>& chart_shift = {});

struct MalgrangeVerdict {
    Scalar t0{0.0, 0.0};
    bool holds = true;          // evidence-level, never a proof
    bool indeterminate = false; // approach to t0 exists but q unclassifiable
    bool vacuous = false;       // no probed arc can reach f -> t0 at infinity
    double delta_estimate = 0.0;  // inf of |x| |grad f| over the probed window
    std::optional<Arc> witness;   // an arc with |x| -> inf, f -> t0, q -> 0
    int arcs_filtered = 0;        // supplied arcs passing the f -> t0 filter
};

/// Evidence for Malgrange's bound |x| |grad f| >= delta over t0: supplied
/// arcs are filtered to those with f -> t0 (fitted order >= 0.05 and
/// terminal value <= 1e-3), and the order of q = |x||grad f| is fitted on
/// the survivors. When no arc passes the filter, a deterministic
/// feasibility search decides between a vacuous pass and a fresh probe arc.
MalgrangeVerdict malgrange_check(const Polynomial& f, Scalar t0, const std::vector<Arc>& arcs,
                                 const SGrid& grid = {}, const SearchBudget& budget = {},
                                 double slope_min = 0.05);

enum class ArcBoundedness { Bounded, Unbounded, Unclassified };

struct Arc3233Classification {
    int arc_id = 0;
    OrderEstimate fit_32;
    OrderEstimate fit_33;
    ArcBoundedness class_32 = ArcBoundedness::Unclassified;
    ArcBoundedness class_33 = ArcBoundedness::Unclassified;
    bool agree = false;
};

/// Numerical shadow of the C3_2 <=> C3_3 equivalence: both ratios are
/// fitted along each classified arc and their boundedness classes compared.
struct Check3233Report {
    int chart_index = 0;
    std::vector<Arc3233Classification> per_arc;  // classified arcs only
    int discarded_y0_zero = 0;      // lift undefined
    int discarded_t_divergent = 0;  // lifted t escapes: not near any finite-t0 center
    double agreement_fraction = 1.0;  // over classified arcs; vacuously 1
    bool vacuous = false;             // nothing survived the lift
};

/// Arcs are chart-origin probes (their spatial parts are used; t comes from
/// the lift t(s) = f_loc(y(s)) / y0(s)^d).
Check3233Report check_32_33(const InfinityFamily& inf, const std::vector<Arc>& arcs,
                            const SGrid& grid = {}, double slope_min = 0.05);

Check3233Report check_32_33(const Polynomial& f, int chart_index, const std::vector<Arc>& arcs,
                            const SGrid& grid = {}, double slope_min = 0.05);

/// Runs the Malgrange evidence plus the witness search on every grid value;
/// failures are listed first.
std::vector<MalgrangeVerdict> atypical_scan(const Polynomial& f, const std::vector<Scalar>& t_grid,
                                            const SearchBudget& budget, const SGrid& grid = {});

}  // namespace germflow
