#pragma once

#include <optional>

#include "germflow/arc_suite.hpp"
#include "germflow/conditions.hpp"
#include "germflow/order_fit.hpp"

namespace germflow {

/// Geometric sampling grid s_k = s0 * ratio^k, k = 0..count-1.
struct SGrid {
    double s0 = 0.5;
    double ratio = 0.5;
    int count = 24;
};

std::vector<double> grid_values(const SGrid& grid);

enum class Verdict { TendsToZero, BoundedRatio, Diverges, Indeterminate };

std::string to_string(Verdict v);

/// Order fit of one condition ratio along one arc.
struct ArcConditionFit {
    int arc_id = 0;
    OrderEstimate estimate;
    double terminal_ratio = 0.0;    // ratio at the smallest usable s
    double max_window_ratio = 0.0;  // largest ratio over the fit window
    int degenerate_samples = 0;     // denominator at/below its roundoff floor
    int discarded_samples = 0;      // non-finite values (overflowed probes)
    bool usable = false;            // enough clean samples to fit
};

ArcConditionFit fit_condition_along_arc(const GermFamily& fam, ConditionKind kind, const Arc& arc,
                                        const SGrid& grid);

/// Aggregate asymptotic verdict over an arc suite. Verdicts are evidence,
/// not proof: a violating analytic arc exists whenever the condition fails
/// (curve selection), but a bounded-degree search is incomplete.
struct ConditionVerdict {
    ConditionKind kind = ConditionKind::C0_1;
    Verdict verdict = Verdict::Indeterminate;
    std::vector<ArcConditionFit> per_arc;
    double fitted_constant = 0.0;  // BoundedRatio: 1.05 * max observed ratio
    int worst_arc_id = -1;
    double slope_min = 0.05;
};

/// TendsToZero: every arc slope >= slope_min and terminal ratio <= 1e-3.
/// Diverges: some arc slope <= -slope_min. BoundedRatio: all slopes within
/// +-slope_min with a finite max ratio. Anything else: Indeterminate.
ConditionVerdict check_condition(const GermFamily& fam, ConditionKind kind,
                                 const std::vector<Arc>& arcs, const SGrid& grid = {},
                                 double slope_min = 0.05);

struct ExponentEstimate {
    double alpha = 0.0;     // in (0, 1] when reliable
    double residual = 0.0;  // worst 1 - r^2 over the fits used
    bool reliable = false;
    int arcs_used = 0;
};

/// Per lifted arc, fit a = ord |g| and b = ord of the inf-eta quantity of
/// the gradient inequality; report alpha = min over arcs of b/a clipped to
/// (0, 1]. Arcs with a <= 0 (g not tending to 0) are discarded; all
/// discarded is an input error.
ExponentEstimate estimate_lojasiewicz_exponent(const GermFamily& fam,
                                               const std::vector<Arc>& arcs,
                                               const SGrid& grid = {});

struct SearchBudget {
    int restarts = 20;
    int iterations = 400;
    std::uint64_t seed = 0;
};

/// Beam over coordinate-exponent patterns plus Nelder-Mead over arc
/// coefficients, minimizing the fitted ratio slope. Returns an arc whose
/// ratio slope <= -slope_min, or nullopt. Deterministic given budget.seed.
/// Absence of a violating arc is NOT a proof the condition holds.
std::optional<Arc> find_violating_arc(const GermFamily& fam, ConditionKind kind,
                                      const SearchBudget& budget, const SGrid& grid = {},
                                      double slope_min = 0.05);

}  // namespace germflow
