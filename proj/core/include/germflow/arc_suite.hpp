#pragma once

#include <cstdint>

#include "germflow/arc.hpp"

namespace germflow {

enum class ArcTarget {
    Origin,        // all exponents >= 1; (x,t)(0) = 0
    ZeroSetLifted, // origin-bound spatial arc, t lifted onto F^{-1}(0)
    Infinity,      // designated coordinates carry negative exponents
};

std::string to_string(ArcTarget target);
ArcTarget arc_target_from_string(const std::string& name);

struct ArcSuiteSpec {
    int count = 32;
    int max_degree = 6;  // largest correction exponent offset
    ArcTarget target = ArcTarget::Origin;
};

/// Whether g stays away from zero along the spatial part of the arc (probed
/// on a fixed sample ladder); lifted suites discard arcs failing this.
bool arc_admissible_for_lift(const GermFamily& fam, const Arc& arc);

/// Deterministic suite generation: the same (fam, spec, seed) produces the
/// same arcs bitwise. Inadmissible lifted arcs are discarded and redrawn, up
/// to 10x oversampling; exhausting the budget throws GenerationError.
std::vector<Arc> random_arc_suite(const GermFamily& fam, const ArcSuiteSpec& spec,
                                  std::uint64_t seed);

}  // namespace germflow
