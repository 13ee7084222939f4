#include "germflow/arc_suite.hpp"

#include <cmath>
#include <random>

namespace germflow {

std::string to_string(ArcTarget target) {
    switch (target) {
        case ArcTarget::Origin: return "origin";
        case ArcTarget::ZeroSetLifted: return "zero_set_lifted";
        case ArcTarget::Infinity: return "infinity";
    }
    return "?";
}

ArcTarget arc_target_from_string(const std::string& name) {
    if (name == "origin") return ArcTarget::Origin;
    if (name == "zero_set_lifted") return ArcTarget::ZeroSetLifted;
    if (name == "infinity") return ArcTarget::Infinity;
    throw InputError("unknown arc target '" + name + "'");
}

namespace {

Scalar random_coeff(std::mt19937_64& rng, FieldTag field) {
    // magnitude in [0.25, 2], sign/phase random; avoids near-zero leads
    const double mag = uniform_in(rng, 0.25, 2.0);
    if (field == FieldTag::Real) return Scalar{rng() & 1 ? mag : -mag, 0.0};
    const double phase = uniform_in(rng, 0.0, 2.0 * 3.14159265358979323846);
    return Scalar{mag * std::cos(phase), mag * std::sin(phase)};
}

LaurentSeries random_coordinate(std::mt19937_64& rng, FieldTag field, int lead_lo, int lead_hi,
                                int max_degree) {
    const int lead = uniform_int_in(rng, lead_lo, lead_hi);
    std::map<int, Scalar> terms;
    terms[lead] = random_coeff(rng, field);
    const int extra = uniform_int_in(rng, 0, 2);
    for (int k = 0; k < extra; ++k) {
        const int hi = std::min(lead + std::max(1, max_degree), LaurentSeries::kMaxExponent);
        if (lead + 1 > hi) break;
        const int e = uniform_int_in(rng, lead + 1, hi);
        terms[e] += Scalar{uniform_in(rng, -1.0, 1.0),
                           field == FieldTag::Complex ? uniform_in(rng, -1.0, 1.0) : 0.0};
    }
    return LaurentSeries(std::move(terms));
}

}  // namespace

bool arc_admissible_for_lift(const GermFamily& fam, const Arc& arc) {
    // g must not vanish (numerically) along the whole probe ladder.
    for (double s : {0.4, 0.25, 0.1, 0.05, 0.01}) {
        const Point x = arc.eval_space(s);
        if (std::abs(fam.eval_g(x)) < 1e-30) return false;
    }
    return true;
}

std::vector<Arc> random_arc_suite(const GermFamily& fam, const ArcSuiteSpec& spec,
                                  std::uint64_t seed) {
    if (spec.count < 1) throw InputError("random_arc_suite: count must be >= 1");
    if (spec.max_degree < 1) throw InputError("random_arc_suite: max_degree must be >= 1");

    std::mt19937_64 rng(seed);
    const int n = fam.nvars();
    std::vector<Arc> out;
    out.reserve(static_cast<std::size_t>(spec.count));
    const int budget = spec.count * 10;
    int draws = 0;

    while (static_cast<int>(out.size()) < spec.count) {
        if (draws++ >= budget)
            throw GenerationError("random_arc_suite: discard budget exhausted (g vanishes on "
                                  "every drawn arc?)");
        std::vector<LaurentSeries> space;
        space.reserve(static_cast<std::size_t>(n));
        Arc::TMode mode = Arc::TMode::Explicit;
        LaurentSeries t_series;

        switch (spec.target) {
            case ArcTarget::Origin:
                for (int i = 0; i < n; ++i)
                    space.push_back(random_coordinate(rng, fam.field(), 1, 3, spec.max_degree));
                t_series = random_coordinate(rng, fam.field(), 1, 3, spec.max_degree);
                break;
            case ArcTarget::ZeroSetLifted:
                for (int i = 0; i < n; ++i)
                    space.push_back(random_coordinate(rng, fam.field(), 1, 3, spec.max_degree));
                mode = Arc::TMode::Lifted;
                break;
            case ArcTarget::Infinity: {
                // at least one coordinate escapes; others stay bounded
                const int escape = uniform_int_in(rng, 0, n - 1);
                for (int i = 0; i < n; ++i) {
                    if (i == escape || (n > 1 && uniform_int_in(rng, 0, 3) == 0 && i != escape))
                        space.push_back(random_coordinate(rng, fam.field(), -3, -1, 2));
                    else
                        space.push_back(random_coordinate(rng, fam.field(), 1, 3, spec.max_degree));
                }
                mode = Arc::TMode::None;
                break;
            }
        }

        Arc arc(std::move(space), mode, std::move(t_series), static_cast<int>(out.size()));
        if (spec.target == ArcTarget::ZeroSetLifted && !arc_admissible_for_lift(fam, arc)) continue;
        out.push_back(std::move(arc));
    }
    return out;
}

}  // namespace germflow
