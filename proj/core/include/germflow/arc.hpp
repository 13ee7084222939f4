#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "germflow/family.hpp"

namespace germflow {

/// Finite Laurent polynomial in the arc parameter s.
class LaurentSeries {
public:
    static constexpr int kMaxExponent = 12;

    LaurentSeries() = default;
    explicit LaurentSeries(std::map<int, Scalar> terms);

    const std::map<int, Scalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;

    Scalar eval(double s) const;
    /// order of the leading (lowest-exponent) term; 0 for the zero series
    int leading_exponent() const;

    bool operator==(const LaurentSeries& rhs) const = default;

private:
    std::map<int, Scalar> terms_;
};

/// A parametric test curve s -> (x(s), t(s)) on s in (0, s_max], the probe
/// for asymptotic conditions. Coordinates are Laurent polynomials; the
/// t-coordinate may instead be lifted onto F^{-1}(0) per sample
/// (t(s) = -f(x(s))/g(x(s))), or absent (t = 0).
class Arc {
public:
    enum class TMode { None, Explicit, Lifted };

    Arc(std::vector<LaurentSeries> space, TMode t_mode = TMode::None,
        LaurentSeries t_series = {}, int id = 0);

    const std::vector<LaurentSeries>& space() const { return space_; }
    TMode t_mode() const { return t_mode_; }
    const LaurentSeries& t_series() const { return t_series_; }
    int id() const { return id_; }
    void set_id(int id) { id_ = id; }

    int arity() const { return static_cast<int>(space_.size()); }

    Point eval_space(double s) const;
    /// t(s); Lifted mode needs the family to evaluate -f/g
    Scalar eval_t(double s, const GermFamily* fam = nullptr) const;
    /// the full point (x(s), t(s))
    Point eval_point(double s, const GermFamily* fam = nullptr) const;

    bool operator==(const Arc& rhs) const {
        return space_ == rhs.space_ && t_mode_ == rhs.t_mode_ && t_series_ == rhs.t_series_;
    }

private:
    std::vector<LaurentSeries> space_;
    TMode t_mode_;
    LaurentSeries t_series_;
    int id_;
};

/// coordinate i(s) = coefficients[i] * s^exponents[i] + corrections[i].
/// Rejects arcs where every coordinate is constant.
Arc make_monomial_arc(const std::vector<int>& leading_exponents,
                      const std::vector<Scalar>& coefficients,
                      const std::vector<std::map<int, Scalar>>& corrections = {});

/// Serialization: per coordinate a list of (exponent, re, im) triples.
/// Round-trips bit-exactly.
std::string serialize_arc(const Arc& arc);
Arc deserialize_arc(const std::string& text);

}  // namespace germflow
