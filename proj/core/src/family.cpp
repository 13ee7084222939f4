#include "germflow/family.hpp"

namespace germflow {

GermFamily::GermFamily(Polynomial f, Polynomial g, FieldTag field)
    : f_(std::move(f)), g_(std::move(g)), field_(field) {
    if (f_.nvars() != g_.nvars())
        throw InputError("GermFamily: f and g must share the variable count");
    df_.reserve(f_.nvars());
    dg_.reserve(f_.nvars());
    for (int i = 0; i < f_.nvars(); ++i) {
        df_.push_back(f_.partial(i));
        dg_.push_back(g_.partial(i));
    }
}

Scalar GermFamily::eval_F(std::span<const Scalar> x, Scalar t) const {
    return f_.eval(x) + t * g_.eval(x);
}

std::vector<Scalar> GermFamily::raw_grad_f(std::span<const Scalar> x) const {
    std::vector<Scalar> out(df_.size());
    for (std::size_t i = 0; i < df_.size(); ++i) out[i] = df_[i].eval(x);
    return out;
}

std::vector<Scalar> GermFamily::raw_grad_g(std::span<const Scalar> x) const {
    std::vector<Scalar> out(dg_.size());
    for (std::size_t i = 0; i < dg_.size(); ++i) out[i] = dg_[i].eval(x);
    return out;
}

std::vector<Scalar> GermFamily::raw_grad_F(std::span<const Scalar> x, Scalar t) const {
    std::vector<Scalar> out(df_.size());
    for (std::size_t i = 0; i < df_.size(); ++i) out[i] = df_[i].eval(x) + t * dg_[i].eval(x);
    return out;
}

namespace {
GradientVector conj_if_complex(std::vector<Scalar> v, FieldTag field) {
    if (field == FieldTag::Complex)
        for (Scalar& z : v) z = std::conj(z);
    return v;
}
}  // namespace

GradientVector GermFamily::grad_f(std::span<const Scalar> x) const {
    return conj_if_complex(raw_grad_f(x), field_);
}

GradientVector GermFamily::grad_g(std::span<const Scalar> x) const {
    return conj_if_complex(raw_grad_g(x), field_);
}

GradientVector GermFamily::grad_F(std::span<const Scalar> x, Scalar t) const {
    return conj_if_complex(raw_grad_F(x, t), field_);
}

std::pair<Point, Scalar> GermFamily::split(std::span<const Scalar> p) const {
    if (static_cast<int>(p.size()) != nvars() + 1)
        throw InputError("GermFamily::split: expected a point of K^n x K");
    return {Point(p.begin(), p.end() - 1), p.back()};
}

void require_germ_at_origin(const GermFamily& fam) {
    const Point origin(fam.nvars(), Scalar{0.0, 0.0});
    if (fam.eval_f(origin) != Scalar{0.0, 0.0} || fam.eval_g(origin) != Scalar{0.0, 0.0})
        throw InputError("family is not a germ pair: f and g must vanish at the origin");
}

}  // namespace germflow
