#include "germflow/flow.hpp"

#include <algorithm>
#include <cmath>

namespace germflow {

std::string to_string(FlowStatus status) {
    switch (status) {
        case FlowStatus::Completed: return "completed";
        case FlowStatus::HitSingularLocus: return "hit_singular_locus";
        case FlowStatus::StepUnderflow: return "step_underflow";
    }
    return "?";
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187, kA53 = 64448.0 / 6561,
                 kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33, kA63 = 46732.0 / 5247,
                 kA64 = 49.0 / 176, kA65 = -5103.0 / 18656;
constexpr double kB1 = 35.0 / 384, kB3 = 500.0 / 1113, kB4 = 125.0 / 192, kB5 = -2187.0 / 6784,
                 kB6 = 11.0 / 84;
constexpr double kC2 = 1.0 / 5, kC3 = 3.0 / 10, kC4 = 4.0 / 5, kC5 = 8.0 / 9;
constexpr double kE1 = 35.0 / 384 - 5179.0 / 57600, kE3 = 500.0 / 1113 - 7571.0 / 16695,
                 kE4 = 125.0 / 192 - 393.0 / 640, kE5 = -2187.0 / 6784 + 92097.0 / 339200,
                 kE6 = 11.0 / 84 - 187.0 / 2100, kE7 = -1.0 / 40;

struct RealState {
    std::vector<double> y;
};

class FlowProblem {
public:
    FlowProblem(const GermFamily& fam, FieldKind kind, Scalar t_start, double dir,
                const FieldOptions& opts)
        : fam_(fam), kind_(kind), t_start_(t_start), dir_(dir), opts_(opts) {}

    int state_dim() const {
        return fam_.field() == FieldTag::Complex ? 2 * fam_.nvars() : fam_.nvars();
    }

    Point unpack(const std::vector<double>& y) const {
        Point x(static_cast<std::size_t>(fam_.nvars()));
        if (fam_.field() == FieldTag::Complex) {
            for (int i = 0; i < fam_.nvars(); ++i)
                x[static_cast<std::size_t>(i)] = Scalar{y[static_cast<std::size_t>(2 * i)],
                                                        y[static_cast<std::size_t>(2 * i + 1)]};
        } else {
            for (int i = 0; i < fam_.nvars(); ++i)
                x[static_cast<std::size_t>(i)] = Scalar{y[static_cast<std::size_t>(i)], 0.0};
        }
        return x;
    }

    std::vector<double> pack(const Point& x) const {
        std::vector<double> y(static_cast<std::size_t>(state_dim()));
        if (fam_.field() == FieldTag::Complex) {
            for (int i = 0; i < fam_.nvars(); ++i) {
                y[static_cast<std::size_t>(2 * i)] = x[static_cast<std::size_t>(i)].real();
                y[static_cast<std::size_t>(2 * i + 1)] = x[static_cast<std::size_t>(i)].imag();
            }
        } else {
            for (int i = 0; i < fam_.nvars(); ++i) y[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)].real();
        }
        return y;
    }

    Scalar t_at(double sigma) const { return t_start_ + Scalar{dir_ * sigma, 0.0}; }

    // dx/dsigma; throws SingularLocusError where the field does
    std::vector<double> rhs(double sigma, const std::vector<double>& y) const {
        const Point x = unpack(y);
        const FieldVector field = eval_field(fam_, kind_, x, t_at(sigma), opts_);
        Point dx(field.x.size());
        for (std::size_t i = 0; i < field.x.size(); ++i) dx[i] = dir_ * field.x[i];
        return pack(dx);
    }

private:
    const GermFamily& fam_;
    FieldKind kind_;
    Scalar t_start_;
    double dir_;
    FieldOptions opts_;
};

}  // namespace

Trajectory integrate(const GermFamily& fam, FieldKind kind, const Point& x_start, Scalar t_start,
                     double t_target, const IntegratorConfig& cfg) {
    if (static_cast<int>(x_start.size()) != fam.nvars())
        throw InputError("integrate: start point arity mismatch");
    if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0))
        throw InputError("integrate: tolerances must be positive");

    Trajectory traj;
    const double total = t_target - t_start.real();
    const double dir = total >= 0.0 ? 1.0 : -1.0;
    const double span = std::abs(total);
    const FlowProblem problem(fam, kind, t_start, dir, cfg.field);

    const Scalar f0 = fam.eval_F(x_start, t_start);
    const Scalar g0 = fam.eval_g(x_start);
    const bool track_g = kind == FieldKind::V_paper;
    if (track_g) traj.g_drift = 0.0;

    const auto record = [&](double sigma, const std::vector<double>& y) {
        TrajectorySample sample;
        sample.t_param = t_start.real() + dir * sigma;
        sample.point = problem.unpack(y);
        const Scalar t = problem.t_at(sigma);
        const Scalar fv = fam.eval_F(sample.point, t);
        traj.F_drift = std::max(traj.F_drift, std::abs(fv - f0) / (1.0 + std::abs(f0)));
        if (track_g) {
            const Scalar gv = fam.eval_g(sample.point);
            traj.g_drift = std::max(*traj.g_drift, std::abs(gv - g0) / (1.0 + std::abs(g0)));
        }
        if (vec_norm(sample.point) > cfg.box_radius || std::abs(t) > cfg.box_radius)
            traj.left_box = true;
        sample.point.push_back(t);
        traj.samples.push_back(std::move(sample));
    };

    std::vector<double> y = problem.pack(x_start);
    double sigma = 0.0;
    record(sigma, y);
    if (span == 0.0) return traj;

    // initial health check: a start on the singular locus fails immediately
    try {
        if (field_health(fam, kind, x_start, t_start, cfg.field) < 10.0) {
            traj.status = FlowStatus::HitSingularLocus;
            return traj;
        }
    } catch (const SingularLocusError&) {
        traj.status = FlowStatus::HitSingularLocus;
        return traj;
    }

    const int dim = problem.state_dim();
    double h = std::min(span, span / 100.0 + 1e-6);
    std::vector<double> k1(dim), k2, k3, k4, k5, k6, k7;
    std::vector<double> ytmp(static_cast<std::size_t>(dim)), y5(static_cast<std::size_t>(dim));
    bool have_k1 = false;

    // a stall close to the singular wall is the wall's fault: the field
    // coefficients blow up as 1/Delta (or 1/|grad F|^2) and force h -> 0
    // long before the hard floor itself is reached
    const auto stall_status = [&](double sigma_now, const std::vector<double>& y_now) {
        try {
            const double health =
                field_health(fam, kind, problem.unpack(y_now), problem.t_at(sigma_now), cfg.field);
            return health < 1e8 ? FlowStatus::HitSingularLocus : FlowStatus::StepUnderflow;
        } catch (const SingularLocusError&) {
            return FlowStatus::HitSingularLocus;
        }
    };

    while (sigma < span) {
        // residual below resolution: the target is reached
        if (span - sigma <= 1e-14 * span) break;
        if (traj.steps_taken++ >= cfg.max_steps) {
            traj.status = FlowStatus::StepUnderflow;
            return traj;
        }
        h = std::min(h, span - sigma);
        if (h < cfg.min_step) {
            traj.status = stall_status(sigma, y);
            return traj;
        }

        bool singular = false;
        double err = 0.0;
        try {
            if (!have_k1) {
                k1 = problem.rhs(sigma, y);
                have_k1 = true;
            }
            const auto stage = [&](double c, std::initializer_list<std::pair<const std::vector<double>*, double>> terms) {
                for (int i = 0; i < dim; ++i) {
                    double acc = y[static_cast<std::size_t>(i)];
                    for (const auto& [k, w] : terms) acc += h * w * (*k)[static_cast<std::size_t>(i)];
                    ytmp[static_cast<std::size_t>(i)] = acc;
                }
                return problem.rhs(sigma + c * h, ytmp);
            };
            k2 = stage(kC2, {{&k1, kA21}});
            k3 = stage(kC3, {{&k1, kA31}, {&k2, kA32}});
            k4 = stage(kC4, {{&k1, kA41}, {&k2, kA42}, {&k3, kA43}});
            k5 = stage(kC5, {{&k1, kA51}, {&k2, kA52}, {&k3, kA53}, {&k4, kA54}});
            k6 = stage(1.0, {{&k1, kA61}, {&k2, kA62}, {&k3, kA63}, {&k4, kA64}, {&k5, kA65}});
            for (int i = 0; i < dim; ++i) {
                const std::size_t j = static_cast<std::size_t>(i);
                y5[j] = y[j] + h * (kB1 * k1[j] + kB3 * k3[j] + kB4 * k4[j] + kB5 * k5[j] + kB6 * k6[j]);
            }
            k7 = problem.rhs(sigma + h, y5);
            for (int i = 0; i < dim; ++i) {
                const std::size_t j = static_cast<std::size_t>(i);
                const double e = h * (kE1 * k1[j] + kE3 * k3[j] + kE4 * k4[j] + kE5 * k5[j] +
                                      kE6 * k6[j] + kE7 * k7[j]);
                const double scale = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[j]), std::abs(y5[j]));
                err += (e / scale) * (e / scale);
            }
            // error-per-unit-step: accumulated drift scales linearly with
            // the tolerances (halving rel_tol halves the drift)
            err = std::sqrt(err / dim) / std::max(h, cfg.min_step);
        } catch (const SingularLocusError&) {
            singular = true;
        }

        if (singular) {
            h *= 0.5;
            if (h < cfg.min_step) {
                traj.status = FlowStatus::HitSingularLocus;
                return traj;
            }
            continue;
        }

        if (err <= 1.0 || h <= cfg.min_step) {
            sigma += h;
            y = y5;
            k1 = k7;  // FSAL
            record(sigma, y);
            try {
                if (field_health(fam, kind, problem.unpack(y), problem.t_at(sigma), cfg.field) < 10.0) {
                    traj.status = FlowStatus::HitSingularLocus;
                    return traj;
                }
            } catch (const SingularLocusError&) {
                traj.status = FlowStatus::HitSingularLocus;
                return traj;
            }
        } else {
            have_k1 = true;  // k1 still valid at unchanged sigma
        }
        // e/h ~ h^4 under the per-unit-step norm: fourth-root controller
        const double grow = err > 0.0 ? 0.9 * std::pow(err, -0.25) : 5.0;
        h *= std::clamp(grow, 0.2, 5.0);
    }

    traj.status = FlowStatus::Completed;
    return traj;
}

std::pair<Point, Trajectory> trivialization_map(const GermFamily& fam, const Point& x_start,
                                                double t0, double t1, const IntegratorConfig& cfg,
                                                FieldKind kind) {
    if (vec_norm(x_start) > cfg.box_radius || std::abs(t0) > cfg.box_radius ||
        std::abs(t1) > cfg.box_radius)
        throw InputError("trivialization_map: start outside the neighbourhood box");
    Trajectory traj = integrate(fam, kind, x_start, Scalar{t0, 0.0}, t1, cfg);
    Point x_end(traj.samples.back().point.begin(), traj.samples.back().point.end() - 1);
    return {std::move(x_end), std::move(traj)};
}

ContinuityEstimate continuity_probe(const GermFamily& fam, const std::vector<Point>& base_points,
                                    const std::vector<Point>& offsets, double t0, double t1,
                                    const IntegratorConfig& cfg, FieldKind kind) {
    if (base_points.empty() || offsets.empty())
        throw InputError("continuity_probe: need base points and offsets");
    const double span = std::abs(t1 - t0);
    if (span == 0.0) throw InputError("continuity_probe: empty t span");

    ContinuityEstimate est;
    for (const Point& base : base_points) {
        const double g_base = std::abs(fam.eval_g(base));
        if (g_base > 1e-12 * (1.0 + std::abs(fam.eval_f(base))))
            throw InputError("continuity_probe: base point is not on Y = {g = 0}");
        // on Y the flow is exactly dt: x stays fixed
        for (const Point& offset : offsets) {
            if (offset.size() != base.size())
                throw InputError("continuity_probe: offset arity mismatch");
            Point start(base.size());
            for (std::size_t i = 0; i < base.size(); ++i) start[i] = base[i] + offset[i];

            ContinuityPair pair;
            pair.initial_distance = vec_norm(offset);
            pair.g_abs = std::abs(fam.eval_g(start));

            const Trajectory traj = integrate(fam, kind, start, Scalar{t0, 0.0}, t1, cfg);
            pair.completed = traj.status == FlowStatus::Completed;
            for (const TrajectorySample& sample : traj.samples) {
                double sep_sq = 0.0;
                for (std::size_t i = 0; i < base.size(); ++i)
                    sep_sq += std::norm(sample.point[i] - base[i]);
                pair.max_separation = std::max(pair.max_separation, std::sqrt(sep_sq));
            }
            est.pairs.push_back(pair);
        }
    }

    std::vector<const ContinuityPair*> completed;
    for (const ContinuityPair& p : est.pairs)
        if (p.completed) completed.push_back(&p);
    est.unreliable = completed.size() < std::max<std::size_t>(2, est.pairs.size() / 2);

    std::vector<double> etas;
    for (const ContinuityPair* p : completed) etas.push_back(p->g_abs);
    std::sort(etas.begin(), etas.end());
    etas.erase(std::unique(etas.begin(), etas.end()), etas.end());
    for (double eta : etas) {
        double eps = 0.0;
        for (const ContinuityPair* p : completed)
            if (p->g_abs <= eta)
                eps = std::max(eps, std::max(0.0, p->max_separation - p->initial_distance) / span);
        est.epsilon_table.emplace_back(eta, eps);
    }
    if (!est.epsilon_table.empty()) {
        const double eps_min = est.epsilon_table.front().second;
        const double eps_max = est.epsilon_table.back().second;
        est.decays = eps_max <= 1e-12 || eps_min <= 0.1 * eps_max;
    }
    if (est.unreliable) est.decays = false;
    return est;
}

KuoControlReport kuo_control_check(const GermFamily& fam, const Trajectory& trajectory,
                                   std::optional<double> kuo_arc_constant) {
    (void)fam;
    if (trajectory.status != FlowStatus::Completed)
        throw InputError("kuo_control_check: trajectory must be Completed");
    if (trajectory.samples.size() < 2)
        throw InputError("kuo_control_check: trajectory too short");

    KuoControlReport report;
    report.arc_constant = kuo_arc_constant;
    const TrajectorySample& first = trajectory.samples.front();
    const double rho0 = vec_norm(std::span<const Scalar>(first.point.data(), first.point.size() - 1));
    if (rho0 < 1e-300) {
        report.band_degenerate = true;
        return report;
    }
    for (std::size_t i = 1; i < trajectory.samples.size(); ++i) {
        const TrajectorySample& sample = trajectory.samples[i];
        const double s = sample.t_param - first.t_param;
        if (s == 0.0) continue;
        const double rho =
            vec_norm(std::span<const Scalar>(sample.point.data(), sample.point.size() - 1));
        if (rho < 1e-300) {
            report.band_degenerate = true;
            return report;
        }
        report.fitted_c = std::max(report.fitted_c, std::abs(std::log(rho / rho0)) / std::abs(s));
        ++report.samples_used;
    }
    return report;
}

}  // namespace germflow
