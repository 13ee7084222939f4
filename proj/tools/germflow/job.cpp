#include "job.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "germflow/parallel.hpp"
#include "germflow/poly_text.hpp"
#include "germflow/version.hpp"
#include "svg.hpp"

namespace germflow::cli {

namespace fs = std::filesystem;

Task task_from_string(const std::string& name) {
    if (name == "check") return Task::Check;
    if (name == "exponent") return Task::Exponent;
    if (name == "flow") return Task::Flow;
    if (name == "malgrange") return Task::Malgrange;
    if (name == "scan") return Task::Scan;
    if (name == "report-all") return Task::ReportAll;
    throw InputError("unknown task '" + name + "'");
}

std::string to_string(Task task) {
    switch (task) {
        case Task::Check: return "check";
        case Task::Exponent: return "exponent";
        case Task::Flow: return "flow";
        case Task::Malgrange: return "malgrange";
        case Task::Scan: return "scan";
        case Task::ReportAll: return "report-all";
    }
    return "?";
}

namespace {

Scalar scalar_from_json(const Json& j) {
    if (j.is_number()) return Scalar{j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return Scalar{j[0].get<double>(), j[1].get<double>()};
    throw InputError("expected a number or [re, im] pair");
}

Json scalar_to_json(Scalar z) {
    if (z.imag() == 0.0) return Json(z.real());
    return Json::array({z.real(), z.imag()});
}

Json point_to_json(const Point& p) {
    Json out = Json::array();
    for (const Scalar& z : p) out.push_back(scalar_to_json(z));
    return out;
}

Json estimate_to_json(const OrderEstimate& est) {
    return Json{{"slope", est.slope},
                {"intercept", est.intercept},
                {"r_squared", est.r_squared},
                {"window", {est.window_lo, est.window_hi}},
                {"floored_samples", est.floored_samples}};
}

Json verdict_to_json(const ConditionVerdict& verdict) {
    Json arcs = Json::array();
    for (const ArcConditionFit& fit : verdict.per_arc) {
        arcs.push_back(Json{{"arc_id", fit.arc_id},
                            {"fit", estimate_to_json(fit.estimate)},
                            {"terminal_ratio", fit.terminal_ratio},
                            {"degenerate_samples", fit.degenerate_samples},
                            {"discarded_samples", fit.discarded_samples},
                            {"usable", fit.usable}});
    }
    return Json{{"kind", to_string(verdict.kind)},
                {"verdict", to_string(verdict.verdict)},
                {"fitted_constant", verdict.fitted_constant},
                {"worst_arc_id", verdict.worst_arc_id},
                {"slope_min", verdict.slope_min},
                {"per_arc", std::move(arcs)},
                {"note", "arc-based evidence, not a proof"}};
}

Json malgrange_to_json(const MalgrangeVerdict& verdict) {
    Json out{{"t0", scalar_to_json(verdict.t0)},
             {"holds", verdict.holds},
             {"indeterminate", verdict.indeterminate},
             {"vacuous", verdict.vacuous},
             {"arcs_filtered", verdict.arcs_filtered},
             {"note", "arc-based evidence, not a proof"}};
    out["delta_estimate"] = std::isfinite(verdict.delta_estimate)
                                ? Json(verdict.delta_estimate)
                                : Json("inf");
    out["witness_arc"] = verdict.witness ? Json(serialize_arc(*verdict.witness)) : Json(nullptr);
    return out;
}

void write_atomic(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot write " + tmp.string());
        out << content;
    }
    fs::rename(tmp, path);
}

double get_or(const Json& j, const char* key, double fallback) {
    return j.contains(key) ? j.at(key).get<double>() : fallback;
}

int get_or(const Json& j, const char* key, int fallback) {
    return j.contains(key) ? j.at(key).get<int>() : fallback;
}

}  // namespace

JobSpec parse_job_spec(const Json& doc) {
    JobSpec spec;
    spec.raw = doc;
    if (doc.contains("task")) spec.task = task_from_string(doc.at("task").get<std::string>());

    if (doc.contains("field")) {
        const std::string f = doc.at("field").get<std::string>();
        if (f == "real") spec.field = FieldTag::Real;
        else if (f == "complex") spec.field = FieldTag::Complex;
        else throw InputError("field must be 'real' or 'complex'");
    }
    if (spec.task == Task::Malgrange || spec.task == Task::Scan) spec.field = FieldTag::Complex;

    if (doc.contains("family")) {
        const Json& fam = doc.at("family");
        Polynomial f = parse_polynomial(fam.at("f").get<std::string>());
        Polynomial g = parse_polynomial(fam.at("g").get<std::string>());
        const int nvars = std::max(f.nvars(), g.nvars());
        spec.family.emplace(f.extended_to(nvars), g.extended_to(nvars), spec.field);
    }
    if (doc.contains("polynomial"))
        spec.polynomial = parse_polynomial(doc.at("polynomial").get<std::string>());

    if (doc.contains("seed")) spec.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("out")) spec.out_dir = doc.at("out").get<std::string>();
    if (doc.contains("plots")) spec.plots = doc.at("plots").get<bool>();

    if (doc.contains("arcs")) {
        const Json& a = doc.at("arcs");
        spec.arcs.count = get_or(a, "count", spec.arcs.count);
        spec.arcs.max_degree = get_or(a, "max_degree", spec.arcs.max_degree);
        if (a.contains("target"))
            spec.arcs.target = arc_target_from_string(a.at("target").get<std::string>());
    }
    if (doc.contains("grid")) {
        const Json& g = doc.at("grid");
        spec.grid.s0 = get_or(g, "s0", spec.grid.s0);
        spec.grid.ratio = get_or(g, "ratio", spec.grid.ratio);
        spec.grid.count = get_or(g, "count", spec.grid.count);
    }
    if (doc.contains("integrator")) {
        const Json& i = doc.at("integrator");
        spec.integrator.rel_tol = get_or(i, "rel_tol", spec.integrator.rel_tol);
        spec.integrator.abs_tol = get_or(i, "abs_tol", spec.integrator.abs_tol);
        spec.integrator.max_steps = get_or(i, "max_steps", spec.integrator.max_steps);
        spec.integrator.min_step = get_or(i, "min_step", spec.integrator.min_step);
        spec.integrator.box_radius = get_or(i, "box_radius", spec.integrator.box_radius);
    }
    if (doc.contains("partition")) {
        const Json& p = doc.at("partition");
        spec.integrator.field.partition.tau1 = get_or(p, "tau1", 0.01);
        spec.integrator.field.partition.tau2 = get_or(p, "tau2", 0.1);
    }
    if (doc.contains("search")) {
        const Json& s = doc.at("search");
        spec.budget.restarts = get_or(s, "restarts", spec.budget.restarts);
        spec.budget.iterations = get_or(s, "iterations", spec.budget.iterations);
    }
    spec.budget.seed = spec.seed;

    if (doc.contains("check")) {
        const Json& c = doc.at("check");
        if (c.contains("kind"))
            spec.check_kind = condition_kind_from_string(c.at("kind").get<std::string>());
        spec.slope_min = get_or(c, "slope_min", spec.slope_min);
        if (c.contains("search_fallback")) spec.search_fallback = c.at("search_fallback").get<bool>();
    }
    if (doc.contains("flow")) {
        const Json& f = doc.at("flow");
        if (f.contains("kind")) spec.flow_kind = field_kind_from_string(f.at("kind").get<std::string>());
        if (f.contains("x_start"))
            for (const Json& v : f.at("x_start")) spec.x_start.push_back(scalar_from_json(v));
        spec.t0 = get_or(f, "t0", 0.0);
        spec.t1 = get_or(f, "t1", 0.0);
        if (f.contains("reverse_check")) spec.reverse_check = f.at("reverse_check").get<bool>();
        spec.cloud_points = get_or(f, "cloud_points", 0);
    }
    if (doc.contains("malgrange")) {
        for (const Json& v : doc.at("malgrange").at("t0")) spec.t_values.push_back(scalar_from_json(v));
    }
    if (doc.contains("scan")) {
        const Json& s = doc.at("scan");
        for (const Json& v : s.at("t_grid")) spec.t_values.push_back(scalar_from_json(v));
    }
    if (doc.contains("chart_index")) spec.chart_index = doc.at("chart_index").get<int>();
    if (doc.contains("chart_shift"))
        for (const Json& v : doc.at("chart_shift")) spec.chart_shift.push_back(scalar_from_json(v));

    if (doc.contains("report_all") && doc.at("report_all").contains("kinds")) {
        for (const Json& k : doc.at("report_all").at("kinds"))
            spec.all_kinds.push_back(condition_kind_from_string(k.get<std::string>()));
    }
    if (spec.all_kinds.empty())
        spec.all_kinds = {ConditionKind::C0_1, ConditionKind::CorAg_ii,
                          ConditionKind::C2_6_LeSaito, ConditionKind::C2_7_Kuo};

    // task-driven defaults for the arc target
    if (!spec.raw.contains("arcs") || !spec.raw.at("arcs").contains("target")) {
        if (spec.task == Task::Exponent) spec.arcs.target = ArcTarget::ZeroSetLifted;
        if (spec.task == Task::Malgrange || spec.check_kind == ConditionKind::C3_1_Malgrange)
            spec.arcs.target = ArcTarget::Infinity;
    }
    return spec;
}

namespace {

bool is_family_kind(ConditionKind kind) {
    switch (kind) {
        case ConditionKind::C3_1_Malgrange:
        case ConditionKind::C3_2:
        case ConditionKind::C3_3: return false;
        default: return true;
    }
}

bool family_is_germ(const GermFamily& fam) {
    const Point origin(static_cast<std::size_t>(fam.nvars()), Scalar{0.0, 0.0});
    return fam.eval_f(origin) == Scalar{0.0, 0.0} && fam.eval_g(origin) == Scalar{0.0, 0.0};
}

}  // namespace

std::vector<Diagnostic> validate(const JobSpec& spec) {
    std::vector<Diagnostic> out;
    const auto diag = [&](const std::string& path, const std::string& msg) {
        out.push_back({path, msg});
    };

    if (spec.arcs.count < 1) diag("/arcs/count", "arc count must be >= 1");
    if (spec.arcs.max_degree < 1) diag("/arcs/max_degree", "max_degree must be >= 1");
    if (!(spec.grid.s0 > 0.0)) diag("/grid/s0", "s0 must be positive");
    if (!(spec.grid.ratio > 0.0 && spec.grid.ratio < 1.0)) diag("/grid/ratio", "ratio must be in (0,1)");
    if (spec.grid.count < 8) diag("/grid/count", "grid needs at least 8 samples");
    const PartitionParams& pp = spec.integrator.field.partition;
    if (!(pp.tau1 > 0.0 && pp.tau2 > pp.tau1))
        diag("/partition", "partition thresholds must satisfy 0 < tau1 < tau2");
    if (!(spec.integrator.rel_tol > 0.0)) diag("/integrator/rel_tol", "rel_tol must be positive");
    if (!(spec.integrator.abs_tol > 0.0)) diag("/integrator/abs_tol", "abs_tol must be positive");
    if (spec.integrator.max_steps < 1) diag("/integrator/max_steps", "max_steps must be >= 1");
    if (!(spec.integrator.min_step > 0.0)) diag("/integrator/min_step", "min_step must be positive");
    if (spec.budget.restarts < 1) diag("/search/restarts", "restarts must be >= 1");
    if (spec.budget.iterations < 1) diag("/search/iterations", "iterations must be >= 1");
    if (!(spec.slope_min > 0.0)) diag("/check/slope_min", "slope_min must be positive");

    const auto need_family = [&](const char* where) {
        if (!spec.family) {
            diag("/family", std::string("task ") + where + " needs a polynomial family");
            return false;
        }
        return true;
    };
    const auto need_polynomial = [&](const char* where) {
        if (!spec.polynomial) {
            diag("/polynomial", std::string("task ") + where + " needs a polynomial");
            return false;
        }
        return true;
    };

    switch (spec.task) {
        case Task::Check:
            if (is_family_kind(spec.check_kind)) {
                if (need_family("check") && spec.arcs.target != ArcTarget::Infinity &&
                    !family_is_germ(*spec.family))
                    diag("/family", "f and g must vanish at the origin for origin-based checks");
            } else if (need_polynomial("check (C3_* kinds)")) {
                if (spec.chart_index < 0 || spec.chart_index > spec.polynomial->nvars())
                    diag("/chart_index", "chart index out of range");
                if (spec.polynomial->degree() < 1) diag("/polynomial", "polynomial must be nonconstant");
                if (!spec.chart_shift.empty() &&
                    static_cast<int>(spec.chart_shift.size()) != spec.polynomial->nvars() - 1)
                    diag("/chart_shift", "needs one entry per non-chart variable");
            }
            break;
        case Task::Exponent:
            if (need_family("exponent")) {
                if (!family_is_germ(*spec.family))
                    diag("/family", "f and g must vanish at the origin");
                if (spec.arcs.target != ArcTarget::ZeroSetLifted)
                    diag("/arcs/target", "exponent estimation needs zero_set_lifted arcs");
            }
            break;
        case Task::Flow:
            if (need_family("flow")) {
                if (static_cast<int>(spec.x_start.size()) != spec.family->nvars())
                    diag("/flow/x_start", "start point arity must match the family");
            }
            if (spec.cloud_points < 0) diag("/flow/cloud_points", "cloud_points must be >= 0");
            break;
        case Task::Malgrange:
            if (need_polynomial("malgrange") && spec.polynomial->degree() < 1)
                diag("/polynomial", "polynomial must be nonconstant");
            if (spec.t_values.empty()) diag("/malgrange/t0", "need at least one t0 value");
            break;
        case Task::Scan:
            if (need_polynomial("scan") && spec.polynomial->degree() < 1)
                diag("/polynomial", "polynomial must be nonconstant");
            break;
        case Task::ReportAll:
            if (need_family("report-all") && !family_is_germ(*spec.family))
                diag("/family", "f and g must vanish at the origin");
            break;
    }
    return out;
}

namespace {

Json grid_to_json(const SGrid& grid) {
    return Json{{"s0", grid.s0}, {"ratio", grid.ratio}, {"count", grid.count}};
}

Json suite_to_json(const ArcSuiteSpec& arcs, std::uint64_t seed) {
    return Json{{"count", arcs.count},
                {"max_degree", arcs.max_degree},
                {"target", to_string(arcs.target)},
                {"seed", seed}};
}

struct TaskOutput {
    Json results;
    int exit_code = 0;
    std::vector<std::pair<std::string, std::string>> artifacts;  // path (relative), content
};

void plot_check(const JobSpec& spec, const GermFamily& fam, ConditionKind kind,
                const std::vector<Arc>& arcs, TaskOutput& out) {
    if (!spec.plots) return;
    std::vector<LogLogSeries> series;
    for (const Arc& arc : arcs) {
        LogLogSeries s;
        s.label = "arc " + std::to_string(arc.id());
        for (double sv : grid_values(spec.grid)) {
            try {
                const Point p = arc.eval_point(sv, &fam);
                if (!is_finite(p)) continue;
                const auto [num, den] = condition_point_values(fam, kind, p);
                if (den > 0.0 && std::isfinite(num / den)) s.points.emplace_back(sv, num / den);
            } catch (const NotLiftableError&) {
            }
        }
        series.push_back(std::move(s));
    }
    out.artifacts.emplace_back("check_" + to_string(kind) + ".svg",
                               render_loglog_svg("ratio vs s: " + to_string(kind), series));
}

TaskOutput run_check_family(const JobSpec& spec) {
    TaskOutput out;
    const GermFamily& fam = *spec.family;
    const std::vector<Arc> suite = random_arc_suite(fam, spec.arcs, spec.seed);
    const ConditionVerdict verdict =
        check_condition(fam, spec.check_kind, suite, spec.grid, spec.slope_min);
    out.results = Json{{"check", verdict_to_json(verdict)},
                       {"arc_suite", suite_to_json(spec.arcs, spec.seed)},
                       {"grid", grid_to_json(spec.grid)}};

    bool refuted = verdict.verdict == Verdict::Diverges;
    if (spec.search_fallback && !refuted) {
        const std::optional<Arc> violating =
            find_violating_arc(fam, spec.check_kind, spec.budget, spec.grid, spec.slope_min);
        out.results["violating_arc"] = violating ? Json(serialize_arc(*violating)) : Json(nullptr);
        refuted = violating.has_value();
    }
    out.exit_code = (verdict.verdict == Verdict::Indeterminate && !refuted) ? 2 : 0;
    plot_check(spec, fam, spec.check_kind, suite, out);
    return out;
}

TaskOutput run_check_infinity(const JobSpec& spec) {
    TaskOutput out;
    const Polynomial& f = *spec.polynomial;
    const int chart = spec.chart_index == 0 ? f.nvars() : spec.chart_index;

    if (spec.check_kind == ConditionKind::C3_1_Malgrange) {
        const GermFamily probe(f, Polynomial::zero(f.nvars()), FieldTag::Complex);
        ArcSuiteSpec arcs = spec.arcs;
        arcs.target = ArcTarget::Infinity;
        const std::vector<Arc> suite = random_arc_suite(probe, arcs, spec.seed);
        const ConditionVerdict verdict =
            check_condition(probe, spec.check_kind, suite, spec.grid, spec.slope_min);
        out.results = Json{{"check", verdict_to_json(verdict)},
                           {"arc_suite", suite_to_json(arcs, spec.seed)},
                           {"grid", grid_to_json(spec.grid)}};
        out.exit_code = verdict.verdict == Verdict::Indeterminate ? 2 : 0;
        plot_check(spec, probe, spec.check_kind, suite, out);
        return out;
    }

    // C3_2 / C3_3: the equivalence shadow on the chart family
    const InfinityFamily inf = build_infinity_family(f, chart, spec.chart_shift);
    ArcSuiteSpec arcs = spec.arcs;
    arcs.target = ArcTarget::Origin;
    const std::vector<Arc> suite = random_arc_suite(inf.family, arcs, spec.seed);
    const Check3233Report report = check_32_33(inf, suite, spec.grid, spec.slope_min);

    Json per_arc = Json::array();
    const auto class_name = [](ArcBoundedness b) {
        switch (b) {
            case ArcBoundedness::Bounded: return "bounded";
            case ArcBoundedness::Unbounded: return "unbounded";
            default: return "unclassified";
        }
    };
    for (const auto& cls : report.per_arc) {
        per_arc.push_back(Json{{"arc_id", cls.arc_id},
                               {"fit_32", estimate_to_json(cls.fit_32)},
                               {"fit_33", estimate_to_json(cls.fit_33)},
                               {"class_32", class_name(cls.class_32)},
                               {"class_33", class_name(cls.class_33)},
                               {"agree", cls.agree}});
    }
    out.results = Json{{"equivalence_32_33",
                        Json{{"chart_index", report.chart_index},
                             {"agreement_fraction", report.agreement_fraction},
                             {"vacuous", report.vacuous},
                             {"discarded_y0_zero", report.discarded_y0_zero},
                             {"discarded_t_divergent", report.discarded_t_divergent},
                             {"per_arc", std::move(per_arc)},
                             {"note", "gradient shadow of the sheaf condition; see C3_3"}}},
                       {"arc_suite", suite_to_json(arcs, spec.seed)},
                       {"grid", grid_to_json(spec.grid)}};
    out.exit_code = 0;
    return out;
}

TaskOutput run_exponent(const JobSpec& spec) {
    TaskOutput out;
    const GermFamily& fam = *spec.family;
    const std::vector<Arc> suite = random_arc_suite(fam, spec.arcs, spec.seed);
    const ExponentEstimate est = estimate_lojasiewicz_exponent(fam, suite, spec.grid);
    out.results = Json{{"exponent",
                        Json{{"alpha", est.alpha},
                             {"residual", est.residual},
                             {"reliable", est.reliable},
                             {"arcs_used", est.arcs_used}}},
                       {"arc_suite", suite_to_json(spec.arcs, spec.seed)},
                       {"grid", grid_to_json(spec.grid)}};
    out.exit_code = est.reliable ? 0 : 2;
    return out;
}

std::string trajectory_csv(const GermFamily& fam, const Trajectory& traj) {
    std::string csv = "t_param";
    const bool complex = fam.field() == FieldTag::Complex;
    for (int i = 1; i <= fam.nvars(); ++i) {
        if (complex)
            csv += ",x" + std::to_string(i) + "_re,x" + std::to_string(i) + "_im";
        else
            csv += ",x" + std::to_string(i);
    }
    csv += ",abs_F,abs_g\n";
    char buf[64];
    for (const TrajectorySample& sample : traj.samples) {
        std::snprintf(buf, sizeof buf, "%.17g", sample.t_param);
        csv += buf;
        const std::span<const Scalar> x(sample.point.data(), sample.point.size() - 1);
        for (const Scalar& z : x) {
            std::snprintf(buf, sizeof buf, ",%.17g", z.real());
            csv += buf;
            if (complex) {
                std::snprintf(buf, sizeof buf, ",%.17g", z.imag());
                csv += buf;
            }
        }
        const Scalar t = sample.point.back();
        std::snprintf(buf, sizeof buf, ",%.17g", std::abs(fam.eval_F(x, t)));
        csv += buf;
        std::snprintf(buf, sizeof buf, ",%.17g\n", std::abs(fam.eval_g(x)));
        csv += buf;
    }
    return csv;
}

TaskOutput run_flow(const JobSpec& spec) {
    TaskOutput out;
    const GermFamily& fam = *spec.family;

    Json flow;
    if (spec.t0 == spec.t1) flow["note"] = "zero-length flow: identity transport";

    const auto [x_end, traj] =
        trivialization_map(fam, spec.x_start, spec.t0, spec.t1, spec.integrator, spec.flow_kind);
    flow["kind"] = to_string(spec.flow_kind);
    flow["status"] = to_string(traj.status);
    flow["x_start"] = point_to_json(spec.x_start);
    flow["x_end"] = point_to_json(x_end);
    flow["t0"] = spec.t0;
    flow["t1"] = spec.t1;
    flow["F_drift"] = traj.F_drift;
    if (traj.g_drift) flow["g_drift"] = *traj.g_drift;
    flow["left_box"] = traj.left_box;
    flow["steps"] = traj.steps_taken;
    flow["samples"] = traj.samples.size();

    out.artifacts.emplace_back("trajectory.csv", trajectory_csv(fam, traj));
    flow["trajectory_csv"] = "trajectory.csv";

    if (spec.reverse_check && traj.status == FlowStatus::Completed) {
        const auto [x_back, back] =
            trivialization_map(fam, x_end, spec.t1, spec.t0, spec.integrator, spec.flow_kind);
        double err = 0.0;
        for (std::size_t i = 0; i < x_back.size(); ++i) err += std::norm(x_back[i] - spec.x_start[i]);
        flow["reverse_error"] = std::sqrt(err);
        flow["reverse_status"] = to_string(back.status);
    }

    if (spec.flow_kind == FieldKind::W_kuo && traj.status == FlowStatus::Completed) {
        const KuoControlReport kuo = kuo_control_check(fam, traj);
        flow["kuo_control"] = Json{{"fitted_c", kuo.fitted_c},
                                   {"band_degenerate", kuo.band_degenerate},
                                   {"samples_used", kuo.samples_used}};
    }

    // optional cloud transport for the before/after fibre picture
    if (spec.cloud_points > 0) {
        std::mt19937_64 rng(spec.seed ^ 0xc2b2ae3d27d4eb4fULL);
        Json cloud = Json::array();
        std::vector<ScatterGroup> groups(2);
        groups[0].label = "t0 fibre";
        groups[0].color = "#1f77b4";
        groups[1].label = "t1 fibre";
        groups[1].color = "#d62728";
        const double radius = 0.05 * (1.0 + vec_norm(spec.x_start));
        int completed = 0;
        for (int k = 0; k < spec.cloud_points; ++k) {
            Point start = spec.x_start;
            for (Scalar& z : start)
                z += Scalar{uniform_in(rng, -radius, radius),
                            fam.field() == FieldTag::Complex ? uniform_in(rng, -radius, radius) : 0.0};
            try {
                const auto [end_k, traj_k] =
                    trivialization_map(fam, start, spec.t0, spec.t1, spec.integrator, spec.flow_kind);
                const bool ok = traj_k.status == FlowStatus::Completed;
                completed += ok ? 1 : 0;
                cloud.push_back(Json{{"start", point_to_json(start)},
                                     {"end", point_to_json(end_k)},
                                     {"status", to_string(traj_k.status)}});
                const auto project = [](const Point& p) {
                    return p.size() >= 2 ? std::make_pair(p[0].real(), p[1].real())
                                         : std::make_pair(p[0].real(), p[0].imag());
                };
                groups[0].points.push_back(project(start));
                if (ok) groups[1].points.push_back(project(end_k));
            } catch (const InputError&) {
                cloud.push_back(Json{{"start", point_to_json(start)}, {"status", "outside_box"}});
            }
        }
        flow["cloud"] = Json{{"points", std::move(cloud)}, {"completed", completed}};
        if (spec.plots)
            out.artifacts.emplace_back("flow_points.svg",
                                       render_scatter_svg("fibre transport", groups));
    }

    out.results = Json{{"flow", std::move(flow)}};
    out.exit_code = traj.status == FlowStatus::Completed ? 0 : 2;
    return out;
}

TaskOutput run_malgrange(const JobSpec& spec) {
    TaskOutput out;
    const Polynomial& f = *spec.polynomial;
    const GermFamily probe(f, Polynomial::zero(f.nvars()), FieldTag::Complex);
    Json list = Json::array();
    int exit_code = 0;
    for (std::size_t i = 0; i < spec.t_values.size(); ++i) {
        ArcSuiteSpec arcs = spec.arcs;
        arcs.target = ArcTarget::Infinity;
        const std::vector<Arc> suite = random_arc_suite(probe, arcs, spec.seed + 1000 * i);
        const MalgrangeVerdict verdict =
            malgrange_check(f, spec.t_values[i], suite, spec.grid, spec.budget, spec.slope_min);
        if (verdict.indeterminate) exit_code = 2;
        Json entry = malgrange_to_json(verdict);
        entry["arc_suite"] = suite_to_json(arcs, spec.seed + 1000 * i);
        list.push_back(std::move(entry));
    }
    out.results = Json{{"malgrange", std::move(list)}, {"grid", grid_to_json(spec.grid)}};
    out.exit_code = exit_code;
    return out;
}

TaskOutput run_scan(const JobSpec& spec) {
    TaskOutput out;
    const Polynomial& f = *spec.polynomial;
    const std::vector<MalgrangeVerdict> verdicts =
        atypical_scan(f, spec.t_values, spec.budget, spec.grid);
    Json list = Json::array();
    int exit_code = 0;
    for (const MalgrangeVerdict& v : verdicts) {
        if (v.indeterminate) exit_code = 2;
        list.push_back(malgrange_to_json(v));
    }
    out.results = Json{{"scan", std::move(list)},
                       {"budget",
                        Json{{"restarts", spec.budget.restarts},
                             {"iterations", spec.budget.iterations},
                             {"seed", spec.budget.seed}}},
                       {"grid", grid_to_json(spec.grid)}};
    out.exit_code = exit_code;
    return out;
}

TaskOutput run_report_all(const JobSpec& spec) {
    TaskOutput out;
    const GermFamily& fam = *spec.family;
    int exit_code = 0;

    Json checks = Json::array();
    for (ConditionKind kind : spec.all_kinds) {
        ArcSuiteSpec arcs = spec.arcs;
        const std::vector<Arc> suite = random_arc_suite(fam, arcs, spec.seed);
        const ConditionVerdict verdict = check_condition(fam, kind, suite, spec.grid, spec.slope_min);
        if (verdict.verdict == Verdict::Indeterminate) exit_code = 2;
        Json entry = verdict_to_json(verdict);
        entry["arc_suite"] = suite_to_json(arcs, spec.seed);
        checks.push_back(std::move(entry));
    }

    ArcSuiteSpec lifted = spec.arcs;
    lifted.target = ArcTarget::ZeroSetLifted;
    Json exponent;
    try {
        const std::vector<Arc> suite = random_arc_suite(fam, lifted, spec.seed);
        const ExponentEstimate est = estimate_lojasiewicz_exponent(fam, suite, spec.grid);
        exponent = Json{{"alpha", est.alpha},
                        {"residual", est.residual},
                        {"reliable", est.reliable},
                        {"arcs_used", est.arcs_used}};
        if (!est.reliable) exit_code = std::max(exit_code, 2);
    } catch (const std::runtime_error& e) {
        exponent = Json{{"error", e.what()}};
        exit_code = std::max(exit_code, 2);
    } catch (const InputError& e) {
        exponent = Json{{"error", e.what()}};
        exit_code = std::max(exit_code, 2);
    }

    out.results = Json{{"checks", std::move(checks)},
                       {"exponent", std::move(exponent)},
                       {"grid", grid_to_json(spec.grid)}};
    out.exit_code = exit_code;
    return out;
}

}  // namespace

std::string determinism_hash(Json report) {
    report.erase("wall_clock_ms");
    report.erase("determinism_hash");
    const std::string dump = report.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

RunResult run(const JobSpec& spec) {
    const std::vector<Diagnostic> diags = validate(spec);
    if (!diags.empty()) {
        std::string msg = "invalid job spec:";
        for (const Diagnostic& d : diags) msg += "\n  " + d.path + ": " + d.message;
        throw InputError(msg);
    }

    const auto start = std::chrono::steady_clock::now();
    TaskOutput output;
    switch (spec.task) {
        case Task::Check:
            output = is_family_kind(spec.check_kind) ? run_check_family(spec) : run_check_infinity(spec);
            break;
        case Task::Exponent: output = run_exponent(spec); break;
        case Task::Flow: output = run_flow(spec); break;
        case Task::Malgrange: output = run_malgrange(spec); break;
        case Task::Scan: output = run_scan(spec); break;
        case Task::ReportAll: output = run_report_all(spec); break;
    }
    const auto elapsed = std::chrono::steady_clock::now() - start;

    Json report;
    report["schema_version"] = kReportSchemaVersion;
    report["tool"] = Json{{"name", "germflow"}, {"version", kVersion}};
    report["job"] = spec.raw;
    report["seed"] = spec.seed;
    report["results"] = output.results;
    report["wall_clock_ms"] =
        std::chrono::duration_cast<std::chrono::microseconds>(elapsed).count() / 1000.0;
    report["determinism_hash"] = determinism_hash(report);

    RunResult result;
    result.exit_code = output.exit_code;

    const fs::path out_dir(spec.out_dir);
    const fs::path report_path = out_dir / "report.json";
    write_atomic(report_path, report.dump(2) + "\n");
    result.written_files.push_back(report_path.string());
    for (const auto& [name, content] : output.artifacts) {
        const fs::path p = out_dir / name;
        write_atomic(p, content);
        result.written_files.push_back(p.string());
    }
    result.report = std::move(report);
    return result;
}

}  // namespace germflow::cli
