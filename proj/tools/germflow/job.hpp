#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "germflow/flow.hpp"
#include "germflow/infinity.hpp"
#include "germflow/verdicts.hpp"

namespace germflow::cli {

using Json = nlohmann::ordered_json;

enum class Task { Check, Exponent, Flow, Malgrange, Scan, ReportAll };

Task task_from_string(const std::string& name);
std::string to_string(Task task);

struct Diagnostic {
    std::string path;  // JSON-pointer into the spec
    std::string message;
};

/// One analysis job, parsed from the JSON spec file. Flag overrides (seed,
/// out dir) are applied before validation.
struct JobSpec {
    Task task = Task::Check;
    Json raw;  // echoed into the report

    FieldTag field = FieldTag::Real;
    std::optional<GermFamily> family;      // family tasks
    std::optional<Polynomial> polynomial;  // malgrange/scan tasks

    std::uint64_t seed = 0;
    std::string out_dir = "out";
    bool plots = false;

    ArcSuiteSpec arcs;
    SGrid grid;
    IntegratorConfig integrator;

    // check
    ConditionKind check_kind = ConditionKind::C0_1;
    double slope_min = 0.05;
    bool search_fallback = false;
    SearchBudget budget;

    // flow
    FieldKind flow_kind = FieldKind::Glued;
    Point x_start;
    double t0 = 0.0;
    double t1 = 0.0;
    bool reverse_check = false;
    int cloud_points = 0;

    // malgrange / scan
    std::vector<Scalar> t_values;
    int chart_index = 0;  // 0 = last variable
    std::vector<Scalar> chart_shift;

    // report-all
    std::vector<ConditionKind> all_kinds;
};

/// Parse without validation side effects; throws ParseError/InputError only
/// for JSON that cannot be represented at all.
JobSpec parse_job_spec(const Json& doc);

/// Pure validation: empty iff run() would not fail on input grounds.
std::vector<Diagnostic> validate(const JobSpec& spec);

struct RunResult {
    Json report;
    int exit_code = 0;  // 0 done, 2 indeterminate
    std::vector<std::string> written_files;
};

/// Dispatches the task, writes the report (and optional CSV/SVG artifacts)
/// under spec.out_dir, and returns the report with the suggested exit code.
RunResult run(const JobSpec& spec);

/// FNV-1a over the canonical dump of the report minus its volatile fields.
std::string determinism_hash(Json report);

}  // namespace germflow::cli
