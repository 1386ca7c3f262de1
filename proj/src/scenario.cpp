#include "scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "coherent.hpp"
#include "dynamics.hpp"
#include "errors.hpp"
#include "fock.hpp"
#include "textio.hpp"

namespace qbrain::scenario {

namespace {

using ordered_json = nlohmann::ordered_json;

double jnum(double v) { return textio::round_number(v); }

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

ordered_json rounded_array(std::span<const double> values)
{
    ordered_json arr = ordered_json::array();
    for (double v : values) arr.push_back(jnum(v));
    return arr;
}

std::vector<int> one_based(const std::vector<int>& modes)
{
    std::vector<int> out(modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i) out[i] = modes[i] + 1;
    return out;
}

double require_number(const nlohmann::json& options, const std::string& key)
{
    if (!options.contains(key) || !options[key].is_number())
        throw validation_error("options: numeric field '" + key + "' required");
    return options[key].get<double>();
}

double optional_number(const nlohmann::json& options, const std::string& key, double fallback)
{
    if (!options.contains(key)) return fallback;
    if (!options[key].is_number())
        throw validation_error("options: field '" + key + "' must be a number");
    return options[key].get<double>();
}

long long optional_integer(const nlohmann::json& options, const std::string& key, long long fallback)
{
    if (!options.contains(key)) return fallback;
    if (!options[key].is_number_integer())
        throw validation_error("options: field '" + key + "' must be an integer");
    return options[key].get<long long>();
}

} // namespace

Limits limits_from_options(const nlohmann::json& options)
{
    Limits limits;
    if (options.is_object()) {
        long long dim = optional_integer(options, "dimension_limit",
                                         static_cast<long long>(limits.dimension_limit));
        long long en = optional_integer(options, "enumeration_limit",
                                        static_cast<long long>(limits.enumeration_limit));
        if (dim < 1) throw validation_error("options: dimension_limit must be >= 1");
        if (en < 1) throw validation_error("options: enumeration_limit must be >= 1");
        limits.dimension_limit = static_cast<std::size_t>(dim);
        limits.enumeration_limit = static_cast<std::uint64_t>(en);
    }
    return limits;
}

NetworkModel model_from_json_text(const std::string& text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw validation_error(std::string("model: invalid JSON: ") + e.what());
    }
    return NetworkModel::from_json(j);
}

std::string model_to_json_text(const NetworkModel& model) { return dump(model.to_json()); }

NetworkModel paper_example_model()
{
    // Six neurons, generic synaptic matrix (integer pattern scaled by 5e-11)
    // and thresholds tuned so that xi = (1e10, 3e10, 2e10) on the first three
    // modes makes the last three exactly gapless. Kept as JSON text so the
    // bundled models/matrix_g.json parses to the identical model.
    static const char* text = R"({
      "n": 6,
      "thresholds": [17, 6, 11, 25, 31, 43],
      "weights": [
        [0,       1e-10,   2e-10,   0.5e-10, 1.5e-10, 5e-10],
        [1e-10,   0,       3e-10,   3e-10,   2e-10,   3.5e-10],
        [2e-10,   3e-10,   0,       1.5e-10, 4e-10,   3e-10],
        [0.5e-10, 3e-10,   1.5e-10, 0,       4.5e-10, 1e-10],
        [1.5e-10, 2e-10,   4e-10,   4.5e-10, 0,       0.5e-10],
        [5e-10,   3.5e-10, 3e-10,   1e-10,   0.5e-10, 0]
      ]
    })";
    return model_from_json_text(text);
}

// ---------------------------------------------------------------------------
// analyze

Artifacts run_analyze(const NetworkModel& model, const nlohmann::json& options,
                      const Limits& limits)
{
    const int n = model.size();
    SolveOptions solve_opts;
    solve_opts.tolerance = optional_number(options, "tolerance", 1e-9);
    if (solve_opts.tolerance <= 0.0)
        throw validation_error("analyze: tolerance must be positive");
    solve_opts.integer = options.is_object() && options.value("integer", false);
    int max_excited =
        static_cast<int>(optional_integer(options, "max_excited", std::min(3, n - 1)));

    std::vector<int> d_values = {1, 2, 3};
    if (options.is_object() && options.contains("d_values")) {
        d_values = options["d_values"].get<std::vector<int>>();
        for (int d : d_values)
            if (d < 0) throw validation_error("analyze: d values must be nonnegative");
    }
    std::vector<double> budgets = {1.0};
    if (options.is_object() && options.contains("budgets")) {
        budgets = options["budgets"].get<std::vector<double>>();
        for (double b : budgets)
            if (b < 0.0) throw validation_error("analyze: budgets must be nonnegative");
    }

    std::vector<CriticalSolution> splits = search_critical_splits(model, max_excited, solve_opts);

    ordered_json report;
    report["task"] = "analyze";
    report["n"] = n;
    report["tolerance"] = jnum(solve_opts.tolerance);
    report["max_excited"] = max_excited;
    report["split_count"] = splits.size();
    ordered_json jsplits = ordered_json::array();
    for (const auto& sol : splits) {
        ordered_json js;
        js["excited_modes"] = one_based(sol.excited_modes);
        js["gapless_modes"] = one_based(sol.gapless_modes);
        js["xi"] = rounded_array(sol.xi);
        js["residual"] = jnum(sol.residual);
        js["effective_gaps"] = rounded_array(sol.effective_gaps);
        js["excited_effective_thresholds"] = rounded_array(sol.excited_thresholds);
        js["degeneracy_dimension"] = sol.degeneracy_dimension;

        const int m = static_cast<int>(sol.gapless_modes.size());
        double pair_weight = 0.0;
        for (int j : sol.gapless_modes)
            for (int k : sol.gapless_modes) pair_weight += model.weight(j, k);

        ordered_json capacity = ordered_json::array();
        for (int d : d_values) {
            for (double budget : budgets) {
                ordered_json cell;
                cell["d"] = d;
                cell["budget"] = jnum(budget);
                cell["closed_form"] = pattern_count(m, d).to_string();
                cell["worst_case_gap"] = jnum(static_cast<double>(d) * d * pair_weight);
                EnumerateOptions eopts;
                eopts.limit = limits.enumeration_limit;
                try {
                    PatternLibrary lib = enumerate_patterns(model, sol, d, budget, eopts);
                    cell["count"] = lib.count;
                } catch (const capacity_error&) {
                    cell["count"] = nullptr;
                    cell["exceeds_enumeration_limit"] = true;
                }
                capacity.push_back(std::move(cell));
            }
        }
        js["capacity"] = std::move(capacity);
        jsplits.push_back(std::move(js));
    }
    report["splits"] = std::move(jsplits);

    Artifacts out;
    out.report_json = dump(report);
    return out;
}

// ---------------------------------------------------------------------------
// evolve / compare

namespace {

struct EvolveSpec {
    std::string engine = "exact";
    std::string initial = "critical";
    double q = 0.0;
    double eps_x = 0.0;
    std::vector<double> stimulus;      // original mode indexing
    int freeze_mode = -1;              // resolved for initial == "critical"
    double freeze_value = 0.0;
    std::vector<double> times;
    double t_max = 0.0;
    int caps_override = 0;             // 0 = automatic
};

EvolveSpec parse_evolve_spec(const NetworkModel& model, const nlohmann::json& options,
                             bool need_initial)
{
    EvolveSpec spec;
    const int n = model.size();
    if (!options.is_object()) throw validation_error("options: JSON object required");

    if (options.contains("engine")) {
        spec.engine = options["engine"].get<std::string>();
        if (spec.engine != "exact" && spec.engine != "meanfield")
            throw validation_error("options: engine must be 'exact' or 'meanfield'");
    }
    if (need_initial && options.contains("initial")) {
        spec.initial = options["initial"].get<std::string>();
        if (spec.initial != "critical" && spec.initial != "ground")
            throw validation_error("options: initial must be 'critical' or 'ground'");
    }

    if (options.contains("q"))
        spec.q = require_number(options, "q");
    else if (model.input_layer())
        spec.q = model.input_layer()->q;
    else
        throw validation_error("options: coupling 'q' required (model has no input layer)");
    if (spec.q < 0.0) throw validation_error("options: q must be >= 0");
    spec.eps_x = optional_number(options, "eps_x",
                                 model.input_layer() ? model.input_layer()->eps_x : 0.0);
    if (spec.eps_x < 0.0) throw validation_error("options: eps_x must be >= 0");

    if (!options.contains("stimulus") || !options["stimulus"].is_array())
        throw validation_error("options: array field 'stimulus' required");
    spec.stimulus = options["stimulus"].get<std::vector<double>>();
    if (static_cast<int>(spec.stimulus.size()) != n)
        throw validation_error("options: stimulus must hold one mean occupation per neuron");
    for (double x : spec.stimulus)
        if (x < 0.0 || !std::isfinite(x))
            throw validation_error("options: stimulus entries must be finite and >= 0");

    // sampling grid: default 64 points over one Rabi period pi/q
    if (options.contains("times")) {
        spec.times = options["times"].get<std::vector<double>>();
        if (spec.times.empty()) throw validation_error("options: 'times' must be nonempty");
        for (std::size_t i = 0; i < spec.times.size(); ++i) {
            if (spec.times[i] < 0.0 || (i > 0 && spec.times[i] < spec.times[i - 1]))
                throw validation_error("options: 'times' must be nonnegative and sorted");
        }
        spec.t_max = spec.times.back();
    } else {
        double t_max = optional_number(options, "t_max", 0.0);
        if (t_max <= 0.0) {
            if (spec.q <= 0.0)
                throw validation_error("options: t_max required when q == 0");
            t_max = M_PI / spec.q;
        }
        long long samples = optional_integer(options, "samples", 64);
        if (samples < 2) throw validation_error("options: at least 2 samples required");
        spec.t_max = t_max;
        spec.times.resize(static_cast<std::size_t>(samples));
        for (long long i = 0; i < samples; ++i)
            spec.times[static_cast<std::size_t>(i)] =
                t_max * static_cast<double>(i) / static_cast<double>(samples - 1);
    }

    long long caps = optional_integer(options, "caps", 0);
    if (caps < 0) throw validation_error("options: caps must be positive");
    spec.caps_override = static_cast<int>(caps);

    if (spec.initial == "critical") {
        if (options.contains("freeze")) {
            const auto& fr = options["freeze"];
            if (!fr.is_object() || !fr.contains("mode") || !fr.contains("value"))
                throw validation_error("options: freeze must be {\"mode\": j, \"value\": v}");
            spec.freeze_mode = fr["mode"].get<int>();
            spec.freeze_value = fr["value"].get<double>();
            if (spec.freeze_mode < 0 || spec.freeze_mode >= n)
                throw validation_error("options: freeze mode out of range");
            if (spec.freeze_value < 0.0)
                throw validation_error("options: freeze value must be >= 0");
        } else {
            // default: first mode whose single-mode excited split is critical
            for (int m = 0; m < n && spec.freeze_mode < 0; ++m) {
                std::vector<int> gapless;
                for (int j = 0; j < n; ++j)
                    if (j != m) gapless.push_back(j);
                if (auto sol = try_solve_critical_split(model, gapless)) {
                    spec.freeze_mode = m;
                    spec.freeze_value = sol->xi.front();
                }
            }
            if (spec.freeze_mode < 0)
                throw validation_error(
                    "options: no single-mode critical state exists; pass an explicit freeze");
        }
        // the stimulated pattern never feeds the frozen neuron
        spec.stimulus[spec.freeze_mode] = 0.0;
    }
    return spec;
}

struct EngineRun {
    EvolutionResult result;
    std::vector<int> active; // original mode ids, aligned with result columns
    int frozen_mode = -1;
    double frozen_value = 0.0;
    std::vector<int> caps; // per basis mode (exact engine only)
};

std::vector<int> channel_caps(const std::vector<double>& stimulus, int caps_override)
{
    std::vector<int> caps(stimulus.size());
    for (std::size_t j = 0; j < stimulus.size(); ++j) {
        if (stimulus[j] <= 0.0) {
            caps[j] = 0; // idle channel: per-channel number conservation keeps it empty
        } else if (caps_override > 0) {
            caps[j] = caps_override;
        } else {
            caps[j] = std::max(2, coherent_required_cap(stimulus[j]));
        }
    }
    return caps;
}

EngineRun run_exact_case(const NetworkModel& model, const EvolveSpec& spec, bool critical,
                         const Limits& limits)
{
    EngineRun run;
    NetworkModel active_model = model;
    std::vector<double> active_stimulus = spec.stimulus;
    const int n = model.size();
    if (critical) {
        run.frozen_mode = spec.freeze_mode;
        run.frozen_value = spec.freeze_value;
        active_model = frozen_reduction(model, {{spec.freeze_mode, spec.freeze_value}});
        active_stimulus.clear();
        for (int j = 0; j < n; ++j) {
            if (j == spec.freeze_mode) continue;
            run.active.push_back(j);
            active_stimulus.push_back(spec.stimulus[j]);
        }
    } else {
        for (int j = 0; j < n; ++j) run.active.push_back(j);
    }
    active_model.set_input_layer(spec.q, spec.eps_x);

    const int an = active_model.size();
    std::vector<int> caps_y = channel_caps(active_stimulus, spec.caps_override);
    std::vector<int> caps(caps_y);
    caps.insert(caps.end(), caps_y.begin(), caps_y.end());
    run.caps = caps;

    auto basis = build_basis(2 * an, caps, limits.dimension_limit);
    std::vector<cplx> alphas(2 * an, 0.0);
    for (int j = 0; j < an; ++j) alphas[an + j] = std::sqrt(active_stimulus[j]);
    CoherentStateResult init = coherent_state(basis, alphas);

    run.result = evolve_exact(active_model, init.state, spec.times);
    return run;
}

EngineRun run_meanfield_case(const NetworkModel& model, const EvolveSpec& spec, bool critical)
{
    // The mean-field engine represents the critically excited neuron directly.
    EngineRun run;
    const int n = model.size();
    for (int j = 0; j < n; ++j) run.active.push_back(j);
    NetworkModel active_model = model;
    active_model.set_input_layer(spec.q, spec.eps_x);

    CoherentConfig config;
    config.a.assign(n, 0.0);
    config.b.assign(n, 0.0);
    if (critical) {
        run.frozen_mode = spec.freeze_mode;
        run.frozen_value = spec.freeze_value;
        config.a[spec.freeze_mode] = std::sqrt(spec.freeze_value);
    }
    for (int j = 0; j < n; ++j) config.b[j] = std::sqrt(spec.stimulus[j]);

    run.result = evolve_meanfield(active_model, config, spec.times);
    return run;
}

EngineRun run_case(const NetworkModel& model, const EvolveSpec& spec, bool critical,
                   const Limits& limits)
{
    if (spec.engine == "meanfield") return run_meanfield_case(model, spec, critical);
    return run_exact_case(model, spec, critical, limits);
}

// expectation of original mode j at sample i; a mode absent from the run's
// active set is the frozen one (exact engine) and reports its fixed value
double y_at(const EngineRun& run, std::size_t i, int mode)
{
    for (std::size_t c = 0; c < run.active.size(); ++c)
        if (run.active[c] == mode) return run.result.y_expect[i][c];
    if (mode == run.frozen_mode) return run.frozen_value;
    return 0.0;
}

double x_at(const EngineRun& run, std::size_t i, int mode)
{
    if (run.result.x_expect.empty()) return 0.0;
    for (std::size_t c = 0; c < run.active.size(); ++c)
        if (run.active[c] == mode) return run.result.x_expect[i][c];
    return 0.0;
}

void append_series(std::ostringstream& csv, const NetworkModel& model, const EngineRun& run,
                   const std::vector<double>& stimulus, const std::string& case_label)
{
    const int n = model.size();
    const bool any_stimulus =
        std::any_of(stimulus.begin(), stimulus.end(), [](double x) { return x > 0.0; });
    for (std::size_t i = 0; i < run.result.times.size(); ++i) {
        if (!case_label.empty()) csv << case_label << ",";
        csv << textio::format_number(run.result.times[i]);
        std::vector<double> y_orig(n), x_orig(n);
        for (int j = 0; j < n; ++j) y_orig[j] = y_at(run, i, j);
        for (int j = 0; j < n; ++j) x_orig[j] = x_at(run, i, j);
        for (int j = 0; j < n; ++j) csv << "," << textio::format_number(y_orig[j]);
        for (int j = 0; j < n; ++j) csv << "," << textio::format_number(x_orig[j]);
        csv << "," << textio::format_number(run.result.norm_drift[i]);
        // recall_fidelity restricts to stimulated modes, so frozen or idle
        // channels never enter
        const double fidelity = any_stimulus ? recall_fidelity(y_orig, stimulus) : 0.0;
        csv << "," << textio::format_number(fidelity) << "\n";
    }
}

std::string series_header(int n, bool with_case)
{
    std::ostringstream row;
    if (with_case) row << "case,";
    row << "t";
    for (int j = 1; j <= n; ++j) row << ",Y_" << j;
    for (int j = 1; j <= n; ++j) row << ",X_" << j;
    row << ",norm_drift,fidelity";
    return "# qbrain-csv v1 columns: " + row.str() + "\n" + row.str() + "\n";
}

struct PeakInfo {
    double peak = 0.0;
    double t_peak = 0.0;
};

PeakInfo peak_of(const EngineRun& run, int mode)
{
    PeakInfo info;
    for (std::size_t i = 0; i < run.result.times.size(); ++i) {
        double v = y_at(run, i, mode);
        if (v > info.peak) {
            info.peak = v;
            info.t_peak = run.result.times[i];
        }
    }
    return info;
}

ordered_json run_summary_common(const EvolveSpec& spec)
{
    ordered_json j;
    j["engine"] = spec.engine;
    j["q"] = jnum(spec.q);
    j["eps_x"] = jnum(spec.eps_x);
    j["stimulus"] = rounded_array(spec.stimulus);
    if (spec.q > 0.0) j["rabi_period"] = jnum(M_PI / spec.q);
    j["t_max"] = jnum(spec.t_max);
    j["samples"] = spec.times.size();
    return j;
}

} // namespace

Artifacts run_evolve(const NetworkModel& model, const nlohmann::json& options,
                     const Limits& limits)
{
    EvolveSpec spec = parse_evolve_spec(model, options, /*need_initial=*/true);
    const bool critical = spec.initial == "critical";
    EngineRun run = run_case(model, spec, critical, limits);

    std::ostringstream csv;
    csv << series_header(model.size(), false);
    append_series(csv, model, run, spec.stimulus, "");

    ordered_json summary = run_summary_common(spec);
    summary["task"] = "evolve";
    summary["initial"] = spec.initial;
    if (run.frozen_mode >= 0) {
        summary["frozen_mode"] = run.frozen_mode + 1;
        summary["frozen_value"] = jnum(run.frozen_value);
    }
    if (!run.caps.empty()) summary["caps"] = run.caps;

    double max_drift = 0.0;
    for (double d : run.result.norm_drift) max_drift = std::max(max_drift, d);
    summary["max_norm_drift"] = jnum(max_drift);

    const bool any_stimulus =
        std::any_of(spec.stimulus.begin(), spec.stimulus.end(), [](double x) { return x > 0.0; });
    double best_fid = 0.0, last_fid = 0.0;
    if (any_stimulus) {
        for (std::size_t i = 0; i < run.result.times.size(); ++i) {
            std::vector<double> y(model.size());
            for (int j = 0; j < model.size(); ++j) y[j] = y_at(run, i, j);
            last_fid = recall_fidelity(y, spec.stimulus);
            best_fid = std::max(best_fid, last_fid);
        }
    }
    summary["peak_fidelity"] = jnum(best_fid);
    summary["final_fidelity"] = jnum(last_fid);

    ordered_json peaks = ordered_json::array();
    for (int j = 0; j < model.size(); ++j) {
        if (spec.stimulus[j] <= 0.0) continue;
        PeakInfo info = peak_of(run, j);
        peaks.push_back({{"mode", j + 1},
                         {"x", jnum(spec.stimulus[j])},
                         {"peak", jnum(info.peak)},
                         {"t_peak", jnum(info.t_peak)}});
    }
    summary["peaks"] = std::move(peaks);

    Artifacts out;
    out.series_csv = csv.str();
    out.report_json = dump(summary);
    return out;
}

Artifacts run_compare(const NetworkModel& model, const nlohmann::json& options,
                      const Limits& limits)
{
    EvolveSpec spec = parse_evolve_spec(model, options, /*need_initial=*/false);
    // the comparison always puts the network into the critical state first
    EngineRun critical_run = run_case(model, spec, /*critical=*/true, limits);
    EngineRun ground_run = run_case(model, spec, /*critical=*/false, limits);

    std::ostringstream csv;
    csv << series_header(model.size(), true);
    append_series(csv, model, critical_run, spec.stimulus, "critical");
    append_series(csv, model, ground_run, spec.stimulus, "ground");

    ordered_json summary = run_summary_common(spec);
    summary["task"] = "compare";
    summary["frozen_mode"] = critical_run.frozen_mode + 1;
    summary["frozen_value"] = jnum(critical_run.frozen_value);
    const double expected = spec.q > 0.0 ? spec.q * spec.q / (1.0 + spec.q * spec.q) : 0.0;
    summary["peak_ratio_expected"] = jnum(expected);

    ordered_json per_mode = ordered_json::array();
    double worst_rel = 0.0;
    double ratio_mean = 0.0;
    int stimulated = 0;
    for (int j = 0; j < model.size(); ++j) {
        if (spec.stimulus[j] <= 0.0) continue;
        PeakInfo pc = peak_of(critical_run, j);
        PeakInfo pg = peak_of(ground_run, j);
        double ratio = pc.peak > 0.0 ? pg.peak / pc.peak : 0.0;
        ratio_mean += ratio;
        ++stimulated;
        if (expected > 0.0)
            worst_rel = std::max(worst_rel, std::abs(ratio - expected) / expected);
        per_mode.push_back({{"mode", j + 1},
                            {"x", jnum(spec.stimulus[j])},
                            {"peak_critical", jnum(pc.peak)},
                            {"t_peak_critical", jnum(pc.t_peak)},
                            {"peak_ground", jnum(pg.peak)},
                            {"t_peak_ground", jnum(pg.t_peak)},
                            {"peak_ratio", jnum(ratio)}});
    }
    if (stimulated == 0) throw validation_error("compare: stimulus must excite at least one mode");
    summary["peak_ratio"] = jnum(ratio_mean / stimulated);
    summary["peak_ratio_max_rel_error"] = jnum(worst_rel);
    summary["per_mode"] = std::move(per_mode);

    Artifacts out;
    out.series_csv = csv.str();
    out.report_json = dump(summary);
    return out;
}

// ---------------------------------------------------------------------------
// pack

Artifacts run_pack(const nlohmann::json& options, const Limits& limits)
{
    if (!options.is_object()) throw validation_error("options: JSON object required");
    const double g = require_number(options, "g");
    const int modes = static_cast<int>(optional_integer(options, "modes", 0));
    const double budget = require_number(options, "budget");
    const double threshold = require_number(options, "threshold");
    if (modes < 1) throw validation_error("pack: integer field 'modes' (>= 1) required");

    PackOptions popts;
    popts.kappa = optional_number(options, "kappa", 0.01);
    popts.max_points = limits.enumeration_limit;
    popts.sample_limit = static_cast<int>(optional_integer(options, "sample_limit", 8));
    const int sweep_decades = static_cast<int>(optional_integer(options, "sweep_decades", 2));
    if (sweep_decades < 0) throw validation_error("pack: sweep_decades must be >= 0");

    Packing packing = pack_patterns(g, modes, budget, threshold, popts);

    ordered_json report;
    report["task"] = "pack";
    report["g"] = jnum(g);
    report["modes"] = modes;
    report["budget"] = jnum(budget);
    report["threshold"] = jnum(threshold);
    report["kappa"] = jnum(popts.kappa);
    report["pitch"] = jnum(packing.pitch);
    report["radius_sq"] = jnum(packing.radius_sq);
    report["count"] = packing.count;
    ordered_json samples = ordered_json::array();
    for (const auto& pattern : packing.samples) {
        ordered_json jp = ordered_json::array();
        for (const cplx& a : pattern)
            jp.push_back({jnum(a.real()), jnum(a.imag())});
        samples.push_back(std::move(jp));
    }
    report["sample_patterns"] = std::move(samples);

    std::ostringstream csv;
    csv << "# qbrain-csv v1 columns: g,count,radius_sq\n";
    csv << "g,count,radius_sq\n";
    for (int k = 0; k <= sweep_decades; ++k) {
        const double gk = g / std::pow(10.0, k);
        Packing pk = pack_patterns(gk, modes, budget, threshold, popts);
        csv << textio::format_number(gk) << "," << pk.count << ","
            << textio::format_number(pk.radius_sq) << "\n";
    }

    Artifacts out;
    out.report_json = dump(report);
    out.sweep_csv = csv.str();
    return out;
}

// ---------------------------------------------------------------------------
// paper-example

Artifacts run_paper_example()
{
    NetworkModel model = paper_example_model();
    const std::vector<int> gapless = {3, 4, 5};
    CriticalSolution sol = solve_critical_split(model, gapless);

    ordered_json report;
    report["task"] = "paper-example";
    report["description"] =
        "six-neuron network with a generic synaptic matrix; the first three "
        "neurons are critically excited, making the last three gapless";
    report["model"] = model.to_json();
    report["excited_modes"] = one_based(sol.excited_modes);
    report["gapless_modes"] = one_based(sol.gapless_modes);
    report["xi"] = rounded_array(sol.xi);
    report["residual"] = jnum(sol.residual);
    report["effective_gaps"] = rounded_array(sol.effective_gaps);
    report["capacity_note"] = "(d+1)^3 patterns for gapless set of size 3";

    double pair_weight = 0.0;
    for (int j : sol.gapless_modes)
        for (int k : sol.gapless_modes) pair_weight += model.weight(j, k);
    const double unit_budget = 1.0;
    const long long d_max = static_cast<long long>(std::floor(std::sqrt(unit_budget / pair_weight)));
    ordered_json unit_gap;
    unit_gap["budget"] = jnum(unit_budget);
    unit_gap["pairwise_weight_sum"] = jnum(pair_weight);
    unit_gap["max_uniform_occupation"] = d_max;
    unit_gap["pattern_count_closed_form"] =
        pattern_count(static_cast<int>(sol.gapless_modes.size()), d_max).to_string();
    report["unit_gap"] = std::move(unit_gap);

    ordered_json capacity = ordered_json::array();
    for (int d : {1, 2, 3}) {
        PatternLibrary lib = enumerate_patterns(model, sol, d, unit_budget);
        capacity.push_back({{"d", d},
                            {"budget", jnum(unit_budget)},
                            {"closed_form", pattern_count(3, d).to_string()},
                            {"count", lib.count}});
    }
    report["capacity"] = std::move(capacity);

    Artifacts out;
    out.report_json = dump(report);
    return out;
}

} // namespace qbrain::scenario
