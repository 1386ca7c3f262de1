// qbrain command line: model ingestion, critical-state analysis, pattern
// capacity, recall dynamics and classical packing, all through the shared
// library's C API.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qbrain.h"

namespace {

using nlohmann::json;

int fail(qbn_status status)
{
    std::fprintf(stderr, "error: %s\n", qbn_last_error());
    return static_cast<int>(status);
}

int fail_message(const std::string& message, qbn_status status = QBN_VALIDATION)
{
    std::fprintf(stderr, "error: %s\n", message.c_str());
    return static_cast<int>(status);
}

bool read_file(const std::string& path, std::string& out)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::ostringstream ss;
    ss << in.rdbuf();
    out = ss.str();
    return true;
}

// empty or "-" targets mean stdout
bool write_artifact(const std::string& path, const char* text)
{
    if (!text) return true;
    if (path.empty() || path == "-") {
        std::fputs(text, stdout);
        return true;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out << text;
    return out.good();
}

void apply_env_limits(json& options)
{
    if (const char* dim = std::getenv("QBRAIN_DIM_LIMIT"); dim && *dim)
        if (!options.contains("dimension_limit"))
            options["dimension_limit"] = std::strtoll(dim, nullptr, 10);
    if (const char* en = std::getenv("QBRAIN_ENUM_LIMIT"); en && *en)
        if (!options.contains("enumeration_limit"))
            options["enumeration_limit"] = std::strtoll(en, nullptr, 10);
}

struct ModelSource {
    std::string file;
    int uniform_n = 0;
    double uniform_g = 0.0;
};

// scenario config file: model reference plus task options in one object
int load_config(const std::string& path, json& options, ModelSource& source)
{
    std::string text;
    if (!read_file(path, text)) return fail_message("cannot read config file " + path);
    json config = json::parse(text, nullptr, false);
    if (config.is_discarded() || !config.is_object())
        return fail_message("config file must hold a JSON object");
    if (config.contains("model")) {
        const auto& m = config["model"];
        if (m.is_string())
            source.file = m.get<std::string>();
        else if (m.is_object() && m.contains("file"))
            source.file = m["file"].get<std::string>();
        else if (m.is_object())
            options["__inline_model"] = m;
        else
            return fail_message("config: 'model' must be a path or an inline object");
        config.erase("model");
    }
    for (auto it = config.begin(); it != config.end(); ++it) options[it.key()] = it.value();
    return 0;
}

int acquire_model(const ModelSource& source, const json& options, qbn_model** model)
{
    if (!source.file.empty()) {
        std::string text;
        if (!read_file(source.file, text))
            return fail_message("cannot read model file " + source.file);
        qbn_status st = qbn_model_from_json(text.c_str(), model);
        if (st != QBN_OK) return fail(st);
        return 0;
    }
    if (options.contains("__inline_model")) {
        qbn_status st =
            qbn_model_from_json(options["__inline_model"].dump().c_str(), model);
        if (st != QBN_OK) return fail(st);
        return 0;
    }
    if (source.uniform_n > 0) {
        qbn_status st = qbn_model_uniform(source.uniform_n, source.uniform_g, model);
        if (st != QBN_OK) return fail(st);
        return 0;
    }
    return fail_message("no model given: pass --model FILE or --uniform N G");
}

std::vector<double> parse_number_list(const std::string& text)
{
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        values.push_back(std::strtod(item.c_str(), nullptr));
    }
    return values;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"qbrain — critically excited bosonic networks: capacity and recall"};
    app.require_subcommand(1);

    // shared model/config flags per subcommand
    struct Common {
        std::string config;
        std::string model_file;
        std::vector<double> uniform; // n, g
    };
    auto add_common = [](CLI::App* cmd, Common& c) {
        cmd->add_option("--config", c.config, "scenario config file (JSON)");
        cmd->add_option("--model", c.model_file, "model file (JSON schema, see README)");
        cmd->add_option("--uniform", c.uniform, "uniform model: neuron count and coupling g")
            ->expected(2);
    };

    // analyze ---------------------------------------------------------------
    auto* analyze = app.add_subcommand("analyze", "critical splits, gaps and capacity table");
    Common an_common;
    add_common(analyze, an_common);
    int an_max_excited = 0;
    double an_tol = 0.0;
    std::string an_d, an_budgets, an_out;
    auto* an_max_opt = analyze->add_option("--max-excited", an_max_excited,
                                           "largest excited-set size searched");
    auto* an_tol_opt = analyze->add_option("--tol", an_tol, "residual tolerance (relative)");
    auto* an_d_opt = analyze->add_option("--d", an_d, "comma list of per-mode caps d");
    auto* an_b_opt = analyze->add_option("--budgets", an_budgets, "comma list of gap budgets");
    analyze->add_option("-o,--out", an_out, "report path (default stdout)");

    // evolve ----------------------------------------------------------------
    auto* evolve = app.add_subcommand("evolve", "time evolution under an input stimulus");
    Common ev_common;
    add_common(evolve, ev_common);
    double ev_q = 0.0, ev_eps_x = 0.0, ev_tmax = 0.0, ev_freeze_value = 0.0;
    int ev_samples = 0, ev_caps = 0, ev_freeze_mode = -1;
    std::string ev_x, ev_engine, ev_initial, ev_out_csv, ev_out_summary;
    auto* ev_q_opt = evolve->add_option("--q", ev_q, "input-output coupling (Rabi frequency)");
    auto* ev_eps_opt = evolve->add_option("--eps-x", ev_eps_x, "input-layer gap");
    auto* ev_x_opt = evolve->add_option("--x", ev_x, "stimulus means, comma separated");
    auto* ev_engine_opt = evolve->add_option("--engine", ev_engine, "exact | meanfield");
    auto* ev_initial_opt = evolve->add_option("--initial", ev_initial, "critical | ground");
    auto* ev_tmax_opt = evolve->add_option("--t-max", ev_tmax, "time span (default pi/q)");
    auto* ev_samples_opt = evolve->add_option("--samples", ev_samples, "sample count");
    auto* ev_caps_opt = evolve->add_option("--caps", ev_caps, "per-mode Fock cap");
    auto* ev_fm_opt = evolve->add_option("--freeze-mode", ev_freeze_mode, "mode to freeze (0-based)");
    auto* ev_fv_opt = evolve->add_option("--freeze-value", ev_freeze_value, "frozen expectation");
    evolve->add_option("--out-csv", ev_out_csv, "time-series CSV path (default stdout)");
    evolve->add_option("--out-summary", ev_out_summary, "summary JSON path (default stdout)");

    // compare ---------------------------------------------------------------
    auto* compare = app.add_subcommand("compare",
                                       "critical vs ground response to the same stimulus");
    Common cp_common;
    add_common(compare, cp_common);
    double cp_q = 0.0, cp_eps_x = 0.0, cp_tmax = 0.0, cp_freeze_value = 0.0;
    int cp_samples = 0, cp_caps = 0, cp_freeze_mode = -1;
    std::string cp_x, cp_engine, cp_out_csv, cp_out_summary;
    auto* cp_q_opt = compare->add_option("--q", cp_q, "input-output coupling");
    auto* cp_eps_opt = compare->add_option("--eps-x", cp_eps_x, "input-layer gap");
    auto* cp_x_opt = compare->add_option("--x", cp_x, "stimulus means, comma separated");
    auto* cp_engine_opt = compare->add_option("--engine", cp_engine, "exact | meanfield");
    auto* cp_tmax_opt = compare->add_option("--t-max", cp_tmax, "time span (default pi/q)");
    auto* cp_samples_opt = compare->add_option("--samples", cp_samples, "sample count");
    auto* cp_caps_opt = compare->add_option("--caps", cp_caps, "per-mode Fock cap");
    auto* cp_fm_opt = compare->add_option("--freeze-mode", cp_freeze_mode, "mode to freeze");
    auto* cp_fv_opt = compare->add_option("--freeze-value", cp_freeze_value, "frozen expectation");
    compare->add_option("--out-csv", cp_out_csv, "series CSV path (default stdout)");
    compare->add_option("--out-summary", cp_out_summary, "summary JSON path (default stdout)");

    // pack ------------------------------------------------------------------
    auto* pack = app.add_subcommand("pack", "classical coherent-pattern packing");
    std::string pk_config;
    pack->add_option("--config", pk_config, "scenario config file (JSON)");
    double pk_g = 0.0, pk_budget = 0.0, pk_threshold = 0.0, pk_kappa = 0.0;
    int pk_modes = 0, pk_sweep = -1;
    std::string pk_out, pk_out_csv;
    auto* pk_g_opt = pack->add_option("--g", pk_g, "synaptic coupling g");
    auto* pk_m_opt = pack->add_option("--modes", pk_modes, "gapless mode count");
    auto* pk_b_opt = pack->add_option("--budget", pk_budget, "energy gap budget");
    auto* pk_t_opt = pack->add_option("--threshold", pk_threshold, "distinguishability threshold");
    auto* pk_k_opt = pack->add_option("--kappa", pk_kappa, "excursion bound |alpha|^2 <= kappa/g");
    auto* pk_s_opt = pack->add_option("--sweep-decades", pk_sweep, "g sweep depth for the CSV");
    pack->add_option("-o,--out", pk_out, "report path (default stdout)");
    pack->add_option("--out-csv", pk_out_csv, "count-vs-g sweep CSV path (default stdout)");

    // paper-example ---------------------------------------------------------
    auto* paper = app.add_subcommand("paper-example",
                                     "reproduce the bundled six-neuron worked example");
    std::string paper_out;
    paper->add_option("-o,--out", paper_out, "report path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    if (*paper) {
        char* report = nullptr;
        qbn_status st = qbn_paper_example(&report);
        if (st != QBN_OK) return fail(st);
        bool ok = write_artifact(paper_out, report);
        qbn_string_free(report);
        return ok ? 0 : fail_message("cannot write " + paper_out);
    }

    if (*analyze) {
        json options = json::object();
        ModelSource source;
        if (!an_common.config.empty())
            if (int rc = load_config(an_common.config, options, source)) return rc;
        if (!an_common.model_file.empty()) source.file = an_common.model_file;
        if (an_common.uniform.size() == 2) {
            source.file.clear();
            source.uniform_n = static_cast<int>(an_common.uniform[0]);
            source.uniform_g = an_common.uniform[1];
        }
        if (an_max_opt->count()) options["max_excited"] = an_max_excited;
        if (an_tol_opt->count()) options["tolerance"] = an_tol;
        if (an_d_opt->count()) {
            std::vector<int> ds;
            for (double v : parse_number_list(an_d)) ds.push_back(static_cast<int>(v));
            options["d_values"] = ds;
        }
        if (an_b_opt->count()) options["budgets"] = parse_number_list(an_budgets);
        apply_env_limits(options);

        qbn_model* model = nullptr;
        if (int rc = acquire_model(source, options, &model)) return rc;
        options.erase("__inline_model");
        char* report = nullptr;
        qbn_status st = qbn_analyze(model, options.dump().c_str(), &report);
        qbn_model_free(model);
        if (st != QBN_OK) return fail(st);
        bool ok = write_artifact(an_out, report);
        qbn_string_free(report);
        return ok ? 0 : fail_message("cannot write " + an_out);
    }

    auto run_dynamics = [&](bool is_compare) -> int {
        Common& common = is_compare ? cp_common : ev_common;
        json options = json::object();
        ModelSource source;
        if (!common.config.empty())
            if (int rc = load_config(common.config, options, source)) return rc;
        if (!common.model_file.empty()) source.file = common.model_file;
        if (common.uniform.size() == 2) {
            source.file.clear();
            source.uniform_n = static_cast<int>(common.uniform[0]);
            source.uniform_g = common.uniform[1];
        }
        if (is_compare) {
            if (cp_q_opt->count()) options["q"] = cp_q;
            if (cp_eps_opt->count()) options["eps_x"] = cp_eps_x;
            if (cp_x_opt->count()) options["stimulus"] = parse_number_list(cp_x);
            if (cp_engine_opt->count()) options["engine"] = cp_engine;
            if (cp_tmax_opt->count()) options["t_max"] = cp_tmax;
            if (cp_samples_opt->count()) options["samples"] = cp_samples;
            if (cp_caps_opt->count()) options["caps"] = cp_caps;
            if (cp_fm_opt->count() || cp_fv_opt->count())
                options["freeze"] = {{"mode", cp_freeze_mode}, {"value", cp_freeze_value}};
        } else {
            if (ev_q_opt->count()) options["q"] = ev_q;
            if (ev_eps_opt->count()) options["eps_x"] = ev_eps_x;
            if (ev_x_opt->count()) options["stimulus"] = parse_number_list(ev_x);
            if (ev_engine_opt->count()) options["engine"] = ev_engine;
            if (ev_initial_opt->count()) options["initial"] = ev_initial;
            if (ev_tmax_opt->count()) options["t_max"] = ev_tmax;
            if (ev_samples_opt->count()) options["samples"] = ev_samples;
            if (ev_caps_opt->count()) options["caps"] = ev_caps;
            if (ev_fm_opt->count() || ev_fv_opt->count())
                options["freeze"] = {{"mode", ev_freeze_mode}, {"value", ev_freeze_value}};
        }
        apply_env_limits(options);

        qbn_model* model = nullptr;
        if (int rc = acquire_model(source, options, &model)) return rc;
        options.erase("__inline_model");
        char* csv = nullptr;
        char* summary = nullptr;
        qbn_status st = is_compare
                            ? qbn_compare(model, options.dump().c_str(), &csv, &summary)
                            : qbn_evolve(model, options.dump().c_str(), &csv, &summary);
        qbn_model_free(model);
        if (st != QBN_OK) return fail(st);
        const std::string out_csv = is_compare ? cp_out_csv : ev_out_csv;
        const std::string out_summary = is_compare ? cp_out_summary : ev_out_summary;
        bool ok = write_artifact(out_csv, csv) && write_artifact(out_summary, summary);
        qbn_string_free(csv);
        qbn_string_free(summary);
        return ok ? 0 : fail_message("cannot write output");
    };

    if (*evolve) return run_dynamics(false);
    if (*compare) return run_dynamics(true);

    if (*pack) {
        json options = json::object();
        if (!pk_config.empty()) {
            ModelSource unused;
            if (int rc = load_config(pk_config, options, unused)) return rc;
        }
        if (pk_g_opt->count()) options["g"] = pk_g;
        if (pk_m_opt->count()) options["modes"] = pk_modes;
        if (pk_b_opt->count()) options["budget"] = pk_budget;
        if (pk_t_opt->count()) options["threshold"] = pk_threshold;
        if (pk_k_opt->count()) options["kappa"] = pk_kappa;
        if (pk_s_opt->count()) options["sweep_decades"] = pk_sweep;
        apply_env_limits(options);
        options.erase("__inline_model");

        char* report = nullptr;
        char* csv = nullptr;
        qbn_status st = qbn_pack(options.dump().c_str(), &report, &csv);
        if (st != QBN_OK) return fail(st);
        bool ok = write_artifact(pk_out, report) && write_artifact(pk_out_csv, csv);
        qbn_string_free(report);
        qbn_string_free(csv);
        return ok ? 0 : fail_message("cannot write output");
    }

    return fail_message("no task selected");
}
