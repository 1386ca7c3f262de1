#include "qbrain.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>

#include "coherent.hpp"
#include "critical.hpp"
#include "errors.hpp"
#include "network.hpp"
#include "scenario.hpp"
#include "textio.hpp"

namespace {

thread_local std::string g_last_error;

char* copy_string(const std::string& s)
{
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <typename Fn>
qbn_status guarded(Fn&& fn)
{
    try {
        fn();
        g_last_error.clear();
        return QBN_OK;
    } catch (const qbrain::validation_error& e) {
        g_last_error = e.what();
        return QBN_VALIDATION;
    } catch (const qbrain::numerical_error& e) {
        g_last_error = e.what();
        return QBN_NUMERICAL;
    } catch (const qbrain::capacity_error& e) {
        g_last_error = e.what();
        return QBN_CAPACITY;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return QBN_INTERNAL;
    } catch (...) {
        g_last_error = "unknown failure";
        return QBN_INTERNAL;
    }
}

nlohmann::json parse_options(const char* options_json)
{
    if (options_json == nullptr || options_json[0] == '\0')
        return nlohmann::json::object();
    try {
        return nlohmann::json::parse(options_json);
    } catch (const nlohmann::json::parse_error& e) {
        throw qbrain::validation_error(std::string("options: invalid JSON: ") + e.what());
    }
}

} // namespace

struct qbn_model {
    qbrain::NetworkModel model;
};

extern "C" {

const char* qbn_version(void) { return "1.0.0"; }

const char* qbn_last_error(void) { return g_last_error.c_str(); }

void qbn_string_free(char* s) { std::free(s); }

qbn_status qbn_model_uniform(int neuron_count, double g, qbn_model** out_model)
{
    return guarded([&] {
        if (!out_model) throw qbrain::validation_error("out_model is null");
        *out_model = new qbn_model{qbrain::NetworkModel::uniform(neuron_count, g)};
    });
}

qbn_status qbn_model_from_json(const char* json_text, qbn_model** out_model)
{
    return guarded([&] {
        if (!out_model) throw qbrain::validation_error("out_model is null");
        if (!json_text) throw qbrain::validation_error("model JSON text is null");
        *out_model = new qbn_model{qbrain::scenario::model_from_json_text(json_text)};
    });
}

qbn_status qbn_model_to_json(const qbn_model* model, char** out_json)
{
    return guarded([&] {
        if (!model) throw qbrain::validation_error("model handle is null");
        if (!out_json) throw qbrain::validation_error("out_json is null");
        *out_json = copy_string(qbrain::scenario::model_to_json_text(model->model));
    });
}

qbn_status qbn_model_set_input_layer(qbn_model* model, double q, double eps_x)
{
    return guarded([&] {
        if (!model) throw qbrain::validation_error("model handle is null");
        model->model.set_input_layer(q, eps_x);
    });
}

qbn_status qbn_model_freeze(const qbn_model* model, const int* modes, const double* values,
                            int count, qbn_model** out_reduced)
{
    return guarded([&] {
        if (!model) throw qbrain::validation_error("model handle is null");
        if (!out_reduced) throw qbrain::validation_error("out_reduced is null");
        if (count < 1 || !modes || !values)
            throw qbrain::validation_error("freeze: at least one (mode, value) pair required");
        std::vector<std::pair<int, double>> frozen;
        for (int i = 0; i < count; ++i) frozen.emplace_back(modes[i], values[i]);
        *out_reduced = new qbn_model{qbrain::frozen_reduction(model->model, frozen)};
    });
}

int qbn_model_size(const qbn_model* model) { return model ? model->model.size() : -1; }

void qbn_model_free(qbn_model* model) { delete model; }

qbn_status qbn_analyze(const qbn_model* model, const char* options_json, char** out_report_json)
{
    return guarded([&] {
        if (!model) throw qbrain::validation_error("model handle is null");
        if (!out_report_json) throw qbrain::validation_error("out_report_json is null");
        auto options = parse_options(options_json);
        auto limits = qbrain::scenario::limits_from_options(options);
        auto artifacts = qbrain::scenario::run_analyze(model->model, options, limits);
        *out_report_json = copy_string(artifacts.report_json);
    });
}

qbn_status qbn_evolve(const qbn_model* model, const char* options_json, char** out_series_csv,
                      char** out_summary_json)
{
    return guarded([&] {
        if (!model) throw qbrain::validation_error("model handle is null");
        if (!out_series_csv || !out_summary_json)
            throw qbrain::validation_error("output pointers are null");
        auto options = parse_options(options_json);
        auto limits = qbrain::scenario::limits_from_options(options);
        auto artifacts = qbrain::scenario::run_evolve(model->model, options, limits);
        *out_series_csv = copy_string(artifacts.series_csv);
        *out_summary_json = copy_string(artifacts.report_json);
    });
}

qbn_status qbn_compare(const qbn_model* model, const char* options_json, char** out_series_csv,
                       char** out_summary_json)
{
    return guarded([&] {
        if (!model) throw qbrain::validation_error("model handle is null");
        if (!out_series_csv || !out_summary_json)
            throw qbrain::validation_error("output pointers are null");
        auto options = parse_options(options_json);
        auto limits = qbrain::scenario::limits_from_options(options);
        auto artifacts = qbrain::scenario::run_compare(model->model, options, limits);
        *out_series_csv = copy_string(artifacts.series_csv);
        *out_summary_json = copy_string(artifacts.report_json);
    });
}

qbn_status qbn_pack(const char* options_json, char** out_report_json, char** out_sweep_csv)
{
    return guarded([&] {
        if (!out_report_json || !out_sweep_csv)
            throw qbrain::validation_error("output pointers are null");
        auto options = parse_options(options_json);
        auto limits = qbrain::scenario::limits_from_options(options);
        auto artifacts = qbrain::scenario::run_pack(options, limits);
        *out_report_json = copy_string(artifacts.report_json);
        *out_sweep_csv = copy_string(artifacts.sweep_csv);
    });
}

qbn_status qbn_paper_example(char** out_report_json)
{
    return guarded([&] {
        if (!out_report_json) throw qbrain::validation_error("out_report_json is null");
        auto artifacts = qbrain::scenario::run_paper_example();
        *out_report_json = copy_string(artifacts.report_json);
    });
}

qbn_status qbn_solve_critical_split(const qbn_model* model, const int* gapless_modes,
                                    int gapless_count, double tolerance,
                                    char** out_solution_json)
{
    return guarded([&] {
        if (!model) throw qbrain::validation_error("model handle is null");
        if (!out_solution_json) throw qbrain::validation_error("out_solution_json is null");
        if (gapless_count < 1 || !gapless_modes)
            throw qbrain::validation_error("gapless mode list required");
        qbrain::SolveOptions opts;
        if (tolerance > 0.0) opts.tolerance = tolerance;
        std::span<const int> gapless(gapless_modes, static_cast<std::size_t>(gapless_count));
        qbrain::CriticalSolution sol = qbrain::solve_critical_split(model->model, gapless, opts);

        nlohmann::ordered_json j;
        auto one_based = [](const std::vector<int>& v) {
            std::vector<int> out(v.size());
            for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] + 1;
            return out;
        };
        j["excited_modes"] = one_based(sol.excited_modes);
        j["gapless_modes"] = one_based(sol.gapless_modes);
        nlohmann::ordered_json xi = nlohmann::ordered_json::array();
        for (double v : sol.xi) xi.push_back(qbrain::textio::round_number(v));
        j["xi"] = std::move(xi);
        j["residual"] = qbrain::textio::round_number(sol.residual);
        nlohmann::ordered_json gaps = nlohmann::ordered_json::array();
        for (double v : sol.effective_gaps) gaps.push_back(qbrain::textio::round_number(v));
        j["effective_gaps"] = std::move(gaps);
        j["degeneracy_dimension"] = sol.degeneracy_dimension;
        *out_solution_json = copy_string(j.dump(2) + "\n");
    });
}

qbn_status qbn_pattern_count(int gapless_mode_count, long long d, char** out_decimal)
{
    return guarded([&] {
        if (!out_decimal) throw qbrain::validation_error("out_decimal is null");
        *out_decimal = copy_string(qbrain::pattern_count(gapless_mode_count, d).to_string());
    });
}

qbn_status qbn_coherent_overlap_sq(const double* a_re, const double* a_im, const double* b_re,
                                   const double* b_im, int mode_count, double* out_overlap)
{
    return guarded([&] {
        if (!out_overlap) throw qbrain::validation_error("out_overlap is null");
        if (mode_count < 1 || !a_re || !a_im || !b_re || !b_im)
            throw qbrain::validation_error("overlap: amplitude arrays required");
        std::vector<qbrain::cplx> p(mode_count), q(mode_count);
        for (int j = 0; j < mode_count; ++j) {
            p[j] = {a_re[j], a_im[j]};
            q[j] = {b_re[j], b_im[j]};
        }
        *out_overlap = qbrain::overlap_sq(p, q);
    });
}

double qbn_entropy_estimate(double g)
{
    double value = NAN;
    guarded([&] { value = qbrain::entropy_estimate(g); });
    return value;
}

double qbn_decoherence_bound(double g, int neuron_count)
{
    double value = NAN;
    guarded([&] { value = qbrain::decoherence_bound(g, neuron_count); });
    return value;
}

double qbn_thermalization_time(double g, double temperature)
{
    double value = NAN;
    guarded([&] { value = qbrain::thermalization_time(g, temperature); });
    return value;
}

} // extern "C"
