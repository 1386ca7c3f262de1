#include "network.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "errors.hpp"
#include "textio.hpp"

namespace qbrain {

NetworkModel::NetworkModel(std::vector<double> thresholds, std::vector<double> weights_row_major,
                           bool reduced, double energy_offset)
    : n_(static_cast<int>(thresholds.size())),
      thresholds_(std::move(thresholds)),
      weights_(std::move(weights_row_major)),
      reduced_(reduced),
      energy_offset_(energy_offset)
{
    if (n_ < 1) throw validation_error("NetworkModel: at least one neuron required");
    if (weights_.size() != static_cast<std::size_t>(n_) * n_)
        throw validation_error("NetworkModel: weight matrix must be n x n");
    double wmax = 0.0;
    for (double w : weights_) {
        if (!std::isfinite(w)) throw validation_error("NetworkModel: non-finite weight");
        wmax = std::max(wmax, std::abs(w));
    }
    const double sym_tol = 1e-14 * std::max(1.0, wmax);
    for (int j = 0; j < n_; ++j) {
        if (!std::isfinite(thresholds_[j]))
            throw validation_error("NetworkModel: non-finite threshold");
        if (!reduced_ && thresholds_[j] <= 0.0)
            throw validation_error("NetworkModel: thresholds must be strictly positive");
        if (weights_[static_cast<std::size_t>(j) * n_ + j] != 0.0)
            throw validation_error("NetworkModel: weight diagonal must be exactly zero");
        for (int k = 0; k < n_; ++k) {
            double w = weights_[static_cast<std::size_t>(j) * n_ + k];
            if (w < 0.0) throw validation_error("NetworkModel: weights must be nonnegative");
            double wt = weights_[static_cast<std::size_t>(k) * n_ + j];
            if (std::abs(w - wt) > sym_tol)
                throw validation_error("NetworkModel: weight matrix must be symmetric");
        }
    }
}

NetworkModel NetworkModel::uniform(int n, double g)
{
    if (n < 2) throw validation_error("uniform model: n must be >= 2");
    if (g <= 0.0) throw validation_error("uniform model: coupling g must be positive");
    std::vector<double> eps(n, 1.0);
    std::vector<double> w(static_cast<std::size_t>(n) * n, g / 2.0);
    for (int j = 0; j < n; ++j) w[static_cast<std::size_t>(j) * n + j] = 0.0;
    return NetworkModel(std::move(eps), std::move(w));
}

void NetworkModel::set_input_layer(double q, double eps_x)
{
    if (q < 0.0 || !std::isfinite(q))
        throw validation_error("input layer: coupling q must be finite and >= 0");
    if (eps_x < 0.0 || !std::isfinite(eps_x))
        throw validation_error("input layer: gap eps_x must be finite and >= 0");
    input_layer_ = InputLayer{q, eps_x};
}

bool NetworkModel::operator==(const NetworkModel& other) const
{
    if (n_ != other.n_ || thresholds_ != other.thresholds_ || weights_ != other.weights_)
        return false;
    if (reduced_ != other.reduced_ || energy_offset_ != other.energy_offset_) return false;
    if (input_layer_.has_value() != other.input_layer_.has_value()) return false;
    if (input_layer_ && (input_layer_->q != other.input_layer_->q ||
                         input_layer_->eps_x != other.input_layer_->eps_x))
        return false;
    return true;
}

NetworkModel NetworkModel::from_json(const nlohmann::json& j)
{
    if (!j.is_object()) throw validation_error("model: JSON object expected");
    if (!j.contains("n") || !j["n"].is_number_integer())
        throw validation_error("model: integer field 'n' required");
    const int n = j["n"].get<int>();
    if (n < 1) throw validation_error("model: n must be >= 1");
    if (!j.contains("thresholds") || !j["thresholds"].is_array() ||
        static_cast<int>(j["thresholds"].size()) != n)
        throw validation_error("model: 'thresholds' must be an array of length n");
    std::vector<double> eps = j["thresholds"].get<std::vector<double>>();

    std::vector<double> w(static_cast<std::size_t>(n) * n, 0.0);
    if (!j.contains("weights")) throw validation_error("model: 'weights' required");
    const auto& jw = j["weights"];
    if (jw.is_array() && !jw.empty() && jw[0].is_array()) {
        if (static_cast<int>(jw.size()) != n)
            throw validation_error("model: nested 'weights' must have n rows");
        for (int r = 0; r < n; ++r) {
            if (static_cast<int>(jw[r].size()) != n)
                throw validation_error("model: weight row length mismatch");
            for (int c = 0; c < n; ++c) w[static_cast<std::size_t>(r) * n + c] = jw[r][c].get<double>();
        }
    } else if (jw.is_array()) {
        if (static_cast<int>(jw.size()) != n * n)
            throw validation_error("model: flat 'weights' must hold n*n entries row-major");
        for (int i = 0; i < n * n; ++i) w[i] = jw[i].get<double>();
    } else if (jw.is_object() && jw.contains("triplets")) {
        for (const auto& t : jw["triplets"]) {
            if (!t.is_array() || t.size() != 3)
                throw validation_error("model: weight triplet must be [j, k, value]");
            int r = t[0].get<int>(), c = t[1].get<int>();
            double v = t[2].get<double>();
            if (r < 0 || r >= n || c < 0 || c >= n)
                throw validation_error("model: weight triplet index out of range");
            auto& slot = w[static_cast<std::size_t>(r) * n + c];
            auto& mirror = w[static_cast<std::size_t>(c) * n + r];
            if ((slot != 0.0 && slot != v) || (mirror != 0.0 && mirror != v))
                throw validation_error("model: conflicting duplicate weight triplet");
            slot = v;
            mirror = v;
        }
    } else {
        throw validation_error("model: 'weights' must be a dense array or {\"triplets\": ...}");
    }

    bool reduced = j.value("reduced", false);
    double offset = j.value("energy_offset", 0.0);
    NetworkModel model(std::move(eps), std::move(w), reduced, offset);
    if (j.contains("input_layer")) {
        const auto& il = j["input_layer"];
        if (!il.is_object() || !il.contains("q"))
            throw validation_error("model: input_layer must be an object with field 'q'");
        model.set_input_layer(il["q"].get<double>(), il.value("eps_x", 0.0));
    }
    return model;
}

nlohmann::ordered_json NetworkModel::to_json() const
{
    nlohmann::ordered_json j;
    j["n"] = n_;
    j["thresholds"] = thresholds_;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (int r = 0; r < n_; ++r) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (int c = 0; c < n_; ++c) row.push_back(weights_[static_cast<std::size_t>(r) * n_ + c]);
        rows.push_back(std::move(row));
    }
    j["weights"] = std::move(rows);
    if (input_layer_) {
        j["input_layer"] = {{"q", input_layer_->q}, {"eps_x", input_layer_->eps_x}};
    }
    if (reduced_) j["reduced"] = true;
    if (energy_offset_ != 0.0) j["energy_offset"] = energy_offset_;
    return j;
}

// ---------------------------------------------------------------------------

double energy_of_number_state(const NetworkModel& model, std::span<const double> y)
{
    const int n = model.size();
    if (static_cast<int>(y.size()) != n)
        throw validation_error("energy_of_number_state: occupation vector length mismatch");
    double linear = 0.0;
    double interaction = 0.0;
    for (int j = 0; j < n; ++j) {
        if (y[j] < 0.0)
            throw validation_error("energy_of_number_state: occupations must be nonnegative");
        linear += model.threshold(j) * y[j];
        double row = 0.0;
        for (int k = 0; k < n; ++k) row += model.weight(j, k) * y[k];
        interaction += y[j] * row;
    }
    return model.energy_offset() + linear - interaction;
}

double energy_of_number_state(const NetworkModel& model, std::span<const int> y)
{
    std::vector<double> yd(y.begin(), y.end());
    return energy_of_number_state(model, yd);
}

SparseOperator build_hamiltonian(const NetworkModel& model, const FockBasis& basis)
{
    const int n = model.size();
    const bool layered = model.input_layer().has_value();
    const int expected_modes = layered ? 2 * n : n;
    if (basis.mode_count() != expected_modes)
        throw validation_error("build_hamiltonian: basis has " +
                               std::to_string(basis.mode_count()) + " modes, model needs " +
                               std::to_string(expected_modes));

    const double q_half = layered ? model.input_layer()->q / 2.0 : 0.0;
    const double eps_x = layered ? model.input_layer()->eps_x : 0.0;

    SparseOperator h(basis.size());
    std::vector<double> yd(n);
    for_each_state(basis, [&](std::size_t idx, std::span<const int> occ) {
        for (int j = 0; j < n; ++j) yd[j] = occ[j];
        double diag = energy_of_number_state(model, yd);
        if (layered && eps_x != 0.0) {
            for (int j = 0; j < n; ++j) diag += eps_x * occ[n + j];
        }
        if (diag != 0.0) h.add(idx, idx, diag);
        if (!layered || q_half == 0.0) return;
        for (int j = 0; j < n; ++j) {
            const int yj = occ[j];
            const int xj = occ[n + j];
            // (q/2) b^dag a : |y, x> -> |y-1, x+1>
            if (yj > 0 && xj < basis.caps()[n + j]) {
                std::size_t target = idx - basis.stride(j) + basis.stride(n + j);
                h.add(target, idx, q_half * std::sqrt(static_cast<double>(yj) * (xj + 1)));
            }
            // (q/2) a^dag b : |y, x> -> |y+1, x-1>
            if (xj > 0 && yj < basis.caps()[j]) {
                std::size_t target = idx + basis.stride(j) - basis.stride(n + j);
                h.add(target, idx, q_half * std::sqrt(static_cast<double>(xj) * (yj + 1)));
            }
        }
    });
    h.compress();
    return h;
}

NetworkModel frozen_reduction(const NetworkModel& model,
                              const std::vector<std::pair<int, double>>& frozen)
{
    const int n = model.size();
    std::set<int> frozen_modes;
    for (const auto& [mode, value] : frozen) {
        if (mode < 0 || mode >= n)
            throw validation_error("frozen_reduction: unknown mode " + std::to_string(mode));
        if (!frozen_modes.insert(mode).second)
            throw validation_error("frozen_reduction: duplicate mode " + std::to_string(mode));
        if (value < 0.0 || !std::isfinite(value))
            throw validation_error("frozen_reduction: expectation values must be >= 0");
    }
    if (static_cast<int>(frozen_modes.size()) >= n)
        throw validation_error("frozen_reduction: at least one mode must remain");

    std::vector<int> remaining;
    for (int j = 0; j < n; ++j)
        if (!frozen_modes.count(j)) remaining.push_back(j);

    const int m = static_cast<int>(remaining.size());
    std::vector<double> eps(m);
    for (int r = 0; r < m; ++r) {
        double shift = 0.0;
        for (const auto& [mode, value] : frozen) shift += model.weight(remaining[r], mode) * value;
        eps[r] = model.threshold(remaining[r]) - 2.0 * shift;
    }
    std::vector<double> w(static_cast<std::size_t>(m) * m);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c)
            w[static_cast<std::size_t>(r) * m + c] = model.weight(remaining[r], remaining[c]);

    double offset = model.energy_offset();
    for (const auto& [mode, value] : frozen) offset += model.threshold(mode) * value;
    for (const auto& [f1, v1] : frozen)
        for (const auto& [f2, v2] : frozen) offset -= model.weight(f1, f2) * v1 * v2;

    NetworkModel out(std::move(eps), std::move(w), /*reduced=*/true, offset);
    if (model.input_layer())
        out.set_input_layer(model.input_layer()->q, model.input_layer()->eps_x);
    return out;
}

} // namespace qbrain
