#ifndef QBRAIN_NETWORK_HPP
#define QBRAIN_NETWORK_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "fock.hpp"

namespace qbrain {

struct InputLayer {
    double q = 0.0;     // Rabi angular frequency of each input-output channel
    double eps_x = 0.0; // input-neuron excitation gap (0 for maximally soft stimuli)
};

// Frozen-weight network: thresholds eps_j and a symmetric, zero-diagonal,
// nonnegative coupling matrix W_jk. Immutable apart from the input layer and
// safely shareable across threads.
class NetworkModel {
public:
    NetworkModel(std::vector<double> thresholds, std::vector<double> weights_row_major,
                 bool reduced = false, double energy_offset = 0.0);

    // uniform thresholds 1 and couplings g/2 off the diagonal, so each
    // unordered pair contributes -g y_j y_k to the energy
    static NetworkModel uniform(int n, double g);

    int size() const { return n_; }
    const std::vector<double>& thresholds() const { return thresholds_; }
    double threshold(int j) const { return thresholds_[j]; }
    double weight(int j, int k) const { return weights_[static_cast<std::size_t>(j) * n_ + k]; }
    const std::vector<double>& weights() const { return weights_; }

    const std::optional<InputLayer>& input_layer() const { return input_layer_; }
    void set_input_layer(double q, double eps_x);
    void clear_input_layer() { input_layer_.reset(); }

    // Models produced by frozen_reduction may carry zero or negative
    // thresholds; they skip the strict-positivity check.
    bool reduced() const { return reduced_; }
    double energy_offset() const { return energy_offset_; }

    static NetworkModel from_json(const nlohmann::json& j);
    nlohmann::ordered_json to_json() const;

    bool operator==(const NetworkModel& other) const;

private:
    int n_;
    std::vector<double> thresholds_;
    std::vector<double> weights_; // row-major n x n
    std::optional<InputLayer> input_layer_;
    bool reduced_;
    double energy_offset_;
};

// E(y) = sum_j eps_j y_j - sum_{j,k} W_jk y_j y_k (double sum over ordered
// pairs). Real-valued occupations are admitted for mean-field states.
double energy_of_number_state(const NetworkModel& model, std::span<const double> y);
double energy_of_number_state(const NetworkModel& model, std::span<const int> y);

// Sparse Hamiltonian over the basis. Without an input layer the basis carries
// the n output modes and the operator is diagonal. With an input layer the
// basis carries 2n modes (Y first, then X) and each channel j gains the
// hopping (q/2)(b_j^dag a_j + a_j^dag b_j) plus eps_x X_j. The half coupling
// makes q the Rabi angular frequency: an input excitation cycles into the
// output as sin^2(q t / 2).
SparseOperator build_hamiltonian(const NetworkModel& model, const FockBasis& basis);

// Replace selected modes by fixed expectation values: thresholds of the
// remaining modes shift by -2 sum_f W_jf v_f and the constant
// sum_f eps_f v_f - sum_{f,f'} W_ff' v_f v_f' accumulates into the model's
// energy offset. The input layer, if any, carries over to the surviving modes.
NetworkModel frozen_reduction(const NetworkModel& model,
                              const std::vector<std::pair<int, double>>& frozen);

} // namespace qbrain

#endif
