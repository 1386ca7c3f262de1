#ifndef QBRAIN_DYNAMICS_HPP
#define QBRAIN_DYNAMICS_HPP

#include <span>
#include <vector>

#include "fock.hpp"
#include "network.hpp"

namespace qbrain {

// One complex amplitude per mode; the classical-limit configuration.
// b must be empty when the model has no input layer.
struct CoherentConfig {
    std::vector<cplx> a;
    std::vector<cplx> b;
};

// Time series of per-mode expectation values. Times are in units of hbar/eps.
struct EvolutionResult {
    std::vector<double> times;
    std::vector<std::vector<double>> y_expect;  // [sample][mode]
    std::vector<std::vector<double>> x_expect;  // [sample][mode], empty without input layer
    std::vector<double> norm_drift;             // |1 - <psi|psi>| resp. |1 - N(t)/N(0)|
    std::vector<double> energy_expect;          // exact engine only
    CoherentConfig final_config;                // mean-field engine only
};

// Closed-form response of the critical state: Y_j(t) = X_j sin^2(q t / 2);
// at t = pi/q the output copies the input pattern.
std::vector<double> analytic_response_critical(std::span<const double> x, double q, double t);

// Closed-form response of the unexcited state with unit gap:
// Y_j(t) = X_j q^2/(1+q^2) sin^2(t sqrt(1+q^2)/2).
std::vector<double> analytic_response_ground(std::span<const double> x, double q, double t);

struct ExactEvolveOptions {
    double local_tol = 1e-12;      // Krylov local error budget per unit time
    int max_krylov = 36;           // Lanczos subspace cap
    double norm_drift_limit = 1e-8; // per unit time; exceeding it aborts
};

// Unitary propagation exp(-i H t) on the truncated Fock space by adaptive
// Lanczos (Krylov) exponential stepping. The model must carry an input layer
// and the state's basis must hold the 2n modes (Y first, then X).
EvolutionResult evolve_exact(const NetworkModel& model, const QuantumState& initial,
                             std::span<const double> times, const ExactEvolveOptions& opts = {});

struct MeanFieldOptions {
    double occupation_drift_limit = 1e-8; // per unit time
    double initial_step = 0.05;
    int max_halvings = 22;
};

// Classical equations of motion obtained by replacing operators with
// c-numbers:
//   i da_j/dt = (eps_j - 2 sum_k W_jk |a_k|^2) a_j + (q/2) b_j
//   i db_j/dt = eps_x b_j + (q/2) a_j
// Fixed-step 4th-order Runge-Kutta with automatic step halving until the
// total occupation drifts less than the limit per unit time.
EvolutionResult evolve_meanfield(const NetworkModel& model, const CoherentConfig& initial,
                                 std::span<const double> times, const MeanFieldOptions& opts = {});

// Same integrator without the drift-based step control; used for convergence
// studies.
EvolutionResult evolve_meanfield_fixed_step(const NetworkModel& model,
                                            const CoherentConfig& initial,
                                            std::span<const double> times, double step);

// Cosine similarity of the output pattern and the stimulus, restricted to the
// stimulated modes (x_j > 0). 1 iff the patterns are proportional.
double recall_fidelity(std::span<const double> y, std::span<const double> x);

} // namespace qbrain

#endif
