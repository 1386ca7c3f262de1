#ifndef QBRAIN_COHERENT_HPP
#define QBRAIN_COHERENT_HPP

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "network.hpp"

namespace qbrain {

// One complex amplitude per gapless mode; |alpha_j|^2 is the mean excitation.
using ClassicalPattern = std::vector<cplx>;

// Squared-modulus overlap of two coherent configurations,
// exp(-sum_j |alpha_j - alpha_j'|^2). Symmetric, 1 iff identical,
// multiplicative across modes.
double overlap_sq(std::span<const cplx> p, std::span<const cplx> q);

// Amplitude-level overlap <p|q> including the relative phase,
// exp(-|p|^2/2 - |q|^2/2 + p* . q). |overlap_amplitude|^2 == overlap_sq.
cplx overlap_amplitude(std::span<const cplx> p, std::span<const cplx> q);

// Classical energy gap of a pattern above the critical reference:
// sum_{j != k} W_jk |alpha_j|^2 |alpha_k|^2 over the model's modes (for a
// reduced model these are exactly the gapless modes). For the uniform model
// this is (g/2) sum_{j != k} |alpha_j alpha_k|^2.
double classical_gap(const NetworkModel& model_reduced, std::span<const cplx> alphas);

// "Small excursions" constraint |alpha_j|^2 <= kappa / g.
bool pattern_within_excursion_bound(double g, std::span<const cplx> alphas, double kappa = 0.01);

struct PackOptions {
    double kappa = 0.01;                  // per-mode excursion bound |alpha|^2 <= kappa/g
    std::uint64_t max_points = 10'000'000; // lattice visit guard
    int sample_limit = 16;                // patterns kept in the report
};

struct Packing {
    std::uint64_t count = 0;
    std::vector<ClassicalPattern> samples;
    double radius_sq = 0.0; // certified ball: sum_j |alpha_j|^2 <= radius_sq
    double pitch = 0.0;     // lattice pitch sqrt(distance_threshold)
};

// Deterministic packing of pairwise-distinguishable classical patterns within
// a gap budget. Patterns live on the complex lattice of pitch
// sqrt(distance_threshold), so every distinct pair satisfies
// sum |d alpha|^2 >= distance_threshold, inside the ball
// sum_j |alpha_j|^2 <= sqrt(2 budget / g) on which the uniform-model gap is
// certified <= budget. The count is a reproducible lower bound on the number
// of distinguishable patterns that fit the gap.
Packing pack_patterns(double g, int mode_count, double gap_budget, double distance_threshold,
                      const PackOptions& opts = {});

} // namespace qbrain

#endif
