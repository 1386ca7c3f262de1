#include "coherent.hpp"

#include <cmath>

#include "errors.hpp"

namespace qbrain {

double overlap_sq(std::span<const cplx> p, std::span<const cplx> q)
{
    if (p.size() != q.size()) throw validation_error("overlap_sq: pattern length mismatch");
    double dist = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) dist += std::norm(p[j] - q[j]);
    return std::exp(-dist);
}

cplx overlap_amplitude(std::span<const cplx> p, std::span<const cplx> q)
{
    if (p.size() != q.size()) throw validation_error("overlap_amplitude: pattern length mismatch");
    cplx exponent = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        exponent += std::conj(p[j]) * q[j];
        exponent -= 0.5 * (std::norm(p[j]) + std::norm(q[j]));
    }
    return std::exp(exponent);
}

double classical_gap(const NetworkModel& model_reduced, std::span<const cplx> alphas)
{
    const int n = model_reduced.size();
    if (static_cast<int>(alphas.size()) != n)
        throw validation_error("classical_gap: one amplitude per mode required");
    double gap = 0.0;
    for (int j = 0; j < n; ++j) {
        const double occ_j = std::norm(alphas[j]);
        double row = 0.0;
        for (int k = 0; k < n; ++k) row += model_reduced.weight(j, k) * std::norm(alphas[k]);
        gap += occ_j * row;
    }
    return gap;
}

bool pattern_within_excursion_bound(double g, std::span<const cplx> alphas, double kappa)
{
    if (g <= 0.0) throw validation_error("excursion bound: g must be positive");
    if (kappa <= 0.0) throw validation_error("excursion bound: kappa must be positive");
    const double bound = kappa / g;
    for (const cplx& a : alphas)
        if (std::norm(a) > bound) return false;
    return true;
}

Packing pack_patterns(double g, int mode_count, double gap_budget, double distance_threshold,
                      const PackOptions& opts)
{
    if (g <= 0.0) throw validation_error("pack_patterns: g must be positive");
    if (mode_count < 1) throw validation_error("pack_patterns: at least one mode required");
    if (gap_budget < 0.0) throw validation_error("pack_patterns: budget must be nonnegative");
    if (distance_threshold <= 0.0)
        throw validation_error("pack_patterns: distance threshold must be positive");
    if (opts.kappa <= 0.0) throw validation_error("pack_patterns: kappa must be positive");

    Packing packing;
    packing.pitch = std::sqrt(distance_threshold);
    // Worst-case bound gap <= (g/2)(sum |alpha|^2)^2 certifies the ball.
    packing.radius_sq = std::sqrt(2.0 * gap_budget / g);
    const double mode_cap = opts.kappa / g;
    const double pitch_sq = distance_threshold;

    std::uint64_t visited = 0;
    std::vector<cplx> current(mode_count);

    // depth-first over modes; remaining = ball budget left for modes >= depth
    auto recurse = [&](auto&& self, int depth, double remaining) -> void {
        if (depth == mode_count) {
            ++packing.count;
            if (static_cast<int>(packing.samples.size()) < opts.sample_limit)
                packing.samples.push_back(current);
            return;
        }
        const double cap = std::min(remaining, mode_cap);
        if (cap < 0.0) return;
        const int mmax = static_cast<int>(std::floor(std::sqrt(cap / pitch_sq) + 1e-12));
        for (int re = -mmax; re <= mmax; ++re) {
            for (int im = -mmax; im <= mmax; ++im) {
                const double used = pitch_sq * (static_cast<double>(re) * re +
                                                static_cast<double>(im) * im);
                if (used > cap * (1.0 + 1e-12)) continue;
                if (++visited > opts.max_points)
                    throw capacity_error("pack_patterns: lattice visit limit " +
                                         std::to_string(opts.max_points) + " exceeded");
                current[depth] = cplx(packing.pitch * re, packing.pitch * im);
                self(self, depth + 1, remaining - used);
            }
        }
    };
    recurse(recurse, 0, packing.radius_sq);
    return packing;
}

} // namespace qbrain
