#include "critical.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "errors.hpp"
#include "linalg.hpp"
#include "textio.hpp"

namespace qbrain {

double effective_threshold(const NetworkModel& model, std::span<const double> y, int mode)
{
    const int n = model.size();
    if (static_cast<int>(y.size()) != n)
        throw validation_error("effective_threshold: occupation vector length mismatch");
    if (mode < 0 || mode >= n) throw validation_error("effective_threshold: mode out of range");
    double shift = 0.0;
    for (int k = 0; k < n; ++k) {
        if (k == mode) continue;
        shift += model.weight(mode, k) * y[k];
    }
    return model.threshold(mode) - 2.0 * shift;
}

namespace {

struct SplitSets {
    std::vector<int> gapless;
    std::vector<int> excited;
};

SplitSets make_split(const NetworkModel& model, std::span<const int> gapless)
{
    const int n = model.size();
    if (gapless.empty()) throw validation_error("critical split: gapless set must be nonempty");
    std::set<int> gl;
    for (int j : gapless) {
        if (j < 0 || j >= n)
            throw validation_error("critical split: mode " + std::to_string(j) + " out of range");
        if (!gl.insert(j).second)
            throw validation_error("critical split: duplicate mode " + std::to_string(j));
    }
    if (static_cast<int>(gl.size()) == n)
        throw validation_error("critical split: excited set must be nonempty");
    SplitSets sets;
    sets.gapless.assign(gl.begin(), gl.end());
    for (int j = 0; j < n; ++j)
        if (!gl.count(j)) sets.excited.push_back(j);
    return sets;
}

CriticalSolution build_solution(const NetworkModel& model, SplitSets sets,
                                std::vector<double> xi)
{
    CriticalSolution sol;
    sol.gapless_modes = std::move(sets.gapless);
    sol.excited_modes = std::move(sets.excited);
    sol.xi = std::move(xi);

    const int n = model.size();
    std::vector<double> composite(n, 0.0);
    for (std::size_t a = 0; a < sol.excited_modes.size(); ++a)
        composite[sol.excited_modes[a]] = sol.xi[a];

    sol.residual = 0.0;
    sol.effective_gaps.reserve(sol.gapless_modes.size());
    for (int j : sol.gapless_modes) {
        double gap = effective_threshold(model, composite, j);
        sol.effective_gaps.push_back(gap);
        sol.residual = std::max(sol.residual, std::abs(gap));
    }
    sol.excited_thresholds.reserve(sol.excited_modes.size());
    for (int a : sol.excited_modes)
        sol.excited_thresholds.push_back(effective_threshold(model, composite, a));
    return sol;
}

} // namespace

std::optional<CriticalSolution> try_solve_critical_split(const NetworkModel& model,
                                                         std::span<const int> gapless,
                                                         const SolveOptions& opts)
{
    SplitSets sets = make_split(model, gapless);
    const int rows = static_cast<int>(sets.gapless.size());
    const int cols = static_cast<int>(sets.excited.size());

    std::vector<double> a(static_cast<std::size_t>(rows) * cols);
    std::vector<double> b(rows);
    for (int r = 0; r < rows; ++r) {
        b[r] = model.threshold(sets.gapless[r]);
        for (int c = 0; c < cols; ++c)
            a[static_cast<std::size_t>(r) * cols + c] =
                2.0 * model.weight(sets.gapless[r], sets.excited[c]);
    }

    double eps_scale = 0.0;
    for (double e : model.thresholds()) eps_scale = std::max(eps_scale, std::abs(e));
    const double tol_abs = opts.tolerance * std::max(eps_scale, 1e-300);

    const int rank = linalg::qr_rank(a, rows, cols);
    const int degeneracy = cols - rank;

    linalg::NnlsResult fit =
        degeneracy > 0 ? linalg::nnls_min_norm(a, rows, cols, b) : linalg::nnls(a, rows, cols, b);

    std::vector<double> xi = fit.x;
    if (opts.integer)
        for (double& v : xi) v = std::round(v);

    CriticalSolution sol = build_solution(model, std::move(sets), std::move(xi));
    sol.degeneracy_dimension = degeneracy;
    if (sol.residual > tol_abs) return std::nullopt;
    return sol;
}

CriticalSolution solve_critical_split(const NetworkModel& model, std::span<const int> gapless,
                                      const SolveOptions& opts)
{
    auto sol = try_solve_critical_split(model, gapless, opts);
    if (!sol) {
        std::string msg = "no critical state for this split (gapless {";
        for (std::size_t i = 0; i < gapless.size(); ++i)
            msg += (i ? "," : "") + std::to_string(gapless[i]);
        msg += "})";
        if (opts.integer) msg += " under integer rounding";
        throw numerical_error(msg);
    }
    return *sol;
}

std::vector<CriticalSolution> search_critical_splits(const NetworkModel& model, int max_excited,
                                                     const SolveOptions& opts)
{
    const int n = model.size();
    if (n > 24)
        throw capacity_error(
            "search_critical_splits: exhaustive search is limited to 24 modes; "
            "solve an explicit split instead");
    if (max_excited < 1 || max_excited > n - 1)
        throw validation_error("search_critical_splits: max_excited must lie in [1, n-1]");

    std::vector<CriticalSolution> found;
    std::vector<int> combo;
    std::function<void(int, int)> visit = [&](int start, int remaining) {
        if (remaining == 0) {
            std::vector<int> gapless;
            std::size_t k = 0;
            for (int j = 0; j < n; ++j) {
                if (k < combo.size() && combo[k] == j) {
                    ++k;
                    continue;
                }
                gapless.push_back(j);
            }
            if (auto sol = try_solve_critical_split(model, gapless, opts))
                found.push_back(std::move(*sol));
            return;
        }
        for (int j = start; j <= n - remaining; ++j) {
            combo.push_back(j);
            visit(j + 1, remaining - 1);
            combo.pop_back();
        }
    };
    for (int size = 1; size <= max_excited; ++size) visit(0, size);

    std::stable_sort(found.begin(), found.end(), [](const CriticalSolution& a, const CriticalSolution& b) {
        if (a.excited_modes.size() != b.excited_modes.size())
            return a.excited_modes.size() < b.excited_modes.size();
        if (a.residual != b.residual) return a.residual < b.residual;
        return a.excited_modes < b.excited_modes;
    });
    return found;
}

double gap_between(const NetworkModel& model, const CriticalSolution& solution,
                   std::span<const double> y)
{
    const auto& gapless = solution.gapless_modes;
    if (y.size() != gapless.size())
        throw validation_error("gap_between: pattern must be indexed by the gapless set");
    double gap = 0.0;
    for (std::size_t j = 0; j < gapless.size(); ++j) {
        if (y[j] < 0.0) throw validation_error("gap_between: occupations must be nonnegative");
        double row = 0.0;
        for (std::size_t k = 0; k < gapless.size(); ++k)
            row += model.weight(gapless[j], gapless[k]) * y[k];
        gap += y[j] * row;
    }
    return gap;
}

double gap_between(const NetworkModel& model, const CriticalSolution& solution,
                   std::span<const int> y)
{
    std::vector<double> yd(y.begin(), y.end());
    return gap_between(model, solution, yd);
}

BigUint pattern_count(int gapless_mode_count, long long d)
{
    if (gapless_mode_count < 1)
        throw validation_error("pattern_count: at least one gapless mode required");
    if (d < 0) throw validation_error("pattern_count: d must be nonnegative");
    return BigUint::pow(static_cast<std::uint64_t>(d) + 1,
                        static_cast<unsigned>(gapless_mode_count));
}

// ---------------------------------------------------------------------------
// Pattern enumeration

PatternStream::PatternStream(const NetworkModel& model, const CriticalSolution& solution, int d,
                             double gap_budget)
    : model_(model), solution_(solution), d_(d), budget_(gap_budget)
{
    if (d < 0) throw validation_error("pattern enumeration: d must be nonnegative");
    if (gap_budget < 0.0) throw validation_error("pattern enumeration: budget must be nonnegative");
    current_.assign(solution_.gapless_modes.size(), 0);
}

bool PatternStream::advance()
{
    // mixed-radix increment, base d+1, last mode fastest
    for (std::size_t j = current_.size(); j-- > 0;) {
        if (current_[j] < d_) {
            ++current_[j];
            return true;
        }
        current_[j] = 0;
    }
    return false;
}

bool PatternStream::next(std::vector<int>& out)
{
    while (!done_) {
        if (started_) {
            if (!advance()) {
                done_ = true;
                return false;
            }
        }
        started_ = true;
        if (gap_between(model_, solution_, std::span<const int>(current_)) <= budget_) {
            out = current_;
            return true;
        }
    }
    return false;
}

PatternLibrary enumerate_patterns(const NetworkModel& model, const CriticalSolution& solution,
                                  int d, double gap_budget, const EnumerateOptions& opts)
{
    const int m = static_cast<int>(solution.gapless_modes.size());
    BigUint total = pattern_count(m, d);
    if (total > BigUint(opts.limit)) {
        throw capacity_error("enumerate_patterns: (d+1)^m = " + total.to_string() +
                             " exceeds the enumeration limit " + std::to_string(opts.limit) +
                             "; use the lazy PatternStream instead");
    }
    PatternLibrary lib;
    lib.d = d;
    lib.gap_budget = gap_budget;
    PatternStream stream(model, solution, d, gap_budget);
    std::vector<int> pattern;
    while (stream.next(pattern)) {
        ++lib.count;
        if (opts.collect && lib.count <= opts.collect_limit) lib.patterns.push_back(pattern);
    }
    return lib;
}

// ---------------------------------------------------------------------------
// Scaling estimators

double entropy_estimate(double g)
{
    if (g <= 0.0) throw validation_error("entropy_estimate: g must be positive");
    return 1.0 / std::sqrt(g);
}

double decoherence_bound(double g, int n)
{
    if (g <= 0.0) throw validation_error("decoherence_bound: g must be positive");
    if (n < 2) throw validation_error("decoherence_bound: n must be >= 2");
    return 1.0 / (g * static_cast<double>(n) * n);
}

double thermalization_time(double g, double temperature)
{
    if (g <= 0.0) throw validation_error("thermalization_time: g must be positive");
    if (temperature <= 0.0) throw validation_error("thermalization_time: temperature must be positive");
    return 1.0 / (g * g * temperature);
}

} // namespace qbrain
