#ifndef QBRAIN_CRITICAL_HPP
#define QBRAIN_CRITICAL_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "bigint.hpp"
#include "network.hpp"

namespace qbrain {

inline constexpr std::uint64_t kDefaultEnumerationLimit = 10'000'000;

// A split of the modes into a highly excited set (excitation levels xi) and a
// complementary set rendered effectively gapless by those excitations.
struct CriticalSolution {
    std::vector<int> excited_modes; // ascending
    std::vector<int> gapless_modes; // ascending
    std::vector<double> xi;         // aligned with excited_modes
    double residual = 0.0;          // max_j |eps_j - 2 sum_a W_ja xi_a| over gapless j
    std::vector<double> effective_gaps;      // aligned with gapless_modes (~0 when accepted)
    std::vector<double> excited_thresholds;  // diagnostics, aligned with excited_modes
    int degeneracy_dimension = 0;   // nullity of the split's weight submatrix
};

struct SolveOptions {
    double tolerance = 1e-9; // relative to max |threshold|
    bool integer = false;    // round xi and re-verify the residual
};

// eps_j - 2 sum_{k != j} W_jk y_k: the remaining excitation cost of mode j
// once the other modes sit at levels y.
double effective_threshold(const NetworkModel& model, std::span<const double> y, int mode);

CriticalSolution solve_critical_split(const NetworkModel& model, std::span<const int> gapless,
                                      const SolveOptions& opts = {});
std::optional<CriticalSolution> try_solve_critical_split(const NetworkModel& model,
                                                         std::span<const int> gapless,
                                                         const SolveOptions& opts = {});

// Exhaustive search over splits with at most max_excited excited modes,
// ordered by excited-set size, then residual, then lexicographic excited set.
std::vector<CriticalSolution> search_critical_splits(const NetworkModel& model, int max_excited,
                                                     const SolveOptions& opts = {});

// Energy of a pattern y on the gapless set relative to the reference state:
// sum_{j,k in gapless} W_jk y_j y_k. The linear term vanishes by criticality.
double gap_between(const NetworkModel& model, const CriticalSolution& solution,
                   std::span<const double> y);
double gap_between(const NetworkModel& model, const CriticalSolution& solution,
                   std::span<const int> y);

// (d+1)^m as an exact big integer.
BigUint pattern_count(int gapless_mode_count, long long d);

struct PatternLibrary {
    int d = 0;
    double gap_budget = 0.0;
    std::uint64_t count = 0;
    std::vector<std::vector<int>> patterns; // filled only when collect was requested
};

struct EnumerateOptions {
    std::uint64_t limit = kDefaultEnumerationLimit;
    bool collect = false;
    std::uint64_t collect_limit = 65536;
};

// Count (optionally collect) the occupation assignments on the gapless set
// with entries <= d and gap_between <= gap_budget.
PatternLibrary enumerate_patterns(const NetworkModel& model, const CriticalSolution& solution,
                                  int d, double gap_budget, const EnumerateOptions& opts = {});

// Lazy pattern generator for spaces beyond the eager enumeration limit.
class PatternStream {
public:
    PatternStream(const NetworkModel& model, const CriticalSolution& solution, int d,
                  double gap_budget);
    // writes the next in-budget pattern into out; false when exhausted
    bool next(std::vector<int>& out);

private:
    const NetworkModel& model_;
    CriticalSolution solution_;
    int d_;
    double budget_;
    std::vector<int> current_;
    bool done_ = false;
    bool started_ = false;
    bool advance();
};

// Order-of-magnitude scaling estimators; scalings, not measurements.
double entropy_estimate(double g);                         // 1/sqrt(g)
double decoherence_bound(double g, int n);                 // 1/(g n^2)
double thermalization_time(double g, double temperature);  // 1/(g^2 T)

} // namespace qbrain

#endif
