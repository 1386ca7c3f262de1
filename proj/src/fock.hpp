#ifndef QBRAIN_FOCK_HPP
#define QBRAIN_FOCK_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "json.hpp"

namespace qbrain {

using cplx = std::complex<double>;

inline constexpr std::size_t kDefaultDimensionLimit = 2'000'000;

// Truncated bosonic occupation-number basis. States are enumerated
// lexicographically with mode 0 most significant, e.g. caps (1,1) gives
// (0,0),(0,1),(1,0),(1,1). The enumeration is arithmetic (mixed radix), so
// occupation vectors are decoded on demand instead of being stored.
class FockBasis {
public:
    FockBasis(int mode_count, std::vector<int> caps,
              std::size_t dimension_limit = kDefaultDimensionLimit);

    int mode_count() const { return mode_count_; }
    const std::vector<int>& caps() const { return caps_; }
    std::size_t size() const { return size_; }

    std::vector<int> occupation(std::size_t index) const;
    void occupation_into(std::size_t index, std::span<int> out) const;
    std::size_t index_of(std::span<const int> occupation) const;

    // stride of mode j in the mixed-radix index
    std::size_t stride(int mode) const { return strides_[mode]; }

private:
    int mode_count_;
    std::vector<int> caps_;
    std::vector<std::size_t> strides_;
    std::size_t size_;
};

// Visit every basis state in order. fn(index, occupation) receives a span that
// is only valid during the call.
template <typename Fn>
void for_each_state(const FockBasis& basis, Fn&& fn)
{
    const int modes = basis.mode_count();
    const auto& caps = basis.caps();
    std::vector<int> occ(modes, 0);
    const std::size_t dim = basis.size();
    for (std::size_t idx = 0; idx < dim; ++idx) {
        fn(idx, std::span<const int>(occ.data(), occ.size()));
        for (int j = modes - 1; j >= 0; --j) {
            if (occ[j] < caps[j]) {
                ++occ[j];
                break;
            }
            occ[j] = 0;
        }
    }
}

// Sparse matrix over a Fock basis, stored as CSR after compress(). Builders in
// this library always return compressed operators.
class SparseOperator {
public:
    explicit SparseOperator(std::size_t dimension);

    std::size_t dimension() const { return dimension_; }
    std::size_t nonzero_count() const { return values_.size(); }
    bool compressed() const { return compressed_; }

    void add(std::size_t row, std::size_t col, cplx value);
    void compress();

    void apply(std::span<const cplx> in, std::span<cplx> out) const;
    std::vector<cplx> apply(const std::vector<cplx>& in) const;

    cplx entry(std::size_t row, std::size_t col) const;
    SparseOperator dagger() const;
    bool is_hermitian(double tol = 1e-14) const;

    // (row, col, value) triplets in row-major order
    std::vector<std::tuple<std::size_t, std::size_t, cplx>> triplets() const;

private:
    std::size_t dimension_;
    bool compressed_ = false;
    std::vector<std::pair<std::size_t, std::size_t>> pending_; // (row, col)
    std::vector<cplx> pending_values_;
    std::vector<std::size_t> row_ptr_;
    std::vector<std::size_t> cols_;
    std::vector<cplx> values_;
};

// Normalized complex amplitude vector over a shared immutable basis.
class QuantumState {
public:
    QuantumState(std::shared_ptr<const FockBasis> basis, std::vector<cplx> amplitudes);

    const FockBasis& basis() const { return *basis_; }
    std::shared_ptr<const FockBasis> basis_ptr() const { return basis_; }
    std::span<const cplx> amplitudes() const { return amplitudes_; }
    std::span<cplx> amplitudes() { return amplitudes_; }

    double norm_sq() const;

private:
    std::shared_ptr<const FockBasis> basis_;
    std::vector<cplx> amplitudes_;
};

cplx inner_product(const QuantumState& a, const QuantumState& b);

// Per-mode occupation expectations <Y_j>.
std::vector<double> number_expectations(const QuantumState& state);

std::shared_ptr<const FockBasis> build_basis(int mode_count, std::vector<int> caps,
                                             std::size_t dimension_limit = kDefaultDimensionLimit);

// annihilation maps |..,y,..> -> sqrt(y) |..,y-1,..>; creation is its
// conjugate transpose, with the image beyond the cap dropped.
std::pair<SparseOperator, SparseOperator> ladder_operators(const FockBasis& basis, int mode);

SparseOperator number_operator(const FockBasis& basis, int mode);

struct CoherentStateResult {
    QuantumState state;
    double truncation_deficit; // probability weight lost to the caps, pre-normalization
};

// Product coherent state with per-mode amplitudes alpha. Each mode's Poisson
// tail beyond its cap must stay below tail_tolerance.
CoherentStateResult coherent_state(std::shared_ptr<const FockBasis> basis,
                                   std::span<const cplx> alphas,
                                   double tail_tolerance = 1e-8);

// Smallest cap whose Poisson tail at the given mean stays below the tolerance.
int coherent_required_cap(double mean_occupation, double tail_tolerance = 1e-8);

// Debug/golden-file dumps: occupation vectors as integer arrays, sparse
// triplets as [row, col, re, im].
nlohmann::ordered_json basis_to_json(const FockBasis& basis, std::size_t max_states = 4096);
nlohmann::ordered_json operator_to_json(const SparseOperator& op);

} // namespace qbrain

#endif
