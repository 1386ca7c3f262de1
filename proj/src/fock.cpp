#include "fock.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "errors.hpp"
#include "textio.hpp"

namespace qbrain {

FockBasis::FockBasis(int mode_count, std::vector<int> caps, std::size_t dimension_limit)
    : mode_count_(mode_count), caps_(std::move(caps))
{
    if (mode_count_ < 1) throw validation_error("FockBasis: mode_count must be >= 1");
    if (static_cast<int>(caps_.size()) != mode_count_)
        throw validation_error("FockBasis: caps length must equal mode_count");
    for (int c : caps_)
        if (c < 0) throw validation_error("FockBasis: caps must be nonnegative");

    // dimension = prod(cap_j + 1), guarded against overflow before the limit check
    long double extent = 1.0L;
    for (int c : caps_) extent *= static_cast<long double>(c) + 1.0L;
    if (extent > static_cast<long double>(dimension_limit)) {
        std::string msg = "FockBasis: dimension ";
        if (extent < 1e18L)
            msg += std::to_string(static_cast<unsigned long long>(extent));
        else
            msg += textio::format_number(static_cast<double>(extent));
        msg += " exceeds limit " + std::to_string(dimension_limit);
        throw capacity_error(msg);
    }
    size_ = 1;
    for (int c : caps_) size_ *= static_cast<std::size_t>(c) + 1;

    strides_.assign(mode_count_, 1);
    for (int j = mode_count_ - 2; j >= 0; --j)
        strides_[j] = strides_[j + 1] * (static_cast<std::size_t>(caps_[j + 1]) + 1);
}

std::vector<int> FockBasis::occupation(std::size_t index) const
{
    std::vector<int> occ(mode_count_);
    occupation_into(index, occ);
    return occ;
}

void FockBasis::occupation_into(std::size_t index, std::span<int> out) const
{
    if (index >= size_) throw validation_error("FockBasis: state index out of range");
    for (int j = 0; j < mode_count_; ++j) {
        out[j] = static_cast<int>(index / strides_[j]);
        index %= strides_[j];
    }
}

std::size_t FockBasis::index_of(std::span<const int> occupation) const
{
    if (static_cast<int>(occupation.size()) != mode_count_)
        throw validation_error("FockBasis: occupation vector length mismatch");
    std::size_t idx = 0;
    for (int j = 0; j < mode_count_; ++j) {
        if (occupation[j] < 0 || occupation[j] > caps_[j])
            throw validation_error("FockBasis: occupation outside caps at mode " + std::to_string(j));
        idx += static_cast<std::size_t>(occupation[j]) * strides_[j];
    }
    return idx;
}

std::shared_ptr<const FockBasis> build_basis(int mode_count, std::vector<int> caps,
                                             std::size_t dimension_limit)
{
    return std::make_shared<const FockBasis>(mode_count, std::move(caps), dimension_limit);
}

// ---------------------------------------------------------------------------
// SparseOperator

SparseOperator::SparseOperator(std::size_t dimension) : dimension_(dimension) {}

void SparseOperator::add(std::size_t row, std::size_t col, cplx value)
{
    if (row >= dimension_ || col >= dimension_)
        throw validation_error("SparseOperator: entry out of range");
    pending_.emplace_back(row, col);
    pending_values_.push_back(value);
    compressed_ = false;
}

void SparseOperator::compress()
{
    if (compressed_ && pending_.empty()) return;
    // merge existing CSR content back into the pending triplets
    if (!row_ptr_.empty()) {
        for (std::size_t r = 0; r < dimension_; ++r)
            for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
                pending_.emplace_back(r, cols_[k]);
                pending_values_.push_back(values_[k]);
            }
    }
    std::vector<std::size_t> order(pending_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return pending_[a] < pending_[b];
    });

    row_ptr_.assign(dimension_ + 1, 0);
    cols_.clear();
    values_.clear();
    cols_.reserve(pending_.size());
    values_.reserve(pending_.size());
    std::size_t last_row = static_cast<std::size_t>(-1);
    for (std::size_t i = 0; i < order.size(); ++i) {
        auto [r, c] = pending_[order[i]];
        cplx v = pending_values_[order[i]];
        if (!values_.empty() && last_row == r && cols_.back() == c) {
            values_.back() += v; // merge duplicate coordinates
        } else {
            cols_.push_back(c);
            values_.push_back(v);
            last_row = r;
            ++row_ptr_[r + 1];
        }
    }
    for (std::size_t r = 0; r < dimension_; ++r) row_ptr_[r + 1] += row_ptr_[r];
    pending_.clear();
    pending_values_.clear();
    compressed_ = true;
}

void SparseOperator::apply(std::span<const cplx> in, std::span<cplx> out) const
{
    if (!compressed_) throw numerical_error("SparseOperator: apply before compress");
    if (in.size() != dimension_ || out.size() != dimension_)
        throw validation_error("SparseOperator: vector dimension mismatch");
    for (std::size_t r = 0; r < dimension_; ++r) {
        cplx acc = 0.0;
        for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            acc += values_[k] * in[cols_[k]];
        out[r] = acc;
    }
}

std::vector<cplx> SparseOperator::apply(const std::vector<cplx>& in) const
{
    std::vector<cplx> out(dimension_);
    apply(std::span<const cplx>(in), std::span<cplx>(out));
    return out;
}

cplx SparseOperator::entry(std::size_t row, std::size_t col) const
{
    if (!compressed_) throw numerical_error("SparseOperator: entry before compress");
    if (row >= dimension_ || col >= dimension_)
        throw validation_error("SparseOperator: entry out of range");
    auto begin = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row]);
    auto end = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row + 1]);
    auto it = std::lower_bound(begin, end, col);
    if (it == end || *it != col) return 0.0;
    return values_[static_cast<std::size_t>(it - cols_.begin())];
}

SparseOperator SparseOperator::dagger() const
{
    if (!compressed_) throw numerical_error("SparseOperator: dagger before compress");
    SparseOperator out(dimension_);
    for (std::size_t r = 0; r < dimension_; ++r)
        for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            out.add(cols_[k], r, std::conj(values_[k]));
    out.compress();
    return out;
}

bool SparseOperator::is_hermitian(double tol) const
{
    if (!compressed_) throw numerical_error("SparseOperator: is_hermitian before compress");
    for (std::size_t r = 0; r < dimension_; ++r)
        for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            cplx mirror = entry(cols_[k], r);
            if (std::abs(values_[k] - std::conj(mirror)) > tol) return false;
        }
    return true;
}

std::vector<std::tuple<std::size_t, std::size_t, cplx>> SparseOperator::triplets() const
{
    if (!compressed_) throw numerical_error("SparseOperator: triplets before compress");
    std::vector<std::tuple<std::size_t, std::size_t, cplx>> out;
    out.reserve(values_.size());
    for (std::size_t r = 0; r < dimension_; ++r)
        for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            out.emplace_back(r, cols_[k], values_[k]);
    return out;
}

// ---------------------------------------------------------------------------
// QuantumState

QuantumState::QuantumState(std::shared_ptr<const FockBasis> basis, std::vector<cplx> amplitudes)
    : basis_(std::move(basis)), amplitudes_(std::move(amplitudes))
{
    if (!basis_) throw validation_error("QuantumState: null basis");
    if (amplitudes_.size() != basis_->size())
        throw validation_error("QuantumState: amplitude vector length mismatch");
}

double QuantumState::norm_sq() const
{
    double n = 0.0;
    for (const cplx& a : amplitudes_) n += std::norm(a);
    return n;
}

cplx inner_product(const QuantumState& a, const QuantumState& b)
{
    if (&a.basis() != &b.basis() && a.basis().size() != b.basis().size())
        throw validation_error("inner_product: states live on different bases");
    cplx acc = 0.0;
    auto av = a.amplitudes();
    auto bv = b.amplitudes();
    for (std::size_t i = 0; i < av.size(); ++i) acc += std::conj(av[i]) * bv[i];
    return acc;
}

std::vector<double> number_expectations(const QuantumState& state)
{
    const FockBasis& basis = state.basis();
    std::vector<double> expect(basis.mode_count(), 0.0);
    auto amps = state.amplitudes();
    for_each_state(basis, [&](std::size_t idx, std::span<const int> occ) {
        double w = std::norm(amps[idx]);
        if (w == 0.0) return;
        for (int j = 0; j < basis.mode_count(); ++j) expect[j] += w * occ[j];
    });
    return expect;
}

// ---------------------------------------------------------------------------
// Operators

std::pair<SparseOperator, SparseOperator> ladder_operators(const FockBasis& basis, int mode)
{
    if (mode < 0 || mode >= basis.mode_count())
        throw validation_error("ladder_operators: mode out of range");
    SparseOperator annihilation(basis.size());
    SparseOperator creation(basis.size());
    const std::size_t stride = basis.stride(mode);
    for_each_state(basis, [&](std::size_t idx, std::span<const int> occ) {
        const int y = occ[mode];
        if (y > 0) annihilation.add(idx - stride, idx, std::sqrt(static_cast<double>(y)));
        if (y < basis.caps()[mode]) creation.add(idx + stride, idx, std::sqrt(static_cast<double>(y) + 1.0));
    });
    annihilation.compress();
    creation.compress();
    return {std::move(annihilation), std::move(creation)};
}

SparseOperator number_operator(const FockBasis& basis, int mode)
{
    if (mode < 0 || mode >= basis.mode_count())
        throw validation_error("number_operator: mode out of range");
    SparseOperator op(basis.size());
    for_each_state(basis, [&](std::size_t idx, std::span<const int> occ) {
        if (occ[mode] != 0) op.add(idx, idx, static_cast<double>(occ[mode]));
    });
    op.compress();
    return op;
}

// ---------------------------------------------------------------------------
// Coherent states

namespace {

// Poisson tail P(Y > cap) for mean lambda, summed directly to avoid the
// cancellation in 1 - CDF.
double poisson_tail(double lambda, int cap)
{
    if (lambda == 0.0) return 0.0;
    const double log_lambda = std::log(lambda);
    double tail = 0.0;
    for (int y = cap + 1; y < cap + 1 + 512; ++y) {
        double log_p = -lambda + y * log_lambda - std::lgamma(y + 1.0);
        double p = std::exp(log_p);
        tail += p;
        if (p < 1e-30 && y > lambda) break;
    }
    return tail;
}

int required_cap(double lambda, double tol)
{
    int cap = static_cast<int>(lambda);
    while (poisson_tail(lambda, cap) >= tol) ++cap;
    return cap;
}

} // namespace

int coherent_required_cap(double mean_occupation, double tail_tolerance)
{
    if (mean_occupation < 0.0)
        throw validation_error("coherent_required_cap: mean occupation must be >= 0");
    if (tail_tolerance <= 0.0)
        throw validation_error("coherent_required_cap: tolerance must be positive");
    if (mean_occupation == 0.0) return 0;
    return required_cap(mean_occupation, tail_tolerance);
}

CoherentStateResult coherent_state(std::shared_ptr<const FockBasis> basis,
                                   std::span<const cplx> alphas, double tail_tolerance)
{
    if (!basis) throw validation_error("coherent_state: null basis");
    const int modes = basis->mode_count();
    if (static_cast<int>(alphas.size()) != modes)
        throw validation_error("coherent_state: amplitude count must equal mode count");

    // per-mode coefficient tables with the Poisson normalizer folded in
    std::vector<std::vector<cplx>> coeff(modes);
    for (int j = 0; j < modes; ++j) {
        const int cap = basis->caps()[j];
        const double lambda = std::norm(alphas[j]);
        if (lambda > 0.0) {
            double tail = poisson_tail(lambda, cap);
            if (tail >= tail_tolerance) {
                throw validation_error(
                    "coherent_state: truncation weight " + textio::format_number(tail) +
                    " on mode " + std::to_string(j) + " exceeds " +
                    textio::format_number(tail_tolerance) + "; cap must be at least " +
                    std::to_string(required_cap(lambda, tail_tolerance)) + " (have " +
                    std::to_string(cap) + ")");
            }
        }
        coeff[j].resize(cap + 1);
        if (lambda == 0.0) {
            coeff[j][0] = 1.0;
            for (int y = 1; y <= cap; ++y) coeff[j][y] = 0.0;
        } else {
            const double log_mod = std::log(std::abs(alphas[j]));
            const double phase = std::arg(alphas[j]);
            for (int y = 0; y <= cap; ++y) {
                double log_c = y * log_mod - 0.5 * std::lgamma(y + 1.0) - 0.5 * lambda;
                coeff[j][y] = std::polar(std::exp(log_c), phase * y);
            }
        }
    }

    std::vector<cplx> amps(basis->size());
    for_each_state(*basis, [&](std::size_t idx, std::span<const int> occ) {
        cplx a = coeff[0][occ[0]];
        for (int j = 1; j < modes; ++j) a *= coeff[j][occ[j]];
        amps[idx] = a;
    });

    double norm_sq = 0.0;
    for (const cplx& a : amps) norm_sq += std::norm(a);
    const double deficit = std::max(0.0, 1.0 - norm_sq);
    if (norm_sq <= 0.0) throw numerical_error("coherent_state: zero retained weight");
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (cplx& a : amps) a *= inv;

    return {QuantumState(std::move(basis), std::move(amps)), deficit};
}

// ---------------------------------------------------------------------------
// JSON dumps

nlohmann::ordered_json basis_to_json(const FockBasis& basis, std::size_t max_states)
{
    nlohmann::ordered_json j;
    j["mode_count"] = basis.mode_count();
    j["caps"] = basis.caps();
    j["dimension"] = basis.size();
    nlohmann::ordered_json states = nlohmann::ordered_json::array();
    const std::size_t limit = std::min(basis.size(), max_states);
    for (std::size_t i = 0; i < limit; ++i) states.push_back(basis.occupation(i));
    j["states"] = std::move(states);
    j["states_truncated"] = limit < basis.size();
    return j;
}

nlohmann::ordered_json operator_to_json(const SparseOperator& op)
{
    nlohmann::ordered_json j;
    j["dimension"] = op.dimension();
    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    for (const auto& [r, c, v] : op.triplets()) {
        entries.push_back({r, c, textio::round_number(v.real()), textio::round_number(v.imag())});
    }
    j["triplets"] = std::move(entries);
    return j;
}

} // namespace qbrain
