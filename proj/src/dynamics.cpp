#include "dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "errors.hpp"
#include "textio.hpp"

namespace qbrain {

std::vector<double> analytic_response_critical(std::span<const double> x, double q, double t)
{
    if (q <= 0.0) throw validation_error("analytic_response_critical: q must be positive");
    const double s = std::sin(0.5 * q * t);
    const double w = s * s;
    std::vector<double> y(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) y[j] = x[j] * w;
    return y;
}

std::vector<double> analytic_response_ground(std::span<const double> x, double q, double t)
{
    if (q <= 0.0) throw validation_error("analytic_response_ground: q must be positive");
    const double q2 = q * q;
    const double omega = std::sqrt(1.0 + q2);
    const double s = std::sin(0.5 * omega * t);
    const double w = q2 / (1.0 + q2) * s * s;
    std::vector<double> y(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) y[j] = x[j] * w;
    return y;
}

double recall_fidelity(std::span<const double> y, std::span<const double> x)
{
    if (y.size() != x.size()) throw validation_error("recall_fidelity: length mismatch");
    double dot = 0.0, ny = 0.0, nx = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (x[j] <= 0.0) continue; // only stimulated modes enter
        const double yj = std::max(y[j], 0.0);
        dot += yj * x[j];
        ny += yj * yj;
        nx += x[j] * x[j];
    }
    if (nx == 0.0) throw validation_error("recall_fidelity: stimulus pattern is zero");
    if (ny == 0.0) return 0.0;
    return std::clamp(dot / std::sqrt(ny * nx), 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Lanczos / Krylov propagation

namespace {

// Eigen-decomposition of a symmetric tridiagonal matrix by the implicit QL
// method (EISPACK tql2 lineage). On return diag holds the eigenvalues and
// z[i*m + k] is component i of eigenvector k.
void tridiag_eigen(std::vector<double>& diag, std::vector<double> off, std::vector<double>& z)
{
    const int m = static_cast<int>(diag.size());
    z.assign(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) z[static_cast<std::size_t>(i) * m + i] = 1.0;
    off.resize(m, 0.0); // off[i] couples i and i+1; off[m-1] is padding

    for (int l = 0; l < m; ++l) {
        int iter = 0;
        while (true) {
            int split = l;
            for (; split < m - 1; ++split) {
                double dd = std::abs(diag[split]) + std::abs(diag[split + 1]);
                if (std::abs(off[split]) <= 1e-300 + 1e-16 * dd) break;
            }
            if (split == l) break;
            if (iter++ == 64) throw numerical_error("tridiag_eigen: QL failed to converge");

            double g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            double r = std::hypot(g, 1.0);
            g = diag[split] - diag[l] + off[l] / (g + (g >= 0 ? r : -r));
            double s = 1.0, c = 1.0, p = 0.0;
            for (int i = split - 1; i >= l; --i) {
                double f = s * off[i];
                double b = c * off[i];
                r = std::hypot(f, g);
                off[i + 1] = r;
                if (r == 0.0) {
                    diag[i + 1] -= p;
                    off[split] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                for (int k = 0; k < m; ++k) {
                    f = z[static_cast<std::size_t>(k) * m + i + 1];
                    z[static_cast<std::size_t>(k) * m + i + 1] =
                        s * z[static_cast<std::size_t>(k) * m + i] + c * f;
                    z[static_cast<std::size_t>(k) * m + i] =
                        c * z[static_cast<std::size_t>(k) * m + i] - s * f;
                }
            }
            if (r == 0.0 && split - 1 >= l) continue;
            diag[l] -= p;
            off[l] = g;
            off[split] = 0.0;
        }
    }
}

struct LanczosDecomposition {
    int m = 0;              // effective subspace dimension
    double beta_next = 0.0; // residual coupling out of the subspace
    std::vector<std::vector<cplx>> v;
    std::vector<double> evals;
    std::vector<double> evecs; // m x m, column k is eigenvector k
};

// a-posteriori step error of the Krylov propagator: weight leaking through
// the last basis vector
double krylov_error(const std::vector<double>& alpha, const std::vector<double>& beta,
                    double beta_next, double dt)
{
    if (beta_next == 0.0) return 0.0;
    std::vector<double> evals = alpha;
    std::vector<double> evecs;
    tridiag_eigen(evals, beta, evecs);
    const int m = static_cast<int>(alpha.size());
    cplx last = 0.0;
    for (int k = 0; k < m; ++k) {
        last += evecs[static_cast<std::size_t>(m - 1) * m + k] * evecs[k] *
                std::polar(1.0, -dt * evals[k]);
    }
    return 2.0 * beta_next * std::abs(last);
}

// Builds the subspace only as deep as the error estimate for the intended
// step requires.
LanczosDecomposition build_lanczos(const SparseOperator& h, const std::vector<cplx>& psi,
                                   double psi_norm, int m_max, double dt_hint, double tol_abs)
{
    LanczosDecomposition out;
    const std::size_t dim = psi.size();
    std::vector<double> alpha, beta;
    out.v.reserve(16);
    out.v.emplace_back(dim);
    for (std::size_t i = 0; i < dim; ++i) out.v[0][i] = psi[i] / psi_norm;

    std::vector<cplx> w(dim);
    double scale = 1.0;
    for (int k = 0; k < m_max; ++k) {
        h.apply(out.v[k], w);
        if (k > 0) {
            const double b = beta[k - 1];
            const auto& prev = out.v[k - 1];
            for (std::size_t i = 0; i < dim; ++i) w[i] -= b * prev[i];
        }
        cplx a = 0.0;
        for (std::size_t i = 0; i < dim; ++i) a += std::conj(out.v[k][i]) * w[i];
        const double ak = a.real(); // Hermitian H, real diagonal
        alpha.push_back(ak);
        for (std::size_t i = 0; i < dim; ++i) w[i] -= ak * out.v[k][i];
        // full reorthogonalization keeps the basis clean over long runs
        for (int j = 0; j <= k; ++j) {
            cplx overlap = 0.0;
            const auto& vj = out.v[j];
            for (std::size_t i = 0; i < dim; ++i) overlap += std::conj(vj[i]) * w[i];
            for (std::size_t i = 0; i < dim; ++i) w[i] -= overlap * vj[i];
        }
        double bnorm = 0.0;
        for (std::size_t i = 0; i < dim; ++i) bnorm += std::norm(w[i]);
        bnorm = std::sqrt(bnorm);
        scale = std::max({scale, std::abs(ak), bnorm});
        if (bnorm <= 1e-14 * scale) {
            out.m = k + 1;
            out.beta_next = 0.0; // invariant subspace: the step is exact
            break;
        }
        if (k >= 3 && krylov_error(alpha, beta, bnorm, dt_hint) <= 0.25 * tol_abs) {
            out.m = k + 1;
            out.beta_next = bnorm;
            break;
        }
        if (k + 1 == m_max) {
            out.m = m_max;
            out.beta_next = bnorm;
            break;
        }
        beta.push_back(bnorm);
        out.v.emplace_back(dim);
        for (std::size_t i = 0; i < dim; ++i) out.v[k + 1][i] = w[i] / bnorm;
    }
    alpha.resize(out.m);
    beta.resize(out.m > 0 ? out.m - 1 : 0);
    out.evals = alpha;
    tridiag_eigen(out.evals, beta, out.evecs);
    return out;
}

// u = exp(-i dt T) e1 in the Krylov coordinates
std::vector<cplx> subspace_propagate(const LanczosDecomposition& lz, double dt)
{
    const int m = lz.m;
    std::vector<cplx> u(m, 0.0);
    for (int k = 0; k < m; ++k) {
        const double weight0 = lz.evecs[0 * static_cast<std::size_t>(m) + k];
        const cplx phase = std::polar(1.0, -dt * lz.evals[k]);
        const cplx coeff = weight0 * phase;
        for (int i = 0; i < m; ++i)
            u[i] += coeff * lz.evecs[static_cast<std::size_t>(i) * m + k];
    }
    return u;
}

} // namespace

EvolutionResult evolve_exact(const NetworkModel& model, const QuantumState& initial,
                             std::span<const double> times, const ExactEvolveOptions& opts)
{
    if (!model.input_layer())
        throw validation_error("evolve_exact: model must carry an input layer");
    const int n = model.size();
    const FockBasis& basis = initial.basis();
    if (basis.mode_count() != 2 * n)
        throw validation_error("evolve_exact: basis must hold 2n modes (Y then X)");
    const double norm0 = initial.norm_sq();
    if (std::abs(norm0 - 1.0) > 1e-10)
        throw validation_error("evolve_exact: initial state is not normalized");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (times[i] < times[i - 1])
            throw validation_error("evolve_exact: sample times must be non-decreasing");
    if (!times.empty() && times.front() < 0.0)
        throw validation_error("evolve_exact: sample times must be nonnegative");

    const SparseOperator h = build_hamiltonian(model, basis);

    std::vector<cplx> psi(initial.amplitudes().begin(), initial.amplitudes().end());
    double t = 0.0;

    EvolutionResult result;
    result.times.assign(times.begin(), times.end());
    result.y_expect.reserve(times.size());
    result.x_expect.reserve(times.size());
    result.norm_drift.reserve(times.size());
    result.energy_expect.reserve(times.size());

    auto sample = [&]() {
        QuantumState view(initial.basis_ptr(), psi);
        std::vector<double> occ = number_expectations(view);
        result.y_expect.emplace_back(occ.begin(), occ.begin() + n);
        result.x_expect.emplace_back(occ.begin() + n, occ.end());
        const double drift = std::abs(1.0 - view.norm_sq());
        result.norm_drift.push_back(drift);
        std::vector<cplx> hpsi = h.apply(psi);
        cplx e = 0.0;
        for (std::size_t i = 0; i < psi.size(); ++i) e += std::conj(psi[i]) * hpsi[i];
        result.energy_expect.push_back(e.real());
        if (drift > opts.norm_drift_limit * std::max(t, 1.0))
            throw numerical_error("evolve_exact: norm drift " + textio::format_number(drift) +
                                  " at t=" + textio::format_number(t) +
                                  " exceeds " + textio::format_number(opts.norm_drift_limit) +
                                  " per unit time");
    };

    auto advance_to = [&](double target) {
        const double span = std::max(std::abs(target), 1.0);
        while (target - t > 1e-14 * span) {
            double dt = target - t;
            const double psi_norm = std::sqrt(std::max(
                0.0, std::accumulate(psi.begin(), psi.end(), 0.0,
                                     [](double acc, const cplx& c) { return acc + std::norm(c); })));
            LanczosDecomposition lz =
                build_lanczos(h, psi, psi_norm, opts.max_krylov, dt, opts.local_tol * dt);
            std::vector<cplx> u;
            while (true) {
                u = subspace_propagate(lz, dt);
                const double err = 2.0 * lz.beta_next * std::abs(u[lz.m - 1]);
                if (lz.beta_next == 0.0 || err <= opts.local_tol * dt) break;
                dt *= 0.5;
                if (dt < 1e-10)
                    throw numerical_error("evolve_exact: Krylov step underflow at t=" +
                                          textio::format_number(t));
            }
            std::vector<cplx> next(psi.size(), 0.0);
            for (int i = 0; i < lz.m; ++i) {
                const cplx c = psi_norm * u[i];
                const auto& vi = lz.v[i];
                for (std::size_t idx = 0; idx < next.size(); ++idx) next[idx] += c * vi[idx];
            }
            psi = std::move(next);
            t += dt;
        }
        t = target;
    };

    for (double target : times) {
        advance_to(target);
        sample();
    }
    return result;
}

// ---------------------------------------------------------------------------
// Mean-field engine

namespace {

struct MeanFieldSystem {
    const NetworkModel& model;
    double q_half;
    double eps_x;
    bool layered;

    void derivative(const std::vector<cplx>& a, const std::vector<cplx>& b,
                    std::vector<cplx>& da, std::vector<cplx>& db) const
    {
        const int n = model.size();
        for (int j = 0; j < n; ++j) {
            double gap = model.threshold(j);
            for (int k = 0; k < n; ++k) gap -= 2.0 * model.weight(j, k) * std::norm(a[k]);
            cplx rhs = gap * a[j];
            if (layered) rhs += q_half * b[j];
            da[j] = cplx(0.0, -1.0) * rhs;
        }
        if (layered) {
            for (int j = 0; j < n; ++j)
                db[j] = cplx(0.0, -1.0) * (eps_x * b[j] + q_half * a[j]);
        }
    }
};

double total_occupation(const std::vector<cplx>& a, const std::vector<cplx>& b)
{
    double total = 0.0;
    for (const cplx& v : a) total += std::norm(v);
    for (const cplx& v : b) total += std::norm(v);
    return total;
}

} // namespace

EvolutionResult evolve_meanfield_fixed_step(const NetworkModel& model,
                                            const CoherentConfig& initial,
                                            std::span<const double> times, double step)
{
    const int n = model.size();
    if (static_cast<int>(initial.a.size()) != n)
        throw validation_error("evolve_meanfield: a must hold one amplitude per output mode");
    const bool layered = model.input_layer().has_value();
    if (layered && static_cast<int>(initial.b.size()) != n)
        throw validation_error("evolve_meanfield: b must hold one amplitude per input mode");
    if (!layered && !initial.b.empty())
        throw validation_error("evolve_meanfield: model has no input layer but b is nonempty");
    for (const cplx& v : initial.a)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw validation_error("evolve_meanfield: non-finite amplitude");
    for (const cplx& v : initial.b)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw validation_error("evolve_meanfield: non-finite amplitude");
    if (step <= 0.0) throw validation_error("evolve_meanfield: step must be positive");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (times[i] < times[i - 1])
            throw validation_error("evolve_meanfield: sample times must be non-decreasing");
    if (!times.empty() && times.front() < 0.0)
        throw validation_error("evolve_meanfield: sample times must be nonnegative");

    MeanFieldSystem sys{model, layered ? model.input_layer()->q / 2.0 : 0.0,
                        layered ? model.input_layer()->eps_x : 0.0, layered};

    std::vector<cplx> a = initial.a;
    std::vector<cplx> b = initial.b;
    const double occ0 = total_occupation(a, b);

    const int nb = static_cast<int>(b.size());
    std::vector<cplx> k1a(n), k2a(n), k3a(n), k4a(n), ta(n);
    std::vector<cplx> k1b(nb), k2b(nb), k3b(nb), k4b(nb), tb(nb);

    auto rk4_step = [&](double h) {
        sys.derivative(a, b, k1a, k1b);
        for (int j = 0; j < n; ++j) ta[j] = a[j] + 0.5 * h * k1a[j];
        for (int j = 0; j < nb; ++j) tb[j] = b[j] + 0.5 * h * k1b[j];
        sys.derivative(ta, tb, k2a, k2b);
        for (int j = 0; j < n; ++j) ta[j] = a[j] + 0.5 * h * k2a[j];
        for (int j = 0; j < nb; ++j) tb[j] = b[j] + 0.5 * h * k2b[j];
        sys.derivative(ta, tb, k3a, k3b);
        for (int j = 0; j < n; ++j) ta[j] = a[j] + h * k3a[j];
        for (int j = 0; j < nb; ++j) tb[j] = b[j] + h * k3b[j];
        sys.derivative(ta, tb, k4a, k4b);
        for (int j = 0; j < n; ++j)
            a[j] += h / 6.0 * (k1a[j] + 2.0 * k2a[j] + 2.0 * k3a[j] + k4a[j]);
        for (int j = 0; j < nb; ++j)
            b[j] += h / 6.0 * (k1b[j] + 2.0 * k2b[j] + 2.0 * k3b[j] + k4b[j]);
    };

    EvolutionResult result;
    result.times.assign(times.begin(), times.end());
    double t = 0.0;
    for (double target : times) {
        const double gap = target - t;
        if (gap > 0.0) {
            const int steps = std::max(1, static_cast<int>(std::ceil(gap / step)));
            const double h = gap / steps;
            for (int s = 0; s < steps; ++s) rk4_step(h);
        }
        t = target;
        std::vector<double> ys(n), xs(nb);
        for (int j = 0; j < n; ++j) ys[j] = std::norm(a[j]);
        for (int j = 0; j < nb; ++j) xs[j] = std::norm(b[j]);
        result.y_expect.push_back(std::move(ys));
        if (layered) result.x_expect.push_back(std::move(xs));
        const double occ = total_occupation(a, b);
        result.norm_drift.push_back(occ0 > 0.0 ? std::abs(1.0 - occ / occ0) : 0.0);
        if (!std::isfinite(occ))
            throw numerical_error("evolve_meanfield: trajectory diverged at t=" +
                                  textio::format_number(t));
    }
    result.final_config.a = std::move(a);
    result.final_config.b = std::move(b);
    return result;
}

EvolutionResult evolve_meanfield(const NetworkModel& model, const CoherentConfig& initial,
                                 std::span<const double> times, const MeanFieldOptions& opts)
{
    double step = opts.initial_step;
    double last_rate = 0.0;
    for (int attempt = 0; attempt <= opts.max_halvings; ++attempt) {
        EvolutionResult result;
        bool diverged = false;
        try {
            result = evolve_meanfield_fixed_step(model, initial, times, step);
        } catch (const numerical_error&) {
            diverged = true;
        }
        if (!diverged) {
            double rate = 0.0;
            for (std::size_t i = 0; i < result.norm_drift.size(); ++i)
                rate = std::max(rate, result.norm_drift[i] / std::max(result.times[i], 1.0));
            last_rate = rate;
            if (rate <= opts.occupation_drift_limit) return result;
        }
        step *= 0.5;
    }
    throw numerical_error(
        "evolve_meanfield: occupation drift " + textio::format_number(last_rate) +
        " per unit time still above " + textio::format_number(opts.occupation_drift_limit) +
        " at the smallest step " + textio::format_number(step * 2.0) + " (stiff regime)");
}

} // namespace qbrain
