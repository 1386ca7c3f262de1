#include "linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.hpp"

namespace qbrain::linalg {

namespace {

// In-place Householder QR of an m x k matrix; returns x solving the
// least-squares system. a is row-major m x k with m >= k.
std::vector<double> solve_thin_qr(std::vector<double> a, int m, int k, std::vector<double> rhs)
{
    for (int col = 0; col < k; ++col) {
        double norm = 0.0;
        for (int r = col; r < m; ++r) norm += a[r * k + col] * a[r * k + col];
        norm = std::sqrt(norm);
        if (norm == 0.0)
            throw numerical_error("least_squares: rank-deficient column encountered");
        double pivot = a[col * k + col];
        double alpha = pivot > 0 ? -norm : norm;
        // Householder vector v = x - alpha e1 stored in place of the column.
        a[col * k + col] = pivot - alpha;
        double vtv = 0.0;
        for (int r = col; r < m; ++r) vtv += a[r * k + col] * a[r * k + col];
        if (vtv == 0.0)
            throw numerical_error("least_squares: degenerate Householder vector");
        for (int j = col + 1; j < k; ++j) {
            double dot = 0.0;
            for (int r = col; r < m; ++r) dot += a[r * k + col] * a[r * k + j];
            double scale = 2.0 * dot / vtv;
            for (int r = col; r < m; ++r) a[r * k + j] -= scale * a[r * k + col];
        }
        double dotb = 0.0;
        for (int r = col; r < m; ++r) dotb += a[r * k + col] * rhs[r];
        double scaleb = 2.0 * dotb / vtv;
        for (int r = col; r < m; ++r) rhs[r] -= scaleb * a[r * k + col];
        a[col * k + col] = alpha; // diagonal of R
        double rel = std::abs(alpha);
        if (rel < 1e-13 * std::abs(a[0 * k + 0]))
            throw numerical_error("least_squares: nearly singular triangle");
    }
    std::vector<double> x(k, 0.0);
    for (int row = k - 1; row >= 0; --row) {
        double sum = rhs[row];
        for (int j = row + 1; j < k; ++j) sum -= a[row * k + j] * x[j];
        double diag = a[row * k + row];
        if (diag == 0.0)
            throw numerical_error("least_squares: zero diagonal in back substitution");
        x[row] = sum / diag;
    }
    return x;
}

} // namespace

int qr_rank(std::vector<double> a, int rows, int cols, double rel_tol)
{
    int steps = std::min(rows, cols);
    double first_diag = 0.0;
    int rank = 0;
    for (int col = 0; col < steps; ++col) {
        // pick the remaining column of largest trailing norm
        int best = col;
        double best_norm = -1.0;
        for (int j = col; j < cols; ++j) {
            double norm = 0.0;
            for (int r = col; r < rows; ++r) norm += a[r * cols + j] * a[r * cols + j];
            if (norm > best_norm) {
                best_norm = norm;
                best = j;
            }
        }
        if (best != col)
            for (int r = 0; r < rows; ++r) std::swap(a[r * cols + col], a[r * cols + best]);
        double norm = std::sqrt(std::max(best_norm, 0.0));
        if (col == 0) first_diag = norm;
        if (norm <= rel_tol * std::max(first_diag, std::numeric_limits<double>::min()))
            break;
        ++rank;
        double pivot = a[col * cols + col];
        double alpha = pivot > 0 ? -norm : norm;
        a[col * cols + col] = pivot - alpha;
        double vtv = 0.0;
        for (int r = col; r < rows; ++r) vtv += a[r * cols + col] * a[r * cols + col];
        if (vtv == 0.0) break;
        for (int j = col + 1; j < cols; ++j) {
            double dot = 0.0;
            for (int r = col; r < rows; ++r) dot += a[r * cols + col] * a[r * cols + j];
            double scale = 2.0 * dot / vtv;
            for (int r = col; r < rows; ++r) a[r * cols + j] -= scale * a[r * cols + col];
        }
        a[col * cols + col] = alpha;
    }
    return rank;
}

NnlsResult nnls(const std::vector<double>& a, int rows, int cols,
                const std::vector<double>& b, int max_iterations)
{
    if (rows <= 0 || cols <= 0) throw validation_error("nnls: empty system");
    if (static_cast<int>(a.size()) != rows * cols || static_cast<int>(b.size()) != rows)
        throw validation_error("nnls: shape mismatch");
    if (max_iterations <= 0) max_iterations = 6 * cols + 60;

    double scale_a = 0.0, scale_b = 0.0;
    for (double v : a) scale_a = std::max(scale_a, std::abs(v));
    for (double v : b) scale_b = std::max(scale_b, std::abs(v));
    const double grad_tol =
        16.0 * std::numeric_limits<double>::epsilon() * std::max(scale_a, 1e-300) *
        std::max(scale_b, 1.0) * std::max(rows, cols);

    NnlsResult result;
    result.x.assign(cols, 0.0);
    std::vector<char> passive(cols, 0);
    std::vector<char> banned(cols, 0); // anti-cycling: rejected candidates
    std::vector<double> residual(b);

    auto recompute_residual = [&]() {
        for (int r = 0; r < rows; ++r) {
            double s = b[r];
            for (int j = 0; j < cols; ++j)
                if (result.x[j] != 0.0) s -= a[r * cols + j] * result.x[j];
            residual[r] = s;
        }
    };
    auto passive_set = [&]() {
        std::vector<int> set;
        for (int j = 0; j < cols; ++j)
            if (passive[j]) set.push_back(j);
        return set;
    };
    auto solve_passive = [&](const std::vector<int>& set) {
        std::vector<double> sub(static_cast<std::size_t>(rows) * set.size());
        for (int r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < set.size(); ++c)
                sub[r * set.size() + c] = a[r * cols + set[c]];
        return solve_thin_qr(std::move(sub), rows, static_cast<int>(set.size()), b);
    };

    int outer = 0;
    while (outer < max_iterations) {
        ++outer;
        std::vector<int> set = passive_set();
        if (static_cast<int>(set.size()) >= std::min(rows, cols)) {
            result.converged = true;
            break;
        }
        // dual vector on the active (zero) set
        int best = -1;
        double best_grad = grad_tol;
        for (int j = 0; j < cols; ++j) {
            if (passive[j] || banned[j]) continue;
            double g = 0.0;
            for (int r = 0; r < rows; ++r) g += a[r * cols + j] * residual[r];
            if (g > best_grad) {
                best_grad = g;
                best = j;
            }
        }
        if (best < 0) {
            result.converged = true;
            break;
        }
        passive[best] = 1;

        int inner = 0;
        bool drop_candidate = false;
        while (inner++ < max_iterations) {
            set = passive_set();
            std::vector<double> z;
            try {
                z = solve_passive(set);
            } catch (const numerical_error&) {
                drop_candidate = true;
                break;
            }
            double zmin = std::numeric_limits<double>::infinity();
            for (double v : z) zmin = std::min(zmin, v);
            if (zmin > 0.0) {
                std::fill(result.x.begin(), result.x.end(), 0.0);
                for (std::size_t c = 0; c < set.size(); ++c) result.x[set[c]] = z[c];
                std::fill(banned.begin(), banned.end(), 0);
                break;
            }
            double alpha = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < set.size(); ++c) {
                if (z[c] <= 0.0) {
                    double xc = result.x[set[c]];
                    alpha = std::min(alpha, xc / (xc - z[c]));
                }
            }
            if (!std::isfinite(alpha) || alpha <= 0.0) {
                // the freshly added column did not move x; reject it
                drop_candidate = true;
                break;
            }
            for (std::size_t c = 0; c < set.size(); ++c) {
                double xc = result.x[set[c]];
                result.x[set[c]] = xc + alpha * (z[c] - xc);
            }
            for (std::size_t c = 0; c < set.size(); ++c) {
                if (z[c] <= 0.0 && result.x[set[c]] <= 1e-14 * std::abs(z[c])) {
                    result.x[set[c]] = 0.0;
                    passive[set[c]] = 0;
                }
            }
        }
        if (drop_candidate) {
            passive[best] = 0;
            result.x[best] = 0.0;
            banned[best] = 1;
        }
        recompute_residual();
    }
    result.iterations = outer;

    recompute_residual();
    double norm = 0.0;
    for (double r : residual) norm += r * r;
    result.residual_norm = std::sqrt(norm);
    return result;
}

NnlsResult nnls_min_norm(const std::vector<double>& a, int rows, int cols,
                         const std::vector<double>& b)
{
    double scale_a = 0.0, scale_b = 0.0;
    for (double v : a) scale_a = std::max(scale_a, std::abs(v));
    for (double v : b) scale_b = std::max(scale_b, std::abs(v));
    if (scale_a == 0.0) scale_a = 1.0;
    if (scale_b == 0.0) scale_b = 1.0;
    // Rescale so matrix entries, rhs and the unknowns are all O(1); the
    // original solution is gamma * x_scaled.
    const double gamma = scale_b / scale_a;
    std::vector<double> a2(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) a2[i] = a[i] / scale_a;
    std::vector<double> b2(b.size());
    for (int r = 0; r < rows; ++r) b2[r] = b[r] / scale_b;

    // Proximal (iterated Tikhonov) passes: each solves
    //   min w^2 ||A2 x - b2||^2 + ||x - x_prev||^2,  x >= 0
    // which converges to the minimum-norm point of the nonnegative feasible
    // set while tightening the equality residual by ~w^2 per pass.
    const double weight = 1e4;
    const int arows = rows + cols;
    std::vector<double> aug(static_cast<std::size_t>(arows) * cols, 0.0);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) aug[r * cols + c] = weight * a2[r * cols + c];
    for (int c = 0; c < cols; ++c) aug[(rows + c) * cols + c] = 1.0;

    std::vector<double> x(cols, 0.0);
    NnlsResult scaled;
    for (int pass = 0; pass < 4; ++pass) {
        std::vector<double> rhs(arows, 0.0);
        for (int r = 0; r < rows; ++r) rhs[r] = weight * b2[r];
        for (int c = 0; c < cols; ++c) rhs[rows + c] = x[c];
        scaled = nnls(aug, arows, cols, rhs);
        x = scaled.x;
    }

    NnlsResult result;
    result.converged = scaled.converged;
    result.iterations = scaled.iterations;
    result.x.resize(cols);
    for (int c = 0; c < cols; ++c) result.x[c] = x[c] * gamma;
    double norm = 0.0;
    for (int r = 0; r < rows; ++r) {
        double s = b[r];
        for (int c = 0; c < cols; ++c) s -= a[r * cols + c] * result.x[c];
        norm += s * s;
    }
    result.residual_norm = std::sqrt(norm);
    return result;
}

} // namespace qbrain::linalg
