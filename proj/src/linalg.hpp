#ifndef QBRAIN_LINALG_HPP
#define QBRAIN_LINALG_HPP

#include <vector>

namespace qbrain::linalg {

// Dense row-major helpers for the small systems produced by critical-split
// solving (dimensions bounded by the neuron count).

// Numerical rank via column-pivoted Householder QR.
int qr_rank(std::vector<double> a, int rows, int cols, double rel_tol = 1e-12);

struct NnlsResult {
    std::vector<double> x;
    double residual_norm = 0.0; // euclidean norm of b - A x
    int iterations = 0;
    bool converged = false;
};

// Lawson-Hanson active-set solver for min ||A x - b||_2 subject to x >= 0.
NnlsResult nnls(const std::vector<double>& a, int rows, int cols,
                const std::vector<double>& b, int max_iterations = 0);

// Nonnegative solution of A x ~= b preferring minimum euclidean norm among
// the feasible set. Used for splits whose weight submatrix is rank deficient:
// the equality part is enforced through a heavily weighted augmented system.
NnlsResult nnls_min_norm(const std::vector<double>& a, int rows, int cols,
                         const std::vector<double>& b);

} // namespace qbrain::linalg

#endif
