#pragma once

// Symmetric eigensolvers used by the spectral, SDP and analysis modules.
//
// The default route is Lanczos with full reorthogonalization and explicit
// restarts; a shifted power iteration is kept as an independent route.
// Operators are matrix-free: only y = A x is needed.

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "zsync/core.hpp"

namespace zsync::linalg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct SymmetricOperator {
    std::size_t n = 0;
    std::function<void(const Vector&, Vector&)> apply;
    /// Upper bound on the spectral radius (e.g. max absolute row sum).
    double norm_bound = 1.0;
};

struct EigenOptions {
    /// Convergence when ||A v - lambda v|| < tol for every requested pair.
    double tol = 1e-8;
    /// Krylov basis cap per restart; 0 picks min(n, 500).
    std::size_t max_basis = 0;
    std::size_t max_restarts = 40;
    std::uint64_t seed = 0x5eed;
    /// Problems at most this size are solved densely.
    std::size_t dense_threshold = 48;
    /// Iteration cap for power_iteration; 0 means 10 n log n.
    std::size_t max_iterations = 0;
};

/// Eigenpairs sorted by descending eigenvalue. Vectors have unit norm and
/// canonical sign (largest-magnitude entry positive).
struct EigenResult {
    std::vector<double> values;
    std::vector<Vector> vectors;
    std::size_t iterations = 0;  // operator applications
    double residual = 0.0;       // max ||A v - lambda v|| over returned pairs
    bool converged = false;
};

/// Largest r eigenpairs. Throws ConvergenceError when restarts are exhausted.
EigenResult top_eigenpairs(const SymmetricOperator& op, std::size_t r, const EigenOptions& opts = {});

/// Largest eigenpair by power iteration on A + cI with c = op.norm_bound.
EigenResult power_iteration(const SymmetricOperator& op, const EigenOptions& opts = {});

/// All eigenvalues (descending) of the dense symmetric matrix.
std::vector<double> dense_spectrum(const Matrix& a);

Matrix to_dense(const SymmetricOperator& op);

/// Flip v so that its largest-magnitude entry (lowest index on ties) is positive.
void canonical_sign(Vector& v);

/// y = Z x.
SymmetricOperator adjacency_operator(const SignedGraph& g);

/// y = D^{-1/2} Z D^{-1/2} x. Throws DegenerateError on an isolated node.
SymmetricOperator normalized_adjacency_operator(const SignedGraph& g);

/// y = c x - (D - Z) x with c = max_i 2 D_ii, so the top eigenpair of the
/// result is the bottom eigenpair of the Laplacian D - Z.
SymmetricOperator shifted_laplacian_operator(const SignedGraph& g, double* shift = nullptr);

Matrix dense_adjacency(const SignedGraph& g);

}  // namespace zsync::linalg
