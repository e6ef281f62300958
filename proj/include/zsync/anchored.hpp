#pragma once

// Anchored synchronization as a quadratically constrained quadratic program:
//
//   min  s^T (D_S - S) s - 2 s^T U a    over sensor values s
//
// relaxed to a single norm constraint. The minimizer has the form
// z = (L + lambda I)^-1 U a with L = D_S - S and lambda chosen so the norm
// constraint holds (a secular equation in lambda).

#include <Eigen/SparseCore>

#include "zsync/core.hpp"
#include "zsync/linalg.hpp"

namespace zsync {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Block split of Z into sensors (l) and anchors (h).
struct AnchoredSystem {
    std::size_t n = 0;
    SparseMatrix S;  // l x l sensor-sensor block
    SparseMatrix U;  // l x h sensor-anchor block
    SparseMatrix V;  // h x h anchor-anchor block
    linalg::Vector d_s;  // sum_j |Z_ij| over all neighbours of each sensor
    linalg::Vector a;    // anchor values
    std::vector<std::size_t> sensors;  // solver coordinate -> node id
    std::vector<std::size_t> anchors;  // anchor coordinate -> node id

    std::size_t sensor_count() const noexcept { return sensors.size(); }
    std::size_t anchor_count() const noexcept { return anchors.size(); }
};

/// U a == 0: no sensor sees an anchor, the program carries no sign information.
class DegenerateAnchorError : public Error {
public:
    using Error::Error;
};

/// Throws ParameterError unless 1 <= h < n.
AnchoredSystem build_anchored_system(const SignedGraph& g, const AnchorSet& anchors);

enum class SecularRoute { automatic, dense, iterative };

struct QcqpOptions {
    SecularRoute route = SecularRoute::automatic;
    /// automatic uses the dense eigendecomposition up to this many sensors.
    std::size_t dense_limit = 1500;
    double cg_tol = 1e-12;
    std::uint64_t seed = 0x9c9;
};

/// Result of min ||.|| problems of the form (M + lambda I) z = b, ||z||^2 = t.
struct SecularSolution {
    linalg::Vector z;
    double lambda = 0.0;
    double mu_min = 0.0;       // smallest eigenvalue of M
    double residual = 0.0;     // | ||z||^2 - t |
    bool hard_case = false;    // b had no weight on the lowest mode
    std::size_t iterations = 0;
};

/// Solves the secular equation ||(M + lambda I)^-1 b||^2 = t for the root
/// lambda > -mu_min. When no such root exists the solution is completed
/// along the bottom eigenvector and flagged as the hard case.
SecularSolution solve_secular(const SparseMatrix& m, const linalg::Vector& b, double target,
                              const QcqpOptions& opts = {});

/// Constraint z^T z = l. Estimates cover all n nodes; anchors keep their values.
SyncSolution qcqp_sync_identity(const AnchoredSystem& sys, const QcqpOptions& opts = {});

/// Constraint z^T D_S z = sum of sensor degrees, solved in zbar = D_S^1/2 z.
SyncSolution qcqp_sync_degree(const AnchoredSystem& sys, const QcqpOptions& opts = {});

}  // namespace zsync
