#pragma once

// Semidefinite relaxations of synchronization, solved in low-rank factored
// form Y = V V^T with unit-norm rows (Burer-Monteiro). Each row update
// v_i <- normalize(sum_j C_ij v_j) is exact coordinate ascent on the factored
// objective, so the objective is monotone and diag(Y) = 1 holds exactly.
//
// Four program shapes share one engine:
//   plain        max Tr(Z Y)                    s.t. diag(Y) = 1, Y psd
//   anchored Y   plain plus Y_ij = a_i a_j on anchor pairs
//   anchored XY  [[Y, x], [x^T, 1]] psd with objective Tr(S Y) + 2 x^T U a
//   k-SYNC       plain plus Y_ij = 1 inside every partition block
// Anchor constraints are imposed by substitution: anchor rows are fixed to
// a_i u for a shared unit vector u. The k-SYNC program collapses exactly to a
// k x k program on block-summed weights (Y_ii = Y_jj = Y_ij = 1 forces equal
// rows).

#include <cstdint>
#include <limits>

#include "zsync/core.hpp"
#include "zsync/linalg.hpp"

namespace zsync {

struct SdpOptions {
    std::size_t rank = 0;  // 0 picks ceil(sqrt(2 n)) + 1
    std::size_t restarts = 3;
    double rel_tol = 1e-7;  // relative objective change over `window` sweeps
    std::size_t window = 50;
    std::size_t max_sweeps = 20000;
    std::size_t size_limit = 5000;
    std::uint64_t seed = 0x5d9;
    /// Compute the dual bound Tr(C Y) <= sum y + n lambda_max(C - Diag y).
    bool certify = true;
    /// Throw SdpConvergenceError when max_sweeps is hit.
    bool throw_on_cap = true;
};

/// Symmetric cost with zero diagonal, given by its strict upper triangle.
/// Weights are arbitrary finite reals. `fixed` rows are pinned to sign * u.
struct SdpProblem {
    std::size_t n = 0;
    std::vector<Edge> entries;
    std::map<std::size_t, int> fixed;
};

struct SdpResult {
    /// Row-major n x r factor, rows of unit norm; Gram = V V^T.
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> factor;
    double objective = 0.0;   // Tr(C Y) including constant terms of the shape
    double dual_bound = std::numeric_limits<double>::quiet_NaN();
    double diag_violation = 0.0;        // max |Y_ii - 1|
    double constraint_violation = 0.0;  // max violation of fixed-entry constraints
    double min_gram_eigenvalue = 0.0;
    std::size_t iterations = 0;  // sweeps of the best restart
    bool converged = false;
    SyncSolution rounded;
};

class SdpConvergenceError : public ConvergenceError {
public:
    SdpConvergenceError(const std::string& what, double residual, SdpResult best)
        : ConvergenceError(what, residual), best_(std::move(best)) {}
    const SdpResult& best() const noexcept { return best_; }

private:
    SdpResult best_;
};

/// Raw engine. `rounded` is left empty; objective is Tr(C Y).
SdpResult solve_unit_diag_sdp(const SdpProblem& problem, const SdpOptions& opts = {});

/// Top eigenvector of V V^T restricted to `rows` (all rows when empty),
/// computed through the r x r matrix V^T V. Canonical sign.
linalg::Vector gram_top_eigenvector(const SdpResult& res, const std::vector<std::size_t>& rows = {});

SdpResult sdp_sync(const SignedGraph& g, const SdpOptions& opts = {});

/// Estimates cover all n nodes (anchors keep their values). Sensor signs
/// come from the top eigenvector of the sensor block, aligned by majority
/// vote against the sensor-anchor block.
SdpResult sdp_sync_anchored_Y(const SignedGraph& g, const AnchorSet& anchors, const SdpOptions& opts = {});

/// Sensor estimates are sign(x_i) with x_i = <v_i, u>.
SdpResult sdp_sync_anchored_XY(const SignedGraph& g, const AnchorSet& anchors, const SdpOptions& opts = {});

/// Collapsed k x k solve expanded back to n nodes. `factor` is n x r with
/// identical rows inside each block.
SdpResult sdp_ksync(const SignedGraph& g, const Partition& partition, const SdpOptions& opts = {});

}  // namespace zsync
