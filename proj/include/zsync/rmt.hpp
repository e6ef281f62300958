#pragma once

// Random-matrix view of the Erdos-Renyi noise model. With Z_ii set to its
// expectation (2p-1) alpha, Z = theta t t^T + R where t = z / sqrt(n),
// theta = n alpha (2p-1) and R has zero-mean off-diagonal entries of variance
// alpha (1 - alpha + 4 p alpha - 4 p^2 alpha). The top eigenvector carries
// signal once theta exceeds sigma = sqrt(n * that variance), i.e. for
// p > p* ~ 1/2 + 1/(2 sqrt(alpha n)).

#include <cstdint>
#include <iosfwd>
#include <optional>

#include "zsync/core.hpp"

namespace zsync {

struct NoiseAnalysis {
    std::size_t n = 0;
    double alpha = 0.0;
    double p = 0.0;
    double theta = 0.0;
    double sigma = 0.0;
    double p_star = 0.0;
    bool detectable = false;     // theta > sigma
    bool p_star_attainable = true;  // p_star <= 1
};

/// p* = 1/2 + 1/(2 sqrt(alpha n)).
double threshold(std::size_t n, double alpha);

/// Per-entry variance of R off the diagonal.
double residual_variance(double alpha, double p);

NoiseAnalysis analyze_noise(std::size_t n, double alpha, double p);

struct ResidualStats {
    double mean = 0.0;
    double variance = 0.0;           // empirical, over all off-diagonal pairs
    double analytic_variance = 0.0;
    std::size_t pairs = 0;
};

/// Statistics of the off-diagonal entries of R = Z - alpha (2p-1) z z^T.
ResidualStats rank_one_decomposition_check(const SignedGraph& g, const GroundTruth& truth, double alpha, double p);

struct CorrelationBound {
    bool applicable = false;  // false for p <= 1/2
    double lower_bound = 0.0;  // (lambda1(Z) - lambda1(R)) / theta
    double measured = 0.0;     // <v1, t>^2
    double lambda1_z = 0.0;
    double lambda1_r = 0.0;
    double two_sigma = 0.0;    // semicircle edge, for comparison with lambda1_r
    bool holds = false;        // measured >= lower_bound - 1e-6
};

/// Computes both sides of <v1, t>^2 >= (lambda1(Z) - lambda1(R)) / theta with
/// the diagonal convention Z_ii = (2p-1) alpha and R formed from the realized
/// truth.
CorrelationBound correlation_bound(const SignedGraph& g, const GroundTruth& truth, double alpha, double p);

enum class HeatmapMethod { eig, laplacian };

struct HeatmapSpec {
    std::size_t n = 200;
    std::vector<double> alpha_grid;  // empty: 0.05, 0.10, ..., 1.00
    std::vector<double> eta_grid;    // empty: 20 equally spaced points on [0, 0.5]
    std::size_t trials = 20;
    HeatmapMethod method = HeatmapMethod::eig;
    bool normalized = true;
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
};

struct HeatmapCell {
    double alpha = 0.0;
    double eta = 0.0;
    double tau_median = 0.0;
    double gap_median = 0.0;
    double p_star = 0.0;
    bool detectable = false;
    bool failed = false;  // a solver error in any trial
};

std::vector<double> default_alpha_grid();
std::vector<double> default_eta_grid();

/// Seed of trial `trial` in cell (alpha index, eta index); independent of the
/// method and operator so raw and normalized sweeps see the same instances.
std::uint64_t heatmap_trial_seed(std::uint64_t seed, std::size_t alpha_index, std::size_t eta_index,
                                 std::size_t trial);

/// Cells in alpha-major order.
std::vector<HeatmapCell> heatmap_sweep(const HeatmapSpec& spec);

/// Header `alpha,eta,tau_median,gap_median,p_star,detectable`.
void write_heatmap_csv(std::ostream& out, const std::vector<HeatmapCell>& cells);

double median(std::vector<double> v);

}  // namespace zsync
