#pragma once

// Eigenvector synchronization: normalized (D^-1 Z) and raw Z variants, the
// Laplacian least-squares variant, and spectrum reports.

#include <iosfwd>
#include <optional>

#include "zsync/core.hpp"
#include "zsync/linalg.hpp"

namespace zsync {

/// v -> D^-1 Z v. Eigenpairs are obtained from the similar symmetric matrix
/// D^-1/2 Z D^-1/2 and mapped back with D^-1/2, so the spectrum is real.
class NormalizedOperator {
public:
    /// Throws DegenerateError naming the first node with zero degree.
    explicit NormalizedOperator(const SignedGraph& g);

    std::size_t size() const noexcept { return g_->size(); }
    void apply(const linalg::Vector& x, linalg::Vector& y) const;
    const linalg::SymmetricOperator& symmetric() const noexcept { return sym_; }
    /// D^-1/2 u, rescaled to unit norm.
    linalg::Vector map_back(const linalg::Vector& u) const;

private:
    const SignedGraph* g_;
    linalg::Vector inv_sqrt_;
    linalg::SymmetricOperator sym_;
};

enum class EigenRoute { lanczos, power };

struct SpectralOptions {
    linalg::EigenOptions eigen;
    EigenRoute route = EigenRoute::lanczos;
};

/// Top-eigenvector synchronization. Disconnected graphs are solved per
/// component with independent signs; isolated nodes get score 1.
/// Scores are unit norm per component. Diagnostics: lambda1, lambda2, gap,
/// iterations, residual, components (spectral values from the largest
/// component).
SyncSolution eig_sync(const SignedGraph& g, bool normalized = true, const SpectralOptions& opts = {});

/// Eigenvector of the smallest eigenvalue of D - Z, scaled to squared norm
/// equal to the component size.
SyncSolution laplacian_sync(const SignedGraph& g, const SpectralOptions& opts = {});

struct HistogramBin {
    double left;
    double right;
    std::size_t count;
};

struct SpectrumReport {
    std::vector<double> eigenvalues;  // descending
    double gap_12 = 0.0;
    double gap_23 = 0.0;
    double ratio_32 = 0.0;
    std::optional<std::vector<HistogramBin>> histogram;
};

constexpr std::size_t kHistogramSizeLimit = 2000;

/// Top-r eigenvalues of Z or of D^-1 Z. With histogram_bins set, the full
/// spectrum is computed densely (n <= 2000, else SizeError) and binned over
/// [min, max] with equal widths. Gaps needing missing eigenvalues are NaN.
SpectrumReport spectrum(const SignedGraph& g, std::size_t r, bool normalized,
                        std::optional<std::size_t> histogram_bins = std::nullopt,
                        const linalg::EigenOptions& opts = {});

/// Equal-width histogram of `values`; the last bin is closed on the right.
std::vector<HistogramBin> histogram(const std::vector<double>& values, std::size_t bins);

/// `index,eigenvalue` rows.
void write_spectrum_csv(std::ostream& out, const SpectrumReport& report);
/// `bin_left,bin_right,count` rows.
void write_histogram_csv(std::ostream& out, const std::vector<HistogramBin>& bins);

}  // namespace zsync
