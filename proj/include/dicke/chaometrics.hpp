#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace dicke {

// Rejection threshold of the Anderson-Darling test at 95% confidence.
inline constexpr double kADThreshold = 2.5;

// ---------------------------------------------------------------------------
// Reference nearest-neighbor spacing laws.
//
// 2D Poisson (uncorrelated points in the plane, unit mean spacing):
//   P(s) = (pi/2) s exp(-pi s^2 / 4).
// GinUE (bulk of the Ginibre unitary ensemble):
//   P(s) = [prod_{k>=1} Gamma(1+k, s^2)/k!] * sum_{k>=1} 2 s^{2k+1} e^{-s^2} / Gamma(1+k, s^2),
// whose mean is s_bar ~ 1.1429; the rescaled law P~(s) = s_bar P(s_bar s)
// has unit mean and is the one physical spacings are tested against.
// ---------------------------------------------------------------------------
double p_2dp(double s);
double cdf_2dp(double s);
double quantile_2dp(double u);

double p_ginue(double s);
double cdf_ginue(double s);
double ginue_mean_spacing();
double p_ginue_rescaled(double s);
double cdf_ginue_rescaled(double s);
double quantile_ginue_rescaled(double u);

// ---------------------------------------------------------------------------
// Nearest neighbors in the complex plane.
// ---------------------------------------------------------------------------
struct NeighborSet {
    std::vector<std::complex<double>> points;  // input after duplicate collapse
    std::vector<int> source_index;             // original position of each survivor
    std::vector<int> nn1;                      // index of the nearest neighbor
    std::vector<double> d1;                    // its Euclidean distance
    std::vector<int> nn2;                      // second nearest (when requested)
    std::vector<double> d2;
    int duplicates_collapsed = 0;
};

// Exact k-nearest lookup (k = neighbor_order in {1, 2}); ties resolved by the
// lower point index.  The grid-accelerated path and the brute-force reference
// select identical indices on every input.
NeighborSet nearest_spacings(const std::vector<std::complex<double>>& points,
                             int neighbor_order = 1);
NeighborSet nearest_spacings_brute(const std::vector<std::complex<double>>& points,
                                   int neighbor_order = 1);

// ---------------------------------------------------------------------------
// Gaussian-broadened unfolding.  The local density
//   nu_a(phi_k) = (2 pi sigma^2 N)^{-1} sum_l exp(-|phi_k - phi_l|^2 / 2 sigma^2)
// (self-term included) with sigma = 4.5 S turns raw spacings s_k into
// s~_k = sqrt(nu_a(phi_k)) s_k / S~, which have unit mean by construction.
// ---------------------------------------------------------------------------
struct UnfoldedSpacings {
    std::vector<double> raw;            // s_k at the evaluation points
    double mean_raw = 0;                // S
    double sigma = 0;                   // 4.5 S
    std::vector<double> local_density;  // nu_a at the evaluation points
    std::vector<double> scaled;         // s~_k
    double scale_norm = 0;              // S~
    std::vector<int> eval_index;        // into the deduplicated cloud
    int duplicates_collapsed = 0;
};

UnfoldedSpacings unfold(const std::vector<std::complex<double>>& points);

// Same, but statistics are reported only where eval_mask is true (e.g. the
// bulk of a synthetic ensemble).  Neighbor search and the kernel density
// always see the whole cloud, so the mask never creates artificial edges.
UnfoldedSpacings unfold(const std::vector<std::complex<double>>& points,
                        const std::vector<char>& eval_mask);

// ---------------------------------------------------------------------------
// Anderson-Darling goodness of fit.
// ---------------------------------------------------------------------------
struct ADResult {
    double a2 = 0;
    int n = 0;
    std::string hypothesis;
    bool reject = false;  // a2 > kADThreshold
    bool clamped = false; // some F value hit the log-safety clamp
};

ADResult anderson_darling(std::vector<double> sample,
                          const std::function<double(double)>& cdf, std::string hypothesis);
ADResult anderson_darling_2dp(std::vector<double> sample);
ADResult anderson_darling_ginue(std::vector<double> sample);  // rescaled law

// ---------------------------------------------------------------------------
// Complex spacing ratios Z_k = (phi_k^1N - phi_k) / (phi_k^2N - phi_k).
// Reference values: <r> = 2/3 (2DP) vs 0.74 (GinUE); -<cos theta> = 0 vs 0.24.
// ---------------------------------------------------------------------------
struct RatioSample {
    std::vector<std::complex<double>> z;
    double mean_r = 0;
    double mean_neg_cos = 0;
    int degenerate_excluded = 0;
};

RatioSample complex_ratios(const std::vector<std::complex<double>>& points);
RatioSample complex_ratios(const std::vector<std::complex<double>>& points,
                           const std::vector<char>& eval_mask);

// ---------------------------------------------------------------------------
// Moving-window scan over a modulus-ordered eigenvalue list (converged
// prefix only).  Each window is unfolded with its own sigma and scale but
// with neighbor search and kernel density over the whole list (window cuts
// are analysis artifacts, not spectral edges), tested against both laws,
// and summarized by its spacing ratios.
// ---------------------------------------------------------------------------
struct WindowStats {
    int first = 0, last = 0;  // inclusive index range in the ordered input
    double mean_abs = 0;
    double a2_2dp = 0;
    double a2_ginue = 0;
    double mean_r = 0;
    double mean_neg_cos = 0;
    int n = 0;  // spacings entering the tests
};

struct WindowScanResult {
    int window_size = 0;
    int step = 0;  // 0 means a single window at the start
    std::vector<WindowStats> windows;
};

WindowScanResult window_scan(const std::vector<std::complex<double>>& ordered,
                             int window_size, int step);

// ---------------------------------------------------------------------------
// Synthetic calibration ensembles.
// ---------------------------------------------------------------------------

// Eigenvalues of `count` independent n x n matrices with i.i.d. standard
// complex Gaussian entries, concatenated.
std::vector<std::complex<double>> sample_ginibre(int n, int count, std::uint64_t seed);

// n_points i.i.d. uniform points in the unit disk.
std::vector<std::complex<double>> sample_poisson_disk(int n_points, std::uint64_t seed);

// Bulk of a Ginibre cloud: |z| < 0.8 sqrt(n).  Interior of the unit disk:
// |z| <= radius.  Both are evaluation masks for unfold/complex_ratios.
std::vector<char> ginibre_bulk_mask(const std::vector<std::complex<double>>& ev, int n);
std::vector<char> disk_interior_mask(const std::vector<std::complex<double>>& points,
                                     double radius = 0.9);

// Level-repulsion exponent: weighted log-log fit of the spacing density over
// the smallest decile.  beta = 1 tags 2DP, beta = 3 tags GinUE.
struct PowerLawFit {
    double beta = 0;
    double stderr_ = 0;
    bool degenerate = false;
};

PowerLawFit fit_small_s_exponent(std::vector<double> spacings);

// One ensemble calibration: `trials` independent clouds, each unfolded and
// AD-tested against its reference law; ratio statistics pooled over trials.
struct EnsembleCalibration {
    std::string ensemble;
    int trials = 0;
    int ad_passes = 0;
    std::vector<double> a2;  // per trial
    double mean_r = 0;
    double mean_neg_cos = 0;
};

EnsembleCalibration calibrate_poisson(int n_points, int trials, std::uint64_t seed);
EnsembleCalibration calibrate_ginibre(int n, int trials, std::uint64_t seed);

}  // namespace dicke
