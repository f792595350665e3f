#pragma once

#include <utility>
#include <vector>

#include "dicke/spectra.hpp"

namespace dicke {

// Default tolerance for both convergence criteria.
inline constexpr double kDefaultTolerance = 1e-3;

// Outcome of a convergence filter.  The accepted set is always the maximal
// prefix {0..n_converged-1} of the ordered spectrum whose members all pass
// the tail test; states beyond the first failure are discarded even if they
// happen to pass.
struct ConvergenceReport {
    double tolerance = kDefaultTolerance;
    std::vector<double> tail1;  // P1 tail per state; p_{n_max} for the Hamiltonian
    std::vector<double> tail2;  // P2 tail per state; empty for the Hamiltonian
    int n_converged = 0;
    int n_total = 0;

    bool accepted(int k) const { return k < n_converged; }
};

// Quadratic model N_CES = A1 n_max + A2 n_max^2 (no constant term) fitted by
// least squares, plus the truncation-free limit of the converged fraction.
struct FitResult {
    double a1 = 0;
    double a2 = 0;
    double residual = 0;          // RMS misfit
    double asymptotic_ratio = 0;  // 2 A2 / (2j+1)^2
};

// p_n = sum_{m_z} |c_{n,m_z}|^2 for one Hamiltonian eigenvector.
std::vector<double> hamiltonian_photon_distribution(const ModelParams& params,
                                                    const Eigen::VectorXd& state);

// Prefix filter on the energy-ordered spectrum with criterion p_{n_max} <= delta.
ConvergenceReport hamiltonian_converged(const ModelParams& params, const RealSpectrum& spec,
                                        double delta);

// Marginal photon distributions of one Liouvillian eigenvector:
// P1 over the ket (primed) photon index, P2 over the bra photon index.
std::pair<std::vector<double>, std::vector<double>> liouvillian_tail_weights(
    const ModelParams& params, const std::vector<LiouvilleLabel>& labels,
    const Eigen::VectorXcd& state);

// Prefix filter on the |lambda|-ordered spectrum with criterion
// P_{1,n_max} <= Delta and P_{2,n_max} <= Delta.
ConvergenceReport liouvillian_converged(const ComplexSpectrum& spec, double delta);

// Per-eigenvalue drift between two consecutive truncations, after greedy
// nearest-neighbor matching along the modulus-ordered lists.  Diagnostic
// only: for the Liouvillian this criterion fails by design (new eigenvalue
// sets appear at every truncation), which is the reason the tail-weight
// criterion exists.
std::vector<double> eigenvalue_drift(const ComplexSpectrum& a, const ComplexSpectrum& b);
std::vector<double> eigenvalue_drift(const RealSpectrum& a, const RealSpectrum& b);

// Least-squares fit of (n_max, N_CES) samples to the quadratic model.
// Requires at least three samples.
FitResult fit_converged_counts(const std::vector<std::pair<int, int>>& samples, int two_j);

}  // namespace dicke
