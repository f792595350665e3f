#include "dicke/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "dicke/errors.hpp"

namespace dicke {

namespace {

std::vector<double> drift_impl(const std::vector<std::complex<double>>& a,
                               const std::vector<std::complex<double>>& b) {
    std::vector<char> used(b.size(), 0);
    std::vector<double> drift;
    drift.reserve(a.size());
    for (const auto& za : a) {
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < b.size(); ++i) {
            if (used[i]) continue;
            if (const double d = std::abs(b[i] - za); d < best_d) {
                best_d = d;
                best = static_cast<int>(i);
            }
        }
        if (best < 0) throw DimensionError("drift matching ran out of partner eigenvalues");
        used[best] = 1;
        drift.push_back(best_d);
    }
    return drift;
}

}  // namespace

std::vector<double> hamiltonian_photon_distribution(const ModelParams& params,
                                                    const Eigen::VectorXd& state) {
    if (state.size() != params.dim_hilbert())
        throw DimensionError("eigenvector length does not match the Fock basis");
    std::vector<double> p(params.n_max + 1, 0.0);
    const int spin = params.two_j + 1;
    for (int i = 0; i < state.size(); ++i) p[i / spin] += state(i) * state(i);
    return p;
}

ConvergenceReport hamiltonian_converged(const ModelParams& params, const RealSpectrum& spec,
                                        double delta) {
    if (spec.eigenvectors.size() == 0)
        throw DependencyError("convergence filtering needs eigenvectors; re-run the solve");

    ConvergenceReport report;
    report.tolerance = delta;
    report.n_total = spec.dim();
    report.tail1.reserve(spec.dim());
    for (int k = 0; k < spec.dim(); ++k) {
        const auto p = hamiltonian_photon_distribution(params, spec.eigenvectors.col(k));
        report.tail1.push_back(p[params.n_max]);
    }
    while (report.n_converged < report.n_total &&
           report.tail1[report.n_converged] <= delta)
        ++report.n_converged;
    return report;
}

std::pair<std::vector<double>, std::vector<double>> liouvillian_tail_weights(
    const ModelParams& params, const std::vector<LiouvilleLabel>& labels,
    const Eigen::VectorXcd& state) {
    if (static_cast<std::size_t>(state.size()) != labels.size())
        throw DimensionError("eigenvector length does not match the label map");
    std::vector<double> p1(params.n_max + 1, 0.0), p2(params.n_max + 1, 0.0);
    for (int i = 0; i < state.size(); ++i) {
        const double w = std::norm(state(i));
        p1[labels[i].ket.n] += w;
        p2[labels[i].bra.n] += w;
    }
    return {p1, p2};
}

ConvergenceReport liouvillian_converged(const ComplexSpectrum& spec, double delta) {
    if (!spec.has_vectors())
        throw DependencyError("convergence filtering needs eigenvectors; re-run the solve");

    ConvergenceReport report;
    report.tolerance = delta;
    report.n_total = spec.dim();
    report.tail1.reserve(spec.dim());
    report.tail2.reserve(spec.dim());
    for (int k = 0; k < spec.dim(); ++k) {
        const auto [p1, p2] =
            liouvillian_tail_weights(spec.params, spec.labels, spec.eigenvectors.col(k));
        report.tail1.push_back(p1[spec.params.n_max]);
        report.tail2.push_back(p2[spec.params.n_max]);
    }
    while (report.n_converged < report.n_total &&
           report.tail1[report.n_converged] <= delta && report.tail2[report.n_converged] <= delta)
        ++report.n_converged;
    return report;
}

std::vector<double> eigenvalue_drift(const ComplexSpectrum& a, const ComplexSpectrum& b) {
    if (a.sector != b.sector)
        throw ConfigError("drift comparison across different parity sectors");
    std::vector<std::complex<double>> va(a.eigenvalues.data(), a.eigenvalues.data() + a.dim());
    std::vector<std::complex<double>> vb(b.eigenvalues.data(), b.eigenvalues.data() + b.dim());
    return drift_impl(va, vb);
}

std::vector<double> eigenvalue_drift(const RealSpectrum& a, const RealSpectrum& b) {
    std::vector<std::complex<double>> va(a.eigenvalues.data(), a.eigenvalues.data() + a.dim());
    std::vector<std::complex<double>> vb(b.eigenvalues.data(), b.eigenvalues.data() + b.dim());
    return drift_impl(va, vb);
}

FitResult fit_converged_counts(const std::vector<std::pair<int, int>>& samples, int two_j) {
    if (samples.size() < 3)
        throw ConfigError("quadratic fit needs at least three (n_max, N_CES) samples");

    double s22 = 0, s23 = 0, s24 = 0, b1 = 0, b2 = 0;
    for (const auto& [n, count] : samples) {
        const double x = n;
        s22 += x * x;
        s23 += x * x * x;
        s24 += x * x * x * x;
        b1 += x * count;
        b2 += x * x * count;
    }
    const double det = s22 * s24 - s23 * s23;
    if (std::abs(det) < 1e-12 * s22 * s24)
        throw ConfigError("singular normal equations in the quadratic fit");

    FitResult fit;
    fit.a1 = (s24 * b1 - s23 * b2) / det;
    fit.a2 = (s22 * b2 - s23 * b1) / det;
    double ss = 0;
    for (const auto& [n, count] : samples) {
        const double r = count - fit.a1 * n - fit.a2 * n * n;
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / samples.size());
    const double multiplet = two_j + 1;
    fit.asymptotic_ratio = 2.0 * fit.a2 / (multiplet * multiplet);
    return fit;
}

}  // namespace dicke
