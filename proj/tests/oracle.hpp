#pragma once

// Independent reference constructions for the tests.  Everything here is
// built from first principles (ladder operators + Kronecker products,
// series expansions) and shares no code with the library implementation.

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <complex>

#include "dicke/model.hpp"

namespace oracle {

// Photon annihilation operator on the flat Fock-spin basis
// i = (two_j+1) n + (two_mz + two_j)/2.
inline Eigen::MatrixXd photon_a(const dicke::ModelParams& p) {
    const int spin = p.two_j + 1, d = p.dim_hilbert();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d, d);
    for (int n = 1; n <= p.n_max; ++n)
        for (int s = 0; s < spin; ++s) a((n - 1) * spin + s, n * spin + s) = std::sqrt(n);
    return a;
}

inline Eigen::MatrixXd spin_jz(const dicke::ModelParams& p) {
    const int spin = p.two_j + 1, d = p.dim_hilbert();
    Eigen::MatrixXd jz = Eigen::MatrixXd::Zero(d, d);
    for (int n = 0; n <= p.n_max; ++n)
        for (int s = 0; s < spin; ++s) jz(n * spin + s, n * spin + s) = (2 * s - p.two_j) / 2.0;
    return jz;
}

inline Eigen::MatrixXd spin_jplus(const dicke::ModelParams& p) {
    const int spin = p.two_j + 1, d = p.dim_hilbert();
    const double j = p.two_j / 2.0;
    Eigen::MatrixXd jp = Eigen::MatrixXd::Zero(d, d);
    for (int n = 0; n <= p.n_max; ++n)
        for (int s = 0; s + 1 < spin; ++s) {
            const double mz = s - j;
            jp(n * spin + s + 1, n * spin + s) = std::sqrt(j * (j + 1) - mz * (mz + 1));
        }
    return jp;
}

inline Eigen::MatrixXd hamiltonian(const dicke::ModelParams& p) {
    const Eigen::MatrixXd a = photon_a(p);
    const Eigen::MatrixXd jp = spin_jplus(p);
    const Eigen::MatrixXd x = a + a.transpose();
    const Eigen::MatrixXd sx = jp + jp.transpose();
    const double g = p.two_j > 0 ? p.gamma / std::sqrt(static_cast<double>(p.two_j)) : 0.0;
    return p.omega * (a.transpose() * a) + p.omega0 * spin_jz(p) + g * (x * sx);
}

// Full tetradic Liouvillian via Kronecker products in the row-major
// vectorization |k><l| -> k * dim_hilbert + l, where vec(A rho B) =
// (A (x) B^T) vec(rho).
inline Eigen::MatrixXcd liouvillian(const dicke::ModelParams& p) {
    const std::complex<double> im(0.0, 1.0);
    const Eigen::MatrixXd h = hamiltonian(p);
    const Eigen::MatrixXd a = photon_a(p);
    const Eigen::MatrixXd num = a.transpose() * a;
    const int d = p.dim_hilbert();
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);

    Eigen::MatrixXd unitary_re = Eigen::kroneckerProduct(h, id).eval();
    unitary_re -= Eigen::kroneckerProduct(id, h.transpose()).eval();

    // 2 a rho a^dag -> 2 a (x) (a^dag)^T, and (a^dag)^T = a for the real
    // ladder operator.
    Eigen::MatrixXd dissip = 2.0 * Eigen::kroneckerProduct(a, a).eval();
    dissip -= Eigen::kroneckerProduct(num, id).eval();
    dissip -= Eigen::kroneckerProduct(id, num.transpose()).eval();

    return (-im) * unitary_re.cast<std::complex<double>>() +
           p.kappa * dissip.cast<std::complex<double>>();
}

// Regularized upper incomplete gamma Q(k+1, x) = e^{-x} sum_{m<=k} x^m / m!.
inline double upper_q(int k, double x) {
    double term = std::exp(-x), sum = term;
    for (int m = 1; m <= k; ++m) {
        term *= x / m;
        sum += term;
    }
    return std::min(sum, 1.0);
}

// Closed-form GinUE spacing CDF: F(s) = 1 - prod_{k>=1} Q(k+1, s^2).
// The product is taken far past k ~ s^2, where 1 - Q vanishes
// super-exponentially.
inline double ginue_cdf_product(double s) {
    if (s <= 0.0) return 0.0;
    const double x = s * s;
    const int kmax = 400 + static_cast<int>(3 * x);
    double log_prod = 0.0;
    for (int k = 1; k <= kmax; ++k) log_prod += std::log(upper_q(k, x));
    return 1.0 - std::exp(log_prod);
}

}  // namespace oracle
