#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "dicke/liouvillian.hpp"
#include "dicke/model.hpp"

namespace dicke {

// Full eigendecomposition of a real symmetric matrix, ascending eigenvalues.
struct RealSpectrum {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;  // column k pairs with eigenvalues(k)

    int dim() const { return static_cast<int>(eigenvalues.size()); }
};

// Full eigendecomposition of a Liouvillian sector, sorted by non-decreasing
// |lambda| with ties broken by ascending phase angle in (-pi, pi].  Every
// eigenvector has unit 2-norm and its first nonzero component made
// real-positive, so coefficient tables are reproducible bit for bit.
struct ComplexSpectrum {
    Eigen::VectorXcd eigenvalues;
    Eigen::MatrixXcd eigenvectors;  // 0 x 0 when vectors were dropped
    Sector sector = Sector::Full;
    ModelParams params;
    std::vector<LiouvilleLabel> labels;
    std::string params_hash;

    int dim() const { return static_cast<int>(eigenvalues.size()); }
    bool has_vectors() const { return eigenvectors.size() > 0; }
};

// Dense symmetric solve (LAPACK divide and conquer).  Enforces the
// per-pair reconstruction residual ||H v - E v||_2 <= 1e-9.
RealSpectrum diagonalize_hermitian(const Eigen::MatrixXd& h);

// Dense non-Hermitian solve of an arbitrary complex matrix; sorted as in
// ComplexSpectrum.  No residual policy is applied here.
void complex_eig(const Eigen::MatrixXcd& a, Eigen::VectorXcd& values,
                 Eigen::MatrixXcd* vectors);

// Full solve of a Liouvillian sector.  With vectors, enforces the residual
// contract ||L v - lambda v||_2 <= 1e-8 * ||L||_F / sqrt(dim) per pair.
ComplexSpectrum diagonalize_liouvillian(const LiouvillianMatrix& m, bool with_vectors = true);

}  // namespace dicke
