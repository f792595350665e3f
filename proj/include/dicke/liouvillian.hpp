#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "dicke/model.hpp"

namespace dicke {

// One basis element |k><l| of Liouville space, identified by the Fock labels
// of the ket and bra factors.  Flat ordering is row-major in (k, l):
// index = k * dim_hilbert + l, matching vec(rho) with rho stored row-major.
struct LiouvilleLabel {
    FockLabel ket;  // |k>
    FockLabel bra;  // <l|

    // Superoperator parity: product of the two Hilbert-space parities.
    int parity(int two_j) const { return ket.parity(two_j) * bra.parity(two_j); }

    bool operator==(const LiouvilleLabel&) const = default;
};

// Dense Liouvillian restricted to one parity sector (or the full space),
// together with the labels that name its rows/columns and the parameters it
// was built from.  `params_hash` keys cache artifacts, see provenance.hpp.
struct LiouvillianMatrix {
    Eigen::MatrixXcd entries;
    Sector sector = Sector::Full;
    std::vector<LiouvilleLabel> labels;
    ModelParams params;
    std::string params_hash;

    int dim() const { return static_cast<int>(entries.rows()); }
};

// All D_H^2 labels in flat order.
std::vector<LiouvilleLabel> liouville_labels(const ModelParams& params);

// Number of Liouville basis states with the given parity.  Counts labels
// directly, so it is exact for both integer and half-integer j.
int sector_dimension(const ModelParams& params, Sector sector);

// Dense Liouvillian L = -i(H (x) I - I (x) H^T) + kappa (2 a (x) conj(a)
// - a^dag a (x) I - I (x) (a^dag a)^T), restricted to `sector`.
// The full-space matrix is block diagonal in superoperator parity; building a
// sector never materializes the full D_H^2 x D_H^2 matrix.  Throws
// DimensionError if the sector dimension exceeds `max_dim`.
LiouvillianMatrix build_liouvillian(const ModelParams& params, Sector sector,
                                    long max_dim = kDefaultMaxLiouvilleDim);

// Extract one parity block from a full-space Liouvillian (sign is +1 or -1).
// Verifies first that no cross-parity entry exceeds 1e-14; a leak means the
// matrix does not commute with the parity superoperator and is reported as a
// SymmetryError.
LiouvillianMatrix parity_sector(const LiouvillianMatrix& full, int sign);

// Act with the sector Liouvillian on a coefficient vector (for residual
// checks and matrix-free experiments).
Eigen::VectorXcd apply_liouvillian(const LiouvillianMatrix& m, const Eigen::VectorXcd& v);

// Coefficients of the trace functional on a sector: w with w^H x = Tr(rho)
// when x holds the coefficients of vec(rho) restricted to that sector.
// Only the positive sector (which contains the diagonal |k><k|) has a
// non-zero trace vector.
Eigen::VectorXcd trace_vector(const ModelParams& params, Sector sector);

}  // namespace dicke
