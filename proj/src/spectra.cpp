#include "dicke/spectra.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dicke/errors.hpp"

namespace dicke {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

// Permutation sorting complex values by (|z|, arg z) ascending.  atan2 lands
// in (-pi, pi], which is exactly the tie-break contract.
std::vector<int> modulus_order(const Eigen::VectorXcd& values) {
    std::vector<int> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> mod(values.size()), phase(values.size());
    for (int i = 0; i < values.size(); ++i) {
        mod[i] = std::abs(values(i));
        phase[i] = std::atan2(values(i).imag(), values(i).real());
    }
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (mod[a] != mod[b]) return mod[a] < mod[b];
        if (phase[a] != phase[b]) return phase[a] < phase[b];
        return a < b;
    });
    return order;
}

// Unit 2-norm, then rotate so the first component above the noise floor is
// real and positive.  Tail weights are phase-invariant, but persisted
// coefficient tables should not depend on LAPACK's internal phase choice.
void normalize_column(Eigen::Ref<Eigen::VectorXcd> v) {
    v /= v.norm();
    const double floor = 1e-12 * v.cwiseAbs().maxCoeff();
    for (int i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > floor) {
            v *= std::conj(v(i)) / std::abs(v(i));
            return;
        }
    }
}

// Sort eigenpairs by (|lambda|, phase) and fix eigenvector gauge.  `raw`
// columns are consumed in permuted order.
void sort_eigenpairs(const Eigen::VectorXcd& w, Eigen::MatrixXcd* raw, Eigen::VectorXcd& values,
                     Eigen::MatrixXcd* vectors) {
    const auto order = modulus_order(w);
    const int n = static_cast<int>(w.size());
    values.resize(n);
    if (vectors) vectors->resize(n, n);
    for (int k = 0; k < n; ++k) {
        values(k) = w(order[k]);
        if (vectors) {
            vectors->col(k) = raw->col(order[k]);
            normalize_column(vectors->col(k));
        }
    }
}

// Position of the swapped label |l><k| for each |k><l|, or empty when the
// label list is missing or not closed under the swap (toy inputs).
std::vector<int> hermitian_mates(const LiouvillianMatrix& m) {
    if (static_cast<int>(m.labels.size()) != m.dim() || m.dim() == 0) return {};
    const long dh = static_cast<long>(m.params.two_j + 1) * (m.params.n_max + 1);
    const int two_j = m.params.two_j;
    std::vector<int> pos(static_cast<std::size_t>(dh) * dh, -1);
    for (int i = 0; i < m.dim(); ++i) {
        const long k = m.labels[i].ket.flat_index(two_j);
        const long l = m.labels[i].bra.flat_index(two_j);
        if (k < 0 || k >= dh || l < 0 || l >= dh) return {};
        pos[static_cast<std::size_t>(k) * dh + l] = i;
    }
    std::vector<int> mate(m.dim());
    for (int i = 0; i < m.dim(); ++i) {
        const long k = m.labels[i].ket.flat_index(two_j);
        const long l = m.labels[i].bra.flat_index(two_j);
        const int j = pos[static_cast<std::size_t>(l) * dh + k];
        if (j < 0) return {};
        mate[i] = j;
    }
    return mate;
}

// Rotate a Hermiticity-preserving superoperator into the coordinates where
// Hermitian rho has real coefficients: diagonal labels are fixed, and each
// swap pair {|k><l|, |l><k|} (i < mate) maps to sqrt(2) times the real and
// imaginary parts of the |k><l| coefficient.  In that basis the matrix is
// real; returns false (leaving `r` untouched) when a significant imaginary
// residue shows the input does not commute with the adjoint map.
bool hermitian_real_form(const Eigen::MatrixXcd& a, const std::vector<int>& mate,
                         Eigen::MatrixXd& r) {
    const int n = static_cast<int>(a.rows());
    Eigen::MatrixXcd work = a;

    // work <- a U^H (column pass), then U work (row pass, column-major order).
    for (int c = 0; c < n; ++c) {
        const int mc = mate[c];
        if (mc <= c) continue;
        for (int i = 0; i < n; ++i) {
            const std::complex<double> x = work(i, c), y = work(i, mc);
            work(i, c) = (x + y) * kInvSqrt2;
            work(i, mc) = kI * (y - x) * kInvSqrt2;
        }
    }
    for (int c = 0; c < n; ++c) {
        for (int i = 0; i < n; ++i) {
            const int mi = mate[i];
            if (mi <= i) continue;
            const std::complex<double> x = work(i, c), y = work(mi, c);
            work(i, c) = (x + y) * kInvSqrt2;
            work(mi, c) = kI * (x - y) * kInvSqrt2;
        }
    }

    const double tol = 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff());
    if (work.imag().cwiseAbs().maxCoeff() > tol) return false;
    r = work.real();
    return true;
}

// Eigendecomposition through the real form: dgeev emits conjugate eigenvalue
// pairs that match bit-for-bit, so the spectrum honors the conjugation
// symmetry exactly instead of up to O(eps * cond) noise.  `r` is destroyed.
void real_liouville_eig(Eigen::MatrixXd& r, const std::vector<int>& mate, Eigen::VectorXcd& values,
                        Eigen::MatrixXcd* vectors) {
    const lapack_int n = static_cast<lapack_int>(r.rows());
    Eigen::VectorXd wr(n), wi(n);
    Eigen::MatrixXd vr;
    if (vectors) vr.resize(n, n);

    const lapack_int info =
        LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', vectors ? 'V' : 'N', n, r.data(), n, wr.data(),
                      wi.data(), nullptr, 1, vectors ? vr.data() : nullptr, n);
    if (info != 0) throw SolverError("dgeev failed", info);
    r.resize(0, 0);

    Eigen::VectorXcd w(n);
    for (int k = 0; k < n; ++k) w(k) = {wr(k), wi(k)};

    Eigen::MatrixXcd raw;
    if (vectors) {
        // Unpack dgeev's paired columns, then rotate back to the tetradic
        // basis: x_i = (y_i - i y_mate)/sqrt(2), x_mate = (y_i + i y_mate)/sqrt(2).
        raw.resize(n, n);
        for (int k = 0; k < n; ++k) {
            if (wi(k) > 0.0) {
                raw.col(k) = vr.col(k) + kI * vr.col(k + 1);
                raw.col(k + 1) = vr.col(k) - kI * vr.col(k + 1);
                ++k;
            } else if (wi(k) == 0.0) {
                raw.col(k) = vr.col(k).cast<std::complex<double>>();
            } else {
                throw SolverError("dgeev pair ordering violated", 0);
            }
        }
        vr.resize(0, 0);
        for (int c = 0; c < n; ++c) {
            for (int i = 0; i < n; ++i) {
                const int mi = mate[i];
                if (mi <= i) continue;
                const std::complex<double> y1 = raw(i, c), y2 = raw(mi, c);
                raw(i, c) = (y1 - kI * y2) * kInvSqrt2;
                raw(mi, c) = (y1 + kI * y2) * kInvSqrt2;
            }
        }
    }
    sort_eigenpairs(w, vectors ? &raw : nullptr, values, vectors);
}

}  // namespace

RealSpectrum diagonalize_hermitian(const Eigen::MatrixXd& h) {
    if (h.rows() != h.cols()) throw DimensionError("matrix is not square");
    const lapack_int n = static_cast<lapack_int>(h.rows());

    RealSpectrum spec;
    spec.eigenvectors = h;  // dsyevd overwrites the input with eigenvectors
    spec.eigenvalues.resize(n);
    const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', n,
                                           spec.eigenvectors.data(), n, spec.eigenvalues.data());
    if (info != 0) throw SolverError("dsyevd failed", info);

    const Eigen::MatrixXd residual =
        h * spec.eigenvectors - spec.eigenvectors * spec.eigenvalues.asDiagonal();
    for (int k = 0; k < n; ++k)
        if (residual.col(k).norm() > 1e-9)
            throw SolverError("eigenpair " + std::to_string(k) + " residual " +
                                  std::to_string(residual.col(k).norm()) + " exceeds 1e-9",
                              0);
    return spec;
}

void complex_eig(const Eigen::MatrixXcd& a, Eigen::VectorXcd& values, Eigen::MatrixXcd* vectors) {
    if (a.rows() != a.cols()) throw DimensionError("matrix is not square");
    const lapack_int n = static_cast<lapack_int>(a.rows());

    Eigen::MatrixXcd work = a;  // zgeev destroys its input
    Eigen::VectorXcd w(n);
    Eigen::MatrixXcd vr;
    if (vectors) vr.resize(n, n);

    const lapack_int info = LAPACKE_zgeev(
        LAPACK_COL_MAJOR, 'N', vectors ? 'V' : 'N', n,
        reinterpret_cast<lapack_complex_double*>(work.data()), n,
        reinterpret_cast<lapack_complex_double*>(w.data()), nullptr, 1,
        vectors ? reinterpret_cast<lapack_complex_double*>(vr.data()) : nullptr, n);
    if (info != 0) throw SolverError("zgeev failed", info);

    sort_eigenpairs(w, vectors ? &vr : nullptr, values, vectors);
}

ComplexSpectrum diagonalize_liouvillian(const LiouvillianMatrix& m, bool with_vectors) {
    if (m.dim() > kDefaultMaxLiouvilleDim)
        throw DimensionError("Liouvillian dimension " + std::to_string(m.dim()) +
                             " exceeds the guard of " + std::to_string(kDefaultMaxLiouvilleDim));

    ComplexSpectrum spec;
    spec.sector = m.sector;
    spec.params = m.params;
    spec.labels = m.labels;
    spec.params_hash = m.params_hash;

    // Lindblad generators commute with the adjoint map, so in the basis of
    // Hermitian coefficient combinations the matrix is real and its spectrum
    // is exactly closed under conjugation.  Fall back to the plain complex
    // solver for inputs without that structure.
    const std::vector<int> mate = hermitian_mates(m);
    Eigen::MatrixXd real_form;
    if (!mate.empty() && hermitian_real_form(m.entries, mate, real_form)) {
        real_liouville_eig(real_form, mate, spec.eigenvalues,
                           with_vectors ? &spec.eigenvectors : nullptr);
    } else {
        complex_eig(m.entries, spec.eigenvalues, with_vectors ? &spec.eigenvectors : nullptr);
    }

    if (with_vectors) {
        // Column-blocked residual check so the scratch stays small.
        const double bound = 1e-8 * m.entries.norm() / std::sqrt(double(m.dim()));
        double worst = 0.0;
        constexpr int kBlock = 256;
        for (int c0 = 0; c0 < spec.dim(); c0 += kBlock) {
            const int nc = std::min(kBlock, spec.dim() - c0);
            Eigen::MatrixXcd r = m.entries * spec.eigenvectors.middleCols(c0, nc);
            for (int k = 0; k < nc; ++k) {
                r.col(k) -= spec.eigenvalues(c0 + k) * spec.eigenvectors.col(c0 + k);
                worst = std::max(worst, r.col(k).norm());
            }
        }
        if (worst > bound)
            throw SolverError("worst eigenpair residual " + std::to_string(worst) +
                                  " exceeds the contract " + std::to_string(bound),
                              0);
    }
    return spec;
}

}  // namespace dicke
