#include "dicke/liouvillian.hpp"

#include <cmath>
#include <complex>

#include "dicke/provenance.hpp"

namespace dicke {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

int parity_count(const ModelParams& params, int sign) {
    int count = 0;
    for (const auto& label : fock_basis(params))
        if (label.parity(params.two_j) == sign) ++count;
    return count;
}

}  // namespace

std::vector<LiouvilleLabel> liouville_labels(const ModelParams& params) {
    const auto basis = fock_basis(params);
    std::vector<LiouvilleLabel> labels;
    labels.reserve(basis.size() * basis.size());
    for (const auto& ket : basis)
        for (const auto& bra : basis) labels.push_back({ket, bra});
    return labels;
}

int sector_dimension(const ModelParams& params, Sector sector) {
    if (sector == Sector::Full) return static_cast<int>(params.dim_liouville());
    const long plus = parity_count(params, +1);
    const long minus = parity_count(params, -1);
    // P = p_ket * p_bra, so the positive sector pairs equal parities.
    const long dim = sector == Sector::Positive ? plus * plus + minus * minus
                                                : 2 * plus * minus;
    return static_cast<int>(dim);
}

LiouvillianMatrix build_liouvillian(const ModelParams& params, Sector sector, long max_dim) {
    params.validate();
    const long dim = sector_dimension(params, sector);
    if (dim > max_dim)
        throw DimensionError("Liouville dimension " + std::to_string(dim) + " (sector " +
                             to_string(sector) + ") exceeds the guard of " +
                             std::to_string(max_dim));

    const int dh = params.dim_hilbert();
    const auto basis = fock_basis(params);
    const int want = sector == Sector::Positive ? +1 : -1;

    // Map the full flat index k*dh + l onto the sector position, -1 outside.
    std::vector<int> pos(static_cast<std::size_t>(dh) * dh, -1);
    LiouvillianMatrix m;
    m.sector = sector;
    m.params = params;
    m.params_hash = params_hash(params, sector);
    m.labels.reserve(dim);
    for (int k = 0; k < dh; ++k)
        for (int l = 0; l < dh; ++l) {
            const LiouvilleLabel label{basis[k], basis[l]};
            if (sector != Sector::Full && label.parity(params.two_j) != want) continue;
            pos[static_cast<std::size_t>(k) * dh + l] = static_cast<int>(m.labels.size());
            m.labels.push_back(label);
        }

    const Eigen::MatrixXd h = build_hamiltonian(params, dh);
    m.entries = Eigen::MatrixXcd::Zero(dim, dim);

    auto sector_pos = [&](int k, int l) {
        const int p = pos[static_cast<std::size_t>(k) * dh + l];
        if (p < 0)
            throw SymmetryError("Liouvillian coupling leaves the " + to_string(sector) +
                                " parity sector; construction bug");
        return p;
    };

    for (long c = 0; c < dim; ++c) {
        const int k = m.labels[c].ket.flat_index(params.two_j);
        const int l = m.labels[c].bra.flat_index(params.two_j);
        const int nk = m.labels[c].ket.n;
        const int nl = m.labels[c].bra.n;

        // Unitary part, -i(<k'|H|k> d_{l'l} - <l|H|l'> d_{k'k}).
        for (int kp = 0; kp < dh; ++kp)
            if (const double hv = h(kp, k); hv != 0.0) m.entries(sector_pos(kp, l), c) -= kI * hv;
        for (int lp = 0; lp < dh; ++lp)
            if (const double hv = h(l, lp); hv != 0.0) m.entries(sector_pos(k, lp), c) += kI * hv;

        // Dissipator: 2k <k'|a|k><l|a+|l'> jumps both photon indices down by
        // one; the anticommutator contributes -kappa(n_k + n_l) on the diagonal.
        m.entries(c, c) -= params.kappa * (nk + nl);
        if (nk >= 1 && nl >= 1) {
            const int spin = params.two_j + 1;
            m.entries(sector_pos(k - spin, l - spin), c) +=
                2.0 * params.kappa * std::sqrt(double(nk) * nl);
        }
    }
    return m;
}

LiouvillianMatrix parity_sector(const LiouvillianMatrix& full, int sign) {
    if (full.sector != Sector::Full)
        throw SymmetryError("parity_sector expects the full-sector matrix, got sector " +
                            to_string(full.sector));
    if (sign != +1 && sign != -1) throw ConfigError("parity sign must be +1 or -1");

    const int two_j = full.params.two_j;
    std::vector<int> keep;
    keep.reserve(full.labels.size());
    for (std::size_t i = 0; i < full.labels.size(); ++i)
        if (full.labels[i].parity(two_j) == sign) keep.push_back(static_cast<int>(i));

    // The construction is algebraically exact, so any cross-sector leak is a
    // bug, not round-off.
    constexpr double kLeakTolerance = 1e-14;
    for (int col = 0; col < full.dim(); ++col) {
        const int col_parity = full.labels[col].parity(two_j);
        for (int row = 0; row < full.dim(); ++row)
            if (full.labels[row].parity(two_j) != col_parity &&
                std::abs(full.entries(row, col)) > kLeakTolerance)
                throw SymmetryError("nonzero cross-parity entry at (" + std::to_string(row) +
                                    ", " + std::to_string(col) + ")");
    }

    LiouvillianMatrix m;
    m.sector = sign > 0 ? Sector::Positive : Sector::Negative;
    m.params = full.params;
    m.params_hash = params_hash(full.params, m.sector);
    m.entries.resize(keep.size(), keep.size());
    m.labels.reserve(keep.size());
    for (std::size_t a = 0; a < keep.size(); ++a) {
        m.labels.push_back(full.labels[keep[a]]);
        for (std::size_t b = 0; b < keep.size(); ++b)
            m.entries(a, b) = full.entries(keep[a], keep[b]);
    }
    return m;
}

Eigen::VectorXcd apply_liouvillian(const LiouvillianMatrix& m, const Eigen::VectorXcd& v) {
    if (v.size() != m.dim())
        throw DimensionError("operator vector length " + std::to_string(v.size()) +
                             " does not match Liouvillian dimension " + std::to_string(m.dim()));
    return m.entries * v;
}

Eigen::VectorXcd trace_vector(const ModelParams& params, Sector sector) {
    const int dh = params.dim_hilbert();
    const auto basis = fock_basis(params);
    const int want = sector == Sector::Positive ? +1 : -1;

    std::vector<LiouvilleLabel> labels;
    if (sector == Sector::Full) {
        labels = liouville_labels(params);
    } else {
        for (int k = 0; k < dh; ++k)
            for (int l = 0; l < dh; ++l) {
                const LiouvilleLabel label{basis[k], basis[l]};
                if (label.parity(params.two_j) == want) labels.push_back(label);
            }
    }

    Eigen::VectorXcd w = Eigen::VectorXcd::Zero(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i].ket == labels[i].bra) w(i) = 1.0;
    return w;
}

}  // namespace dicke
