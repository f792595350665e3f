#include <doctest.h>

#include <cmath>
#include <complex>

#include "dicke/errors.hpp"
#include "dicke/liouvillian.hpp"
#include "dicke/model.hpp"
#include "oracle.hpp"

using namespace dicke;

namespace {

ModelParams make_params(int two_j, int n_max, double gamma, double kappa) {
    ModelParams p;
    p.two_j = two_j;
    p.n_max = n_max;
    p.gamma = gamma;
    p.kappa = kappa;
    p.omega = 1.1;
    p.omega0 = 0.9;
    return p;
}

}  // namespace

TEST_CASE("tetradic build equals the Kronecker oracle for all small spaces") {
    for (int two_j = 0; two_j <= 5; ++two_j) {
        for (int n_max = 0; n_max <= 11; ++n_max) {
            if ((two_j + 1) * (n_max + 1) > 12) continue;
            const ModelParams p = make_params(two_j, n_max, 0.7, 0.3);
            const LiouvillianMatrix m = build_liouvillian(p, Sector::Full);
            const Eigen::MatrixXcd ref = oracle::liouvillian(p);
            REQUIRE(m.entries.rows() == ref.rows());
            CHECK((m.entries - ref).cwiseAbs().maxCoeff() <= 1e-12);
        }
    }
}

TEST_CASE("labels carry the row-major flat order and superoperator parity") {
    const ModelParams p = make_params(1, 2, 0.5, 1.0);  // half-integer j
    const auto labels = liouville_labels(p);
    const int d = p.dim_hilbert();
    REQUIRE(static_cast<long>(labels.size()) == static_cast<long>(d) * d);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const LiouvilleLabel& l = labels[i];
        CHECK(static_cast<long>(i) ==
              static_cast<long>(l.ket.flat_index(p.two_j)) * d + l.bra.flat_index(p.two_j));
        // P = (-1)^(n' + m'_z - n - m_z): integer exponent even for any j.
        const int expo = l.ket.n - l.bra.n + (l.ket.two_mz - l.bra.two_mz) / 2;
        CHECK(l.parity(p.two_j) == ((expo % 2 + 2) % 2 == 0 ? +1 : -1));
    }
}

TEST_CASE("dissipator elements match hand evaluation") {
    const double kappa = 1.0;
    const ModelParams p = make_params(2, 3, 0.4, kappa);
    const LiouvillianMatrix m = build_liouvillian(p, Sector::Full);
    const int d = p.dim_hilbert();

    // k'=l'=(0,m), k=l=(1,m): only 2*kappa*sqrt(1)*sqrt(1) survives.
    const int f0 = FockLabel{0, -2}.flat_index(p.two_j);
    const int f1 = FockLabel{1, -2}.flat_index(p.two_j);
    const std::complex<double> quad = m.entries(f0 * d + f0, f1 * d + f1);
    CHECK(quad.real() == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(quad.imag() == 0.0);

    // Diagonal at k'=k=l'=l=(n,m): -2 kappa n, no unitary contribution.
    const int f2 = FockLabel{2, 0}.flat_index(p.two_j);
    const std::complex<double> diag = m.entries(f2 * d + f2, f2 * d + f2);
    CHECK(diag.real() == doctest::Approx(-2.0 * kappa * 2).epsilon(1e-14));
    CHECK(diag.imag() == 0.0);
}

TEST_CASE("all couplings off gives a numerically zero generator") {
    // The validator requires strictly positive frequencies, so drive them to
    // the smallest physically admissible scale instead of exactly zero.
    ModelParams p = make_params(2, 2, 0.0, 1e-30);
    p.omega = 1e-30;
    p.omega0 = 1e-30;
    const LiouvillianMatrix m = build_liouvillian(p, Sector::Full);
    CHECK(m.entries.cwiseAbs().maxCoeff() <= 1e-25);
}

TEST_CASE("sector dimensions follow the parity counting") {
    ModelParams p = make_params(2, 60, 0.5, 1.0);
    CHECK(sector_dimension(p, Sector::Positive) == 16745);  // (183^2 + 1) / 2
    CHECK(sector_dimension(p, Sector::Positive) + sector_dimension(p, Sector::Negative) ==
          183 * 183);

    p = make_params(2, 1, 0.5, 1.0);  // odd n_max: both sectors D_H^2 / 2
    CHECK(sector_dimension(p, Sector::Positive) == 18);
    CHECK(sector_dimension(p, Sector::Negative) == 18);

    // Half-integer j: the closed form (D_H^2 +- 1)/2 does not apply, the
    // exact count gives equal halves.
    p = make_params(1, 2, 0.5, 1.0);
    CHECK(sector_dimension(p, Sector::Positive) == 18);
    CHECK(sector_dimension(p, Sector::Negative) == 18);

    for (int two_j : {1, 2, 3}) {
        for (int n_max : {0, 1, 2, 5}) {
            const ModelParams q = make_params(two_j, n_max, 0.5, 1.0);
            CHECK(sector_dimension(q, Sector::Positive) +
                      sector_dimension(q, Sector::Negative) ==
                  q.dim_hilbert() * q.dim_hilbert());
            CHECK(sector_dimension(q, Sector::Full) == q.dim_hilbert() * q.dim_hilbert());
        }
    }
}

TEST_CASE("parity sector extraction equals the direct sector build") {
    const ModelParams p = make_params(2, 3, 0.6, 0.8);
    const LiouvillianMatrix full = build_liouvillian(p, Sector::Full);
    for (const int sign : {+1, -1}) {
        const Sector sector = sign > 0 ? Sector::Positive : Sector::Negative;
        const LiouvillianMatrix cut = parity_sector(full, sign);
        const LiouvillianMatrix direct = build_liouvillian(p, sector);
        REQUIRE(cut.dim() == direct.dim());
        CHECK(cut.dim() == sector_dimension(p, sector));
        CHECK((cut.entries - direct.entries).cwiseAbs().maxCoeff() == 0.0);
        CHECK(cut.sector == sector);
        CHECK(cut.params_hash == direct.params_hash);
        REQUIRE(cut.labels.size() == direct.labels.size());
        for (std::size_t i = 0; i < cut.labels.size(); ++i) {
            CHECK(cut.labels[i] == direct.labels[i]);
            CHECK(cut.labels[i].parity(p.two_j) == sign);
        }
    }
    CHECK_THROWS_AS(parity_sector(full, 0), ConfigError);
    const LiouvillianMatrix pos = build_liouvillian(p, Sector::Positive);
    CHECK_THROWS_AS(parity_sector(pos, +1), SymmetryError);
}

TEST_CASE("cross-parity entries of the full generator vanish exactly") {
    const ModelParams p = make_params(3, 2, 0.9, 0.5);
    const LiouvillianMatrix full = build_liouvillian(p, Sector::Full);
    for (int r = 0; r < full.dim(); ++r)
        for (int c = 0; c < full.dim(); ++c)
            if (full.labels[r].parity(p.two_j) != full.labels[c].parity(p.two_j))
                CHECK(full.entries(r, c) == std::complex<double>(0.0, 0.0));
}

TEST_CASE("trace functional annihilates the generator") {
    for (const Sector sector : {Sector::Full, Sector::Positive}) {
        const ModelParams p = make_params(2, 4, 0.7, 1.3);
        const LiouvillianMatrix m = build_liouvillian(p, sector);
        const Eigen::VectorXcd w = trace_vector(p, sector);
        CHECK(w.cwiseAbs().sum() > 0.0);
        const Eigen::RowVectorXcd row = w.adjoint() * m.entries;
        CHECK(row.cwiseAbs().maxCoeff() <= 1e-12);
    }
    // Negative sector holds no diagonal projectors: trace vector is zero.
    const ModelParams p = make_params(2, 4, 0.7, 1.3);
    CHECK(trace_vector(p, Sector::Negative).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("pure photon decay rate at gamma = 0") {
    const double kappa = 0.9;
    const ModelParams p = make_params(2, 3, 0.0, kappa);
    const LiouvillianMatrix m = build_liouvillian(p, Sector::Full);
    const int d = p.dim_hilbert();

    // rho = |1; m_z=-1><1; m_z=-1|, so <n> = 1 at t = 0.
    const int f = FockLabel{1, -2}.flat_index(p.two_j);
    Eigen::VectorXcd rho = Eigen::VectorXcd::Zero(m.dim());
    rho(static_cast<long>(f) * d + f) = 1.0;

    const Eigen::VectorXcd drho = apply_liouvillian(m, rho);
    std::complex<double> dn_dt = 0.0;
    for (int i = 0; i < m.dim(); ++i)
        if (m.labels[i].ket == m.labels[i].bra)
            dn_dt += static_cast<double>(m.labels[i].ket.n) * drho(i);
    CHECK(dn_dt.real() == doctest::Approx(-2.0 * kappa).epsilon(1e-12));
    CHECK(std::abs(dn_dt.imag()) <= 1e-14);
}

TEST_CASE("apply rejects mismatched vectors") {
    const ModelParams p = make_params(1, 1, 0.5, 1.0);
    const LiouvillianMatrix m = build_liouvillian(p, Sector::Full);
    CHECK_THROWS_AS(apply_liouvillian(m, Eigen::VectorXcd::Zero(m.dim() + 1)), DimensionError);
}

TEST_CASE("liouville dimension guard") {
    const ModelParams p = make_params(2, 300, 0.5, 1.0);
    CHECK_THROWS_AS(build_liouvillian(p, Sector::Full), DimensionError);
}

TEST_CASE("generator is real on dissipator-only positions, imaginary on unitary-only ones") {
    const ModelParams p = make_params(2, 2, 0.8, 0.6);
    const LiouvillianMatrix m = build_liouvillian(p, Sector::Full);
    // The Fock-basis H and a are real.  Off-diagonal positions that move only
    // the ket or only the bra come from -i H and are purely imaginary; those
    // that move both sides come from the 2 kappa a . a^dag quad term and are
    // purely real.  The diagonal mixes both parts and is checked elsewhere.
    for (int r = 0; r < m.dim(); ++r)
        for (int c = 0; c < m.dim(); ++c) {
            if (r == c) continue;
            const std::complex<double> v = m.entries(r, c);
            const bool ket_moved = !(m.labels[r].ket == m.labels[c].ket);
            const bool bra_moved = !(m.labels[r].bra == m.labels[c].bra);
            if (ket_moved != bra_moved) CHECK(v.real() == 0.0);
            if (ket_moved && bra_moved) CHECK(v.imag() == 0.0);
        }
}
