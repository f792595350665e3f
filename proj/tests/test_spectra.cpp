#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <random>
#include <vector>

#include "dicke/errors.hpp"
#include "dicke/io.hpp"
#include "dicke/liouvillian.hpp"
#include "dicke/model.hpp"
#include "dicke/spectra.hpp"

using namespace dicke;

namespace {

ModelParams params_j1(int n_max, double gamma) {
    ModelParams p;
    p.two_j = 2;
    p.n_max = n_max;
    p.gamma = gamma;
    return p;
}

std::filesystem::path temp_file(const char* name) {
    const auto dir = std::filesystem::temp_directory_path() / "dicke_spectra_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("free hamiltonian spectrum is the sorted level grid") {
    const ModelParams p = params_j1(2, 0.0);
    const RealSpectrum s = diagonalize_hermitian(build_hamiltonian(p));
    const std::vector<double> expected = {-1, 0, 0, 1, 1, 1, 2, 2, 3};
    REQUIRE(s.dim() == static_cast<int>(expected.size()));
    for (int i = 0; i < s.dim(); ++i)
        CHECK(s.eigenvalues(i) == doctest::Approx(expected[i]).epsilon(1e-12));
}

TEST_CASE("two-level flip matrix") {
    Eigen::MatrixXd m(2, 2);
    m << 0, 1, 1, 0;
    const RealSpectrum s = diagonalize_hermitian(m);
    CHECK(s.eigenvalues(0) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(s.eigenvalues(1) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("hermitian residuals and orthonormality on a random symmetric matrix") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd m(50, 50);
    for (int c = 0; c < 50; ++c)
        for (int r = 0; r < 50; ++r) m(r, c) = gauss(rng);
    m = ((m + m.transpose()) / 2.0).eval();
    const RealSpectrum s = diagonalize_hermitian(m);
    for (int k = 1; k < 50; ++k) CHECK(s.eigenvalues(k) >= s.eigenvalues(k - 1));
    for (int k = 0; k < 50; ++k) {
        const double res =
            (m * s.eigenvectors.col(k) - s.eigenvalues(k) * s.eigenvectors.col(k)).norm();
        CHECK(res <= 1e-9);
    }
    CHECK((s.eigenvectors.transpose() * s.eigenvectors - Eigen::MatrixXd::Identity(50, 50))
              .cwiseAbs()
              .maxCoeff() <= 1e-10);
}

TEST_CASE("ground state energy is truncation-converged at gamma = 0.5") {
    const RealSpectrum a = diagonalize_hermitian(build_hamiltonian(params_j1(40, 0.5)));
    const RealSpectrum b = diagonalize_hermitian(build_hamiltonian(params_j1(60, 0.5)));
    CHECK(std::abs(a.eigenvalues(0) - b.eigenvalues(0)) < 1e-6);
}

TEST_CASE("one by one liouvillian") {
    Eigen::MatrixXcd m(1, 1);
    m(0, 0) = -2.0;
    Eigen::VectorXcd values;
    Eigen::MatrixXcd vectors;
    complex_eig(m, values, &vectors);
    CHECK(values(0) == std::complex<double>(-2.0, 0.0));
    CHECK(std::abs(vectors(0, 0) - 1.0) <= 1e-15);
}

TEST_CASE("triangular spectrum sorted by modulus") {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
    m(0, 0) = {-1.0, 0.0};
    m(0, 1) = {5.0, 0.0};
    m(1, 1) = {-2.0, 1.0};
    Eigen::VectorXcd values;
    complex_eig(m, values, nullptr);
    CHECK(std::abs(values(0) - std::complex<double>(-1.0, 0.0)) <= 1e-13);
    CHECK(std::abs(values(1) - std::complex<double>(-2.0, 1.0)) <= 1e-13);
}

TEST_CASE("equal moduli tie-break by ascending phase") {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(3, 3);
    m(0, 0) = {0.0, 1.0};
    m(1, 1) = {0.0, -1.0};
    m(2, 2) = {1.0, 0.0};
    Eigen::VectorXcd values;
    complex_eig(m, values, nullptr);
    CHECK(std::abs(values(0) - std::complex<double>(0.0, -1.0)) <= 1e-14);
    CHECK(std::abs(values(1) - std::complex<double>(1.0, 0.0)) <= 1e-14);
    CHECK(std::abs(values(2) - std::complex<double>(0.0, 1.0)) <= 1e-14);
}

TEST_CASE("eigenvectors have unit norm and real-positive leading component") {
    Eigen::MatrixXcd m(2, 2);
    m << std::complex<double>(0, 0), std::complex<double>(-1, 0), std::complex<double>(1, 0),
        std::complex<double>(0, 0);
    Eigen::VectorXcd values;
    Eigen::MatrixXcd vectors;
    complex_eig(m, values, &vectors);
    for (int k = 0; k < 2; ++k) {
        CHECK(vectors.col(k).norm() == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(vectors(0, k).imag() == doctest::Approx(0.0).epsilon(1e-13));
        CHECK(vectors(0, k).real() > 0.0);
    }
}

TEST_CASE("liouvillian spectrum invariants at small scale") {
    const ModelParams p = params_j1(10, 0.2);
    const LiouvillianMatrix m = build_liouvillian(p, Sector::Positive);
    const ComplexSpectrum s = diagonalize_liouvillian(m);

    // Modulus-ordered.
    for (int k = 1; k < s.dim(); ++k)
        CHECK(std::abs(s.eigenvalues(k)) >= std::abs(s.eigenvalues(k - 1)) - 1e-15);

    // Dissipative half-plane.
    CHECK(s.eigenvalues.real().maxCoeff() <= 1e-8);

    // Exactly one steady state in the positive sector.
    int nulls = 0;
    for (int k = 0; k < s.dim(); ++k)
        if (std::abs(s.eigenvalues(k)) < 1e-8) ++nulls;
    CHECK(nulls == 1);

    // Trace identity.
    const std::complex<double> tr = m.entries.trace();
    CHECK(std::abs(s.eigenvalues.sum() - tr) <= 1e-6 * std::abs(tr));

    // Residual contract on every retained pair.
    const double bound =
        1e-8 * m.entries.norm() / std::sqrt(static_cast<double>(s.dim()));
    for (int k = 0; k < s.dim(); ++k) {
        const double res =
            (m.entries * s.eigenvectors.col(k) - s.eigenvalues(k) * s.eigenvectors.col(k))
                .norm();
        CHECK(res <= bound);
    }
}

TEST_CASE("full-sector spectrum is conjugation symmetric") {
    const ModelParams p = params_j1(4, 0.8);
    const LiouvillianMatrix m = build_liouvillian(p, Sector::Full);
    const ComplexSpectrum s = diagonalize_liouvillian(m, false);
    std::vector<bool> used(s.dim(), false);
    double worst = 0.0;
    for (int k = 0; k < s.dim(); ++k) {
        const std::complex<double> target = std::conj(s.eigenvalues(k));
        double best = 1e300;
        int arg = -1;
        for (int l = 0; l < s.dim(); ++l) {
            if (used[l]) continue;
            const double d = std::abs(s.eigenvalues(l) - target);
            if (d < best) {
                best = d;
                arg = l;
            }
        }
        used[arg] = true;
        worst = std::max(worst, best);
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("spectrum artifacts round-trip bit-exactly") {
    const ModelParams p = params_j1(2, 0.3);
    const LiouvillianMatrix m = build_liouvillian(p, Sector::Positive);
    const ComplexSpectrum s = diagonalize_liouvillian(m);
    const auto path = temp_file("roundtrip.bin");

    save_spectrum(path, s);
    const ComplexSpectrum r = load_spectrum(path, s.params_hash);
    REQUIRE(r.dim() == s.dim());
    CHECK(r.has_vectors());
    for (int k = 0; k < s.dim(); ++k) CHECK(r.eigenvalues(k) == s.eigenvalues(k));
    CHECK((r.eigenvectors - s.eigenvectors).cwiseAbs().maxCoeff() == 0.0);
    CHECK(r.params_hash == s.params_hash);
    CHECK(r.sector == s.sector);
    REQUIRE(r.labels.size() == s.labels.size());
    for (std::size_t i = 0; i < s.labels.size(); ++i) CHECK(r.labels[i] == s.labels[i]);
    CHECK(r.params.n_max == p.n_max);

    CHECK_THROWS_AS(load_spectrum(path, "0000deadbeef"), ProvenanceError);
}

TEST_CASE("dropping vectors shrinks the artifact to the eigenvalue payload") {
    const ModelParams p = params_j1(2, 0.3);
    const LiouvillianMatrix m = build_liouvillian(p, Sector::Positive);
    const ComplexSpectrum s = diagonalize_liouvillian(m);
    const auto lean = temp_file("lean.bin");
    const auto fat = temp_file("fat.bin");
    save_spectrum(fat, s);
    save_spectrum(lean, s, true);

    const auto lean_size = std::filesystem::file_size(lean);
    const auto fat_size = std::filesystem::file_size(fat);
    const auto dim = static_cast<std::uintmax_t>(s.dim());
    // The JSON headers differ by a few bytes (the has_vectors flag).
    CHECK(fat_size - lean_size >= 16 * dim * dim - 8);
    CHECK(fat_size - lean_size <= 16 * dim * dim + 8);
    CHECK(lean_size < 16 * dim + 16384);  // eigenvalues + JSON header

    const ComplexSpectrum r = load_spectrum(lean, s.params_hash);
    CHECK_FALSE(r.has_vectors());
    for (int k = 0; k < s.dim(); ++k) CHECK(r.eigenvalues(k) == s.eigenvalues(k));
}

TEST_CASE("liouvillian artifacts round-trip with label sidecar") {
    const ModelParams p = params_j1(1, 0.6);
    const LiouvillianMatrix m = build_liouvillian(p, Sector::Full);
    const auto path = temp_file("matrix.bin");
    save_liouvillian(path, m);
    const LiouvillianMatrix r = load_liouvillian(path, m.params_hash);
    CHECK((r.entries - m.entries).cwiseAbs().maxCoeff() == 0.0);
    CHECK(r.sector == m.sector);
    REQUIRE(r.labels.size() == m.labels.size());
    for (std::size_t i = 0; i < m.labels.size(); ++i) CHECK(r.labels[i] == m.labels[i]);
    CHECK_THROWS_AS(load_liouvillian(path, "ffff00001111"), ProvenanceError);

    // A spectrum file is not a matrix file.
    const ComplexSpectrum s = diagonalize_liouvillian(m, false);
    const auto spath = temp_file("kindcheck.bin");
    save_spectrum(spath, s);
    CHECK_THROWS_AS(load_liouvillian(spath, ""), FormatError);
}

TEST_CASE("eigenvalue csv is stable and complete") {
    const ModelParams p = params_j1(1, 0.6);
    const LiouvillianMatrix m = build_liouvillian(p, Sector::Positive);
    const ComplexSpectrum s = diagonalize_liouvillian(m, false);
    const auto path = temp_file("eigen.csv");
    write_eigenvalue_csv(path, s);

    std::FILE* f = std::fopen(path.string().c_str(), "r");
    REQUIRE(f != nullptr);
    char header[128];
    REQUIRE(std::fgets(header, sizeof header, f) != nullptr);
    CHECK(std::string(header) == "k,re,im,abs\n");
    int rows = 0;
    int k;
    double re, im, abs_v;
    while (std::fscanf(f, "%d,%lg,%lg,%lg\n", &k, &re, &im, &abs_v) == 4) {
        CHECK(k == rows);
        CHECK(re == s.eigenvalues(rows).real());
        CHECK(im == s.eigenvalues(rows).imag());
        CHECK(abs_v == std::abs(s.eigenvalues(rows)));
        ++rows;
    }
    std::fclose(f);
    CHECK(rows == s.dim());
}
