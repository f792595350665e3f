#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dicke/chaometrics.hpp"
#include "dicke/convergence.hpp"
#include "dicke/liouvillian.hpp"
#include "dicke/spectra.hpp"

namespace dicke {

// Binary artifact container: 8-byte magic, little-endian u64 header length,
// JSON header, then raw doubles.  Matrices are stored row-major; spectra
// store the eigenvalue list first and the (column-major) eigenvector block
// when it was kept.  Loaders verify the magic, the format_version, and, when
// an expected params_hash is supplied, the provenance of the artifact.
void save_liouvillian(const std::filesystem::path& path, const LiouvillianMatrix& m);
LiouvillianMatrix load_liouvillian(const std::filesystem::path& path,
                                   const std::string& expected_hash = "");

void save_spectrum(const std::filesystem::path& path, const ComplexSpectrum& spec,
                   bool drop_vectors = false);
ComplexSpectrum load_spectrum(const std::filesystem::path& path,
                              const std::string& expected_hash = "");

// CSV emitters.  Reals are printed with %.17g (round-trip exact), so equal
// inputs produce byte-identical files.
void write_eigenvalue_csv(const std::filesystem::path& path, const ComplexSpectrum& spec);
void write_convergence_csv(const std::filesystem::path& path, const ComplexSpectrum& spec,
                           const ConvergenceReport& report);
void write_convergence_summary(const std::filesystem::path& path, const ModelParams& params,
                               const ConvergenceReport& report);
void write_window_csv(const std::filesystem::path& path, const WindowScanResult& scan);
void write_histogram_csv(const std::filesystem::path& path, const std::vector<double>& values,
                         int bins);
void write_ratio_csv(const std::filesystem::path& path, const RatioSample& ratios);
void write_calibration_report(const std::filesystem::path& path,
                              const EnsembleCalibration& poisson,
                              const EnsembleCalibration& ginibre, std::uint64_t seed);

}  // namespace dicke
