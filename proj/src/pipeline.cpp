#include "dicke/pipeline.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <set>
#include <string>

#include "dicke/chaometrics.hpp"
#include "dicke/convergence.hpp"
#include "dicke/errors.hpp"
#include "dicke/io.hpp"
#include "dicke/liouvillian.hpp"
#include "dicke/provenance.hpp"
#include "dicke/spectra.hpp"

namespace dicke {

namespace fs = std::filesystem;

namespace {

// Advisory whole-directory lock so concurrent invocations sharing an output
// directory serialize instead of interleaving half-written artifacts.
class DirLock {
  public:
    explicit DirLock(const fs::path& dir) {
        const fs::path lock_path = dir / ".lock";
        fd_ = ::open(lock_path.c_str(), O_CREAT | O_RDWR | O_CLOEXEC, 0644);
        if (fd_ < 0 || ::flock(fd_, LOCK_EX) != 0) {
            if (fd_ >= 0) ::close(fd_);
            throw ConfigError("cannot lock output directory " + dir.string());
        }
    }
    ~DirLock() {
        ::flock(fd_, LOCK_UN);
        ::close(fd_);
    }
    DirLock(const DirLock&) = delete;
    DirLock& operator=(const DirLock&) = delete;

  private:
    int fd_ = -1;
};

std::string hash_tag(const RunConfig& config) {
    return params_hash(config.model, config.sector).substr(0, 12);
}

fs::path prepared_dir(const RunConfig& config) {
    fs::create_directories(config.output_dir);
    return config.output_dir;
}

// Spectrum artifact with provenance check; missing files point back at the
// stage that produces them.
ComplexSpectrum load_spectrum_or_fail(const RunConfig& config) {
    const fs::path path = spectrum_path(config);
    if (!fs::exists(path)) {
        throw DependencyError("no spectrum artifact at " + path.string() +
                              "; run 'diag' first");
    }
    return load_spectrum(path, params_hash(config.model, config.sector));
}

}  // namespace

void RunConfig::validate() const {
    model.validate();
    if (window_size < 50) throw ConfigError("window_size must be at least 50");
    if (!(delta > 0.0 && delta <= 1.0)) throw ConfigError("delta must lie in (0, 1]");
    if (window_step < -1) throw ConfigError("window_step must be -1, 0, or positive");
    if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
    static const std::set<std::string> known = {
        "omega", "omega0", "gamma",       "kappa",       "two_j",      "n_max",    "sector",
        "delta", "seed",   "window_size", "window_step", "output_dir", "use_cache"};
    for (const auto& item : j.items()) {
        if (!known.count(item.key())) throw ConfigError("unknown config key '" + item.key() + "'");
    }
    try {
        RunConfig c;
        c.model = ModelParams::from_json(j);
        if (j.contains("sector")) c.sector = sector_from_string(j.at("sector").get<std::string>());
        c.delta = j.value("delta", c.delta);
        c.window_size = j.value("window_size", c.window_size);
        c.window_step = j.value("window_step", c.window_step);
        c.seed = j.value("seed", c.seed);
        if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
        c.use_cache = j.value("use_cache", c.use_cache);
        c.validate();
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad run configuration: ") + e.what());
    }
}

nlohmann::json RunConfig::to_json() const {
    nlohmann::json j = model.to_json();
    j["sector"] = to_string(sector);
    j["delta"] = delta;
    j["window_size"] = window_size;
    j["window_step"] = window_step;
    j["seed"] = seed;
    j["output_dir"] = output_dir.string();
    j["use_cache"] = use_cache;
    return j;
}

RunConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("cannot parse config file " + path.string() + ": " + e.what());
    }
    return RunConfig::from_json(j);
}

fs::path liouvillian_path(const RunConfig& config) {
    return config.output_dir / ("liouvillian_" + hash_tag(config) + ".bin");
}

fs::path spectrum_path(const RunConfig& config) {
    return config.output_dir / ("spectrum_" + hash_tag(config) + ".bin");
}

fs::path eigenvalue_csv_path(const RunConfig& config) {
    return config.output_dir / ("eigenvalues_" + hash_tag(config) + ".csv");
}

fs::path convergence_csv_path(const RunConfig& config) {
    return config.output_dir / ("convergence_" + hash_tag(config) + ".csv");
}

fs::path convergence_summary_path(const RunConfig& config) {
    return config.output_dir / ("convergence_" + hash_tag(config) + ".json");
}

fs::path window_csv_path(const RunConfig& config) {
    return config.output_dir / ("windows_" + hash_tag(config) + ".csv");
}

fs::path calibration_report_path(const RunConfig& config) {
    return config.output_dir / ("calibration_" + std::to_string(config.seed) + ".json");
}

void cmd_build(const RunConfig& config) {
    config.validate();
    DirLock lock(prepared_dir(config));
    const fs::path path = liouvillian_path(config);
    if (config.use_cache && fs::exists(path)) {
        std::fprintf(stderr, "[build] cache hit: %s\n", path.string().c_str());
        return;
    }
    const LiouvillianMatrix m = build_liouvillian(config.model, config.sector);
    save_liouvillian(path, m);
    std::fprintf(stderr, "[build] wrote %s (dim %d)\n", path.string().c_str(), m.dim());
}

void cmd_diag(const RunConfig& config) {
    config.validate();
    DirLock lock(prepared_dir(config));
    const fs::path spath = spectrum_path(config);
    const std::string hash = params_hash(config.model, config.sector);
    if (config.use_cache && fs::exists(spath)) {
        try {
            const ComplexSpectrum cached = load_spectrum(spath, hash);
            std::fprintf(stderr, "[diag] cache hit: %s\n", spath.string().c_str());
            write_eigenvalue_csv(eigenvalue_csv_path(config), cached);
            return;
        } catch (const FormatError&) {
            std::fprintf(stderr, "[diag] stale spectrum artifact, recomputing\n");
        } catch (const ProvenanceError&) {
            std::fprintf(stderr, "[diag] stale spectrum artifact, recomputing\n");
        }
    }
    const fs::path mpath = liouvillian_path(config);
    if (!fs::exists(mpath)) {
        throw DependencyError("no Liouvillian artifact at " + mpath.string() +
                              "; run 'build' first");
    }
    const LiouvillianMatrix m = load_liouvillian(mpath, hash);
    const ComplexSpectrum spec = diagonalize_liouvillian(m);
    save_spectrum(spath, spec);
    write_eigenvalue_csv(eigenvalue_csv_path(config), spec);
    std::fprintf(stderr, "[diag] wrote %s (dim %d)\n", spath.string().c_str(), spec.dim());
}

void cmd_converge(const RunConfig& config) {
    config.validate();
    DirLock lock(prepared_dir(config));
    const ComplexSpectrum spec = load_spectrum_or_fail(config);
    if (!spec.has_vectors()) {
        throw DependencyError("spectrum artifact lacks eigenvectors; rerun 'diag'");
    }
    const ConvergenceReport report = liouvillian_converged(spec, config.delta);
    write_convergence_csv(convergence_csv_path(config), spec, report);
    write_convergence_summary(convergence_summary_path(config), config.model, report);
    std::fprintf(stderr, "[converge] %d of %d states converged (delta %g)\n",
                 report.n_converged, report.n_total, config.delta);
}

void cmd_scan(const RunConfig& config) {
    config.validate();
    DirLock lock(prepared_dir(config));
    const ComplexSpectrum spec = load_spectrum_or_fail(config);
    if (!spec.has_vectors()) {
        throw DependencyError("spectrum artifact lacks eigenvectors; rerun 'diag'");
    }
    const ConvergenceReport report = liouvillian_converged(spec, config.delta);
    std::vector<std::complex<double>> prefix(spec.eigenvalues.data(),
                                             spec.eigenvalues.data() + report.n_converged);
    const WindowScanResult scan = window_scan(prefix, config.window_size, config.effective_step());
    write_window_csv(window_csv_path(config), scan);
    std::fprintf(stderr, "[scan] %zu windows of %d over %d converged states\n",
                 scan.windows.size(), config.window_size, report.n_converged);
}

void cmd_calibrate(const RunConfig& config) {
    config.validate();
    DirLock lock(prepared_dir(config));
    const EnsembleCalibration poisson =
        calibrate_poisson(kCalibrationPoissonPoints, kCalibrationTrials, config.seed);
    const EnsembleCalibration ginibre =
        calibrate_ginibre(kCalibrationGinibreSize, kCalibrationTrials, config.seed);
    write_calibration_report(calibration_report_path(config), poisson, ginibre, config.seed);

    // One representative trial per ensemble for histogram / ratio-cloud plots.
    const std::string tag = std::to_string(config.seed);
    {
        const auto pts = sample_poisson_disk(kCalibrationPoissonPoints, config.seed);
        const auto mask = disk_interior_mask(pts);
        const UnfoldedSpacings u = unfold(pts, mask);
        write_histogram_csv(config.output_dir / ("poisson_spacing_hist_" + tag + ".csv"),
                            u.scaled, 40);
        write_ratio_csv(config.output_dir / ("poisson_ratios_" + tag + ".csv"),
                        complex_ratios(pts, mask));
    }
    {
        const auto ev = sample_ginibre(kCalibrationGinibreSize, 1, config.seed);
        const auto mask = ginibre_bulk_mask(ev, kCalibrationGinibreSize);
        const UnfoldedSpacings u = unfold(ev, mask);
        write_histogram_csv(config.output_dir / ("ginibre_spacing_hist_" + tag + ".csv"),
                            u.scaled, 40);
        write_ratio_csv(config.output_dir / ("ginibre_ratios_" + tag + ".csv"),
                        complex_ratios(ev, mask));
    }
    std::fprintf(stderr, "[calibrate] poisson AD passes %d/%d, ginibre AD passes %d/%d\n",
                 poisson.ad_passes, poisson.trials, ginibre.ad_passes, ginibre.trials);
}

}  // namespace dicke
