#include "dicke/io.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>

#include "dicke/errors.hpp"
#include "dicke/provenance.hpp"

namespace dicke {

namespace {

constexpr char kMatrixMagic[8] = {'D', 'K', 'L', 'V', '0', '0', '0', '1'};
constexpr char kSpectrumMagic[8] = {'D', 'K', 'S', 'P', '0', '0', '0', '1'};

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using unique_file = std::unique_ptr<std::FILE, FileCloser>;

unique_file open_or_throw(const std::filesystem::path& path, const char* mode) {
    unique_file f(std::fopen(path.c_str(), mode));
    if (!f) throw FormatError("cannot open '" + path.string() + "'");
    return f;
}

void write_exact(std::FILE* f, const void* data, std::size_t size) {
    if (std::fwrite(data, 1, size, f) != size) throw FormatError("short write");
}

void read_exact(std::FILE* f, void* data, std::size_t size) {
    if (std::fread(data, 1, size, f) != size) throw FormatError("short read");
}

void write_header(std::FILE* f, const char magic[8], const nlohmann::json& header) {
    const std::string text = header.dump();
    const std::uint64_t len = text.size();
    write_exact(f, magic, 8);
    write_exact(f, &len, sizeof(len));
    write_exact(f, text.data(), text.size());
}

nlohmann::json read_header(std::FILE* f, const char magic[8], const std::filesystem::path& path) {
    char got[8];
    read_exact(f, got, 8);
    if (std::memcmp(got, magic, 8) != 0)
        throw FormatError("'" + path.string() + "' is not the expected artifact kind");
    std::uint64_t len = 0;
    read_exact(f, &len, sizeof(len));
    if (len > (1u << 30)) throw FormatError("implausible header length in '" + path.string() + "'");
    std::string text(len, '\0');
    read_exact(f, text.data(), len);
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("corrupt artifact header in '" + path.string() + "': " + e.what());
    }
    if (header.value("format_version", -1) != kFormatVersion)
        throw FormatError("artifact format version mismatch in '" + path.string() + "'");
    return header;
}

void check_hash(const nlohmann::json& header, const std::string& expected,
                const std::filesystem::path& path) {
    if (!expected.empty() && header.value("params_hash", "") != expected)
        throw ProvenanceError("artifact '" + path.string() +
                              "' was produced for different parameters");
}

nlohmann::json labels_to_json(const std::vector<LiouvilleLabel>& labels) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& l : labels)
        arr.push_back({l.ket.n, l.ket.two_mz, l.bra.n, l.bra.two_mz});
    return arr;
}

std::vector<LiouvilleLabel> labels_from_json(const nlohmann::json& arr) {
    std::vector<LiouvilleLabel> labels;
    labels.reserve(arr.size());
    for (const auto& row : arr)
        labels.push_back({{row.at(0).get<int>(), row.at(1).get<int>()},
                          {row.at(2).get<int>(), row.at(3).get<int>()}});
    return labels;
}

// %.17g round-trips IEEE doubles exactly and never depends on locale here.
void print_real(std::FILE* f, double x) { std::fprintf(f, "%.17g", x); }

}  // namespace

void save_liouvillian(const std::filesystem::path& path, const LiouvillianMatrix& m) {
    auto f = open_or_throw(path, "wb");
    write_header(f.get(), kMatrixMagic,
                 {{"format_version", kFormatVersion},
                  {"dimension", m.dim()},
                  {"sector", to_string(m.sector)},
                  {"params", m.params.to_json()},
                  {"params_hash", m.params_hash}});
    // row-major payload
    std::vector<std::complex<double>> row(m.dim());
    for (int r = 0; r < m.dim(); ++r) {
        for (int c = 0; c < m.dim(); ++c) row[c] = m.entries(r, c);
        write_exact(f.get(), row.data(), row.size() * sizeof(row[0]));
    }

    std::ofstream sidecar(path.string() + ".labels.json");
    if (!sidecar) throw FormatError("cannot open label sidecar for '" + path.string() + "'");
    sidecar << nlohmann::json{{"format_version", kFormatVersion},
                              {"params_hash", m.params_hash},
                              {"labels", labels_to_json(m.labels)}}
                   .dump()
            << '\n';
}

LiouvillianMatrix load_liouvillian(const std::filesystem::path& path,
                                   const std::string& expected_hash) {
    auto f = open_or_throw(path, "rb");
    const nlohmann::json header = read_header(f.get(), kMatrixMagic, path);
    check_hash(header, expected_hash, path);

    LiouvillianMatrix m;
    m.params = ModelParams::from_json(header.at("params"));
    m.sector = sector_from_string(header.at("sector").get<std::string>());
    m.params_hash = header.at("params_hash").get<std::string>();
    const int dim = header.at("dimension").get<int>();
    m.entries.resize(dim, dim);
    std::vector<std::complex<double>> row(dim);
    for (int r = 0; r < dim; ++r) {
        read_exact(f.get(), row.data(), row.size() * sizeof(row[0]));
        for (int c = 0; c < dim; ++c) m.entries(r, c) = row[c];
    }

    const std::filesystem::path sidecar_path = path.string() + ".labels.json";
    std::ifstream sidecar(sidecar_path);
    if (!sidecar)
        throw FormatError("missing label sidecar '" + sidecar_path.string() + "'");
    nlohmann::json sidecar_json;
    try {
        sidecar >> sidecar_json;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("corrupt label sidecar: " + std::string(e.what()));
    }
    if (sidecar_json.value("params_hash", "") != m.params_hash)
        throw ProvenanceError("label sidecar does not match the matrix artifact");
    m.labels = labels_from_json(sidecar_json.at("labels"));
    if (static_cast<int>(m.labels.size()) != dim)
        throw FormatError("label sidecar length does not match the matrix dimension");
    return m;
}

void save_spectrum(const std::filesystem::path& path, const ComplexSpectrum& spec,
                   bool drop_vectors) {
    const bool with_vectors = spec.has_vectors() && !drop_vectors;
    auto f = open_or_throw(path, "wb");
    write_header(f.get(), kSpectrumMagic,
                 {{"format_version", kFormatVersion},
                  {"dim", spec.dim()},
                  {"sector", to_string(spec.sector)},
                  {"params", spec.params.to_json()},
                  {"params_hash", spec.params_hash},
                  {"has_vectors", with_vectors},
                  {"labels", labels_to_json(spec.labels)}});
    write_exact(f.get(), spec.eigenvalues.data(),
                static_cast<std::size_t>(spec.dim()) * sizeof(std::complex<double>));
    if (with_vectors)
        write_exact(f.get(), spec.eigenvectors.data(),
                    static_cast<std::size_t>(spec.dim()) * spec.dim() *
                        sizeof(std::complex<double>));
}

ComplexSpectrum load_spectrum(const std::filesystem::path& path,
                              const std::string& expected_hash) {
    auto f = open_or_throw(path, "rb");
    const nlohmann::json header = read_header(f.get(), kSpectrumMagic, path);
    check_hash(header, expected_hash, path);

    ComplexSpectrum spec;
    spec.params = ModelParams::from_json(header.at("params"));
    spec.sector = sector_from_string(header.at("sector").get<std::string>());
    spec.params_hash = header.at("params_hash").get<std::string>();
    spec.labels = labels_from_json(header.at("labels"));
    const int dim = header.at("dim").get<int>();
    spec.eigenvalues.resize(dim);
    read_exact(f.get(), spec.eigenvalues.data(),
               static_cast<std::size_t>(dim) * sizeof(std::complex<double>));
    if (header.at("has_vectors").get<bool>()) {
        spec.eigenvectors.resize(dim, dim);
        read_exact(f.get(), spec.eigenvectors.data(),
                   static_cast<std::size_t>(dim) * dim * sizeof(std::complex<double>));
    }
    return spec;
}

void write_eigenvalue_csv(const std::filesystem::path& path, const ComplexSpectrum& spec) {
    auto f = open_or_throw(path, "wb");
    std::fprintf(f.get(), "k,re,im,abs\n");
    for (int k = 0; k < spec.dim(); ++k) {
        std::fprintf(f.get(), "%d,", k);
        print_real(f.get(), spec.eigenvalues(k).real());
        std::fputc(',', f.get());
        print_real(f.get(), spec.eigenvalues(k).imag());
        std::fputc(',', f.get());
        print_real(f.get(), std::abs(spec.eigenvalues(k)));
        std::fputc('\n', f.get());
    }
}

void write_convergence_csv(const std::filesystem::path& path, const ComplexSpectrum& spec,
                           const ConvergenceReport& report) {
    auto f = open_or_throw(path, "wb");
    std::fprintf(f.get(), "k,abs_lambda,re,im,P1_tail,P2_tail,accepted\n");
    for (int k = 0; k < report.n_total; ++k) {
        std::fprintf(f.get(), "%d,", k);
        print_real(f.get(), std::abs(spec.eigenvalues(k)));
        std::fputc(',', f.get());
        print_real(f.get(), spec.eigenvalues(k).real());
        std::fputc(',', f.get());
        print_real(f.get(), spec.eigenvalues(k).imag());
        std::fputc(',', f.get());
        print_real(f.get(), report.tail1[k]);
        std::fputc(',', f.get());
        print_real(f.get(), report.tail2.empty() ? 0.0 : report.tail2[k]);
        std::fprintf(f.get(), ",%d\n", report.accepted(k) ? 1 : 0);
    }
}

void write_convergence_summary(const std::filesystem::path& path, const ModelParams& params,
                               const ConvergenceReport& report) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot open '" + path.string() + "'");
    char ratio[32], delta[32];
    std::snprintf(ratio, sizeof(ratio), "%.17g",
                  report.n_total > 0 ? double(report.n_converged) / report.n_total : 0.0);
    std::snprintf(delta, sizeof(delta), "%.17g", report.tolerance);
    out << "{\"n_max\": " << params.n_max << ", \"Delta\": " << delta
        << ", \"N_CES\": " << report.n_converged << ", \"N_ES\": " << report.n_total
        << ", \"ratio\": " << ratio << "}\n";
}

void write_window_csv(const std::filesystem::path& path, const WindowScanResult& scan) {
    auto f = open_or_throw(path, "wb");
    std::fprintf(f.get(), "w,mean_abs_lambda,A2_2dp,A2_ginue,mean_r,mean_neg_cos,n\n");
    for (std::size_t w = 0; w < scan.windows.size(); ++w) {
        const WindowStats& win = scan.windows[w];
        std::fprintf(f.get(), "%zu,", w);
        print_real(f.get(), win.mean_abs);
        std::fputc(',', f.get());
        print_real(f.get(), win.a2_2dp);
        std::fputc(',', f.get());
        print_real(f.get(), win.a2_ginue);
        std::fputc(',', f.get());
        print_real(f.get(), win.mean_r);
        std::fputc(',', f.get());
        print_real(f.get(), win.mean_neg_cos);
        std::fprintf(f.get(), ",%d\n", win.n);
    }
}

void write_histogram_csv(const std::filesystem::path& path, const std::vector<double>& values,
                         int bins) {
    if (bins < 1) throw ConfigError("histogram needs at least one bin");
    auto f = open_or_throw(path, "wb");
    std::fprintf(f.get(), "bin_left,bin_right,density\n");
    if (values.empty()) return;
    const double hi = *std::max_element(values.begin(), values.end());
    const double width = hi > 0 ? hi / bins : 1.0;
    std::vector<int> count(bins, 0);
    for (const double v : values)
        count[std::clamp(static_cast<int>(v / width), 0, bins - 1)]++;
    for (int b = 0; b < bins; ++b) {
        print_real(f.get(), b * width);
        std::fputc(',', f.get());
        print_real(f.get(), (b + 1) * width);
        std::fputc(',', f.get());
        print_real(f.get(), count[b] / (values.size() * width));
        std::fputc('\n', f.get());
    }
}

void write_ratio_csv(const std::filesystem::path& path, const RatioSample& ratios) {
    auto f = open_or_throw(path, "wb");
    std::fprintf(f.get(), "re_z,im_z\n");
    for (const auto& z : ratios.z) {
        print_real(f.get(), z.real());
        std::fputc(',', f.get());
        print_real(f.get(), z.imag());
        std::fputc('\n', f.get());
    }
}

void write_calibration_report(const std::filesystem::path& path,
                              const EnsembleCalibration& poisson,
                              const EnsembleCalibration& ginibre, std::uint64_t seed) {
    auto block = [](const EnsembleCalibration& c) {
        nlohmann::json a2 = nlohmann::json::array();
        for (const double v : c.a2) a2.push_back(v);
        return nlohmann::json{{"ensemble", c.ensemble}, {"trials", c.trials},
                              {"ad_passes", c.ad_passes}, {"mean_r", c.mean_r},
                              {"mean_neg_cos", c.mean_neg_cos}, {"a2", a2}};
    };
    std::ofstream out(path);
    if (!out) throw FormatError("cannot open '" + path.string() + "'");
    out << nlohmann::json{{"seed", seed}, {"poisson", block(poisson)},
                          {"ginibre", block(ginibre)}}
               .dump(2)
        << '\n';
}

}  // namespace dicke
