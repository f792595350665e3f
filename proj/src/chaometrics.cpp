#include "dicke/chaometrics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>

#include "dicke/errors.hpp"
#include "dicke/spectra.hpp"

namespace dicke {

namespace {

constexpr double kDuplicateTolerance = 1e-14;

struct Dedup {
    std::vector<std::complex<double>> pts;
    std::vector<int> src;
    int collapsed = 0;
};

// Collapse pairs closer than 1e-14; the survivor is the lexicographically
// first of each cluster.  One warning per call, as these are almost always a
// sign of accidentally duplicated input.
Dedup collapse_duplicates(const std::vector<std::complex<double>>& in) {
    std::vector<int> order(in.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (in[a].real() != in[b].real()) return in[a].real() < in[b].real();
        if (in[a].imag() != in[b].imag()) return in[a].imag() < in[b].imag();
        return a < b;
    });

    std::vector<char> drop(in.size(), 0);
    for (std::size_t a = 0; a < order.size(); ++a) {
        if (drop[order[a]]) continue;
        const auto p = in[order[a]];
        for (std::size_t b = a + 1; b < order.size(); ++b) {
            if (in[order[b]].real() - p.real() > kDuplicateTolerance) break;
            if (!drop[order[b]] && std::abs(in[order[b]] - p) <= kDuplicateTolerance)
                drop[order[b]] = 1;
        }
    }

    Dedup out;
    out.pts.reserve(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) {
        if (drop[i]) {
            ++out.collapsed;
        } else {
            out.pts.push_back(in[i]);
            out.src.push_back(static_cast<int>(i));
        }
    }
    if (out.collapsed > 0)
        std::fprintf(stderr, "warning: collapsed %d duplicate point(s) within %g\n",
                     out.collapsed, kDuplicateTolerance);
    return out;
}

struct Best {
    double d2 = std::numeric_limits<double>::infinity();
    int idx = -1;
};

// Candidate ordering is (squared distance, index); both search paths use it,
// which is what makes them agree exactly, ties included.
inline bool beats(double d2, int idx, const Best& b) {
    return d2 < b.d2 || (d2 == b.d2 && idx < b.idx);
}

inline void consider(Best& b1, Best& b2, double d2, int idx) {
    if (beats(d2, idx, b1)) {
        b2 = b1;
        b1 = {d2, idx};
    } else if (beats(d2, idx, b2)) {
        b2 = {d2, idx};
    }
}

NeighborSet finish(Dedup&& cloud, std::vector<Best>&& b1, std::vector<Best>&& b2,
                   int neighbor_order) {
    NeighborSet ns;
    ns.duplicates_collapsed = cloud.collapsed;
    ns.points = std::move(cloud.pts);
    ns.source_index = std::move(cloud.src);
    const std::size_t n = ns.points.size();
    ns.nn1.resize(n);
    ns.d1.resize(n);
    if (neighbor_order >= 2) {
        ns.nn2.resize(n);
        ns.d2.resize(n);
    }
    for (std::size_t i = 0; i < n; ++i) {
        ns.nn1[i] = b1[i].idx;
        ns.d1[i] = std::sqrt(b1[i].d2);
        if (neighbor_order >= 2) {
            ns.nn2[i] = b2[i].idx;
            ns.d2[i] = std::sqrt(b2[i].d2);
        }
    }
    return ns;
}

void check_neighbor_input(std::size_t n, int neighbor_order) {
    if (neighbor_order != 1 && neighbor_order != 2)
        throw ConfigError("neighbor order must be 1 or 2");
    if (n < 3) throw ConfigError("neighbor search needs at least 3 distinct points");
}

}  // namespace

NeighborSet nearest_spacings_brute(const std::vector<std::complex<double>>& points,
                                   int neighbor_order) {
    Dedup cloud = collapse_duplicates(points);
    const std::size_t n = cloud.pts.size();
    check_neighbor_input(n, neighbor_order);

    std::vector<Best> b1(n), b2(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            consider(b1[i], b2[i], std::norm(cloud.pts[i] - cloud.pts[j]),
                     static_cast<int>(j));
        }
    return finish(std::move(cloud), std::move(b1), std::move(b2), neighbor_order);
}

NeighborSet nearest_spacings(const std::vector<std::complex<double>>& points,
                             int neighbor_order) {
    Dedup cloud = collapse_duplicates(points);
    const std::size_t n = cloud.pts.size();
    check_neighbor_input(n, neighbor_order);

    double minx = cloud.pts[0].real(), maxx = minx;
    double miny = cloud.pts[0].imag(), maxy = miny;
    for (const auto& p : cloud.pts) {
        minx = std::min(minx, p.real());
        maxx = std::max(maxx, p.real());
        miny = std::min(miny, p.imag());
        maxy = std::max(maxy, p.imag());
    }
    const int cells = std::max(1, static_cast<int>(std::floor(std::sqrt(n / 2.0))));
    const double wx = maxx > minx ? (maxx - minx) / cells : 1.0;
    const double wy = maxy > miny ? (maxy - miny) / cells : 1.0;
    const double wmin = std::min(wx, wy);

    auto cell_of = [&](const std::complex<double>& p) {
        const int cx = std::clamp(static_cast<int>((p.real() - minx) / wx), 0, cells - 1);
        const int cy = std::clamp(static_cast<int>((p.imag() - miny) / wy), 0, cells - 1);
        return std::pair{cx, cy};
    };

    std::vector<std::vector<int>> bucket(static_cast<std::size_t>(cells) * cells);
    for (std::size_t i = 0; i < n; ++i) {
        const auto [cx, cy] = cell_of(cloud.pts[i]);
        bucket[static_cast<std::size_t>(cy) * cells + cx].push_back(static_cast<int>(i));
    }

    std::vector<Best> b1(n), b2(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto [cx, cy] = cell_of(cloud.pts[i]);
        for (int r = 0; r <= 2 * cells; ++r) {
            // Unvisited points sit in rings >= r, hence at least (r-1)*wmin away.
            const double unseen = (r - 1) * wmin;
            const double stop_d2 = neighbor_order >= 2 ? b2[i].d2 : b1[i].d2;
            if (r >= 2 && unseen * unseen > stop_d2) break;

            const int x0 = std::max(0, cx - r), x1 = std::min(cells - 1, cx + r);
            const int y0 = std::max(0, cy - r), y1 = std::min(cells - 1, cy + r);
            for (int y = y0; y <= y1; ++y)
                for (int x = x0; x <= x1; ++x) {
                    if (std::max(std::abs(x - cx), std::abs(y - cy)) != r) continue;
                    for (const int j : bucket[static_cast<std::size_t>(y) * cells + x]) {
                        if (j == static_cast<int>(i)) continue;
                        consider(b1[i], b2[i], std::norm(cloud.pts[i] - cloud.pts[j]), j);
                    }
                }
        }
    }
    return finish(std::move(cloud), std::move(b1), std::move(b2), neighbor_order);
}

namespace {

UnfoldedSpacings unfold_impl(const std::vector<std::complex<double>>& points,
                             const std::vector<char>* mask) {
    if (mask && mask->size() != points.size())
        throw DimensionError("evaluation mask length does not match the point count");

    NeighborSet ns = nearest_spacings(points, 1);
    const int n = static_cast<int>(ns.points.size());

    UnfoldedSpacings u;
    u.duplicates_collapsed = ns.duplicates_collapsed;
    for (int k = 0; k < n; ++k)
        if (!mask || (*mask)[ns.source_index[k]]) u.eval_index.push_back(k);
    if (u.eval_index.size() < 10)
        throw ConfigError("unfolding needs at least 10 evaluation points");

    for (const int k : u.eval_index) u.raw.push_back(ns.d1[k]);
    u.mean_raw = std::accumulate(u.raw.begin(), u.raw.end(), 0.0) / u.raw.size();
    if (u.mean_raw <= 0.0) throw ConfigError("degenerate point cloud: zero mean spacing");
    u.sigma = 4.5 * u.mean_raw;

    // nu_a over the whole cloud, self-term included: the printed sum is
    // unrestricted, and the l = k offset is a uniform O(1/N) shift that the
    // normalization S~ absorbs anyway.
    const double inv2s2 = 1.0 / (2.0 * u.sigma * u.sigma);
    const double prefactor = 1.0 / (2.0 * M_PI * u.sigma * u.sigma * n);
    u.local_density.reserve(u.eval_index.size());
    for (const int k : u.eval_index) {
        double acc = 0.0;
        for (int l = 0; l < n; ++l)
            acc += std::exp(-std::norm(ns.points[k] - ns.points[l]) * inv2s2);
        u.local_density.push_back(prefactor * acc);
    }

    double stilde = 0.0;
    for (std::size_t a = 0; a < u.raw.size(); ++a)
        stilde += std::sqrt(u.local_density[a]) * u.raw[a];
    u.scale_norm = stilde / u.raw.size();
    u.scaled.reserve(u.raw.size());
    for (std::size_t a = 0; a < u.raw.size(); ++a)
        u.scaled.push_back(std::sqrt(u.local_density[a]) * u.raw[a] / u.scale_norm);
    return u;
}

}  // namespace

UnfoldedSpacings unfold(const std::vector<std::complex<double>>& points) {
    return unfold_impl(points, nullptr);
}

UnfoldedSpacings unfold(const std::vector<std::complex<double>>& points,
                        const std::vector<char>& eval_mask) {
    return unfold_impl(points, &eval_mask);
}

ADResult anderson_darling(std::vector<double> sample, const std::function<double(double)>& cdf,
                          std::string hypothesis) {
    if (sample.empty()) throw ConfigError("Anderson-Darling test on an empty sample");
    std::sort(sample.begin(), sample.end());

    ADResult res;
    res.n = static_cast<int>(sample.size());
    res.hypothesis = std::move(hypothesis);

    constexpr double kLow = 1e-300, kHigh = 1.0 - 1e-16;
    std::vector<double> f(sample.size());
    for (std::size_t k = 0; k < sample.size(); ++k) {
        const double raw = cdf(sample[k]);
        f[k] = std::clamp(raw, kLow, kHigh);
        if (f[k] != raw) res.clamped = true;
    }

    const int n = res.n;
    double acc = 0.0;
    for (int k = 1; k <= n; ++k)
        acc += (2.0 * k - 1.0) * (std::log(f[k - 1]) + std::log1p(-f[n - k]));
    res.a2 = -n - acc / n;
    res.reject = res.a2 > kADThreshold;
    return res;
}

ADResult anderson_darling_2dp(std::vector<double> sample) {
    return anderson_darling(std::move(sample), [](double s) { return cdf_2dp(s); }, "2DP");
}

ADResult anderson_darling_ginue(std::vector<double> sample) {
    return anderson_darling(std::move(sample), [](double s) { return cdf_ginue_rescaled(s); },
                            "GinUE");
}

namespace {

RatioSample ratios_impl(const std::vector<std::complex<double>>& points,
                        const std::vector<char>* mask) {
    if (mask && mask->size() != points.size())
        throw DimensionError("evaluation mask length does not match the point count");

    const NeighborSet ns = nearest_spacings(points, 2);
    RatioSample rs;
    double sum_r = 0.0, sum_cos = 0.0;
    for (std::size_t k = 0; k < ns.points.size(); ++k) {
        if (mask && !(*mask)[ns.source_index[k]]) continue;
        if (ns.d2[k] <= kDuplicateTolerance) {
            ++rs.degenerate_excluded;
            continue;
        }
        const std::complex<double> z =
            (ns.points[ns.nn1[k]] - ns.points[k]) / (ns.points[ns.nn2[k]] - ns.points[k]);
        rs.z.push_back(z);
        const double r = std::abs(z);
        sum_r += r;
        sum_cos += z.real() / r;
    }
    if (!rs.z.empty()) {
        rs.mean_r = sum_r / rs.z.size();
        rs.mean_neg_cos = -sum_cos / rs.z.size();
    }
    return rs;
}

}  // namespace

RatioSample complex_ratios(const std::vector<std::complex<double>>& points) {
    return ratios_impl(points, nullptr);
}

RatioSample complex_ratios(const std::vector<std::complex<double>>& points,
                           const std::vector<char>& eval_mask) {
    return ratios_impl(points, &eval_mask);
}

WindowScanResult window_scan(const std::vector<std::complex<double>>& ordered, int window_size,
                             int step) {
    const int n = static_cast<int>(ordered.size());
    if (window_size < 10) throw ConfigError("window size below 10 cannot be unfolded");
    if (window_size > n) throw ConfigError("window larger than the sample");
    if (step < 0) throw ConfigError("window step must be non-negative");

    WindowScanResult scan;
    scan.window_size = window_size;
    scan.step = step;
    std::vector<char> mask(ordered.size(), 0);
    for (int first = 0; first + window_size <= n;) {
        // Sigma, normalization, and the tested spacings come from the window
        // members alone, but neighbor search and the kernel density see the
        // whole ordered cloud: the window boundary is an analysis cut, not a
        // spectral edge, and must not distort the edge members' spacings.
        std::fill(mask.begin(), mask.end(), 0);
        std::fill(mask.begin() + first, mask.begin() + first + window_size, 1);
        const UnfoldedSpacings u = unfold(ordered, mask);
        const RatioSample ratios = complex_ratios(ordered, mask);

        WindowStats w;
        w.first = first;
        w.last = first + window_size - 1;
        double abs_acc = 0.0;
        for (int k = first; k < first + window_size; ++k) abs_acc += std::abs(ordered[k]);
        w.mean_abs = abs_acc / window_size;
        w.a2_2dp = anderson_darling_2dp(u.scaled).a2;
        w.a2_ginue = anderson_darling_ginue(u.scaled).a2;
        w.mean_r = ratios.mean_r;
        w.mean_neg_cos = ratios.mean_neg_cos;
        w.n = static_cast<int>(u.scaled.size());
        scan.windows.push_back(w);

        if (step == 0) break;
        first += step;
    }
    return scan;
}

std::vector<std::complex<double>> sample_ginibre(int n, int count, std::uint64_t seed) {
    if (n < 16) throw ConfigError("Ginibre bulk statistics need matrix size >= 16");
    std::vector<std::complex<double>> out;
    out.reserve(static_cast<std::size_t>(n) * std::max(count, 0));
    for (int t = 0; t < count; ++t) {
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(t));
        std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
        Eigen::MatrixXcd a(n, n);
        for (int col = 0; col < n; ++col)
            for (int row = 0; row < n; ++row) {
                const double re = gauss(rng);
                const double im = gauss(rng);
                a(row, col) = {re, im};
            }
        Eigen::VectorXcd ev;
        complex_eig(a, ev, nullptr);
        out.insert(out.end(), ev.data(), ev.data() + n);
    }
    return out;
}

std::vector<std::complex<double>> sample_poisson_disk(int n_points, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<std::complex<double>> out;
    out.reserve(std::max(n_points, 0));
    for (int i = 0; i < n_points; ++i) {
        const double r = std::sqrt(u01(rng));
        const double phi = 2.0 * M_PI * u01(rng);
        out.emplace_back(r * std::cos(phi), r * std::sin(phi));
    }
    return out;
}

std::vector<char> ginibre_bulk_mask(const std::vector<std::complex<double>>& ev, int n) {
    const double cut = 0.8 * std::sqrt(double(n));
    std::vector<char> mask(ev.size());
    for (std::size_t i = 0; i < ev.size(); ++i) mask[i] = std::abs(ev[i]) < cut;
    return mask;
}

std::vector<char> disk_interior_mask(const std::vector<std::complex<double>>& points,
                                     double radius) {
    std::vector<char> mask(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) mask[i] = std::abs(points[i]) <= radius;
    return mask;
}

PowerLawFit fit_small_s_exponent(std::vector<double> spacings) {
    std::erase_if(spacings, [](double s) { return !(s > 0.0); });
    if (spacings.size() < 2000)
        throw ConfigError("repulsion fit needs at least 2000 positive spacings");
    std::sort(spacings.begin(), spacings.end());

    const std::size_t m = spacings.size() / 10;
    const double lo = spacings.front(), hi = spacings[m - 1];
    PowerLawFit fit;
    if (!(hi > lo)) {
        fit.degenerate = true;
        return fit;
    }

    constexpr int kBins = 10;
    const double ratio = std::log(hi / lo);
    std::vector<int> count(kBins, 0);
    for (std::size_t i = 0; i < m; ++i) {
        int b = static_cast<int>(std::log(spacings[i] / lo) / ratio * kBins);
        count[std::clamp(b, 0, kBins - 1)]++;
    }

    // weighted log-log regression; weight = count (Poisson errors on ln n)
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    int used = 0;
    for (int b = 0; b < kBins; ++b) {
        if (count[b] < 5) continue;
        const double el = lo * std::exp(ratio * b / kBins);
        const double er = lo * std::exp(ratio * (b + 1.0) / kBins);
        const double x = 0.5 * (std::log(el) + std::log(er));
        const double y = std::log(count[b] / (er - el));
        const double w = count[b];
        sw += w;
        sx += w * x;
        sy += w * y;
        sxx += w * x * x;
        sxy += w * x * y;
        ++used;
    }
    const double det = sw * sxx - sx * sx;
    if (used < 3 || det <= 0.0) {
        fit.degenerate = true;
        return fit;
    }
    fit.beta = (sw * sxy - sx * sy) / det;
    fit.stderr_ = std::sqrt(sw / det);
    return fit;
}

EnsembleCalibration calibrate_poisson(int n_points, int trials, std::uint64_t seed) {
    EnsembleCalibration cal;
    cal.ensemble = "poisson-disk";
    cal.trials = trials;
    double sum_r = 0, sum_neg_cos = 0;
    std::size_t samples = 0;
    for (int t = 0; t < trials; ++t) {
        const auto pts = sample_poisson_disk(n_points, seed + static_cast<std::uint64_t>(t));
        const auto mask = disk_interior_mask(pts);
        const ADResult ad = anderson_darling_2dp(unfold(pts, mask).scaled);
        cal.a2.push_back(ad.a2);
        if (!ad.reject) ++cal.ad_passes;
        const RatioSample rs = complex_ratios(pts, mask);
        sum_r += rs.mean_r * rs.z.size();
        sum_neg_cos += rs.mean_neg_cos * rs.z.size();
        samples += rs.z.size();
    }
    if (samples > 0) {
        cal.mean_r = sum_r / samples;
        cal.mean_neg_cos = sum_neg_cos / samples;
    }
    return cal;
}

EnsembleCalibration calibrate_ginibre(int n, int trials, std::uint64_t seed) {
    EnsembleCalibration cal;
    cal.ensemble = "ginibre";
    cal.trials = trials;
    double sum_r = 0, sum_neg_cos = 0;
    std::size_t samples = 0;
    for (int t = 0; t < trials; ++t) {
        const auto ev = sample_ginibre(n, 1, seed + static_cast<std::uint64_t>(t));
        const auto mask = ginibre_bulk_mask(ev, n);
        const ADResult ad = anderson_darling_ginue(unfold(ev, mask).scaled);
        cal.a2.push_back(ad.a2);
        if (!ad.reject) ++cal.ad_passes;
        const RatioSample rs = complex_ratios(ev, mask);
        sum_r += rs.mean_r * rs.z.size();
        sum_neg_cos += rs.mean_neg_cos * rs.z.size();
        samples += rs.z.size();
    }
    if (samples > 0) {
        cal.mean_r = sum_r / samples;
        cal.mean_neg_cos = sum_neg_cos / samples;
    }
    return cal;
}

}  // namespace dicke
