#include <algorithm>
#include <cmath>
#include <vector>

#include "dicke/chaometrics.hpp"
#include "dicke/errors.hpp"

namespace dicke {

namespace {

// The density is below 1e-55 past s = 12; the law lives on [0, kSMax].
constexpr double kSMax = 12.0;
constexpr int kMinTerms = 100;
constexpr double kTermTolerance = 1e-14;

// P(s) = [prod_{k>=1} Q(k+1, s^2)] * [sum_{k>=1} 2 s q_k(s^2) / Q(k+1, s^2)]
// with q_k the Poisson pmf and Q its lower cumulative: Gamma(1+k, x)/k! =
// e^{-x} sum_{m<=k} x^m/m!.  Both series share the pmf recurrence; the
// product is accumulated in log space.  Terms are taken until the remaining
// factors provably differ from 1 by less than kTermTolerance (at least
// kMinTerms of them), which bounds the truncation error well below 1e-12.
double density_series(double s) {
    if (s <= 0.0) return 0.0;
    const double x = s * s;
    double q = std::exp(-x);  // q_0
    double cum = q;           // Q(1, x)
    double log_product = 0.0;
    double sum = 0.0;
    for (int k = 1; k <= 200000; ++k) {
        q *= x / k;
        cum += q;
        const double qk1 = std::min(cum, 1.0);
        log_product += std::log(qk1);
        sum += q / qk1;
        if (k >= kMinTerms && x < k + 2) {
            const double tail = q * (x / (k + 1)) / (1.0 - x / (k + 2));
            if (tail < kTermTolerance) break;
        }
    }
    return 2.0 * s * std::exp(log_product) * sum;
}

struct GaussLegendre {
    std::vector<double> x, w;  // nodes and weights on [-1, 1]
};

// Newton iteration on the Legendre recurrence; no tabulated constants.
GaussLegendre gauss_legendre(int n) {
    GaussLegendre gl;
    gl.x.resize(n);
    gl.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        gl.x[i] = -z;
        gl.x[n - 1 - i] = z;
        gl.w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        gl.w[n - 1 - i] = gl.w[i];
    }
    return gl;
}

struct GinueTable {
    static constexpr int kSegments = 240;  // width 0.05 over [0, kSMax]
    GaussLegendre gl;
    std::vector<double> cum;     // cdf at segment boundaries
    std::vector<double> fine_s;  // seed grid for the quantile Newton solve
    std::vector<double> fine_cdf;
    double mean = 0.0;

    double segment_width() const { return kSMax / kSegments; }

    // integral of the density over [a, b] inside one segment
    double patch(double a, double b) const {
        double acc = 0.0;
        for (std::size_t j = 0; j < gl.x.size(); ++j)
            acc += gl.w[j] * density_series(0.5 * (b - a) * gl.x[j] + 0.5 * (a + b));
        return 0.5 * (b - a) * acc;
    }
};

const GinueTable& table() {
    static const GinueTable t = [] {
        GinueTable t;
        t.gl = gauss_legendre(16);
        t.cum.resize(GinueTable::kSegments + 1, 0.0);
        const double h = t.segment_width();
        for (int i = 0; i < GinueTable::kSegments; ++i) {
            t.cum[i + 1] = t.cum[i] + t.patch(i * h, (i + 1) * h);
            for (std::size_t j = 0; j < t.gl.x.size(); ++j) {
                const double s = 0.5 * h * t.gl.x[j] + (i + 0.5) * h;
                t.mean += 0.5 * h * t.gl.w[j] * s * density_series(s);
            }
        }
        const int sub = 8;  // fine grid: 8 seed nodes per segment
        t.fine_s.reserve(GinueTable::kSegments * sub + 1);
        t.fine_cdf.reserve(t.fine_s.capacity());
        t.fine_s.push_back(0.0);
        t.fine_cdf.push_back(0.0);
        for (int i = 0; i < GinueTable::kSegments; ++i)
            for (int k = 1; k <= sub; ++k) {
                const double s = i * h + k * h / sub;
                t.fine_s.push_back(s);
                t.fine_cdf.push_back(t.cum[i] + t.patch(i * h, s));
            }
        return t;
    }();
    return t;
}

}  // namespace

double p_2dp(double s) {
    if (s < 0.0) throw ConfigError("spacing must be non-negative");
    return 0.5 * M_PI * s * std::exp(-0.25 * M_PI * s * s);
}

double cdf_2dp(double s) {
    if (s < 0.0) throw ConfigError("spacing must be non-negative");
    return -std::expm1(-0.25 * M_PI * s * s);
}

double quantile_2dp(double u) {
    if (u < 0.0 || u >= 1.0) throw ConfigError("quantile argument must lie in [0, 1)");
    return std::sqrt(-4.0 * std::log1p(-u) / M_PI);
}

double p_ginue(double s) {
    if (s < 0.0) throw ConfigError("spacing must be non-negative");
    return density_series(s);
}

double cdf_ginue(double s) {
    if (s < 0.0) throw ConfigError("spacing must be non-negative");
    if (s >= kSMax) return 1.0;
    const auto& t = table();
    const double h = t.segment_width();
    const int i = std::min(static_cast<int>(s / h), GinueTable::kSegments - 1);
    return std::min(1.0, t.cum[i] + t.patch(i * h, s));
}

double ginue_mean_spacing() { return table().mean; }

double p_ginue_rescaled(double s) {
    const double sbar = ginue_mean_spacing();
    return sbar * p_ginue(sbar * s);
}

double cdf_ginue_rescaled(double s) { return cdf_ginue(ginue_mean_spacing() * s); }

double quantile_ginue_rescaled(double u) {
    if (u < 0.0 || u >= 1.0) throw ConfigError("quantile argument must lie in [0, 1)");
    if (u == 0.0) return 0.0;
    const auto& t = table();
    // seed from the fine grid, then polish with Newton on the exact cdf
    const auto it = std::lower_bound(t.fine_cdf.begin(), t.fine_cdf.end(), u);
    std::size_t hi = std::min<std::size_t>(it - t.fine_cdf.begin(), t.fine_s.size() - 1);
    const std::size_t lo = hi > 0 ? hi - 1 : 0;
    double s = t.fine_s[lo];
    if (t.fine_cdf[hi] > t.fine_cdf[lo])
        s += (u - t.fine_cdf[lo]) / (t.fine_cdf[hi] - t.fine_cdf[lo]) *
             (t.fine_s[hi] - t.fine_s[lo]);
    for (int it2 = 0; it2 < 40; ++it2) {
        const double f = cdf_ginue(s) - u;
        const double d = density_series(s);
        if (d <= 0.0) break;
        const double step = f / d;
        s -= step;
        s = std::clamp(s, 0.0, kSMax);
        if (std::abs(step) < 1e-13 * (1.0 + s)) break;
    }
    return s / ginue_mean_spacing();
}

}  // namespace dicke
