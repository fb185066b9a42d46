#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "perc/rng.hpp"

namespace perc {

// Monte Carlo estimate with its standard error. Merging is the pooled-count
// formula and is associative over shards.
struct Estimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    uint64_t n = 0;
    uint64_t seed = 0;

    double lo(double z = 3.0) const { return mean - z * stderr_; }
    double hi(double z = 3.0) const { return mean + z * stderr_; }
};

// estimate of a Bernoulli probability from a hit count
inline Estimate binomial_estimate(uint64_t hits, uint64_t n, uint64_t seed) {
    Estimate e;
    e.n = n;
    e.seed = seed;
    if (n == 0) throw std::invalid_argument("binomial_estimate: n = 0");
    e.mean = (double)hits / (double)n;
    e.stderr_ = std::sqrt(e.mean * (1.0 - e.mean) / (double)n);
    return e;
}

// mean of a real-valued sample from (sum, sumsq, n)
inline Estimate mean_estimate(double sum, double sumsq, uint64_t n, uint64_t seed) {
    Estimate e;
    e.n = n;
    e.seed = seed;
    if (n == 0) throw std::invalid_argument("mean_estimate: n = 0");
    e.mean = sum / (double)n;
    double var = std::max(0.0, sumsq / (double)n - e.mean * e.mean);
    e.stderr_ = std::sqrt(var / (double)n);
    return e;
}

// Pooled merge of two mean estimates (exact for the mean; stderr recombined
// from the within-part variances, which is the standard shard formula).
struct MeanAccumulator {
    double sum = 0.0;
    double sumsq = 0.0;
    uint64_t n = 0;
    void add(double x) {
        sum += x;
        sumsq += x * x;
        ++n;
    }
    void merge(const MeanAccumulator& o) {
        sum += o.sum;
        sumsq += o.sumsq;
        n += o.n;
    }
    Estimate estimate(uint64_t seed) const { return mean_estimate(sum, sumsq, n, seed); }
};

// ratio a/b of two correlated counts with a delta-method standard error,
// given per-sample joint counts: n samples, counts of (a=1), (b=1), (a=b=1)
inline Estimate ratio_estimate(uint64_t na, uint64_t nb, uint64_t nab, uint64_t n, uint64_t seed) {
    if (nb == 0) throw std::invalid_argument("ratio_estimate: empty denominator");
    double pa = (double)na / n, pb = (double)nb / n, pab = (double)nab / n;
    double r = pa / pb;
    // var(r) ~ r^2 (var a / a^2 + var b / b^2 - 2 cov / ab) / n
    double va = pa * (1 - pa), vb = pb * (1 - pb), cab = pab - pa * pb;
    double rel = va / (pa * pa) + vb / (pb * pb) - 2 * cab / (pa * pb);
    Estimate e;
    e.mean = r;
    e.stderr_ = r * std::sqrt(std::max(0.0, rel) / n);
    e.n = n;
    e.seed = seed;
    return e;
}

// ---------------------------------------------------------------------------
// Weighted least squares for log-log exponent fits.
// ---------------------------------------------------------------------------

struct FitResult {
    double slope = 0.0;
    double slope_stderr = 0.0;
    double intercept = 0.0;
    double chi2 = 0.0;
    int dof = 0;
};

// fit log(y) = slope * log(x) + b, weights from the propagated stderr of y
inline FitResult fit_exponent(const std::vector<std::pair<double, Estimate>>& points) {
    if (points.size() < 3) throw std::invalid_argument("fit_exponent: need at least 3 scales");
    double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
    std::vector<double> xs, ys, ws;
    for (auto& [scale, est] : points) {
        if (est.mean <= 0) throw std::invalid_argument("fit_exponent: non-positive estimate");
        double x = std::log(scale);
        double y = std::log(est.mean);
        double sigma = est.stderr_ > 0 ? est.stderr_ / est.mean : 1e-12;
        double w = 1.0 / (sigma * sigma);
        xs.push_back(x);
        ys.push_back(y);
        ws.push_back(w);
        sw += w;
        swx += w * x;
        swy += w * y;
        swxx += w * x * x;
        swxy += w * x * y;
    }
    double det = sw * swxx - swx * swx;
    FitResult f;
    f.slope = (sw * swxy - swx * swy) / det;
    f.intercept = (swxx * swy - swx * swxy) / det;
    f.slope_stderr = std::sqrt(sw / det);
    for (size_t i = 0; i < xs.size(); ++i) {
        double resid = ys[i] - f.slope * xs[i] - f.intercept;
        f.chi2 += ws[i] * resid * resid;
    }
    f.dof = (int)xs.size() - 2;
    return f;
}

// ---------------------------------------------------------------------------
// Empirical total-variation distance between two histograms over a shared
// discrete fingerprint space, with a seeded bootstrap for confidence bounds.
// ---------------------------------------------------------------------------

using Histogram = std::map<uint64_t, uint64_t>;

inline double tv_distance(const Histogram& a, uint64_t na, const Histogram& b, uint64_t nb) {
    if (na == 0 || nb == 0) throw std::invalid_argument("tv_distance: empty sample");
    double tv = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() || ib != b.end()) {
        double pa = 0, pb = 0;
        if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
            pa = (double)ia->second / na;
            ++ia;
        } else if (ia == a.end() || ib->first < ia->first) {
            pb = (double)ib->second / nb;
            ++ib;
        } else {
            pa = (double)ia->second / na;
            pb = (double)ib->second / nb;
            ++ia;
            ++ib;
        }
        tv += std::fabs(pa - pb);
    }
    return 0.5 * tv;
}

// multinomial bootstrap resample of a histogram
inline Histogram bootstrap_histogram(const Histogram& h, uint64_t n, SplitMix& rng) {
    std::vector<std::pair<uint64_t, double>> cdf;
    double acc = 0;
    for (auto& [k, c] : h) {
        acc += (double)c / n;
        cdf.push_back({k, acc});
    }
    Histogram out;
    for (uint64_t i = 0; i < n; ++i) {
        double u = rng.uniform();
        auto it = std::lower_bound(cdf.begin(), cdf.end(), u,
                                   [](const auto& p, double x) { return p.second < x; });
        if (it == cdf.end()) it = std::prev(cdf.end());
        out[it->first]++;
    }
    return out;
}

struct TvEstimate {
    double tv = 0.0;
    double boot_stderr = 0.0;
    uint64_t na = 0, nb = 0;
};

inline TvEstimate tv_with_bootstrap(const Histogram& a, uint64_t na, const Histogram& b,
                                    uint64_t nb, int reps, uint64_t seed) {
    TvEstimate out;
    out.tv = tv_distance(a, na, b, nb);
    out.na = na;
    out.nb = nb;
    SplitMix rng(seed ^ 0x7477626f6f74ull);
    double s = 0, ss = 0;
    for (int i = 0; i < reps; ++i) {
        Histogram ra = bootstrap_histogram(a, na, rng);
        Histogram rb = bootstrap_histogram(b, nb, rng);
        double t = tv_distance(ra, na, rb, nb);
        s += t;
        ss += t * t;
    }
    double m = s / reps;
    out.boot_stderr = std::sqrt(std::max(0.0, ss / reps - m * m));
    return out;
}

} // namespace perc
