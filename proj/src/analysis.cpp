#include "hitrun/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hitrun {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

// ---------------------------------------------------------------------------
// Densities

double mp_density(double x) {
    if (x <= 0.0 || x > 4.0) return 0.0;
    return std::sqrt((4.0 - x) / x) / (2.0 * kPi);
}

double ssc_density(double x) {
    const double s = 4.0 - (x - 1.0) * (x - 1.0);
    if (s <= 0.0) return 0.0;
    return std::sqrt(s) / (2.0 * kPi);
}

double dm_edge(double z) { return (2.0 / 3.0) * (std::sqrt(z * z + 6.0) - z); }

double dm_wall_density(double y, double z) {
    const double edge = dm_edge(z);
    if (y <= 0.0 || y > edge) return 0.0;
    return std::sqrt(edge - y) / (2.0 * kPi * std::sqrt(y)) * (edge + 2.0 * y + 2.0 * z);
}

double ppt_density(double x) {
    if (x <= 0.0 || x > 3.0) return 0.0;
    return (4.0 / (27.0 * kPi)) * std::sqrt((3.0 - x) / x) * (3.0 + 2.0 * x);
}

// ---------------------------------------------------------------------------
// Convergence bounds

long double theta_bound(double r, double R, long d) {
    if (!(r > 0.0) || !(R >= r) || d < 1)
        throw std::invalid_argument("theta_bound: need 0 < r <= R and d >= 1");
    const long double ratio = static_cast<long double>(R) / r;
    const long double log_theta =
        std::log(2.0L) - std::log(static_cast<long double>(d)) -
        (d - 1) * std::log(ratio + 1.0L) - std::log(ratio);
    return std::exp(log_theta);
}

double tv_bound(long double theta, long n) {
    if (!(theta > 0.0L) || theta > 1.0L)
        throw std::invalid_argument("tv_bound: theta must be in (0,1]");
    if (n < 0) throw std::invalid_argument("tv_bound: n must be >= 0");
    if (n == 0) return 1.0;
    if (theta == 1.0L) return 0.0;
    return static_cast<double>(std::exp(n * std::log1p(-theta)));
}

long steps_for_tv(long double theta, double eps) {
    if (!(theta > 0.0L) || theta >= 1.0L)
        throw std::invalid_argument("steps_for_tv: theta must be in (0,1)");
    if (!(eps > 0.0) || eps > 1.0)
        throw std::invalid_argument("steps_for_tv: eps must be in (0,1]");
    if (eps >= 1.0) return 0;
    const long double n = std::ceil(std::log(static_cast<long double>(eps)) /
                                    std::log1p(-theta) - 1e-12L);
    if (n >= static_cast<long double>(std::numeric_limits<long>::max()))
        return std::numeric_limits<long>::max();
    return static_cast<long>(n);
}

// ---------------------------------------------------------------------------
// Quadrature

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double b,
                   double fa, double fm, double fb, double whole, double tol,
                   int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 52);
}

double integrate_endpoint_singular(const std::function<double(double)>& f,
                                   double a, double b, double tol) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    // x = a + u^2 on the left half, x = b - u^2 on the right
    const auto left = [&](double u) { return 2.0 * u * f(a + u * u); };
    const auto right = [&](double u) { return 2.0 * u * f(b - u * u); };
    return integrate(left, 0.0, std::sqrt(m - a), 0.5 * tol) +
           integrate(right, 0.0, std::sqrt(b - m), 0.5 * tol);
}

// ---------------------------------------------------------------------------
// Special functions

double regularized_gamma_p(double a, double x) {
    if (x < 0.0 || a <= 0.0)
        throw std::invalid_argument("regularized_gamma_p: bad arguments");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) {
        // series expansion
        double ap = a, sum = 1.0 / a, del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-16) break;
        }
        return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    // continued fraction for Q(a,x)
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    const double q = std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
    return 1.0 - q;
}

double chi_squared_sf(double x, double k) {
    if (x <= 0.0) return 1.0;
    return 1.0 - regularized_gamma_p(0.5 * k, 0.5 * x);
}

double kolmogorov_sf(double lambda) {
    if (lambda < 1e-8) return 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 200; ++k) {
        const double term = 2.0 * std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 == 1) ? term : -term;
        if (term < 1e-16) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Histograms

Histogram Histogram::regular(double lo, double hi, int bins) {
    if (bins < 1 || !(hi > lo))
        throw std::invalid_argument("Histogram::regular: bad range");
    Histogram h;
    h.edges.resize(bins + 1);
    for (int i = 0; i <= bins; ++i)
        h.edges[i] = lo + (hi - lo) * i / bins;
    h.counts.assign(bins, 0);
    return h;
}

void Histogram::add(double v) {
    if (v < edges.front() || v >= edges.back()) return;
    const auto it = std::upper_bound(edges.begin(), edges.end(), v);
    const auto idx = static_cast<std::size_t>(it - edges.begin()) - 1;
    ++counts[idx];
    ++total;
}

void Histogram::add_all(const std::vector<double>& values) {
    for (double v : values) add(v);
}

void Histogram::merge(const Histogram& other) {
    if (other.edges != edges)
        throw std::invalid_argument("Histogram::merge: incompatible binning");
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
    total += other.total;
}

Histogram histogram(const std::vector<double>& values, std::vector<double> edges) {
    if (edges.size() < 2 || !std::is_sorted(edges.begin(), edges.end()))
        throw std::invalid_argument("histogram: need ascending edges");
    Histogram h;
    h.edges = std::move(edges);
    h.counts.assign(h.edges.size() - 1, 0);
    h.add_all(values);
    return h;
}

// ---------------------------------------------------------------------------
// Spectral statistics

SpectralSample spectral_statistics(const std::vector<DensityMatrix>& states,
                                   Rescale rescale, Transform transform,
                                   const std::optional<BipartiteShape>& shape) {
    SpectralSample out;
    if (states.empty()) return out;
    out.dim = states.front().dim();
    if (transform == Transform::partial_transpose) {
        if (!shape) throw std::invalid_argument("spectral_statistics: shape required for partial transpose");
        if (shape->n != out.dim)
            throw std::invalid_argument("spectral_statistics: shape does not match state dimension");
    }
    out.values.reserve(states.size() * out.dim);
    const double scale = (rescale == Rescale::by_n) ? out.dim : 1.0;
    for (const auto& s : states) {
        if (s.dim() != out.dim)
            throw std::invalid_argument("spectral_statistics: mixed dimensions in stream");
        const Cmat m = (transform == Transform::partial_transpose)
                           ? partial_transpose(s.mat(), *shape)
                           : s.mat();
        const Rvec lam = eigenvalues_hermitian(m);
        for (int i = 0; i < lam.size(); ++i) out.values.push_back(scale * lam(i));
    }
    out.meta = {{"n", out.dim},
                {"transform", transform == Transform::partial_transpose ? "partial" : "none"},
                {"rescale", rescale == Rescale::by_n ? "byN" : "none"}};
    return out;
}

// ---------------------------------------------------------------------------
// Goodness of fit

namespace {

// antiderivative of sqrt(1-x^2)
double circle_cap(double x) {
    x = std::clamp(x, -1.0, 1.0);
    return 0.5 * (x * std::sqrt(std::max(0.0, 1.0 - x * x)) + std::asin(x));
}

}  // namespace

double disk_rect_area(double x0, double x1, double y0, double y1) {
    x0 = std::clamp(x0, -1.0, 1.0);
    x1 = std::clamp(x1, -1.0, 1.0);
    if (x1 <= x0 || y1 <= y0) return 0.0;
    std::vector<double> cuts{x0, x1};
    for (double y : {y0, y1}) {
        if (std::abs(y) < 1.0) {
            const double xb = std::sqrt(1.0 - y * y);
            for (double s : {-xb, xb})
                if (s > x0 && s < x1) cuts.push_back(s);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    double area = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        if (b - a <= 0.0) continue;
        const double xm = 0.5 * (a + b);
        const double c = std::sqrt(std::max(0.0, 1.0 - xm * xm));
        const double top = std::min(y1, c), bot = std::max(y0, -c);
        if (top <= bot) continue;
        // within a cut interval the active bounds do not switch branch
        const double top_int = (y1 < c) ? y1 * (b - a) : circle_cap(b) - circle_cap(a);
        const double bot_int = (y0 > -c) ? y0 * (b - a) : -(circle_cap(b) - circle_cap(a));
        area += top_int - bot_int;
    }
    return area;
}

GofResult chi2_uniformity_test(const std::vector<Eigen::Vector2d>& points,
                               double bin_side, double confidence,
                               UniformDomain domain) {
    if (points.size() < 100)
        throw std::invalid_argument("chi2_uniformity_test: too few points");
    if (!(bin_side > 0.0) || !(confidence > 0.0) || !(confidence < 1.0))
        throw std::invalid_argument("chi2_uniformity_test: bad parameters");

    const double lo = (domain == UniformDomain::unit_square) ? 0.0 : -1.0;
    const double hi = 1.0;
    const int nx = static_cast<int>(std::ceil((hi - lo) / bin_side - 1e-9));

    std::vector<long> obs(static_cast<std::size_t>(nx) * nx, 0);
    for (const auto& p : points) {
        const int i = std::clamp(static_cast<int>((p.x() - lo) / bin_side), 0, nx - 1);
        const int j = std::clamp(static_cast<int>((p.y() - lo) / bin_side), 0, nx - 1);
        if (p.x() < lo || p.x() > hi || p.y() < lo || p.y() > hi)
            throw std::invalid_argument("chi2_uniformity_test: point outside domain");
        ++obs[static_cast<std::size_t>(i) * nx + j];
    }

    std::vector<double> area(obs.size(), 0.0);
    double total_area = 0.0;
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < nx; ++j) {
            const double ax0 = lo + i * bin_side, ax1 = std::min(hi, ax0 + bin_side);
            const double ay0 = lo + j * bin_side, ay1 = std::min(hi, ay0 + bin_side);
            double a;
            if (domain == UniformDomain::unit_square)
                a = (ax1 - ax0) * (ay1 - ay0);
            else
                a = disk_rect_area(ax0, ax1, ay0, ay1);
            area[static_cast<std::size_t>(i) * nx + j] = a;
            total_area += a;
        }

    const double n = static_cast<double>(points.size());
    double stat = 0.0;
    long cells = 0;
    double pooled_obs = 0.0, pooled_exp = 0.0;
    for (std::size_t b = 0; b < obs.size(); ++b) {
        const double expected = n * area[b] / total_area;
        if (expected <= 0.0) {
            if (obs[b] != 0)
                throw std::runtime_error("chi2_uniformity_test: observation in zero-measure bin");
            continue;
        }
        if (expected < 5.0) {
            pooled_obs += obs[b];
            pooled_exp += expected;
            continue;
        }
        const double diff = obs[b] - expected;
        stat += diff * diff / expected;
        ++cells;
    }
    if (pooled_exp > 0.0) {
        const double diff = pooled_obs - pooled_exp;
        stat += diff * diff / pooled_exp;
        ++cells;
    }
    if (cells < 2)
        throw std::invalid_argument("chi2_uniformity_test: too few usable bins");

    GofResult r;
    r.statistic = stat;
    r.dof = cells - 1;
    r.p_value = chi_squared_sf(stat, static_cast<double>(r.dof));
    r.reject = r.p_value < 1.0 - confidence;
    return r;
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t ia = 0, ib = 0;
    double d = 0.0;
    while (ia < a.size() && ib < b.size()) {
        const double v = std::min(a[ia], b[ib]);
        while (ia < a.size() && a[ia] <= v) ++ia;
        while (ib < b.size() && b[ib] <= v) ++ib;
        d = std::max(d, std::abs(ia / na - ib / nb));
    }
    const double ne = na * nb / (na + nb);
    KsResult r;
    r.statistic = d;
    r.p_value = kolmogorov_sf(std::sqrt(ne) * d);
    return r;
}

double chi2_against_density(const Histogram& h,
                            const std::function<double(double)>& density) {
    if (h.total == 0) throw std::invalid_argument("chi2_against_density: empty histogram");
    std::vector<double> expected(h.counts.size());
    for (std::size_t i = 0; i < h.counts.size(); ++i)
        expected[i] = h.total *
            integrate_endpoint_singular(density, h.edges[i], h.edges[i + 1], 1e-10);
    // pool left to right until each cell reaches expectation 5
    double stat = 0.0;
    double cobs = 0.0, cexp = 0.0;
    double tail_obs = 0.0, tail_exp = 0.0;
    bool emitted = false;
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        cobs += h.counts[i];
        cexp += expected[i];
        if (cexp >= 5.0) {
            const double diff = cobs - cexp;
            stat += diff * diff / cexp;
            tail_obs = cobs;
            tail_exp = cexp;
            cobs = cexp = 0.0;
            emitted = true;
        }
    }
    if (cexp > 0.0 || cobs > 0.0) {
        if (emitted) {
            // fold the leftover tail into the last emitted cell
            const double prev = (tail_obs - tail_exp) * (tail_obs - tail_exp) / tail_exp;
            stat -= prev;
            const double o = tail_obs + cobs, e = tail_exp + cexp;
            stat += (o - e) * (o - e) / e;
        } else {
            throw std::invalid_argument("chi2_against_density: too little expected mass");
        }
    }
    return stat;
}

// ---------------------------------------------------------------------------
// Finite-N density

FiniteNDensity FiniteNDensity::monte_carlo(int n, long samples, std::uint64_t seed,
                                           int bins) {
    if (n < 2) throw std::invalid_argument("FiniteNDensity: n must be >= 2");
    if (samples < 1) throw std::invalid_argument("FiniteNDensity: need samples >= 1");
    FiniteNDensity f;
    f.n_ = n;
    f.monte_carlo_ = true;
    f.hist_ = Histogram::regular(0.0, n, bins);
    Rng rng(seed);
    for (long s = 0; s < samples; ++s) {
        const DensityMatrix rho = wishart_state(ginibre_sample(n, rng));
        const Rvec lam = eigenvalues_hermitian(rho.mat());
        for (int i = 0; i < lam.size(); ++i) f.hist_.add(n * lam(i));
    }
    return f;
}

FiniteNDensity FiniteNDensity::from_coefficients(int n, std::vector<double> coeffs) {
    if (n < 2) throw std::invalid_argument("FiniteNDensity: n must be >= 2");
    if (coeffs.size() != static_cast<std::size_t>(2 * n - 1))
        throw std::invalid_argument(
            "FiniteNDensity: coefficient table must list a_m for m = 2..2N");
    FiniteNDensity f;
    f.n_ = n;
    f.monte_carlo_ = false;
    f.coeffs_ = std::move(coeffs);
    return f;
}

double FiniteNDensity::operator()(double x) const {
    if (monte_carlo_) {
        if (x < hist_.edges.front() || x >= hist_.edges.back() || hist_.total == 0)
            return 0.0;
        const auto it = std::upper_bound(hist_.edges.begin(), hist_.edges.end(), x);
        const auto idx = static_cast<std::size_t>(it - hist_.edges.begin()) - 1;
        const double width = hist_.edges[idx + 1] - hist_.edges[idx];
        return hist_.counts[idx] / (hist_.total * width);
    }
    const double u = n_ * x;
    if (u < 0.0 || u > 1.0) return 0.0;
    double sum = 0.0;
    for (int m = 2; m <= 2 * n_; ++m)
        sum += coeffs_[m - 2] * std::pow(u, m - 2) * std::pow(1.0 - u, n_ * n_ - m);
    return sum;
}

}  // namespace hitrun
