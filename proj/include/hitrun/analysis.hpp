#ifndef HITRUN_ANALYSIS_HPP
#define HITRUN_ANALYSIS_HPP

#include <functional>
#include <optional>
#include <vector>

#include "json.hpp"

#include "hitrun/quantum.hpp"

namespace hitrun {

// ---------------------------------------------------------------------------
// Analytic level densities (rescaled eigenvalue x = N*lambda)

// Marchenko-Pastur density (1/2pi) sqrt((4-x)/x) on (0,4].
double mp_density(double x);

// Shifted semicircle (1/2pi) sqrt(4-(x-1)^2) on [-1,3].
double ssc_density(double x);

// Upper support edge L(z) = (2/3)(sqrt(z^2+6) - z) of the hard-wall GUE family.
double dm_edge(double z);

// Hard-wall GUE density h_z(y) = sqrt(L(z)-y)/(2 pi sqrt(y)) (L(z)+2y+2z)
// on (0, L(z)].
double dm_wall_density(double y, double z);

// Conjectured PPT level density g(x) = (4/27pi) sqrt((3-x)/x) (3+2x) on (0,3].
double ppt_density(double x);

// ---------------------------------------------------------------------------
// Convergence-rate calculator

// theta = (2/d) [(R/r+1)^{d-1} (R/r)]^{-1}, evaluated in extended precision
// so it stays positive for d in the hundreds, where double would underflow.
long double theta_bound(double r, double R, long d);

// (1-theta)^n, an upper bound on the total-variation distance to uniform.
double tv_bound(long double theta, long n);

// Minimal n with (1-theta)^n <= eps, saturating at LONG_MAX.
long steps_for_tv(long double theta, double eps);

// ---------------------------------------------------------------------------
// Quadrature

// Adaptive Simpson on [a,b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-12);

// As above but with the substitution x = a+u^2 (resp. b-u^2) applied on each
// half, which removes inverse-square-root endpoint singularities exactly.
double integrate_endpoint_singular(const std::function<double(double)>& f,
                                   double a, double b, double tol = 1e-12);

// ---------------------------------------------------------------------------
// Special functions

// Regularized lower incomplete gamma P(a,x).
double regularized_gamma_p(double a, double x);

// Survival function of the chi-squared distribution with k dof.
double chi_squared_sf(double x, double k);

// Kolmogorov survival function Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_sf(double lambda);

// ---------------------------------------------------------------------------
// Histograms

struct Histogram {
    std::vector<double> edges;   // ascending, size = counts.size() + 1
    std::vector<long> counts;
    long total = 0;              // sum of counts

    static Histogram regular(double lo, double hi, int bins);

    // Values are assigned to the right-open bin [e_i, e_{i+1}); values
    // outside [e_0, e_last) are ignored.
    void add(double v);
    void add_all(const std::vector<double>& values);

    // Monoid merge of identically binned histograms.
    void merge(const Histogram& other);

    int bins() const { return static_cast<int>(counts.size()); }
};

Histogram histogram(const std::vector<double>& values, std::vector<double> edges);

// ---------------------------------------------------------------------------
// Spectral statistics

enum class Rescale { none, by_n };
enum class Transform { identity, partial_transpose };

struct SpectralSample {
    std::vector<double> values;
    int dim = 0;
    nlohmann::json meta;
};

SpectralSample spectral_statistics(const std::vector<DensityMatrix>& states,
                                   Rescale rescale, Transform transform,
                                   const std::optional<BipartiteShape>& shape = {});

// ---------------------------------------------------------------------------
// Goodness of fit

struct GofResult {
    double statistic = 0.0;
    long dof = 0;
    double p_value = 0.0;
    bool reject = false;
};

enum class UniformDomain { unit_square, unit_disk };

// Pearson chi-squared test of 2-D points against the uniform distribution
// on the domain, with square bins of the given side.  Disk bins straddling
// the boundary get expected counts proportional to the exact bin/disk
// intersection area; cells with expectation < 5 are pooled into one cell.
GofResult chi2_uniformity_test(const std::vector<Eigen::Vector2d>& points,
                               double bin_side, double confidence,
                               UniformDomain domain);

struct KsResult {
    double statistic = 0.0;
    double p_value = 0.0;
};

// Two-sample Kolmogorov-Smirnov with the asymptotic p-value.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// Pearson statistic of a histogram against expected counts from a density,
// pooling bins left to right until each cell's expectation reaches 5.
double chi2_against_density(const Histogram& h,
                            const std::function<double(double)>& density);

// Exact area of [x0,x1] x [y0,y1] intersected with the unit disk.
double disk_rect_area(double x0, double x1, double y0, double y1);

// ---------------------------------------------------------------------------
// Finite-N level density P_N(x)

// Monte Carlo backend: histogram estimate from Ginibre/Wishart spectra.
// Coefficient backend: sum_{m=2}^{2N} a_m (Nx)^{m-2} (1-Nx)^{N^2-m} with an
// externally supplied table a_2..a_{2N}.
class FiniteNDensity {
public:
    static FiniteNDensity monte_carlo(int n, long samples, std::uint64_t seed,
                                      int bins = 200);
    static FiniteNDensity from_coefficients(int n, std::vector<double> coeffs);

    double operator()(double x) const;
    int matrix_dim() const { return n_; }

private:
    FiniteNDensity() = default;
    int n_ = 0;
    bool monte_carlo_ = true;
    Histogram hist_;               // monte-carlo backend
    std::vector<double> coeffs_;   // coefficient backend, a_m for m = 2..2N
};

}  // namespace hitrun

#endif
