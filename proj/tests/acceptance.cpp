// Acceptance suite: one test case per criterion, each printing a single
// pass/fail line.  Run via ctest or directly (`./acceptance`).

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <memory>
#include <string>

#include "hitrun/analysis.hpp"
#include "hitrun/bodies.hpp"
#include "hitrun/sampler.hpp"

using namespace hitrun;

namespace {

void report(int id, const std::string& name, bool pass) {
    std::cout << "[criterion " << id << "] " << (pass ? "PASS" : "FAIL")
              << ": " << name << std::endl;
}

std::vector<Eigen::Vector2d> chain_points_2d(const ConvexBody& body, long retained,
                                             std::uint64_t seed) {
    ChainConfig cfg;
    cfg.burn_in = default_burn_in(body.dim());
    cfg.thin = 8;  // decorrelate so the chi2 statistic keeps its null law
    cfg.steps = retained * cfg.thin + cfg.burn_in;
    cfg.seed = seed;
    std::vector<Eigen::Vector2d> pts;
    pts.reserve(retained);
    run_chain(body, cfg, [&](const Rvec& p) { pts.emplace_back(p(0), p(1)); });
    return pts;
}

// Rescaled spectra x = N*lambda of chain states, optionally of the partial
// transpose, collected directly from the coordinate stream.
std::vector<double> chain_spectra(const QuantumBody& body, const ChainConfig& cfg,
                                  bool transpose_first = false,
                                  const BipartiteShape* shape = nullptr) {
    const int n = body.matrix_dim();
    std::vector<double> values;
    values.reserve(cfg.retained() * n);
    run_chain(body, cfg, [&](const Rvec& p) {
        Cmat m = body.basis().coords_to_matrix(p);
        if (transpose_first) m = partial_transpose(m, *shape);
        const Rvec lam = eigenvalues_hermitian(m, 1e-8);
        for (int i = 0; i < n; ++i) values.push_back(n * lam(i));
    });
    return values;
}

std::vector<double> chain_spectra_ppt(const PptBody& body, const ChainConfig& cfg,
                                      bool transpose_first) {
    const int n = body.shape().n;
    std::vector<double> values;
    values.reserve(cfg.retained() * n);
    run_chain(body, cfg, [&](const Rvec& p) {
        Cmat m = body.basis().coords_to_matrix(p);
        if (transpose_first) m = partial_transpose(m, body.shape());
        const Rvec lam = eigenvalues_hermitian(m, 1e-8);
        for (int i = 0; i < n; ++i) values.push_back(n * lam(i));
    });
    return values;
}

std::vector<double> ginibre_spectra(int n, long samples, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> values;
    values.reserve(samples * n);
    for (long s = 0; s < samples; ++s) {
        const DensityMatrix rho = wishart_state(ginibre_sample(n, rng));
        const Rvec lam = eigenvalues_hermitian(rho.mat());
        for (int i = 0; i < n; ++i) values.push_back(n * lam(i));
    }
    return values;
}

}  // namespace

TEST_CASE("criterion 1: square and disk uniformity over 100 seeded runs") {
    const long retained = 500000;
    int rejects_square = 0, rejects_disk = 0;
    {
        CubeBody square(2);
        for (int rep = 0; rep < 100; ++rep) {
            const auto pts = chain_points_2d(square, retained, derive_seed(1001, rep));
            if (chi2_uniformity_test(pts, 0.05, 0.999, UniformDomain::unit_square).reject)
                ++rejects_square;
        }
    }
    {
        BallBody disk(2);
        for (int rep = 0; rep < 100; ++rep) {
            const auto pts = chain_points_2d(disk, retained, derive_seed(2002, rep));
            if (chi2_uniformity_test(pts, 0.05, 0.999, UniformDomain::unit_disk).reject)
                ++rejects_disk;
        }
    }
    const bool pass = rejects_square <= 5 && rejects_disk <= 5;
    report(1, "chi2 uniformity non-rejections >= 95/100 (square: " +
                  std::to_string(100 - rejects_square) + ", disk: " +
                  std::to_string(100 - rejects_disk) + ")", pass);
    CHECK(pass);
}

// Criteria 2 and 3 share the same 1e5-state two-qubit batch.
TEST_CASE("criteria 2 and 3: two-qubit transposed spectra") {
    const BipartiteShape shape(2);
    Rng rng(30303);
    const long draws = 100000;
    long ppt_count = 0;
    bool structure_ok = true;
    double min_chi = 0.0;
    for (long s = 0; s < draws; ++s) {
        const DensityMatrix rho = wishart_state(ginibre_sample(4, rng));
        const Rvec chi = eigenvalues_hermitian(partial_transpose(rho.mat(), shape));
        int negatives = 0;
        for (int i = 0; i < 4; ++i)
            if (chi(i) < 0.0) ++negatives;
        if (negatives == 0) ++ppt_count;
        if (negatives > 1) structure_ok = false;
        min_chi = std::min(min_chi, chi(0));
    }
    const double fraction = static_cast<double>(ppt_count) / draws;
    const bool c2 = std::abs(fraction - 8.0 / 33.0) <= 0.01;
    report(2, "PPT fraction " + std::to_string(fraction) + " within 8/33 +- 0.01", c2);
    CHECK(c2);

    const bool c3 = structure_ok && min_chi >= -0.5 - 1e-9;
    report(3, "at most one negative transposed eigenvalue, min chi = " +
                  std::to_string(min_chi) + " >= -0.5", c3);
    CHECK(c3);
}

TEST_CASE("criterion 4: chain vs Ginibre spectra on the N=9 state set") {
    QuantumBody omega9(9);
    ChainConfig cfg;
    cfg.burn_in = default_burn_in(omega9.dim());  // 800 >= 10 d
    cfg.thin = 40;
    cfg.steps = cfg.burn_in + 50000L * cfg.thin;
    cfg.seed = 40404;
    const auto chain_vals = chain_spectra(omega9, cfg);
    const auto ginibre_vals = ginibre_spectra(9, 50000, 50505);
    const auto ks = ks_two_sample(chain_vals, ginibre_vals);
    const bool pass = ks.p_value > 0.01;
    report(4, "two-sample KS p = " + std::to_string(ks.p_value) + " > 0.01", pass);
    CHECK(pass);
}

TEST_CASE("criterion 5: analytic-law self-checks") {
    bool pass = true;
    const double tol = 1e-9;
    pass &= std::abs(integrate_endpoint_singular(mp_density, 0, 4) - 1.0) < tol;
    pass &= std::abs(integrate(ssc_density, -1, 3) - 1.0) < tol;
    pass &= std::abs(integrate_endpoint_singular(ppt_density, 0, 3) - 1.0) < tol;
    const auto h0 = [](double y) { return dm_wall_density(y, 0.0); };
    pass &= std::abs(integrate_endpoint_singular(h0, 0, dm_edge(0.0)) - 1.0) < tol;
    pass &= std::abs(integrate_endpoint_singular([](double x) { return x * mp_density(x); },
                                                 0, 4) - 1.0) < tol;
    pass &= std::abs(integrate([](double x) { return x * ssc_density(x); }, -1, 3) - 1.0) < tol;
    pass &= std::abs(integrate_endpoint_singular([](double x) { return x * ppt_density(x); },
                                                 0, 3) - 1.0) < tol;
    pass &= std::abs(dm_edge(0.0) - 2.0 * std::sqrt(6.0) / 3.0) < 1e-12;
    const double c = 3.0 / dm_edge(0.0);
    for (int i = 0; i <= 1000; ++i) {
        const double x = 3.0 * i / 1000.0;
        pass &= std::abs(ppt_density(x) - dm_wall_density(x / c, 0.0) / c) < 1e-9;
    }
    report(5, "normalizations, means, L(0) and the h_0 -> g transport", pass);
    CHECK(pass);
}

TEST_CASE("criterion 6: PPT chain level density at K=3 and K=4") {
    // K = 3
    PptBody ppt3(3);
    ChainConfig cfg3;
    cfg3.burn_in = default_burn_in(ppt3.dim());
    cfg3.thin = 10;
    cfg3.steps = cfg3.burn_in + 50000L * cfg3.thin;
    cfg3.seed = 60606;
    const auto spec3 = chain_spectra_ppt(ppt3, cfg3, false);
    const auto spec3t = chain_spectra_ppt(ppt3, cfg3, true);

    const auto ks = ks_two_sample(spec3, spec3t);
    const bool pass_a = ks.p_value > 0.01;

    long below = 0;
    for (double v : spec3)
        if (v < 3.5) ++below;
    const double frac_below = static_cast<double>(below) / spec3.size();
    const bool pass_b = frac_below >= 0.99;

    Histogram h3 = Histogram::regular(0.0, 4.5, 45);
    h3.add_all(spec3);
    const double chi_g3 = chi2_against_density(h3, ppt_density);
    const double chi_mp3 = chi2_against_density(h3, mp_density);
    const bool pass_c3 = chi_g3 < chi_mp3;

    // K = 4, reduced scale
    PptBody ppt4(4);
    ChainConfig cfg4;
    cfg4.burn_in = default_burn_in(ppt4.dim());
    cfg4.thin = 10;
    cfg4.steps = cfg4.burn_in + 10000L * cfg4.thin;
    cfg4.seed = 70707;
    const auto spec4 = chain_spectra_ppt(ppt4, cfg4, false);
    Histogram h4 = Histogram::regular(0.0, 4.5, 45);
    h4.add_all(spec4);
    const double chi_g4 = chi2_against_density(h4, ppt_density);
    const double chi_mp4 = chi2_against_density(h4, mp_density);
    const bool trend = (chi_g4 / chi_mp4) < (chi_g3 / chi_mp3);

    const bool pass = pass_a && pass_b && pass_c3 && (chi_g4 < chi_mp4) && trend;
    report(6, "involution KS p = " + std::to_string(ks.p_value) +
                  ", frac(x<3.5) = " + std::to_string(frac_below) +
                  ", chi2 ratios g/MP: K3 = " + std::to_string(chi_g3 / chi_mp3) +
                  ", K4 = " + std::to_string(chi_g4 / chi_mp4), pass);
    CHECK(pass_a);
    CHECK(pass_b);
    CHECK(pass_c3);
    CHECK(chi_g4 < chi_mp4);
    CHECK(trend);
}

TEST_CASE("criterion 7: convergence-rate calculator") {
    bool pass = true;
    pass &= std::abs(theta_bound(1.0, 1.0, 2) - 0.5) < 1e-15;
    pass &= std::abs(theta_bound(0.5, 1.0, 4) - 1.0 / 108.0) < 1e-15;
    const double n = 25.0;
    const long double th25 = theta_bound(1.0 / std::sqrt(n * (n - 1.0)),
                                         std::sqrt((n - 1.0) / n), 624);
    pass &= th25 > 0.0L && std::isfinite(th25) && th25 < 1.0L;

    // d=1 sanity anchor: a single step is exactly uniform
    CubeBody interval(1);
    std::vector<double> stepped, direct;
    Rng ref(123);
    for (int i = 0; i < 20000; ++i) {
        Rng rng(derive_seed(808, i));
        stepped.push_back(hit_and_run_step(interval, Rvec::Constant(1, 0.25), rng)(0));
        direct.push_back(ref.uniform01());
    }
    pass &= ks_two_sample(stepped, direct).p_value > 0.01;

    report(7, "theta values exact, no underflow at d=624, d=1 one-step uniformity", pass);
    CHECK(pass);
}

TEST_CASE("criterion 8: chord property suite vs bisection oracle") {
    bool pass = true;
    std::vector<std::unique_ptr<ConvexBody>> bodies;
    bodies.push_back(std::make_unique<BallBody>(5));
    bodies.push_back(std::make_unique<CubeBody>(5));
    bodies.push_back(std::make_unique<SimplexBody>(5));
    bodies.push_back(std::make_unique<QuantumBody>(3));
    bodies.push_back(std::make_unique<PptBody>(2));
    for (const auto& body : bodies) {
        Rng rng(derive_seed(909, body->dim()));
        const double R = body->radii().outradius;
        const double eps = 1e-6 * R;
        for (int t = 0; t < 1000; ++t) {
            Rvec p = body->center();
            for (int i = 0; i < 5; ++i) p = hit_and_run_step(*body, p, rng);
            Rvec e(body->dim());
            for (int i = 0; i < e.size(); ++i) e(i) = rng.gaussian();
            e.normalize();
            const Chord c = body->chord(p, e);
            pass &= body->contains(p + (c.t_max - eps) * e, 1e-12);
            pass &= body->contains(p + (c.t_min + eps) * e, 1e-12);
            pass &= !body->contains(p + (c.t_max + eps) * e, 0.0);
            pass &= !body->contains(p + (c.t_min - eps) * e, 0.0);
            // independent bisection oracle on the membership predicate
            auto inside = [&](double t) { return body->contains(p + t * e, 1e-12); };
            const double scale = std::max(1.0, c.length());
            for (double sign : {-1.0, 1.0}) {
                double lo = 0.0, hi = 2.0 * R + 1.0;
                while (hi - lo > 1e-10) {
                    const double mid = 0.5 * (lo + hi);
                    (inside(sign * mid) ? lo : hi) = mid;
                }
                const double endpoint = (sign < 0) ? c.t_min : c.t_max;
                pass &= std::abs(sign * lo - endpoint) < 1e-8 * scale;
            }
        }
    }
    report(8, "1000 closed-form chords per body match bisection to 1e-8", pass);
    CHECK(pass);
}
