#include <doctest.h>

#include "hitrun/bodies.hpp"
#include "hitrun/sampler.hpp"

using namespace hitrun;

namespace {

// Independent chord oracle: bisection on the membership predicate only.
Chord oracle_chord(const ConvexBody& body, const Rvec& p, const Rvec& e,
                   double tol = 1e-10) {
    auto boundary = [&](double sign) {
        double lo = 0.0, hi = 4.0 * body.radii().outradius + 1.0;
        REQUIRE_FALSE(body.contains(p + sign * hi * e, 1e-12));
        while (hi - lo > tol) {
            const double mid = 0.5 * (lo + hi);
            (body.contains(p + sign * mid * e, 1e-12) ? lo : hi) = mid;
        }
        return sign * 0.5 * (lo + hi);
    };
    return Chord{boundary(-1.0), boundary(+1.0)};
}

Rvec random_unit(int d, Rng& rng) {
    Rvec e(d);
    for (int i = 0; i < d; ++i) e(i) = rng.gaussian();
    e.normalize();
    return e;
}

// Random interior point: a few hit-and-run steps from the center.
Rvec interior_point(const ConvexBody& body, Rng& rng, int steps = 5) {
    Rvec p = body.center();
    for (int i = 0; i < steps; ++i) p = hit_and_run_step(body, p, rng);
    return p;
}

void check_chord_against_oracle(const ConvexBody& body, int trials,
                                std::uint64_t seed) {
    Rng rng(seed);
    const double R = body.radii().outradius;
    const double eps = 1e-6 * R;
    for (int t = 0; t < trials; ++t) {
        const Rvec p = interior_point(body, rng);
        const Rvec e = random_unit(body.dim(), rng);
        const Chord c = body.chord(p, e);
        CHECK(c.t_min <= 0.0);
        CHECK(c.t_max >= 0.0);
        CHECK(c.length() <= 2.0 * R + 1e-9);
        // midpoint and endpoints-minus-eps inside, endpoints-plus-eps outside
        CHECK(body.contains(p + 0.5 * (c.t_min + c.t_max) * e, 1e-12));
        CHECK(body.contains(p + (c.t_max - eps) * e, 1e-12));
        CHECK(body.contains(p + (c.t_min + eps) * e, 1e-12));
        CHECK_FALSE(body.contains(p + (c.t_max + eps) * e, 0.0));
        CHECK_FALSE(body.contains(p + (c.t_min - eps) * e, 0.0));
        const Chord o = oracle_chord(body, p, e);
        const double scale = std::max(1.0, c.length());
        CHECK(std::abs(c.t_min - o.t_min) < 1e-8 * scale);
        CHECK(std::abs(c.t_max - o.t_max) < 1e-8 * scale);
    }
}

}  // namespace

TEST_CASE("membership basics") {
    BallBody ball(3);
    CHECK(ball.contains(Rvec::Zero(3), 0.0));
    Rvec outside = Rvec::Zero(3);
    outside(0) = 1.1;
    CHECK_FALSE(ball.contains(outside, 1e-9));

    QuantumBody omega4(4);
    CHECK(omega4.contains(Rvec::Zero(15), 0.0));

    CHECK_THROWS_AS(ball.contains(Rvec::Zero(2), 0.0), std::invalid_argument);
}

TEST_CASE("closed-form chords, hand cases") {
    BallBody ball(4);
    Rng rng(1);
    const Rvec e = random_unit(4, rng);
    const Chord c = ball.chord(Rvec::Zero(4), e);
    CHECK(c.t_min == doctest::Approx(-1.0));
    CHECK(c.t_max == doctest::Approx(1.0));

    CubeBody square(2);
    Rvec mid(2);
    mid << 0.5, 0.5;
    Rvec ex(2);
    ex << 1.0, 0.0;
    const Chord cs = square.chord(mid, ex);
    CHECK(cs.t_min == doctest::Approx(-0.5));
    CHECK(cs.t_max == doctest::Approx(0.5));

    // centroid divides the median 2:1; recover the direction toward vertex 0
    // by finite-differencing q_0 to stay independent of the embedding internals
    SimplexBody tri(3);
    Rvec g(2);
    const double h = 1e-7;
    for (int i = 0; i < 2; ++i) {
        Rvec pp = Rvec::Zero(2), pm = Rvec::Zero(2);
        pp(i) += h;
        pm(i) -= h;
        g(i) = (tri.to_probabilities(pp)(0) - tri.to_probabilities(pm)(0)) / (2 * h);
    }
    g.normalize();
    const Chord cm = tri.chord(Rvec::Zero(2), g);
    CHECK(cm.t_max / (-cm.t_min) == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("psd chord closed forms") {
    // rho = I/N: M = N H, so endpoints are -1/(N lambda) at the extreme eigenvalues
    const int n = 4;
    Rng rng(4);
    const HermitianDirection h = random_direction(n, rng);
    const Rvec lam = eigenvalues_hermitian(h.mat());
    const DensityMatrix mixed = DensityMatrix(Cmat::Identity(n, n) / n);
    const Chord c = psd_chord(mixed, h);
    CHECK(c.t_max == doctest::Approx(-1.0 / (n * lam(0))).epsilon(1e-10));
    CHECK(c.t_min == doctest::Approx(-1.0 / (n * lam(n - 1))).epsilon(1e-10));

    // N=2, H = sigma_z/sqrt(2): chord (-1/sqrt2, 1/sqrt2)
    Cmat sz(2, 2);
    sz << 1, 0, 0, -1;
    const HermitianDirection hz(sz / std::sqrt(2.0));
    const Chord c2 = psd_chord(DensityMatrix(Cmat::Identity(2, 2) / 2.0), hz);
    CHECK(c2.t_min == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(c2.t_max == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("ppt chord nesting") {
    const BipartiteShape shape(2);
    const PptBody body(2);
    Rng rng(6);
    const TracelessBasis& basis = body.basis();
    for (int t = 0; t < 50; ++t) {
        const Rvec p = interior_point(body, rng);
        const Rvec ev = random_unit(body.dim(), rng);
        const DensityMatrix rho(basis.coords_to_matrix(p));
        const HermitianDirection h(basis.traceless_from_coords(ev));
        const Chord joint = ppt_chord(rho, h, shape);
        const Chord plain = psd_chord(rho, h);
        const Chord reflected = psd_chord(partial_transpose(rho.mat(), shape),
                                          partial_transpose(h.mat(), shape));
        CHECK(joint.t_min >= plain.t_min - 1e-12);
        CHECK(joint.t_max <= plain.t_max + 1e-12);
        CHECK(joint.t_min >= reflected.t_min - 1e-12);
        CHECK(joint.t_max <= reflected.t_max + 1e-12);
        CHECK(joint.t_min <= 0.0);
        CHECK(joint.t_max >= 0.0);
    }
}

TEST_CASE("chords agree with the bisection oracle") {
    check_chord_against_oracle(BallBody(5), 200, 101);
    check_chord_against_oracle(CubeBody(5), 200, 102);
    check_chord_against_oracle(SimplexBody(5), 200, 103);
    check_chord_against_oracle(QuantumBody(3), 100, 104);
    check_chord_against_oracle(PptBody(2), 100, 105);
}

TEST_CASE("radii closed forms") {
    const auto simplex4 = SimplexBody(4).radii();
    CHECK(simplex4.outradius == doctest::Approx(std::sqrt(3.0 / 4.0)));
    CHECK(simplex4.inradius == doctest::Approx(1.0 / std::sqrt(12.0)));
    CHECK(simplex4.kappa == doctest::Approx(1.0 / 3.0));

    CHECK(QuantumBody(4).radii().kappa == doctest::Approx(1.0 / 3.0));
    CHECK(CubeBody(4).radii().kappa == doctest::Approx(0.5));
    CHECK(PptBody(2).radii().inradius ==
          doctest::Approx(QuantumBody(4).radii().inradius));

    // radii consistency: samples stay within R; inscribed ball is inside
    Rng rng(17);
    std::vector<std::unique_ptr<ConvexBody>> bodies;
    bodies.push_back(std::make_unique<BallBody>(4));
    bodies.push_back(std::make_unique<CubeBody>(4));
    bodies.push_back(std::make_unique<SimplexBody>(4));
    bodies.push_back(std::make_unique<QuantumBody>(3));
    bodies.push_back(std::make_unique<PptBody>(2));
    for (const auto& b : bodies) {
        const auto rr = b->radii();
        for (int t = 0; t < 500; ++t) {
            const Rvec p = interior_point(*b, rng, 3);
            CHECK((p - b->center()).norm() <= rr.outradius + 1e-9);
        }
        for (int t = 0; t < 200; ++t) {
            const Rvec e = random_unit(b->dim(), rng);
            CHECK(b->contains(b->center() + (rr.inradius - 1e-9) * e, 1e-12));
        }
    }
}

TEST_CASE("descriptor round trip") {
    const PptBody ppt(3);
    const auto body = make_body(ppt.descriptor());
    CHECK(body->kind() == "ppt");
    CHECK(body->dim() == ppt.dim());
    CHECK_THROWS_AS(make_body(nlohmann::json{{"kind", "donut"}}), std::invalid_argument);
}
