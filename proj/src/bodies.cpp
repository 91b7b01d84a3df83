#include "hitrun/bodies.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

namespace hitrun {

namespace {

void check_dim(const ConvexBody& body, const Rvec& p) {
    if (p.size() != body.dim())
        throw std::invalid_argument("point dimension does not match body");
}

void check_unit(const Rvec& e) {
    if (std::abs(e.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("direction must be a unit vector");
}

Chord clamp_through_origin(double t_min, double t_max) {
    // A point numerically on the boundary can push an endpoint past 0;
    // clamp it so the chain samples from the remaining segment.
    return Chord{std::min(t_min, 0.0), std::max(t_max, 0.0)};
}

double min_eigenvalue(const Cmat& m) {
    Eigen::SelfAdjointEigenSolver<Cmat> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

constexpr double kSingularFallback = 1e-9;  // lambda_min below this: use bisection

}  // namespace

nlohmann::json ConvexBody::descriptor() const {
    nlohmann::json j;
    j["kind"] = kind();
    if (kind() == "ball" || kind() == "cube") {
        j["d"] = dim();
    } else if (kind() == "simplex") {
        j["n"] = static_cast<const SimplexBody*>(this)->vertices();
    } else if (kind() == "quantum") {
        j["n"] = static_cast<const QuantumBody*>(this)->matrix_dim();
    } else {
        j["k"] = static_cast<const PptBody*>(this)->shape().k;
    }
    return j;
}

BallBody::BallBody(int d) : d_(d) {
    if (d < 1) throw std::invalid_argument("BallBody: dimension must be >= 1");
}

bool BallBody::contains(const Rvec& p, double tol) const {
    check_dim(*this, p);
    return p.norm() <= 1.0 + tol;
}

Chord BallBody::chord(const Rvec& p, const Rvec& e) const {
    check_dim(*this, p);
    check_unit(e);
    if (!contains(p, 1e-9)) throw std::invalid_argument("chord: point outside ball");
    const double b = p.dot(e);
    const double c = p.squaredNorm() - 1.0;
    const double disc = std::sqrt(std::max(b * b - c, 0.0));
    return clamp_through_origin(-b - disc, -b + disc);
}

CubeBody::CubeBody(int d) : d_(d) {
    if (d < 1) throw std::invalid_argument("CubeBody: dimension must be >= 1");
}

BodyRadii CubeBody::radii() const {
    const double r = 0.5, R = 0.5 * std::sqrt(static_cast<double>(d_));
    return {r, R, 1.0 / std::sqrt(static_cast<double>(d_))};
}

bool CubeBody::contains(const Rvec& p, double tol) const {
    check_dim(*this, p);
    return (p.array() >= -tol).all() && (p.array() <= 1.0 + tol).all();
}

Chord CubeBody::chord(const Rvec& p, const Rvec& e) const {
    check_dim(*this, p);
    check_unit(e);
    if (!contains(p, 1e-9)) throw std::invalid_argument("chord: point outside cube");
    double t_min = -std::numeric_limits<double>::infinity();
    double t_max = std::numeric_limits<double>::infinity();
    for (int i = 0; i < d_; ++i) {
        if (e(i) == 0.0) continue;
        const double a = (0.0 - p(i)) / e(i);
        const double b = (1.0 - p(i)) / e(i);
        t_min = std::max(t_min, std::min(a, b));
        t_max = std::min(t_max, std::max(a, b));
    }
    return clamp_through_origin(t_min, t_max);
}

SimplexBody::SimplexBody(int n) : n_(n) {
    if (n < 2) throw std::invalid_argument("SimplexBody: need at least 2 vertices");
    u_.resize(n_, n_ - 1);
    u_.setZero();
    for (int l = 1; l < n_; ++l) {
        const double c = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
        for (int k = 0; k < l; ++k) u_(k, l - 1) = c;
        u_(l, l - 1) = -c * l;
    }
}

BodyRadii SimplexBody::radii() const {
    const double n = n_;
    return {1.0 / std::sqrt(n * (n - 1.0)), std::sqrt((n - 1.0) / n), 1.0 / (n - 1.0)};
}

Rvec SimplexBody::to_probabilities(const Rvec& p) const {
    return Rvec::Constant(n_, 1.0 / n_) + u_ * p;
}

bool SimplexBody::contains(const Rvec& p, double tol) const {
    check_dim(*this, p);
    return (to_probabilities(p).array() >= -tol).all();
}

Chord SimplexBody::chord(const Rvec& p, const Rvec& e) const {
    check_dim(*this, p);
    check_unit(e);
    if (!contains(p, 1e-9)) throw std::invalid_argument("chord: point outside simplex");
    const Rvec q = to_probabilities(p);
    const Rvec w = u_ * e;
    double t_min = -std::numeric_limits<double>::infinity();
    double t_max = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n_; ++k) {
        if (w(k) > 0.0)
            t_min = std::max(t_min, -q(k) / w(k));
        else if (w(k) < 0.0)
            t_max = std::min(t_max, -q(k) / w(k));
    }
    return clamp_through_origin(t_min, t_max);
}

Chord bisection_chord(const std::function<bool(double)>& inside_at,
                      double reach, double tol) {
    if (!inside_at(0.0))
        throw std::invalid_argument("bisection_chord: origin not inside");
    auto boundary = [&](double sign) {
        double lo = 0.0, hi = reach;
        while (inside_at(sign * hi)) {
            lo = hi;
            hi *= 2.0;
            if (hi > 1e6 * reach)
                throw std::runtime_error("bisection_chord: body appears unbounded");
        }
        while (hi - lo > tol) {
            const double mid = 0.5 * (lo + hi);
            (inside_at(sign * mid) ? lo : hi) = mid;
        }
        return sign * lo;
    };
    return Chord{boundary(-1.0), boundary(+1.0)};
}

Chord psd_chord(const Cmat& rho, const Cmat& h) {
    Eigen::SelfAdjointEigenSolver<Cmat> es(rho);
    const Rvec& lam = es.eigenvalues();
    const int n = static_cast<int>(rho.rows());
    const double reach = 2.0 * std::sqrt((n - 1.0) / n);
    if (lam(0) < kSingularFallback) {
        // ill-conditioned inverse square root; fall back to bisection
        auto inside = [&](double t) { return min_eigenvalue(rho + t * h) >= -kPsdTol; };
        return bisection_chord(inside, reach);
    }
    const Cmat inv_sqrt =
        es.eigenvectors() * lam.cwiseInverse().cwiseSqrt().asDiagonal() *
        es.eigenvectors().adjoint();
    Cmat m = inv_sqrt * h * inv_sqrt;
    m = 0.5 * (m + m.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<Cmat> em(m, Eigen::EigenvaluesOnly);
    const double mu_min = em.eigenvalues()(0);
    const double mu_max = em.eigenvalues()(static_cast<int>(m.rows()) - 1);
    // H traceless and nonzero: congruence keeps both signs in the spectrum
    if (mu_min >= 0.0 || mu_max <= 0.0) {
        auto inside = [&](double t) { return min_eigenvalue(rho + t * h) >= -kPsdTol; };
        return bisection_chord(inside, reach);
    }
    return clamp_through_origin(-1.0 / mu_max, -1.0 / mu_min);
}

Chord psd_chord(const DensityMatrix& rho, const HermitianDirection& h) {
    if (rho.dim() != h.dim())
        throw std::invalid_argument("psd_chord: dimension mismatch");
    return psd_chord(rho.mat(), h.mat());
}

Chord ppt_chord(const DensityMatrix& rho, const HermitianDirection& h,
                const BipartiteShape& shape) {
    if (rho.dim() != shape.n || h.dim() != shape.n)
        throw std::invalid_argument("ppt_chord: dimension mismatch");
    const Chord a = psd_chord(rho.mat(), h.mat());
    const Chord b = psd_chord(partial_transpose(rho.mat(), shape),
                              partial_transpose(h.mat(), shape));
    return clamp_through_origin(std::max(a.t_min, b.t_min), std::min(a.t_max, b.t_max));
}

QuantumBody::QuantumBody(int n) : n_(n), basis_(n) {}

BodyRadii QuantumBody::radii() const {
    const double n = n_;
    return {1.0 / std::sqrt(n * (n - 1.0)), std::sqrt((n - 1.0) / n), 1.0 / (n - 1.0)};
}

bool QuantumBody::contains(const Rvec& p, double tol) const {
    check_dim(*this, p);
    return min_eigenvalue(basis_.coords_to_matrix(p)) >= -tol;
}

Chord QuantumBody::chord(const Rvec& p, const Rvec& e) const {
    check_dim(*this, p);
    check_unit(e);
    if (!contains(p, kPsdTol)) throw std::invalid_argument("chord: point outside state set");
    return psd_chord(basis_.coords_to_matrix(p), basis_.traceless_from_coords(e));
}

PptBody::PptBody(int k) : shape_(k), basis_(k * k) {}

BodyRadii PptBody::radii() const {
    // Inradius from the cone decomposition of the PPT set; the enclosing
    // radius of the full state set is used as a valid outer bound.
    const double n = shape_.n;
    return {1.0 / std::sqrt(n * (n - 1.0)), std::sqrt((n - 1.0) / n), 1.0 / (n - 1.0)};
}

bool PptBody::contains(const Rvec& p, double tol) const {
    check_dim(*this, p);
    const Cmat rho = basis_.coords_to_matrix(p);
    if (min_eigenvalue(rho) < -tol) return false;
    return min_eigenvalue(partial_transpose(rho, shape_)) >= -tol;
}

Chord PptBody::chord(const Rvec& p, const Rvec& e) const {
    check_dim(*this, p);
    check_unit(e);
    if (!contains(p, kPsdTol)) throw std::invalid_argument("chord: point outside PPT set");
    const Cmat rho = basis_.coords_to_matrix(p);
    const Cmat h = basis_.traceless_from_coords(e);
    const Chord a = psd_chord(rho, h);
    const Chord b = psd_chord(partial_transpose(rho, shape_), partial_transpose(h, shape_));
    return clamp_through_origin(std::max(a.t_min, b.t_min), std::min(a.t_max, b.t_max));
}

BodyRadii body_radii(const ConvexBody& body) { return body.radii(); }

std::unique_ptr<ConvexBody> make_body(const nlohmann::json& descriptor) {
    const std::string kind = descriptor.at("kind").get<std::string>();
    if (kind == "ball") return std::make_unique<BallBody>(descriptor.at("d").get<int>());
    if (kind == "cube" || kind == "square")
        return std::make_unique<CubeBody>(descriptor.value("d", 2));
    if (kind == "simplex") return std::make_unique<SimplexBody>(descriptor.at("n").get<int>());
    if (kind == "quantum") return std::make_unique<QuantumBody>(descriptor.at("n").get<int>());
    if (kind == "ppt") return std::make_unique<PptBody>(descriptor.at("k").get<int>());
    throw std::invalid_argument("make_body: unknown kind '" + kind + "'");
}

}  // namespace hitrun
