#ifndef HITRUN_BODIES_HPP
#define HITRUN_BODIES_HPP

#include <functional>
#include <memory>
#include <string>

#include "json.hpp"

#include "hitrun/quantum.hpp"

namespace hitrun {

// Feasible parameter interval of the line p + t e through an interior
// point p along a unit direction e.  Always contains t = 0.
struct Chord {
    double t_min;  // <= 0
    double t_max;  // >= 0

    double length() const { return t_max - t_min; }
};

struct BodyRadii {
    double inradius;
    double outradius;
    double kappa;  // inradius / outradius
};

// Convex body with exact chord endpoints through any interior point.
// Points live in R^d; matrix bodies expose their states through an
// isometric coordinate embedding (see TracelessBasis).
class ConvexBody {
public:
    virtual ~ConvexBody() = default;

    virtual int dim() const = 0;
    virtual Rvec center() const = 0;
    virtual BodyRadii radii() const = 0;
    virtual std::string kind() const = 0;

    virtual bool contains(const Rvec& point, double tol = 1e-12) const = 0;
    virtual Chord chord(const Rvec& point, const Rvec& direction) const = 0;

    // Tagged descriptor {kind, d|N|K} for run metadata.
    nlohmann::json descriptor() const;
};

// Unit ball centered at the origin.
class BallBody final : public ConvexBody {
public:
    explicit BallBody(int d);
    int dim() const override { return d_; }
    Rvec center() const override { return Rvec::Zero(d_); }
    BodyRadii radii() const override { return {1.0, 1.0, 1.0}; }
    std::string kind() const override { return "ball"; }
    bool contains(const Rvec& p, double tol) const override;
    Chord chord(const Rvec& p, const Rvec& e) const override;

private:
    int d_;
};

// Unit cube [0,1]^d.
class CubeBody final : public ConvexBody {
public:
    explicit CubeBody(int d);
    int dim() const override { return d_; }
    Rvec center() const override { return Rvec::Constant(d_, 0.5); }
    BodyRadii radii() const override;
    std::string kind() const override { return "cube"; }
    bool contains(const Rvec& p, double tol) const override;
    Chord chord(const Rvec& p, const Rvec& e) const override;

private:
    int d_;
};

// Probability simplex with N vertices, embedded isometrically in R^{N-1}
// with the centroid at the origin.  A point p maps to the probability
// vector q = 1/N + U p where U spans the sum-zero hyperplane
// orthonormally; chord endpoints come from the tightest of the N facet
// inequalities q_k >= 0.
class SimplexBody final : public ConvexBody {
public:
    explicit SimplexBody(int n);
    int dim() const override { return n_ - 1; }
    Rvec center() const override { return Rvec::Zero(n_ - 1); }
    BodyRadii radii() const override;
    std::string kind() const override { return "simplex"; }
    bool contains(const Rvec& p, double tol) const override;
    Chord chord(const Rvec& p, const Rvec& e) const override;

    int vertices() const { return n_; }
    Rvec to_probabilities(const Rvec& p) const;

private:
    int n_;
    Eigen::MatrixXd u_;  // N x (N-1), orthonormal columns spanning sum-zero
};

// Largest interval [t_min, t_max] with rho + t H PSD, from the spectrum of
// rho^{-1/2} H rho^{-1/2}.  Falls back to bisection on the minimum
// eigenvalue when rho is within 1e-9 of singular.
Chord psd_chord(const DensityMatrix& rho, const HermitianDirection& h);
Chord psd_chord(const Cmat& rho, const Cmat& h);

// Intersection of the PSD chords of (rho, H) and (rho^{T2}, H^{T2}).
Chord ppt_chord(const DensityMatrix& rho, const HermitianDirection& h,
                const BipartiteShape& shape);

// Generic bracketing bisection on a membership predicate; test oracle and
// near-boundary rescue, not a public body type.
Chord bisection_chord(const std::function<bool(double)>& inside_at,
                      double reach, double tol = 1e-10);

// Set of density matrices of size N in traceless-Hermitian coordinates
// (d = N^2 - 1, center = maximally mixed state).
class QuantumBody final : public ConvexBody {
public:
    explicit QuantumBody(int n);
    int dim() const override { return n_ * n_ - 1; }
    Rvec center() const override { return Rvec::Zero(dim()); }
    BodyRadii radii() const override;
    std::string kind() const override { return "quantum"; }
    bool contains(const Rvec& p, double tol) const override;
    Chord chord(const Rvec& p, const Rvec& e) const override;

    int matrix_dim() const { return n_; }
    const TracelessBasis& basis() const { return basis_; }

protected:
    int n_;
    TracelessBasis basis_;
};

// PPT subset of a K x K bipartite state space: intersection of the PSD
// cone with its partial-transpose reflection.
class PptBody final : public ConvexBody {
public:
    explicit PptBody(int k);
    int dim() const override { return shape_.n * shape_.n - 1; }
    Rvec center() const override { return Rvec::Zero(dim()); }
    BodyRadii radii() const override;
    std::string kind() const override { return "ppt"; }
    bool contains(const Rvec& p, double tol) const override;
    Chord chord(const Rvec& p, const Rvec& e) const override;

    const BipartiteShape& shape() const { return shape_; }
    const TracelessBasis& basis() const { return basis_; }

private:
    BipartiteShape shape_;
    TracelessBasis basis_;
};

BodyRadii body_radii(const ConvexBody& body);

// Factory from a tagged descriptor {kind, d|N|K}; inverse of descriptor().
std::unique_ptr<ConvexBody> make_body(const nlohmann::json& descriptor);

}  // namespace hitrun

#endif
