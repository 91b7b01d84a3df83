#ifndef HITRUN_QUANTUM_HPP
#define HITRUN_QUANTUM_HPP

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

#include "hitrun/rng.hpp"

namespace hitrun {

using Cmat = Eigen::MatrixXcd;
using Rvec = Eigen::VectorXd;

inline constexpr double kHermTol = 1e-12;   // relative hermiticity / trace tolerance
inline constexpr double kPsdTol = 1e-10;    // absolute floor on the minimum eigenvalue

struct BipartiteShape {
    int k;  // local dimension
    int n;  // total dimension, n = k*k

    explicit BipartiteShape(int local) : k(local), n(local * local) {
        if (local < 2) throw std::invalid_argument("BipartiteShape: local dimension must be >= 2");
    }
};

// Unit-trace PSD Hermitian matrix.  Invariants are checked at construction.
class DensityMatrix {
public:
    explicit DensityMatrix(Cmat m);

    const Cmat& mat() const { return m_; }
    int dim() const { return static_cast<int>(m_.rows()); }

private:
    Cmat m_;
};

// Traceless Hermitian matrix with unit Hilbert-Schmidt norm; a chain
// direction in the space of unit-trace Hermitian matrices.
class HermitianDirection {
public:
    explicit HermitianDirection(Cmat m);

    const Cmat& mat() const { return m_; }
    int dim() const { return static_cast<int>(m_.rows()); }

private:
    Cmat m_;
};

bool is_hermitian(const Cmat& m, double tol = kHermTol);

// n x n matrix with i.i.d. standard complex Gaussian entries
// (real and imaginary parts independent N(0, 1/2), so E|G_ij|^2 = 1).
Cmat ginibre_sample(int n, Rng& rng);

// rho = G G^dag / Tr(G G^dag); Hilbert-Schmidt uniform over Ginibre inputs.
DensityMatrix wishart_state(const Cmat& g);

// Transpose one tensor factor under the K x K block decomposition.
// Default transposes the second factor.  Output is Hermitian and
// unit-trace but in general not PSD.
Cmat partial_transpose(const Cmat& m, const BipartiteShape& shape, int subsystem = 2);

// Ascending real spectrum of a Hermitian matrix; validates hermiticity.
Rvec eigenvalues_hermitian(const Cmat& m, double tol = 1e-9);

// Orthonormal basis (Hilbert-Schmidt inner product) of the traceless
// Hermitian matrices of size N: the generalized Gell-Mann family in a fixed
// order.  For each pair i<j in row-major order the symmetric element
// (E_ij+E_ji)/sqrt(2) comes first, then the antisymmetric
// -i(E_ij-E_ji)/sqrt(2); the N-1 diagonal elements
// (E_00+...+E_{l-1,l-1} - l E_ll)/sqrt(l(l+1)) follow, l = 1..N-1.
// coords_to_matrix / matrix_to_coords form a linear isometry between
// R^{N^2-1} with the Euclidean norm and the traceless Hermitian matrices
// with the HS norm, anchored at I/N.
class TracelessBasis {
public:
    explicit TracelessBasis(int n);

    int matrix_dim() const { return n_; }
    int coord_dim() const { return n_ * n_ - 1; }

    // I/N + sum_i v_i B_i
    Cmat coords_to_matrix(const Rvec& v) const;

    // Traceless part of M expanded in the basis; requires unit trace.
    Rvec matrix_to_coords(const Cmat& m) const;

    // Expand a coordinate vector without the I/N offset (for directions).
    Cmat traceless_from_coords(const Rvec& v) const;
    Rvec coords_from_traceless(const Cmat& m) const;

private:
    int n_;
};

// Uniform draw from the unit sphere of the traceless Hermitian space,
// via a normalized standard Gaussian vector in R^{N^2-1}.
HermitianDirection random_direction(int n, Rng& rng);

}  // namespace hitrun

#endif
