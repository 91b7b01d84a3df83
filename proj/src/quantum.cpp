#include "hitrun/quantum.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace hitrun {

bool is_hermitian(const Cmat& m, double tol) {
    if (m.rows() != m.cols()) return false;
    const double scale = std::max(1.0, m.norm());
    return (m - m.adjoint()).norm() <= tol * scale;
}

DensityMatrix::DensityMatrix(Cmat m) : m_(std::move(m)) {
    if (m_.rows() == 0 || m_.rows() != m_.cols())
        throw std::invalid_argument("DensityMatrix: square nonempty matrix required");
    if (!is_hermitian(m_))
        throw std::invalid_argument("DensityMatrix: not Hermitian");
    if (std::abs(m_.trace().real() - 1.0) > 1e-10 || std::abs(m_.trace().imag()) > 1e-10)
        throw std::invalid_argument("DensityMatrix: trace != 1");
    Eigen::SelfAdjointEigenSolver<Cmat> es(m_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) < -kPsdTol)
        throw std::invalid_argument("DensityMatrix: not positive semidefinite");
}

HermitianDirection::HermitianDirection(Cmat m) : m_(std::move(m)) {
    if (m_.rows() == 0 || m_.rows() != m_.cols())
        throw std::invalid_argument("HermitianDirection: square nonempty matrix required");
    if (!is_hermitian(m_))
        throw std::invalid_argument("HermitianDirection: not Hermitian");
    if (std::abs(m_.trace()) > 1e-10)
        throw std::invalid_argument("HermitianDirection: not traceless");
    const double hs2 = (m_ * m_).trace().real();
    if (std::abs(hs2 - 1.0) > 1e-10)
        throw std::invalid_argument("HermitianDirection: HS norm != 1");
}

Cmat ginibre_sample(int n, Rng& rng) {
    if (n < 1) throw std::invalid_argument("ginibre_sample: n must be >= 1");
    Cmat g(n, n);
    const double s = std::sqrt(0.5);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            g(i, j) = std::complex<double>(s * rng.gaussian(), s * rng.gaussian());
    return g;
}

DensityMatrix wishart_state(const Cmat& g) {
    Cmat w = g * g.adjoint();
    const double tr = w.trace().real();
    if (tr <= 0.0)
        throw std::invalid_argument("wishart_state: zero input matrix");
    return DensityMatrix(w / tr);
}

Cmat partial_transpose(const Cmat& m, const BipartiteShape& shape, int subsystem) {
    if (m.rows() != shape.n || m.cols() != shape.n)
        throw std::invalid_argument("partial_transpose: matrix size does not match shape");
    if (subsystem != 1 && subsystem != 2)
        throw std::invalid_argument("partial_transpose: subsystem must be 1 or 2");
    const int k = shape.k;
    Cmat out(shape.n, shape.n);
    // index (a,i): a labels the first factor, i the second; entry ((a,i),(b,j))
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j) {
                    if (subsystem == 2)
                        out(a * k + i, b * k + j) = m(a * k + j, b * k + i);
                    else
                        out(a * k + i, b * k + j) = m(b * k + i, a * k + j);
                }
    return out;
}

Rvec eigenvalues_hermitian(const Cmat& m, double tol) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("eigenvalues_hermitian: square matrix required");
    const double scale = std::max(1.0, m.norm());
    if ((m - m.adjoint()).norm() > tol * scale)
        throw std::invalid_argument("eigenvalues_hermitian: matrix not Hermitian within tolerance");
    Eigen::SelfAdjointEigenSolver<Cmat> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues();  // Eigen returns them ascending
}

TracelessBasis::TracelessBasis(int n) : n_(n) {
    if (n < 2) throw std::invalid_argument("TracelessBasis: dimension must be >= 2");
}

Cmat TracelessBasis::traceless_from_coords(const Rvec& v) const {
    if (v.size() != coord_dim())
        throw std::invalid_argument("TracelessBasis: coordinate vector has wrong length");
    Cmat m = Cmat::Zero(n_, n_);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    int s = 0;
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j) {
            const double re = v(s) * inv_sqrt2;
            const double im = -v(s + 1) * inv_sqrt2;
            m(i, j) += std::complex<double>(re, im);
            m(j, i) += std::complex<double>(re, -im);
            s += 2;
        }
    for (int l = 1; l < n_; ++l) {
        const double c = v(s) / std::sqrt(static_cast<double>(l) * (l + 1));
        for (int d = 0; d < l; ++d) m(d, d) += c;
        m(l, l) -= c * l;
        ++s;
    }
    return m;
}

Cmat TracelessBasis::coords_to_matrix(const Rvec& v) const {
    Cmat m = traceless_from_coords(v);
    m += Cmat::Identity(n_, n_) / static_cast<double>(n_);
    return m;
}

Rvec TracelessBasis::coords_from_traceless(const Cmat& m) const {
    if (m.rows() != n_ || m.cols() != n_)
        throw std::invalid_argument("TracelessBasis: matrix has wrong size");
    Rvec v(coord_dim());
    const double sqrt2 = std::sqrt(2.0);
    int s = 0;
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j) {
            v(s) = sqrt2 * m(i, j).real();
            v(s + 1) = -sqrt2 * m(i, j).imag();
            s += 2;
        }
    for (int l = 1; l < n_; ++l) {
        double acc = 0.0;
        for (int d = 0; d < l; ++d) acc += m(d, d).real();
        acc -= l * m(l, l).real();
        v(s) = acc / std::sqrt(static_cast<double>(l) * (l + 1));
        ++s;
    }
    return v;
}

Rvec TracelessBasis::matrix_to_coords(const Cmat& m) const {
    if (std::abs(m.trace().real() - 1.0) > 1e-10 || std::abs(m.trace().imag()) > 1e-10)
        throw std::invalid_argument("matrix_to_coords: unit trace required");
    return coords_from_traceless(m);
}

HermitianDirection random_direction(int n, Rng& rng) {
    if (n < 2) throw std::invalid_argument("random_direction: dimension must be >= 2");
    TracelessBasis basis(n);
    Rvec v(basis.coord_dim());
    for (int i = 0; i < v.size(); ++i) v(i) = rng.gaussian();
    v.normalize();
    return HermitianDirection(basis.traceless_from_coords(v));
}

}  // namespace hitrun
