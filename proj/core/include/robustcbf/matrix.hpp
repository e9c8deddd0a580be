#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "robustcbf/errors.hpp"

namespace rcbf {

using Vector = std::vector<double>;

/// Dense row-major matrix. Sized for the small systems this library deals
/// with (state dimension <= 8); no attempt is made at large-scale efficiency.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);
    static Matrix diagonal(const Vector& d);
    static Matrix zero(std::size_t rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    Matrix transpose() const;
    Matrix operator+(const Matrix& other) const;
    Matrix operator-(const Matrix& other) const;
    Matrix operator*(const Matrix& other) const;
    Vector operator*(const Vector& v) const;
    Matrix scaled(double s) const;

    bool is_finite() const;
    bool is_square() const { return rows_ == cols_; }
    double max_abs() const;
    double max_asymmetry() const;
    double frobenius_norm() const;

    const Vector& data() const { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    Vector data_;
};

// Small vector helpers (length checks throw DimensionError).
double dot(const Vector& a, const Vector& b);
double norm2(const Vector& v);
Vector add(const Vector& a, const Vector& b);
Vector sub(const Vector& a, const Vector& b);
Vector scaled(const Vector& v, double s);

/// A matrix together with the evidence that it passed the SPD check.
struct SpdCertificate {
    Matrix matrix;
    double min_eigenvalue = 0.0;

    std::size_t dim() const { return matrix.rows(); }
};

/// Validates squareness, symmetry (within 1e-10 relative) and positive
/// definiteness. Throws NotSpdError otherwise. The stored matrix is the
/// symmetrized input.
SpdCertificate certify_spd(const Matrix& m);

/// Eigenvalues of a symmetric matrix via cyclic Jacobi rotations,
/// sorted ascending. The input is symmetrized before iterating.
std::vector<double> symmetric_eigenvalues(const Matrix& m);

/// Largest singular value (induced 2-norm).
double spectral_norm(const Matrix& m);

/// Smallest eigenvalue of a symmetric matrix; rejects inputs whose
/// asymmetry exceeds 1e-10 relative.
double min_eigenvalue_sym(const Matrix& m);

/// Unique P = P^T > 0 of (-Lambda)^T P + P (-Lambda) + H = 0, solved by
/// vectorizing to the Kronecker linear system. The result is symmetrized
/// and the residual is checked against 1e-9 * ||H||.
Matrix solve_lyapunov(const SpdCertificate& gain, const SpdCertificate& weight);

/// Constants of the transition-matrix bound ||exp(-Lambda t)|| <= D exp(-rate t).
struct DecayEnvelope {
    double overshoot = 1.0;  // D = sqrt(||P|| ||P^-1||)
    double rate = 0.0;       // lambda_min(H) / (2 ||P||)
    double p_norm = 0.0;     // ||P||
};

DecayEnvelope decay_envelope(const SpdCertificate& gain, const SpdCertificate& weight);

/// Left pseudo-inverse (g^T g)^-1 g^T of a full-column-rank matrix.
/// Throws RankError when the smallest singular value is below
/// 1e-10 times the largest.
Matrix left_pseudo_inverse(const Matrix& g);

/// Gaussian elimination with partial pivoting; throws NumericError on
/// (numerically) singular systems.
Vector solve_linear(Matrix a, Vector b);

/// Cholesky-based solve for SPD systems, one refinement pass.
Matrix solve_spd(const Matrix& a, const Matrix& rhs);

} // namespace rcbf
