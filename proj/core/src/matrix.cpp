#include "robustcbf/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

namespace rcbf {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw DimensionError(msg);
}

} // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        require(r.size() == cols_, "matrix: ragged initializer list");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(const Vector& d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

Matrix Matrix::zero(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

Matrix Matrix::operator+(const Matrix& other) const {
    require(rows_ == other.rows_ && cols_ == other.cols_, "matrix add: shape mismatch");
    Matrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += other.data_[i];
    return out;
}

Matrix Matrix::operator-(const Matrix& other) const {
    require(rows_ == other.rows_ && cols_ == other.cols_, "matrix sub: shape mismatch");
    Matrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= other.data_[i];
    return out;
}

Matrix Matrix::operator*(const Matrix& other) const {
    require(cols_ == other.rows_, "matrix mul: shape mismatch");
    Matrix out(rows_, other.cols_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t k = 0; k < cols_; ++k) {
            const double v = (*this)(r, k);
            if (v == 0.0) continue;
            for (std::size_t c = 0; c < other.cols_; ++c) out(r, c) += v * other(k, c);
        }
    return out;
}

Vector Matrix::operator*(const Vector& v) const {
    require(cols_ == v.size(), "matrix-vector mul: shape mismatch");
    Vector out(rows_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
        double acc = 0.0;
        for (std::size_t c = 0; c < cols_; ++c) acc += (*this)(r, c) * v[c];
        out[r] = acc;
    }
    return out;
}

Matrix Matrix::scaled(double s) const {
    Matrix out = *this;
    for (double& v : out.data_) v *= s;
    return out;
}

bool Matrix::is_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

double Matrix::max_asymmetry() const {
    if (!is_square()) return std::numeric_limits<double>::infinity();
    double m = 0.0;
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = r + 1; c < cols_; ++c)
            m = std::max(m, std::abs((*this)(r, c) - (*this)(c, r)));
    return m;
}

double Matrix::frobenius_norm() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
}

double dot(const Vector& a, const Vector& b) {
    require(a.size() == b.size(), "dot: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const Vector& v) { return std::sqrt(dot(v, v)); }

Vector add(const Vector& a, const Vector& b) {
    require(a.size() == b.size(), "add: length mismatch");
    Vector out = a;
    for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
    return out;
}

Vector sub(const Vector& a, const Vector& b) {
    require(a.size() == b.size(), "sub: length mismatch");
    Vector out = a;
    for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
    return out;
}

Vector scaled(const Vector& v, double s) {
    Vector out = v;
    for (double& x : out) x *= s;
    return out;
}

namespace {

Matrix symmetrize(const Matrix& m) {
    Matrix s(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) s(r, c) = 0.5 * (m(r, c) + m(c, r));
    return s;
}

// Cyclic Jacobi sweeps on a symmetric matrix; mutates `a`, returns diagonal.
std::vector<double> jacobi_diagonal(Matrix a) {
    const std::size_t n = a.rows();
    if (n == 1) return {a(0, 0)};
    const double fro = std::max(1.0, a.frobenius_norm());
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (std::sqrt(off) <= 1e-15 * fro) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) <= 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);
                a(p, p) -= t * apq;
                a(q, q) += t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    const double aip = a(i, p);
                    const double aiq = a(i, q);
                    a(i, p) = aip - s * (aiq + tau * aip);
                    a(p, i) = a(i, p);
                    a(i, q) = aiq + s * (aip - tau * aiq);
                    a(q, i) = a(i, q);
                }
            }
        }
    }
    std::vector<double> evs(n);
    for (std::size_t i = 0; i < n; ++i) evs[i] = a(i, i);
    std::sort(evs.begin(), evs.end());
    return evs;
}

} // namespace

std::vector<double> symmetric_eigenvalues(const Matrix& m) {
    if (!m.is_square()) throw DimensionError("symmetric_eigenvalues: matrix not square");
    if (!m.is_finite()) throw NumericError("symmetric_eigenvalues: non-finite entries");
    return jacobi_diagonal(symmetrize(m));
}

double spectral_norm(const Matrix& m) {
    if (m.empty()) return 0.0;
    if (!m.is_finite()) throw NumericError("spectral_norm: non-finite entries");
    const Matrix gram = (m.cols() <= m.rows()) ? m.transpose() * m : m * m.transpose();
    const auto evs = jacobi_diagonal(symmetrize(gram));
    return std::sqrt(std::max(0.0, evs.back()));
}

double min_eigenvalue_sym(const Matrix& m) {
    if (!m.is_square()) throw DimensionError("min_eigenvalue_sym: matrix not square");
    if (!m.is_finite()) throw NumericError("min_eigenvalue_sym: non-finite entries");
    if (m.max_asymmetry() > 1e-10 * std::max(1.0, m.max_abs()))
        throw DimensionError("min_eigenvalue_sym: matrix not symmetric");
    return symmetric_eigenvalues(m).front();
}

SpdCertificate certify_spd(const Matrix& m) {
    if (!m.is_square()) throw NotSpdError("certify_spd: matrix not square");
    if (!m.is_finite()) throw NotSpdError("certify_spd: non-finite entries");
    if (m.max_asymmetry() > 1e-10 * std::max(1.0, m.max_abs()))
        throw NotSpdError("certify_spd: matrix not symmetric within 1e-10");
    SpdCertificate cert;
    cert.matrix = symmetrize(m);
    cert.min_eigenvalue = symmetric_eigenvalues(cert.matrix).front();
    if (!(cert.min_eigenvalue > 0.0))
        throw NotSpdError("certify_spd: matrix not positive definite");
    return cert;
}

Vector solve_linear(Matrix a, Vector b) {
    if (!a.is_square() || a.rows() != b.size())
        throw DimensionError("solve_linear: shape mismatch");
    const std::size_t n = a.rows();
    const double scale = std::max(1.0, a.max_abs());
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t r = k + 1; r < n; ++r)
            if (std::abs(a(perm[r], k)) > std::abs(a(perm[piv], k))) piv = r;
        std::swap(perm[k], perm[piv]);
        const double akk = a(perm[k], k);
        if (std::abs(akk) <= 1e-13 * scale)
            throw NumericError("solve_linear: singular system");
        for (std::size_t r = k + 1; r < n; ++r) {
            const double f = a(perm[r], k) / akk;
            if (f == 0.0) continue;
            a(perm[r], k) = 0.0;
            for (std::size_t c = k + 1; c < n; ++c) a(perm[r], c) -= f * a(perm[k], c);
            b[perm[r]] -= f * b[perm[k]];
        }
    }
    Vector x(n, 0.0);
    for (std::size_t ki = n; ki-- > 0;) {
        double acc = b[perm[ki]];
        for (std::size_t c = ki + 1; c < n; ++c) acc -= a(perm[ki], c) * x[c];
        x[ki] = acc / a(perm[ki], ki);
    }
    return x;
}

namespace {

// Lower Cholesky factor; throws NumericError if the pivot degenerates.
Matrix cholesky(const Matrix& a) {
    const std::size_t n = a.rows();
    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > 0.0)) throw NumericError("cholesky: matrix not positive definite");
        l(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    return l;
}

Vector cholesky_solve_vec(const Matrix& l, const Vector& b) {
    const std::size_t n = l.rows();
    Vector y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = b[i];
        for (std::size_t k = 0; k < i; ++k) acc -= l(i, k) * y[k];
        y[i] = acc / l(i, i);
    }
    Vector x(n, 0.0);
    for (std::size_t ii = n; ii-- > 0;) {
        double acc = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k) acc -= l(k, ii) * x[k];
        x[ii] = acc / l(ii, ii);
    }
    return x;
}

} // namespace

Matrix solve_spd(const Matrix& a, const Matrix& rhs) {
    if (!a.is_square() || a.rows() != rhs.rows())
        throw DimensionError("solve_spd: shape mismatch");
    const Matrix l = cholesky(symmetrize(a));
    const std::size_t n = a.rows();
    const std::size_t m = rhs.cols();
    Matrix x(n, m);
    for (std::size_t c = 0; c < m; ++c) {
        Vector col(n);
        for (std::size_t r = 0; r < n; ++r) col[r] = rhs(r, c);
        Vector sol = cholesky_solve_vec(l, col);
        // one refinement pass
        Vector res(n, 0.0);
        for (std::size_t r = 0; r < n; ++r) {
            double acc = col[r];
            for (std::size_t k = 0; k < n; ++k) acc -= a(r, k) * sol[k];
            res[r] = acc;
        }
        Vector corr = cholesky_solve_vec(l, res);
        for (std::size_t r = 0; r < n; ++r) x(r, c) = sol[r] + corr[r];
    }
    return x;
}

Matrix solve_lyapunov(const SpdCertificate& gain, const SpdCertificate& weight) {
    const std::size_t n = gain.dim();
    if (weight.dim() != n) throw DimensionError("solve_lyapunov: dimension mismatch");
    const Matrix& lam = gain.matrix;
    const Matrix& h = weight.matrix;

    // (-Lambda)^T P + P (-Lambda) + H = 0  <=>  Lambda^T P + P Lambda = H.
    // Row-major vectorization: (Lambda^T (x) I + I (x) Lambda^T) vec(P) = vec(H).
    const std::size_t nn = n * n;
    Matrix sys(nn, nn);
    Vector rhs(nn, 0.0);
    const Matrix lt = lam.transpose();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t row = i * n + j;
            rhs[row] = h(i, j);
            for (std::size_t k = 0; k < n; ++k) {
                sys(row, k * n + j) += lt(i, k);  // (Lambda^T P)_{ij}
                sys(row, i * n + k) += lam(k, j); // (P Lambda)_{ij}
            }
        }
    }
    const Vector vec_p = solve_linear(sys, rhs);
    Matrix p(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) p(i, j) = vec_p[i * n + j];

    if (p.max_asymmetry() > 1e-8 * std::max(1.0, p.max_abs()))
        throw NumericError("solve_lyapunov: solution asymmetry exceeds 1e-8");
    Matrix sym(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) sym(i, j) = 0.5 * (p(i, j) + p(j, i));

    const Matrix residual = lt * sym + sym * lam - h;
    if (spectral_norm(residual) > 1e-9 * spectral_norm(h))
        throw NumericError("solve_lyapunov: residual exceeds 1e-9 * ||H||");
    if (!(symmetric_eigenvalues(sym).front() > 0.0))
        throw NumericError("solve_lyapunov: solution not positive definite");
    return sym;
}

DecayEnvelope decay_envelope(const SpdCertificate& gain, const SpdCertificate& weight) {
    const Matrix p = solve_lyapunov(gain, weight);
    const auto evs = symmetric_eigenvalues(p);
    const double pmin = evs.front();
    const double pmax = evs.back();
    DecayEnvelope env;
    env.p_norm = pmax;                       // ||P|| for SPD P
    env.overshoot = std::sqrt(pmax / pmin);  // sqrt(||P|| ||P^-1||)
    env.rate = weight.min_eigenvalue / (2.0 * pmax);
    return env;
}

Matrix left_pseudo_inverse(const Matrix& g) {
    if (g.empty() || g.rows() < g.cols())
        throw DimensionError("left_pseudo_inverse: need a tall (n x m, n >= m) matrix");
    if (!g.is_finite()) throw NumericError("left_pseudo_inverse: non-finite entries");
    const Matrix gram = g.transpose() * g;
    const auto evs = symmetric_eigenvalues(gram);
    const double smin = std::sqrt(std::max(0.0, evs.front()));
    const double smax = std::sqrt(std::max(0.0, evs.back()));
    if (!(smin > 1e-10 * smax) || smax == 0.0)
        throw RankError("left_pseudo_inverse: input is not full column rank");
    const Matrix pinv = solve_spd(gram, g.transpose());

    const Matrix check = pinv * g;
    double worst = 0.0;
    for (std::size_t r = 0; r < check.rows(); ++r)
        for (std::size_t c = 0; c < check.cols(); ++c)
            worst = std::max(worst, std::abs(check(r, c) - (r == c ? 1.0 : 0.0)));
    if (worst > 1e-12)
        throw RankError("left_pseudo_inverse: conditioning too poor for 1e-12 identity check");
    return pinv;
}

} // namespace rcbf
