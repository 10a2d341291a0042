#include "qtilt/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "qtilt/errors.hpp"

namespace qtilt {

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::transposed() const {
    Matrix m(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
    return m;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw Error("multiply: shape mismatch");
    Matrix c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

Matrix add(const Matrix& a, const Matrix& b) {
    if (!a.same_shape(b)) throw Error("add: shape mismatch");
    Matrix c = a;
    for (size_t i = 0; i < c.data().size(); ++i) c.data()[i] += b.data()[i];
    return c;
}

Matrix subtract(const Matrix& a, const Matrix& b) {
    if (!a.same_shape(b)) throw Error("subtract: shape mismatch");
    Matrix c = a;
    for (size_t i = 0; i < c.data().size(); ++i) c.data()[i] -= b.data()[i];
    return c;
}

Matrix scale(const Matrix& a, double s) {
    Matrix c = a;
    for (double& v : c.data()) v *= s;
    return c;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (!a.same_shape(b)) throw Error("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (size_t i = 0; i < a.data().size(); ++i)
        m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

double max_abs(const Matrix& a) {
    double m = 0.0;
    for (double v : a.data()) m = std::max(m, std::abs(v));
    return m;
}

double trace(const Matrix& a) {
    double s = 0.0;
    for (int i = 0; i < std::min(a.rows(), a.cols()); ++i) s += a(i, i);
    return s;
}

std::vector<double> vec_times_matrix(const std::vector<double>& v, const Matrix& m) {
    std::vector<double> out(m.cols(), 0.0);
    for (int i = 0; i < m.rows(); ++i) {
        const double vi = v[i];
        if (vi == 0.0) continue;
        for (int j = 0; j < m.cols(); ++j) out[j] += vi * m(i, j);
    }
    return out;
}

std::vector<double> matrix_times_vec(const Matrix& m, const std::vector<double>& v) {
    std::vector<double> out(m.rows(), 0.0);
    for (int i = 0; i < m.rows(); ++i) {
        double s = 0.0;
        for (int j = 0; j < m.cols(); ++j) s += m(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

std::vector<double> jacobi_eigenvalues(Matrix a, double tol) {
    const int n = a.rows();
    if (n != a.cols()) throw Error("jacobi_eigenvalues: matrix not square");
    if (n == 1) return {a(0, 0)};

    auto needs_rotation = [&](int p, int q) {
        const double apq = a(p, q);
        if (apq == 0.0) return false;
        const double bound = tol * std::sqrt(std::abs(a(p, p) * a(q, q)));
        return std::abs(apq) > bound;
    };

    const int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        int rotations = 0;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (!needs_rotation(p, q)) continue;
                ++rotations;
                const double apq = a(p, q);
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t;
                if (std::abs(theta) > 1e154) {
                    t = 1.0 / (2.0 * theta);
                } else {
                    t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                    if (theta < 0.0) t = -t;
                }
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                a(p, p) -= t * apq;
                a(q, q) += t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (int k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = akp - s * (akq + tau * akp);
                    a(p, k) = a(k, p);
                    a(k, q) = akq + s * (akp - tau * akq);
                    a(q, k) = a(k, q);
                }
            }
        }
        if (rotations == 0) {
            std::vector<double> ev(n);
            for (int i = 0; i < n; ++i) ev[i] = a(i, i);
            std::sort(ev.begin(), ev.end());
            return ev;
        }
    }
    throw NonConvergence("jacobi_eigenvalues: no convergence within sweep budget");
}

Matrix cholesky_solve(Matrix g, const Matrix& rhs) {
    const int n = g.rows();
    if (n != g.cols() || rhs.rows() != n) throw Error("cholesky_solve: shape mismatch");

    // lower Cholesky factor in place
    for (int j = 0; j < n; ++j) {
        double d = g(j, j);
        for (int k = 0; k < j; ++k) d -= g(j, k) * g(j, k);
        if (!(d > 0.0)) throw NonConvergence("cholesky_solve: matrix not positive definite");
        const double ljj = std::sqrt(d);
        g(j, j) = ljj;
        for (int i = j + 1; i < n; ++i) {
            double s = g(i, j);
            for (int k = 0; k < j; ++k) s -= g(i, k) * g(j, k);
            g(i, j) = s / ljj;
        }
    }

    Matrix x = rhs;
    // forward substitution L y = rhs
    for (int col = 0; col < x.cols(); ++col) {
        for (int i = 0; i < n; ++i) {
            double s = x(i, col);
            for (int k = 0; k < i; ++k) s -= g(i, k) * x(k, col);
            x(i, col) = s / g(i, i);
        }
        // back substitution L^T x = y
        for (int i = n - 1; i >= 0; --i) {
            double s = x(i, col);
            for (int k = i + 1; k < n; ++k) s -= g(k, i) * x(k, col);
            x(i, col) = s / g(i, i);
        }
    }
    return x;
}

}  // namespace qtilt
