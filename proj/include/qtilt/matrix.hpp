#pragma once

#include <cstddef>
#include <vector>

namespace qtilt {

/// Dense row-major matrix of doubles. Sized for desk-scale problems
/// (dozens of states, word spaces up to a few thousand).
class Matrix {
  public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, fill) {}

    static Matrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    const std::vector<double>& data() const { return a_; }
    std::vector<double>& data() { return a_; }

    Matrix transposed() const;

    bool same_shape(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

  private:
    int rows_, cols_;
    std::vector<double> a_;
};

Matrix multiply(const Matrix& a, const Matrix& b);
Matrix add(const Matrix& a, const Matrix& b);
Matrix subtract(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& a, double s);

/// max_ij |a_ij - b_ij|
double max_abs_diff(const Matrix& a, const Matrix& b);
/// max_ij |a_ij|
double max_abs(const Matrix& a);
double trace(const Matrix& a);

/// row vector times matrix
std::vector<double> vec_times_matrix(const std::vector<double>& v, const Matrix& m);
/// matrix times column vector
std::vector<double> matrix_times_vec(const Matrix& m, const std::vector<double>& v);

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
///
/// Rotations run until every off-diagonal entry satisfies
/// |a_pq| <= tol * sqrt(|a_pp * a_qq|), so small eigenvalues of
/// positive semidefinite matrices keep high relative accuracy even
/// when the spectrum spans many orders of magnitude. Returned in
/// ascending order.
std::vector<double> jacobi_eigenvalues(Matrix a, double tol = 1e-13);

/// Solve the SPD system g * x = rhs by Cholesky factorization.
/// rhs and result are full matrices (multiple right-hand sides).
Matrix cholesky_solve(Matrix g, const Matrix& rhs);

}  // namespace qtilt
