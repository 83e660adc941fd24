#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <string>

#include "confsim/errors.hpp"

namespace confsim {

/// Tridiagonal matrix in band storage: lower(i) multiplies x(i-1), upper(i)
/// multiplies x(i+1).  lower(0) and upper(n-1) are ignored.
template <typename Scalar>
struct Tridiagonal {
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    Vector lower;
    Vector diag;
    Vector upper;

    explicit Tridiagonal(Eigen::Index n) : lower(Vector::Zero(n)), diag(Vector::Zero(n)), upper(Vector::Zero(n)) {}

    [[nodiscard]] Eigen::Index size() const { return diag.size(); }

    /// Row i pinned to x(i) = rhs(i).
    void pin(Eigen::Index i) {
        lower(i) = Scalar(0);
        upper(i) = Scalar(0);
        diag(i) = Scalar(1);
    }

    [[nodiscard]] Vector multiply(const Vector& x) const {
        const Eigen::Index n = size();
        Vector y = diag.cwiseProduct(x);
        for (Eigen::Index i = 1; i < n; ++i) y(i) += lower(i) * x(i - 1);
        for (Eigen::Index i = 0; i + 1 < n; ++i) y(i) += upper(i) * x(i + 1);
        return y;
    }
};

/// Thomas elimination without pivoting.  Throws SingularSystem on a vanishing pivot.
template <typename Scalar>
[[nodiscard]] typename Tridiagonal<Scalar>::Vector solve_tridiagonal(const Tridiagonal<Scalar>& A,
                                                                    const typename Tridiagonal<Scalar>::Vector& rhs) {
    using Vector = typename Tridiagonal<Scalar>::Vector;
    const Eigen::Index n = A.size();
    Vector c_star(n);
    Vector d_star(n);
    const Scalar scale = A.diag.cwiseAbs().maxCoeff() + A.lower.cwiseAbs().maxCoeff() + A.upper.cwiseAbs().maxCoeff();
    const Scalar tiny = std::numeric_limits<Scalar>::epsilon() * (scale > Scalar(0) ? scale : Scalar(1));

    Scalar pivot = A.diag(0);
    if (std::abs(pivot) <= tiny) throw SingularSystem("tridiagonal solve: zero pivot at row 0");
    c_star(0) = A.upper(0) / pivot;
    d_star(0) = rhs(0) / pivot;
    for (Eigen::Index i = 1; i < n; ++i) {
        pivot = A.diag(i) - A.lower(i) * c_star(i - 1);
        if (std::abs(pivot) <= tiny) throw SingularSystem("tridiagonal solve: zero pivot at row " + std::to_string(i));
        c_star(i) = (i + 1 < n) ? A.upper(i) / pivot : Scalar(0);
        d_star(i) = (rhs(i) - A.lower(i) * d_star(i - 1)) / pivot;
    }
    Vector x(n);
    x(n - 1) = d_star(n - 1);
    for (Eigen::Index i = n - 2; i >= 0; --i) x(i) = d_star(i) - c_star(i) * x(i + 1);
    return x;
}

}  // namespace confsim
