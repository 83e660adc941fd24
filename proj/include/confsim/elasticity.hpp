#pragma once

#include <algorithm>
#include <string>

#include "confsim/errors.hpp"
#include "confsim/grid.hpp"
#include "confsim/material.hpp"
#include "confsim/tridiagonal.hpp"

namespace confsim {

/// Solutions of (x^2 u')' - 2u = 0, an Euler equation with exponents 1 and -2,
/// normalised so that the left one vanishes at `root`.
template <typename Scalar>
struct EulerSolution {
    Scalar root;

    [[nodiscard]] Scalar value(Scalar x) const { return x - root * root * root / (x * x); }
    [[nodiscard]] Scalar derivative(Scalar x) const { return Scalar(1) + Scalar(2) * root * root * root / (x * x * x); }
    [[nodiscard]] Scalar second_derivative(Scalar x) const {
        return Scalar(-6) * root * root * root / (x * x * x * x);
    }
};

/// L[u] = (p u')' + q u evaluated from a function's value and derivatives, p = x^2, q = -2.
template <typename Scalar>
[[nodiscard]] Scalar radial_operator(Scalar x, Scalar value, Scalar first, Scalar second) {
    return Scalar(2) * x * first + x * x * second - Scalar(2) * value;
}

/// Green function of L with Dirichlet conditions on [a, d]:
/// G(x, y) = u1(min) u2(max) / (p W(u1, u2)), where p W = 3 (d^3 - a^3).
template <typename Scalar>
class GreenKernel {
public:
    GreenKernel(Scalar a, Scalar d) : a_(a), d_(d), left_{a}, right_{d} {
        if (!(a > Scalar(0) && a < d)) throw ValidationError("green kernel: need 0 < a < d");
        normalization_ = Scalar(3) * (d * d * d - a * a * a);
    }

    [[nodiscard]] Scalar a() const { return a_; }
    [[nodiscard]] Scalar d() const { return d_; }
    [[nodiscard]] const EulerSolution<Scalar>& left() const { return left_; }
    [[nodiscard]] const EulerSolution<Scalar>& right() const { return right_; }
    [[nodiscard]] Scalar normalization() const { return normalization_; }

    /// p(x) W(u1, u2)(x); constant in x.
    [[nodiscard]] Scalar p_wronskian(Scalar x) const {
        return x * x *
               (left_.value(x) * right_.derivative(x) - left_.derivative(x) * right_.value(x));
    }

    [[nodiscard]] Scalar operator()(Scalar x, Scalar y) const {
        check(x, y);
        const Scalar lo = std::min(x, y);
        const Scalar hi = std::max(x, y);
        return left_.value(lo) * right_.value(hi) / normalization_;
    }

    /// dG/dx.  On the diagonal `from_above` selects the one-sided limit x -> y+.
    [[nodiscard]] Scalar dx(Scalar x, Scalar y, bool from_above = true) const {
        check(x, y);
        if (x > y || (x == y && from_above)) return left_.value(y) * right_.derivative(x) / normalization_;
        return left_.derivative(x) * right_.value(y) / normalization_;
    }

    [[nodiscard]] Scalar dxx(Scalar x, Scalar y) const {
        check(x, y);
        if (x > y) return left_.value(y) * right_.second_derivative(x) / normalization_;
        return left_.second_derivative(x) * right_.value(y) / normalization_;
    }

    /// dG/dy, by symmetry dx with arguments swapped.
    [[nodiscard]] Scalar dy(Scalar x, Scalar y, bool from_above = true) const { return dx(y, x, from_above); }

private:
    void check(Scalar x, Scalar y) const {
        if (x < a_ || x > d_ || y < a_ || y > d_)
            throw OutOfDomain("green kernel evaluated outside [a,d]");
    }

    Scalar a_;
    Scalar d_;
    EulerSolution<Scalar> left_;
    EulerSolution<Scalar> right_;
    Scalar normalization_;
};

/// Closed-form homogeneous solutions u1 (u1(a) = 0) and u2 (u2(d) = 0).
template <typename Scalar>
[[nodiscard]] std::pair<EulerSolution<Scalar>, EulerSolution<Scalar>> homogeneous_solutions(Scalar a, Scalar d) {
    return {EulerSolution<Scalar>{a}, EulerSolution<Scalar>{d}};
}

/// Right-hand side of the radial elasticity equation: (lambda/mu) S_x + b/mu.
[[nodiscard]] Field compute_calG(const Field& S_x, const Field& b, const MaterialParams& params);

/// Tridiagonal conservative discretisation of L[u] = x^2 calG with u(a)=u(d)=0.
/// Rows are scaled by h^2 so that entries are O(1).
[[nodiscard]] Tridiagonal<double> elasticity_matrix(const Grid& grid);

/// Solves u'' + (2/x) u' - (2/x^2) u = calG with homogeneous Dirichlet data.
[[nodiscard]] Field solve_direct(const Grid& grid, const Field& calG);

/// Max-norm residual of the h^2-scaled discrete system for a given u.
[[nodiscard]] double elasticity_residual(const Grid& grid, const Field& u, const Field& calG);

/// Representation of u through the Green function after integrating the
/// S_x term by parts; trapezoidal quadrature split at y = x.
[[nodiscard]] Field solve_via_green(const GreenKernel<double>& kernel, const Grid& grid, const Field& S_moll,
                                    const Field& b, const MaterialParams& params);


struct GreenPropertyReport {
    double symmetry = 0.0;         // max |G(x,y) - G(y,x)|
    double boundary = 0.0;         // max |G(a,y)|, |G(d,y)|
    double jump = 0.0;             // max extrapolated |[G_x](y) - 1/y^2|
    double operator_residual = 0.0;  // max |L[G(., y)](x)|, x != y
    double wronskian_spread = 0.0;   // max |p W(x) - p W(a)|
    int samples = 0;
};

/// Property checks at `samples` pseudo-random points.  The jump uses one-sided
/// derivatives at y +- delta, y +- delta/2 and Richardson extrapolation.
[[nodiscard]] GreenPropertyReport green_property_report(const GreenKernel<double>& kernel, int samples,
                                                        unsigned long long seed = 1);

}  // namespace confsim
