#pragma once

#include <Eigen/Dense>

#include <vector>

#include "confsim/errors.hpp"

namespace confsim {

/// Nodal values on a Grid.
using Field = Eigen::VectorXd;

/// Uniform grid on the radial interval [a, d].
class Grid {
public:
    Grid(double a, double d, int n);

    [[nodiscard]] double a() const noexcept { return a_; }
    [[nodiscard]] double d() const noexcept { return d_; }
    [[nodiscard]] int n() const noexcept { return n_; }
    [[nodiscard]] double h() const noexcept { return h_; }
    [[nodiscard]] double length() const noexcept { return d_ - a_; }

    [[nodiscard]] double x(int i) const noexcept { return i == n_ - 1 ? d_ : a_ + i * h_; }
    [[nodiscard]] Field nodes() const;

    /// Samples f at the nodes.
    template <typename F>
    [[nodiscard]] Field sample(F&& f) const {
        Field out(n_);
        for (int i = 0; i < n_; ++i) out(i) = f(x(i));
        return out;
    }

    [[nodiscard]] Field zeros() const { return Field::Zero(n_); }

    /// Trapezoidal weights (h/2 at the ends, h inside).
    [[nodiscard]] Field trapezoid_weights() const;

    friend bool operator==(const Grid& lhs, const Grid& rhs) {
        return lhs.a_ == rhs.a_ && lhs.d_ == rhs.d_ && lhs.n_ == rhs.n_;
    }

private:
    double a_;
    double d_;
    int n_;
    double h_;
};

/// Saved frames of S and u over time.
struct Trajectory {
    std::vector<double> times;
    std::vector<Field> S;
    std::vector<Field> u;

    [[nodiscard]] std::size_t size() const { return times.size(); }
    [[nodiscard]] bool empty() const { return times.empty(); }
    void push(double t, Field s, Field displacement) {
        times.push_back(t);
        S.push_back(std::move(s));
        u.push_back(std::move(displacement));
    }
    /// Frames with time <= t_end (inclusive, with a small tolerance).
    [[nodiscard]] Trajectory truncated(double t_end) const;
};

/// First derivative: central inside, second-order one-sided at the ends.
[[nodiscard]] Field d1(const Grid& grid, const Field& f);

/// Second derivative: 3-point stencil inside.  The end values use the
/// 4-point one-sided formula and are only first-order accurate.
[[nodiscard]] Field d2(const Grid& grid, const Field& f);

/// Lebesgue exponents understood by the mixed norms.
class Exponent {
public:
    static Exponent four_thirds() { return Exponent(4.0 / 3.0); }
    static Exponent two() { return Exponent(2.0); }
    static Exponent eight_thirds() { return Exponent(8.0 / 3.0); }
    static Exponent infinity() { return Exponent(-1.0); }
    static Exponent one() { return Exponent(1.0); }

    /// Accepts 4/3, 2, 8/3 (to 1e-12), infinity, and 1; throws UnsupportedExponent otherwise.
    static Exponent from_value(double p);

    [[nodiscard]] bool is_infinite() const noexcept { return value_ < 0.0; }
    [[nodiscard]] double value() const noexcept { return value_; }

private:
    explicit Exponent(double v) : value_(v) {}
    double value_;
};

[[nodiscard]] double norm_L2(const Grid& grid, const Field& f);
[[nodiscard]] double norm_Linf(const Field& f);
[[nodiscard]] double norm_Lq(const Grid& grid, const Field& f, Exponent q);

/// (int_0^T ||f(t)||_{L^q}^p dt)^{1/p}, trapezoidal in space and time.
/// A single frame is treated as having unit time measure.
[[nodiscard]] double norm_Lp_time_Lq_space(const Grid& grid, const std::vector<double>& times,
                                           const std::vector<Field>& frames, Exponent p, Exponent q);
[[nodiscard]] double norm_Lp_time_Lq_space(const Grid& grid, const Trajectory& traj, Exponent p, Exponent q);

}  // namespace confsim
