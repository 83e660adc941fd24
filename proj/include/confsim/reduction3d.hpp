#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "confsim/grid.hpp"
#include "confsim/material.hpp"

namespace confsim {

using Vector3 = Eigen::Vector3d;

/// Natural cubic spline through uniformly spaced nodal values.
class CubicSpline {
public:
    CubicSpline(const Grid& grid, const Field& values);

    [[nodiscard]] double operator()(double x) const;

private:
    double a_;
    double h_;
    Field y_;
    Field m_;  // second derivatives at the nodes
};

using RadialProfile = std::function<double(double)>;

/// Radial profiles u(r), S(r), b(r) on the shell a < r < d, with the tensors
/// used to rebuild the 3D stress.
struct RadialLift {
    double a = 1.0;
    double d = 2.0;
    RadialProfile u;
    RadialProfile S;
    RadialProfile b;
    MaterialParams material;

    /// Splines through one saved frame; b is sampled on the same grid.
    static RadialLift from_frame(const Grid& grid, const Field& S, const Field& u, const Field& b,
                                 const MaterialParams& material);
};

struct LiftedFields {
    Vector3 u;
    double S = 0.0;
    Vector3 b;
};

/// u = u(r) x/r, S = S(r), b = b(r) x/r with r = |x|.  Throws OutOfDomain
/// unless a < r < d.
[[nodiscard]] LiftedFields lift_fields(const RadialLift& lift, const Vector3& x);

/// Uniform directions, radii uniform in [a + margin, d - margin].
[[nodiscard]] std::vector<Vector3> shell_points(double a, double d, int count, double margin, std::uint64_t seed);

/// |div T - b| per sample, T = D(eps(grad u) - eps_bar S), by nested central
/// differences of width h3 along the columns of `frame` (a rotation).
[[nodiscard]] std::vector<double> elasticity_residuals_3d(const RadialLift& lift, const std::vector<Vector3>& points,
                                                          double h3, const Eigen::Matrix3d& frame);

/// Max over the samples of elasticity_residuals_3d.
[[nodiscard]] double residual_elasticity_3d(const RadialLift& lift, const std::vector<Vector3>& points, double h3,
                                            const Eigen::Matrix3d& frame = Eigen::Matrix3d::Identity());

/// |S_t + c (psi_S(eps(grad u), S) - nu lap S) |grad S|| per sample, with a
/// forward difference between the two lifts and central differences in space
/// evaluated on `now`.
[[nodiscard]] std::vector<double> order_residuals_3d(const RadialLift& now, const RadialLift& next,
                                                     const std::vector<Vector3>& points, double h3, double dt,
                                                     const Eigen::Matrix3d& frame);

[[nodiscard]] double residual_order_3d(const RadialLift& now, const RadialLift& next,
                                       const std::vector<Vector3>& points, double h3, double dt,
                                       const Eigen::Matrix3d& frame = Eigen::Matrix3d::Identity());

/// Max over the samples of |D eps(grad u) : eps_bar - lambda (u_r + 2u/r)|,
/// with u_r supplied exactly.
[[nodiscard]] double identity_residual(const RadialLift& lift, const RadialProfile& du,
                                       const std::vector<Vector3>& points, double h3,
                                       const Eigen::Matrix3d& frame = Eigen::Matrix3d::Identity());

}  // namespace confsim
