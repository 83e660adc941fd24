#pragma once

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "confsim/errors.hpp"

namespace confsim {

using Matrix3 = Eigen::Matrix3d;

/// Rank-4 elasticity tensor D_{ij}^{kl}.  Stored as a 9x9 matrix whose row is
/// the subscript pair (i,j) and whose column is the superscript pair (k,l);
/// indices are zero based.  Contraction with a strain acts on the subscripts:
/// (D eps)^{kl} = sum_ij D_{ij}^{kl} eps_ij.
class ElasticityTensor {
public:
    using Storage = Eigen::Matrix<double, 9, 9>;

    ElasticityTensor() : entries_(Storage::Zero()) {}
    explicit ElasticityTensor(const Storage& entries) : entries_(entries) {}

    /// D_{ij}^{kl} = mu0 when k == j and i == l, zero otherwise.
    static ElasticityTensor diagonal(double mu0);
    /// lambda_L delta_ij delta_kl + mu_L (delta_ik delta_jl + delta_il delta_jk).
    static ElasticityTensor isotropic(double lame_lambda, double lame_mu);
    /// Entries in lexicographic (i,j,k,l) order.
    static ElasticityTensor from_entries(const std::vector<double>& entries);

    [[nodiscard]] double operator()(int i, int j, int k, int l) const { return entries_(3 * i + j, 3 * k + l); }
    double& operator()(int i, int j, int k, int l) { return entries_(3 * i + j, 3 * k + l); }

    [[nodiscard]] const Storage& storage() const { return entries_; }

    /// (D eps)^{kl}.
    [[nodiscard]] Matrix3 apply(const Matrix3& eps) const;
    /// D eps . eta = sum D_{ij}^{kl} eps_ij eta_kl.
    [[nodiscard]] double contract(const Matrix3& eps, const Matrix3& eta) const;

    [[nodiscard]] ElasticityTensor scaled(double alpha) const { return ElasticityTensor(alpha * entries_); }

    /// Smallest eigenvalue of the quadratic form eps -> D eps . eps restricted
    /// to symmetric matrices (orthonormal basis of S^3).
    [[nodiscard]] double min_symmetric_eigenvalue() const;

private:
    Storage entries_;
};

using IndexTuple = std::array<int, 4>;

struct ConditionResult {
    std::string name;
    bool holds = true;
    std::optional<IndexTuple> first_violation;  // zero based
    double max_deviation = 0.0;
};

/// Outcome of the structural checks that make the radial reduction valid.
struct AssumptionReport {
    static constexpr double tolerance = 1e-12;

    ConditionResult symmetry;           // D_{kl}^{ij} = D_{ij}^{kl} = D_{lk}^{ij} = D_{kl}^{ji}
    ConditionResult zero_unless_k_eq_j; // D_{ij}^{kl} = 0 if k != j
    ConditionResult contraction_diag;   // D_{ij}^{jl} = 0 if i != l, independent of j
    ConditionResult mu_constant;        // C_ll independent of l
    ConditionResult misfit_offdiag;     // E_kl = 0 for k != l
    ConditionResult misfit_constant;    // E_kk independent of k
    bool positive_definite = false;     // informational, not one of the six

    [[nodiscard]] std::array<const ConditionResult*, 6> conditions() const {
        return {&symmetry, &zero_unless_k_eq_j, &contraction_diag, &mu_constant, &misfit_offdiag, &misfit_constant};
    }
    [[nodiscard]] bool all_hold() const;
    /// Conditions needed to define mu and lambda (everything except symmetry).
    [[nodiscard]] bool extraction_conditions_hold() const;
    [[nodiscard]] std::string to_string() const;
};

class AssumptionViolated : public Error {
public:
    explicit AssumptionViolated(AssumptionReport report)
        : Error("elasticity tensor violates reduction assumptions:\n" + report.to_string()),
          report_(std::move(report)) {}
    [[nodiscard]] const AssumptionReport& report() const { return report_; }

private:
    AssumptionReport report_;
};

[[nodiscard]] AssumptionReport check_tensor_assumptions(const ElasticityTensor& D, const Matrix3& eps_bar);

struct ScalarCoefficients {
    double mu = 0.0;
    double lambda = 0.0;
    double e = 0.0;  // D eps_bar . eps_bar
};

/// Throws AssumptionViolated when any extraction condition fails.
[[nodiscard]] ScalarCoefficients scalar_coefficients(const ElasticityTensor& D, const Matrix3& eps_bar);

/// Double-well potential W S^2 (1-S)^2.
template <typename Scalar>
struct DoubleWell {
    Scalar value;
    Scalar derivative;
};

template <typename Scalar>
[[nodiscard]] constexpr DoubleWell<Scalar> double_well(Scalar s, Scalar weight) {
    const Scalar one_minus = Scalar(1) - s;
    return {weight * s * s * one_minus * one_minus,
            weight * (Scalar(2) * s * one_minus * one_minus - Scalar(2) * s * s * one_minus)};
}

/// 1/2 D(eps - eps_bar S).(eps - eps_bar S) + W S^2 (1-S)^2.
[[nodiscard]] double free_energy(const Matrix3& eps, double S, const ElasticityTensor& D, const Matrix3& eps_bar,
                                 double well_weight);

/// Scalar material description of the reduced radial problem.
struct MaterialParams {
    double c = 1.0;
    double nu = 0.05;
    double mu = 1.0;
    double lambda = 0.0;
    double e = 0.0;
    double well_weight = 1.0;

    ElasticityTensor tensor;
    Matrix3 misfit = Matrix3::Zero();

    /// Derive mu, lambda, e from tensor and misfit.
    static MaterialParams from_tensors(double c, double nu, double well_weight, const ElasticityTensor& D,
                                       const Matrix3& eps_bar);

    [[nodiscard]] double well_derivative(double s) const { return double_well(s, well_weight).derivative; }
};

}  // namespace confsim
