#include <gtest/gtest.h>

#include <random>

#include "confsim/material.hpp"

using namespace confsim;

namespace {

// Entry-by-entry tensors built here, independent of the library factories.
ElasticityTensor diagonal_by_loop(double mu0) {
    std::vector<double> e(81, 0.0);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l)
                    if (k == j && i == l) e[27 * i + 9 * j + 3 * k + l] = mu0;
    return ElasticityTensor::from_entries(e);
}

double brute_lambda(const ElasticityTensor& D, const Matrix3& eb) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s += D(i, j, 0, 0) * eb(i, j);
    return s;
}

double brute_e(const ElasticityTensor& D, const Matrix3& eb) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) s += D(i, j, k, l) * eb(i, j) * eb(k, l);
    return s;
}

Matrix3 random_symmetric(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) m(i, j) = m(j, i) = u(rng);
    return m;
}

}  // namespace

TEST(Material, ZeroTensorPassesEverything) {
    const ElasticityTensor D = ElasticityTensor::from_entries(std::vector<double>(81, 0.0));
    const AssumptionReport rep = check_tensor_assumptions(D, Matrix3::Zero());
    EXPECT_TRUE(rep.all_hold());
    const auto c = scalar_coefficients(D, Matrix3::Zero());
    EXPECT_EQ(c.mu, 0.0);
    EXPECT_EQ(c.lambda, 0.0);
    EXPECT_EQ(c.e, 0.0);
}

TEST(Material, DiagonalFamilyMatchesFactory) {
    EXPECT_EQ(diagonal_by_loop(2.0).storage(), ElasticityTensor::diagonal(2.0).storage());
}

TEST(Material, DiagonalFamilyPassesExtractionConditions) {
    const ElasticityTensor D = diagonal_by_loop(2.0);
    const Matrix3 eb = 0.1 * Matrix3::Identity();
    const AssumptionReport rep = check_tensor_assumptions(D, eb);
    EXPECT_TRUE(rep.zero_unless_k_eq_j.holds);
    EXPECT_TRUE(rep.contraction_diag.holds);
    EXPECT_TRUE(rep.mu_constant.holds);
    EXPECT_TRUE(rep.misfit_offdiag.holds);
    EXPECT_TRUE(rep.misfit_constant.holds);
    EXPECT_TRUE(rep.extraction_conditions_hold());
    // Positional symmetry D_{kl}^{ij} = D_{ij}^{kl} fails for this family.
    EXPECT_FALSE(rep.symmetry.holds);

    const auto c = scalar_coefficients(D, eb);
    EXPECT_NEAR(c.mu, 2.0, 1e-15);
    EXPECT_NEAR(c.lambda, brute_lambda(D, eb), 1e-15);
    EXPECT_NEAR(c.e, brute_e(D, eb), 1e-15);
    EXPECT_NEAR(c.lambda, 0.2, 1e-15);
    EXPECT_NEAR(c.e, 0.06, 1e-15);
}

TEST(Material, IsotropicTensorReport) {
    const ElasticityTensor D = ElasticityTensor::isotropic(1.0, 1.0);
    const AssumptionReport rep = check_tensor_assumptions(D, 0.1 * Matrix3::Identity());
    EXPECT_TRUE(rep.symmetry.holds);
    EXPECT_FALSE(rep.zero_unless_k_eq_j.holds);
    EXPECT_FALSE(rep.contraction_diag.holds);
    EXPECT_FALSE(rep.mu_constant.holds);
    EXPECT_TRUE(rep.misfit_offdiag.holds);
    EXPECT_TRUE(rep.misfit_constant.holds);
    EXPECT_TRUE(rep.positive_definite);
    EXPECT_THROW((void)scalar_coefficients(D, 0.1 * Matrix3::Identity()), AssumptionViolated);
    EXPECT_NE(rep.to_string().find("FAIL  D_ij^kl = 0 if k != j"), std::string::npos);
}

TEST(Material, ViolationCarriesReport) {
    const ElasticityTensor D = ElasticityTensor::isotropic(1.0, 1.0);
    try {
        (void)scalar_coefficients(D, Matrix3::Identity());
        FAIL();
    } catch (const AssumptionViolated& e) {
        EXPECT_FALSE(e.report().extraction_conditions_hold());
        EXPECT_TRUE(e.report().zero_unless_k_eq_j.first_violation.has_value());
    }
}

TEST(Material, CoefficientsScaleLinearly) {
    const ElasticityTensor D = ElasticityTensor::diagonal(1.7);
    const Matrix3 eb = 0.05 * Matrix3::Identity();
    const auto c1 = scalar_coefficients(D, eb);
    const auto c3 = scalar_coefficients(D.scaled(3.0), eb);
    EXPECT_NEAR(c3.mu, 3.0 * c1.mu, 1e-14);
    EXPECT_NEAR(c3.lambda, 3.0 * c1.lambda, 1e-14);
    EXPECT_NEAR(c3.e, 3.0 * c1.e, 1e-14);
}

TEST(Material, NonIsotropicMisfitFailsE) {
    Matrix3 eb = 0.1 * Matrix3::Identity();
    eb(0, 0) = 0.2;
    const AssumptionReport rep = check_tensor_assumptions(ElasticityTensor::diagonal(1.0), eb);
    EXPECT_FALSE(rep.misfit_constant.holds);
    eb = 0.1 * Matrix3::Identity();
    eb(0, 1) = eb(1, 0) = 0.05;
    EXPECT_FALSE(check_tensor_assumptions(ElasticityTensor::diagonal(1.0), eb).misfit_offdiag.holds);
}

TEST(Material, FromEntriesRejectsWrongCount) {
    EXPECT_THROW((void)ElasticityTensor::from_entries(std::vector<double>(80, 0.0)), ValidationError);
}

TEST(Material, DoubleWellValues) {
    EXPECT_EQ(double_well(0.0, 1.0).value, 0.0);
    EXPECT_EQ(double_well(0.0, 1.0).derivative, 0.0);
    EXPECT_EQ(double_well(1.0, 1.0).value, 0.0);
    EXPECT_EQ(double_well(1.0, 1.0).derivative, 0.0);
    EXPECT_DOUBLE_EQ(double_well(0.5, 1.0).value, 0.0625);
    EXPECT_EQ(double_well(0.5, 1.0).derivative, 0.0);
}

TEST(Material, DoubleWellDerivativeMatchesDifference) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 2.0);
    const double h = 1e-5;
    auto fd = [&](double s) { return (double_well(s + h, 1.3).value - double_well(s - h, 1.3).value) / (2 * h); };
    EXPECT_NEAR(double_well(0.3, 1.3).derivative, fd(0.3), 1e-8);
    for (int k = 0; k < 100; ++k) {
        const double s = u(rng);
        EXPECT_NEAR(double_well(s, 1.3).derivative, fd(s), 1e-6);
    }
}

TEST(Material, FreeEnergyOnWellFloor) {
    const ElasticityTensor D = ElasticityTensor::diagonal(1.0);
    const Matrix3 eb = 0.1 * Matrix3::Identity();
    EXPECT_EQ(free_energy(eb * 0.0, 0.0, D, eb, 1.0), 0.0);
    EXPECT_NEAR(free_energy(eb * 1.0, 1.0, D, eb, 1.0), 0.0, 1e-16);
    EXPECT_EQ(free_energy(Matrix3::Zero(), 0.0, D, eb, 1.0), 0.0);
}

TEST(Material, FreeEnergyMatchesIndexSum) {
    std::mt19937_64 rng(5);
    const ElasticityTensor D = ElasticityTensor::isotropic(0.7, 1.1);
    const Matrix3 eb = 0.1 * Matrix3::Identity();
    for (int k = 0; k < 10; ++k) {
        const Matrix3 eps = random_symmetric(rng);
        const double S = 0.4;
        const Matrix3 el = eps - eb * S;
        double sum = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int m = 0; m < 3; ++m)
                    for (int l = 0; l < 3; ++l) sum += D(i, j, m, l) * el(i, j) * el(m, l);
        const double expected = 0.5 * sum + S * S * (1 - S) * (1 - S);
        EXPECT_NEAR(free_energy(eps, S, D, eb, 1.0), expected, 1e-12);
        EXPECT_GE(free_energy(eps, S, D, eb, 1.0), 0.0);
    }
}

TEST(Material, PositiveDefiniteness) {
    EXPECT_GT(ElasticityTensor::diagonal(1.0).min_symmetric_eigenvalue(), 0.0);
    EXPECT_GT(ElasticityTensor::isotropic(1.0, 1.0).min_symmetric_eigenvalue(), 0.0);
    EXPECT_LT(ElasticityTensor::diagonal(-1.0).min_symmetric_eigenvalue(), 0.0);
}

TEST(Material, ParamsFromTensors) {
    const auto p = MaterialParams::from_tensors(1.0, 0.05, 1.0, ElasticityTensor::diagonal(2.0),
                                                0.1 * Matrix3::Identity());
    EXPECT_NEAR(p.mu, 2.0, 1e-15);
    EXPECT_NEAR(p.lambda, 0.2, 1e-15);
    EXPECT_NEAR(p.e, 0.06, 1e-15);
    EXPECT_EQ(p.well_derivative(0.5), 0.0);
}
