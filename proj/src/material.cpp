#include "confsim/material.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace confsim {

ElasticityTensor ElasticityTensor::diagonal(double mu0) {
    ElasticityTensor D;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) D(i, j, j, i) = mu0;
    return D;
}

ElasticityTensor ElasticityTensor::isotropic(double lame_lambda, double lame_mu) {
    ElasticityTensor D;
    auto delta = [](int p, int q) { return p == q ? 1.0 : 0.0; };
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l)
                    D(i, j, k, l) = lame_lambda * delta(i, j) * delta(k, l) +
                                    lame_mu * (delta(i, k) * delta(j, l) + delta(i, l) * delta(j, k));
    return D;
}

ElasticityTensor ElasticityTensor::from_entries(const std::vector<double>& entries) {
    if (entries.size() != 81) throw ValidationError("elasticity tensor needs 81 entries, got " + std::to_string(entries.size()));
    ElasticityTensor D;
    std::size_t idx = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) D(i, j, k, l) = entries[idx++];
    return D;
}

Matrix3 ElasticityTensor::apply(const Matrix3& eps) const {
    Eigen::Matrix<double, 9, 1> flat;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) flat(3 * i + j) = eps(i, j);
    const Eigen::Matrix<double, 9, 1> out = entries_.transpose() * flat;
    Matrix3 result;
    for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) result(k, l) = out(3 * k + l);
    return result;
}

double ElasticityTensor::contract(const Matrix3& eps, const Matrix3& eta) const {
    return apply(eps).cwiseProduct(eta).sum();
}

double ElasticityTensor::min_symmetric_eigenvalue() const {
    // Orthonormal basis of symmetric 3x3 matrices under A.B = sum a_ij b_ij.
    std::array<Matrix3, 6> basis;
    int idx = 0;
    for (int i = 0; i < 3; ++i) {
        for (int j = i; j < 3; ++j) {
            Matrix3 m = Matrix3::Zero();
            if (i == j) {
                m(i, i) = 1.0;
            } else {
                m(i, j) = m(j, i) = 1.0 / std::sqrt(2.0);
            }
            basis[idx++] = m;
        }
    }
    Eigen::Matrix<double, 6, 6> gram;
    for (int p = 0; p < 6; ++p)
        for (int q = 0; q < 6; ++q) gram(p, q) = contract(basis[q], basis[p]);
    const Eigen::Matrix<double, 6, 6> sym = 0.5 * (gram + gram.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 6, 6>> solver(sym, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

namespace {

void record(ConditionResult& cond, double deviation, const IndexTuple& where) {
    const double dev = std::abs(deviation);
    if (dev > cond.max_deviation) cond.max_deviation = dev;
    if (dev > AssumptionReport::tolerance && cond.holds) {
        cond.holds = false;
        cond.first_violation = where;
    }
}

Matrix3 misfit_contraction(const ElasticityTensor& D, const Matrix3& eps_bar) {
    // E_kl = sum_ij D_{ij}^{kl} eps_bar_ij
    return D.apply(eps_bar);
}

}  // namespace

AssumptionReport check_tensor_assumptions(const ElasticityTensor& D, const Matrix3& eps_bar) {
    AssumptionReport report;
    report.symmetry.name = "symmetry D_kl^ij = D_ij^kl = D_lk^ij = D_kl^ji";
    report.zero_unless_k_eq_j.name = "D_ij^kl = 0 if k != j";
    report.contraction_diag.name = "D_ij^jl = 0 if i != l, independent of j";
    report.mu_constant.name = "C_ll = D_lj^jl independent of l (mu)";
    report.misfit_offdiag.name = "E_kl = 0 if k != l";
    report.misfit_constant.name = "E_kk independent of k (lambda)";

    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) {
                    const IndexTuple at{i, j, k, l};
                    const double v = D(i, j, k, l);
                    record(report.symmetry, D(k, l, i, j) - v, at);
                    record(report.symmetry, D(l, k, i, j) - D(k, l, i, j), at);
                    record(report.symmetry, D(k, l, j, i) - D(k, l, i, j), at);
                    if (k != j) record(report.zero_unless_k_eq_j, v, at);
                }

    for (int i = 0; i < 3; ++i)
        for (int l = 0; l < 3; ++l)
            for (int j = 0; j < 3; ++j) {
                const IndexTuple at{i, j, j, l};
                if (i != l) record(report.contraction_diag, D(i, j, j, l), at);
                record(report.contraction_diag, D(i, j, j, l) - D(i, 0, 0, l), at);
            }

    // C_il with j = 0; contraction_diag already covers the other j.
    for (int l = 1; l < 3; ++l) record(report.mu_constant, D(l, 0, 0, l) - D(0, 0, 0, 0), {l, 0, 0, l});

    const Matrix3 E = misfit_contraction(D, eps_bar);
    for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
            if (k != l) record(report.misfit_offdiag, E(k, l), {-1, -1, k, l});
    for (int k = 1; k < 3; ++k) record(report.misfit_constant, E(k, k) - E(0, 0), {-1, -1, k, k});

    report.positive_definite = D.min_symmetric_eigenvalue() > 0.0;
    return report;
}

bool AssumptionReport::all_hold() const {
    for (const auto* c : conditions())
        if (!c->holds) return false;
    return true;
}

bool AssumptionReport::extraction_conditions_hold() const {
    return zero_unless_k_eq_j.holds && contraction_diag.holds && mu_constant.holds && misfit_offdiag.holds &&
           misfit_constant.holds;
}

std::string AssumptionReport::to_string() const {
    std::ostringstream out;
    for (const auto* c : conditions()) {
        out << (c->holds ? "  pass  " : "  FAIL  ") << c->name;
        if (c->first_violation) {
            const auto& t = *c->first_violation;
            out << "  first violation at (";
            for (int p = 0; p < 4; ++p) {
                if (p) out << ',';
                if (t[p] < 0)
                    out << '-';
                else
                    out << t[p] + 1;
            }
            out << ") deviation " << c->max_deviation;
        }
        out << '\n';
    }
    out << (positive_definite ? "  pass  " : "  FAIL  ") << "positive definite on symmetric matrices\n";
    return out.str();
}

ScalarCoefficients scalar_coefficients(const ElasticityTensor& D, const Matrix3& eps_bar) {
    AssumptionReport report = check_tensor_assumptions(D, eps_bar);
    if (!report.extraction_conditions_hold()) throw AssumptionViolated(std::move(report));
    const Matrix3 E = misfit_contraction(D, eps_bar);
    return {D(0, 0, 0, 0), E(0, 0), E.cwiseProduct(eps_bar).sum()};
}

double free_energy(const Matrix3& eps, double S, const ElasticityTensor& D, const Matrix3& eps_bar,
                   double well_weight) {
    const Matrix3 elastic = eps - eps_bar * S;
    return 0.5 * D.contract(elastic, elastic) + double_well(S, well_weight).value;
}

MaterialParams MaterialParams::from_tensors(double c, double nu, double well_weight, const ElasticityTensor& D,
                                            const Matrix3& eps_bar) {
    const ScalarCoefficients coeffs = scalar_coefficients(D, eps_bar);
    MaterialParams p;
    p.c = c;
    p.nu = nu;
    p.well_weight = well_weight;
    p.mu = coeffs.mu;
    p.lambda = coeffs.lambda;
    p.e = coeffs.e;
    p.tensor = D;
    p.misfit = eps_bar;
    return p;
}

}  // namespace confsim
