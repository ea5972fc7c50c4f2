#include "kacz/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "kacz/error.hpp"

namespace kacz {

Matrix iteration_matrix(const LinearSystem& system)
{
    const Index n = system.order();
    const RowMatrix& a = system.matrix();
    Matrix q = Matrix::Identity(n, n);
    for (Index c = 0; c < n; ++c) {
        Vector v = q.col(c);
        for (Index i = 0; i < n; ++i) a.row_axpy(i, -a.row_dot(i, v) / system.row_squared_norm(i), v);
        q.col(c) = v;
    }
    return q;
}

double meany_constant(const LinearSystem& system)
{
    const Eigen::PartialPivLU<Matrix> lu(system.matrix().to_dense());
    const Vector diag = lu.matrixLU().diagonal();
    double log_det = 0.0;
    for (Index i = 0; i < diag.size(); ++i) log_det += std::log(std::abs(diag[i]));
    double log_rows = 0.0;
    for (Index i = 0; i < system.order(); ++i) log_rows += std::log(system.row_squared_norm(i));
    return 1.0 - std::exp(2.0 * log_det - log_rows);
}

namespace {

// Arnoldi with re-orthogonalisation; the degree is the number of basis
// vectors gathered before the next Krylov direction becomes negligible.
Index krylov_degree(const Matrix& q, const Vector& start, double tol)
{
    const Index n = q.rows();
    const double start_norm = start.norm();
    if (start_norm == 0.0) return 0;
    Matrix basis(n, n);
    basis.col(0) = start / start_norm;
    for (Index j = 1; j < n; ++j) {
        Vector w = q * basis.col(j - 1);
        const double w_norm = w.norm();
        for (int pass = 0; pass < 2; ++pass)
            for (Index i = 0; i < j; ++i) w -= basis.col(i).dot(w) * basis.col(i);
        if (w.norm() <= tol * std::max(w_norm, 1e-300)) return j;
        basis.col(j) = w / w.norm();
    }
    return n;
}

}  // namespace

SpectralDiagnostics spectral_diagnostics(const LinearSystem& system, const SpectralOptions& options)
{
    const Index n = system.order();
    if (n > options.max_order)
        throw CapabilityError("spectral_diagnostics: order " + std::to_string(n) +
                              " exceeds the dense guard of " + std::to_string(options.max_order) +
                              "; raise the max-order guard to force it");

    const Matrix q = iteration_matrix(system);
    Eigen::EigenSolver<Matrix> solver(q, options.eigenvectors);
    if (solver.info() != Eigen::Success) throw Error("spectral_diagnostics: eigenvalue iteration failed");

    const Eigen::VectorXcd values = solver.eigenvalues();
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index l, Index r) { return std::abs(values[l]) > std::abs(values[r]); });

    SpectralDiagnostics out;
    out.eigenvalues.resize(n);
    for (Index i = 0; i < n; ++i) out.eigenvalues[i] = values[order[static_cast<std::size_t>(i)]];
    if (options.eigenvectors) {
        const Eigen::MatrixXcd vectors = solver.eigenvectors();
        out.eigenvectors.resize(n, n);
        for (Index i = 0; i < n; ++i) out.eigenvectors.col(i) = vectors.col(order[static_cast<std::size_t>(i)]);
    }
    out.spectral_radius = std::abs(out.eigenvalues[0]);

    if (system.solution()) {
        const Vector x0 = options.initial_guess.value_or(Vector::Zero(n));
        out.minimal_polynomial_degree = krylov_degree(q, *system.solution() - x0, options.krylov_tolerance);
    }

    out.meany_constant = meany_constant(system);
    const Eigen::BDCSVD<Matrix> svd(system.matrix().to_dense());
    const Vector& s = svd.singularValues();
    out.condition_number = s[0] / s[s.size() - 1];
    return out;
}

}  // namespace kacz
