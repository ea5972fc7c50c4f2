#pragma once

#include <optional>

#include "kacz/linalg.hpp"

namespace kacz {

struct SpectralOptions {
    /// Dense eigendecomposition guard; raise it explicitly for bigger systems.
    Index max_order = 4096;
    bool eigenvectors = false;
    /// x_0 used for the minimal-polynomial degree of Q on x - x_0 (zero when unset).
    std::optional<Vector> initial_guess;
    double krylov_tolerance = 1e-10;
};

struct SpectralDiagnostics {
    Eigen::VectorXcd eigenvalues;   ///< tau_1..tau_N of Q, by decreasing modulus
    Eigen::MatrixXcd eigenvectors;  ///< columns match `eigenvalues`; empty unless requested
    double spectral_radius = 0.0;
    /// Numerical degree of the minimal polynomial of Q for x - x_0; -1 without a reference solution.
    Index minimal_polynomial_degree = -1;
    double meany_constant = 0.0;    ///< 1 - det(A)^2 / prod ||a_i||^2
    double condition_number = 0.0;  ///< 2-norm condition number of A
};

/// Assembles Q = Q_N ... Q_1 column by column with homogeneous sweeps.
Matrix iteration_matrix(const LinearSystem& system);

/// 1 - det(A)^2 / prod ||a_i||^2, evaluated in log space from an LU factorization.
double meany_constant(const LinearSystem& system);

/// Eigenvalues of Q, spectral radius, Meany constant, and cond(A).
/// Throws CapabilityError above `options.max_order`.
SpectralDiagnostics spectral_diagnostics(const LinearSystem& system, const SpectralOptions& options = {});

}  // namespace kacz
