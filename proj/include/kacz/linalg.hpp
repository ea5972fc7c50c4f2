#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace kacz {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class Storage { dense, banded };

/// Square matrix with cheap access to individual rows.
///
/// Rows are stored contiguously. Banded storage keeps `lower + upper + 1`
/// slots per row, so row `i` covers the columns
/// `[max(0, i - lower), min(n, i + upper + 1))`; dense storage keeps all `n`.
/// Every row operation touches only the stored slots, which is what makes a
/// Kaczmarz sweep over a banded matrix cost O(bandwidth * n).
class RowMatrix {
public:
    RowMatrix() = default;

    /// Takes a square dense matrix.
    static RowMatrix dense(const Matrix& m);
    /// Zero banded matrix of order `n` with the given bandwidths.
    static RowMatrix banded(Index n, Index lower, Index upper);

    Index order() const noexcept { return n_; }
    Storage storage() const noexcept { return storage_; }
    Index lower_bandwidth() const noexcept { return lower_; }
    Index upper_bandwidth() const noexcept { return upper_; }

    double operator()(Index i, Index j) const;
    /// Writes entry (i, j); throws IndexError when (i, j) lies outside the band.
    void set(Index i, Index j, double value);

    /// First stored column of row i.
    Index row_begin(Index i) const noexcept;
    /// One past the last stored column of row i.
    Index row_end(Index i) const noexcept;
    /// Stored entries of row i, aligned with columns [row_begin(i), row_end(i)).
    std::span<const double> row_entries(Index i) const noexcept;

    double row_dot(Index i, const Vector& x) const noexcept;
    /// x += alpha * a_i
    void row_axpy(Index i, double alpha, Vector& x) const noexcept;
    double row_squared_norm(Index i) const noexcept;
    void scale_row(Index i, double factor) noexcept;

    /// Dense copy of row i as a column vector (the vector a_i).
    Vector row(Index i) const;
    Matrix to_dense() const;
    Vector multiply(const Vector& x) const;
    /// A^T y
    Vector multiply_transposed(const Vector& y) const;

private:
    Index stride() const noexcept { return storage_ == Storage::dense ? n_ : lower_ + upper_ + 1; }
    Index slot(Index i, Index j) const noexcept;

    Index n_ = 0;
    Index lower_ = 0;
    Index upper_ = 0;
    Storage storage_ = Storage::dense;
    std::vector<double> data_;
};

/// Square system A x = b with an optional reference solution for error tracking.
class LinearSystem {
public:
    /// Throws SingularityError when a row of A is zero and ConfigError on size mismatch.
    LinearSystem(RowMatrix a, Vector b, std::optional<Vector> solution = std::nullopt,
                 bool preconditioned = false);

    Index order() const noexcept { return a_.order(); }
    const RowMatrix& matrix() const noexcept { return a_; }
    const Vector& rhs() const noexcept { return b_; }
    const std::optional<Vector>& solution() const noexcept { return x_; }
    const Vector& row_norms() const noexcept { return row_norms_; }
    double row_squared_norm(Index i) const noexcept { return row_sq_norms_[i]; }
    bool preconditioned() const noexcept { return preconditioned_; }

    /// b - A y, computed with a full matrix-vector product.
    Vector residual(const Vector& y) const;
    /// ||y - x|| against the reference solution, NaN when there is none.
    double error_norm(const Vector& y) const;
    /// ||y - x|| / ||x||, NaN when there is no reference solution.
    double relative_error(const Vector& y) const;

private:
    RowMatrix a_;
    Vector b_;
    std::optional<Vector> x_;
    Vector row_norms_;
    Vector row_sq_norms_;
    bool preconditioned_;
};

enum class GalleryKind { parter, clement, toeppen, lesp };

std::string_view to_string(GalleryKind kind) noexcept;
/// Throws ConfigError for unknown names.
GalleryKind parse_gallery_kind(std::string_view name);

/// Builds one of the classical test matrices with x = (1, ..., 1)^T and b = A x.
///
///  - parter:  a(i, j) = 1 / (i - j + 1/2), dense, singular values cluster near pi.
///  - clement: tridiagonal, zero diagonal, superdiagonal 1..N-1, subdiagonal N-1..1.
///  - toeppen: pentadiagonal Toeplitz with diagonals (1, -10, 0, 10, 1) at offsets -2..2.
///  - lesp:    tridiagonal, diagonal -(5, 7, ..., 2N+3), superdiagonal 2..N,
///             subdiagonal 1/2..1/N.
LinearSystem build_gallery(GalleryKind kind, Index n);

/// Row scaling D A x = D b with D = diag(1 / ||a_i||).
LinearSystem precondition_rows(const LinearSystem& system);

struct NoiseSpec {
    double amplitude = 0.0;  ///< delta
    std::uint64_t seed = 0;
};

/// Replaces b by b + delta ||b|| u / sqrt(N), u ~ N(0, 1)^N from a generator
/// seeded with `spec.seed`. The reference solution is kept, so error curves
/// keep measuring the distance to the clean solution.
LinearSystem add_noise(const LinearSystem& system, const NoiseSpec& spec);

/// The perturbation vector add_noise would add, exposed for statistics.
Vector noise_vector(const Vector& b, const NoiseSpec& spec);

/// One row per line, entries space separated, 17 significant digits.
void dump_matrix(const RowMatrix& a, std::ostream& out);

}  // namespace kacz
