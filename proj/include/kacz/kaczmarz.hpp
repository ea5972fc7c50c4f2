#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/QR>

#include "kacz/linalg.hpp"

namespace kacz {

/// One projection step onto the hyperplane of row `i` (0-based), in place:
/// p += (b_i - (p, a_i)) / ||a_i||^2 * a_i.
/// Returns the residual component b_i - (p, a_i) seen before the update.
/// Touches only the stored entries of row i; no matrix-vector product.
inline double project_row(const LinearSystem& system, Vector& p, Index i) noexcept
{
    const double rho = system.rhs()[i] - system.matrix().row_dot(i, p);
    system.matrix().row_axpy(i, rho / system.row_squared_norm(i), p);
    return rho;
}

/// Checked single step returning the new vector. Throws IndexError for a bad row.
Vector single_step(const LinearSystem& system, const Vector& p, Index i);

/// One cyclic sweep over the rows in natural order, in place.
/// When `residual_components` is given it receives (rho_{i-1}, e_i) for every
/// step i, i.e. the residual component each projection annihilated.
void sweep_in_place(const LinearSystem& system, Vector& x, Vector* residual_components = nullptr);

Vector sweep(const LinearSystem& system, const Vector& x);

/// Contiguous partition of the rows into blocks of the given sizes.
class BlockPartition {
public:
    explicit BlockPartition(std::vector<Index> sizes);

    static BlockPartition singletons(Index n);
    /// Blocks of `block` rows; the last one takes the remainder.
    static BlockPartition uniform(Index n, Index block);

    Index blocks() const noexcept { return static_cast<Index>(sizes_.size()); }
    Index size(Index block) const { return sizes_.at(static_cast<std::size_t>(block)); }
    Index offset(Index block) const { return offsets_.at(static_cast<std::size_t>(block)); }
    Index total() const noexcept { return offsets_.back(); }

private:
    std::vector<Index> sizes_;
    std::vector<Index> offsets_;
};

/// Block Kaczmarz sweeps, p += (A_i^T)^+ E_i^T (b - A p) for each block.
///
/// The column-pivoted QR of every A_i (N x N_i) is computed once at
/// construction and reused for all sweeps.
class BlockKaczmarz {
public:
    /// Throws SingularityError naming the first rank-deficient block.
    BlockKaczmarz(LinearSystem system, BlockPartition partition);

    void sweep_in_place(Vector& x) const;
    Vector sweep(const Vector& x) const;

    const BlockPartition& partition() const noexcept { return partition_; }

private:
    LinearSystem system_;
    BlockPartition partition_;
    std::vector<Eigen::ColPivHouseholderQR<Matrix>> factors_;
};

Vector block_sweep(const LinearSystem& system, const BlockPartition& partition, const Vector& x);

/// Record of a plain Kaczmarz run.
struct SweepTrace {
    std::vector<Vector> iterates;       ///< x_0 ... x_n
    /// ||b - A x_j||. Entry 0 and the last entry are computed exactly; the
    /// others are the running estimate gathered while sweeping from x_j.
    std::vector<double> residual_norms;
    std::vector<double> error_norms;    ///< ||x - x_j||, NaN without a reference solution
    Vector last_coefficients;           ///< lambda_1..lambda_N of the last sweep
    Vector final_residual;              ///< b - A x_n, recomputed once

    Index sweeps() const noexcept { return static_cast<Index>(iterates.size()) - 1; }
};

/// Sweeps from x_0 until the residual drops to tol * ||b|| or `max_sweeps` is reached.
SweepTrace iterate(const LinearSystem& system, const Vector& x0, Index max_sweeps, double tol);

/// Writes the columns n, err_norm, res_norm.
void write_trace_csv(const SweepTrace& trace, std::ostream& out);

/// Explicit projector matrices, for verification at small sizes only.
struct ProjectorSet {
    std::vector<Vector> alpha;  ///< a_i / ||a_i||^2
    std::vector<Matrix> p;      ///< P_i = I - A alpha_i e_i^T
    std::vector<Matrix> q;      ///< Q_i = I - alpha_i a_i^T
    Matrix p_product;           ///< P_N ... P_1
    Matrix q_product;           ///< Q_N ... Q_1

    /// P_{j-1} ... P_1 P_N ... P_j (1-based j), mapping rho_{nN+j-1} to rho_{(n+1)N+j-1}.
    Matrix shifted_residual_operator(Index j) const;
};

/// Throws CapabilityError above `max_order` (512 by default).
ProjectorSet projector_oracle(const LinearSystem& system, Index max_order = 512);

}  // namespace kacz
