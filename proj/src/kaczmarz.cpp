#include "kacz/kaczmarz.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "kacz/error.hpp"
#include "kacz/format.hpp"

namespace kacz {

Vector single_step(const LinearSystem& system, const Vector& p, Index i)
{
    if (i < 0 || i >= system.order())
        throw IndexError("single_step: row " + std::to_string(i) + " out of range");
    if (p.size() != system.order()) throw ConfigError("single_step: vector has wrong length");
    Vector out = p;
    project_row(system, out, i);
    return out;
}

void sweep_in_place(const LinearSystem& system, Vector& x, Vector* residual_components)
{
    const Index n = system.order();
    if (residual_components) {
        residual_components->resize(n);
        for (Index i = 0; i < n; ++i) (*residual_components)[i] = project_row(system, x, i);
    } else {
        for (Index i = 0; i < n; ++i) project_row(system, x, i);
    }
}

Vector sweep(const LinearSystem& system, const Vector& x)
{
    if (x.size() != system.order()) throw ConfigError("sweep: vector has wrong length");
    Vector out = x;
    sweep_in_place(system, out);
    return out;
}

BlockPartition::BlockPartition(std::vector<Index> sizes) : sizes_(std::move(sizes))
{
    if (sizes_.empty()) throw ConfigError("BlockPartition: no blocks");
    offsets_.reserve(sizes_.size() + 1);
    offsets_.push_back(0);
    for (Index s : sizes_) {
        if (s < 1) throw ConfigError("BlockPartition: block sizes must be positive");
        offsets_.push_back(offsets_.back() + s);
    }
}

BlockPartition BlockPartition::singletons(Index n) { return BlockPartition(std::vector<Index>(static_cast<std::size_t>(n), 1)); }

BlockPartition BlockPartition::uniform(Index n, Index block)
{
    if (block < 1) throw ConfigError("BlockPartition: block size must be positive");
    std::vector<Index> sizes;
    for (Index start = 0; start < n; start += block) sizes.push_back(std::min(block, n - start));
    return BlockPartition(std::move(sizes));
}

BlockKaczmarz::BlockKaczmarz(LinearSystem system, BlockPartition partition)
    : system_(std::move(system)), partition_(std::move(partition))
{
    const Index n = system_.order();
    if (partition_.total() != n)
        throw ConfigError("BlockKaczmarz: partition covers " + std::to_string(partition_.total()) +
                          " rows, system has " + std::to_string(n));
    factors_.reserve(static_cast<std::size_t>(partition_.blocks()));
    for (Index blk = 0; blk < partition_.blocks(); ++blk) {
        const Index off = partition_.offset(blk);
        const Index m = partition_.size(blk);
        Matrix rows_t(n, m);  // A_i: columns are the rows of the block
        for (Index r = 0; r < m; ++r) rows_t.col(r) = system_.matrix().row(off + r);
        Eigen::ColPivHouseholderQR<Matrix> qr(rows_t);
        if (qr.rank() < m)
            throw SingularityError("BlockKaczmarz: block " + std::to_string(blk) + " (rows " +
                                   std::to_string(off) + ".." + std::to_string(off + m - 1) +
                                   ") is rank deficient");
        factors_.push_back(std::move(qr));
    }
}

void BlockKaczmarz::sweep_in_place(Vector& x) const
{
    const Index n = system_.order();
    for (Index blk = 0; blk < partition_.blocks(); ++blk) {
        const Index off = partition_.offset(blk);
        const Index m = partition_.size(blk);
        const auto& qr = factors_[static_cast<std::size_t>(blk)];
        Vector local(m);
        for (Index r = 0; r < m; ++r) local[r] = system_.rhs()[off + r] - system_.matrix().row_dot(off + r, x);
        // A_i^T = Pi R^T Q^T, so the minimum-norm solution of A_i^T z = v is
        // z = Q [R^{-T} Pi^T v; 0].
        Vector w = qr.colsPermutation().transpose() * local;
        qr.matrixQR().topLeftCorner(m, m).triangularView<Eigen::Upper>().transpose().solveInPlace(w);
        Vector z = Vector::Zero(n);
        z.head(m) = w;
        x += qr.householderQ() * z;
    }
}

Vector BlockKaczmarz::sweep(const Vector& x) const
{
    Vector out = x;
    sweep_in_place(out);
    return out;
}

Vector block_sweep(const LinearSystem& system, const BlockPartition& partition, const Vector& x)
{
    return BlockKaczmarz(system, partition).sweep(x);
}

SweepTrace iterate(const LinearSystem& system, const Vector& x0, Index max_sweeps, double tol)
{
    if (max_sweeps < 0) throw ConfigError("iterate: max_sweeps must be non-negative");
    if (!(tol >= 0.0)) throw ConfigError("iterate: tolerance must be non-negative");
    if (x0.size() != system.order()) throw ConfigError("iterate: initial vector has wrong length");

    const double target = tol * system.rhs().norm();
    SweepTrace trace;
    trace.iterates.push_back(x0);
    trace.residual_norms.push_back(system.residual(x0).norm());
    trace.error_norms.push_back(system.error_norm(x0));

    bool converged = trace.residual_norms.front() <= target;
    Vector components;
    for (Index s = 0; s < max_sweeps && !converged; ++s) {
        Vector x = trace.iterates.back();
        sweep_in_place(system, x, &components);
        // The components were measured while sweeping away from the previous iterate.
        const double running = components.norm();
        trace.residual_norms.back() = s == 0 ? trace.residual_norms.back() : running;
        trace.iterates.push_back(std::move(x));
        trace.residual_norms.push_back(std::numeric_limits<double>::quiet_NaN());
        trace.error_norms.push_back(system.error_norm(trace.iterates.back()));
        trace.last_coefficients = components.cwiseQuotient(system.row_norms().cwiseAbs2());
        converged = running <= target;
    }
    trace.final_residual = system.residual(trace.iterates.back());
    trace.residual_norms.back() = trace.final_residual.norm();
    return trace;
}

void write_trace_csv(const SweepTrace& trace, std::ostream& out)
{
    out << "n,err_norm,res_norm\n";
    for (std::size_t n = 0; n < trace.iterates.size(); ++n)
        out << n << ',' << format_field(trace.error_norms[n]) << ',' << format_field(trace.residual_norms[n]) << '\n';
}

Matrix ProjectorSet::shifted_residual_operator(Index j) const
{
    const Index n = static_cast<Index>(p.size());
    if (j < 1 || j > n) throw IndexError("shifted_residual_operator: j out of range");
    Matrix m = Matrix::Identity(n, n);
    // Rightmost factor first: P_j, ..., P_N, then P_1, ..., P_{j-1}.
    for (Index i = j; i <= n; ++i) m = p[static_cast<std::size_t>(i - 1)] * m;
    for (Index i = 1; i < j; ++i) m = p[static_cast<std::size_t>(i - 1)] * m;
    return m;
}

ProjectorSet projector_oracle(const LinearSystem& system, Index max_order)
{
    const Index n = system.order();
    if (n > max_order)
        throw CapabilityError("projector_oracle: order " + std::to_string(n) + " exceeds the guard of " +
                              std::to_string(max_order));
    const Matrix a = system.matrix().to_dense();
    ProjectorSet set;
    set.p_product = Matrix::Identity(n, n);
    set.q_product = Matrix::Identity(n, n);
    for (Index i = 0; i < n; ++i) {
        const Vector ai = a.row(i).transpose();
        Vector alpha = ai / ai.squaredNorm();
        Matrix pi = Matrix::Identity(n, n);
        pi.col(i) -= a * alpha;
        Matrix qi = Matrix::Identity(n, n) - alpha * ai.transpose();
        set.p_product = pi * set.p_product;
        set.q_product = qi * set.q_product;
        set.alpha.push_back(std::move(alpha));
        set.p.push_back(std::move(pi));
        set.q.push_back(std::move(qi));
    }
    return set;
}

}  // namespace kacz
