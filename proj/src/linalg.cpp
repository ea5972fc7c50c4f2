#include "kacz/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <string>

#include "kacz/error.hpp"
#include "kacz/format.hpp"

namespace kacz {

RowMatrix RowMatrix::dense(const Matrix& m)
{
    if (m.rows() != m.cols() || m.rows() < 1)
        throw ConfigError("RowMatrix::dense: matrix must be square and non-empty");
    RowMatrix r;
    r.n_ = m.rows();
    r.lower_ = r.n_ - 1;
    r.upper_ = r.n_ - 1;
    r.storage_ = Storage::dense;
    r.data_.resize(static_cast<std::size_t>(r.n_ * r.n_));
    for (Index i = 0; i < r.n_; ++i)
        for (Index j = 0; j < r.n_; ++j) r.data_[static_cast<std::size_t>(i * r.n_ + j)] = m(i, j);
    return r;
}

RowMatrix RowMatrix::banded(Index n, Index lower, Index upper)
{
    if (n < 1 || lower < 0 || upper < 0)
        throw ConfigError("RowMatrix::banded: order must be positive and bandwidths non-negative");
    RowMatrix r;
    r.n_ = n;
    r.lower_ = std::min(lower, n - 1);
    r.upper_ = std::min(upper, n - 1);
    r.storage_ = Storage::banded;
    r.data_.assign(static_cast<std::size_t>(n * r.stride()), 0.0);
    return r;
}

Index RowMatrix::slot(Index i, Index j) const noexcept
{
    return storage_ == Storage::dense ? i * n_ + j : i * stride() + (j - i + lower_);
}

double RowMatrix::operator()(Index i, Index j) const
{
    if (i < 0 || i >= n_ || j < 0 || j >= n_) throw IndexError("RowMatrix: index out of range");
    if (j < row_begin(i) || j >= row_end(i)) return 0.0;
    return data_[static_cast<std::size_t>(slot(i, j))];
}

void RowMatrix::set(Index i, Index j, double value)
{
    if (i < 0 || i >= n_ || j < 0 || j >= n_) throw IndexError("RowMatrix: index out of range");
    if (j < row_begin(i) || j >= row_end(i)) throw IndexError("RowMatrix: entry outside the band");
    data_[static_cast<std::size_t>(slot(i, j))] = value;
}

Index RowMatrix::row_begin(Index i) const noexcept
{
    return storage_ == Storage::dense ? 0 : std::max<Index>(0, i - lower_);
}

Index RowMatrix::row_end(Index i) const noexcept
{
    return storage_ == Storage::dense ? n_ : std::min<Index>(n_, i + upper_ + 1);
}

std::span<const double> RowMatrix::row_entries(Index i) const noexcept
{
    const Index b = row_begin(i);
    const Index e = row_end(i);
    return {data_.data() + slot(i, b), static_cast<std::size_t>(e - b)};
}

double RowMatrix::row_dot(Index i, const Vector& x) const noexcept
{
    const auto row = row_entries(i);
    const double* xp = x.data() + row_begin(i);
    double s = 0.0;
    for (std::size_t k = 0; k < row.size(); ++k) s += row[k] * xp[k];
    return s;
}

void RowMatrix::row_axpy(Index i, double alpha, Vector& x) const noexcept
{
    const auto row = row_entries(i);
    double* xp = x.data() + row_begin(i);
    for (std::size_t k = 0; k < row.size(); ++k) xp[k] += alpha * row[k];
}

double RowMatrix::row_squared_norm(Index i) const noexcept
{
    double s = 0.0;
    for (double v : row_entries(i)) s += v * v;
    return s;
}

void RowMatrix::scale_row(Index i, double factor) noexcept
{
    const Index b = row_begin(i);
    const Index e = row_end(i);
    for (Index j = b; j < e; ++j) data_[static_cast<std::size_t>(slot(i, j))] *= factor;
}

Vector RowMatrix::row(Index i) const
{
    Vector v = Vector::Zero(n_);
    const auto entries = row_entries(i);
    const Index b = row_begin(i);
    for (std::size_t k = 0; k < entries.size(); ++k) v[b + static_cast<Index>(k)] = entries[k];
    return v;
}

Matrix RowMatrix::to_dense() const
{
    Matrix m = Matrix::Zero(n_, n_);
    for (Index i = 0; i < n_; ++i) m.row(i) = row(i).transpose();
    return m;
}

Vector RowMatrix::multiply(const Vector& x) const
{
    Vector y(n_);
    for (Index i = 0; i < n_; ++i) y[i] = row_dot(i, x);
    return y;
}

Vector RowMatrix::multiply_transposed(const Vector& y) const
{
    Vector x = Vector::Zero(n_);
    for (Index i = 0; i < n_; ++i) row_axpy(i, y[i], x);
    return x;
}

LinearSystem::LinearSystem(RowMatrix a, Vector b, std::optional<Vector> solution, bool preconditioned)
    : a_(std::move(a)), b_(std::move(b)), x_(std::move(solution)), preconditioned_(preconditioned)
{
    const Index n = a_.order();
    if (n < 1) throw ConfigError("LinearSystem: empty matrix");
    if (b_.size() != n) throw ConfigError("LinearSystem: right-hand side has wrong length");
    if (x_ && x_->size() != n) throw ConfigError("LinearSystem: reference solution has wrong length");
    row_sq_norms_.resize(n);
    for (Index i = 0; i < n; ++i) {
        row_sq_norms_[i] = a_.row_squared_norm(i);
        if (!(row_sq_norms_[i] > 0.0))
            throw SingularityError("LinearSystem: row " + std::to_string(i) + " is zero");
    }
    row_norms_ = row_sq_norms_.cwiseSqrt();
}

Vector LinearSystem::residual(const Vector& y) const { return b_ - a_.multiply(y); }

double LinearSystem::error_norm(const Vector& y) const
{
    return x_ ? (y - *x_).norm() : std::numeric_limits<double>::quiet_NaN();
}

double LinearSystem::relative_error(const Vector& y) const
{
    return x_ ? (y - *x_).norm() / x_->norm() : std::numeric_limits<double>::quiet_NaN();
}

std::string_view to_string(GalleryKind kind) noexcept
{
    switch (kind) {
    case GalleryKind::parter: return "parter";
    case GalleryKind::clement: return "clement";
    case GalleryKind::toeppen: return "toeppen";
    case GalleryKind::lesp: return "lesp";
    }
    return "?";
}

GalleryKind parse_gallery_kind(std::string_view name)
{
    for (auto k : {GalleryKind::parter, GalleryKind::clement, GalleryKind::toeppen, GalleryKind::lesp})
        if (name == to_string(k)) return k;
    throw ConfigError("unknown matrix kind '" + std::string(name) + "'");
}

namespace {

RowMatrix make_parter(Index n)
{
    Matrix m(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) m(i, j) = 1.0 / (static_cast<double>(i - j) + 0.5);
    return RowMatrix::dense(m);
}

RowMatrix make_clement(Index n)
{
    auto a = RowMatrix::banded(n, 1, 1);
    for (Index i = 0; i + 1 < n; ++i) {
        a.set(i, i + 1, static_cast<double>(i + 1));
        a.set(i + 1, i, static_cast<double>(n - 1 - i));
    }
    return a;
}

RowMatrix make_toeppen(Index n)
{
    constexpr double diagonals[5] = {1.0, -10.0, 0.0, 10.0, 1.0};
    auto a = RowMatrix::banded(n, 2, 2);
    for (Index i = 0; i < n; ++i)
        for (Index off = -2; off <= 2; ++off) {
            const Index j = i + off;
            if (j >= 0 && j < n) a.set(i, j, diagonals[off + 2]);
        }
    return a;
}

RowMatrix make_lesp(Index n)
{
    auto a = RowMatrix::banded(n, 1, 1);
    for (Index i = 0; i < n; ++i) {
        a.set(i, i, -static_cast<double>(2 * (i + 1) + 3));
        if (i + 1 < n) {
            a.set(i, i + 1, static_cast<double>(i + 2));
            a.set(i + 1, i, 1.0 / static_cast<double>(i + 2));
        }
    }
    return a;
}

}  // namespace

LinearSystem build_gallery(GalleryKind kind, Index n)
{
    if (n < 2) throw ConfigError("build_gallery: order must be at least 2");
    RowMatrix a;
    switch (kind) {
    case GalleryKind::parter: a = make_parter(n); break;
    case GalleryKind::clement: a = make_clement(n); break;
    case GalleryKind::toeppen: a = make_toeppen(n); break;
    case GalleryKind::lesp: a = make_lesp(n); break;
    }
    Vector x = Vector::Ones(n);
    Vector b = a.multiply(x);
    return LinearSystem(std::move(a), std::move(b), std::move(x));
}

LinearSystem precondition_rows(const LinearSystem& system)
{
    RowMatrix a = system.matrix();
    Vector b = system.rhs();
    for (Index i = 0; i < a.order(); ++i) {
        const double inv = 1.0 / system.row_norms()[i];
        a.scale_row(i, inv);
        b[i] *= inv;
    }
    return LinearSystem(std::move(a), std::move(b), system.solution(), true);
}

Vector noise_vector(const Vector& b, const NoiseSpec& spec)
{
    if (!(spec.amplitude >= 0.0)) throw ConfigError("add_noise: amplitude must be non-negative");
    const Index n = b.size();
    std::mt19937_64 gen(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector u(n);
    for (Index i = 0; i < n; ++i) u[i] = normal(gen);
    return (spec.amplitude * b.norm() / std::sqrt(static_cast<double>(n))) * u;
}

LinearSystem add_noise(const LinearSystem& system, const NoiseSpec& spec)
{
    Vector e = noise_vector(system.rhs(), spec);
    if (spec.amplitude == 0.0) return system;
    return LinearSystem(system.matrix(), system.rhs() + e, system.solution(), system.preconditioned());
}

void dump_matrix(const RowMatrix& a, std::ostream& out)
{
    const Index n = a.order();
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            if (j) out << ' ';
            out << format_double(a(i, j));
        }
        out << '\n';
    }
}

}  // namespace kacz
