#include "kacz/transforms.hpp"

#include <cmath>
#include <random>
#include <string>

#include <Eigen/LU>
#include <Eigen/QR>

#include "kacz/error.hpp"
#include "kacz/format.hpp"

namespace kacz {

namespace {

constexpr TransformKind all_kinds[] = {TransformKind::mpe,         TransformKind::rre,
                                       TransformKind::mmpe,        TransformKind::topological,
                                       TransformKind::vector_epsilon, TransformKind::scalar_epsilon};

std::string normalise(std::string_view name)
{
    std::string s(name);
    for (char& c : s) {
        if (c == '_') c = '-';
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return s;
}

bool negligible(double denominator, double scale)
{
    return !(std::abs(denominator) > default_breakdown_tolerance * scale);
}

std::vector<Vector> differences(std::span<const Vector> window, Index count)
{
    std::vector<Vector> dx;
    dx.reserve(static_cast<std::size_t>(count));
    for (Index j = 0; j < count; ++j) dx.push_back(window[j + 1] - window[j]);
    return dx;
}

void require_window(const TransformSpec& spec, std::span<const Vector> window)
{
    if (static_cast<Index>(window.size()) < spec.iterates_required())
        throw ConfigError("transform window holds " + std::to_string(window.size()) + " iterates, " +
                          std::string(to_string(spec.kind)) + " with k=" + std::to_string(spec.order) +
                          " needs " + std::to_string(spec.iterates_required()));
}

// Divides every row of [m | rhs] by the largest magnitude in m's row.
// A zero row makes the system singular, reported by returning false.
bool equilibrate(Matrix& m, Vector* rhs)
{
    for (Index i = 0; i < m.rows(); ++i) {
        const double scale = m.row(i).cwiseAbs().maxCoeff();
        if (!(scale > 0.0) || !std::isfinite(scale)) return false;
        m.row(i) /= scale;
        if (rhs) (*rhs)[i] /= scale;
    }
    return true;
}

// Column scales after row equilibration; the moments of successive
// differences are graded, so both sides are needed for a useful estimate.
bool column_scales(Matrix& m, Vector& scales)
{
    scales.resize(m.cols());
    for (Index j = 0; j < m.cols(); ++j) {
        scales[j] = m.col(j).cwiseAbs().maxCoeff();
        if (!(scales[j] > 0.0)) return false;
        m.col(j) /= scales[j];
    }
    return true;
}

Vector solve_checked(Matrix m, Vector rhs, double max_condition, double& condition, const char* which)
{
    Vector scales;
    if (!equilibrate(m, &rhs) || !column_scales(m, scales)) {
        condition = std::numeric_limits<double>::infinity();
        throw BreakdownError(std::string(which) + " system has a zero row or column", condition);
    }
    const Eigen::PartialPivLU<Matrix> lu(m);
    const double rcond = lu.rcond();
    condition = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    if (!(condition <= max_condition))
        throw BreakdownError(std::string(which) + " system is singular to working precision (condition " +
                                 format_double(condition) + ")",
                             condition);
    Vector sol = lu.solve(rhs).cwiseQuotient(scales);
    if (!sol.allFinite()) throw BreakdownError(std::string(which) + " solution is not finite", condition);
    return sol;
}

}  // namespace

std::string_view to_string(TransformKind kind) noexcept
{
    switch (kind) {
    case TransformKind::mpe: return "mpe";
    case TransformKind::rre: return "rre";
    case TransformKind::mmpe: return "mmpe";
    case TransformKind::topological: return "topological";
    case TransformKind::vector_epsilon: return "vector-epsilon";
    case TransformKind::scalar_epsilon: return "scalar-epsilon";
    }
    return "?";
}

TransformKind parse_transform_kind(std::string_view name)
{
    const std::string s = normalise(name);
    for (auto k : all_kinds)
        if (s == to_string(k)) return k;
    throw ConfigError("unknown transform '" + std::string(name) + "'");
}

bool is_epsilon_kind(TransformKind kind) noexcept
{
    return kind == TransformKind::topological || kind == TransformKind::vector_epsilon ||
           kind == TransformKind::scalar_epsilon;
}

int window_length(TransformKind kind, int k) { return is_epsilon_kind(kind) ? 2 * k : k + 1; }

std::string_view to_string(AuxPolicy policy) noexcept
{
    switch (policy) {
    case AuxPolicy::random: return "random";
    case AuxPolicy::ones: return "ones";
    case AuxPolicy::canonical: return "canonical";
    }
    return "?";
}

AuxPolicy parse_aux_policy(std::string_view name)
{
    const std::string s = normalise(name);
    for (auto p : {AuxPolicy::random, AuxPolicy::ones, AuxPolicy::canonical})
        if (s == to_string(p)) return p;
    throw ConfigError("unknown auxiliary-vector policy '" + std::string(name) + "'");
}

std::vector<Vector> make_auxiliary(TransformKind kind, int k, Index dimension, AuxPolicy policy,
                                   std::uint64_t seed)
{
    int count = 0;
    if (kind == TransformKind::topological) count = 1;
    if (kind == TransformKind::mmpe) count = k;
    std::vector<Vector> out;
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    for (int i = 0; i < count; ++i) {
        switch (policy) {
        case AuxPolicy::random: {
            Vector v(dimension);
            for (Index c = 0; c < dimension; ++c) v[c] = uniform(gen);
            out.push_back(std::move(v));
            break;
        }
        case AuxPolicy::ones: out.push_back(Vector::Ones(dimension)); break;
        case AuxPolicy::canonical:
            if (i >= dimension) throw ConfigError("make_auxiliary: more canonical vectors than the dimension");
            out.push_back(Vector::Unit(dimension, i));
            break;
        }
    }
    return out;
}

void TransformSpec::validate(Index dimension) const
{
    if (order < 1) throw ConfigError("transform order k must be at least 1");
    auto check_dims = [&] {
        for (const auto& y : auxiliary)
            if (y.size() != dimension) throw ConfigError("auxiliary vector has wrong dimension");
    };
    if (kind == TransformKind::topological) {
        if (auxiliary.size() != 1) throw ConfigError("topological transform needs exactly one auxiliary vector");
        check_dims();
        if (auxiliary.front().squaredNorm() == 0.0) throw ConfigError("topological auxiliary vector is zero");
    }
    if (kind == TransformKind::mmpe) {
        if (static_cast<int>(auxiliary.size()) != order)
            throw ConfigError("mmpe needs k auxiliary vectors, got " + std::to_string(auxiliary.size()));
        check_dims();
        Matrix y(dimension, order);
        for (int i = 0; i < order; ++i) y.col(i) = auxiliary[static_cast<std::size_t>(i)];
        if (Eigen::ColPivHouseholderQR<Matrix>(y).rank() < order)
            throw ConfigError("mmpe auxiliary vectors are linearly dependent");
    }
}

Matrix moment_matrix(const TransformSpec& spec, std::span<const Vector> window)
{
    require_window(spec, window);
    const int k = spec.order;
    Matrix d(k, k + 1);
    switch (spec.kind) {
    case TransformKind::mpe: {
        const auto dx = differences(window, k + 1);
        for (int i = 1; i <= k; ++i)
            for (int j = 0; j <= k; ++j) d(i - 1, j) = dx[i - 1].dot(dx[j]);
        break;
    }
    case TransformKind::rre: {
        const auto dx = differences(window, k + 1);
        for (int i = 1; i <= k; ++i) {
            const Vector d2 = dx[i] - dx[i - 1];
            for (int j = 0; j <= k; ++j) d(i - 1, j) = d2.dot(dx[j]);
        }
        break;
    }
    case TransformKind::mmpe: {
        if (static_cast<int>(spec.auxiliary.size()) < k) throw ConfigError("mmpe needs k auxiliary vectors");
        const auto dx = differences(window, k + 1);
        for (int i = 1; i <= k; ++i)
            for (int j = 0; j <= k; ++j) d(i - 1, j) = spec.auxiliary[i - 1].dot(dx[j]);
        break;
    }
    case TransformKind::topological: {
        if (spec.auxiliary.empty()) throw ConfigError("topological transform needs an auxiliary vector");
        const auto dx = differences(window, 2 * k);
        for (int i = 1; i <= k; ++i)
            for (int j = 0; j <= k; ++j) d(i - 1, j) = spec.auxiliary.front().dot(dx[i + j - 1]);
        break;
    }
    case TransformKind::scalar_epsilon:
        throw ConfigError("scalar-epsilon moments are per component; use scalar_moment_matrix");
    case TransformKind::vector_epsilon:
        throw ConfigError("the vector epsilon-algorithm has no underlying linear system");
    }
    return d;
}

Matrix scalar_moment_matrix(std::span<const Vector> window, int k, Index component)
{
    if (static_cast<int>(window.size()) < 2 * k + 1)
        throw ConfigError("scalar moment matrix needs 2k+1 iterates");
    Matrix d(k, k + 1);
    for (int i = 1; i <= k; ++i)
        for (int j = 0; j <= k; ++j)
            d(i - 1, j) = window[i + j][component] - window[i + j - 1][component];
    return d;
}

Coefficients solve_coefficients(const Matrix& d, double max_condition)
{
    const Index k = d.rows();
    if (k < 1 || d.cols() != k + 1) throw ConfigError("solve_coefficients: moment matrix must be k x (k+1)");

    Coefficients c;
    double cond_a = 0.0;
    double cond_alpha = 0.0;

    Matrix bordered(k + 1, k + 1);
    bordered.row(0).setOnes();
    bordered.bottomRows(k) = d;
    c.a = solve_checked(std::move(bordered), Vector::Unit(k + 1, 0), max_condition, cond_a, "coefficient");

    Matrix delta = d.rightCols(k) - d.leftCols(k);
    c.alpha = solve_checked(std::move(delta), d.col(0), max_condition, cond_alpha, "difference");

    c.condition = std::max(cond_a, cond_alpha);
    return c;
}

namespace {

TransformResult apply_system(const TransformSpec& spec, std::span<const Vector> window, double max_condition)
{
    const int k = spec.order;
    TransformResult r;
    r.coefficients = solve_coefficients(moment_matrix(spec, window), max_condition);
    r.value = Vector::Zero(window[0].size());
    for (int j = 0; j <= k; ++j) r.value += r.coefficients.a[j] * window[j];
    r.schur_value = window[0];
    for (int i = 1; i <= k; ++i) r.schur_value -= r.coefficients.alpha[i - 1] * (window[i] - window[i - 1]);
    return r;
}

TransformResult apply_scalar(const TransformSpec& spec, std::span<const Vector> window, double max_condition)
{
    const int k = spec.order;
    const Index n = window[0].size();
    TransformResult r;
    r.value.resize(n);
    r.schur_value.resize(n);
    for (Index p = 0; p < n; ++p) {
        Coefficients c;
        try {
            c = solve_coefficients(scalar_moment_matrix(window, k, p), max_condition);
        } catch (const BreakdownError& e) {
            throw BreakdownError("component " + std::to_string(p) + ": " + e.what(), e.condition(),
                                 "component " + std::to_string(p));
        }
        double v = 0.0;
        for (int j = 0; j <= k; ++j) v += c.a[j] * window[j][p];
        double s = window[0][p];
        for (int i = 1; i <= k; ++i) s -= c.alpha[i - 1] * (window[i][p] - window[i - 1][p]);
        r.value[p] = v;
        r.schur_value[p] = s;
        r.coefficients.condition = std::max(r.coefficients.condition, c.condition);
    }
    return r;
}

}  // namespace

TransformResult transform_apply(const TransformSpec& spec, std::span<const Vector> window, double max_condition)
{
    if (spec.order < 1) throw ConfigError("transform order k must be at least 1");
    require_window(spec, window);

    if (window[1] == window[0]) {
        TransformResult r;
        r.value = window[0];
        r.schur_value = window[0];
        r.degenerate = true;
        return r;
    }

    switch (spec.kind) {
    case TransformKind::vector_epsilon: {
        EpsilonTable table(EpsilonKind::vector, 2 * spec.order);
        for (Index j = 0; j < spec.iterates_required(); ++j) table.push(window[j]);
        TransformResult r;
        r.value = table.newest(2 * spec.order);
        r.schur_value = r.value;
        return r;
    }
    case TransformKind::scalar_epsilon: return apply_scalar(spec, window, max_condition);
    default: return apply_system(spec, window, max_condition);
    }
}

Vector k1_closed_form(TransformKind kind, const Vector& x0, const Vector& x1, const Vector& x2, const Vector* y)
{
    const Vector dx = x1 - x0;
    const Vector dx1 = x2 - x1;
    const Vector d2x = dx1 - dx;
    auto ratio = [](double num, double den, double scale, const char* what) {
        if (negligible(den, scale)) throw BreakdownError(std::string("k=1 closed form: zero denominator in ") + what,
                                                         std::numeric_limits<double>::infinity());
        return num / den;
    };
    switch (kind) {
    case TransformKind::mmpe:
    case TransformKind::topological: {
        if (!y) throw ConfigError("k1_closed_form: an auxiliary vector is required");
        return x0 - ratio(y->dot(dx), y->dot(d2x), y->norm() * d2x.norm(), "(y, d2x)") * dx;
    }
    case TransformKind::mpe:
        return x0 - ratio(dx.dot(dx), dx.dot(d2x), dx.norm() * d2x.norm(), "(dx, d2x)") * dx;
    case TransformKind::rre:
        return x0 - ratio(d2x.dot(dx), d2x.dot(d2x), d2x.squaredNorm(), "(d2x, d2x)") * dx;
    case TransformKind::vector_epsilon: {
        auto inverse = [](const Vector& u, const char* what) -> Vector {
            const double uu = u.squaredNorm();
            if (!(uu > 0.0) || !std::isfinite(uu))
                throw BreakdownError(std::string("k=1 closed form: zero vector inverted in ") + what,
                                     std::numeric_limits<double>::infinity());
            return u / uu;
        };
        return x1 + inverse(inverse(dx1, "eps_1^(n+1)") - inverse(dx, "eps_1^(n)"), "eps_2^(n)");
    }
    case TransformKind::scalar_epsilon: break;
    }
    throw ConfigError("k1_closed_form: no closed form for " + std::string(to_string(kind)));
}

}  // namespace kacz
