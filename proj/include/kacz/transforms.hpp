#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kacz/linalg.hpp"

namespace kacz {

/// Vector sequence transformations sharing the Shanks kernel
/// a_0 (x - x_n) + ... + a_k (x - x_{n+k}) = 0.
enum class TransformKind {
    mpe,             ///< d_ij = (dx_{n+i-1}, dx_{n+j})
    rre,             ///< d_ij = (d2x_{n+i-1}, dx_{n+j})
    mmpe,            ///< d_ij = (y_i, dx_{n+j})
    topological,     ///< d_ij = (y, dx_{n+i+j-1})
    vector_epsilon,  ///< recursive only, u^{-1} = u / (u, u)
    scalar_epsilon,  ///< Shanks applied to each component separately
};

std::string_view to_string(TransformKind kind) noexcept;
/// Accepts the names printed by to_string, with '-' or '_' separators.
TransformKind parse_transform_kind(std::string_view name);

bool is_epsilon_kind(TransformKind kind) noexcept;
/// Number ell of sweeps past x_n needed for y_k^(n): 2k for the epsilon kinds, k + 1 otherwise.
int window_length(TransformKind kind, int k);

enum class AuxPolicy { random, ones, canonical };

std::string_view to_string(AuxPolicy policy) noexcept;
AuxPolicy parse_aux_policy(std::string_view name);

/// Auxiliary vectors for the kinds that need them: one y for topological, y_1..y_k for MMPE.
/// `random` draws components uniformly from [-1, 1] with the given seed,
/// `ones` uses (1, ..., 1) and `canonical` uses e_1, e_2, ...
std::vector<Vector> make_auxiliary(TransformKind kind, int k, Index dimension, AuxPolicy policy,
                                   std::uint64_t seed);

/// A transformation of order k together with its auxiliary vectors.
struct TransformSpec {
    TransformKind kind = TransformKind::vector_epsilon;
    int order = 1;
    std::vector<Vector> auxiliary;

    int window_length() const { return kacz::window_length(kind, order); }
    /// ell + 1 iterates x_n ... x_{n+ell}.
    Index iterates_required() const { return window_length() + 1; }
    /// Throws ConfigError on a bad order, missing auxiliaries, or linearly dependent MMPE vectors.
    void validate(Index dimension) const;
};

/// Condition numbers above this are reported as breakdowns.
inline constexpr double default_max_condition = 1e20;

/// Relative threshold for "zero" denominators in recursive and closed-form rules.
inline constexpr double default_breakdown_tolerance = 1e-13;

/// k x (k+1) matrix d_ij^(n), i = 1..k, j = 0..k, for the window starting at x_n.
/// Not defined for vector_epsilon; scalar_epsilon needs scalar_moment_matrix.
Matrix moment_matrix(const TransformSpec& spec, std::span<const Vector> window);

/// Hankel moments d_ij = (e_p, dx_{n+i+j-1}) of component p.
Matrix scalar_moment_matrix(std::span<const Vector> window, int k, Index component);

struct Coefficients {
    Vector a;      ///< a_0..a_k with sum 1
    Vector alpha;  ///< alpha_1..alpha_k of the difference form
    double condition = 0.0;  ///< largest estimate over both systems (after row and column equilibration)
};

/// Solves both the bordered system [1 ... 1; d] a = e_1 and the difference
/// system (delta d) alpha = d_{., 0}. Rows and columns are equilibrated before a partial
/// pivoting LU; throws BreakdownError when either estimate exceeds `max_condition`.
Coefficients solve_coefficients(const Matrix& d, double max_condition = default_max_condition);

struct TransformResult {
    Vector value;         ///< a_0 x_n + ... + a_k x_{n+k}
    Vector schur_value;   ///< x_n - alpha_1 dx_n - ... - alpha_k dx_{n+k-1}
    Coefficients coefficients;  ///< empty for the recursive and componentwise kinds
    bool degenerate = false;    ///< x_{n+1} == x_n, value is x_n
};

/// y_k^(n) from the window x_n, x_{n+1}, ... (at least spec.iterates_required() vectors).
///
/// MPE, RRE, MMPE, and topological go through the linear system;
/// scalar_epsilon solves one Hankel system per component; vector_epsilon
/// runs the recursive table over the window.
TransformResult transform_apply(const TransformSpec& spec, std::span<const Vector> window,
                                double max_condition = default_max_condition);

/// The k = 1 formulas written out directly for x_n, x_{n+1}, x_{n+2}.
/// `y` is required for mmpe and topological.
Vector k1_closed_form(TransformKind kind, const Vector& x0, const Vector& x1, const Vector& x2,
                      const Vector* y = nullptr);

enum class EpsilonKind { vector, topological, scalar };

/// One failed cell of an epsilon table.
struct EpsilonBreakdown {
    int column = 0;        ///< lower index of the cell that could not be formed
    Index index = 0;       ///< upper index n of that cell
    Index component = -1;  ///< for the scalar kind, the coordinate; -1 for whole vectors
    std::string describe() const;
};

/// Epsilon algorithm kept as one ascending diagonal.
///
/// After m + 1 pushes, entry j of the diagonal is eps_j^(m-j) for j up to
/// `max_column`. Cells that could not be formed are stored as NaN and
/// later cells depending on them stay NaN, so the table keeps accepting
/// points and recovers once the failed cell drops out of the lozenge.
/// The topological kind also keeps the latest difference of every even
/// column, which its odd rule needs from the previous diagonal.
class EpsilonTable {
public:
    EpsilonTable(EpsilonKind kind, int max_column, Vector y = Vector(),
                 double tolerance = default_breakdown_tolerance);

    /// Advances the diagonal by one point; returns the cells that broke down.
    std::vector<EpsilonBreakdown> push(const Vector& point);

    Index count() const noexcept { return count_; }
    int max_column() const noexcept { return max_column_; }
    EpsilonKind kind() const noexcept { return kind_; }

    bool available(int column) const noexcept { return column <= max_column_ && column < count_; }
    /// eps_column^(count-1-column). Throws IndexError when not yet available and
    /// BreakdownError when the cell is invalid. The reference is valid until the next push.
    const Vector& newest(int column) const;
    Index newest_index(int column) const noexcept { return count_ - 1 - column; }

private:
    EpsilonKind kind_;
    int max_column_;
    Vector y_;
    double tolerance_;
    Index count_ = 0;
    std::vector<Vector> diagonal_;
    std::vector<Vector> even_differences_;
};

/// u / (u, u)
Vector vector_inverse(const Vector& u);
/// y / (y, d), the topological inverse of an even-column difference d.
Vector topological_even_inverse(const Vector& y, const Vector& d);
/// e / (d, e), the topological inverse of an odd-column difference d given
/// the matching even-column difference e.
Vector topological_odd_inverse(const Vector& d, const Vector& even);

/// Pushes `point` and returns the newest entry of the highest even column.
/// Throws BreakdownError if that entry depends on a failed cell.
Vector epsilon_extend(EpsilonTable& table, const Vector& point);

}  // namespace kacz
