#include <cmath>
#include <limits>
#include <string>

#include "kacz/error.hpp"
#include "kacz/transforms.hpp"

namespace kacz {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

Vector invalid(Index n) { return Vector::Constant(n, nan); }

}  // namespace

std::string EpsilonBreakdown::describe() const
{
    std::string s = "eps_" + std::to_string(column) + "^(" + std::to_string(index) + ")";
    if (component >= 0) s += " component " + std::to_string(component);
    return s;
}

Vector vector_inverse(const Vector& u) { return u / u.squaredNorm(); }

Vector topological_even_inverse(const Vector& y, const Vector& d) { return y / y.dot(d); }

Vector topological_odd_inverse(const Vector& d, const Vector& even) { return even / d.dot(even); }

EpsilonTable::EpsilonTable(EpsilonKind kind, int max_column, Vector y, double tolerance)
    : kind_(kind), max_column_(max_column), y_(std::move(y)), tolerance_(tolerance)
{
    if (max_column_ < 0) throw ConfigError("EpsilonTable: max column must be non-negative");
    if (kind_ == EpsilonKind::topological && y_.size() == 0)
        throw ConfigError("EpsilonTable: the topological kind needs an auxiliary vector");
}

std::vector<EpsilonBreakdown> EpsilonTable::push(const Vector& point)
{
    const Index n = point.size();
    if (count_ > 0 && diagonal_.front().size() != n) throw ConfigError("EpsilonTable: point has wrong length");
    if (kind_ == EpsilonKind::topological && y_.size() != n)
        throw ConfigError("EpsilonTable: auxiliary vector has wrong length");

    std::vector<EpsilonBreakdown> broken;
    // diagonal_[j] = eps_j^(c-1-j) for the current count c; build eps_j^(c-j).
    const Index c = count_;
    const int filled = static_cast<int>(std::min<Index>(c, max_column_));
    std::vector<Vector> next;
    next.reserve(static_cast<std::size_t>(filled + 1));
    next.push_back(point);
    std::vector<Vector> even_diffs(static_cast<std::size_t>(max_column_ / 2 + 1));

    for (int j = 0; j < filled; ++j) {
        // eps_{j+1}^(c-1-j) = eps_{j-1}^(c-j) + (eps_j^(c-j) - eps_j^(c-1-j))^{-1}
        const Vector diff = next[static_cast<std::size_t>(j)] - diagonal_[static_cast<std::size_t>(j)];
        const Index upper = c - 1 - j;
        Vector entry = j == 0 ? Vector::Zero(n) : diagonal_[static_cast<std::size_t>(j - 1)];

        if (kind_ == EpsilonKind::topological && j % 2 == 0) even_diffs[static_cast<std::size_t>(j / 2)] = diff;

        if (!diff.allFinite() || !entry.allFinite()) {
            next.push_back(invalid(n));
            continue;
        }

        switch (kind_) {
        case EpsilonKind::vector: {
            const double dd = diff.squaredNorm();
            if (!(dd > 0.0) || !std::isfinite(dd)) {
                broken.push_back({j + 1, upper, -1});
                entry = invalid(n);
            } else {
                entry += diff / dd;
            }
            break;
        }
        case EpsilonKind::scalar: {
            for (Index p = 0; p < n; ++p) {
                if (diff[p] == 0.0) {
                    broken.push_back({j + 1, upper, p});
                    entry[p] = nan;
                } else {
                    entry[p] += 1.0 / diff[p];
                }
            }
            break;
        }
        case EpsilonKind::topological: {
            double den = 0.0;
            double scale = 0.0;
            const Vector* numerator = nullptr;
            if (j % 2 == 0) {
                den = y_.dot(diff);
                scale = y_.norm() * diff.norm();
                numerator = &y_;
            } else {
                // The matching even difference eps_{j-1}^(c-j) - eps_{j-1}^(c-1-j) was
                // formed by the previous push.
                const Vector& even = even_differences_[static_cast<std::size_t>((j - 1) / 2)];
                if (!even.allFinite()) {
                    next.push_back(invalid(n));
                    continue;
                }
                den = diff.dot(even);
                scale = diff.norm() * even.norm();
                numerator = &even;
            }
            if (!(std::abs(den) > tolerance_ * scale) || !std::isfinite(den)) {
                broken.push_back({j + 1, upper, -1});
                entry = invalid(n);
            } else {
                entry += *numerator / den;
            }
            break;
        }
        }
        next.push_back(std::move(entry));
    }

    diagonal_ = std::move(next);
    if (kind_ == EpsilonKind::topological) even_differences_ = std::move(even_diffs);
    ++count_;
    return broken;
}

const Vector& EpsilonTable::newest(int column) const
{
    if (!available(column))
        throw IndexError("EpsilonTable: column " + std::to_string(column) + " not available after " +
                         std::to_string(count_) + " points");
    const Vector& v = diagonal_[static_cast<std::size_t>(column)];
    if (!v.allFinite()) {
        const std::string cell =
            EpsilonBreakdown{column, newest_index(column), -1}.describe();
        throw BreakdownError("epsilon table: " + cell + " depends on a zero denominator",
                             std::numeric_limits<double>::infinity(), cell);
    }
    return v;
}

Vector epsilon_extend(EpsilonTable& table, const Vector& point)
{
    table.push(point);
    int column = static_cast<int>(std::min<Index>(table.count() - 1, table.max_column()));
    column -= column % 2;
    return table.newest(column);
}

}  // namespace kacz
