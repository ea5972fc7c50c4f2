#include "kacz/format.hpp"

#include <cmath>
#include <cstdio>

namespace kacz {

std::string format_double(double value)
{
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string format_field(double value)
{
    return std::isnan(value) ? std::string{} : format_double(value);
}

}  // namespace kacz
