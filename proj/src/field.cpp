#include "bg/field.hpp"

#include <stdexcept>
#include <string>

namespace bg {

void check_finite(const std::vector<double>& x, const char* what) {
    for (double t : x)
        if (!std::isfinite(t)) throw std::runtime_error(std::string(what) + ": non-finite value");
}

} // namespace bg
