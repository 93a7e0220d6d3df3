// SPDX-License-Identifier: Apache-2.0
#include "htrmt/complex_branch.hpp"

#include <cmath>

namespace htrmt {

Complex principal_sqrt(Complex z)
{
    if (!(z.real() > 0.0)) {
        throw DomainError("principal_sqrt: requires Re z > 0");
    }
    return std::sqrt(z);
}

Complex principal_log1p(Complex w)
{
    double const a = w.real();
    double const b = w.imag();
    if (!(a > -1.0)) {
        throw DomainError("principal_log1p: requires Re w > -1");
    }
    if (b == 0.0) {
        return {std::log1p(a), 0.0};
    }
    // |1 + w|^2 - 1 = 2a + a^2 + b^2, formed without cancellation.
    double const t = std::fma(a, a + 2.0, b * b);
    return {0.5 * std::log1p(t), std::atan2(b, 1.0 + a)};
}

}  // namespace htrmt
