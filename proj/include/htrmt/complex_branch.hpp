// SPDX-License-Identifier: Apache-2.0
//! \file htrmt/complex_branch.hpp
//! Principal-branch helpers on the right half-plane D = {Re z > 0}.
#pragma once

#include <complex>
#include <stdexcept>

namespace htrmt {

using Complex = std::complex<double>;

class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

//! Principal square root restricted to D, so that sqrt(1) = 1 and the
//! function is continuous on D. Throws DomainError when Re z <= 0.
Complex principal_sqrt(Complex z);

//! Principal Log(1 + w), accurate for small |w|. Requires Re w > -1.
Complex principal_log1p(Complex w);

}  // namespace htrmt
