// SPDX-License-Identifier: Apache-2.0
//! \file htrmt/compensated_sum.hpp
#pragma once

#include <cmath>

namespace htrmt {

//! Neumaier compensated accumulator.
class CompensatedSum {
  public:
    void add(double x)
    {
        double const t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

  private:
    double sum_{0.0};
    double comp_{0.0};
};

}  // namespace htrmt
