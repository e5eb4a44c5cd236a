#pragma once

#include <limits>

#include "wishart/errors.hpp"

namespace wishart {

// Extended real for convex-analysis values: either a finite double or +inf,
// tagged explicitly instead of relying on a sentinel float.
class ExtReal {
  public:
    ExtReal() : finite_(true), v_(0.0) {}
    static ExtReal finite(double v) {
        ExtReal e;
        e.finite_ = true;
        e.v_ = v;
        return e;
    }
    static ExtReal infinity() {
        ExtReal e;
        e.finite_ = false;
        e.v_ = std::numeric_limits<double>::infinity();
        return e;
    }

    bool is_finite() const { return finite_; }
    double value() const {
        if (!finite_) throw NumericalError("extended real is infinite");
        return v_;
    }
    // Usable in comparisons and minimization; +inf for the infinite tag.
    double value_or_inf() const { return finite_ ? v_ : std::numeric_limits<double>::infinity(); }

  private:
    bool finite_;
    double v_;
};

}  // namespace wishart
