#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace fds {

/// Nonnegative weight carried as (zero flag, log value).  Products of
/// per-vertex fields over large components underflow double precision,
/// so everything downstream works on this representation.
struct Weight {
    bool is_zero = false;
    double log_value = 0.0;  // ignored when is_zero

    static Weight one() { return {false, 0.0}; }
    static Weight zero() { return {true, 0.0}; }

    static Weight from_value(double v) {
        if (v == 0.0) return zero();
        return {false, std::log(v)};
    }
    static Weight from_log(double lv) { return {false, lv}; }

    double value() const { return is_zero ? 0.0 : std::exp(log_value); }

    Weight& operator*=(const Weight& o) {
        if (is_zero || o.is_zero) {
            is_zero = true;
        } else {
            log_value += o.log_value;
        }
        return *this;
    }
    friend Weight operator*(Weight a, const Weight& b) { return a *= b; }

    // log-sum-exp addition
    friend Weight operator+(const Weight& a, const Weight& b) {
        if (a.is_zero) return b;
        if (b.is_zero) return a;
        double hi = std::max(a.log_value, b.log_value);
        double lo = std::min(a.log_value, b.log_value);
        return from_log(hi + std::log1p(std::exp(lo - hi)));
    }
    Weight& operator+=(const Weight& o) { return *this = *this + o; }
};

/// log(1 + w) for w >= 0, the per-component field factor of the
/// random cluster weight.
inline double log1p_weight(const Weight& w) {
    if (w.is_zero) return 0.0;
    if (w.log_value > 0) return w.log_value + std::log1p(std::exp(-w.log_value));
    return std::log1p(std::exp(w.log_value));
}

}  // namespace fds
