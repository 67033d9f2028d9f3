#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace subcalc {

// A positive real carried as its natural log.  Multiplication and powers are
// exact in the log domain; addition/subtraction go through log-sum-exp.
// Needed because the oscillating catalog's scales (a3 = exp(a2^{3/2}) and up)
// overflow any hardware float.
class LogReal {
  public:
    LogReal() : lg_(-std::numeric_limits<double>::infinity()) {}  // value 0

    static LogReal from_log(double lg) { return LogReal(lg); }
    static LogReal from_value(double v) {
        if (v < 0) throw std::domain_error("LogReal: negative value");
        return LogReal(v == 0 ? -std::numeric_limits<double>::infinity()
                              : std::log(v));
    }

    double log() const { return lg_; }
    double value() const { return std::exp(lg_); }  // may overflow to inf
    bool is_zero() const { return std::isinf(lg_) && lg_ < 0; }

    friend LogReal operator*(LogReal a, LogReal b) {
        return LogReal(a.lg_ + b.lg_);
    }
    friend LogReal operator/(LogReal a, LogReal b) {
        return LogReal(a.lg_ - b.lg_);
    }
    LogReal pow(double e) const { return LogReal(lg_ * e); }

    friend LogReal operator+(LogReal a, LogReal b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        double hi = a.lg_, lo = b.lg_;
        if (hi < lo) std::swap(hi, lo);
        return LogReal(hi + std::log1p(std::exp(lo - hi)));
    }
    // a - b for a > b; throws if the difference would not be positive.
    friend LogReal operator-(LogReal a, LogReal b) {
        if (b.is_zero()) return a;
        if (!(a.lg_ > b.lg_))
            throw std::domain_error("LogReal: subtraction would not be positive");
        return LogReal(a.lg_ + std::log1p(-std::exp(b.lg_ - a.lg_)));
    }

    friend bool operator<(LogReal a, LogReal b) { return a.lg_ < b.lg_; }
    friend bool operator>(LogReal a, LogReal b) { return a.lg_ > b.lg_; }
    friend bool operator<=(LogReal a, LogReal b) { return a.lg_ <= b.lg_; }
    friend bool operator>=(LogReal a, LogReal b) { return a.lg_ >= b.lg_; }

    friend LogReal min(LogReal a, LogReal b) { return a < b ? a : b; }
    friend LogReal max(LogReal a, LogReal b) { return a < b ? b : a; }

  private:
    explicit LogReal(double lg) : lg_(lg) {}
    double lg_;
};

}  // namespace subcalc
