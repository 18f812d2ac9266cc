#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <string>

#include "fusion/rational.hpp"

namespace fusion {

using Float128 = boost::multiprecision::cpp_bin_float_quad;

// Element p + q*phi of the quadratic field Q(phi), phi^2 = phi + 1.
// Exact ordered-field arithmetic; the shared scalar type for all geometry.
// Rational values are the q == 0 slice.
class QuadPhi {
public:
    QuadPhi() = default;
    QuadPhi(int v) : p_(v) {}                  // NOLINT(google-explicit-constructor)
    QuadPhi(const BigInt& v) : p_(v) {}        // NOLINT(google-explicit-constructor)
    QuadPhi(const BigRat& v) : p_(v) {}        // NOLINT(google-explicit-constructor)
    QuadPhi(BigRat rat, BigRat phi) : p_(std::move(rat)), q_(std::move(phi)) {}

    static QuadPhi phi() { return QuadPhi(BigRat(0), BigRat(1)); }
    // sqrt(5) = 2*phi - 1
    static QuadPhi sqrt5() { return QuadPhi(BigRat(-1), BigRat(2)); }

    const BigRat& rat() const { return p_; }
    const BigRat& phi_part() const { return q_; }
    bool is_rational() const { return q_ == 0; }
    bool is_zero() const { return p_ == 0 && q_ == 0; }

    QuadPhi operator-() const { return QuadPhi(-p_, -q_); }
    QuadPhi& operator+=(const QuadPhi& o) { p_ += o.p_; q_ += o.q_; return *this; }
    QuadPhi& operator-=(const QuadPhi& o) { p_ -= o.p_; q_ -= o.q_; return *this; }
    QuadPhi& operator*=(const QuadPhi& o) {
        // (p + q phi)(r + s phi) = pr + qs + (ps + qr + qs) phi
        BigRat r = o.p_, s = o.q_;
        BigRat np = p_ * r + q_ * s;
        BigRat nq = p_ * s + q_ * r + q_ * s;
        p_ = std::move(np);
        q_ = std::move(nq);
        return *this;
    }
    QuadPhi& operator/=(const QuadPhi& o) { return *this *= o.inverse(); }

    friend QuadPhi operator+(QuadPhi a, const QuadPhi& b) { return a += b; }
    friend QuadPhi operator-(QuadPhi a, const QuadPhi& b) { return a -= b; }
    friend QuadPhi operator*(QuadPhi a, const QuadPhi& b) { return a *= b; }
    friend QuadPhi operator/(QuadPhi a, const QuadPhi& b) { return a /= b; }

    QuadPhi inverse() const {
        // Conjugate p + q - q*phi; norm (p + q phi)(p + q - q phi) = p^2 + pq - q^2.
        BigRat norm = p_ * p_ + p_ * q_ - q_ * q_;
        if (norm == 0) throw std::domain_error("division by zero in Q(phi)");
        return QuadPhi((p_ + q_) / norm, -q_ / norm);
    }

    // Exact sign: for q != 0 compare the rational -p/q against phi,
    // the positive root of x^2 - x - 1.
    int sign() const {
        int sp = p_ == 0 ? 0 : (p_ > 0 ? 1 : -1);
        if (q_ == 0) return sp;
        int sq = q_ > 0 ? 1 : -1;
        if (sp == sq) return sp;
        if (sp == 0) return sq;  // q*phi dominates, phi > 0
        // p and q have opposite signs: sign = sq * sign(phi - t), t = -p/q.
        BigRat t = -p_ / q_;
        if (t <= 0) return sq;
        // for t > 0: t < phi  <=>  t^2 - t - 1 < 0
        BigRat d = t * t - t - 1;
        if (d < 0) return sq;
        if (d > 0) return -sq;
        return 0;  // unreachable: phi is irrational
    }

    bool operator==(const QuadPhi& o) const { return p_ == o.p_ && q_ == o.q_; }
    bool operator!=(const QuadPhi& o) const { return !(*this == o); }
    bool operator<(const QuadPhi& o) const { return (*this - o).sign() < 0; }
    bool operator>(const QuadPhi& o) const { return (*this - o).sign() > 0; }
    bool operator<=(const QuadPhi& o) const { return (*this - o).sign() <= 0; }
    bool operator>=(const QuadPhi& o) const { return (*this - o).sign() >= 0; }

    QuadPhi abs() const { return sign() < 0 ? -*this : *this; }

    BigInt floor() const {
        if (q_ == 0) {
            BigInt fl = numerator(p_) / denominator(p_);
            if (p_ < 0 && fl * denominator(p_) != numerator(p_)) fl -= 1;
            return fl;
        }
        BigInt guess(static_cast<long long>(std::floor(to_float().convert_to<double>())));
        while ((*this - QuadPhi(BigRat(guess))).sign() < 0) guess -= 1;
        while ((*this - QuadPhi(BigRat(guess + 1))).sign() >= 0) guess += 1;
        return guess;
    }

    QuadPhi frac() const { return *this - QuadPhi(BigRat(floor())); }

    Float128 to_float() const {
        static const Float128 kPhi = (Float128(1) + sqrt(Float128(5))) / 2;
        Float128 pf = Float128(numerator(p_).str()) / Float128(denominator(p_).str());
        Float128 qf = Float128(numerator(q_).str()) / Float128(denominator(q_).str());
        return pf + qf * kPhi;
    }
    double to_double() const { return to_float().convert_to<double>(); }

    std::string str() const {
        if (q_ == 0) return to_string(p_);
        return to_string(p_) + "+" + to_string(q_) + "phi";
    }

private:
    BigRat p_;
    BigRat q_;
};

inline QuadPhi abs(const QuadPhi& v) { return v.abs(); }

}  // namespace fusion
