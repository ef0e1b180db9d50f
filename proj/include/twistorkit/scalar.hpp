#pragma once

#include <gmpxx.h>

#include <complex>
#include <string>
#include <variant>

#include "twistorkit/error.hpp"
#include "twistorkit/rng.hpp"

namespace twistorkit {

enum class Backend { exact, floating };

const char* backend_name(Backend b);

// Gaussian rational: complex number with arbitrary-precision rational parts.
struct ExactComplex {
    mpq_class re, im;

    ExactComplex() : re(0), im(0) {}
    ExactComplex(mpq_class r, mpq_class i) : re(std::move(r)), im(std::move(i)) {}

    bool isZero() const { return sgn(re) == 0 && sgn(im) == 0; }
    ExactComplex conj() const { return ExactComplex(re, -im); }
    mpq_class normSq() const { return re * re + im * im; }

    friend ExactComplex operator+(const ExactComplex& a, const ExactComplex& b) {
        return ExactComplex(a.re + b.re, a.im + b.im);
    }
    friend ExactComplex operator-(const ExactComplex& a, const ExactComplex& b) {
        return ExactComplex(a.re - b.re, a.im - b.im);
    }
    friend ExactComplex operator-(const ExactComplex& a) { return ExactComplex(-a.re, -a.im); }
    friend ExactComplex operator*(const ExactComplex& a, const ExactComplex& b) {
        return ExactComplex(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
    }
    ExactComplex inverse() const;
    friend bool operator==(const ExactComplex& a, const ExactComplex& b) {
        return a.re == b.re && a.im == b.im;
    }
};

// Complex scalar with a runtime-selected backend.  The exact backend carries
// Gaussian rationals; the floating backend carries complex doubles.  Mixing
// backends in one expression throws Errc::backend_mismatch.
class Scalar {
public:
    Scalar() : v_(ExactComplex()) {}

    static Scalar zero(Backend b);
    static Scalar one(Backend b);
    static Scalar imagUnit(Backend b = Backend::exact);
    static Scalar exact(ExactComplex v) { return Scalar(std::move(v)); }
    static Scalar exact(mpq_class re, mpq_class im = 0) {
        return Scalar(ExactComplex(std::move(re), std::move(im)));
    }
    static Scalar fromInt(long v) { return exact(mpq_class(v)); }
    static Scalar fromInts(long re, long im) { return exact(mpq_class(re), mpq_class(im)); }
    static Scalar fromRational(long num, long den);
    static Scalar fromDouble(double re, double im = 0.0) {
        return Scalar(std::complex<double>(re, im));
    }
    static Scalar floating(std::complex<double> v) { return Scalar(v); }

    Backend backend() const {
        return std::holds_alternative<ExactComplex>(v_) ? Backend::exact : Backend::floating;
    }
    bool isExact() const { return backend() == Backend::exact; }
    bool isZero() const;
    bool isOne() const;

    const ExactComplex& exactValue() const;
    std::complex<double> floatValue() const;

    // exact values are converted with rounding; useful for residual reports
    std::complex<double> approx() const;
    double absApprox() const { return std::abs(approx()); }

    Scalar conj() const;
    Scalar inverse() const;

    friend Scalar operator+(const Scalar& a, const Scalar& b);
    friend Scalar operator-(const Scalar& a, const Scalar& b);
    friend Scalar operator*(const Scalar& a, const Scalar& b);
    friend Scalar operator/(const Scalar& a, const Scalar& b);
    Scalar operator-() const;
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

    bool operator==(const Scalar& o) const;
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    std::string str() const;

private:
    explicit Scalar(ExactComplex v) : v_(std::move(v)) {}
    explicit Scalar(std::complex<double> v) : v_(v) {}

    std::variant<ExactComplex, std::complex<double>> v_;
};

Backend common_backend(const Scalar& a, const Scalar& b);

// Sampling helpers shared by tests, verify suites and the CLI.
Scalar randomExactScalar(SplitMix64& rng, int maxNum = 4, int maxDen = 3);
Scalar randomScalar(SplitMix64& rng, Backend b);
mpq_class randomRational(SplitMix64& rng, int maxNum = 4, int maxDen = 3);

} // namespace twistorkit
