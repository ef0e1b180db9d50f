#include "twistorkit/scalar.hpp"

#include <sstream>

namespace twistorkit {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::backend_mismatch: return "BackendMismatch";
        case Errc::backend_error: return "BackendError";
        case Errc::eval_at_pole: return "EvalAtPole";
        case Errc::not_unit_on_cstar: return "NotUnitOnCStar";
        case Errc::degree_bound_unstable: return "DegreeBoundUnstable";
        case Errc::scan_window_exhausted: return "ScanWindowExhausted";
        case Errc::inconsistent_winding: return "InconsistentWinding";
        case Errc::not_invertible_on_chart: return "NotInvertibleOnChart";
        case Errc::not_quaternionic: return "NotQuaternionic";
        case Errc::odd_dimension: return "OddDimension";
        case Errc::dimension_mismatch: return "DimensionMismatch";
        case Errc::singular_matrix: return "SingularP";
        case Errc::no_admissible_phase: return "NoAdmissiblePhase";
        case Errc::zero_parameter: return "ZeroParameter";
        case Errc::not_real: return "NotReal";
        case Errc::not_constant: return "NotConstant";
        case Errc::invalid_section: return "InvalidSection";
        case Errc::not_regular: return "NotRegular";
        case Errc::schema_error: return "SchemaError";
        case Errc::usage_error: return "Usage";
        case Errc::internal_error: return "InternalError";
    }
    return "UnknownError";
}

const char* backend_name(Backend b) { return b == Backend::exact ? "exact" : "float"; }

ExactComplex ExactComplex::inverse() const {
    if (isZero()) fail(Errc::internal_error, "division by zero");
    mpq_class n = normSq();
    return ExactComplex(re / n, -im / n);
}

Scalar Scalar::zero(Backend b) {
    return b == Backend::exact ? Scalar(ExactComplex()) : Scalar(std::complex<double>(0.0));
}

Scalar Scalar::one(Backend b) {
    return b == Backend::exact ? exact(mpq_class(1)) : fromDouble(1.0);
}

Scalar Scalar::imagUnit(Backend b) {
    return b == Backend::exact ? exact(mpq_class(0), mpq_class(1)) : fromDouble(0.0, 1.0);
}

Scalar Scalar::fromRational(long num, long den) {
    if (den == 0) fail(Errc::internal_error, "zero denominator");
    mpq_class q(num, den);
    q.canonicalize();
    return exact(std::move(q));
}

bool Scalar::isZero() const {
    if (isExact()) return std::get<ExactComplex>(v_).isZero();
    auto z = std::get<std::complex<double>>(v_);
    return z.real() == 0.0 && z.imag() == 0.0;
}

bool Scalar::isOne() const {
    if (isExact()) {
        const auto& e = std::get<ExactComplex>(v_);
        return e.re == 1 && sgn(e.im) == 0;
    }
    auto z = std::get<std::complex<double>>(v_);
    return z.real() == 1.0 && z.imag() == 0.0;
}

const ExactComplex& Scalar::exactValue() const {
    if (!isExact()) fail(Errc::backend_error, "exact value requested from float scalar");
    return std::get<ExactComplex>(v_);
}

std::complex<double> Scalar::floatValue() const {
    if (isExact()) fail(Errc::backend_error, "float value requested from exact scalar");
    return std::get<std::complex<double>>(v_);
}

std::complex<double> Scalar::approx() const {
    if (isExact()) {
        const auto& e = std::get<ExactComplex>(v_);
        return {e.re.get_d(), e.im.get_d()};
    }
    return std::get<std::complex<double>>(v_);
}

Scalar Scalar::conj() const {
    if (isExact()) return Scalar(std::get<ExactComplex>(v_).conj());
    return Scalar(std::conj(std::get<std::complex<double>>(v_)));
}

Scalar Scalar::inverse() const {
    if (isExact()) return Scalar(std::get<ExactComplex>(v_).inverse());
    auto z = std::get<std::complex<double>>(v_);
    if (z == std::complex<double>(0.0)) fail(Errc::internal_error, "division by zero");
    return Scalar(1.0 / z);
}

Backend common_backend(const Scalar& a, const Scalar& b) {
    if (a.backend() != b.backend())
        fail(Errc::backend_mismatch, "cannot mix exact and float scalars in one expression");
    return a.backend();
}

Scalar operator+(const Scalar& a, const Scalar& b) {
    if (common_backend(a, b) == Backend::exact)
        return Scalar::exact(a.exactValue() + b.exactValue());
    return Scalar::floating(a.floatValue() + b.floatValue());
}

Scalar operator-(const Scalar& a, const Scalar& b) {
    if (common_backend(a, b) == Backend::exact)
        return Scalar::exact(a.exactValue() - b.exactValue());
    return Scalar::floating(a.floatValue() - b.floatValue());
}

Scalar operator*(const Scalar& a, const Scalar& b) {
    if (common_backend(a, b) == Backend::exact)
        return Scalar::exact(a.exactValue() * b.exactValue());
    return Scalar::floating(a.floatValue() * b.floatValue());
}

Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inverse(); }

Scalar Scalar::operator-() const {
    if (isExact()) return Scalar(-std::get<ExactComplex>(v_));
    return Scalar(-std::get<std::complex<double>>(v_));
}

bool Scalar::operator==(const Scalar& o) const {
    if (common_backend(*this, o) == Backend::exact) return exactValue() == o.exactValue();
    return floatValue() == o.floatValue();
}

std::string Scalar::str() const {
    std::ostringstream os;
    if (isExact()) {
        const auto& e = exactValue();
        os << e.re.get_str();
        if (sgn(e.im) != 0) os << (sgn(e.im) > 0 ? "+" : "") << e.im.get_str() << "i";
    } else {
        auto z = floatValue();
        os << z.real();
        if (z.imag() != 0.0) os << (z.imag() > 0 ? "+" : "") << z.imag() << "i";
    }
    return os.str();
}

mpq_class randomRational(SplitMix64& rng, int maxNum, int maxDen) {
    long num = rng.rangeInt(-maxNum, maxNum);
    long den = rng.rangeInt(1, maxDen);
    mpq_class q(num, den);
    q.canonicalize();
    return q;
}

Scalar randomExactScalar(SplitMix64& rng, int maxNum, int maxDen) {
    return Scalar::exact(randomRational(rng, maxNum, maxDen), randomRational(rng, maxNum, maxDen));
}

Scalar randomScalar(SplitMix64& rng, Backend b) {
    if (b == Backend::exact) return randomExactScalar(rng);
    return Scalar::fromDouble(rng.uniformSym(), rng.uniformSym());
}

} // namespace twistorkit
