#pragma once

#include <map>
#include <string>
#include <vector>

#include "twistorkit/scalar.hpp"

namespace twistorkit {

// Laurent polynomial in the chart coordinate.  Canonical form: no stored zero
// coefficients.  The backend tag survives even when the value is zero.
class LaurentPoly {
public:
    explicit LaurentPoly(Backend b = Backend::exact) : backend_(b) {}

    static LaurentPoly constant(const Scalar& c);
    static LaurentPoly monomial(const Scalar& c, int power);
    static LaurentPoly zero(Backend b) { return LaurentPoly(b); }
    static LaurentPoly one(Backend b) { return constant(Scalar::one(b)); }
    // convenience: integer-coefficient polynomial on the exact backend,
    // coeffs[k] is the coefficient of power lo+k
    static LaurentPoly fromInts(int lo, const std::vector<long>& coeffs);

    Backend backend() const { return backend_; }
    bool isZero() const { return terms_.empty(); }
    int lo() const;
    int hi() const;
    int span() const { return isZero() ? 0 : hi() - lo(); }
    bool isMonomial() const { return terms_.size() == 1; }
    bool isConstant() const { return isZero() || (isMonomial() && terms_.begin()->first == 0); }
    std::size_t termCount() const { return terms_.size(); }

    Scalar coeff(int power) const;
    void setCoeff(int power, const Scalar& c);
    void addToCoeff(int power, const Scalar& c);
    const std::map<int, Scalar>& terms() const { return terms_; }

    Scalar eval(const Scalar& z) const;
    LaurentPoly flip() const;                    // substitute 1/z
    LaurentPoly shifted(int m) const;            // multiply by z^m
    LaurentPoly derivative() const;              // d/dz
    LaurentPoly conjCoeffs() const;              // conjugate every coefficient

    friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b);
    friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b);
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
    friend LaurentPoly operator*(const Scalar& c, const LaurentPoly& p);
    LaurentPoly operator-() const;
    LaurentPoly& operator+=(const LaurentPoly& o) { return *this = *this + o; }

    bool operator==(const LaurentPoly& o) const;
    bool operator!=(const LaurentPoly& o) const { return !(*this == o); }

    std::string str(const std::string& var = "z") const;

private:
    Backend backend_;
    std::map<int, Scalar> terms_;
};

// Square matrix of Laurent polynomials; the transition datum of a bundle.
class LaurentMatrix {
public:
    LaurentMatrix(int size, Backend b = Backend::exact);

    static LaurentMatrix identity(int size, Backend b = Backend::exact);
    static LaurentMatrix diagonalMonomials(const std::vector<int>& powers,
                                           Backend b = Backend::exact);

    int size() const { return size_; }
    Backend backend() const { return backend_; }

    const LaurentPoly& at(int i, int j) const { return e_[idx(i, j)]; }
    LaurentPoly& at(int i, int j) { return e_[idx(i, j)]; }

    int loPower() const; // most negative power over all entries (0 for zero matrix)
    int hiPower() const;
    int span() const;

    LaurentMatrix flip() const;
    LaurentMatrix shifted(int m) const;
    LaurentMatrix transpose() const;

    LaurentPoly det() const;             // cofactor expansion, canonical form
    int unitWinding() const;             // power k with det = c z^k; NotUnitOnCStar otherwise
    LaurentMatrix inverseUnit() const;   // adjugate / det, requires det a unit monomial

    friend LaurentMatrix operator*(const LaurentMatrix& a, const LaurentMatrix& b);
    friend LaurentMatrix operator+(const LaurentMatrix& a, const LaurentMatrix& b);
    friend LaurentMatrix operator-(const LaurentMatrix& a, const LaurentMatrix& b);

    std::vector<LaurentPoly> apply(const std::vector<LaurentPoly>& v) const;

    bool operator==(const LaurentMatrix& o) const;
    bool operator!=(const LaurentMatrix& o) const { return !(*this == o); }

    std::string str(const std::string& var = "z") const;

private:
    int idx(int i, int j) const { return i * size_ + j; }

    int size_;
    Backend backend_;
    std::vector<LaurentPoly> e_;
};

// spec-level operation aliases
Scalar lp_eval(const LaurentPoly& p, const Scalar& z);
LaurentPoly lp_flip(const LaurentPoly& p);
LaurentPoly lm_det(const LaurentMatrix& m);
int lm_unit_winding(const LaurentMatrix& m);

} // namespace twistorkit
