#include "twistorkit/laurent.hpp"

#include <algorithm>
#include <sstream>

namespace twistorkit {

LaurentPoly LaurentPoly::constant(const Scalar& c) { return monomial(c, 0); }

LaurentPoly LaurentPoly::monomial(const Scalar& c, int power) {
    LaurentPoly p(c.backend());
    if (!c.isZero()) p.terms_[power] = c;
    return p;
}

LaurentPoly LaurentPoly::fromInts(int lo, const std::vector<long>& coeffs) {
    LaurentPoly p(Backend::exact);
    for (std::size_t k = 0; k < coeffs.size(); ++k)
        if (coeffs[k] != 0) p.terms_[lo + static_cast<int>(k)] = Scalar::fromInt(coeffs[k]);
    return p;
}

int LaurentPoly::lo() const {
    if (isZero()) fail(Errc::internal_error, "degree span of zero polynomial");
    return terms_.begin()->first;
}

int LaurentPoly::hi() const {
    if (isZero()) fail(Errc::internal_error, "degree span of zero polynomial");
    return terms_.rbegin()->first;
}

Scalar LaurentPoly::coeff(int power) const {
    auto it = terms_.find(power);
    return it == terms_.end() ? Scalar::zero(backend_) : it->second;
}

void LaurentPoly::setCoeff(int power, const Scalar& c) {
    if (c.backend() != backend_) fail(Errc::backend_mismatch, "coefficient backend differs");
    if (c.isZero())
        terms_.erase(power);
    else
        terms_[power] = c;
}

void LaurentPoly::addToCoeff(int power, const Scalar& c) { setCoeff(power, coeff(power) + c); }

Scalar LaurentPoly::eval(const Scalar& z) const {
    if (isZero()) return Scalar::zero(backend_);
    if (backend_ != z.backend()) fail(Errc::backend_mismatch, "evaluation point backend differs");
    if (lo() < 0 && z.isZero())
        fail(Errc::eval_at_pole, "evaluating a pole at z=0");
    // walk powers upward, carrying an incremental power of z
    Scalar acc = Scalar::zero(backend_);
    Scalar zpow = Scalar::one(backend_);
    int cur = 0;
    if (lo() < 0) {
        Scalar zinv = z.inverse();
        for (int k = 0; k > lo(); --k) zpow = zpow * zinv;
        cur = lo();
    }
    for (const auto& [k, c] : terms_) {
        while (cur < k) {
            zpow = zpow * z;
            ++cur;
        }
        acc += c * zpow;
    }
    return acc;
}

LaurentPoly LaurentPoly::flip() const {
    LaurentPoly r(backend_);
    for (const auto& [k, c] : terms_) r.terms_[-k] = c;
    return r;
}

LaurentPoly LaurentPoly::shifted(int m) const {
    LaurentPoly r(backend_);
    for (const auto& [k, c] : terms_) r.terms_[k + m] = c;
    return r;
}

LaurentPoly LaurentPoly::derivative() const {
    LaurentPoly r(backend_);
    for (const auto& [k, c] : terms_) {
        if (k == 0) continue;
        Scalar kc = (backend_ == Backend::exact ? Scalar::fromInt(k)
                                                : Scalar::fromDouble(static_cast<double>(k)));
        Scalar v = kc * c;
        if (!v.isZero()) r.terms_[k - 1] = v;
    }
    return r;
}

LaurentPoly LaurentPoly::conjCoeffs() const {
    LaurentPoly r(backend_);
    for (const auto& [k, c] : terms_) r.terms_[k] = c.conj();
    return r;
}

LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.backend_ != b.backend_) fail(Errc::backend_mismatch, "polynomial backends differ");
    LaurentPoly r = a;
    for (const auto& [k, c] : b.terms_) r.addToCoeff(k, c);
    return r;
}

LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) { return a + (-b); }

LaurentPoly LaurentPoly::operator-() const {
    LaurentPoly r(backend_);
    for (const auto& [k, c] : terms_) r.terms_[k] = -c;
    return r;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.backend_ != b.backend_) fail(Errc::backend_mismatch, "polynomial backends differ");
    LaurentPoly r(a.backend_);
    for (const auto& [ka, ca] : a.terms_)
        for (const auto& [kb, cb] : b.terms_) r.addToCoeff(ka + kb, ca * cb);
    return r;
}

LaurentPoly operator*(const Scalar& c, const LaurentPoly& p) {
    LaurentPoly r(p.backend_);
    for (const auto& [k, v] : p.terms_) {
        Scalar w = c * v;
        if (!w.isZero()) r.terms_[k] = w;
    }
    return r;
}

bool LaurentPoly::operator==(const LaurentPoly& o) const {
    if (backend_ != o.backend_ || terms_.size() != o.terms_.size()) return false;
    auto it = o.terms_.begin();
    for (const auto& [k, c] : terms_) {
        if (it->first != k || !(it->second == c)) return false;
        ++it;
    }
    return true;
}

std::string LaurentPoly::str(const std::string& var) const {
    if (isZero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        if (!first) os << " + ";
        os << "(" << c.str() << ")";
        if (k != 0) os << var << "^" << k;
        first = false;
    }
    return os.str();
}

LaurentMatrix::LaurentMatrix(int size, Backend b)
    : size_(size), backend_(b), e_(static_cast<std::size_t>(size) * size, LaurentPoly(b)) {
    if (size <= 0) fail(Errc::internal_error, "matrix size must be positive");
}

LaurentMatrix LaurentMatrix::identity(int size, Backend b) {
    LaurentMatrix m(size, b);
    for (int i = 0; i < size; ++i) m.at(i, i) = LaurentPoly::one(b);
    return m;
}

LaurentMatrix LaurentMatrix::diagonalMonomials(const std::vector<int>& powers, Backend b) {
    LaurentMatrix m(static_cast<int>(powers.size()), b);
    for (std::size_t i = 0; i < powers.size(); ++i)
        m.at(static_cast<int>(i), static_cast<int>(i)) =
            LaurentPoly::monomial(Scalar::one(b), powers[i]);
    return m;
}

int LaurentMatrix::loPower() const {
    int lo = 0;
    bool seen = false;
    for (const auto& p : e_)
        if (!p.isZero()) {
            lo = seen ? std::min(lo, p.lo()) : p.lo();
            seen = true;
        }
    return lo;
}

int LaurentMatrix::hiPower() const {
    int hi = 0;
    bool seen = false;
    for (const auto& p : e_)
        if (!p.isZero()) {
            hi = seen ? std::max(hi, p.hi()) : p.hi();
            seen = true;
        }
    return hi;
}

int LaurentMatrix::span() const { return hiPower() - loPower(); }

LaurentMatrix LaurentMatrix::flip() const {
    LaurentMatrix m(size_, backend_);
    for (int i = 0; i < size_; ++i)
        for (int j = 0; j < size_; ++j) m.at(i, j) = at(i, j).flip();
    return m;
}

LaurentMatrix LaurentMatrix::shifted(int p) const {
    LaurentMatrix m(size_, backend_);
    for (int i = 0; i < size_; ++i)
        for (int j = 0; j < size_; ++j) m.at(i, j) = at(i, j).shifted(p);
    return m;
}

LaurentMatrix LaurentMatrix::transpose() const {
    LaurentMatrix m(size_, backend_);
    for (int i = 0; i < size_; ++i)
        for (int j = 0; j < size_; ++j) m.at(i, j) = at(j, i);
    return m;
}

namespace {

// cofactor expansion along the current row over the remaining columns
LaurentPoly det_rec(const LaurentMatrix& m, std::vector<int>& cols, int row) {
    if (row == m.size()) return LaurentPoly::one(m.backend());
    LaurentPoly acc(m.backend());
    for (std::size_t t = 0; t < cols.size(); ++t) {
        int j = cols[t];
        const LaurentPoly& a = m.at(row, j);
        if (a.isZero()) continue;
        std::vector<int> rest;
        rest.reserve(cols.size() - 1);
        for (std::size_t u = 0; u < cols.size(); ++u)
            if (u != t) rest.push_back(cols[u]);
        LaurentPoly sub = det_rec(m, rest, row + 1);
        LaurentPoly term = a * sub;
        if (t % 2 == 1) term = -term;
        acc += term;
    }
    return acc;
}

} // namespace

LaurentPoly LaurentMatrix::det() const {
    std::vector<int> cols(size_);
    for (int j = 0; j < size_; ++j) cols[j] = j;
    return det_rec(*this, cols, 0);
}

int LaurentMatrix::unitWinding() const {
    LaurentPoly d = det();
    if (d.isZero() || !d.isMonomial())
        fail(Errc::not_unit_on_cstar, "determinant is not a single nonzero monomial");
    return d.lo();
}

LaurentMatrix LaurentMatrix::inverseUnit() const {
    LaurentPoly d = det();
    if (d.isZero() || !d.isMonomial())
        fail(Errc::not_unit_on_cstar, "matrix is not invertible over the punctured line");
    int k = d.lo();
    Scalar c = d.coeff(k);
    // adjugate via cofactors
    LaurentMatrix adj(size_, backend_);
    std::vector<int> all(size_);
    for (int j = 0; j < size_; ++j) all[j] = j;
    for (int i = 0; i < size_; ++i) {
        for (int j = 0; j < size_; ++j) {
            // minor deleting row i, column j
            LaurentMatrix sub(std::max(size_ - 1, 1), backend_);
            if (size_ == 1) {
                adj.at(0, 0) = LaurentPoly::one(backend_);
                continue;
            }
            int r = 0;
            for (int ii = 0; ii < size_; ++ii) {
                if (ii == i) continue;
                int cidx = 0;
                for (int jj = 0; jj < size_; ++jj) {
                    if (jj == j) continue;
                    sub.at(r, cidx) = at(ii, jj);
                    ++cidx;
                }
                ++r;
            }
            LaurentPoly cof = sub.det();
            if ((i + j) % 2 == 1) cof = -cof;
            adj.at(j, i) = cof;
        }
    }
    Scalar cinv = c.inverse();
    LaurentMatrix inv(size_, backend_);
    for (int i = 0; i < size_; ++i)
        for (int j = 0; j < size_; ++j) inv.at(i, j) = (cinv * adj.at(i, j)).shifted(-k);
    return inv;
}

LaurentMatrix operator*(const LaurentMatrix& a, const LaurentMatrix& b) {
    if (a.size_ != b.size_) fail(Errc::dimension_mismatch, "matrix sizes differ");
    if (a.backend_ != b.backend_) fail(Errc::backend_mismatch, "matrix backends differ");
    LaurentMatrix r(a.size_, a.backend_);
    for (int i = 0; i < a.size_; ++i)
        for (int j = 0; j < a.size_; ++j) {
            LaurentPoly acc(a.backend_);
            for (int k = 0; k < a.size_; ++k) acc += a.at(i, k) * b.at(k, j);
            r.at(i, j) = acc;
        }
    return r;
}

LaurentMatrix operator+(const LaurentMatrix& a, const LaurentMatrix& b) {
    if (a.size_ != b.size_) fail(Errc::dimension_mismatch, "matrix sizes differ");
    LaurentMatrix r(a.size_, a.backend_);
    for (int i = 0; i < a.size_; ++i)
        for (int j = 0; j < a.size_; ++j) r.at(i, j) = a.at(i, j) + b.at(i, j);
    return r;
}

LaurentMatrix operator-(const LaurentMatrix& a, const LaurentMatrix& b) {
    if (a.size_ != b.size_) fail(Errc::dimension_mismatch, "matrix sizes differ");
    LaurentMatrix r(a.size_, a.backend_);
    for (int i = 0; i < a.size_; ++i)
        for (int j = 0; j < a.size_; ++j) r.at(i, j) = a.at(i, j) - b.at(i, j);
    return r;
}

std::vector<LaurentPoly> LaurentMatrix::apply(const std::vector<LaurentPoly>& v) const {
    if (static_cast<int>(v.size()) != size_) fail(Errc::dimension_mismatch, "vector length differs");
    std::vector<LaurentPoly> r(size_, LaurentPoly(backend_));
    for (int i = 0; i < size_; ++i)
        for (int j = 0; j < size_; ++j) r[i] += at(i, j) * v[j];
    return r;
}

bool LaurentMatrix::operator==(const LaurentMatrix& o) const {
    return size_ == o.size_ && backend_ == o.backend_ && e_ == o.e_;
}

std::string LaurentMatrix::str(const std::string& var) const {
    std::ostringstream os;
    for (int i = 0; i < size_; ++i) {
        os << "[ ";
        for (int j = 0; j < size_; ++j) os << at(i, j).str(var) << (j + 1 < size_ ? ", " : " ");
        os << "]\n";
    }
    return os.str();
}

Scalar lp_eval(const LaurentPoly& p, const Scalar& z) { return p.eval(z); }
LaurentPoly lp_flip(const LaurentPoly& p) { return p.flip(); }
LaurentPoly lm_det(const LaurentMatrix& m) { return m.det(); }
int lm_unit_winding(const LaurentMatrix& m) { return m.unitWinding(); }

} // namespace twistorkit
