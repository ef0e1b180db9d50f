#include "twistorkit/linalg.hpp"

#include <algorithm>
#include <cstdint>
#include <sstream>

namespace twistorkit {

CMat::CMat(int rows, int cols, Backend b)
    : rows_(rows), cols_(cols), backend_(b),
      e_(static_cast<std::size_t>(rows) * cols, Scalar::zero(b)) {
    if (rows < 0 || cols < 0) fail(Errc::internal_error, "negative matrix dimensions");
}

CMat CMat::identity(int n, Backend b) {
    CMat m(n, n, b);
    for (int i = 0; i < n; ++i) m.at(i, i) = Scalar::one(b);
    return m;
}

CMat CMat::fromRows(const std::vector<CVec>& rows) {
    if (rows.empty()) fail(Errc::internal_error, "empty row list");
    CMat m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()),
           rows[0].empty() ? Backend::exact : rows[0][0].backend());
    for (int i = 0; i < m.rows(); ++i) {
        if (rows[i].size() != rows[0].size()) fail(Errc::dimension_mismatch, "ragged rows");
        for (int j = 0; j < m.cols(); ++j) m.at(i, j) = rows[i][j];
    }
    return m;
}

CMat CMat::fromInts(int rows, int cols, const std::vector<long>& v) {
    if (static_cast<int>(v.size()) != rows * cols)
        fail(Errc::dimension_mismatch, "entry count mismatch");
    CMat m(rows, cols, Backend::exact);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m.at(i, j) = Scalar::fromInt(v[i * cols + j]);
    return m;
}

CMat CMat::conj() const {
    CMat m(rows_, cols_, backend_);
    for (std::size_t k = 0; k < e_.size(); ++k) m.e_[k] = e_[k].conj();
    return m;
}

CMat CMat::transpose() const {
    CMat m(cols_, rows_, backend_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) m.at(j, i) = at(i, j);
    return m;
}

bool CMat::isZero() const {
    for (const auto& s : e_)
        if (!s.isZero()) return false;
    return true;
}

double CMat::maxAbs() const {
    double m = 0.0;
    for (const auto& s : e_) m = std::max(m, s.absApprox());
    return m;
}

CVec CMat::apply(const CVec& v) const {
    if (static_cast<int>(v.size()) != cols_) fail(Errc::dimension_mismatch, "vector length");
    CVec r(rows_, Scalar::zero(backend_));
    for (int i = 0; i < rows_; ++i) {
        Scalar acc = Scalar::zero(backend_);
        for (int j = 0; j < cols_; ++j)
            if (!at(i, j).isZero()) acc += at(i, j) * v[j];
        r[i] = acc;
    }
    return r;
}

CVec CMat::row(int i) const {
    CVec r(cols_, Scalar::zero(backend_));
    for (int j = 0; j < cols_; ++j) r[j] = at(i, j);
    return r;
}

CVec CMat::col(int j) const {
    CVec r(rows_, Scalar::zero(backend_));
    for (int i = 0; i < rows_; ++i) r[i] = at(i, j);
    return r;
}

CMat operator*(const CMat& a, const CMat& b) {
    if (a.cols_ != b.rows_) fail(Errc::dimension_mismatch, "matrix product shapes");
    CMat r(a.rows_, b.cols_, common_backend(a.e_.empty() ? Scalar::zero(a.backend_) : a.e_[0],
                                            b.e_.empty() ? Scalar::zero(b.backend_) : b.e_[0]));
    for (int i = 0; i < a.rows_; ++i)
        for (int k = 0; k < a.cols_; ++k) {
            const Scalar& aik = a.at(i, k);
            if (aik.isZero()) continue;
            for (int j = 0; j < b.cols_; ++j) {
                if (b.at(k, j).isZero()) continue;
                r.at(i, j) += aik * b.at(k, j);
            }
        }
    return r;
}

CMat operator+(const CMat& a, const CMat& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) fail(Errc::dimension_mismatch, "matrix sum shapes");
    CMat r(a.rows_, a.cols_, a.backend_);
    for (std::size_t k = 0; k < r.e_.size(); ++k) r.e_[k] = a.e_[k] + b.e_[k];
    return r;
}

CMat operator-(const CMat& a, const CMat& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) fail(Errc::dimension_mismatch, "matrix diff shapes");
    CMat r(a.rows_, a.cols_, a.backend_);
    for (std::size_t k = 0; k < r.e_.size(); ++k) r.e_[k] = a.e_[k] - b.e_[k];
    return r;
}

CMat operator*(const Scalar& c, const CMat& m) {
    CMat r(m.rows_, m.cols_, m.backend_);
    for (std::size_t k = 0; k < r.e_.size(); ++k) r.e_[k] = c * m.e_[k];
    return r;
}

CMat CMat::operator-() const {
    CMat r(rows_, cols_, backend_);
    for (std::size_t k = 0; k < e_.size(); ++k) r.e_[k] = -e_[k];
    return r;
}

bool CMat::operator==(const CMat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_ || backend_ != o.backend_) return false;
    for (std::size_t k = 0; k < e_.size(); ++k)
        if (!(e_[k] == o.e_[k])) return false;
    return true;
}

std::string CMat::str() const {
    std::ostringstream os;
    for (int i = 0; i < rows_; ++i) {
        os << "[ ";
        for (int j = 0; j < cols_; ++j) os << at(i, j).str() << (j + 1 < cols_ ? ", " : " ");
        os << "]\n";
    }
    return os.str();
}

Scalar cmatDet(const CMat& m) {
    if (m.rows() != m.cols()) fail(Errc::dimension_mismatch, "determinant of non-square matrix");
    const int n = m.rows();
    CMat a = m;
    Scalar det = Scalar::one(m.backend());
    for (int k = 0; k < n; ++k) {
        int piv = -1;
        if (m.backend() == Backend::exact) {
            for (int i = k; i < n && piv < 0; ++i)
                if (!a.at(i, k).isZero()) piv = i;
        } else {
            double best = 0.0;
            for (int i = k; i < n; ++i) {
                double v = a.at(i, k).absApprox();
                if (v > best) {
                    best = v;
                    piv = i;
                }
            }
        }
        if (piv < 0) return Scalar::zero(m.backend());
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(a.at(k, j), a.at(piv, j));
            det = -det;
        }
        det *= a.at(k, k);
        Scalar inv = a.at(k, k).inverse();
        for (int i = k + 1; i < n; ++i) {
            if (a.at(i, k).isZero()) continue;
            Scalar f = a.at(i, k) * inv;
            for (int j = k; j < n; ++j) a.at(i, j) -= f * a.at(k, j);
        }
    }
    return det;
}

CMat cmatInverse(const CMat& m) {
    if (m.rows() != m.cols()) fail(Errc::dimension_mismatch, "inverse of non-square matrix");
    const int n = m.rows();
    CMat a = m;
    CMat inv = CMat::identity(n, m.backend());
    for (int k = 0; k < n; ++k) {
        int piv = -1;
        if (m.backend() == Backend::exact) {
            for (int i = k; i < n && piv < 0; ++i)
                if (!a.at(i, k).isZero()) piv = i;
        } else {
            double best = 0.0;
            for (int i = k; i < n; ++i) {
                double v = a.at(i, k).absApprox();
                if (v > best) {
                    best = v;
                    piv = i;
                }
            }
            if (piv >= 0 && a.at(piv, k).isZero()) piv = -1;
        }
        if (piv < 0) fail(Errc::singular_matrix, "matrix is singular");
        if (piv != k)
            for (int j = 0; j < n; ++j) {
                std::swap(a.at(k, j), a.at(piv, j));
                std::swap(inv.at(k, j), inv.at(piv, j));
            }
        Scalar d = a.at(k, k).inverse();
        for (int j = 0; j < n; ++j) {
            a.at(k, j) *= d;
            inv.at(k, j) *= d;
        }
        for (int i = 0; i < n; ++i) {
            if (i == k || a.at(i, k).isZero()) continue;
            Scalar f = a.at(i, k);
            for (int j = 0; j < n; ++j) {
                a.at(i, j) -= f * a.at(k, j);
                inv.at(i, j) -= f * inv.at(k, j);
            }
        }
    }
    return inv;
}

// ---------------------------------------------------------------------------
// exact kernels over the Gaussian rationals
// ---------------------------------------------------------------------------

namespace {

struct ComplexRref {
    std::vector<std::vector<ExactComplex>> a;
    std::vector<int> pivotCols;
};

ComplexRref complexRref(const CMat& m) {
    const int R = m.rows(), C = m.cols();
    ComplexRref out;
    out.a.assign(R, std::vector<ExactComplex>(C));
    for (int i = 0; i < R; ++i)
        for (int j = 0; j < C; ++j) out.a[i][j] = m.at(i, j).exactValue();
    int row = 0;
    for (int col = 0; col < C && row < R; ++col) {
        int piv = -1;
        for (int i = row; i < R && piv < 0; ++i)
            if (!out.a[i][col].isZero()) piv = i;
        if (piv < 0) continue;
        std::swap(out.a[row], out.a[piv]);
        ExactComplex inv = out.a[row][col].inverse();
        for (int j = col; j < C; ++j) out.a[row][j] = out.a[row][j] * inv;
        for (int i = 0; i < R; ++i) {
            if (i == row || out.a[i][col].isZero()) continue;
            ExactComplex f = out.a[i][col];
            for (int j = col; j < C; ++j) out.a[i][j] = out.a[i][j] - f * out.a[row][j];
        }
        out.pivotCols.push_back(col);
        ++row;
    }
    return out;
}

} // namespace

std::vector<CVec> exactKernelBasis(const CMat& m) {
    if (m.backend() != Backend::exact) fail(Errc::backend_error, "kernel requires exact backend");
    const int C = m.cols();
    ComplexRref r = complexRref(m);
    std::vector<bool> isPivot(C, false);
    for (int c : r.pivotCols) isPivot[c] = true;
    std::vector<CVec> basis;
    for (int f = 0; f < C; ++f) {
        if (isPivot[f]) continue;
        CVec v(C, Scalar::zero(Backend::exact));
        v[f] = Scalar::one(Backend::exact);
        for (std::size_t k = 0; k < r.pivotCols.size(); ++k)
            v[r.pivotCols[k]] = Scalar::exact(-r.a[k][f]);
        basis.push_back(std::move(v));
    }
    return basis;
}

int cmatRank(const CMat& m) {
    if (m.backend() != Backend::exact) fail(Errc::backend_error, "rank requires exact backend");
    return m.cols() - exactKernelDim(m);
}

// ---------------------------------------------------------------------------
// rational matrices
// ---------------------------------------------------------------------------

int rankQ(QMat a) {
    if (a.empty()) return 0;
    const int R = static_cast<int>(a.size()), C = static_cast<int>(a[0].size());
    int rank = 0;
    for (int col = 0; col < C && rank < R; ++col) {
        int piv = -1;
        for (int i = rank; i < R && piv < 0; ++i)
            if (sgn(a[i][col]) != 0) piv = i;
        if (piv < 0) continue;
        std::swap(a[rank], a[piv]);
        mpq_class inv = 1 / a[rank][col];
        for (int j = col; j < C; ++j) a[rank][j] *= inv;
        for (int i = rank + 1; i < R; ++i) {
            if (sgn(a[i][col]) == 0) continue;
            mpq_class f = a[i][col];
            for (int j = col; j < C; ++j) a[i][j] -= f * a[rank][j];
        }
        ++rank;
    }
    return rank;
}

std::vector<std::vector<mpq_class>> kernelQ(QMat a) {
    if (a.empty()) return {};
    const int R = static_cast<int>(a.size()), C = static_cast<int>(a[0].size());
    std::vector<int> pivotCols;
    int row = 0;
    for (int col = 0; col < C && row < R; ++col) {
        int piv = -1;
        for (int i = row; i < R && piv < 0; ++i)
            if (sgn(a[i][col]) != 0) piv = i;
        if (piv < 0) continue;
        std::swap(a[row], a[piv]);
        mpq_class inv = 1 / a[row][col];
        for (int j = col; j < C; ++j) a[row][j] *= inv;
        for (int i = 0; i < R; ++i) {
            if (i == row || sgn(a[i][col]) == 0) continue;
            mpq_class f = a[i][col];
            for (int j = col; j < C; ++j) a[i][j] -= f * a[row][j];
        }
        pivotCols.push_back(col);
        ++row;
    }
    std::vector<bool> isPivot(C, false);
    for (int c : pivotCols) isPivot[c] = true;
    std::vector<std::vector<mpq_class>> basis;
    for (int f = 0; f < C; ++f) {
        if (isPivot[f]) continue;
        std::vector<mpq_class> v(C, mpq_class(0));
        v[f] = 1;
        for (std::size_t k = 0; k < pivotCols.size(); ++k) v[pivotCols[k]] = -a[k][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

// ---------------------------------------------------------------------------
// certified modular kernel dimension
// ---------------------------------------------------------------------------

namespace {

std::vector<std::uint64_t> modulusTable() {
    static std::vector<std::uint64_t> primes = [] {
        std::vector<std::uint64_t> v;
        mpz_class p = mpz_class(1) << 62;
        for (int k = 0; k < 8; ++k) {
            mpz_class q;
            mpz_nextprime(q.get_mpz_t(), p.get_mpz_t());
            p = q;
            v.push_back(q.get_ui());
        }
        return v;
    }();
    return primes;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

std::uint64_t invmod(std::uint64_t a, std::uint64_t p) {
    // extended Euclid on signed 128-bit accumulators
    __int128 t = 0, newt = 1;
    __int128 r = static_cast<__int128>(p), newr = static_cast<__int128>(a % p);
    while (newr != 0) {
        __int128 q = r / newr;
        __int128 tmp = t - q * newt;
        t = newt;
        newt = tmp;
        tmp = r - q * newr;
        r = newr;
        newr = tmp;
    }
    if (r != 1) return 0; // not invertible
    if (t < 0) t += p;
    return static_cast<std::uint64_t>(t);
}

struct ModRref {
    std::vector<std::vector<std::uint64_t>> a;
    std::vector<int> pivotCols;
};

// Gauss-Jordan over F_p
ModRref modRref(std::vector<std::vector<std::uint64_t>> a, std::uint64_t p) {
    ModRref out;
    const int R = static_cast<int>(a.size());
    const int C = R == 0 ? 0 : static_cast<int>(a[0].size());
    int row = 0;
    for (int col = 0; col < C && row < R; ++col) {
        int piv = -1;
        for (int i = row; i < R && piv < 0; ++i)
            if (a[i][col] != 0) piv = i;
        if (piv < 0) continue;
        std::swap(a[row], a[piv]);
        std::uint64_t inv = invmod(a[row][col], p);
        for (int j = col; j < C; ++j) a[row][j] = mulmod(a[row][j], inv, p);
        for (int i = 0; i < R; ++i) {
            if (i == row || a[i][col] == 0) continue;
            std::uint64_t f = a[i][col];
            for (int j = col; j < C; ++j) {
                std::uint64_t s = mulmod(f, a[row][j], p);
                a[i][j] = (a[i][j] >= s) ? a[i][j] - s : a[i][j] + p - s;
            }
        }
        out.pivotCols.push_back(col);
        ++row;
    }
    out.a = std::move(a);
    return out;
}

// rational reconstruction of r mod M with |num|, den <= sqrt(M/2)
bool ratRecon(const mpz_class& r0, const mpz_class& M, mpq_class& out) {
    mpz_class bound;
    mpz_sqrt(bound.get_mpz_t(), mpz_class(M / 2).get_mpz_t());
    mpz_class a = M, b = r0 % M;
    if (b < 0) b += M;
    mpz_class t0 = 0, t1 = 1;
    while (b > bound) {
        mpz_class q = a / b;
        mpz_class tmp = a - q * b;
        a = b;
        b = tmp;
        tmp = t0 - q * t1;
        t0 = t1;
        t1 = tmp;
    }
    if (t1 == 0) return false;
    mpz_class num = b, den = t1;
    if (den < 0) {
        den = -den;
        num = -num;
    }
    if (den > bound) return false;
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    if (g != 1 && g != 0) {
        num /= g;
        den /= g;
    }
    if (den == 0) return false;
    // verify num ≡ r0 * den (mod M)
    mpz_class check = (num - r0 * den) % M;
    if (check != 0) return false;
    out = mpq_class(num) / mpq_class(den);
    out.canonicalize();
    return true;
}

// integer matrix with rows scaled free of denominators; small entries keep an
// int64 mirror so the modular reduction avoids bignum traffic
struct IntMatrix {
    int rows = 0, cols = 0;
    bool small = false;
    std::vector<std::vector<long>> s;
    std::vector<std::vector<mpz_class>> a;

    mpz_class entry(int i, int j) const { return small ? mpz_class(s[i][j]) : a[i][j]; }
};

IntMatrix clearDenominators(const QMat& q) {
    IntMatrix m;
    m.rows = static_cast<int>(q.size());
    m.cols = m.rows == 0 ? 0 : static_cast<int>(q[0].size());
    m.a.assign(m.rows, std::vector<mpz_class>(m.cols));
    for (int i = 0; i < m.rows; ++i) {
        mpz_class l = 1;
        for (int j = 0; j < m.cols; ++j) {
            mpz_class den = q[i][j].get_den();
            mpz_class g;
            mpz_gcd(g.get_mpz_t(), l.get_mpz_t(), den.get_mpz_t());
            l = l / g * den;
        }
        for (int j = 0; j < m.cols; ++j) {
            mpq_class v = q[i][j] * mpq_class(l);
            v.canonicalize();
            m.a[i][j] = v.get_num();
        }
    }
    m.small = true;
    for (int i = 0; i < m.rows && m.small; ++i)
        for (int j = 0; j < m.cols && m.small; ++j)
            m.small = mpz_fits_slong_p(m.a[i][j].get_mpz_t()) != 0;
    if (m.small) {
        m.s.assign(m.rows, std::vector<long>(m.cols));
        for (int i = 0; i < m.rows; ++i)
            for (int j = 0; j < m.cols; ++j) m.s[i][j] = m.a[i][j].get_si();
        m.a.clear();
    }
    return m;
}

// kernel dimension of an integer matrix, certified: candidate rank and kernel
// from a modular RREF, kernel vectors lifted by rational reconstruction and
// verified exactly; falls back to rational elimination when lifting fails.
int certifiedKernelDimInt(const IntMatrix& m) {
    if (m.cols == 0) return 0;
    if (m.rows == 0) return m.cols;
    const auto primes = modulusTable();
    mpz_class modulus = 0;
    std::vector<std::vector<mpz_class>> residues; // CRT residues of the RREF
    std::vector<int> pivotCols;
    int usable = 0;
    for (std::size_t pi = 0; pi < primes.size() && usable < 3; ++pi) {
        std::uint64_t p = primes[pi];
        std::vector<std::vector<std::uint64_t>> red(m.rows, std::vector<std::uint64_t>(m.cols));
        if (m.small) {
            const long ps = static_cast<long>(p);
            for (int i = 0; i < m.rows; ++i)
                for (int j = 0; j < m.cols; ++j) {
                    long v = m.s[i][j] % ps;
                    red[i][j] = static_cast<std::uint64_t>(v < 0 ? v + ps : v);
                }
        } else {
            for (int i = 0; i < m.rows; ++i)
                for (int j = 0; j < m.cols; ++j) {
                    mpz_class v = m.a[i][j] % p;
                    if (v < 0) v += p;
                    red[i][j] = v.get_ui();
                }
        }
        ModRref rr = modRref(std::move(red), p);
        if (usable == 0) {
            pivotCols = rr.pivotCols;
            residues.assign(m.rows, std::vector<mpz_class>(m.cols, 0));
            for (int i = 0; i < m.rows; ++i)
                for (int j = 0; j < m.cols; ++j) residues[i][j] = mpz_class(rr.a[i][j]);
            modulus = mpz_class(p);
            usable = 1;
        } else {
            if (rr.pivotCols != pivotCols) {
                // ranks disagree between primes; restart from the larger one
                if (rr.pivotCols.size() > pivotCols.size()) {
                    pivotCols = rr.pivotCols;
                    residues.assign(m.rows, std::vector<mpz_class>(m.cols, 0));
                    for (int i = 0; i < m.rows; ++i)
                        for (int j = 0; j < m.cols; ++j) residues[i][j] = mpz_class(rr.a[i][j]);
                    modulus = mpz_class(p);
                    usable = 1;
                }
                continue;
            }
            // CRT combine
            mpz_class pz(p), newMod = modulus * pz;
            mpz_class minv;
            mpz_class modz = modulus % pz;
            mpz_invert(minv.get_mpz_t(), modz.get_mpz_t(), pz.get_mpz_t());
            for (int i = 0; i < m.rows; ++i)
                for (int j = 0; j < m.cols; ++j) {
                    mpz_class r1 = residues[i][j];
                    mpz_class r2 = mpz_class(rr.a[i][j]);
                    mpz_class diff = ((r2 - r1) % pz + pz) % pz;
                    residues[i][j] = r1 + modulus * ((diff * minv) % pz);
                }
            modulus = newMod;
            ++usable;
        }

        // try to lift and verify the kernel at the current modulus
        const int k = m.cols - static_cast<int>(pivotCols.size());
        std::vector<bool> isPivot(m.cols, false);
        for (int c : pivotCols) isPivot[c] = true;
        bool ok = true;
        std::vector<std::vector<mpq_class>> kernel;
        kernel.reserve(k);
        for (int f = 0; f < m.cols && ok; ++f) {
            if (isPivot[f]) continue;
            std::vector<mpq_class> v(m.cols, mpq_class(0));
            v[f] = 1;
            for (std::size_t t = 0; t < pivotCols.size() && ok; ++t) {
                mpq_class lifted;
                if (!ratRecon(residues[t][f], modulus, lifted)) {
                    ok = false;
                    break;
                }
                v[pivotCols[t]] = -lifted;
            }
            if (ok) kernel.push_back(std::move(v));
        }
        if (!ok) continue;
        // exact verification: M * v == 0 for every candidate vector
        bool allZero = true;
        for (const auto& v : kernel) {
            mpz_class den = 1;
            for (const auto& x : v) {
                mpz_class d = x.get_den();
                mpz_class g;
                mpz_gcd(g.get_mpz_t(), den.get_mpz_t(), d.get_mpz_t());
                den = den / g * d;
            }
            std::vector<mpz_class> vi(m.cols);
            for (int j = 0; j < m.cols; ++j) {
                mpq_class s = v[j] * mpq_class(den);
                s.canonicalize();
                vi[j] = s.get_num();
            }
            for (int i = 0; i < m.rows && allZero; ++i) {
                mpz_class acc = 0;
                if (m.small) {
                    for (int j = 0; j < m.cols; ++j)
                        if (m.s[i][j] != 0 && sgn(vi[j]) != 0) acc += vi[j] * m.s[i][j];
                } else {
                    for (int j = 0; j < m.cols; ++j)
                        if (sgn(m.a[i][j]) != 0 && sgn(vi[j]) != 0) acc += m.a[i][j] * vi[j];
                }
                if (acc != 0) allZero = false;
            }
            if (!allZero) break;
        }
        if (allZero) {
            // pivots certify rank >= #pivots; the verified independent kernel
            // vectors certify rank <= cols - k; together the dimension is exact
            return k;
        }
    }
    // fallback: exact rational elimination
    QMat q(m.rows, std::vector<mpq_class>(m.cols));
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) q[i][j] = mpq_class(m.entry(i, j));
    return m.cols - rankQ(std::move(q));
}

QMat realifyLinear(const CMat& m) {
    const int R = m.rows(), C = m.cols();
    QMat q(2 * R, std::vector<mpq_class>(2 * C, mpq_class(0)));
    for (int i = 0; i < R; ++i)
        for (int j = 0; j < C; ++j) {
            const ExactComplex& e = m.at(i, j).exactValue();
            q[i][j] = e.re;
            q[i][j + C] = -e.im;
            q[i + R][j] = e.im;
            q[i + R][j + C] = e.re;
        }
    return q;
}

} // namespace

int exactKernelDim(const CMat& m) {
    if (m.backend() != Backend::exact) fail(Errc::backend_error, "kernel requires exact backend");
    if (m.cols() == 0) return 0;
    if (m.rows() == 0) return m.cols();

    // Gaussian-integer entries realify straight into machine words; anything
    // else goes through the rational realification with row scaling.
    const int R = m.rows(), C = m.cols();
    bool direct = true;
    for (int i = 0; i < R && direct; ++i)
        for (int j = 0; j < C && direct; ++j) {
            const ExactComplex& e = m.at(i, j).exactValue();
            direct = e.re.get_den() == 1 && e.im.get_den() == 1 &&
                     mpz_fits_slong_p(e.re.get_num_mpz_t()) != 0 &&
                     mpz_fits_slong_p(e.im.get_num_mpz_t()) != 0;
        }
    IntMatrix im;
    if (direct) {
        im.rows = 2 * R;
        im.cols = 2 * C;
        im.small = true;
        im.s.assign(im.rows, std::vector<long>(im.cols, 0));
        for (int i = 0; i < R; ++i)
            for (int j = 0; j < C; ++j) {
                const ExactComplex& e = m.at(i, j).exactValue();
                long re = mpz_get_si(e.re.get_num_mpz_t());
                long imv = mpz_get_si(e.im.get_num_mpz_t());
                im.s[i][j] = re;
                im.s[i][j + C] = -imv;
                im.s[i + R][j] = imv;
                im.s[i + R][j + C] = re;
            }
    } else {
        im = clearDenominators(realifyLinear(m));
    }
    int kReal = certifiedKernelDimInt(im);
    if (kReal % 2 != 0) fail(Errc::internal_error, "odd realified kernel dimension");
    return kReal / 2;
}

int realRank(const CMat& B, const CMat& C) {
    if (B.rows() != C.rows() || B.cols() != C.cols())
        fail(Errc::dimension_mismatch, "realRank shapes differ");
    const int R = B.rows(), Cc = B.cols();
    QMat q(2 * R, std::vector<mpq_class>(2 * Cc, mpq_class(0)));
    for (int i = 0; i < R; ++i)
        for (int j = 0; j < Cc; ++j) {
            const ExactComplex& b = B.at(i, j).exactValue();
            const ExactComplex& c = C.at(i, j).exactValue();
            // x -> Bx + C conj(x), x = u + iv
            q[i][j] = b.re + c.re;
            q[i][j + Cc] = -b.im + c.im;
            q[i + R][j] = b.im + c.im;
            q[i + R][j + Cc] = b.re - c.re;
        }
    return rankQ(std::move(q));
}

CVec vecAdd(const CVec& a, const CVec& b) {
    if (a.size() != b.size()) fail(Errc::dimension_mismatch, "vector sizes differ");
    CVec r(a.size(), Scalar());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

CVec vecSub(const CVec& a, const CVec& b) {
    if (a.size() != b.size()) fail(Errc::dimension_mismatch, "vector sizes differ");
    CVec r(a.size(), Scalar());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

CVec vecScale(const Scalar& c, const CVec& a) {
    CVec r(a.size(), Scalar());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
    return r;
}

CVec vecConj(const CVec& a) {
    CVec r(a.size(), Scalar());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i].conj();
    return r;
}

CVec vecZero(int n, Backend b) { return CVec(static_cast<std::size_t>(n), Scalar::zero(b)); }

bool vecIsZero(const CVec& a) {
    for (const auto& s : a)
        if (!s.isZero()) return false;
    return true;
}

double vecMaxAbs(const CVec& a) {
    double m = 0.0;
    for (const auto& s : a) m = std::max(m, s.absApprox());
    return m;
}

Scalar dotBilinear(const CVec& a, const CVec& b) {
    if (a.size() != b.size()) fail(Errc::dimension_mismatch, "vector sizes differ");
    if (a.empty()) fail(Errc::internal_error, "dot of empty vectors");
    Scalar acc = Scalar::zero(a[0].backend());
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

} // namespace twistorkit
