#pragma once

#include <vector>

#include "twistorkit/scalar.hpp"

namespace twistorkit {

using CVec = std::vector<Scalar>;

// Dense constant complex matrix over one scalar backend.
class CMat {
public:
    CMat() : CMat(1, 1, Backend::exact) {}
    CMat(int rows, int cols, Backend b = Backend::exact);

    static CMat identity(int n, Backend b = Backend::exact);
    static CMat zero(int rows, int cols, Backend b = Backend::exact) { return CMat(rows, cols, b); }
    static CMat fromRows(const std::vector<CVec>& rows);
    // integer entries on the exact backend, row-major
    static CMat fromInts(int rows, int cols, const std::vector<long>& v);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Backend backend() const { return backend_; }

    const Scalar& at(int i, int j) const { return e_[idx(i, j)]; }
    Scalar& at(int i, int j) { return e_[idx(i, j)]; }

    CMat conj() const;
    CMat transpose() const;
    CMat conjTranspose() const { return conj().transpose(); }
    bool isZero() const;
    double maxAbs() const;

    CVec apply(const CVec& v) const;
    CVec row(int i) const;
    CVec col(int j) const;

    friend CMat operator*(const CMat& a, const CMat& b);
    friend CMat operator+(const CMat& a, const CMat& b);
    friend CMat operator-(const CMat& a, const CMat& b);
    friend CMat operator*(const Scalar& c, const CMat& m);
    CMat operator-() const;

    bool operator==(const CMat& o) const;
    bool operator!=(const CMat& o) const { return !(*this == o); }

    std::string str() const;

private:
    int idx(int i, int j) const { return i * cols_ + j; }

    int rows_, cols_;
    Backend backend_;
    std::vector<Scalar> e_;
};

Scalar cmatDet(const CMat& m);
CMat cmatInverse(const CMat& m); // Errc::singular_matrix on singular input
int cmatRank(const CMat& m);     // exact backend only

// Kernel of m (as a map on column vectors), exact backend.  The basis routine
// runs reduced row echelon form over the Gaussian rationals.  The dimension
// routine takes a fast certified path: rank and candidate kernel are computed
// modulo a word-size prime, the kernel vectors are lifted by rational
// reconstruction and re-verified exactly, which certifies the dimension; any
// failure falls back to the exact elimination.
std::vector<CVec> exactKernelBasis(const CMat& m);
int exactKernelDim(const CMat& m);

// rank over the reals of the real-linear map x -> B x + C conj(x)
int realRank(const CMat& B, const CMat& C);

// rational matrices (used by the realified paths and oracles)
using QMat = std::vector<std::vector<mpq_class>>;
int rankQ(QMat a);
std::vector<std::vector<mpq_class>> kernelQ(QMat a);

// vector helpers
CVec vecAdd(const CVec& a, const CVec& b);
CVec vecSub(const CVec& a, const CVec& b);
CVec vecScale(const Scalar& c, const CVec& a);
CVec vecConj(const CVec& a);
CVec vecZero(int n, Backend b);
bool vecIsZero(const CVec& a);
double vecMaxAbs(const CVec& a);
Scalar dotBilinear(const CVec& a, const CVec& b); // sum a_i b_i, no conjugation

} // namespace twistorkit
