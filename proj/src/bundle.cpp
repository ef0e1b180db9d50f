#include "twistorkit/bundle.hpp"

#include <algorithm>
#include <sstream>

namespace twistorkit {

BundleCP1::BundleCP1(int rank, LaurentMatrix transition)
    : rank_(rank), T_(std::move(transition)), winding_(0) {
    if (rank_ != T_.size())
        fail(Errc::dimension_mismatch, "bundle rank does not match transition size");
    winding_ = T_.unitWinding(); // throws NotUnitOnCStar when T is not a unit
}

int SplittingType::sum() const {
    int s = 0;
    for (int d : degrees) s += d;
    return s;
}

std::string SplittingType::str() const {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < degrees.size(); ++i)
        os << degrees[i] << (i + 1 < degrees.size() ? "," : "");
    os << ")";
    return os.str();
}

BundleCP1 line_sum(const std::vector<int>& degrees, Backend b) {
    if (degrees.empty()) fail(Errc::internal_error, "line_sum needs a nonempty degree list");
    return BundleCP1(static_cast<int>(degrees.size()),
                     LaurentMatrix::diagonalMonomials(degrees, b));
}

BundleCP1 twist(const BundleCP1& E, int m) {
    return BundleCP1(E.rank(), E.transition().shifted(m));
}

namespace {

// Coefficient-matching system: unknowns are the coefficients q_{j,k}
// (component j, power k <= D) of the U1-side representative.  The product
// T(z) q(1/z) must have vanishing coefficients at every power outside [0, D];
// the powers inside [0, D] define p.  The kernel of this system is H^0
// restricted to q-degree <= D.
CMat sectionConstraintMatrix(const BundleCP1& E, int D) {
    const int r = E.rank();
    const LaurentMatrix& T = E.transition();
    const int lo = T.loPower();
    const int hi = T.hiPower();

    std::vector<int> powers; // constrained powers of z in T(z) q(1/z)
    for (int m = lo - D; m < 0; ++m) powers.push_back(m);
    for (int m = D + 1; m <= hi; ++m) powers.push_back(m);

    const int colsPer = D + 1;
    CMat A(static_cast<int>(powers.size()) * r, r * colsPer, E.backend());
    for (std::size_t pi = 0; pi < powers.size(); ++pi) {
        int m = powers[pi];
        for (int i = 0; i < r; ++i) {
            int row = static_cast<int>(pi) * r + i;
            for (int j = 0; j < r; ++j) {
                for (const auto& [t, c] : T.at(i, j).terms()) {
                    int k = t - m; // q power contributing z^m
                    if (k < 0 || k > D) continue;
                    A.at(row, j * colsPer + k) += c;
                }
            }
        }
    }
    return A;
}

int sectionDimAt(const BundleCP1& E, int D) {
    CMat A = sectionConstraintMatrix(E, D);
    if (A.rows() == 0) return A.cols();
    return exactKernelDim(A);
}

int defaultDegreeBound(const BundleCP1& E) {
    return E.rank() * E.transition().span() + std::abs(E.winding()) + 2;
}

std::vector<GlobalSection> sectionBasisAt(const BundleCP1& E, int D) {
    const int r = E.rank();
    const int colsPer = D + 1;
    CMat A = sectionConstraintMatrix(E, D);
    std::vector<CVec> kernel;
    if (A.rows() == 0) {
        for (int c = 0; c < A.cols(); ++c) {
            CVec v = vecZero(A.cols(), E.backend());
            v[c] = Scalar::one(E.backend());
            kernel.push_back(std::move(v));
        }
    } else {
        kernel = exactKernelBasis(A);
    }
    std::vector<GlobalSection> basis;
    basis.reserve(kernel.size());
    for (const auto& v : kernel) {
        GlobalSection s;
        s.q.assign(r, LaurentPoly(E.backend()));
        for (int j = 0; j < r; ++j)
            for (int k = 0; k <= D; ++k) s.q[j].addToCoeff(k, v[j * colsPer + k]);
        // p is the polynomial part of T(z) q(1/z)
        std::vector<LaurentPoly> qflip(r, LaurentPoly(E.backend()));
        for (int j = 0; j < r; ++j) qflip[j] = s.q[j].flip();
        std::vector<LaurentPoly> prod = E.transition().apply(qflip);
        s.p.assign(r, LaurentPoly(E.backend()));
        for (int i = 0; i < r; ++i)
            for (const auto& [k, c] : prod[i].terms()) {
                if (k < 0) fail(Errc::internal_error, "kernel vector violates the constraints");
                s.p[i].addToCoeff(k, c);
            }
        basis.push_back(std::move(s));
    }
    return basis;
}

} // namespace

SectionSpace section_space(const BundleCP1& E, std::optional<int> degree_bound) {
    if (E.backend() != Backend::exact)
        fail(Errc::backend_error, "section space requires the exact backend");
    const int D = degree_bound ? *degree_bound : defaultDegreeBound(E);
    if (D < 0) fail(Errc::internal_error, "negative degree bound");
    int d0 = sectionDimAt(E, D);
    int d1 = sectionDimAt(E, D + 1);
    if (d0 != d1)
        fail(Errc::degree_bound_unstable,
             "section dimensions at D and D+1 differ (D=" + std::to_string(D) + ")");
    SectionSpace out;
    out.dimension = d0;
    out.basis = sectionBasisAt(E, D);
    return out;
}

int h0(const BundleCP1& E) {
    if (E.backend() != Backend::exact)
        fail(Errc::backend_error, "cohomology requires the exact backend");
    const int Dspec = defaultDegreeBound(E);
    int D = std::min(std::max(E.transition().hiPower(), 0) + 2, Dspec);
    while (true) {
        int d0 = sectionDimAt(E, D);
        int d1 = sectionDimAt(E, D + 1);
        if (d0 == d1) return d0;
        if (D >= Dspec)
            fail(Errc::degree_bound_unstable,
                 "section dimensions at D and D+1 differ (D=" + std::to_string(D) + ")");
        D = std::min(2 * D + 4, Dspec);
    }
}

SplittingType splitting_type(const BundleCP1& E, std::optional<int> scan_window) {
    if (E.backend() != Backend::exact)
        fail(Errc::backend_error, "splitting requires the exact backend");
    const int r = E.rank();
    const int w = E.winding();
    const int W = scan_window ? *scan_window
                              : r * E.transition().span() + std::abs(w) + 3;

    auto hAt = [&](int m) { return h0(twist(E, m)); };

    // h0(E(m)) vanishes iff m <= -n1 - 1; the mean degree w/r bounds n1 below,
    // so walking down from -ceil(w/r) - 1 finds the zero end of the scan
    int cdiv = (w >= 0) ? (w + r - 1) / r : w / r;
    int m = std::clamp(-cdiv - 1, -W, W);
    while (hAt(m) > 0) {
        --m;
        if (m < -W)
            fail(Errc::scan_window_exhausted,
                 "h0 did not vanish within the scan window [-" + std::to_string(W) + "," +
                     std::to_string(W) + "]");
    }

    std::vector<int> degrees;
    int prevH = 0, prevC = 0;
    while (prevC < r) {
        ++m;
        if (m > W)
            fail(Errc::scan_window_exhausted,
                 "splitting increments did not stabilize within the scan window");
        int hm = hAt(m);
        int c = hm - prevH; // #{ i : n_i >= -m }
        if (c < prevC || c > r)
            fail(Errc::internal_error, "non-monotone h0 increments in the splitting scan");
        for (int t = 0; t < c - prevC; ++t) degrees.push_back(-m);
        prevH = hm;
        prevC = c;
    }

    SplittingType st{degrees};
    if (st.sum() != w)
        fail(Errc::inconsistent_winding,
             "splitting degrees sum to " + std::to_string(st.sum()) + ", winding is " +
                 std::to_string(w));
    return st;
}

int h1(const BundleCP1& E) {
    SplittingType st = splitting_type(E);
    int s = 0;
    for (int d : st.degrees) s += std::max(-d - 1, 0);
    return s;
}

namespace {

void checkChartGauge(const LaurentMatrix& P, const char* name) {
    for (int i = 0; i < P.size(); ++i)
        for (int j = 0; j < P.size(); ++j)
            if (!P.at(i, j).isZero() && P.at(i, j).lo() < 0)
                fail(Errc::not_invertible_on_chart,
                     std::string(name) + " has negative powers; it must be polynomial");
    LaurentPoly d = P.det();
    if (d.isZero() || !d.isConstant())
        fail(Errc::not_invertible_on_chart,
             std::string(name) + " must have a nonzero constant determinant");
}

} // namespace

BundleCP1 gauge_transform(const BundleCP1& E, const LaurentMatrix& P0, const LaurentMatrix& P1) {
    if (P0.size() != E.rank() || P1.size() != E.rank())
        fail(Errc::dimension_mismatch, "gauge size does not match bundle rank");
    checkChartGauge(P0, "P0");
    checkChartGauge(P1, "P1");
    LaurentMatrix Tnew = P0.inverseUnit() * E.transition() * P1.flip();
    return BundleCP1(E.rank(), Tnew);
}

bool section_is_compatible(const BundleCP1& E, const GlobalSection& s) {
    if (static_cast<int>(s.p.size()) != E.rank() || static_cast<int>(s.q.size()) != E.rank())
        return false;
    for (const auto& c : s.p)
        if (!c.isZero() && c.lo() < 0) return false;
    for (const auto& c : s.q)
        if (!c.isZero() && c.lo() < 0) return false;
    std::vector<LaurentPoly> qflip(s.q.size(), LaurentPoly(E.backend()));
    for (std::size_t j = 0; j < s.q.size(); ++j) qflip[j] = s.q[j].flip();
    std::vector<LaurentPoly> prod = E.transition().apply(qflip);
    for (int i = 0; i < E.rank(); ++i)
        if (s.p[i] != prod[i]) return false;
    return true;
}

GlobalSection section_zero(const BundleCP1& E) {
    GlobalSection s;
    s.p.assign(E.rank(), LaurentPoly(E.backend()));
    s.q.assign(E.rank(), LaurentPoly(E.backend()));
    return s;
}

GlobalSection section_add(const GlobalSection& a, const GlobalSection& b) {
    if (a.p.size() != b.p.size()) fail(Errc::dimension_mismatch, "section ranks differ");
    GlobalSection r = a;
    for (std::size_t i = 0; i < a.p.size(); ++i) {
        r.p[i] = a.p[i] + b.p[i];
        r.q[i] = a.q[i] + b.q[i];
    }
    return r;
}

GlobalSection section_scale(const Scalar& c, const GlobalSection& s) {
    GlobalSection r = s;
    for (std::size_t i = 0; i < s.p.size(); ++i) {
        r.p[i] = c * s.p[i];
        r.q[i] = c * s.q[i];
    }
    return r;
}

} // namespace twistorkit
