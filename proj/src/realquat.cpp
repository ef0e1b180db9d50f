#include "twistorkit/realquat.hpp"

namespace twistorkit {

QuaternionicData check_quaternionic(const CMat& A, double tol) {
    if (A.rows() != A.cols()) fail(Errc::dimension_mismatch, "A must be square");
    if (A.rows() % 2 != 0) fail(Errc::odd_dimension, "A must have even size");
    const int d = A.rows();
    CMat R = A * A.conj() + CMat::identity(d, A.backend());
    if (A.backend() == Backend::exact) {
        if (!R.isZero()) fail(Errc::not_quaternionic, "A * conj(A) != -I");
    } else {
        double fro = 0.0;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                double v = R.at(i, j).absApprox();
                fro += v * v;
            }
        if (std::sqrt(fro) > tol) fail(Errc::not_quaternionic, "A * conj(A) != -I within tolerance");
    }
    return QuaternionicData(d / 2, A);
}

CVec apply_j(const QuaternionicData& Q, const CVec& x) {
    if (static_cast<int>(x.size()) != Q.A().rows())
        fail(Errc::dimension_mismatch, "vector dimension does not match A");
    return Q.A().conj().apply(vecConj(x));
}

SectionAB induced_r(const QuaternionicData& Q, const SectionAB& s) {
    if (s.dim() != Q.A().rows()) fail(Errc::dimension_mismatch, "section dimension mismatch");
    SectionAB r;
    r.n = s.n;
    r.a = apply_j(Q, s.b);
    r.b = vecScale(-Scalar::one(s.backend()), apply_j(Q, s.a));
    return r;
}

SectionAB twist_section(const QuaternionicData& Q, const SectionAB& s) {
    if (s.dim() != Q.A().rows()) fail(Errc::dimension_mismatch, "section dimension mismatch");
    SectionAB r;
    r.n = s.n;
    r.a = Q.A().apply(s.b);
    r.b = vecScale(-Scalar::one(s.backend()), Q.A().apply(s.a));
    return r;
}

SectionAB conj_section(const SectionAB& s) {
    SectionAB r;
    r.n = s.n;
    r.a = vecConj(s.a);
    r.b = vecConj(s.b);
    return r;
}

QuaternionicData change_trivialization(const QuaternionicData& Q, const CMat& P) {
    if (P.rows() != Q.A().rows() || P.cols() != Q.A().rows())
        fail(Errc::dimension_mismatch, "P size does not match A");
    CMat Pinv(0, 0);
    try {
        Pinv = cmatInverse(P);
    } catch (const Error& e) {
        if (e.code() == Errc::singular_matrix) fail(Errc::singular_matrix, "P is singular");
        throw;
    }
    return check_quaternionic(P.conj() * Q.A() * Pinv, 1e-12);
}

bool is_real_section(const QuaternionicData& Q, const SectionAB& s) {
    if (s.dim() != Q.A().rows()) fail(Errc::dimension_mismatch, "section dimension mismatch");
    CVec expect = vecScale(-Scalar::one(s.backend()), apply_j(Q, s.a));
    return vecIsZero(vecSub(s.b, expect));
}

RealBundleMap bundle_map(const QuaternionicData& Q) {
    RealBundleMap f;
    f.n = Q.n();
    f.fiber_u0_to_v1 = -Q.A();
    f.fiber_u1_to_v0 = Q.A();
    return f;
}

QuaternionicData extract_quaternionic(const RealBundleMap& f, SplitMix64& rng, int samples) {
    const int d = f.fiber_u1_to_v0.rows();
    Backend bk = f.fiber_u1_to_v0.backend();
    // overlap consistency: for (z0, x0) ~ (z1, x1), the two images must agree
    // in the conjugate bundle, i.e. y0 = eta0 * y1 with eta0 = -z1
    for (int t = 0; t < samples; ++t) {
        Scalar z0 = Scalar::zero(bk);
        while (z0.isZero()) z0 = randomScalar(rng, bk);
        Scalar z1 = z0.inverse();
        CVec x0(d, Scalar::zero(bk));
        for (int i = 0; i < d; ++i) x0[i] = randomScalar(rng, bk);
        CVec x1 = vecScale(z1, x0);
        CVec y1 = f.fiber_u0_to_v1.apply(x0);
        CVec y0 = f.fiber_u1_to_v0.apply(x1);
        CVec rhs = vecScale(-z1, y1);
        if (!vecIsZero(vecSub(y0, rhs)))
            fail(Errc::invalid_section, "chart maps do not agree on the overlap");
    }
    return check_quaternionic(f.fiber_u1_to_v0, 1e-12);
}

GlobalSection section_ab_to_global(const SectionAB& s) {
    GlobalSection g;
    const int d = s.dim();
    g.p.assign(d, LaurentPoly(s.backend()));
    g.q.assign(d, LaurentPoly(s.backend()));
    for (int i = 0; i < d; ++i) {
        g.p[i].addToCoeff(0, s.a[i]);
        g.p[i].addToCoeff(1, s.b[i]);
        g.q[i].addToCoeff(1, s.a[i]);
        g.q[i].addToCoeff(0, s.b[i]);
    }
    return g;
}

SectionAB global_to_section_ab(const GlobalSection& g) {
    const int d = static_cast<int>(g.p.size());
    if (d % 2 != 0) fail(Errc::odd_dimension, "section dimension must be even");
    Backend bk = d > 0 ? g.p[0].backend() : Backend::exact;
    SectionAB s;
    s.n = d / 2;
    s.a.assign(d, Scalar::zero(bk));
    s.b.assign(d, Scalar::zero(bk));
    for (int i = 0; i < d; ++i) {
        if (!g.p[i].isZero() && (g.p[i].lo() < 0 || g.p[i].hi() > 1))
            fail(Errc::invalid_section, "chart representative is not affine in the coordinate");
        s.a[i] = g.p[i].coeff(0);
        s.b[i] = g.p[i].coeff(1);
        if (!(g.q[i].coeff(1) == s.a[i]) || !(g.q[i].coeff(0) == s.b[i]))
            fail(Errc::invalid_section, "chart representatives are incompatible");
    }
    return s;
}

SectionAB section_ab_zero(int n, Backend bk) {
    SectionAB s;
    s.n = n;
    s.a = vecZero(2 * n, bk);
    s.b = vecZero(2 * n, bk);
    return s;
}

SectionAB section_ab_add(const SectionAB& x, const SectionAB& y) {
    if (x.n != y.n) fail(Errc::dimension_mismatch, "section sizes differ");
    SectionAB r;
    r.n = x.n;
    r.a = vecAdd(x.a, y.a);
    r.b = vecAdd(x.b, y.b);
    return r;
}

SectionAB section_ab_scale(const Scalar& c, const SectionAB& s) {
    SectionAB r;
    r.n = s.n;
    r.a = vecScale(c, s.a);
    r.b = vecScale(c, s.b);
    return r;
}

SectionAB random_section_ab(int n, SplitMix64& rng, Backend bk) {
    SectionAB s = section_ab_zero(n, bk);
    for (int i = 0; i < 2 * n; ++i) {
        s.a[i] = randomScalar(rng, bk);
        s.b[i] = randomScalar(rng, bk);
    }
    return s;
}

int real_fixed_set_rank(const QuaternionicData& Q) {
    // (a, b) -> b + j(a) = b + conj(A) conj(a): realify over (a, b)
    const int d = Q.A().rows();
    Backend bk = Q.backend();
    CMat B(d, 2 * d, bk), C(d, 2 * d, bk);
    // linear part: b; conjugate-linear part: conj(A) acting on conj(a)
    CMat Abar = Q.A().conj();
    for (int i = 0; i < d; ++i) {
        B.at(i, d + i) = Scalar::one(bk);
        for (int j = 0; j < d; ++j) C.at(i, j) = Abar.at(i, j);
    }
    return realRank(B, C);
}

} // namespace twistorkit
