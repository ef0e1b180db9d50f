#include "twistorkit/twistor_flat.hpp"

namespace twistorkit {

const char* chart_name(Chart c) { return c == Chart::U0 ? "U0" : "U1"; }

namespace {

// 2x2 block [[0,1],[-1,0]] placed on consecutive pairs
CMat pairSkew(int n, Backend b) {
    CMat E(2 * n, 2 * n, b);
    for (int k = 0; k < n; ++k) {
        E.at(2 * k, 2 * k + 1) = Scalar::one(b);
        E.at(2 * k + 1, 2 * k) = -Scalar::one(b);
    }
    return E;
}

} // namespace

FlatHK standard_flat(int n, Backend b) {
    if (n < 1) fail(Errc::internal_error, "n must be positive");
    const int d = 2 * n;
    const Scalar iu = Scalar::imagUnit(b);
    CMat E = pairSkew(n, b);

    FlatHK hk;
    hk.n = n;
    hk.I = CMat(2 * d, 2 * d, b);
    hk.J = CMat(2 * d, 2 * d, b);
    hk.K = CMat(2 * d, 2 * d, b);
    hk.g = CMat(2 * d, 2 * d, b);
    for (int k = 0; k < d; ++k) {
        hk.I.at(k, k) = iu;
        hk.I.at(d + k, d + k) = -iu;
    }
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) {
            const Scalar& e = E.at(r, c);
            if (e.isZero()) continue;
            hk.J.at(r, d + c) = e;
            hk.J.at(d + r, c) = e;
            hk.K.at(r, d + c) = iu * e;
            hk.K.at(d + r, c) = -(iu * e);
        }
    Scalar half = b == Backend::exact ? Scalar::fromRational(1, 2) : Scalar::fromDouble(0.5);
    for (int k = 0; k < d; ++k) {
        hk.g.at(k, d + k) = half;
        hk.g.at(d + k, k) = half;
    }
    return hk;
}

OmegaFamily omega_family(const FlatHK& hk) {
    OmegaFamily w{hk.I.transpose() * hk.g, hk.J.transpose() * hk.g, hk.K.transpose() * hk.g};
    return w;
}

std::array<Scalar, 3> stereo_abc(Chart chart, const Scalar& zeta) {
    Backend bk = zeta.backend();
    Scalar one = Scalar::one(bk);
    Scalar iu = Scalar::imagUnit(bk);
    Scalar nrm = zeta * zeta.conj();
    Scalar den = (one + nrm).inverse();
    if (chart == Chart::U0)
        return {(one - nrm) * den, (zeta + zeta.conj()) * den, iu * (zeta.conj() - zeta) * den};
    return {-(one - nrm) * den, (zeta + zeta.conj()) * den, iu * (zeta - zeta.conj()) * den};
}

CMat structure_at(const FlatHK& hk, Chart chart, const Scalar& zeta) {
    auto w = stereo_abc(chart, zeta);
    return w[0] * hk.I + w[1] * hk.J + w[2] * hk.K;
}

CMat omega_at(const FlatHK& hk, Chart chart, const Scalar& zeta) {
    OmegaFamily w = omega_family(hk);
    Backend bk = hk.backend();
    Scalar iu = Scalar::imagUnit(bk);
    Scalar two = bk == Backend::exact ? Scalar::fromInt(2) : Scalar::fromDouble(2.0);
    CMat plus = w.W2 + iu * w.W3;   // (2,0)-part for the structure at zeta = 0
    CMat minus = w.W2 - iu * w.W3;
    if (chart == Chart::U0)
        return plus - (two * zeta) * w.W1 - (zeta * zeta) * minus;
    return (zeta * zeta) * plus - (two * zeta) * w.W1 - minus;
}

namespace {

void checkFiberDim(int n, const TwistorPoint& pt) {
    if (static_cast<int>(pt.fiber.size()) != 2 * n)
        fail(Errc::dimension_mismatch, "fiber dimension must be 2n");
}

} // namespace

TwistorPoint phi_forward(int n, const TwistorPoint& pt) {
    checkFiberDim(n, pt);
    Backend bk = pt.zeta.backend();
    Scalar iu = Scalar::imagUnit(bk);
    Scalar den = (Scalar::one(bk) + pt.zeta * pt.zeta.conj()).inverse();
    TwistorPoint out;
    out.chart = pt.chart;
    out.zeta = pt.zeta;
    out.fiber = vecZero(2 * n, bk);
    for (int k = 0; k < n; ++k) {
        const Scalar& z1 = pt.fiber[2 * k];
        const Scalar& z2 = pt.fiber[2 * k + 1];
        if (pt.chart == Chart::U0) {
            out.fiber[2 * k] = (z1 + iu * pt.zeta * z2.conj()) * den;
            out.fiber[2 * k + 1] = (z2 - iu * pt.zeta * z1.conj()) * den;
        } else {
            out.fiber[2 * k] = (pt.zeta.conj() * z1 + iu * z2.conj()) * den;
            out.fiber[2 * k + 1] = (pt.zeta.conj() * z2 - iu * z1.conj()) * den;
        }
    }
    return out;
}

TwistorPoint phi_inverse(int n, const TwistorPoint& pt) {
    checkFiberDim(n, pt);
    Backend bk = pt.zeta.backend();
    Scalar iu = Scalar::imagUnit(bk);
    TwistorPoint out;
    out.chart = pt.chart;
    out.zeta = pt.zeta;
    out.fiber = vecZero(2 * n, bk);
    for (int k = 0; k < n; ++k) {
        const Scalar& w1 = pt.fiber[2 * k];
        const Scalar& w2 = pt.fiber[2 * k + 1];
        if (pt.chart == Chart::U0) {
            out.fiber[2 * k] = w1 - iu * pt.zeta * w2.conj();
            out.fiber[2 * k + 1] = w2 + iu * pt.zeta * w1.conj();
        } else {
            out.fiber[2 * k] = pt.zeta * w1 - iu * w2.conj();
            out.fiber[2 * k + 1] = pt.zeta * w2 + iu * w1.conj();
        }
    }
    return out;
}

CMat phi_fiber_jacobian(int n, Chart chart, const Scalar& zeta, Backend b) {
    const int d = 2 * n;
    Scalar iu = Scalar::imagUnit(b);
    Scalar den = (Scalar::one(b) + zeta * zeta.conj()).inverse();
    CMat Jm(2 * d, 2 * d, b);
    for (int k = 0; k < n; ++k) {
        int c1 = 2 * k, c2 = 2 * k + 1;
        Scalar diagTerm = chart == Chart::U0 ? Scalar::one(b) : zeta.conj();
        Scalar offTerm = chart == Chart::U0 ? iu * zeta : iu;
        // w rows
        Jm.at(c1, c1) = diagTerm * den;
        Jm.at(c1, d + c2) = offTerm * den;
        Jm.at(c2, c2) = diagTerm * den;
        Jm.at(c2, d + c1) = -(offTerm * den);
        // conjugate rows
        Jm.at(d + c1, d + c1) = diagTerm.conj() * den;
        Jm.at(d + c1, c2) = offTerm.conj() * den;
        Jm.at(d + c2, d + c2) = diagTerm.conj() * den;
        Jm.at(d + c2, c1) = -(offTerm.conj() * den);
    }
    return Jm;
}

double intertwine_residual(const FlatHK& hk, Chart chart, const Scalar& zeta) {
    const int d = 2 * hk.n;
    Backend bk = hk.backend();
    CMat S = structure_at(hk, chart, zeta);
    CMat Jm = phi_fiber_jacobian(hk.n, chart, zeta, bk);
    CMat D(2 * d, 2 * d, bk);
    Scalar iu = Scalar::imagUnit(bk);
    for (int k = 0; k < d; ++k) {
        D.at(k, k) = iu;
        D.at(d + k, d + k) = -iu;
    }
    return (S * Jm - Jm * D).maxAbs();
}

TwistorPoint tau_apply(const QuaternionicData& Q, const TwistorPoint& pt) {
    if (static_cast<int>(pt.fiber.size()) != Q.A().rows())
        fail(Errc::dimension_mismatch, "fiber dimension does not match Q");
    Backend bk = pt.zeta.backend();
    TwistorPoint out;
    out.zeta = -pt.zeta.conj();
    CVec image = Q.A().conj().apply(vecConj(pt.fiber));
    if (pt.chart == Chart::U0) {
        out.chart = Chart::U1;
        out.fiber = vecScale(-Scalar::one(bk), image);
    } else {
        out.chart = Chart::U0;
        out.fiber = image;
    }
    return out;
}

TwistorPoint tau_apply(int n, const TwistorPoint& pt) {
    checkFiberDim(n, pt);
    return tau_apply(quaternionic_from_tau(n, pt.zeta.backend()), pt);
}

SectionAB real_section_from_point(const CVec& x, const CVec& y) {
    if (x.size() != y.size() || x.empty()) fail(Errc::dimension_mismatch, "x and y sizes differ");
    const int n = static_cast<int>(x.size());
    Backend bk = x[0].backend();
    Scalar iu = Scalar::imagUnit(bk);
    SectionAB s = section_ab_zero(n, bk);
    for (int k = 0; k < n; ++k) {
        s.a[2 * k] = x[k];
        s.a[2 * k + 1] = y[k];
        s.b[2 * k] = -(iu * y[k].conj());
        s.b[2 * k + 1] = iu * x[k].conj();
    }
    return s;
}

QuaternionicData quaternionic_from_tau(int n, Backend b) {
    CMat A(2 * n, 2 * n, b);
    Scalar iu = Scalar::imagUnit(b);
    for (int k = 0; k < n; ++k) {
        A.at(2 * k, 2 * k + 1) = -iu;
        A.at(2 * k + 1, 2 * k) = iu;
    }
    return check_quaternionic(A, 1e-12);
}

namespace {

// Constant twisted sections evaluate to the same vector in either chart frame;
// pushing through the fiber map and pairing with the pencil gives a value whose
// chart trivialization factors cancel, so no twist factor appears here.
CMat restrictAt(const FlatHK& hk, Chart chart, const Scalar& zeta) {
    const int d = 2 * hk.n;
    Backend bk = hk.backend();
    CMat W = omega_at(hk, chart, zeta);
    CMat Jm = phi_fiber_jacobian(hk.n, chart, zeta, bk);
    CMat R(d, d, bk);
    std::vector<CVec> pushed(d);
    for (int a = 0; a < d; ++a) {
        CVec v = vecZero(2 * d, bk);
        v[a] = Scalar::one(bk);
        pushed[a] = Jm.apply(v);
    }
    for (int b = 0; b < d; ++b) {
        CVec Wb = W.apply(pushed[b]);
        for (int a = 0; a < d; ++a) R.at(a, b) = dotBilinear(pushed[a], Wb);
    }
    return R;
}

} // namespace

CMat restrict_omega(const FlatHK& hk, double tol) {
    Backend bk = hk.backend();
    std::vector<Scalar> samples;
    if (bk == Backend::exact) {
        samples = {Scalar::fromInt(0), Scalar::fromInt(1), Scalar::fromInts(0, 1),
                   Scalar::fromInts(2, -1)};
    } else {
        samples = {Scalar::fromDouble(0), Scalar::fromDouble(1), Scalar::fromDouble(0, 1),
                   Scalar::fromDouble(2, -1)};
    }
    CMat first = restrictAt(hk, Chart::U0, samples[0]);
    auto compare = [&](const CMat& other) {
        CMat diff = other - first;
        if (bk == Backend::exact ? !diff.isZero() : diff.maxAbs() > tol)
            fail(Errc::not_constant,
                 "restricted pencil varies with the base coordinate (convention bug)");
    };
    for (std::size_t k = 1; k < samples.size(); ++k)
        compare(restrictAt(hk, Chart::U0, samples[k]));
    for (const Scalar& z : samples) compare(restrictAt(hk, Chart::U1, z));
    return first;
}

CMat extract_section_real_structure(const QuaternionicData& Q, const SectionAB& s,
                                    const std::vector<Scalar>& zetas) {
    const int d = Q.A().rows();
    if (s.dim() != d) fail(Errc::dimension_mismatch, "section dimension does not match Q");
    Backend bk = s.backend();
    GlobalSection g = section_ab_to_global(s);
    CMat extracted(0, 0, bk);
    bool haveFirst = false;
    for (const Scalar& z : zetas) {
        // vertical derivative of tau at the section point: the fiber component
        // of tau is affine in the fiber variable, so finite differences along
        // the chart frame recover it exactly
        CVec base(d, Scalar::zero(bk));
        for (int i = 0; i < d; ++i) base[i] = g.p[i].eval(z);
        TwistorPoint p0{Chart::U0, z, base};
        TwistorPoint t0 = tau_apply(Q, p0);
        CMat M(d, d, bk);
        for (int c = 0; c < d; ++c) {
            CVec shifted = base;
            shifted[c] += Scalar::one(bk);
            TwistorPoint tc = tau_apply(Q, TwistorPoint{Chart::U0, z, shifted});
            CVec col = vecSub(tc.fiber, t0.fiber);
            for (int r = 0; r < d; ++r) M.at(r, c) = col[r];
        }
        // dtau(v) = -conj(A) conj(v) on the U0 side, so A = -conj(M)
        CMat Acand = -(M.conj());
        if (!haveFirst) {
            extracted = Acand;
            haveFirst = true;
        } else {
            CMat diff = Acand - extracted;
            bool differs = bk == Backend::exact ? !diff.isZero() : diff.maxAbs() > 1e-10;
            if (differs)
                fail(Errc::not_constant,
                     "section-level real structure varies with the sample point");
        }
    }
    if (!haveFirst) fail(Errc::internal_error, "no sample points given");
    return extracted;
}

CMat extract_section_real_structure(int n, const SectionAB& s, const std::vector<Scalar>& zetas) {
    return extract_section_real_structure(quaternionic_from_tau(n, s.backend()), s, zetas);
}

VerifyReport twistor_flat_battery(int n, Backend bk, int samples, std::uint64_t seed,
                                  double tol) {
    FlatHK hk = standard_flat(n, bk);
    const int d = 2 * n;
    VerifyReport rep;
    rep.tolerance = bk == Backend::exact ? 0.0 : tol;
    Scalar one = Scalar::one(bk);
    Scalar iu = Scalar::imagUnit(bk);
    CMat id = CMat::identity(2 * d, bk);

    rep.add("I_squared", (hk.I * hk.I + id).maxAbs());
    rep.add("J_squared", (hk.J * hk.J + id).maxAbs());
    rep.add("K_squared", (hk.K * hk.K + id).maxAbs());
    rep.add("IJ_equals_K", (hk.I * hk.J - hk.K).maxAbs());
    rep.add("JI_equals_minus_K", (hk.J * hk.I + hk.K).maxAbs());
    rep.add("metric_symmetric", (hk.g - hk.g.transpose()).maxAbs());
    for (auto [name, S] : {std::pair<const char*, const CMat*>{"metric_compat_I", &hk.I},
                           {"metric_compat_J", &hk.J},
                           {"metric_compat_K", &hk.K}})
        rep.add(name, (S->transpose() * hk.g * *S - hk.g).maxAbs());
    OmegaFamily W = omega_family(hk);
    rep.add("omega_antisymmetric", std::max({(W.W1 + W.W1.transpose()).maxAbs(),
                                             (W.W2 + W.W2.transpose()).maxAbs(),
                                             (W.W3 + W.W3.transpose()).maxAbs()}));

    std::vector<Scalar> zetas = deterministic_zetas(bk, 12, seed);
    SplitMix64 rng(seed + 1);
    for (int t = 0; t < std::max(0, samples - 12); ++t) zetas.push_back(randomScalar(rng, bk));

    double rSquare = 0, rSphere = 0, rAnti = 0, rType = 0, rChart = 0, rInter = 0;
    double rRound = 0, rWell = 0, rJacDet = 0, rTauInv = 0, rTauFix = 0;
    QuaternionicData Q = quaternionic_from_tau(n, bk);

    for (Chart chart : {Chart::U0, Chart::U1}) {
        for (const Scalar& z : zetas) {
            CMat S = structure_at(hk, chart, z);
            rSquare = std::max(rSquare, (S * S + id).maxAbs());
            auto abc = stereo_abc(chart, z);
            rSphere = std::max(rSphere,
                               (abc[0] * abc[0] + abc[1] * abc[1] + abc[2] * abc[2] - one)
                                   .absApprox());
            CMat Wz = omega_at(hk, chart, z);
            rAnti = std::max(rAnti, (Wz + Wz.transpose()).maxAbs());

            // the pencil annihilates the -i eigenspace of the structure
            for (int rep2 = 0; rep2 < 3; ++rep2) {
                CVec v(2 * d, Scalar::zero(bk));
                for (int i = 0; i < 2 * d; ++i) v[i] = randomScalar(rng, bk);
                CVec u = vecAdd(v, vecScale(iu, S.apply(v)));
                CVec wu = Wz.transpose().apply(u); // row pairing u^T Wz
                rType = std::max(rType, vecMaxAbs(wu));
            }

            if (!z.isZero()) {
                Chart other = chart == Chart::U0 ? Chart::U1 : Chart::U0;
                CMat rhs = (z * z) * omega_at(hk, other, z.inverse());
                rChart = std::max(rChart, (Wz - rhs).maxAbs());
            }

            rInter = std::max(rInter, intertwine_residual(hk, chart, z));

            CVec fiber(d, Scalar::zero(bk));
            for (int i = 0; i < d; ++i) fiber[i] = randomScalar(rng, bk);
            TwistorPoint pt{chart, z, fiber};
            TwistorPoint back = phi_inverse(n, phi_forward(n, pt));
            rRound = std::max(rRound, vecMaxAbs(vecSub(back.fiber, pt.fiber)));

            if (!z.isZero() && chart == Chart::U0) {
                TwistorPoint pt1{Chart::U1, z.inverse(), vecScale(z.inverse(), fiber)};
                rWell = std::max(rWell, vecMaxAbs(vecSub(phi_forward(n, pt).fiber,
                                                         phi_forward(n, pt1).fiber)));
            }

            // |det of the fiber Jacobian| = (1 + |z|^2)^{-2n} (nonzero, so the
            // fiber map is invertible; the value itself is pinned here)
            CMat Jm = phi_fiber_jacobian(n, chart, z, bk);
            Scalar det = cmatDet(Jm);
            Scalar nrm1 = one + z * z.conj();
            Scalar expect = one;
            for (int k = 0; k < 2 * n; ++k) expect = expect * nrm1;
            rJacDet = std::max(rJacDet, (det * expect - one).absApprox());

            TwistorPoint tt = tau_apply(Q, tau_apply(Q, pt));
            rTauInv = std::max(rTauInv, std::max(vecMaxAbs(vecSub(tt.fiber, pt.fiber)),
                                                 (tt.zeta - pt.zeta).absApprox()));
        }
    }

    // tau maps points of a real section to points of the same section
    bool allReal = true;
    for (int t = 0; t < std::max(4, samples / 4); ++t) {
        CVec x(n, Scalar::zero(bk)), y(n, Scalar::zero(bk));
        for (int i = 0; i < n; ++i) {
            x[i] = randomScalar(rng, bk);
            y[i] = randomScalar(rng, bk);
        }
        SectionAB s = real_section_from_point(x, y);
        allReal = allReal && is_real_section(Q, s);
        GlobalSection g = section_ab_to_global(s);
        Scalar z = randomScalar(rng, bk);
        CVec val(d, Scalar::zero(bk));
        for (int i = 0; i < d; ++i) val[i] = g.p[i].eval(z);
        TwistorPoint image = tau_apply(Q, TwistorPoint{Chart::U0, z, val});
        CVec expect(d, Scalar::zero(bk));
        for (int i = 0; i < d; ++i) expect[i] = g.q[i].eval(image.zeta);
        rTauFix = std::max(rTauFix, vecMaxAbs(vecSub(image.fiber, expect)));
    }
    rep.addFlag("real_section_is_real", allReal);

    rep.add("structure_squares", rSquare);
    rep.add("sphere_weights", rSphere);
    rep.add("pencil_antisymmetric", rAnti);
    rep.add("pencil_type_20", rType);
    rep.add("pencil_chart_law", rChart);
    rep.add("phi_intertwines", rInter);
    rep.add("phi_roundtrip", rRound);
    rep.add("phi_well_defined", rWell);
    rep.add("fiber_jacobian_det", rJacDet);
    rep.add("tau_involution", rTauInv);
    rep.add("tau_fixes_real_sections", rTauFix);

    try {
        CMat raw = restrict_omega(hk);
        rep.add("restricted_pencil_constant", 0.0);
        rep.add("restricted_pencil_antisymmetric", (raw + raw.transpose()).maxAbs());
    } catch (const Error& e) {
        rep.addFlag("restricted_pencil_constant", false, e.what());
    }

    return rep;
}

std::vector<Scalar> deterministic_zetas(Backend b, int count, std::uint64_t seed) {
    std::vector<Scalar> out;
    auto push = [&](long re, long im) {
        if (b == Backend::exact)
            out.push_back(Scalar::fromInts(re, im));
        else
            out.push_back(Scalar::fromDouble(static_cast<double>(re), static_cast<double>(im)));
    };
    push(0, 0);
    push(1, 0);
    push(-1, 0);
    push(0, 1);
    push(0, -1);
    push(2, 0);
    push(1, 1);
    SplitMix64 rng(seed);
    while (static_cast<int>(out.size()) < count) {
        if (b == Backend::exact) {
            mpq_class re = randomRational(rng, 3, 2), im = randomRational(rng, 3, 2);
            out.push_back(Scalar::exact(re, im));
        } else {
            out.push_back(Scalar::fromDouble(rng.uniformSym() * 2.0, rng.uniformSym() * 2.0));
        }
    }
    out.resize(count);
    return out;
}

} // namespace twistorkit
