#include "test_util.hpp"

#include "twistorkit/twistor_flat.hpp"

using namespace twistorkit;

namespace {

// frozen transcription of the n = 1 model matrices over the frame
// (dw1, dw2, dw1_bar, dw2_bar)
CMat flatI() {
    CMat m(4, 4, Backend::exact);
    m.at(0, 0) = sc(0, 1);
    m.at(1, 1) = sc(0, 1);
    m.at(2, 2) = sc(0, -1);
    m.at(3, 3) = sc(0, -1);
    return m;
}

CMat flatJ() { return CMat::fromInts(4, 4, {0, 0, 0, 1, 0, 0, -1, 0, 0, 1, 0, 0, -1, 0, 0, 0}); }

CMat flatK() {
    CMat m(4, 4, Backend::exact);
    m.at(0, 3) = sc(0, 1);
    m.at(1, 2) = sc(0, -1);
    m.at(2, 1) = sc(0, -1);
    m.at(3, 0) = sc(0, 1);
    return m;
}

CMat flatG() {
    CMat m(4, 4, Backend::exact);
    for (int k = 0; k < 2; ++k) {
        m.at(k, 2 + k) = srat(1, 2);
        m.at(2 + k, k) = srat(1, 2);
    }
    return m;
}

} // namespace

TEST_CASE("standard_flat transcribes the two-dimensional model") {
    FlatHK hk = standard_flat(1);
    CHECK(hk.I == flatI());
    CHECK(hk.J == flatJ());
    CHECK(hk.K == flatK());
    CHECK(hk.g == flatG());

    // reading columns: J dw1 = -dw2_bar, K dw1 = i dw2_bar
    CHECK(hk.J.at(3, 0) == sc(-1));
    CHECK(hk.K.at(3, 0) == sc(0, 1));
}

TEST_CASE("quaternion relations hold for every n") {
    for (int n : {1, 2, 3}) {
        FlatHK hk = standard_flat(n);
        CMat id = CMat::identity(4 * n, Backend::exact);
        CHECK((hk.I * hk.J - hk.K).isZero());
        CHECK((hk.J * hk.I + hk.K).isZero());
        CHECK((hk.I * hk.I + id).isZero());
        CHECK((hk.J * hk.J + id).isZero());
        CHECK((hk.K * hk.K + id).isZero());
    }
}

TEST_CASE("structure_at hits I, J, K at the marked points") {
    FlatHK hk = standard_flat(1);
    CHECK(structure_at(hk, Chart::U0, sc(0)) == hk.I);
    CHECK(structure_at(hk, Chart::U0, sc(1)) == hk.J);
    CHECK(structure_at(hk, Chart::U0, sc(0, 1)) == hk.K);
    // the far chart reaches -I at its origin
    CHECK(structure_at(hk, Chart::U1, sc(0)) == -hk.I);
}

TEST_CASE("structure_at squares to minus the identity and stays on the sphere") {
    FlatHK hk = standard_flat(1);
    SplitMix64 rng(51);
    CMat id = CMat::identity(4, Backend::exact);
    for (int t = 0; t < 40; ++t) {
        Scalar z = randomExactScalar(rng);
        for (Chart c : {Chart::U0, Chart::U1}) {
            CMat S = structure_at(hk, c, z);
            CHECK((S * S + id).isZero());
            auto abc = stereo_abc(c, z);
            CHECK(abc[0] * abc[0] + abc[1] * abc[1] + abc[2] * abc[2] == sc(1));
        }
    }
}

TEST_CASE("omega_at examples") {
    FlatHK hk = standard_flat(1);
    OmegaFamily W = omega_family(hk);
    CHECK(omega_at(hk, Chart::U0, sc(0)) == W.W2 + sc(0, 1) * W.W3);

    // (W2 + i W3)(dw1, dw2) = -1, assembled from the metric and J, K directly
    Scalar w2 = dotBilinear(flatJ().col(0), flatG().col(1)); // g(J dw1, dw2)
    Scalar w3 = dotBilinear(flatK().col(0), flatG().col(1));
    CHECK(w2 == srat(-1, 2));
    CHECK(w3 == Scalar::exact(mpq_class(0), mpq_class(1, 2)));
    CHECK(w2 + sc(0, 1) * w3 == sc(-1));
    CHECK((W.W2 + sc(0, 1) * W.W3).at(0, 1) == sc(-1));
}

TEST_CASE("omega chart law and type") {
    FlatHK hk = standard_flat(1);
    SplitMix64 rng(52);
    for (int t = 0; t < 25; ++t) {
        Scalar z = randomExactScalar(rng);
        if (z.isZero()) z = sc(1, 2);
        CMat lhs = omega_at(hk, Chart::U0, z);
        CMat rhs = (z * z) * omega_at(hk, Chart::U1, z.inverse());
        CHECK((lhs - rhs).isZero());

        // vectors of type (0,1) for the structure at z are annihilated
        CMat S = structure_at(hk, Chart::U0, z);
        CVec v = randCVec(rng, 4);
        CVec u = vecAdd(v, vecScale(sc(0, 1), S.apply(v)));
        CHECK(vecIsZero(lhs.transpose().apply(u)));
    }
}

TEST_CASE("phi_forward examples") {
    TwistorPoint p0{Chart::U0, sc(0), {sc(1), sc(0)}};
    TwistorPoint q0 = phi_forward(1, p0);
    CHECK(q0.fiber[0] == sc(1));
    CHECK(q0.fiber[1] == sc(0));

    TwistorPoint p1{Chart::U0, sc(1), {sc(1), sc(0)}};
    TwistorPoint q1 = phi_forward(1, p1);
    CHECK(q1.fiber[0] == srat(1, 2));
    CHECK(q1.fiber[1] == Scalar::exact(mpq_class(0), mpq_class(-1, 2)));

    SplitMix64 rng(53);
    for (int t = 0; t < 50; ++t) {
        Chart c = rng.rangeInt(0, 1) == 0 ? Chart::U0 : Chart::U1;
        TwistorPoint p{c, randomExactScalar(rng), randCVec(rng, 2)};
        TwistorPoint back = phi_inverse(1, phi_forward(1, p));
        CHECK(vecIsZero(vecSub(back.fiber, p.fiber)));
        TwistorPoint fwd = phi_forward(1, phi_inverse(1, p));
        CHECK(vecIsZero(vecSub(fwd.fiber, p.fiber)));
    }
}

TEST_CASE("fiber jacobian determinant") {
    // (1 + |z|^2)^{-2} at z = 1 gives 1/4
    CMat Jm = phi_fiber_jacobian(1, Chart::U0, sc(1), Backend::exact);
    CHECK(cmatDet(Jm) == srat(1, 4));

    // round trip at z = 2 + i stays exact
    TwistorPoint p{Chart::U0, sc(2, 1), {sc(1, 1), sc(-2, 3)}};
    TwistorPoint back = phi_inverse(1, phi_forward(1, p));
    CHECK(vecIsZero(vecSub(back.fiber, p.fiber)));
}

TEST_CASE("intertwining residual vanishes") {
    FlatHK hk = standard_flat(1);
    CHECK(intertwine_residual(hk, Chart::U0, sc(0)) == 0.0);
    CHECK(intertwine_residual(hk, Chart::U0, sc(1)) == 0.0);
    for (const Scalar& z : deterministic_zetas(Backend::exact))
        for (Chart c : {Chart::U0, Chart::U1}) CHECK(intertwine_residual(hk, c, z) == 0.0);

    FlatHK hf = standard_flat(1, Backend::floating);
    SplitMix64 rng(54);
    for (int t = 0; t < 100; ++t) {
        Scalar z = Scalar::fromDouble(rng.uniformSym() * 3, rng.uniformSym() * 3);
        CHECK(intertwine_residual(hf, Chart::U0, z) <= 1e-10);
    }
}

TEST_CASE("tau examples") {
    // the point (0, 1, 0) on the real section through (x, y) = (1, 0) lands on
    // the far chart at (0, 0, i)
    TwistorPoint p{Chart::U0, sc(0), {sc(1), sc(0)}};
    TwistorPoint img = tau_apply(1, p);
    CHECK(img.chart == Chart::U1);
    CHECK(img.zeta == sc(0));
    CHECK(img.fiber[0] == sc(0));
    CHECK(img.fiber[1] == sc(0, 1));

    SplitMix64 rng(55);
    for (int t = 0; t < 20; ++t) {
        Chart c = rng.rangeInt(0, 1) == 0 ? Chart::U0 : Chart::U1;
        TwistorPoint q{c, randomExactScalar(rng), randCVec(rng, 2)};
        TwistorPoint back = tau_apply(1, tau_apply(1, q));
        CHECK(back.chart == q.chart);
        CHECK(back.zeta == q.zeta);
        CHECK(vecIsZero(vecSub(back.fiber, q.fiber)));
    }
}

TEST_CASE("tau fixes real sections setwise") {
    SplitMix64 rng(56);
    for (int t = 0; t < 20; ++t) {
        CVec x = randCVec(rng, 1), y = randCVec(rng, 1);
        SectionAB s = real_section_from_point(x, y);
        GlobalSection g = section_ab_to_global(s);
        Scalar z = randomExactScalar(rng);
        CVec val = {g.p[0].eval(z), g.p[1].eval(z)};
        TwistorPoint img = tau_apply(1, TwistorPoint{Chart::U0, z, val});
        CHECK(img.chart == Chart::U1);
        CVec expect = {g.q[0].eval(img.zeta), g.q[1].eval(img.zeta)};
        CHECK(vecIsZero(vecSub(img.fiber, expect)));
    }
}

TEST_CASE("real sections from points") {
    SectionAB s = real_section_from_point({sc(1)}, {sc(0)});
    CHECK(s.a[0] == sc(1));
    CHECK(s.a[1] == sc(0));
    CHECK(s.b[0] == sc(0));
    CHECK(s.b[1] == sc(0, 1));

    SectionAB z = real_section_from_point({sc(0)}, {sc(0)});
    CHECK(vecIsZero(z.a));
    CHECK(vecIsZero(z.b));

    SplitMix64 rng(57);
    QuaternionicData Q = quaternionic_from_tau(1);
    for (int t = 0; t < 20; ++t)
        CHECK(is_real_section(Q, real_section_from_point(randCVec(rng, 1), randCVec(rng, 1))));
    QuaternionicData Q2 = quaternionic_from_tau(2);
    for (int t = 0; t < 5; ++t)
        CHECK(is_real_section(Q2, real_section_from_point(randCVec(rng, 2), randCVec(rng, 2))));
}

TEST_CASE("quaternionic_from_tau") {
    QuaternionicData Q = quaternionic_from_tau(1);
    CHECK(Q.A().at(0, 1) == sc(0, -1));
    CHECK(Q.A().at(1, 0) == sc(0, 1));
    CHECK(Q.A().at(0, 0) == sc(0));
    CHECK((Q.A() * Q.A().conj() + CMat::identity(2, Backend::exact)).isZero());

    SplitMix64 rng(58);
    for (int t = 0; t < 20; ++t) {
        SectionAB s = real_section_from_point(randCVec(rng, 1), randCVec(rng, 1));
        CVec expect = vecScale(sc(-1), apply_j(Q, s.a));
        CHECK(vecIsZero(vecSub(s.b, expect)));
    }
}

TEST_CASE("restrict_omega recovers the constant skew pairing") {
    FlatHK hk = standard_flat(1);
    CMat raw = restrict_omega(hk);
    CHECK(raw.at(0, 0) == sc(0));
    CHECK(raw.at(0, 1) == sc(-1));
    CHECK(raw.at(1, 0) == sc(1));
    CHECK(raw.at(1, 1) == sc(0));
    CHECK((raw + raw.transpose()).isZero());

    // oracle: the same value read off the model matrices directly
    Scalar w2 = dotBilinear(flatJ().col(0), flatG().col(1));
    Scalar w3 = dotBilinear(flatK().col(0), flatG().col(1));
    CHECK(raw.at(0, 1) == w2 + sc(0, 1) * w3);

    // blockwise for n = 2
    CMat raw2 = restrict_omega(standard_flat(2));
    CHECK(raw2.at(0, 1) == sc(-1));
    CHECK(raw2.at(2, 3) == sc(-1));
    CHECK(raw2.at(0, 2).isZero());
    CHECK(raw2.at(1, 3).isZero());

    // float tolerance path
    CMat rawf = restrict_omega(standard_flat(1, Backend::floating));
    CHECK(std::abs(rawf.at(0, 1).approx().real() + 1.0) < 1e-12);
}

TEST_CASE("section-level real structure is constant across sections") {
    SplitMix64 rng(59);
    QuaternionicData Q = quaternionic_from_tau(1);
    std::vector<Scalar> zetas = {sc(0), sc(1), sc(0, 1), srat(1, 2)};
    for (int t = 0; t < 5; ++t) {
        SectionAB s = real_section_from_point(randCVec(rng, 1), randCVec(rng, 1));
        CMat A = extract_section_real_structure(1, s, zetas);
        CHECK(A == Q.A());
    }
    // also at non-real sections: the vertical derivative is section-independent
    SectionAB s = random_section_ab(1, rng);
    CHECK(extract_section_real_structure(1, s, zetas) == Q.A());
}

TEST_CASE("flat battery passes on both backends") {
    VerifyReport r1 = twistor_flat_battery(1, Backend::exact, 16);
    CHECK(r1.pass());
    CHECK(r1.maxResidual() == 0.0);
    VerifyReport r2 = twistor_flat_battery(2, Backend::exact, 12);
    CHECK(r2.pass());
    VerifyReport rf = twistor_flat_battery(1, Backend::floating, 24);
    CHECK(rf.pass());
    CHECK(rf.maxResidual() <= 1e-10);
}
