#include "test_util.hpp"

#include "twistorkit/hypercomplex.hpp"

using namespace twistorkit;

namespace {

TwistorData flatData(int n = 1) {
    FlatHK hk = standard_flat(n);
    return make_twistor_data(quaternionic_from_tau(n), restrict_omega(hk));
}

CMat pairEps(int n, const Scalar& scale) {
    CMat m(2 * n, 2 * n, scale.backend());
    for (int k = 0; k < n; ++k) {
        m.at(2 * k, 2 * k + 1) = -scale;
        m.at(2 * k + 1, 2 * k) = scale;
    }
    return m;
}

} // namespace

TEST_CASE("phase normalization of the flat data") {
    FlatHK hk = standard_flat(1);
    CMat raw = restrict_omega(hk);
    auto [mu, Omega] = normalize_symplectic_phase(raw, quaternionic_from_tau(1));
    CHECK(mu == sc(0, 1));
    CHECK(Omega.at(0, 1) == sc(0, -1));
    CHECK(Omega.at(1, 0) == sc(0, 1));

    // oracle: with this phase the Gram form is the standard Hermitian pairing
    TwistorData D = flatData();
    SplitMix64 rng(61);
    for (int t = 0; t < 20; ++t) {
        CVec a = randCVec(rng, 2), b = randCVec(rng, 2);
        Scalar H = -omega_pair(D, a, apply_j(D.Q, b));
        Scalar expect = dotBilinear(a, vecConj(b));
        CHECK(H == expect);
    }
}

TEST_CASE("phase normalization accepts already-admissible data") {
    // real symplectic A with Omega_raw = A keeps phase one
    CMat A = CMat::fromInts(2, 2, {0, -1, 1, 0});
    QuaternionicData Q = check_quaternionic(A);
    auto [mu, Omega] = normalize_symplectic_phase(A, Q);
    CHECK(mu == sc(1));
    CHECK(Omega == A);
}

TEST_CASE("phase normalization failure modes") {
    // two blocks demanding different phases: no global unit phase works
    CMat A(4, 4, Backend::exact);
    for (int k = 0; k < 2; ++k) {
        A.at(2 * k, 2 * k + 1) = sc(0, -1);
        A.at(2 * k + 1, 2 * k) = sc(0, 1);
    }
    QuaternionicData Q = check_quaternionic(A);

    CMat bad(4, 4, Backend::exact);
    bad.at(0, 1) = sc(-1);
    bad.at(1, 0) = sc(1);
    bad.at(2, 3) = sc(0, -2); // second block scaled by 2i
    bad.at(3, 2) = sc(0, 2);
    CHECK(errorCode([&] { normalize_symplectic_phase(bad, Q); }) == Errc::no_admissible_phase);

    // non-unit modulus ratio between the blocks
    CMat bad2(4, 4, Backend::exact);
    bad2.at(0, 1) = sc(-1);
    bad2.at(1, 0) = sc(1);
    bad2.at(2, 3) = sc(-1, -1);
    bad2.at(3, 2) = sc(1, 1);
    CHECK(errorCode([&] { normalize_symplectic_phase(bad2, Q); }) == Errc::no_admissible_phase);

    // singular input
    CMat sing(2, 2, Backend::exact);
    CHECK(errorCode([&] { normalize_symplectic_phase(sing, quaternionic_from_tau(1)); }) ==
          Errc::no_admissible_phase);
}

TEST_CASE("tangent_cs examples") {
    TwistorData D = flatData();
    CVec a = {sc(1), sc(0)};

    CVec ia = tangent_cs(D, sc(1), sc(0), a);
    CHECK(ia[0] == sc(0, 1));
    CHECK(ia[1] == sc(0));

    CVec ja = tangent_cs(D, sc(1), sc(0, 1), a);
    CVec expect = apply_j(D.Q, a);
    CHECK(vecIsZero(vecSub(ja, expect)));

    CVec b = tangent_cs(D, sc(1), sc(1), a);
    CHECK(b[0] == sc(0));
    CHECK(b[1] == sc(-1));

    CHECK(errorCode([&] { tangent_cs(D, sc(0), sc(0), a); }) == Errc::zero_parameter);
}

TEST_CASE("tangent_cs squares to minus one and is projective") {
    TwistorData D = flatData();
    SplitMix64 rng(62);
    for (int t = 0; t < 20; ++t) {
        Scalar al = randomExactScalar(rng), be = randomExactScalar(rng);
        if (al.isZero() && be.isZero()) al = sc(1);
        CVec a = randCVec(rng, 2);
        CVec twice = tangent_cs(D, al, be, tangent_cs(D, al, be, a));
        CHECK(vecIsZero(vecAdd(twice, a)));

        Scalar lam = randomExactScalar(rng);
        if (lam.isZero()) lam = sc(2);
        CHECK(vecIsZero(vecSub(tangent_cs(D, lam * al, lam * be, a),
                               tangent_cs(D, al, be, a))));

        // defining equation of the fiber structure at (1, zeta)
        Scalar z = randomExactScalar(rng);
        CVec bz = tangent_cs(D, sc(1), z, a);
        CVec lhs = evaluate_real_section(D, Chart::U0, z, bz);
        CVec rhs = vecScale(sc(0, 1), evaluate_real_section(D, Chart::U0, z, a));
        CHECK(vecIsZero(vecSub(lhs, rhs)));
    }
}

TEST_CASE("metric examples and properties") {
    TwistorData D = flatData();
    CVec e1 = {sc(1), sc(0)};
    CHECK(metric(D, e1, e1) == sc(2));
    CHECK(metric(D, e1, {sc(0, 1), sc(0)}) == sc(0));

    SplitMix64 rng(63);
    for (int t = 0; t < 50; ++t) {
        CVec a = randCVec(rng, 2), b = randCVec(rng, 2);
        CHECK(metric(D, a, b) == metric(D, b, a));
        // oracle: closed form 2 Re <a, b> for the flat data
        Scalar herm = dotBilinear(a, vecConj(b));
        CHECK(metric(D, a, b) == Scalar::exact(2 * herm.exactValue().re));
        if (!vecIsZero(a)) {
            const ExactComplex& gaa = metric(D, a, a).exactValue();
            CHECK(sgn(gaa.re) > 0);
        }
    }
}

TEST_CASE("psi examples") {
    TwistorData D = flatData();
    SplitMix64 rng(64);
    for (int t = 0; t < 20; ++t) {
        CVec a = randCVec(rng, 2), b = randCVec(rng, 2);
        CHECK(psi(D, sc(0), a, b) == omega_pair(D, a, b));
    }
    CVec a = {sc(1), sc(0)}, b = {sc(0, 1), sc(0)};
    CHECK(psi(D, sc(1), a, b) == sc(0, -2));
    CHECK(psi(D, sc(-1), a, b) == sc(0, 2));
}

TEST_CASE("kahler identities") {
    TwistorData D = flatData();
    CVec a = {sc(1), sc(0)}, b = {sc(0, 1), sc(0)};
    CHECK(kahler(D, Triple::I, a, b) == sc(2));
    Scalar byPsi = sc(0, -1) * srat(1, 2) * (psi(D, sc(-1), a, b) - psi(D, sc(1), a, b));
    CHECK(byPsi == sc(2));

    SplitMix64 rng(65);
    Scalar half = srat(1, 2), iu = sc(0, 1), two = sc(2);
    for (int t = 0; t < 50; ++t) {
        CVec x = randCVec(rng, 2), y = randCVec(rng, 2);
        CHECK(kahler(D, Triple::I, x, x).isZero());

        Scalar p1 = psi(D, sc(1), x, y), pm1 = psi(D, sc(-1), x, y), p0 = psi(D, sc(0), x, y);
        CHECK(kahler(D, Triple::I, x, y) == -(iu * half) * (pm1 - p1));
        CHECK(kahler(D, Triple::J, x, y) == -half * (p1 + pm1));
        CHECK(kahler(D, Triple::K, x, y) == -iu * (half * (p1 + pm1) - two * p0));
    }
}

TEST_CASE("evaluate_real_section examples") {
    TwistorData D = flatData();
    SplitMix64 rng(66);
    for (int t = 0; t < 10; ++t) {
        CVec a = randCVec(rng, 2);
        CHECK(vecIsZero(vecSub(evaluate_real_section(D, Chart::U0, sc(0), a), a)));
    }
    CVec a = {sc(1), sc(0)};
    CVec v = evaluate_real_section(D, Chart::U0, sc(1), a);
    CHECK(v[0] == sc(1));
    CHECK(v[1] == sc(0, 1));

    // injectivity at 100 random points via the realified system
    for (int t = 0; t < 100; ++t) {
        Scalar z = randomExactScalar(rng);
        CMat B = CMat::identity(2, Backend::exact);
        CMat C = (-z) * D.Q.A().conj();
        CHECK(realRank(B, C) == 4);
    }
}

TEST_CASE("verify_suite on flat data") {
    VerifyReport r1 = verify_suite(flatData(1), 30, kDefaultSeed);
    CHECK(r1.pass());
    CHECK(r1.maxResidual() == 0.0);

    VerifyReport r2 = verify_suite(flatData(2), 15, kDefaultSeed);
    CHECK(r2.pass());
    CHECK(r2.maxResidual() == 0.0);
}

TEST_CASE("verify_suite flags corrupted data") {
    TwistorData D = flatData();
    // break Hermitian compatibility with a lopsided phase on one entry
    TwistorData bad = D;
    bad.Omega.at(0, 1) = sc(1, 1);
    VerifyReport r = verify_suite(bad, 10, kDefaultSeed);
    CHECK_FALSE(r.pass());
    const CheckResult* met = r.find("metric_real");
    REQUIRE(met != nullptr);
    CHECK_FALSE(met->ok);
    CHECK(met->note == "NotReal");

    // and wrap_twistor_data rejects it outright
    CHECK(errorCode([&] { wrap_twistor_data(D.Q, bad.Omega, sc(1)); }) == Errc::not_real);

    // metric itself raises NotReal on such data
    CHECK(errorCode([&] { metric(bad, {sc(1), sc(0)}, {sc(1), sc(0)}); }) == Errc::not_real);
}

TEST_CASE("float backend suite and finite-difference closure") {
    CMat A(2, 2, Backend::floating);
    A.at(0, 1) = Scalar::fromDouble(0, -1);
    A.at(1, 0) = Scalar::fromDouble(0, 1);
    CMat raw = pairEps(1, Scalar::fromDouble(1.0));
    TwistorData D = make_twistor_data(check_quaternionic(A), raw);
    CHECK((D.mu - Scalar::fromDouble(0, 1)).absApprox() < 1e-12);

    VerifyReport r = verify_suite(D, 40, kDefaultSeed);
    CHECK(r.pass());
    CHECK(r.maxResidual() <= 1e-10);

    CHECK(finite_difference_closure(D, 10, kDefaultSeed) <= 1e-6);
}

TEST_CASE("involution fixed set is the real-section locus") {
    TwistorData D = flatData();
    SplitMix64 rng(67);
    for (int t = 0; t < 20; ++t) {
        CVec a = randCVec(rng, 2);
        SectionAB fixed;
        fixed.n = 1;
        fixed.a = a;
        fixed.b = vecScale(sc(-1), apply_j(D.Q, a));
        SectionAB img = induced_r(D.Q, fixed);
        CHECK(vecIsZero(vecSub(img.a, fixed.a)));
        CHECK(vecIsZero(vecSub(img.b, fixed.b)));
        CHECK(is_real_section(D.Q, fixed));

        SectionAB moved = fixed;
        moved.b = vecAdd(moved.b, CVec{sc(1), sc(0)});
        SectionAB img2 = induced_r(D.Q, moved);
        bool same = vecIsZero(vecSub(img2.a, moved.a)) && vecIsZero(vecSub(img2.b, moved.b));
        CHECK_FALSE(same);
        CHECK_FALSE(is_real_section(D.Q, moved));
    }
}
