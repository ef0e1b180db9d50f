#include "test_util.hpp"

#include "twistorkit/deformation.hpp"
#include "twistorkit/twistor_flat.hpp"

using namespace twistorkit;

namespace {

BundleFamily jumpFamily() {
    // T_t = [[z^-1, t], [0, z]]
    BundleFamily F(2, 1, Backend::exact);
    F.addTerm(0, 0, {0}, LaurentPoly::monomial(sc(1), -1));
    F.addTerm(0, 1, {1}, LaurentPoly::one(Backend::exact));
    F.addTerm(1, 1, {0}, LaurentPoly::monomial(sc(1), 1));
    return F;
}

} // namespace

TEST_CASE("normal bundle of sections of the degree-one pair") {
    BundleCP1 E = line_sum({1, 1});
    NormalBundle nb = normal_bundle_of_section(E, section_zero(E));
    CHECK(nb.correction_zero);
    CHECK(nb.bundle.transition() == E.transition());
    // the chart-0-to-chart-1 direction is diag(z^-1, z^-1)
    CHECK(nb.v0_to_v1 == LaurentMatrix::diagonalMonomials({-1, -1}));
    CHECK(splitting_type(nb.bundle) == SplittingType{{1, 1}});

    SplitMix64 rng(71);
    for (int t = 0; t < 10; ++t) {
        GlobalSection s = section_ab_to_global(random_section_ab(1, rng));
        NormalBundle nbs = normal_bundle_of_section(E, s);
        CHECK(nbs.correction_zero);
        CHECK(splitting_type(nbs.bundle) == SplittingType{{1, 1}});
    }

    BundleCP1 L = line_sum({3});
    CHECK(splitting_type(normal_bundle_of_section(L, section_zero(L)).bundle) ==
          SplittingType{{3}});

    GlobalSection badSec = section_zero(E);
    badSec.p[0] = LaurentPoly::one(Backend::exact); // breaks the gluing identity
    CHECK(errorCode([&] { normal_bundle_of_section(E, badSec); }) == Errc::invalid_section);
}

TEST_CASE("moduli dimensions") {
    BundleCP1 E = line_sum({1, 1});
    SplitMix64 rng(72);
    ModuliDim md = moduli_dim(E, section_ab_to_global(random_section_ab(1, rng)));
    CHECK(md.h0 == 4);
    CHECK(md.h1 == 0);
    CHECK(md.regular);

    BundleCP1 L = line_sum({-2});
    ModuliDim ml = moduli_dim(L, section_zero(L));
    CHECK(ml.h0 == 0);
    CHECK(ml.h1 == 1);
    CHECK_FALSE(ml.regular);

    BundleCP1 E2 = line_sum({1, 1, 1, 1});
    ModuliDim m2 = moduli_dim(E2, section_zero(E2));
    CHECK(m2.h0 == 8);
    CHECK(m2.h1 == 0);
    CHECK(m2.regular);
}

TEST_CASE("canonical deformation of the zero section") {
    BundleCP1 E = line_sum({1, 1});
    SectionFamily F = canonical_deformation(E, section_zero(E));
    CHECK(F.params() == 4);

    CVec zero(4, sc(0));
    GlobalSection at0 = F.eval(zero);
    CHECK(at0 == section_zero(E));

    // the derivative at zero in direction rho is the rho-th basis section
    SectionSpace H = section_space(E);
    for (int rho = 0; rho < 4; ++rho) {
        CVec dir(4, sc(0));
        dir[rho] = sc(1);
        GlobalSection ks = kodaira_spencer(F, zero, dir);
        CHECK(ks == H.basis[rho]);
    }

    // every member of the family is a genuine section
    SplitMix64 rng(73);
    for (int t = 0; t < 10; ++t) {
        CVec p = randCVec(rng, 4);
        CHECK(section_is_compatible(E, F.eval(p)));
    }

    BundleCP1 L = line_sum({-2});
    CHECK(errorCode([&] { canonical_deformation(L, section_zero(L)); }) == Errc::not_regular);
}

TEST_CASE("kodaira-spencer linearity and full rank") {
    BundleCP1 E = line_sum({1, 1});
    SectionFamily F = canonical_deformation(E, section_zero(E));
    SplitMix64 rng(74);
    for (int t = 0; t < 10; ++t) {
        CVec at = randCVec(rng, 4);
        CVec u = randCVec(rng, 4), v = randCVec(rng, 4);
        GlobalSection sum = kodaira_spencer(F, at, vecAdd(u, v));
        GlobalSection parts =
            section_add(kodaira_spencer(F, at, u), kodaira_spencer(F, at, v));
        CHECK(sum == parts);
    }

    // rank 4 at random parameter points: KS images of the basis directions
    // stay linearly independent (for the affine family they are constant)
    SectionSpace H = section_space(E);
    for (int t = 0; t < 10; ++t) {
        CVec at = randCVec(rng, 4);
        CMat coords(8, 4, Backend::exact);
        for (int rho = 0; rho < 4; ++rho) {
            CVec dir(4, sc(0));
            dir[rho] = sc(1);
            GlobalSection ks = kodaira_spencer(F, at, dir);
            SectionAB ab = global_to_section_ab(ks);
            for (int i = 0; i < 2; ++i) {
                coords.at(i, rho) = ab.a[i];
                coords.at(2 + i, rho) = ab.b[i];
            }
        }
        CHECK(exactKernelDim(coords) == 0);
    }
}

TEST_CASE("the KS matrix of the canonical family is the identity at zero") {
    BundleCP1 E = line_sum({1, 1});
    SectionFamily F = canonical_deformation(E, section_zero(E));
    CVec zero(4, sc(0));
    CHECK(kodaira_spencer_matrix(F, zero) == CMat::identity(4, Backend::exact));

    SplitMix64 rng(80);
    for (int t = 0; t < 5; ++t) {
        CVec at = randCVec(rng, 4);
        CMat K = kodaira_spencer_matrix(F, at);
        CHECK_FALSE(cmatDet(K).isZero());
    }

    DeformationReport rep;
    rep.ks_matrix = kodaira_spencer_matrix(F, zero);
    CHECK(rep.ks_matrix.has_value());
}

TEST_CASE("finite-difference KS matches the exact derivative") {
    BundleCP1 E = line_sum({1, 1});
    SectionFamily F = canonical_deformation(E, section_zero(E));
    SectionFamily Ff = to_float(F);
    SplitMix64 rng(75);
    for (int t = 0; t < 5; ++t) {
        CVec at = randCVec(rng, 4, Backend::floating);
        CVec dir = randCVec(rng, 4, Backend::floating);
        GlobalSection fd = ks_finite_difference(Ff, at, dir);
        GlobalSection exact = kodaira_spencer(Ff, at, dir);
        for (int i = 0; i < 2; ++i) {
            LaurentPoly diff = fd.p[i] - exact.p[i];
            for (const auto& [k, c] : diff.terms()) CHECK(c.absApprox() < 1e-6);
        }
    }
}

TEST_CASE("any affine family factors through the canonical one") {
    BundleCP1 E = line_sum({1, 1});
    GlobalSection s0 = section_zero(E);
    SectionFamily canonical = canonical_deformation(E, s0);
    SectionSpace H = section_space(E);
    SplitMix64 rng(76);

    for (int trial = 0; trial < 5; ++trial) {
        // random 2-parameter affine family through s0
        std::vector<GlobalSection> gamma;
        CMat M(4, 2, Backend::exact); // coordinates of gamma in the basis
        for (int sidx = 0; sidx < 2; ++sidx) {
            GlobalSection g = section_zero(E);
            for (int rho = 0; rho < 4; ++rho) {
                Scalar c = randomExactScalar(rng);
                M.at(rho, sidx) = c;
                g = section_add(g, section_scale(c, H.basis[rho]));
            }
            gamma.push_back(g);
        }
        SectionFamily G(E, 2);
        G.addTerm({0, 0}, s0);
        G.addTerm({1, 0}, gamma[0]);
        G.addTerm({0, 1}, gamma[1]);

        for (int t = 0; t < 5; ++t) {
            CVec u = randCVec(rng, 2);
            CVec mapped = M.apply(u); // the linear factor map
            CHECK(G.eval(u) == canonical.eval(mapped));
        }
    }
}

TEST_CASE("semicontinuity scan on the jumping family") {
    BundleFamily F = jumpFamily();
    CVec zero = {sc(0)};
    std::vector<CVec> samples = {{sc(1)}, {sc(0, 1)}, {srat(1, 2)}};

    DeformationReport rm1 = semicontinuity_scan(F, zero, samples, -1);
    CHECK(rm1.special.h0 == 1);
    CHECK(rm1.special.splitting == SplittingType{{0, -2}});
    for (const auto& smp : rm1.samples) {
        CHECK(smp.h0 == 0);
        CHECK(smp.splitting == SplittingType{{-1, -1}});
    }
    CHECK(rm1.semicontinuous);
    CHECK(rm1.euler_constant);

    DeformationReport r0 = semicontinuity_scan(F, zero, samples, 0);
    CHECK(r0.special.h0 == 2);
    CHECK(r0.special.splitting == SplittingType{{1, -1}});
    for (const auto& smp : r0.samples) {
        CHECK(smp.h0 == 2);
        CHECK(smp.splitting == SplittingType{{0, 0}});
    }
    CHECK(r0.semicontinuous);
    CHECK(r0.euler_constant);

    // ten random nonzero parameters keep both verdicts
    SplitMix64 rng(77);
    std::vector<CVec> rand10;
    while (rand10.size() < 10) {
        Scalar t = randomExactScalar(rng);
        if (!t.isZero()) rand10.push_back({t});
    }
    for (int m : {-1, 0, 1}) {
        DeformationReport r = semicontinuity_scan(F, zero, rand10, m);
        CHECK(r.semicontinuous);
        CHECK(r.euler_constant);
    }
}

TEST_CASE("splitting stability scan") {
    SplitMix64 rng(78);
    std::vector<SectionAB> sections;
    sections.push_back(section_ab_zero(1));
    for (int t = 0; t < 10; ++t) sections.push_back(random_section_ab(1, rng));
    StabilityReport rep = splitting_stability_scan(1, sections);
    CHECK(rep.all_degree_one);
    CHECK(rep.corrections_zero);
    for (const auto& st : rep.splittings) CHECK(st == SplittingType{{1, 1}});

    std::vector<SectionAB> sections2;
    for (int t = 0; t < 3; ++t) sections2.push_back(random_section_ab(2, rng));
    StabilityReport rep2 = splitting_stability_scan(2, sections2);
    CHECK(rep2.all_degree_one);
    for (const auto& st : rep2.splittings) CHECK(st == SplittingType{{1, 1, 1, 1}});
}

TEST_CASE("euler characteristic is constant on random families") {
    // random one-parameter families built from the jump pattern with random
    // Laurent perturbations in the off-diagonal entry
    SplitMix64 rng(79);
    for (int trial = 0; trial < 4; ++trial) {
        BundleFamily F(2, 1, Backend::exact);
        int d1 = static_cast<int>(rng.rangeInt(-2, 2));
        int d2 = static_cast<int>(rng.rangeInt(-2, 2));
        F.addTerm(0, 0, {0}, LaurentPoly::monomial(sc(1), d1));
        F.addTerm(1, 1, {0}, LaurentPoly::monomial(sc(1), d2));
        F.addTerm(0, 1, {1}, randLaurent(rng, 2));
        CVec zero = {sc(0)};
        std::vector<CVec> samples;
        for (int t = 0; t < 4; ++t) samples.push_back({randomExactScalar(rng)});
        DeformationReport r = semicontinuity_scan(F, zero, samples, 0);
        int chi = r.special.h0 - r.special.h1;
        CHECK(chi == F.eval(zero).winding() + 2);
        CHECK(r.euler_constant);
        CHECK(r.semicontinuous);
    }
}
