#include "twistorkit/deformation.hpp"

#include <future>

namespace twistorkit {

BundleFamily::BundleFamily(int rank, int params, Backend b)
    : rank_(rank), params_(params), backend_(b),
      entries_(static_cast<std::size_t>(rank) * rank) {
    if (rank < 1 || params < 1) fail(Errc::internal_error, "family needs rank and params >= 1");
}

void BundleFamily::addTerm(int i, int j, const std::vector<int>& tpow, const LaurentPoly& coeff) {
    if (static_cast<int>(tpow.size()) != params_)
        fail(Errc::dimension_mismatch, "parameter exponent length mismatch");
    if (coeff.backend() != backend_) fail(Errc::backend_mismatch, "coefficient backend differs");
    entries_[i * rank_ + j].push_back({tpow, coeff});
}

namespace {

Scalar monomialValue(const std::vector<int>& tpow, const CVec& t, Backend bk) {
    Scalar v = Scalar::one(bk);
    for (std::size_t r = 0; r < tpow.size(); ++r)
        for (int e = 0; e < tpow[r]; ++e) v *= t[r];
    return v;
}

} // namespace

LaurentMatrix BundleFamily::evalMatrix(const CVec& t) const {
    if (static_cast<int>(t.size()) != params_)
        fail(Errc::dimension_mismatch, "parameter point length mismatch");
    LaurentMatrix M(rank_, backend_);
    for (int i = 0; i < rank_; ++i)
        for (int j = 0; j < rank_; ++j) {
            LaurentPoly acc(backend_);
            for (const auto& term : entries_[i * rank_ + j])
                acc += monomialValue(term.tpow, t, backend_) * term.coeff;
            M.at(i, j) = acc;
        }
    return M;
}

BundleCP1 BundleFamily::eval(const CVec& t) const { return BundleCP1(rank_, evalMatrix(t)); }

SectionFamily::SectionFamily(BundleCP1 base, int params)
    : base_(std::move(base)), params_(params) {
    if (params < 1) fail(Errc::internal_error, "family needs params >= 1");
}

void SectionFamily::addTerm(const std::vector<int>& tpow, const GlobalSection& sec) {
    if (static_cast<int>(tpow.size()) != params_)
        fail(Errc::dimension_mismatch, "parameter exponent length mismatch");
    terms_.push_back({tpow, sec});
}

GlobalSection SectionFamily::eval(const CVec& t) const {
    GlobalSection acc = section_zero(base_);
    for (const auto& term : terms_)
        acc = section_add(acc, section_scale(monomialValue(term.tpow, t, base_.backend()), term.sec));
    return acc;
}

GlobalSection SectionFamily::ksDerivative(const CVec& t, const CVec& direction) const {
    if (static_cast<int>(direction.size()) != params_)
        fail(Errc::dimension_mismatch, "direction length mismatch");
    Backend bk = base_.backend();
    GlobalSection acc = section_zero(base_);
    for (const auto& term : terms_) {
        // d(t^alpha)[dir] = sum_rho dir_rho alpha_rho t^(alpha - e_rho)
        Scalar w = Scalar::zero(bk);
        for (int rho = 0; rho < params_; ++rho) {
            if (term.tpow[rho] == 0 || direction[rho].isZero()) continue;
            std::vector<int> lowered = term.tpow;
            lowered[rho] -= 1;
            Scalar k = bk == Backend::exact
                           ? Scalar::fromInt(term.tpow[rho])
                           : Scalar::fromDouble(static_cast<double>(term.tpow[rho]));
            w += direction[rho] * k * monomialValue(lowered, t, bk);
        }
        if (!w.isZero()) acc = section_add(acc, section_scale(w, term.sec));
    }
    return acc;
}

NormalBundle normal_bundle_of_section(const BundleCP1& E, const GlobalSection& s) {
    if (!section_is_compatible(E, s))
        fail(Errc::invalid_section, "section does not satisfy the transition identity");
    const int r = E.rank();
    Backend bk = E.backend();

    // General transition formula for the normal bundle of a section inside the
    // total space: d(fiber map)/d(fiber) minus (d section / d base) times
    // (d base map / d fiber).  The base map of a bundle total space does not
    // depend on the fiber, so its fiber gradient vanishes identically; the
    // product is formed anyway and checked.
    std::vector<LaurentPoly> sectionDeriv(r, LaurentPoly(bk));
    for (int i = 0; i < r; ++i) sectionDeriv[i] = s.p[i].derivative();
    std::vector<LaurentPoly> baseGradient(r, LaurentPoly(bk)); // d(1/z)/d(fiber component) = 0
    LaurentMatrix correction(r, bk);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) correction.at(i, j) = sectionDeriv[i] * baseGradient[j];

    bool zero = true;
    for (int i = 0; i < r && zero; ++i)
        for (int j = 0; j < r && zero; ++j) zero = correction.at(i, j).isZero();
    if (!zero) fail(Errc::internal_error, "nonzero correction term for a linear total space");

    LaurentMatrix B = E.transition() - correction;
    NormalBundle nb{BundleCP1(r, B), B.inverseUnit(), zero};
    return nb;
}

ModuliDim moduli_dim(const BundleCP1& E, const GlobalSection& s) {
    NormalBundle nb = normal_bundle_of_section(E, s);
    ModuliDim md;
    md.h0 = h0(nb.bundle);
    md.h1 = h1(nb.bundle);
    md.regular = md.h1 == 0;
    return md;
}

SectionFamily canonical_deformation(const BundleCP1& E, const GlobalSection& s) {
    NormalBundle nb = normal_bundle_of_section(E, s);
    if (h1(nb.bundle) != 0)
        fail(Errc::not_regular, "the normal bundle has nonvanishing first cohomology");
    SectionSpace H = section_space(nb.bundle);
    SectionFamily F(E, H.dimension);
    std::vector<int> zero(H.dimension, 0);
    F.addTerm(zero, s);
    for (int rho = 0; rho < H.dimension; ++rho) {
        std::vector<int> e = zero;
        e[rho] = 1;
        F.addTerm(e, H.basis[rho]);
    }
    return F;
}

GlobalSection kodaira_spencer(const SectionFamily& F, const CVec& t, const CVec& direction) {
    return F.ksDerivative(t, direction);
}

namespace {

// coefficients of the chart-0 representative over a shared power window; the
// chart-0 side determines the section because the transition is invertible
// over the punctured line
CVec sectionCoords(const GlobalSection& s, int rank, int loP, int hiP, Backend bk) {
    CVec v;
    v.reserve(static_cast<std::size_t>(rank) * (hiP - loP + 1));
    for (int i = 0; i < rank; ++i)
        for (int k = loP; k <= hiP; ++k) v.push_back(s.p[i].coeff(k));
    (void)bk;
    return v;
}

} // namespace

CMat kodaira_spencer_matrix(const SectionFamily& F, const CVec& t) {
    const BundleCP1& E = F.base();
    NormalBundle nb = normal_bundle_of_section(E, F.eval(t));
    SectionSpace H = section_space(nb.bundle);
    const int l = F.params();
    Backend bk = E.backend();

    std::vector<GlobalSection> images(l);
    for (int rho = 0; rho < l; ++rho) {
        CVec dir = vecZero(l, bk);
        dir[rho] = Scalar::one(bk);
        images[rho] = F.ksDerivative(t, dir);
    }

    int loP = 0, hiP = 0;
    auto widen = [&](const GlobalSection& s) {
        for (const auto& c : s.p)
            if (!c.isZero()) {
                loP = std::min(loP, c.lo());
                hiP = std::max(hiP, c.hi());
            }
    };
    for (const auto& b : H.basis) widen(b);
    for (const auto& im : images) widen(im);

    const int coordDim = E.rank() * (hiP - loP + 1);
    CMat M(coordDim, H.dimension, bk);
    for (int c = 0; c < H.dimension; ++c) {
        CVec col = sectionCoords(H.basis[c], E.rank(), loP, hiP, bk);
        for (int r = 0; r < coordDim; ++r) M.at(r, c) = col[r];
    }

    // express each image in the basis: the kernel of [M | y] is spanned by
    // (x, -1) exactly when y = M x
    CMat out(H.dimension, l, bk);
    for (int rho = 0; rho < l; ++rho) {
        CVec y = sectionCoords(images[rho], E.rank(), loP, hiP, bk);
        CMat aug(coordDim, H.dimension + 1, bk);
        for (int r = 0; r < coordDim; ++r) {
            for (int c = 0; c < H.dimension; ++c) aug.at(r, c) = M.at(r, c);
            aug.at(r, H.dimension) = y[r];
        }
        auto ker = exactKernelBasis(aug);
        if (ker.size() != 1 || ker[0][H.dimension].isZero())
            fail(Errc::invalid_section,
                 "a derivative of the family is not a section of the normal bundle");
        Scalar scale = -(ker[0][H.dimension].inverse());
        for (int c = 0; c < H.dimension; ++c) out.at(c, rho) = scale * ker[0][c];
    }
    return out;
}

GlobalSection ks_finite_difference(const SectionFamily& F, const CVec& t, const CVec& direction,
                                   double step) {
    if (F.base().backend() != Backend::floating)
        fail(Errc::backend_error, "finite differences run on the float backend");
    Scalar h = Scalar::fromDouble(step);
    CVec fwd = vecAdd(t, vecScale(h, direction));
    CVec bwd = vecSub(t, vecScale(h, direction));
    GlobalSection a = F.eval(fwd);
    GlobalSection b = F.eval(bwd);
    Scalar inv2h = Scalar::fromDouble(1.0 / (2.0 * step));
    return section_scale(inv2h, section_add(a, section_scale(Scalar::fromDouble(-1.0), b)));
}

namespace {

DeformationSample sampleAt(const BundleFamily& F, const CVec& t, int twist_m) {
    BundleCP1 Et = twist(F.eval(t), twist_m);
    DeformationSample smp;
    smp.t = t;
    smp.splitting = splitting_type(Et);
    smp.h0 = 0;
    smp.h1 = 0;
    for (int d : smp.splitting.degrees) {
        smp.h0 += std::max(d + 1, 0);
        smp.h1 += std::max(-d - 1, 0);
    }
    return smp;
}

} // namespace

DeformationReport semicontinuity_scan(const BundleFamily& F, const CVec& t_special,
                                      const std::vector<CVec>& t_samples, int twist_m) {
    DeformationReport rep;
    rep.special = sampleAt(F, t_special, twist_m);

    // independent per-sample evaluations, merged in input order
    std::vector<std::future<DeformationSample>> futs;
    futs.reserve(t_samples.size());
    for (const auto& t : t_samples)
        futs.push_back(std::async(std::launch::async, [&F, t, twist_m] {
            return sampleAt(F, t, twist_m);
        }));
    rep.samples.reserve(t_samples.size());
    for (auto& f : futs) rep.samples.push_back(f.get());

    rep.semicontinuous = true;
    rep.euler_constant = true;
    const int chi = rep.special.h0 - rep.special.h1;
    for (const auto& smp : rep.samples) {
        if (smp.h0 > rep.special.h0 || smp.h1 > rep.special.h1) rep.semicontinuous = false;
        if (smp.h0 - smp.h1 != chi) rep.euler_constant = false;
    }
    return rep;
}

StabilityReport splitting_stability_scan(int n, const std::vector<SectionAB>& sections) {
    StabilityReport rep;
    rep.all_degree_one = true;
    rep.corrections_zero = true;
    std::vector<int> ones(2 * n, 1);
    BundleCP1 E = line_sum(ones);
    for (const auto& s : sections) {
        if (s.n != n) fail(Errc::dimension_mismatch, "section size does not match n");
        NormalBundle nb = normal_bundle_of_section(E, section_ab_to_global(s));
        rep.corrections_zero = rep.corrections_zero && nb.correction_zero;
        SplittingType st = splitting_type(nb.bundle);
        rep.all_degree_one =
            rep.all_degree_one && st == SplittingType{std::vector<int>(2 * n, 1)};
        rep.splittings.push_back(std::move(st));
    }
    return rep;
}

LaurentPoly to_float(const LaurentPoly& p) {
    LaurentPoly out(Backend::floating);
    for (const auto& [k, c] : p.terms()) out.addToCoeff(k, Scalar::floating(c.approx()));
    return out;
}

LaurentMatrix to_float(const LaurentMatrix& m) {
    LaurentMatrix out(m.size(), Backend::floating);
    for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < m.size(); ++j) out.at(i, j) = to_float(m.at(i, j));
    return out;
}

GlobalSection to_float(const GlobalSection& s) {
    GlobalSection out;
    out.p.reserve(s.p.size());
    out.q.reserve(s.q.size());
    for (const auto& c : s.p) out.p.push_back(to_float(c));
    for (const auto& c : s.q) out.q.push_back(to_float(c));
    return out;
}

SectionFamily to_float(const SectionFamily& F) {
    SectionFamily out(BundleCP1(F.base().rank(), to_float(F.base().transition())), F.params());
    for (const auto& term : F.terms()) out.addTerm(term.tpow, to_float(term.sec));
    return out;
}

} // namespace twistorkit
