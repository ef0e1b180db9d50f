#pragma once

#include "twistorkit/bundle.hpp"
#include "twistorkit/realquat.hpp"

namespace twistorkit {

// Transition matrices polynomial in deformation parameters t_1..t_l with
// Laurent coefficients in the chart coordinate.
class BundleFamily {
public:
    BundleFamily(int rank, int params, Backend b = Backend::exact);

    int rank() const { return rank_; }
    int params() const { return params_; }
    Backend backend() const { return backend_; }

    // adds coeff * t^tpow to entry (i, j)
    void addTerm(int i, int j, const std::vector<int>& tpow, const LaurentPoly& coeff);

    LaurentMatrix evalMatrix(const CVec& t) const;
    BundleCP1 eval(const CVec& t) const;

    struct Term {
        std::vector<int> tpow;
        LaurentPoly coeff;
    };
    const std::vector<Term>& entryTerms(int i, int j) const { return entries_[i * rank_ + j]; }

private:
    int rank_, params_;
    Backend backend_;
    std::vector<std::vector<Term>> entries_;
};

// Section family polynomial in the parameters: s(t) = sum_alpha t^alpha s_alpha.
class SectionFamily {
public:
    SectionFamily(BundleCP1 base, int params);

    const BundleCP1& base() const { return base_; }
    int params() const { return params_; }

    void addTerm(const std::vector<int>& tpow, const GlobalSection& sec);

    GlobalSection eval(const CVec& t) const;
    // exact derivative contracted with a direction vector
    GlobalSection ksDerivative(const CVec& t, const CVec& direction) const;

    struct Term {
        std::vector<int> tpow;
        GlobalSection sec;
    };
    const std::vector<Term>& terms() const { return terms_; }

private:
    BundleCP1 base_;
    int params_;
    std::vector<Term> terms_;
};

// Normal bundle of a section of the linear total space.  The bundle object
// keeps the x0 = T x1 convention; the opposite orientation (chart-0 frame to
// chart-1 frame) is the inverse and is reported separately.
struct NormalBundle {
    BundleCP1 bundle;
    LaurentMatrix v0_to_v1;
    bool correction_zero = true;
};

NormalBundle normal_bundle_of_section(const BundleCP1& E, const GlobalSection& s);

struct ModuliDim {
    int h0 = 0;
    int h1 = 0;
    bool regular = false;
};

ModuliDim moduli_dim(const BundleCP1& E, const GlobalSection& s);

// Affine family s + sum_rho t_rho beta_rho over a basis of sections of the
// normal bundle; requires h1 of the normal bundle to vanish.
SectionFamily canonical_deformation(const BundleCP1& E, const GlobalSection& s);

GlobalSection kodaira_spencer(const SectionFamily& F, const CVec& t, const CVec& direction);
// float-backend variant by central differences
GlobalSection ks_finite_difference(const SectionFamily& F, const CVec& t, const CVec& direction,
                                   double step = 1e-5);

// KS images of the parameter basis directions expressed in the section basis
// of the normal bundle at s_t; square and invertible exactly when the family
// is an isomorphism onto the deformation directions
CMat kodaira_spencer_matrix(const SectionFamily& F, const CVec& t);

struct DeformationSample {
    CVec t;
    int h0 = 0;
    int h1 = 0;
    SplittingType splitting;
};

struct DeformationReport {
    DeformationSample special;
    std::vector<DeformationSample> samples;
    bool semicontinuous = false;      // h^q(sample) <= h^q(special) for q = 0, 1
    bool euler_constant = false;      // h0 - h1 constant across the family
    std::optional<CMat> ks_matrix;    // filled by section-family workflows
};

DeformationReport semicontinuity_scan(const BundleFamily& F, const CVec& t_special,
                                      const std::vector<CVec>& t_samples, int twist_m);

struct StabilityReport {
    std::vector<SplittingType> splittings;
    bool all_degree_one = false;
    bool corrections_zero = false;
};

// normal-bundle splitting of sections of the rank-2n sum of degree-one bundles
StabilityReport splitting_stability_scan(int n, const std::vector<SectionAB>& sections);

// float conversions for the finite-difference paths
LaurentPoly to_float(const LaurentPoly& p);
LaurentMatrix to_float(const LaurentMatrix& m);
GlobalSection to_float(const GlobalSection& s);
SectionFamily to_float(const SectionFamily& F);

} // namespace twistorkit
