#pragma once

#include "fraglab/normal_form.hpp"
#include "fraglab/semilinear.hpp"
#include "fraglab/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fraglab {

// a unary atom P(x) or a loop atom R(x,x) that the degree constraints depend on
struct ProfileAtom {
    bool loop = false;
    std::string pred;
    bool operator==(const ProfileAtom&) const = default;
};

// one assignment to the profile atoms with its constraint rows over the l degree coordinates
struct DegreeProfile {
    std::vector<bool> values;
    std::vector<LinearConstraint> rows;
};

struct DegreeConstraintSystem {
    std::vector<std::string> binaries;  // 2-types are taken over these
    std::vector<ProfileAtom> atoms;
    std::vector<DegreeProfile> profiles;  // assignments consistent with gamma
    std::size_t dim() const { return two_type_count(binaries.size()); }
};

// S_pi over feature coordinates; feature g counts neighbours whose 2-type index is in groups[g]
struct DegreeSemilinear {
    std::vector<std::string> binaries;
    std::vector<std::vector<std::uint32_t>> groups;
    SemilinearSet set;

    std::size_t dim() const { return two_type_count(binaries.size()); }
    // the same set over all l coordinates
    SemilinearSet expand() const;
    Vec features(const DegreeVector& deg) const;
    Vec features(const Structure& m, Element a) const;
};

DegreeConstraintSystem degree_rewrite(const NormalForm& nf);
// one entry per profile of dcs, same order
std::vector<DegreeSemilinear> build_semilinear(const DegreeConstraintSystem& dcs);

struct PsiStar {
    Signature sig;
    Formula gamma;
    std::vector<NfPair> pairs;
    DegreeConstraintSystem system;
    std::vector<DegreeSemilinear> semilinear;
    Formula xi;
    Formula phi;
    Formula formula;  // closed C2 sentence
};

PsiStar emit_c2(const NormalForm& nf, const DegreeConstraintSystem& dcs, const std::vector<DegreeSemilinear>& sets);
PsiStar reduce_to_c2(const Formula& f, const Signature& sig);

// forall x gamma and the pairs and, per profile, profile(x) -> deg(x) in S_pi
Formula psi_formula(const PsiStar& ps);
Formula profile_formula(const DegreeConstraintSystem& dcs, const DegreeProfile& p, Var v);
// index into dcs.profiles, nullopt when a's profile was dropped as inconsistent with gamma
std::optional<std::size_t> profile_of(const DegreeConstraintSystem& dcs, const Structure& m, Element a);
// C2 formula saying that the feature vector of v equals `value`
Formula degree_equals(const DegreeSemilinear& s, const Vec& value, Var v);

}  // namespace fraglab
