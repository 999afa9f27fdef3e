#pragma once

#include <memory>
#include <vector>

#include "berkdyn/rational.hpp"

namespace berkdyn {

/// F_{p^k} with elements as polynomials modulo a fixed irreducible of degree
/// k. The irreducible is generated deterministically: smallest in the
/// lexicographic order of the coefficient tuple (c_0, ..., c_{k-1}) of the
/// monic polynomial x^k + c_{k-1} x^{k-1} + ... + c_0, so residue encodings
/// are reproducible across runs. Exhaustive operations are bounded by
/// p^k <= 3125.
class ResidueField {
public:
    static constexpr long kExhaustionBound = 3125;

    using Elem = std::vector<long>;  // coefficients in [0, p), size k

    ResidueField(long p, int k = 1);

    long p() const { return p_; }
    int k() const { return k_; }
    long size() const { return size_; }
    const std::vector<long>& modulus() const { return irred_; }  // monic, degree k

    Elem zero() const { return Elem(k_, 0); }
    Elem one() const;
    Elem from_int(long n) const;  // image of n in the prime subfield
    bool is_zero(const Elem& a) const;
    bool eq(const Elem& a, const Elem& b) const;

    Elem add(const Elem& a, const Elem& b) const;
    Elem sub(const Elem& a, const Elem& b) const;
    Elem neg(const Elem& a) const;
    Elem mul(const Elem& a, const Elem& b) const;
    Elem inv(const Elem& a) const;
    Elem pow(Elem a, Int e) const;
    Elem frobenius(const Elem& a) const { return pow(a, p_); }

    /// All field elements, in a fixed enumeration order.
    std::vector<Elem> elements() const;

    long encode(const Elem& a) const;  // base-p digits as an index
    Elem decode(long idx) const;

    std::string to_string(const Elem& a) const;

private:
    long p_;
    int k_;
    long size_;
    std::vector<long> irred_;  // coefficients c_0..c_{k-1} of the monic modulus
};

/// Point of P^1(F_{p^k}); inf == true denotes the point at infinity.
struct FFProj {
    bool inf = false;
    ResidueField::Elem value;

    static FFProj infinity() { return FFProj{true, {}}; }
    static FFProj finite(ResidueField::Elem v) { return FFProj{false, std::move(v)}; }
};

bool ffproj_eq(const ResidueField& F, const FFProj& a, const FFProj& b);
std::string ffproj_to_string(const ResidueField& F, const FFProj& a);

/// Dense polynomial over a residue field; coefficient i is c[i].
using FFPoly = std::vector<ResidueField::Elem>;

FFPoly ffpoly_trim(const ResidueField& F, FFPoly f);
int ffpoly_deg(const ResidueField& F, const FFPoly& f);  // -1 for zero
FFPoly ffpoly_add(const ResidueField& F, const FFPoly& a, const FFPoly& b);
FFPoly ffpoly_sub(const ResidueField& F, const FFPoly& a, const FFPoly& b);
FFPoly ffpoly_mul(const ResidueField& F, const FFPoly& a, const FFPoly& b);
FFPoly ffpoly_scale(const ResidueField& F, const FFPoly& a, const ResidueField::Elem& c);
std::pair<FFPoly, FFPoly> ffpoly_divrem(const ResidueField& F, FFPoly a, const FFPoly& b);
FFPoly ffpoly_gcd(const ResidueField& F, FFPoly a, FFPoly b);  // monic
FFPoly ffpoly_derivative(const ResidueField& F, const FFPoly& f);
ResidueField::Elem ffpoly_eval(const ResidueField& F, const FFPoly& f, const ResidueField::Elem& x);
FFPoly ffpoly_shift(const ResidueField& F, const FFPoly& f, const ResidueField::Elem& a);  // f(x + a)

/// All roots in F with multiplicities, by exhaustive search plus deflation.
/// Fails with FieldTooLarge beyond the exhaustion bound.
std::vector<std::pair<ResidueField::Elem, int>> ff_roots(const ResidueField& F, const FFPoly& f);

/// Rational map over a residue field in lowest terms.
struct FFRatMap {
    FFPoly num;
    FFPoly den;
};

FFRatMap ffmap_normalize(const ResidueField& F, FFPoly num, FFPoly den);
int ffmap_deg(const ResidueField& F, const FFRatMap& m);
bool ffmap_is_constant(const ResidueField& F, const FFRatMap& m);
FFProj ffmap_eval(const ResidueField& F, const FFRatMap& m, const FFProj& x);
/// Local degree of the map at a point of P^1 (order of vanishing after
/// moving point and image to 0).
int ffmap_local_degree(const ResidueField& F, const FFRatMap& m, const FFProj& x);
std::string ffmap_to_string(const ResidueField& F, const FFRatMap& m);

} // namespace berkdyn
