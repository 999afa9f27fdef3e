#pragma once

#include "berkdyn/berkovich.hpp"
#include "berkdyn/finite_field.hpp"
#include "berkdyn/newton.hpp"

namespace berkdyn {

/// Zeros and poles of R in the closed disk D(a, p^{-t}), with multiplicity,
/// counted from the Newton polygons of the recentered numerator and
/// denominator.
struct ZeroPoleCount {
    int zeros = 0;
    int poles = 0;
};
ZeroPoleCount count_zeros_poles(const RatMap& R, const Rat& a, const Rat& t);
/// Same counts in the open annulus {t_out < v(z - a) < t_in}.
ZeroPoleCount count_zeros_poles_annulus(const RatMap& R, const Rat& a, const Rat& t_out,
                                        const Rat& t_in);

/// The image point R_*(S) of a type II point under the induced action on the
/// tree. For any candidate value c, |R - c| at S is the difference of Gauss
/// norm exponents of P - cQ and Q in the chart centered at S; the image disk
/// is located by refining the candidate center until it lies inside.
BerkPoint seminorm_image(const RatMap& R, const BerkPoint& S);

/// Reduction of R at a type II point with integral exponent, in aligned
/// source and target charts z = a + p^t x, w = b + p^u y.
struct ReducedMap {
    std::shared_ptr<ResidueField> field;  // prime field of R
    FFRatMap map;                         // in lowest terms; nonconstant
    Rat source_center, source_exp;
    Rat target_center, target_exp;
    bool target_inverted = false;  // reduction computed for 1/R (pole at center)
};

struct Pushforward {
    BerkPoint image;
    int degree = 1;  // degree of the reduced map = local degree at S
    ReducedMap reduced;
};

/// Image point, local degree and reduced map at a type II point with t in Z.
Pushforward pushforward_point(const RatMap& R, const BerkPoint& S);

/// Direction image under the reduced map, with the local degree of the
/// reduced map at the residue. Fiber degrees sum to deg of the reduction.
std::pair<Direction, int> pushforward_direction(const RatMap& R, const BerkPoint& S,
                                                const Direction& dir);

/// Image of a ball under R.
struct DiskImage {
    enum class Kind { Ball, WholeSphere } kind = Kind::Ball;
    // Ball case: the image is {w : v(u - center) >= exponent} (or > for open)
    // in the coordinate u = w when !inverted, u = 1/(w - pivot) when inverted.
    Rat center;
    Rat exponent;
    bool open = false;
    bool inverted = false;
    Rat pivot = 0;
    int weierstrass_degree = 1;

    bool contains(const ProjPoint& w, const Int& p) const;
};

struct BallSpec {
    Rat center;
    Rat exponent;
    bool open = false;
};

DiskImage disk_image(const RatMap& R, const BallSpec& ball);

/// Annulus image data: v(R(z) - 0) = alpha + d · v(z - a) on a zero- and
/// pole-free annulus; for d >= 1 the image is again an annulus around 0.
struct AnnulusImage {
    Rat alpha;
    int d = 0;
    std::optional<Annulus> image;
};

AnnulusImage annulus_image(const RatMap& R, const Annulus& C);

/// Modulus growth along a fixed end: either the image of C engulfs the whole
/// direction ball, or C' = R(C) ∩ B' is an annulus whose modulus satisfies
/// mod(C') >= mod(C) + min{m, mod(C)} when the end degree is >= 2, where m is
/// the modulus of the largest zero/pole-free collar of the direction ball.
struct ModulusGrowth {
    bool engulfs = false;
    std::optional<Annulus> image;  // C' when not engulfing
    Rat modulus_in;
    Rat modulus_out;       // mod(C') when defined
    int end_degree = 1;
    bool collar_infinite = false;  // no zeros/poles at all inside the ball
    Rat collar_modulus;            // m, when finite
};

ModulusGrowth modulus_growth(const RatMap& R, const Direction& end, const Annulus& C);

/// Connected preimage components of a closed target disk, with local degrees
/// summing to deg(R). Residue fibers are resolved by Hensel lifting from
/// simple roots with up to `max_refinements` recursive chart descents.
struct PreimageDisk {
    Rat center;            // approximate when hensel_digits > 0
    Rat exponent;
    int degree = 1;
    bool center_exact = true;
    int hensel_digits = 0;
    bool at_infinity = false;  // component around the point at infinity (1/z chart data)
};

std::vector<PreimageDisk> preimage_disks(const RatMap& R, const Rat& b, const Rat& s,
                                         int max_refinements = 3);

} // namespace berkdyn
