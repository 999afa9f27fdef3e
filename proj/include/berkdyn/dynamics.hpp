#pragma once

#include "berkdyn/action.hpp"

namespace berkdyn {

struct Budgets {
    long orbit_iterations = 10000;
    long march_steps = 1000;
    long attracting_end_threshold = 256;  // exponent T for end detection
    int period_cap = 4;
    int precision = 64;
    int jet_order = 64;
    long degree_cap = 100000;
};

/// All fixed points found: exact rational ones (including infinity) plus
/// Hensel lifts of simple residue roots of the fixed-point equation.
std::vector<FixedPointRecord> fixed_points(const RatMap& R, int precision = 64);

/// Fixed points of R^n carrying their primitive periods.
struct PeriodicPointRecord {
    FixedPointRecord record;
    int primitive_period = 1;
};
std::vector<PeriodicPointRecord> periodic_points(const RatMap& R, int n, int precision = 64,
                                                 long degree_cap = 100000);

struct ExceptionalSet {
    std::vector<ProjPoint> points;                  // at most two
    std::vector<std::string> certificates;          // one line per point
};
ExceptionalSet exceptional_set(const RatMap& R);

/// Invariant-disk dichotomy for R(B) within B: either the disk is a
/// degree-one bijection of itself (quasi-periodic), or everything converges
/// to an attracting fixed point inside.
struct DiskClassification {
    enum class Kind { QuasiPeriodicDisk, AttractingToPoint } kind;
    ProjPoint fixed_point;  // AttractingToPoint case
    bool fixed_point_exact = true;
    int weierstrass_degree = 1;
};
DiskClassification classify_disk_selfmap(const RatMap& R, const BallSpec& ball);

/// Exponents e_m of the sup norm of R^{p^m} - id on the closed disk
/// D(a, p^{-t0}), certified against the jet tail bound.
struct EpsilonNorms {
    std::vector<Rat> exponents;     // e_0 .. e_m
    int certified_upto = -1;        // largest m with a certified value
    int unit_step_onset = -1;       // least m0 with e_{m+1} = e_m + 1 afterwards
    bool degenerate_identity = false;
};
EpsilonNorms epsilon_norms(const RatMap& R, const Rat& a, const Rat& t0, int m_max, int jet_order);

struct TreeFixedPoint {
    BerkPoint point;
    int period = 1;
    int degree = 1;
    bool repelling() const { return degree > 1; }
};

/// Fixed points of the tree action found by the candidate strategy: the Gauss
/// point, joins of classical fixed points, and radius solutions of the
/// image-exponent equation along geodesics through fixed points. Heuristic,
/// but every returned point is verified exactly.
struct HpFixedPoints {
    std::vector<TreeFixedPoint> points;
    bool budget_exhausted = false;
};
HpFixedPoints hp_fixed_points(const RatMap& R, const Budgets& budgets = {});

/// March toward a fixed point of the tree action. Each step moves the
/// current point along [S, R_*(S)] by min(step0, d(S, R_*(S))/2) and
/// re-verifies the invariant that S stays between the start and its image.
struct MarchStep {
    BerkPoint point;
    Rat distance_to_image;
};
struct MarchResult {
    enum class Kind { RationalFixedPoint, AttractingEnd, BudgetExhausted } kind;
    TreeFixedPoint fixed_point;       // RationalFixedPoint
    ProjPoint attractor;              // AttractingEnd
    bool attractor_exact = true;
    std::vector<MarchStep> trace;
};
MarchResult fixed_point_search(const RatMap& R, const BerkPoint& start, const Rat& step0,
                               const Budgets& budgets = {});

struct ClassificationReport {
    enum class Verdict { AttractingBasin, QuasiPeriodic, PreimageOfQuasiPeriodic, Unknown } verdict;
    std::vector<ProjPoint> cycle;        // AttractingBasin
    int immediate = -1;                  // 1 yes / 0 no / -1 unknown
    int preperiod = 0;                   // PreimageOfQuasiPeriodic
    BallSpec certified_disk;             // QuasiPeriodic evidence
    int disk_period = 1;                 // period of the invariant-disk return map
    std::string evidence;
};

/// Point classification for the Fatou-set dichotomy: attracting basins and
/// the quasi-periodicity domain are recognized; everything else stays
/// Unknown. Julia membership is never claimed.
ClassificationReport classify_fatou_point(const RatMap& R, const ProjPoint& x,
                                          const Budgets& budgets = {});

/// Periodic points of a reduced map over F_{p^k} for k <= k_max, by
/// exhaustive orbit scan, with periods and local degrees.
struct ReducedCycle {
    std::vector<FFProj> cycle;
    int period = 1;
    std::vector<int> local_degrees;
    int field_degree = 1;  // k of the field the cycle lives in
};
struct ReducedPeriodicEnds {
    std::vector<ReducedCycle> cycles;
    bool degenerate_identity = false;
};
ReducedPeriodicEnds reduced_periodic_ends(const FFRatMap& map, long prime, int k_max);

/// Orbit of a point under exact evaluation (used by the CLI and oracles).
std::vector<ProjPoint> exact_orbit(const RatMap& R, const ProjPoint& x, int n);

} // namespace berkdyn
