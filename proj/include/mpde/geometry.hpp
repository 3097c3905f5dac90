#pragma once

#include "mpde/angle.hpp"
#include "mpde/charpoly.hpp"

#include <memory>
#include <vector>

namespace mpde {

/// Branch point z0 of the Cauchy data, optionally with arg z0 known as r·pi.
struct BranchPoint {
    cplx value;
    std::optional<Rational> arg_over_pi;
};

/// Open interval (lo, hi) of directions.
struct AngleInterval {
    ExactAngle lo;
    ExactAngle hi;
    ExactAngle length() const { return hi - lo; }
};

struct MaximalFamilyIndex {
    std::vector<std::vector<int>> J;
    std::vector<std::vector<AngleInterval>> intervals; ///< I_{i,j}, per level
    std::vector<Rational> K;                           ///< per level
    Rational Q;
    std::shared_ptr<const AngleBasis> basis;
};

struct Sector {
    std::vector<int> l;
    ExactAngle bisector;
    ExactAngle opening;
    double radius = 1.0;
};

/// Q = LCM(μ_i) / GCD(ν_i).
Rational compute_Q(const std::vector<LevelData>& levels);

/// Registers transcendental arg λ0 values of all roots in the basis.
void register_root_generators(std::vector<LevelData>& levels, AngleBasis& basis);

/// q arg z0 + 2jπ/ν - arg λ0 mod 2Qπ, j = 0..Qν-1, over all root classes;
/// duplicates merged, ascending.
std::vector<ExactAngle> singular_directions(const LevelData& level, std::shared_ptr<const AngleBasis> basis,
                                            const Rational& Q);

/// δ ± π/(2K) mod 2Qπ for every singular δ, ascending.
std::vector<ExactAngle> anti_stokes_directions(const LevelData& level, const Rational& Q);

/// Reduces an angle into [0, 2Qπ).
ExactAngle reduce_mod_period(const ExactAngle& a, const Rational& Q);

/// Intervals I_{i,j} and the admissible tuple set. Levels must carry directions.
MaximalFamilyIndex admissible_index_set(const std::vector<LevelData>& levels, const Rational& Q);

/// I_{from,l_from} ∩ ... ∩ I_{n,l_n} as an interval; empty intersections come
/// back with hi <= lo.
AngleInterval tuple_intersection(const MaximalFamilyIndex& index, const std::vector<int>& l, std::size_t from = 0);
/// Length of the intersection, zero when empty.
ExactAngle intersection_length(const MaximalFamilyIndex& index, const std::vector<int>& l, std::size_t from = 0);

/// Sectors V_l for every l in J. eps is a multiple of pi; when absent half
/// of max_admissible_eps is used for every sector.
std::vector<Sector> maximal_family_sectors(const MaximalFamilyIndex& index, std::optional<Rational> eps_over_pi,
                                           double radius);

/// Half the depth by which the intervals I_{1,l_1} ∩ ... ∩ I_{n,l_n}, l in J,
/// cover every direction: the largest eps/2 for which the sectors still cover.
ExactAngle covering_depth(const MaximalFamilyIndex& index);

/// Supremum of eps keeping every opening above π/K_1 and the family covering.
ExactAngle max_admissible_eps(const MaximalFamilyIndex& index);

/// A multidirection d with d_i in the gap (δ_{i,l_i}, δ_{i,l_i+1}) and nested
/// intervals (d_i - π/2K_i, d_i + π/2K_i) ⊆ (d_{i+1} - ..., ...).
std::vector<ExactAngle> representative_multidirection(const MaximalFamilyIndex& index,
                                                      const std::vector<LevelData>& levels,
                                                      const std::vector<int>& l);

/// Full geometry for a problem: levels with directions, Q and the family index.
struct Geometry {
    std::vector<LevelData> levels;
    std::vector<LeadingTerm> convergent;
    std::shared_ptr<AngleBasis> basis;
    Rational Q{1};
    MaximalFamilyIndex index;
    bool has_levels() const { return !levels.empty(); }
};

Geometry build_geometry(const CharPolynomial& P, const Rational& s1, const Rational& s2, const BranchPoint& z0);

} // namespace mpde
