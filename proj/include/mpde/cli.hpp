#pragma once

#include "mpde/geometry.hpp"
#include "mpde/jumps.hpp"
#include "mpde/resummation.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mpde {

using json = nlohmann::json;

/// A Cauchy problem read from a spec file.
struct ProblemSpec {
    CharPolynomial polynomial{1, {{{1, 0}, 1.0}}};
    Rational s1{1};
    Rational s2{1};
    MomentFunction m1 = MomentFunction::gamma(1);
    MomentFunction m2 = MomentFunction::gamma(1);
    std::vector<RationalDatum> data;
    /// Shared branch point; absent when every datum is a polynomial.
    std::optional<BranchPoint> z0;
};

struct RunConfig {
    double tol = 1e-10;
    std::string out;
    std::uint64_t seed = 0;
    double radius = 1.0;
    std::optional<Rational> eps_over_pi;
    std::vector<GridPoint> grid;
    unsigned threads = 0; ///< 0: hardware concurrency
};

/// Exit codes of the command-line tool.
enum class ExitCode : int { ok = 0, spec_error = 2, refusal = 3, numerical_failure = 4 };

/// Parses a spec document. Errors name the offending field, e.g.
/// "cauchy_data[1].poles[0].order: expected a positive integer".
ProblemSpec parse_problem(const json& doc);
/// Reads and parses a spec file; JSON syntax errors report line and column.
ProblemSpec load_problem(const std::string& path);
json problem_to_json(const ProblemSpec& spec);

/// Grid lines "|t| arg_t [re_z im_z]", comma or blank separated; '#' starts
/// a comment.
std::vector<GridPoint> parse_grid(std::istream& in, const std::string& source = "grid");
std::vector<GridPoint> load_grid(const std::string& path);

/// Geometry of the spec (arg z0 = 0 stands in when the data are entire).
Geometry problem_geometry(const ProblemSpec& spec);

json angle_to_json(const ExactAngle& a);
ExactAngle angle_from_json(const json& j, std::shared_ptr<const AngleBasis> basis);

/// The analyze report: Q, levels with Stokes and anti-Stokes directions,
/// intervals, J and pairwise interval intersections.
json geometry_to_json(const Geometry& g);
Geometry geometry_from_json(const json& j);
/// Same Q, levels, roots, exact directions, intervals and J.
bool same_geometry(const Geometry& a, const Geometry& b);

/// The numerically summable form of a spec: one simple equation
/// ∂_t^p u = λ0 ∂_z^q u, or a product of monomial factors with m2 = Γ_1.
struct NumericModel {
    std::optional<SimpleEquation> simple;
    std::optional<ProductEquation> product;
    std::vector<RationalDatum> components; ///< product case
    std::vector<Rational> K;               ///< per factor; 0 for convergent factors
};

NumericModel numeric_model(const ProblemSpec& spec);

/// Float or symbolic direction ("pi/2", "2*argz0 + pi").
double parse_direction(const std::string& text, std::shared_ptr<const AngleBasis> basis);

json cmd_analyze(const ProblemSpec& spec);

struct CommandOutput {
    std::string text;
    ExitCode code = ExitCode::ok;
    std::vector<std::string> diagnostics;
};

/// Directional sums on the grid; one direction, or one per factor. Throws
/// SingularDirection for directions listed by cmd_analyze.
CommandOutput cmd_sum(const ProblemSpec& spec, const std::vector<double>& directions, const RunConfig& cfg);

/// Jump report CSV at direction `index` (1-based) of level `level` (1-based,
/// K descending).
CommandOutput cmd_jump(const ProblemSpec& spec, int level, int index, const RunConfig& cfg);

json cmd_family(const ProblemSpec& spec, const RunConfig& cfg);

/// Runs f(i) for i in [0, n) on a worker pool.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& f);

/// Entry point of the command-line tool.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace mpde
