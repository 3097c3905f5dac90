#include "mpde/cli.hpp"

#include "mpde/errors.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

namespace mpde {

namespace {

// ---------------------------------------------------------------- spec input

[[noreturn]] void field_error(const std::string& path, const std::string& msg)
{
    throw SpecError(path + ": " + msg);
}

const json& require(const json& obj, const std::string& key, const std::string& path)
{
    if (!obj.is_object()) field_error(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) field_error(path.empty() ? key : path + "." + key, "missing field");
    return *it;
}

std::string sub(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string sub(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

Rational read_rational(const json& v, const std::string& path)
{
    if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    if (v.is_string()) {
        try {
            return parse_rational(v.get<std::string>());
        } catch (const std::exception&) {
            field_error(path, "expected a rational such as \"3/2\"");
        }
    }
    field_error(path, "expected an integer or a rational string");
}

int read_int(const json& v, const std::string& path, int min_value)
{
    if (!v.is_number_integer() || v.get<std::int64_t>() < min_value)
        field_error(path, "expected an integer >= " + std::to_string(min_value));
    return static_cast<int>(v.get<std::int64_t>());
}

// real number; `exact` is cleared when the value is a non-integer float
double read_real(const json& v, const std::string& path, bool& exact)
{
    if (v.is_number_integer()) return static_cast<double>(v.get<std::int64_t>());
    if (v.is_number()) {
        double x = v.get<double>();
        if (!std::isfinite(x)) field_error(path, "expected a finite number");
        if (x != std::floor(x)) exact = false;
        return x;
    }
    if (v.is_string()) return to_double(read_rational(v, path));
    field_error(path, "expected a number");
}

cplx read_complex(const json& obj, const std::string& path, bool& exact)
{
    if (!obj.is_object()) field_error(path, "expected {\"re\": ..., \"im\": ...}");
    double re = obj.contains("re") ? read_real(obj["re"], sub(path, "re"), exact) : 0.0;
    double im = obj.contains("im") ? read_real(obj["im"], sub(path, "im"), exact) : 0.0;
    return {re, im};
}

MomentFunction read_moment(const json& v, const std::string& path)
{
    if (!v.is_array() || v.empty()) field_error(path, "expected a nonempty list of {\"s\", \"exponent\"}");
    std::vector<GammaFactor> f;
    for (std::size_t i = 0; i < v.size(); ++i) {
        GammaFactor g;
        g.s = read_rational(require(v[i], "s", sub(path, i)), sub(sub(path, i), "s"));
        if (v[i].contains("exponent")) g.exponent = read_int(v[i]["exponent"], sub(sub(path, i), "exponent"), -64);
        f.push_back(g);
    }
    return MomentFunction(std::move(f));
}

std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte)
{
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

std::string fmt(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string rat(const Rational& r) { return to_string(r); }

std::string read_file(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) throw SpecError(path + ": cannot open file");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace

ProblemSpec parse_problem(const json& doc)
{
    if (!doc.is_object()) field_error("<root>", "expected a JSON object");
    ProblemSpec spec;

    const json& poly = require(doc, "polynomial", "");
    int N = read_int(require(poly, "N", "polynomial"), "polynomial.N", 1);
    const json& terms = require(poly, "terms", "polynomial");
    if (!terms.is_array() || terms.empty()) field_error("polynomial.terms", "expected a nonempty list");
    std::map<CharPolynomial::Key, cplx> coeffs;
    bool exact = true;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        std::string p = sub("polynomial.terms", i);
        int dl = read_int(require(terms[i], "dl", p), sub(p, "dl"), 0);
        int dz = read_int(require(terms[i], "dz", p), sub(p, "dz"), 0);
        if (dl > N) field_error(sub(p, "dl"), "exceeds N = " + std::to_string(N));
        coeffs[{dl, dz}] += read_complex(terms[i], p, exact);
    }
    try {
        spec.polynomial = CharPolynomial(N, coeffs, exact);
    } catch (const SpecError& e) {
        field_error("polynomial", e.what());
    }

    spec.s1 = read_rational(require(doc, "s1", ""), "s1");
    spec.s2 = read_rational(require(doc, "s2", ""), "s2");
    if (spec.s1 <= 0) field_error("s1", "must be positive");
    if (spec.s2 <= 0) field_error("s2", "must be positive");
    spec.m1 = doc.contains("m1") ? read_moment(doc["m1"], "m1") : MomentFunction::gamma(spec.s1);
    spec.m2 = doc.contains("m2") ? read_moment(doc["m2"], "m2") : MomentFunction::gamma(spec.s2);
    if (spec.m1.order() != spec.s1) field_error("m1", "order " + rat(spec.m1.order()) + " differs from s1");
    if (spec.m2.order() != spec.s2) field_error("m2", "order " + rat(spec.m2.order()) + " differs from s2");

    std::optional<BranchPoint> z0;
    if (doc.contains("z0")) {
        const json& zj = doc["z0"];
        BranchPoint b;
        if (zj.is_object() && zj.contains("arg_over_pi")) {
            bool ex = true;
            double r = zj.contains("abs") ? read_real(zj["abs"], "z0.abs", ex) : 1.0;
            if (r <= 0) field_error("z0.abs", "must be positive");
            b.arg_over_pi = read_rational(zj["arg_over_pi"], "z0.arg_over_pi");
            b.value = std::polar(r, pi * to_double(*b.arg_over_pi));
        } else {
            bool ex = true;
            b.value = read_complex(zj, "z0", ex);
        }
        if (b.value == cplx(0)) field_error("z0", "branch point must be nonzero");
        z0 = b;
    }

    const json& data = require(doc, "cauchy_data", "");
    if (!data.is_array()) field_error("cauchy_data", "expected a list");
    if (static_cast<int>(data.size()) != N)
        field_error("cauchy_data", "expected N = " + std::to_string(N) + " entries, got " + std::to_string(data.size()));
    bool any_pole = false;
    for (std::size_t i = 0; i < data.size(); ++i) {
        std::string p = sub("cauchy_data", i);
        if (!data[i].is_object()) field_error(p, "expected an object");
        std::vector<cplx> poles, polyc;
        if (data[i].contains("poles")) {
            const json& pj = data[i]["poles"];
            if (!pj.is_array()) field_error(sub(p, "poles"), "expected a list");
            for (std::size_t k = 0; k < pj.size(); ++k) {
                std::string pk = sub(sub(p, "poles"), k);
                int order = read_int(require(pj[k], "order", pk), sub(pk, "order"), 1);
                if (static_cast<std::size_t>(order) > poles.size()) poles.resize(order, 0.0);
                bool ex = true;
                poles[order - 1] += read_complex(pj[k], pk, ex);
            }
        }
        if (data[i].contains("poly")) {
            const json& pj = data[i]["poly"];
            if (!pj.is_array()) field_error(sub(p, "poly"), "expected a list of coefficients, constant first");
            for (std::size_t k = 0; k < pj.size(); ++k) {
                bool ex = true;
                polyc.push_back(read_complex(pj[k], sub(sub(p, "poly"), k), ex));
            }
        }
        bool has_pole = std::any_of(poles.begin(), poles.end(), [](cplx c) { return c != cplx(0); });
        if (has_pole && !z0) field_error("z0", "required when a datum has poles");
        any_pole = any_pole || has_pole;
        spec.data.emplace_back(has_pole ? z0->value : cplx(0), std::move(poles), std::move(polyc));
    }
    if (any_pole) spec.z0 = z0;
    return spec;
}

ProblemSpec load_problem(const std::string& path)
{
    std::string text = read_file(path);
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
        throw SpecError(path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": JSON syntax error");
    }
    try {
        return parse_problem(doc);
    } catch (const SpecError& e) {
        throw SpecError(path + ": " + e.what());
    }
}

json problem_to_json(const ProblemSpec& spec)
{
    json doc;
    json terms = json::array();
    for (const auto& [k, v] : spec.polynomial.coeffs())
        terms.push_back({{"dl", k.first}, {"dz", k.second}, {"re", v.real()}, {"im", v.imag()}});
    doc["polynomial"] = {{"N", spec.polynomial.n_lambda()}, {"terms", terms}};
    doc["s1"] = rat(spec.s1);
    doc["s2"] = rat(spec.s2);
    auto moment = [](const MomentFunction& m) {
        json f = json::array();
        for (const auto& g : m.factors()) f.push_back({{"s", to_string(g.s)}, {"exponent", g.exponent}});
        return f;
    };
    if (!spec.m1.factors().empty()) doc["m1"] = moment(spec.m1);
    if (!spec.m2.factors().empty()) doc["m2"] = moment(spec.m2);
    if (spec.z0) {
        if (spec.z0->arg_over_pi)
            doc["z0"] = {{"abs", std::abs(spec.z0->value)}, {"arg_over_pi", rat(*spec.z0->arg_over_pi)}};
        else
            doc["z0"] = {{"re", spec.z0->value.real()}, {"im", spec.z0->value.imag()}};
    }
    json data = json::array();
    for (const auto& d : spec.data) {
        json e = json::object();
        json poles = json::array(), poly = json::array();
        for (std::size_t k = 0; k < d.poles().size(); ++k)
            if (d.poles()[k] != cplx(0))
                poles.push_back({{"order", k + 1}, {"re", d.poles()[k].real()}, {"im", d.poles()[k].imag()}});
        for (const auto& c : d.poly()) poly.push_back({{"re", c.real()}, {"im", c.imag()}});
        e["poles"] = poles;
        e["poly"] = poly;
        data.push_back(e);
    }
    doc["cauchy_data"] = data;
    return doc;
}

std::vector<GridPoint> parse_grid(std::istream& in, const std::string& source)
{
    std::vector<GridPoint> grid;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        std::vector<double> v;
        std::string tok;
        while (ls >> tok) {
            try {
                std::size_t used = 0;
                v.push_back(std::stod(tok, &used));
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw SpecError(source + ":" + std::to_string(lineno) + ": not a number: '" + tok + "'");
            }
        }
        if (v.empty()) continue;
        if (v.size() != 2 && v.size() != 4)
            throw SpecError(source + ":" + std::to_string(lineno) + ": expected '|t| arg_t [re_z im_z]'");
        if (!(v[0] > 0)) throw SpecError(source + ":" + std::to_string(lineno) + ": |t| must be positive");
        GridPoint g{CoveringPoint::polar(v[0], v[1]), v.size() == 4 ? cplx(v[2], v[3]) : cplx(0)};
        grid.push_back(g);
    }
    if (grid.empty()) throw SpecError(source + ": grid is empty");
    return grid;
}

std::vector<GridPoint> load_grid(const std::string& path)
{
    std::ifstream f(path);
    if (!f) throw SpecError(path + ": cannot open grid file");
    return parse_grid(f, path);
}

Geometry problem_geometry(const ProblemSpec& spec)
{
    BranchPoint b = spec.z0 ? *spec.z0 : BranchPoint{1.0, Rational(0)};
    return build_geometry(spec.polynomial, spec.s1, spec.s2, b);
}

// ------------------------------------------------------------- geometry JSON

json angle_to_json(const ExactAngle& a)
{
    json lam = json::array();
    for (const auto& c : a.coeff_arglam()) lam.push_back(rat(c));
    return {{"coeff_pi", rat(a.coeff_pi())},
            {"coeff_argz0", rat(a.coeff_argz0())},
            {"coeff_arglam", lam},
            {"float", a.value()},
            {"text", a.to_string()}};
}

ExactAngle angle_from_json(const json& j, std::shared_ptr<const AngleBasis> basis)
{
    ExactAngle a(basis);
    std::vector<Rational> lam;
    for (const auto& c : require(j, "coeff_arglam", "angle")) lam.push_back(read_rational(c, "angle.coeff_arglam"));
    a.set_coefficients(read_rational(require(j, "coeff_pi", "angle"), "angle.coeff_pi"),
                       read_rational(require(j, "coeff_argz0", "angle"), "angle.coeff_argz0"), std::move(lam));
    return a;
}

namespace {

json optional_rational(const std::optional<Rational>& r) { return r ? json(rat(*r)) : json(nullptr); }

std::optional<Rational> optional_rational(const json& j, const std::string& path)
{
    if (j.is_null()) return std::nullopt;
    return read_rational(j, path);
}

AngleInterval intersect(const AngleInterval& a, const AngleInterval& b)
{
    return {angle_max(a.lo, b.lo), angle_min(a.hi, b.hi)};
}

ExactAngle clamp_length(const AngleInterval& I)
{
    ExactAngle len = I.hi - I.lo;
    if (compare(len, ExactAngle::pi_multiple(0, I.lo.basis())).sign < 0) return ExactAngle::pi_multiple(0, I.lo.basis());
    return len;
}

} // namespace

json geometry_to_json(const Geometry& g)
{
    json out;
    const auto& b = *g.basis;
    json lam = json::array(), lam_pi = json::array();
    for (std::size_t k = 0; k < b.arg_lambda.size(); ++k) {
        lam.push_back(b.arg_lambda[k]);
        lam_pi.push_back(optional_rational(b.arg_lambda_over_pi[k]));
    }
    out["basis"] = {{"arg_z0", b.arg_z0},
                    {"arg_z0_over_pi", optional_rational(b.arg_z0_over_pi)},
                    {"arg_lambda", lam},
                    {"arg_lambda_over_pi", lam_pi}};
    out["verdict"] = g.has_levels() ? "divergent" : "convergent";
    json conv = json::array();
    for (const auto& t : g.convergent)
        conv.push_back({{"q", rat(t.q)}, {"re", t.lambda0.real()}, {"im", t.lambda0.imag()}, {"multiplicity", t.multiplicity}});
    out["convergent_terms"] = conv;
    json levels = json::array();
    if (!g.has_levels()) {
        out["Q"] = nullptr;
        out["levels"] = levels;
        out["J"] = json::array();
        return out;
    }
    out["Q"] = rat(g.Q);
    for (std::size_t i = 0; i < g.levels.size(); ++i) {
        const auto& lv = g.levels[i];
        json roots = json::array(), stokes = json::array(), anti = json::array(), intervals = json::array();
        for (const auto& r : lv.roots) {
            json rj = {{"re", r.lambda0.real()},
                       {"im", r.lambda0.imag()},
                       {"multiplicity", r.multiplicity},
                       {"arg_over_pi", optional_rational(r.arg_over_pi)}};
            rj["generator"] = r.generator ? json(*r.generator) : json(nullptr);
            roots.push_back(rj);
        }
        for (const auto& d : lv.directions) stokes.push_back(angle_to_json(d));
        for (const auto& d : anti_stokes_directions(lv, g.Q)) anti.push_back(angle_to_json(d));
        for (const auto& I : g.index.intervals[i])
            intervals.push_back({{"lo", angle_to_json(I.lo)}, {"hi", angle_to_json(I.hi)}});
        levels.push_back({{"q", rat(lv.q)},
                          {"K", rat(lv.K)},
                          {"roots", roots},
                          {"stokes", stokes},
                          {"anti_stokes", anti},
                          {"intervals", intervals}});
    }
    out["levels"] = levels;
    out["J"] = g.index.J;
    json inter = json::array();
    for (std::size_t i = 0; i + 1 < g.levels.size(); ++i) {
        json table = json::array();
        for (const auto& A : g.index.intervals[i]) {
            json row = json::array();
            for (const auto& B : g.index.intervals[i + 1]) row.push_back(angle_to_json(clamp_length(intersect(A, B))));
            table.push_back(row);
        }
        inter.push_back({{"levels", {i, i + 1}}, {"lengths", table}});
    }
    out["intersections"] = inter;
    return out;
}

Geometry geometry_from_json(const json& j)
{
    Geometry g;
    auto basis = std::make_shared<AngleBasis>();
    const json& bj = require(j, "basis", "");
    basis->arg_z0 = require(bj, "arg_z0", "basis").get<double>();
    basis->arg_z0_over_pi = optional_rational(require(bj, "arg_z0_over_pi", "basis"), "basis.arg_z0_over_pi");
    const json& lam = require(bj, "arg_lambda", "basis");
    const json& lam_pi = require(bj, "arg_lambda_over_pi", "basis");
    for (std::size_t k = 0; k < lam.size(); ++k) {
        basis->arg_lambda.push_back(lam[k].get<double>());
        basis->arg_lambda_over_pi.push_back(optional_rational(lam_pi.at(k), "basis.arg_lambda_over_pi"));
    }
    g.basis = basis;
    for (const auto& t : require(j, "convergent_terms", "")) {
        LeadingTerm lt;
        lt.q = read_rational(t.at("q"), "convergent_terms.q");
        lt.lambda0 = {t.at("re").get<double>(), t.at("im").get<double>()};
        lt.multiplicity = t.at("multiplicity").get<int>();
        g.convergent.push_back(lt);
    }
    const json& levels = require(j, "levels", "");
    if (levels.empty()) return g;
    g.Q = read_rational(require(j, "Q", ""), "Q");
    g.index.Q = g.Q;
    g.index.basis = basis;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const json& lj = levels[i];
        std::string p = sub("levels", i);
        LevelData lv;
        lv.q = read_rational(require(lj, "q", p), sub(p, "q"));
        lv.K = read_rational(require(lj, "K", p), sub(p, "K"));
        for (const auto& r : require(lj, "roots", p)) {
            LevelRoot root;
            root.lambda0 = {r.at("re").get<double>(), r.at("im").get<double>()};
            root.multiplicity = r.at("multiplicity").get<int>();
            root.arg_over_pi = optional_rational(r.at("arg_over_pi"), sub(p, "roots.arg_over_pi"));
            if (!r.at("generator").is_null()) root.generator = r.at("generator").get<std::size_t>();
            lv.roots.push_back(root);
        }
        for (const auto& d : require(lj, "stokes", p)) lv.directions.push_back(angle_from_json(d, basis));
        std::vector<AngleInterval> iv;
        for (const auto& I : require(lj, "intervals", p))
            iv.push_back({angle_from_json(I.at("lo"), basis), angle_from_json(I.at("hi"), basis)});
        g.index.intervals.push_back(std::move(iv));
        g.index.K.push_back(lv.K);
        g.levels.push_back(std::move(lv));
    }
    g.index.J = require(j, "J", "").get<std::vector<std::vector<int>>>();
    return g;
}

namespace {

bool same_coefficients(const ExactAngle& x, const ExactAngle& y)
{
    return x.coeff_pi() == y.coeff_pi() && x.coeff_argz0() == y.coeff_argz0() && x.coeff_arglam() == y.coeff_arglam();
}

} // namespace

bool same_geometry(const Geometry& a, const Geometry& b)
{
    if (a.levels.size() != b.levels.size() || a.convergent.size() != b.convergent.size()) return false;
    if (a.basis->arg_z0_over_pi != b.basis->arg_z0_over_pi || a.basis->arg_lambda != b.basis->arg_lambda) return false;
    for (std::size_t i = 0; i < a.convergent.size(); ++i)
        if (a.convergent[i].q != b.convergent[i].q || std::abs(a.convergent[i].lambda0 - b.convergent[i].lambda0) > 0)
            return false;
    if (a.levels.empty()) return true;
    if (a.Q != b.Q || a.index.J != b.index.J) return false;
    for (std::size_t i = 0; i < a.levels.size(); ++i) {
        const auto &x = a.levels[i], &y = b.levels[i];
        if (x.q != y.q || x.K != y.K || x.roots.size() != y.roots.size() || x.directions.size() != y.directions.size())
            return false;
        for (std::size_t r = 0; r < x.roots.size(); ++r)
            if (x.roots[r].lambda0 != y.roots[r].lambda0 || x.roots[r].multiplicity != y.roots[r].multiplicity ||
                x.roots[r].arg_over_pi != y.roots[r].arg_over_pi || x.roots[r].generator != y.roots[r].generator)
                return false;
        for (std::size_t k = 0; k < x.directions.size(); ++k)
            if (!same_coefficients(x.directions[k], y.directions[k])) return false;
        const auto &ix = a.index.intervals[i], &iy = b.index.intervals[i];
        if (ix.size() != iy.size()) return false;
        for (std::size_t k = 0; k < ix.size(); ++k)
            if (!same_coefficients(ix[k].lo, iy[k].lo) || !same_coefficients(ix[k].hi, iy[k].hi)) return false;
    }
    return true;
}

// ------------------------------------------------------------ numeric model

NumericModel numeric_model(const ProblemSpec& spec)
{
    NumericModel model;
    const auto& c = spec.polynomial.coeffs();
    const int N = spec.polynomial.n_lambda();
    auto lead = c.find({N, 0});
    if (lead == c.end() || c.size() < 2)
        throw SpecError("numerics need a lambda^N term with constant coefficient and at least one zeta term");

    // λ^p = λ0 ζ^q
    if (c.size() == 2) {
        auto other = std::next(c.begin()) == lead ? c.begin() : std::next(c.begin());
        if (other->first.first == 0 && other->first.second > 0) {
            SimpleEquation eq;
            eq.p = N;
            eq.q = other->first.second;
            eq.lambda0 = -other->second / lead->second;
            eq.m1 = spec.m1;
            eq.m2 = spec.m2;
            eq.datum = spec.data[0];
            for (int j = 1; j < N; ++j)
                if (!spec.data[j].is_entire() || !spec.data[j].poly().empty())
                    throw SpecError("cauchy_data[" + std::to_string(j) +
                                    "]: only the first datum may be nonzero for d_t^p u = c d_z^q u");
            eq.validate();
            model.simple = eq;
            model.K = {eq.convergent() ? Rational(0) : eq.K()};
            return model;
        }
    }

    // Π (λ - λ_i ζ^{q_i}) with distinct integer-order factors
    auto terms = newton_polygon_leading_terms(spec.polynomial);
    std::vector<std::pair<cplx, int>> factors;
    for (const auto& t : terms) {
        if (t.nu() != 1 || t.multiplicity != 1 || t.q < 1)
            throw SpecError("numerics need P to factor into distinct monomial factors lambda - c zeta^q, q >= 1");
        factors.emplace_back(t.lambda0, static_cast<int>(t.mu()));
    }
    if (static_cast<int>(factors.size()) != N)
        throw SpecError("numerics need N distinct monomial factors, found " + std::to_string(factors.size()));
    auto P = CharPolynomial::product_of_monomials(factors);
    double scale = std::abs(lead->second), dist = 0.0;
    for (const auto& [k, v] : c) {
        auto it = P.coeffs().find(k);
        dist = std::max(dist, std::abs(v / lead->second - (it == P.coeffs().end() ? cplx(0) : it->second)));
    }
    for (const auto& [k, v] : P.coeffs())
        if (!c.count(k)) dist = std::max(dist, std::abs(v));
    if (dist > 1e-10 * std::max(1.0, scale))
        throw SpecError("P is not a product of monomial factors lambda - c zeta^q");
    if (!(spec.m2 == MomentFunction::gamma(1)))
        throw SpecError("product equations need m2 = Gamma_1 for numerics");
    ProductEquation eq;
    for (const auto& [l, q] : factors) eq.factors.push_back({l, q});
    eq.m1 = spec.m1;
    eq.data = spec.data;
    model.components = decompose(eq);
    for (std::size_t i = 0; i < eq.factors.size(); ++i) {
        auto fe = eq.factor_equation(i, model.components[i]);
        model.K.push_back(fe.convergent() ? Rational(0) : fe.K());
    }
    model.product = std::move(eq);
    return model;
}

double parse_direction(const std::string& text, std::shared_ptr<const AngleBasis> basis)
{
    try {
        std::size_t used = 0;
        double d = std::stod(text, &used);
        if (used == text.size() && std::isfinite(d)) return d;
    } catch (const std::exception&) {
    }
    try {
        return parse_angle(text, basis).value();
    } catch (const std::exception& e) {
        throw SpecError("direction '" + text + "': " + e.what());
    }
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& f)
{
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next++) < n;) f(i);
        });
    for (auto& th : pool) th.join();
}

// ----------------------------------------------------------------- commands

json cmd_analyze(const ProblemSpec& spec)
{
    Geometry g = problem_geometry(spec);
    json out = geometry_to_json(g);
    out["entire_data"] = !spec.z0.has_value();
    if (!spec.z0) {
        // no branch point: nothing is singular
        for (auto& lv : out["levels"]) {
            lv["stokes"] = json::array();
            lv["anti_stokes"] = json::array();
        }
    }
    return out;
}

namespace {

std::string level_name(const LevelData& lv) { return "K = " + rat(lv.K); }

// Refuses directions on the Stokes lines of the geometry (arg z0 frame).
void check_directions(const ProblemSpec& spec, const NumericModel& model, const std::vector<double>& d)
{
    if (!spec.z0) return;
    Geometry g = problem_geometry(spec);
    if (!g.has_levels()) return;
    const double period = 2 * pi * to_double(g.Q);
    auto check = [&](double x, const LevelData& lv) {
        for (const auto& s : lv.directions) {
            double r = std::remainder(x - s.value(), period);
            if (std::abs(r) < 1e-9)
                throw SingularDirection("direction " + fmt(x) + " lies on the Stokes direction " + s.to_string() +
                                            " = " + fmt(s.value()) + " of level " + level_name(lv),
                                        s.value());
        }
    };
    if (model.simple) {
        for (const auto& lv : g.levels) check(d[0], lv);
        return;
    }
    for (std::size_t i = 0; i < model.product->factors.size(); ++i)
        for (const auto& lv : g.levels)
            if (lv.q == Rational(model.product->factors[i].q)) check(d[i], lv);
}

} // namespace

CommandOutput cmd_sum(const ProblemSpec& spec, const std::vector<double>& directions, const RunConfig& cfg)
{
    if (cfg.grid.empty()) throw SpecError("grid is empty");
    if (!(cfg.tol > 0)) throw SpecError("--tol must be positive");
    NumericModel model = numeric_model(spec);
    std::vector<double> d = directions;
    std::size_t nf = model.simple ? 1 : model.product->factors.size();
    if (d.size() == 1) d.assign(nf, d[0]);
    if (d.size() != nf)
        throw SpecError("expected 1 or " + std::to_string(nf) + " directions, got " + std::to_string(directions.size()));
    check_directions(spec, model, d);

    struct Row {
        cplx u{std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
        double err = std::numeric_limits<double>::quiet_NaN();
        std::string error;
    };
    std::vector<Row> rows(cfg.grid.size());
    parallel_for(rows.size(), cfg.threads, [&](std::size_t i) {
        const auto& g = cfg.grid[i];
        try {
            if (model.simple) {
                auto r = directional_sum(*model.simple, d[0], g.t, g.z, cfg.tol);
                rows[i].u = r.value;
                rows[i].err = r.error;
            } else {
                auto r = multisum(*model.product, model.components, d, g.t, g.z, cfg.tol);
                rows[i].u = r.value;
                rows[i].err = r.error;
            }
        } catch (const std::exception& e) {
            rows[i].error = e.what();
        }
    });

    CommandOutput out;
    std::string dir;
    for (std::size_t k = 0; k < d.size(); ++k) dir += (k ? ";" : "") + fmt(d[k]);
    std::ostringstream csv;
    csv << "re_t,im_t,arg_t,re_u,im_u,err,direction\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& g = cfg.grid[i];
        cplx t = g.t.value();
        csv << fmt(t.real()) << ',' << fmt(t.imag()) << ',' << fmt(g.t.arg) << ',' << fmt(rows[i].u.real()) << ','
            << fmt(rows[i].u.imag()) << ',' << fmt(rows[i].err) << ',' << dir << '\n';
        if (!rows[i].error.empty()) {
            out.diagnostics.push_back("grid point " + std::to_string(i + 1) + ": " + rows[i].error);
            out.code = ExitCode::numerical_failure;
        }
    }
    out.text = csv.str();
    return out;
}

CommandOutput cmd_jump(const ProblemSpec& spec, int level, int index, const RunConfig& cfg)
{
    if (cfg.grid.empty()) throw SpecError("grid is empty");
    Geometry g = problem_geometry(spec);
    if (!g.has_levels()) throw SpecError("the equation is convergent: there are no Stokes lines");
    if (level < 1 || level > static_cast<int>(g.levels.size()))
        throw SpecError("--level must lie in 1.." + std::to_string(g.levels.size()));
    const auto& lv = g.levels[level - 1];
    if (index < 1 || index > static_cast<int>(lv.directions.size()))
        throw SpecError("--index must lie in 1.." + std::to_string(lv.directions.size()) + " for level " +
                        level_name(lv));
    NumericModel model = numeric_model(spec);
    if (model.product && lv.q.denominator() != 1) throw SpecError("level with fractional pole order in a product");

    std::vector<JumpReport> reports(cfg.grid.size());
    std::vector<std::exception_ptr> spec_errors(cfg.grid.size());
    parallel_for(reports.size(), cfg.threads, [&](std::size_t i) {
        std::vector<GridPoint> one{cfg.grid[i]};
        try {
            reports[i] = model.simple ? jump_report(*model.simple, index, one, cfg.tol).front()
                                      : jump_report(*model.product, model.components,
                                                    static_cast<int>(lv.q.numerator()), index, one, cfg.tol)
                                            .front();
        } catch (const SpecError&) {
            spec_errors[i] = std::current_exception();
        } catch (const std::exception& e) {
            reports[i].t = one[0].t;
            reports[i].z = one[0].z;
            reports[i].error = e.what();
        }
    });

    for (const auto& e : spec_errors)
        if (e) std::rethrow_exception(e);

    CommandOutput out;
    std::ostringstream csv;
    csv << "re_t,im_t,re_z,im_z,level_K,direction,re_lateral,im_lateral,re_residue,im_residue,discrepancy\n";
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& r = reports[i];
        cplx t = r.t.value();
        bool bad = !r.error.empty();
        csv << fmt(t.real()) << ',' << fmt(t.imag()) << ',' << fmt(r.z.real()) << ',' << fmt(r.z.imag()) << ','
            << rat(lv.K) << ',' << fmt(bad ? nan : r.direction) << ',' << fmt(bad ? nan : r.lateral_value.real()) << ','
            << fmt(bad ? nan : r.lateral_value.imag()) << ',' << fmt(bad ? nan : r.residue_value.real()) << ','
            << fmt(bad ? nan : r.residue_value.imag()) << ',' << fmt(bad ? nan : r.abs_discrepancy) << '\n';
        if (bad) {
            out.diagnostics.push_back("grid point " + std::to_string(i + 1) + ": " + r.error);
            out.code = ExitCode::numerical_failure;
        }
    }
    out.text = csv.str();
    return out;
}

json cmd_family(const ProblemSpec& spec, const RunConfig& cfg)
{
    Geometry g = problem_geometry(spec);
    json out;
    if (!g.has_levels()) {
        out["verdict"] = "convergent";
        out["sectors"] = json::array();
        return out;
    }
    if (!spec.z0) {
        out["verdict"] = "entire data: no Stokes lines";
        out["sectors"] = json::array();
        return out;
    }
    auto sectors = maximal_family_sectors(g.index, cfg.eps_over_pi, cfg.radius);
    out["verdict"] = "divergent";
    out["Q"] = rat(g.Q);
    out["J_size"] = g.index.J.size();
    out["max_eps"] = angle_to_json(max_admissible_eps(g.index));
    json arr = json::array();
    for (const auto& s : sectors) {
        json dirs = json::array();
        for (const auto& d : representative_multidirection(g.index, g.levels, s.l)) dirs.push_back(angle_to_json(d));
        arr.push_back({{"l", s.l},
                       {"bisector", angle_to_json(s.bisector)},
                       {"opening", angle_to_json(s.opening)},
                       {"radius", s.radius},
                       {"multidirection", dirs}});
    }
    out["sectors"] = arr;
    return out;
}

// ---------------------------------------------------------------------- CLI

namespace {

void emit(const std::string& text, const std::string& path, std::ostream& out)
{
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw SpecError(path + ": cannot write output");
    f << text;
}

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : s) {
        if (ch == ',') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    parts.push_back(cur);
    return parts;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Moment PDE analysis: geometry, directional sums and Stokes jumps", "mpde"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::string spec_path, grid_path, direction_text, eps_text;
    int level = 1, index = 1;
    app.add_option("--tol", cfg.tol, "absolute tolerance")->check(CLI::PositiveNumber);
    app.add_option("--out", cfg.out, "output file (default stdout)");
    app.add_option("--seed", cfg.seed, "random seed recorded in JSON reports");
    app.add_option("--threads", cfg.threads, "worker threads (0: all cores)");

    auto* analyze = app.add_subcommand("analyze", "levels, Stokes and anti-Stokes directions, J");
    analyze->add_option("spec", spec_path)->required();
    auto* sum = app.add_subcommand("sum", "directional sums on a (t, z) grid, CSV");
    sum->add_option("spec", spec_path)->required();
    sum->add_option("--direction", direction_text, "float or symbolic, e.g. pi/2; comma list per factor")->required();
    sum->add_option("--grid", grid_path, "grid file")->required();
    auto* jump = app.add_subcommand("jump", "lateral and residue jumps at a Stokes direction, CSV");
    jump->add_option("spec", spec_path)->required();
    jump->add_option("--level", level, "level, 1-based with K descending")->required();
    jump->add_option("--index", index, "Stokes direction, 1-based")->required();
    jump->add_option("--grid", grid_path, "grid file")->required();
    auto* family = app.add_subcommand("family", "sectors of the maximal family of solutions, JSON");
    family->add_option("spec", spec_path)->required();
    family->add_option("--eps", eps_text, "sector shrink as a rational multiple of pi");
    family->add_option("--radius", cfg.radius, "sector radius")->check(CLI::PositiveNumber);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : static_cast<int>(ExitCode::spec_error);
    }

    try {
        ProblemSpec spec = load_problem(spec_path);
        if (*analyze) {
            json r = cmd_analyze(spec);
            r["seed"] = cfg.seed;
            emit(r.dump(2) + "\n", cfg.out, out);
        } else if (*sum) {
            cfg.grid = load_grid(grid_path);
            auto basis = problem_geometry(spec).basis;
            std::vector<double> d;
            for (const auto& part : split_list(direction_text)) d.push_back(parse_direction(part, basis));
            auto r = cmd_sum(spec, d, cfg);
            emit(r.text, cfg.out, out);
            for (const auto& m : r.diagnostics) err << "warning: " << m << "\n";
            return static_cast<int>(r.code);
        } else if (*jump) {
            cfg.grid = load_grid(grid_path);
            auto r = cmd_jump(spec, level, index, cfg);
            emit(r.text, cfg.out, out);
            for (const auto& m : r.diagnostics) err << "warning: " << m << "\n";
            return static_cast<int>(r.code);
        } else if (*family) {
            if (!eps_text.empty()) {
                try {
                    cfg.eps_over_pi = parse_rational(eps_text);
                } catch (const std::exception&) {
                    throw SpecError("--eps: expected a rational such as 1/12");
                }
            }
            json r = cmd_family(spec, cfg);
            r["seed"] = cfg.seed;
            emit(r.dump(2) + "\n", cfg.out, out);
        }
    } catch (const SingularDirection& e) {
        err << "refused: " << e.what() << "\n";
        return static_cast<int>(ExitCode::refusal);
    } catch (const EpsTooLarge& e) {
        err << "error: " << e.what() << "\n";
        if (e.max_admissible > 0) {
            auto num = static_cast<std::int64_t>(std::floor(e.max_admissible / pi * 0.5 * 48));
            if (num > 0) err << "suggestion: --eps " << to_string(Rational(num, 48)) << "\n";
        }
        return static_cast<int>(ExitCode::spec_error);
    } catch (const SpecError& e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::spec_error);
    } catch (const NonRationalAction& e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::spec_error);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::spec_error);
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << "\n";
        return static_cast<int>(ExitCode::numerical_failure);
    }
    return 0;
}

} // namespace mpde
