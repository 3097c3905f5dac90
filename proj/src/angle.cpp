#include "mpde/angle.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mpde {

std::shared_ptr<AngleBasis> AngleBasis::for_branch_point(cplx z0, std::optional<Rational> arg_over_pi)
{
    auto b = std::make_shared<AngleBasis>();
    if (arg_over_pi) {
        b->arg_z0 = to_double(*arg_over_pi) * pi;
        b->arg_z0_over_pi = arg_over_pi;
    } else {
        b->arg_z0 = std::arg(z0);
        Rational r;
        if (rationalize(b->arg_z0 / pi, 48, 1e-13, r)) b->arg_z0_over_pi = r;
    }
    return b;
}

std::size_t AngleBasis::add_lambda_generator(double arg, std::optional<Rational> over_pi)
{
    arg_lambda.push_back(arg);
    arg_lambda_over_pi.push_back(over_pi);
    return arg_lambda.size() - 1;
}

ExactAngle ExactAngle::pi_multiple(const Rational& r, std::shared_ptr<const AngleBasis> basis)
{
    ExactAngle a(std::move(basis));
    a.c_pi_ = r;
    return a;
}

ExactAngle ExactAngle::arg_z0(std::shared_ptr<const AngleBasis> basis)
{
    ExactAngle a(std::move(basis));
    a.c_z0_ = 1;
    return a;
}

ExactAngle ExactAngle::arg_lambda(std::size_t k, std::shared_ptr<const AngleBasis> basis)
{
    if (!basis || k >= basis->arg_lambda.size()) throw std::out_of_range("unknown arg-lambda generator");
    ExactAngle a(std::move(basis));
    a.c_lam_.assign(k + 1, Rational(0));
    a.c_lam_[k] = 1;
    return a;
}

void ExactAngle::set_coefficients(const Rational& p, const Rational& z0, std::vector<Rational> lam)
{
    c_pi_ = p;
    c_z0_ = z0;
    c_lam_ = std::move(lam);
}

double ExactAngle::value() const
{
    if (auto e = exact_over_pi()) return to_double(*e) * pi;
    double v = to_double(c_pi_) * pi;
    if (c_z0_ != 0) v += to_double(c_z0_) * basis_->arg_z0;
    for (std::size_t k = 0; k < c_lam_.size(); ++k)
        if (c_lam_[k] != 0) v += to_double(c_lam_[k]) * basis_->arg_lambda[k];
    return v;
}

std::optional<Rational> ExactAngle::exact_over_pi() const
{
    Rational r = c_pi_;
    if (c_z0_ != 0) {
        if (!basis_ || !basis_->arg_z0_over_pi) return std::nullopt;
        r += c_z0_ * *basis_->arg_z0_over_pi;
    }
    for (std::size_t k = 0; k < c_lam_.size(); ++k) {
        if (c_lam_[k] == 0) continue;
        if (!basis_->arg_lambda_over_pi[k]) return std::nullopt;
        r += c_lam_[k] * *basis_->arg_lambda_over_pi[k];
    }
    return r;
}

bool ExactAngle::is_zero_symbolically() const
{
    if (c_pi_ != 0 || c_z0_ != 0) return false;
    for (const auto& c : c_lam_)
        if (c != 0) return false;
    return true;
}

namespace {

const std::shared_ptr<const AngleBasis>& pick_basis(const ExactAngle& a, const ExactAngle& b)
{
    if (a.basis() && b.basis() && a.basis() != b.basis()) throw std::invalid_argument("angles from different bases");
    return a.basis() ? a.basis() : b.basis();
}

} // namespace

ExactAngle ExactAngle::operator+(const ExactAngle& o) const
{
    ExactAngle r(pick_basis(*this, o));
    r.c_pi_ = c_pi_ + o.c_pi_;
    r.c_z0_ = c_z0_ + o.c_z0_;
    r.c_lam_.assign(std::max(c_lam_.size(), o.c_lam_.size()), Rational(0));
    for (std::size_t k = 0; k < c_lam_.size(); ++k) r.c_lam_[k] += c_lam_[k];
    for (std::size_t k = 0; k < o.c_lam_.size(); ++k) r.c_lam_[k] += o.c_lam_[k];
    return r;
}

ExactAngle ExactAngle::operator-() const { return *this * Rational(-1); }

ExactAngle ExactAngle::operator-(const ExactAngle& o) const { return *this + (-o); }

ExactAngle ExactAngle::operator*(const Rational& s) const
{
    ExactAngle r = *this;
    r.c_pi_ *= s;
    r.c_z0_ *= s;
    for (auto& c : r.c_lam_) c *= s;
    return r;
}

bool ExactAngle::symbolically_equal(const ExactAngle& o) const { return (*this - o).is_zero_symbolically(); }

std::string ExactAngle::to_string() const
{
    std::ostringstream os;
    bool first = true;
    auto term = [&](const Rational& c, const std::string& g) {
        if (c == 0) return;
        Rational a = c;
        if (!first) os << (a < 0 ? " - " : " + ");
        else if (a < 0) os << "-";
        if (a < 0) a = -a;
        if (a != 1) os << mpde::to_string(a) << "*";
        os << g;
        first = false;
    };
    term(c_z0_, "argz0");
    for (std::size_t k = 0; k < c_lam_.size(); ++k) term(c_lam_[k], "arglam" + std::to_string(k));
    term(c_pi_, "pi");
    if (first) os << "0";
    return os.str();
}

AngleOrder compare(const ExactAngle& a, const ExactAngle& b)
{
    ExactAngle d = a - b;
    if (d.is_zero_symbolically()) return {0, true};
    if (auto e = d.exact_over_pi()) return {*e < 0 ? -1 : (*e > 0 ? 1 : 0), true};
    double v = d.value();
    if (std::abs(v) <= 1e-12) return {0, false};
    return {v < 0 ? -1 : 1, false};
}

const ExactAngle& angle_max(const ExactAngle& a, const ExactAngle& b) { return compare(a, b).sign >= 0 ? a : b; }

const ExactAngle& angle_min(const ExactAngle& a, const ExactAngle& b) { return compare(a, b).sign <= 0 ? a : b; }

std::int64_t angle_floor_div(const ExactAngle& a, const ExactAngle& period)
{
    auto ea = a.exact_over_pi();
    auto ep = period.exact_over_pi();
    if (ea && ep) return floor_rat(*ea / *ep);
    double q = a.value() / period.value();
    double f = std::floor(q);
    // float ties at a period boundary resolve to the lower representative
    if (q - f > 1.0 - 1e-12) f += 1.0;
    return static_cast<std::int64_t>(f);
}

ExactAngle parse_angle(const std::string& text, std::shared_ptr<const AngleBasis> basis)
{
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw std::invalid_argument("empty angle");
    ExactAngle out(basis);
    std::size_t i = 0;
    bool any_generator = false;
    while (i < s.size()) {
        int sign = 1;
        while (i < s.size() && (s[i] == '+' || s[i] == '-')) {
            if (s[i] == '-') sign = -sign;
            ++i;
        }
        std::size_t start = i;
        while (i < s.size() && s[i] != '+' && s[i] != '-') ++i;
        std::string tok = s.substr(start, i - start);
        if (tok.empty()) throw std::invalid_argument("malformed angle '" + text + "'");
        // tok is [coef*]generator[/den] or coef
        Rational coef(1);
        std::string gen = tok;
        auto star = tok.find('*');
        if (star != std::string::npos) {
            coef = parse_rational(tok.substr(0, star));
            gen = tok.substr(star + 1);
        }
        auto slash = gen.find('/');
        if (slash != std::string::npos) {
            coef /= parse_rational(gen.substr(slash + 1));
            gen = gen.substr(0, slash);
        }
        coef *= Rational(sign);
        ExactAngle termv(basis);
        if (gen == "pi")
            termv = ExactAngle::pi_multiple(coef, basis);
        else if (gen == "argz0")
            termv = ExactAngle::arg_z0(basis) * coef;
        else if (gen.rfind("arglam", 0) == 0)
            termv = ExactAngle::arg_lambda(std::stoul(gen.substr(6)), basis) * coef;
        else
            throw std::invalid_argument("unknown angle generator '" + gen + "' in '" + text + "'");
        any_generator = true;
        out = out + termv;
    }
    if (!any_generator) throw std::invalid_argument("angle '" + text + "' has no generator");
    return out;
}

} // namespace mpde
