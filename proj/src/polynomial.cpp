#include "qcat/polynomial.hpp"

#include <sstream>
#include <vector>

#include "qcat/errors.hpp"

namespace qcat {

WeightPoly::WeightPoly(std::initializer_list<std::pair<Exponent, long>> terms)
{
    for (const auto& [e, c] : terms) add_term(e, BigInt(c));
}

WeightPoly WeightPoly::constant(const BigInt& c) { return monomial(0, c); }

WeightPoly WeightPoly::monomial(Exponent e, const BigInt& c)
{
    WeightPoly p;
    p.add_term(e, c);
    return p;
}

std::optional<Exponent> WeightPoly::degree() const
{
    if (terms_.empty()) return std::nullopt;
    return terms_.rbegin()->first;
}

std::optional<Exponent> WeightPoly::min_exponent() const
{
    if (terms_.empty()) return std::nullopt;
    return terms_.begin()->first;
}

BigInt WeightPoly::coeff(Exponent e) const
{
    auto it = terms_.find(e);
    return it == terms_.end() ? BigInt(0) : it->second;
}

void WeightPoly::add_term(Exponent e, const BigInt& c)
{
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (inserted) return;
    it->second += c;
    if (it->second == 0) terms_.erase(it);
}

WeightPoly& WeightPoly::operator+=(const WeightPoly& other)
{
    for (const auto& [e, c] : other.terms_) add_term(e, c);
    return *this;
}

WeightPoly& WeightPoly::operator-=(const WeightPoly& other)
{
    for (const auto& [e, c] : other.terms_) add_term(e, BigInt(-c));
    return *this;
}

std::string WeightPoly::to_string() const
{
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        BigInt mag = abs(c);
        if (first) {
            if (c < 0) os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        first = false;
        if (e == 0) {
            os << mag;
            continue;
        }
        if (mag != 1) os << mag << "*";
        os << "x";
        if (e != 1) os << "^" << e;
    }
    return os.str();
}

WeightPoly add(const WeightPoly& a, const WeightPoly& b)
{
    WeightPoly out = a;
    out += b;
    return out;
}

WeightPoly negate(const WeightPoly& a)
{
    WeightPoly out;
    for (const auto& [e, c] : a.terms()) out.add_term(e, BigInt(-c));
    return out;
}

WeightPoly mul(const WeightPoly& a, const WeightPoly& b)
{
    if (a.is_zero() || b.is_zero()) return {};

    const Exponent lo = *a.min_exponent() + *b.min_exponent();
    const Exponent hi = *a.degree() + *b.degree();
    const std::size_t span = hi - lo + 1;

    WeightPoly out;
    // Dense accumulation when the exponent range is comparable to the number
    // of products; otherwise accumulate straight into the map.
    if (span <= 4 * a.term_count() * b.term_count() + 64) {
        std::vector<BigInt> acc(span);
        for (const auto& [ea, ca] : a.terms()) {
            for (const auto& [eb, cb] : b.terms()) {
                mpz_addmul(acc[ea + eb - lo].get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
            }
        }
        for (std::size_t i = 0; i < span; ++i) out.add_term(lo + i, acc[i]);
    } else {
        for (const auto& [ea, ca] : a.terms()) {
            for (const auto& [eb, cb] : b.terms()) out.add_term(ea + eb, BigInt(ca * cb));
        }
    }
    return out;
}

WeightPoly shift(const WeightPoly& a, Exponent d)
{
    WeightPoly out;
    for (const auto& [e, c] : a.terms()) out.add_term(e + d, c);
    return out;
}

WeightPoly substitute_square(const WeightPoly& a)
{
    WeightPoly out;
    for (const auto& [e, c] : a.terms()) out.add_term(2 * e, c);
    return out;
}

WeightPoly reverse(const WeightPoly& a, Exponent degree_bound)
{
    if (auto d = a.degree(); d && *d > degree_bound) {
        throw DegreeBoundTooSmall("reverse: degree bound " + std::to_string(degree_bound) +
                                  " is below the degree " + std::to_string(*d));
    }
    WeightPoly out;
    for (const auto& [e, c] : a.terms()) out.add_term(degree_bound - e, c);
    return out;
}

double eval_f64(const WeightPoly& a, double x)
{
    // Ascending walk: keep x^e incrementally and add terms low to high.
    double sum = 0.0;
    double power = 1.0;
    Exponent at = 0;
    for (const auto& [e, c] : a.terms()) {
        for (; at < e; ++at) power *= x;
        sum += c.get_d() * power;
    }
    return sum;
}

Rational eval_exact(const WeightPoly& a, const BigInt& num, const BigInt& den)
{
    if (den == 0) throw ZeroDenominator("eval_exact: zero denominator");
    Rational x(num, den);
    x.canonicalize();
    return eval_exact(a, x);
}

Rational eval_exact(const WeightPoly& a, const Rational& x)
{
    if (a.is_zero()) return Rational(0);
    // Horner from the top exponent down, skipping gaps with powers of x.
    Rational acc(0);
    Exponent prev = *a.degree();
    for (auto it = a.terms().rbegin(); it != a.terms().rend(); ++it) {
        const auto& [e, c] = *it;
        for (Exponent i = e; i < prev; ++i) acc *= x;
        acc += Rational(c);
        prev = e;
    }
    for (Exponent i = 0; i < prev; ++i) acc *= x;
    acc.canonicalize();
    return acc;
}

nlohmann::json to_json(const WeightPoly& a)
{
    auto terms = nlohmann::json::array();
    for (const auto& [e, c] : a.terms()) terms.push_back({e, c.get_str()});
    return {{"terms", terms}};
}

WeightPoly poly_from_json(const nlohmann::json& j)
{
    WeightPoly out;
    for (const auto& t : j.at("terms")) {
        out.add_term(t.at(0).get<Exponent>(), BigInt(t.at(1).get<std::string>(), 10));
    }
    return out;
}

}  // namespace qcat
