#pragma once

#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include <gmpxx.h>
#include "json.hpp"

namespace qcat {

using Exponent = std::uint64_t;
using BigInt = mpz_class;
using Rational = mpq_class;

/// Sparse univariate polynomial with arbitrary-precision integer coefficients.
///
/// Terms are kept in a map from exponent to coefficient; zero coefficients are
/// never stored, so the zero polynomial is the empty map.
class WeightPoly {
  public:
    using Terms = std::map<Exponent, BigInt>;

    WeightPoly() = default;
    WeightPoly(std::initializer_list<std::pair<Exponent, long>> terms);

    static WeightPoly constant(const BigInt& c);
    static WeightPoly monomial(Exponent e, const BigInt& c = 1);

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    // Degree and lowest exponent; empty for the zero polynomial.
    std::optional<Exponent> degree() const;
    std::optional<Exponent> min_exponent() const;

    // Coefficient of x^e (zero when absent).
    BigInt coeff(Exponent e) const;

    // Adds c·x^e, pruning the term if it cancels.
    void add_term(Exponent e, const BigInt& c);

    WeightPoly& operator+=(const WeightPoly& other);
    WeightPoly& operator-=(const WeightPoly& other);

    friend bool operator==(const WeightPoly& a, const WeightPoly& b) { return a.terms_ == b.terms_; }

    std::string to_string() const;

  private:
    Terms terms_;
};

WeightPoly add(const WeightPoly& a, const WeightPoly& b);
WeightPoly negate(const WeightPoly& a);
WeightPoly mul(const WeightPoly& a, const WeightPoly& b);

inline WeightPoly operator+(const WeightPoly& a, const WeightPoly& b) { return add(a, b); }
inline WeightPoly operator-(const WeightPoly& a, const WeightPoly& b) { return add(a, negate(b)); }
inline WeightPoly operator*(const WeightPoly& a, const WeightPoly& b) { return mul(a, b); }

// Multiplies by x^d.
WeightPoly shift(const WeightPoly& a, Exponent d);

// x ↦ x².
WeightPoly substitute_square(const WeightPoly& a);

// Maps exponent e to degree_bound − e. Throws DegreeBoundTooSmall when
// degree_bound < deg(a).
WeightPoly reverse(const WeightPoly& a, Exponent degree_bound);

// Evaluation in ascending exponent order, so results are reproducible bit for
// bit across platforms with IEEE doubles.
double eval_f64(const WeightPoly& a, double x);

// Exact evaluation at num/den; the result is canonicalized. Throws
// ZeroDenominator when den == 0.
Rational eval_exact(const WeightPoly& a, const BigInt& num, const BigInt& den);
Rational eval_exact(const WeightPoly& a, const Rational& x);

// {"terms": [[exponent, "coefficient"], ...]} sorted by exponent.
nlohmann::json to_json(const WeightPoly& a);
WeightPoly poly_from_json(const nlohmann::json& j);

}  // namespace qcat
