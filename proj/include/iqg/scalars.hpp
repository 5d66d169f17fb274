#pragma once

// Exact coefficient arithmetic over Q(q).
//
// LaurentPoly  -- finite Laurent series in q with rational coefficients.
// RatScalar    -- element of Q(q), kept in a canonical reduced form.
// QuadExt      -- a + b*t with t^2 = d, a single quadratic extension of Q(q).

#include <gmpxx.h>

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace iqg {

namespace detail {

/// Dense polynomial over Z, coefficient i multiplies q^i. No trailing zeros.
struct ZPoly {
    std::vector<mpz_class> c;

    bool is_zero() const { return c.empty(); }
    int degree() const { return static_cast<int>(c.size()) - 1; }
    const mpz_class& lead() const { return c.back(); }
    void trim();
    bool operator==(const ZPoly& o) const { return c == o.c; }
};

ZPoly add(const ZPoly& a, const ZPoly& b);
ZPoly sub(const ZPoly& a, const ZPoly& b);
ZPoly mul(const ZPoly& a, const ZPoly& b);
ZPoly scale(const ZPoly& a, const mpz_class& s);
ZPoly shift_up(const ZPoly& a, int k);
mpz_class content(const ZPoly& a);
void divide_content(ZPoly& a, const mpz_class& g);
/// Exact division; throws if b does not divide a over Z.
ZPoly exact_div(const ZPoly& a, const ZPoly& b);
/// Primitive gcd with positive leading coefficient (1 for coprime inputs).
ZPoly gcd(const ZPoly& a, const ZPoly& b);
/// Number of vanishing low-order coefficients.
int low_zeros(const ZPoly& a);

}  // namespace detail

class RatScalar;

class LaurentPoly {
public:
    LaurentPoly() = default;
    LaurentPoly(long v);  // NOLINT(google-explicit-constructor)
    explicit LaurentPoly(const mpq_class& v);
    /// Builds from an exponent -> coefficient map; zero coefficients are dropped.
    explicit LaurentPoly(const std::map<int, mpq_class>& coeffs);

    static LaurentPoly monomial(int exponent, const mpq_class& coeff = 1);

    bool is_zero() const { return coeffs_.empty(); }
    int low() const { return low_; }
    int high() const { return low_ + static_cast<int>(coeffs_.size()) - 1; }
    mpq_class coeff(int exponent) const;
    std::map<int, mpq_class> terms() const;

    LaurentPoly operator-() const;
    LaurentPoly& operator+=(const LaurentPoly& o);
    LaurentPoly& operator-=(const LaurentPoly& o);
    LaurentPoly& operator*=(const LaurentPoly& o);
    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    friend LaurentPoly operator*(LaurentPoly a, const LaurentPoly& b) { return a *= b; }
    bool operator==(const LaurentPoly& o) const { return low_ == o.low_ && coeffs_ == o.coeffs_; }
    bool operator!=(const LaurentPoly& o) const { return !(*this == o); }

    /// q -> q^{-1}.
    LaurentPoly bar() const;

    /// "q^2+1+q^-2", descending exponents.
    std::string to_string() const;
    static LaurentPoly parse(const std::string& text);

private:
    void canonicalize();

    int low_ = 0;
    std::vector<mpq_class> coeffs_;  // coeffs_[i] multiplies q^(low_ + i)
};

/// An element of Q(q).
///
/// Canonical form: q^shift * num(q) / den(q) with num, den in Z[q], num(0) != 0,
/// den(0) != 0, gcd(num, den) = 1, the integer contents of num and den coprime,
/// and lc(den) > 0. Equality of canonical forms is equality of field elements.
class RatScalar {
public:
    RatScalar() = default;
    RatScalar(long v);  // NOLINT(google-explicit-constructor)
    RatScalar(int v) : RatScalar(static_cast<long>(v)) {}  // NOLINT(google-explicit-constructor)
    explicit RatScalar(const mpq_class& v);
    explicit RatScalar(const LaurentPoly& p);
    RatScalar(const LaurentPoly& num, const LaurentPoly& den);

    static RatScalar q_pow(int k);
    static RatScalar q() { return q_pow(1); }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const;
    /// True when the denominator is a unit, i.e. the value is a Laurent polynomial.
    bool is_laurent() const { return den_.degree() == 0; }

    LaurentPoly numerator() const;
    LaurentPoly denominator() const;

    RatScalar operator-() const;
    RatScalar& operator+=(const RatScalar& o);
    RatScalar& operator-=(const RatScalar& o);
    RatScalar& operator*=(const RatScalar& o);
    RatScalar& operator/=(const RatScalar& o);
    friend RatScalar operator+(RatScalar a, const RatScalar& b) { return a += b; }
    friend RatScalar operator-(RatScalar a, const RatScalar& b) { return a -= b; }
    friend RatScalar operator*(RatScalar a, const RatScalar& b) { return a *= b; }
    friend RatScalar operator/(RatScalar a, const RatScalar& b) { return a /= b; }
    bool operator==(const RatScalar& o) const;
    bool operator!=(const RatScalar& o) const { return !(*this == o); }

    RatScalar inverse() const;
    RatScalar pow(int e) const;
    RatScalar bar() const;

    /// Rough size measure used for pivot selection in exact elimination.
    std::size_t complexity() const;

    /// "(num)/(den)" with integer-coefficient Laurent polynomials; round-trips.
    std::string to_string() const;
    /// Compact human form: "q+q^-1", "(q^2-1)/(q^2+1)".
    std::string pretty() const;
    /// Accepts the serialized form and general expressions in q with + - * / ^ ( ).
    static RatScalar parse(const std::string& text);

private:
    void canonicalize();

    int shift_ = 0;
    detail::ZPoly num_;
    detail::ZPoly den_{{mpz_class(1)}};
};

std::ostream& operator<<(std::ostream& os, const RatScalar& x);
std::ostream& operator<<(std::ostream& os, const LaurentPoly& x);

/// Balanced quantum integer [n] at q^d.
RatScalar qint(int n, int d = 1);
/// [n]! at q^d; rejects n < 0.
RatScalar qfact(int n, int d = 1);
inline RatScalar bar(const RatScalar& x) { return x.bar(); }

/// Exact square root in Q(q) when one exists.
std::optional<RatScalar> sqrt_exact(const RatScalar& x);

/// a + b*t with t^2 = d. Only one adjoined root may be live in an expression:
/// mixing two different nonzero-b discriminants throws.
class QuadExt {
public:
    QuadExt() = default;
    QuadExt(long v) : a_(v) {}  // NOLINT(google-explicit-constructor)
    QuadExt(int v) : a_(static_cast<long>(v)) {}  // NOLINT(google-explicit-constructor)
    QuadExt(const RatScalar& a) : a_(a) {}  // NOLINT(google-explicit-constructor)
    QuadExt(RatScalar a, RatScalar b, RatScalar d);

    /// t with t^2 = d; throws when d is already a square in Q(q) or zero.
    static QuadExt root_of(const RatScalar& d);

    const RatScalar& a() const { return a_; }
    const RatScalar& b() const { return b_; }
    const RatScalar& discriminant() const { return d_; }
    bool is_rational() const { return b_.is_zero(); }
    bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
    std::size_t complexity() const { return a_.complexity() + b_.complexity(); }

    QuadExt operator-() const;
    QuadExt& operator+=(const QuadExt& o);
    QuadExt& operator-=(const QuadExt& o);
    QuadExt& operator*=(const QuadExt& o);
    QuadExt& operator/=(const QuadExt& o);
    friend QuadExt operator+(QuadExt x, const QuadExt& y) { return x += y; }
    friend QuadExt operator-(QuadExt x, const QuadExt& y) { return x -= y; }
    friend QuadExt operator*(QuadExt x, const QuadExt& y) { return x *= y; }
    friend QuadExt operator/(QuadExt x, const QuadExt& y) { return x /= y; }
    bool operator==(const QuadExt& o) const;
    bool operator!=(const QuadExt& o) const { return !(*this == o); }

    QuadExt conjugate() const;
    RatScalar norm() const;  // a^2 - b^2 d
    QuadExt inverse() const;

    std::string to_string() const;

private:
    const RatScalar& merged_d(const QuadExt& o) const;

    RatScalar a_;
    RatScalar b_;
    RatScalar d_;
};

std::ostream& operator<<(std::ostream& os, const QuadExt& x);

}  // namespace iqg
