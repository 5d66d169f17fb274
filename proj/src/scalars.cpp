#include "iqg/scalars.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace iqg {

namespace detail {

void ZPoly::trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

ZPoly add(const ZPoly& a, const ZPoly& b) {
    ZPoly r;
    r.c.resize(std::max(a.c.size(), b.c.size()));
    for (std::size_t i = 0; i < r.c.size(); ++i) {
        if (i < a.c.size()) r.c[i] = a.c[i];
        if (i < b.c.size()) r.c[i] += b.c[i];
    }
    r.trim();
    return r;
}

ZPoly sub(const ZPoly& a, const ZPoly& b) {
    ZPoly r;
    r.c.resize(std::max(a.c.size(), b.c.size()));
    for (std::size_t i = 0; i < r.c.size(); ++i) {
        if (i < a.c.size()) r.c[i] = a.c[i];
        if (i < b.c.size()) r.c[i] -= b.c[i];
    }
    r.trim();
    return r;
}

ZPoly mul(const ZPoly& a, const ZPoly& b) {
    ZPoly r;
    if (a.is_zero() || b.is_zero()) return r;
    r.c.assign(a.c.size() + b.c.size() - 1, mpz_class(0));
    for (std::size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0) continue;
        for (std::size_t j = 0; j < b.c.size(); ++j) {
            if (b.c[j] == 0) continue;
            mpz_addmul(r.c[i + j].get_mpz_t(), a.c[i].get_mpz_t(), b.c[j].get_mpz_t());
        }
    }
    r.trim();
    return r;
}

ZPoly scale(const ZPoly& a, const mpz_class& s) {
    ZPoly r;
    if (s == 0) return r;
    r.c.reserve(a.c.size());
    for (const auto& x : a.c) r.c.push_back(x * s);
    return r;
}

ZPoly shift_up(const ZPoly& a, int k) {
    if (a.is_zero() || k == 0) return a;
    ZPoly r;
    r.c.assign(static_cast<std::size_t>(k), mpz_class(0));
    r.c.insert(r.c.end(), a.c.begin(), a.c.end());
    return r;
}

mpz_class content(const ZPoly& a) {
    mpz_class g = 0;
    for (const auto& x : a.c) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
        if (g == 1) break;
    }
    return g;
}

void divide_content(ZPoly& a, const mpz_class& g) {
    if (g == 1) return;
    for (auto& x : a.c) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
}

ZPoly exact_div(const ZPoly& a, const ZPoly& b) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    if (a.is_zero()) return a;
    if (a.degree() < b.degree()) throw std::logic_error("inexact polynomial division");
    ZPoly rem = a;
    ZPoly quo;
    quo.c.assign(static_cast<std::size_t>(a.degree() - b.degree() + 1), mpz_class(0));
    const mpz_class& lb = b.lead();
    for (int k = a.degree() - b.degree(); k >= 0; --k) {
        mpz_class& top = rem.c[static_cast<std::size_t>(k + b.degree())];
        if (top == 0) continue;
        if (!mpz_divisible_p(top.get_mpz_t(), lb.get_mpz_t()))
            throw std::logic_error("inexact polynomial division");
        mpz_class qk;
        mpz_divexact(qk.get_mpz_t(), top.get_mpz_t(), lb.get_mpz_t());
        for (int j = 0; j <= b.degree(); ++j)
            mpz_submul(rem.c[static_cast<std::size_t>(k + j)].get_mpz_t(), qk.get_mpz_t(),
                       b.c[static_cast<std::size_t>(j)].get_mpz_t());
        quo.c[static_cast<std::size_t>(k)] = qk;
    }
    rem.trim();
    if (!rem.is_zero()) throw std::logic_error("inexact polynomial division");
    quo.trim();
    return quo;
}

namespace {

ZPoly primitive(ZPoly a) {
    mpz_class g = content(a);
    if (g != 0) divide_content(a, g);
    if (!a.is_zero() && a.lead() < 0)
        for (auto& x : a.c) x = -x;
    return a;
}

// Pseudo-remainder of a by b.
ZPoly prem(ZPoly a, const ZPoly& b) {
    const int db = b.degree();
    const mpz_class& lb = b.lead();
    while (!a.is_zero() && a.degree() >= db) {
        mpz_class la = a.lead();
        const int off = a.degree() - db;
        for (auto& x : a.c) x *= lb;
        for (int j = 0; j <= db; ++j)
            mpz_submul(a.c[static_cast<std::size_t>(off + j)].get_mpz_t(), la.get_mpz_t(),
                       b.c[static_cast<std::size_t>(j)].get_mpz_t());
        a.trim();
        a = primitive(std::move(a));
    }
    return a;
}

// Evaluates at a point large enough that a nonconstant common factor of a and
// b cannot evaluate to +-1; coprime values then certify coprimality.
bool certainly_coprime(const ZPoly& a, const ZPoly& b) {
    mpz_class bound = 0;
    for (const auto* p : {&a, &b}) {
        mpz_class norm = 0;
        for (const auto& x : p->c) norm += x * x;
        mpz_class root;
        mpz_sqrt(root.get_mpz_t(), norm.get_mpz_t());
        root += 1;
        root <<= p->degree();
        if (root > bound) bound = root;
    }
    mpz_class point = 2 * bound + 2;
    auto eval = [&](const ZPoly& p) {
        mpz_class v = 0;
        for (auto it = p.c.rbegin(); it != p.c.rend(); ++it) {
            v *= point;
            v += *it;
        }
        return v;
    };
    mpz_class va = eval(a), vb = eval(b), g;
    mpz_gcd(g.get_mpz_t(), va.get_mpz_t(), vb.get_mpz_t());
    return g == 1;
}

}  // namespace

ZPoly gcd(const ZPoly& a, const ZPoly& b) {
    const ZPoly one{{mpz_class(1)}};
    if (a.is_zero()) return primitive(b);
    if (b.is_zero()) return primitive(a);
    if (a.degree() == 0 || b.degree() == 0) return one;
    ZPoly x = primitive(a), y = primitive(b);
    if (x == y) return x;
    if (certainly_coprime(x, y)) return one;
    if (x.degree() < y.degree()) std::swap(x, y);
    while (!y.is_zero()) {
        if (y.degree() == 0) return one;
        ZPoly r = prem(x, y);
        x = std::move(y);
        y = primitive(std::move(r));
    }
    return primitive(std::move(x));
}

int low_zeros(const ZPoly& a) {
    int k = 0;
    while (k < static_cast<int>(a.c.size()) && a.c[static_cast<std::size_t>(k)] == 0) ++k;
    return k;
}

namespace {

ZPoly drop_low(const ZPoly& a, int k) {
    if (k == 0) return a;
    ZPoly r;
    r.c.assign(a.c.begin() + k, a.c.end());
    return r;
}

}  // namespace

}  // namespace detail

using detail::ZPoly;

// ---------------------------------------------------------------- LaurentPoly

LaurentPoly::LaurentPoly(long v) {
    if (v != 0) coeffs_.emplace_back(v);
}

LaurentPoly::LaurentPoly(const mpq_class& v) {
    if (v != 0) coeffs_.push_back(v);
}

LaurentPoly::LaurentPoly(const std::map<int, mpq_class>& coeffs) {
    if (coeffs.empty()) return;
    low_ = coeffs.begin()->first;
    coeffs_.assign(static_cast<std::size_t>(coeffs.rbegin()->first - low_ + 1), mpq_class(0));
    for (const auto& [e, c] : coeffs) coeffs_[static_cast<std::size_t>(e - low_)] = c;
    canonicalize();
}

LaurentPoly LaurentPoly::monomial(int exponent, const mpq_class& coeff) {
    LaurentPoly p;
    if (coeff == 0) return p;
    p.low_ = exponent;
    p.coeffs_.push_back(coeff);
    return p;
}

void LaurentPoly::canonicalize() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    std::size_t lead = 0;
    while (lead < coeffs_.size() && coeffs_[lead] == 0) ++lead;
    if (lead > 0) {
        coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(lead));
        low_ += static_cast<int>(lead);
    }
    if (coeffs_.empty()) low_ = 0;
}

mpq_class LaurentPoly::coeff(int exponent) const {
    if (is_zero() || exponent < low_ || exponent > high()) return 0;
    return coeffs_[static_cast<std::size_t>(exponent - low_)];
}

std::map<int, mpq_class> LaurentPoly::terms() const {
    std::map<int, mpq_class> out;
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        if (coeffs_[i] != 0) out.emplace(low_ + static_cast<int>(i), coeffs_[i]);
    return out;
}

LaurentPoly LaurentPoly::operator-() const {
    LaurentPoly r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    const int lo = std::min(low_, o.low_);
    const int hi = std::max(high(), o.high());
    std::vector<mpq_class> out(static_cast<std::size_t>(hi - lo + 1), mpq_class(0));
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        out[static_cast<std::size_t>(low_ - lo) + i] += coeffs_[i];
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i)
        out[static_cast<std::size_t>(o.low_ - lo) + i] += o.coeffs_[i];
    low_ = lo;
    coeffs_ = std::move(out);
    canonicalize();
    return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) { return *this += -o; }

LaurentPoly& LaurentPoly::operator*=(const LaurentPoly& o) {
    if (is_zero() || o.is_zero()) return *this = LaurentPoly();
    std::vector<mpq_class> out(coeffs_.size() + o.coeffs_.size() - 1, mpq_class(0));
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        for (std::size_t j = 0; j < o.coeffs_.size(); ++j) out[i + j] += coeffs_[i] * o.coeffs_[j];
    low_ += o.low_;
    coeffs_ = std::move(out);
    canonicalize();
    return *this;
}

LaurentPoly LaurentPoly::bar() const {
    LaurentPoly r;
    if (is_zero()) return r;
    r.low_ = -high();
    r.coeffs_.assign(coeffs_.rbegin(), coeffs_.rend());
    return r;
}

namespace {

std::string term_string(int e, const mpq_class& c) {
    if (e == 0) return c.get_str();
    std::string mono = (e == 1) ? "q" : "q^" + std::to_string(e);
    if (c == 1) return mono;
    if (c == -1) return "-" + mono;
    return c.get_str() + "*" + mono;
}

}  // namespace

std::string LaurentPoly::to_string() const {
    if (is_zero()) return "0";
    std::string out;
    for (int i = static_cast<int>(coeffs_.size()) - 1; i >= 0; --i) {
        const mpq_class& c = coeffs_[static_cast<std::size_t>(i)];
        if (c == 0) continue;
        std::string t = term_string(low_ + i, c);
        if (!out.empty() && t[0] != '-') out += '+';
        out += t;
    }
    return out;
}

LaurentPoly LaurentPoly::parse(const std::string& text) {
    RatScalar r = RatScalar::parse(text);
    if (!r.is_laurent()) throw std::invalid_argument("not a Laurent polynomial: " + text);
    return r.numerator() * LaurentPoly(mpq_class(1, 1) / r.denominator().coeff(0));
}

std::ostream& operator<<(std::ostream& os, const LaurentPoly& x) { return os << x.to_string(); }

// ------------------------------------------------------------------ RatScalar

RatScalar::RatScalar(long v) {
    if (v != 0) num_.c.emplace_back(v);
}

RatScalar::RatScalar(const mpq_class& v) {
    if (v == 0) return;
    num_.c.push_back(v.get_num());
    den_.c[0] = v.get_den();
}

RatScalar::RatScalar(const LaurentPoly& p) : RatScalar(p, LaurentPoly(1)) {}

RatScalar::RatScalar(const LaurentPoly& num, const LaurentPoly& den) {
    if (den.is_zero()) throw std::domain_error("zero denominator");
    if (num.is_zero()) return;
    // Clear rational coefficients by the lcm of all denominators.
    mpz_class l = 1;
    for (const auto* p : {&num, &den})
        for (const auto& [e, c] : p->terms()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    auto to_z = [&](const LaurentPoly& p) {
        ZPoly z;
        z.c.assign(static_cast<std::size_t>(p.high() - p.low() + 1), mpz_class(0));
        for (const auto& [e, c] : p.terms()) {
            mpq_class s = c * l;
            z.c[static_cast<std::size_t>(e - p.low())] = s.get_num();
        }
        return z;
    };
    num_ = to_z(num);
    den_ = to_z(den);
    shift_ = num.low() - den.low();
    canonicalize();
}

RatScalar RatScalar::q_pow(int k) {
    RatScalar r(1);
    r.shift_ = k;
    return r;
}

bool RatScalar::is_one() const {
    return shift_ == 0 && num_.c.size() == 1 && num_.c[0] == 1 && den_.c.size() == 1 && den_.c[0] == 1;
}

void RatScalar::canonicalize() {
    if (num_.is_zero()) {
        shift_ = 0;
        den_.c.assign(1, mpz_class(1));
        return;
    }
    if (int k = detail::low_zeros(num_); k > 0) {
        num_ = detail::drop_low(num_, k);
        shift_ += k;
    }
    if (int k = detail::low_zeros(den_); k > 0) {
        den_ = detail::drop_low(den_, k);
        shift_ -= k;
    }
    if (num_.degree() > 0 && den_.degree() > 0) {
        ZPoly g = detail::gcd(num_, den_);
        if (g.degree() > 0) {
            num_ = detail::exact_div(num_, g);
            den_ = detail::exact_div(den_, g);
        }
    }
    mpz_class cn = detail::content(num_), cd = detail::content(den_), g;
    mpz_gcd(g.get_mpz_t(), cn.get_mpz_t(), cd.get_mpz_t());
    if (den_.lead() < 0) g = -g;
    if (g != 1) {
        detail::divide_content(num_, g);
        detail::divide_content(den_, g);
    }
}

LaurentPoly RatScalar::numerator() const {
    std::map<int, mpq_class> t;
    for (std::size_t i = 0; i < num_.c.size(); ++i)
        if (num_.c[i] != 0) t.emplace(shift_ + static_cast<int>(i), mpq_class(num_.c[i]));
    return LaurentPoly(t);
}

LaurentPoly RatScalar::denominator() const {
    std::map<int, mpq_class> t;
    for (std::size_t i = 0; i < den_.c.size(); ++i)
        if (den_.c[i] != 0) t.emplace(static_cast<int>(i), mpq_class(den_.c[i]));
    return LaurentPoly(t);
}

RatScalar RatScalar::operator-() const {
    RatScalar r = *this;
    for (auto& x : r.num_.c) x = -x;
    return r;
}

RatScalar& RatScalar::operator+=(const RatScalar& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    const int s = std::min(shift_, o.shift_);
    ZPoly n1 = detail::shift_up(num_, shift_ - s);
    ZPoly n2 = detail::shift_up(o.num_, o.shift_ - s);
    shift_ = s;
    if (den_ == o.den_) {
        num_ = detail::add(n1, n2);
    } else if (den_.degree() == 0 && o.den_.degree() == 0) {
        num_ = detail::add(detail::scale(n1, o.den_.c[0]), detail::scale(n2, den_.c[0]));
        den_.c[0] *= o.den_.c[0];
    } else {
        ZPoly g = detail::gcd(den_, o.den_);
        ZPoly d1 = g.degree() > 0 ? detail::exact_div(den_, g) : den_;
        ZPoly d2 = g.degree() > 0 ? detail::exact_div(o.den_, g) : o.den_;
        num_ = detail::add(detail::mul(n1, d2), detail::mul(n2, d1));
        den_ = detail::mul(den_, d2);
    }
    canonicalize();
    return *this;
}

RatScalar& RatScalar::operator-=(const RatScalar& o) { return *this += -o; }

RatScalar& RatScalar::operator*=(const RatScalar& o) {
    if (is_zero()) return *this;
    if (o.is_zero()) return *this = RatScalar();
    shift_ += o.shift_;
    if (den_.degree() == 0 && o.den_.degree() == 0) {
        num_ = detail::mul(num_, o.num_);
        den_.c[0] *= o.den_.c[0];
    } else {
        ZPoly g1 = detail::gcd(num_, o.den_);
        ZPoly g2 = detail::gcd(o.num_, den_);
        ZPoly n1 = g1.degree() > 0 ? detail::exact_div(num_, g1) : num_;
        ZPoly d2 = g1.degree() > 0 ? detail::exact_div(o.den_, g1) : o.den_;
        ZPoly n2 = g2.degree() > 0 ? detail::exact_div(o.num_, g2) : o.num_;
        ZPoly d1 = g2.degree() > 0 ? detail::exact_div(den_, g2) : den_;
        num_ = detail::mul(n1, n2);
        den_ = detail::mul(d1, d2);
    }
    // Polynomial parts are coprime already; only contents and sign remain.
    mpz_class cn = detail::content(num_), cd = detail::content(den_), g;
    mpz_gcd(g.get_mpz_t(), cn.get_mpz_t(), cd.get_mpz_t());
    if (den_.lead() < 0) g = -g;
    if (g != 1) {
        detail::divide_content(num_, g);
        detail::divide_content(den_, g);
    }
    return *this;
}

RatScalar RatScalar::inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero in Q(q)");
    RatScalar r;
    r.num_ = den_;
    r.den_ = num_;
    r.shift_ = -shift_;
    if (r.den_.lead() < 0) {
        for (auto& x : r.num_.c) x = -x;
        for (auto& x : r.den_.c) x = -x;
    }
    return r;
}

RatScalar& RatScalar::operator/=(const RatScalar& o) { return *this *= o.inverse(); }

bool RatScalar::operator==(const RatScalar& o) const {
    return shift_ == o.shift_ && num_ == o.num_ && den_ == o.den_;
}

RatScalar RatScalar::pow(int e) const {
    if (e < 0) return inverse().pow(-e);
    RatScalar result(1), base = *this;
    while (e > 0) {
        if (e & 1) result *= base;
        e >>= 1;
        if (e > 0) base *= base;
    }
    return result;
}

RatScalar RatScalar::bar() const {
    // q^s n(q)/d(q) -> q^{-s} n(1/q)/d(1/q) = q^{-s - deg n + deg d} rev(n)/rev(d).
    if (is_zero()) return *this;
    RatScalar r;
    r.num_.c.assign(num_.c.rbegin(), num_.c.rend());
    r.den_.c.assign(den_.c.rbegin(), den_.c.rend());
    r.shift_ = -shift_ - num_.degree() + den_.degree();
    r.canonicalize();
    return r;
}

std::size_t RatScalar::complexity() const {
    if (is_zero()) return 0;
    std::size_t s = num_.c.size() + den_.c.size();
    for (const auto& x : num_.c) s += mpz_sizeinbase(x.get_mpz_t(), 2);
    for (const auto& x : den_.c) s += mpz_sizeinbase(x.get_mpz_t(), 2);
    return s;
}

std::string RatScalar::to_string() const {
    return "(" + numerator().to_string() + ")/(" + denominator().to_string() + ")";
}

std::string RatScalar::pretty() const {
    if (den_.degree() == 0 && den_.c[0] == 1) return numerator().to_string();
    auto wrap = [](const std::string& s) {
        bool atomic = s.find_first_of("+-*/", 1) == std::string::npos;
        return atomic ? s : "(" + s + ")";
    };
    return wrap(numerator().to_string()) + "/" + wrap(denominator().to_string());
}

namespace {

class ExprParser {
public:
    explicit ExprParser(const std::string& s) : s_(s) {}

    RatScalar parse_all() {
        RatScalar v = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected character");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw std::invalid_argument("cannot parse scalar '" + s_ + "' at offset " + std::to_string(pos_) +
                                    ": " + what);
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    char peek() {
        skip();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    RatScalar expr() {
        RatScalar v = term();
        for (char c = peek(); c == '+' || c == '-'; c = peek()) {
            ++pos_;
            RatScalar t = term();
            if (c == '+') v += t;
            else v -= t;
        }
        return v;
    }

    RatScalar term() {
        RatScalar v = unary();
        for (;;) {
            char c = peek();
            if (c == '*' || c == '/') {
                ++pos_;
                RatScalar f = unary();
                if (c == '*') v *= f;
                else {
                    if (f.is_zero()) fail("division by zero");
                    v /= f;
                }
            } else if (c == 'q' || c == '(') {
                v *= power();
            } else {
                return v;
            }
        }
    }

    RatScalar unary() {
        char c = peek();
        if (c == '-') {
            ++pos_;
            return -unary();
        }
        if (c == '+') {
            ++pos_;
            return unary();
        }
        return power();
    }

    RatScalar power() {
        RatScalar base = primary();
        if (peek() == '^') {
            ++pos_;
            skip();
            bool neg = false;
            if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) neg = s_[pos_++] == '-';
            long e = integer();
            if (base.is_zero() && e < 0) fail("zero to a negative power");
            return base.pow(static_cast<int>(neg ? -e : e));
        }
        return base;
    }

    long integer() {
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected integer");
        return std::stol(s_.substr(start, pos_ - start));
    }

    RatScalar primary() {
        char c = peek();
        if (c == 'q') {
            ++pos_;
            return RatScalar::q();
        }
        if (c == '(') {
            ++pos_;
            RatScalar v = expr();
            if (peek() != ')') fail("expected ')'");
            ++pos_;
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return RatScalar(mpq_class(mpz_class(s_.substr(start, pos_ - start))));
        }
        fail("expected q, integer or '('");
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

}  // namespace

RatScalar RatScalar::parse(const std::string& text) { return ExprParser(text).parse_all(); }

std::ostream& operator<<(std::ostream& os, const RatScalar& x) { return os << x.pretty(); }

// --------------------------------------------------------- quantum integers

RatScalar qint(int n, int d) {
    if (d <= 0) throw std::invalid_argument("qint: d must be positive");
    if (n == 0) return RatScalar();
    const int m = n < 0 ? -n : n;
    std::map<int, mpq_class> t;
    for (int j = 0; j < m; ++j) t[d * (m - 1 - 2 * j)] = 1;
    RatScalar r{LaurentPoly(t)};
    return n < 0 ? -r : r;
}

RatScalar qfact(int n, int d) {
    if (n < 0) throw std::invalid_argument("qfact: negative argument");
    RatScalar r(1);
    for (int m = 2; m <= n; ++m) r *= qint(m, d);
    return r;
}

namespace {

std::optional<ZPoly> sqrt_poly(const ZPoly& a) {
    if (a.is_zero()) return a;
    if (a.degree() % 2 != 0 || a.lead() < 0) return std::nullopt;
    const int m = a.degree() / 2;
    if (!mpz_perfect_square_p(a.lead().get_mpz_t())) return std::nullopt;
    ZPoly s;
    s.c.assign(static_cast<std::size_t>(m + 1), mpz_class(0));
    mpz_sqrt(s.c[static_cast<std::size_t>(m)].get_mpz_t(), a.lead().get_mpz_t());
    const mpz_class two_lead = 2 * s.c[static_cast<std::size_t>(m)];
    for (int k = 1; k <= m; ++k) {
        mpz_class acc = a.c[static_cast<std::size_t>(2 * m - k)];
        for (int i = 1; i < k; ++i)
            acc -= s.c[static_cast<std::size_t>(m - i)] * s.c[static_cast<std::size_t>(m - k + i)];
        if (!mpz_divisible_p(acc.get_mpz_t(), two_lead.get_mpz_t())) return std::nullopt;
        mpz_divexact(s.c[static_cast<std::size_t>(m - k)].get_mpz_t(), acc.get_mpz_t(), two_lead.get_mpz_t());
    }
    if (!(detail::mul(s, s) == a)) return std::nullopt;
    return s;
}

}  // namespace

std::optional<RatScalar> sqrt_exact(const RatScalar& x) {
    if (x.is_zero()) return RatScalar();
    LaurentPoly n = x.numerator(), d = x.denominator();
    if (n.low() % 2 != 0) return std::nullopt;
    auto to_z = [](const LaurentPoly& p) {
        ZPoly z;
        z.c.assign(static_cast<std::size_t>(p.high() - p.low() + 1), mpz_class(0));
        for (const auto& [e, c] : p.terms()) z.c[static_cast<std::size_t>(e - p.low())] = c.get_num();
        return z;
    };
    auto sn = sqrt_poly(to_z(n));
    auto sd = sqrt_poly(to_z(d));
    if (!sn || !sd) return std::nullopt;
    auto from_z = [](const ZPoly& z, int low) {
        std::map<int, mpq_class> t;
        for (std::size_t i = 0; i < z.c.size(); ++i)
            if (z.c[i] != 0) t.emplace(low + static_cast<int>(i), mpq_class(z.c[i]));
        return LaurentPoly(t);
    };
    return RatScalar(from_z(*sn, n.low() / 2), from_z(*sd, 0));
}

// ------------------------------------------------------------------- QuadExt

QuadExt::QuadExt(RatScalar a, RatScalar b, RatScalar d) : a_(std::move(a)), b_(std::move(b)), d_(std::move(d)) {
    if (b_.is_zero()) d_ = RatScalar();
}

QuadExt QuadExt::root_of(const RatScalar& d) {
    if (d.is_zero()) throw std::invalid_argument("QuadExt: zero discriminant");
    if (sqrt_exact(d)) throw std::invalid_argument("QuadExt: discriminant is a square in Q(q): " + d.pretty());
    return QuadExt(RatScalar(), RatScalar(1), d);
}

const RatScalar& QuadExt::merged_d(const QuadExt& o) const {
    if (b_.is_zero()) return o.d_;
    if (o.b_.is_zero()) return d_;
    if (d_ != o.d_)
        throw std::logic_error("QuadExt: nested extensions are not supported (" + d_.pretty() + " vs " +
                               o.d_.pretty() + ")");
    return d_;
}

QuadExt QuadExt::operator-() const { return QuadExt(-a_, -b_, d_); }

QuadExt& QuadExt::operator+=(const QuadExt& o) {
    RatScalar d = merged_d(o);
    *this = QuadExt(a_ + o.a_, b_ + o.b_, d);
    return *this;
}

QuadExt& QuadExt::operator-=(const QuadExt& o) { return *this += -o; }

QuadExt& QuadExt::operator*=(const QuadExt& o) {
    RatScalar d = merged_d(o);
    RatScalar a = a_ * o.a_;
    if (!b_.is_zero() && !o.b_.is_zero()) a += b_ * o.b_ * d;
    RatScalar b = a_ * o.b_ + b_ * o.a_;
    *this = QuadExt(a, b, d);
    return *this;
}

QuadExt QuadExt::conjugate() const { return QuadExt(a_, -b_, d_); }

RatScalar QuadExt::norm() const { return a_ * a_ - b_ * b_ * d_; }

QuadExt QuadExt::inverse() const {
    RatScalar n = norm();
    if (n.is_zero()) throw std::domain_error("QuadExt: inverse of a zero divisor");
    RatScalar inv = n.inverse();
    return QuadExt(a_ * inv, -b_ * inv, d_);
}

QuadExt& QuadExt::operator/=(const QuadExt& o) {
    if (o.is_rational()) {
        RatScalar inv = o.a_.inverse();
        *this = QuadExt(a_ * inv, b_ * inv, d_);
        return *this;
    }
    return *this *= o.inverse();
}

bool QuadExt::operator==(const QuadExt& o) const {
    if (a_ != o.a_ || b_ != o.b_) return false;
    return b_.is_zero() || d_ == o.d_;
}

std::string QuadExt::to_string() const {
    if (b_.is_zero()) return a_.pretty();
    std::string t = "sqrt(" + d_.pretty() + ")";
    std::string bt = b_.is_one() ? t : (b_ == RatScalar(-1) ? "-" + t : "(" + b_.pretty() + ")*" + t);
    if (a_.is_zero()) return bt;
    if (bt[0] == '-') return a_.pretty() + bt;
    return a_.pretty() + "+" + bt;
}

std::ostream& operator<<(std::ostream& os, const QuadExt& x) { return os << x.to_string(); }

}  // namespace iqg
