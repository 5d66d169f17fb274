#pragma once

// Formal expressions in the generators E_i, F_i, K_h of U.
//
// No normal form modulo the defining relations is attempted: identities are
// certified by evaluating on modules. The only rewriting done is merging of
// adjacent K letters (K_h K_h' = K_{h+h'}) and dropping K_0.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "iqg/rootdata.hpp"
#include "iqg/scalars.hpp"

namespace iqg {

struct Letter {
    enum class Kind : unsigned char { E, F, K };
    Kind kind = Kind::K;
    int index = -1;  // E/F only, 0-based
    Coweight h;      // K only

    static Letter E(int i) { return {Kind::E, i, Coweight()}; }
    static Letter F(int i) { return {Kind::F, i, Coweight()}; }
    static Letter K(Coweight h) { return {Kind::K, -1, std::move(h)}; }

    bool operator==(const Letter& o) const;
    bool operator<(const Letter& o) const;
};

using Word = std::vector<Letter>;

class OperatorExpr {
public:
    using Terms = std::map<Word, RatScalar>;

    OperatorExpr() = default;
    OperatorExpr(const RatScalar& c);  // NOLINT(google-explicit-constructor): scalar times the empty word
    OperatorExpr(long c) : OperatorExpr(RatScalar(c)) {}  // NOLINT(google-explicit-constructor)
    OperatorExpr(int c) : OperatorExpr(RatScalar(c)) {}   // NOLINT(google-explicit-constructor)

    static OperatorExpr word(const Word& w, const RatScalar& c = RatScalar(1));
    static OperatorExpr E(int i) { return word({Letter::E(i)}); }
    static OperatorExpr F(int i) { return word({Letter::F(i)}); }
    static OperatorExpr K(const Coweight& h) { return word({Letter::K(h)}); }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    /// Largest word length.
    int degree() const;

    OperatorExpr operator-() const;
    OperatorExpr& operator+=(const OperatorExpr& o);
    OperatorExpr& operator-=(const OperatorExpr& o);
    OperatorExpr& operator*=(const OperatorExpr& o);
    OperatorExpr& operator*=(const RatScalar& c);
    friend OperatorExpr operator+(OperatorExpr a, const OperatorExpr& b) { return a += b; }
    friend OperatorExpr operator-(OperatorExpr a, const OperatorExpr& b) { return a -= b; }
    friend OperatorExpr operator*(OperatorExpr a, const OperatorExpr& b) { return a *= b; }
    friend OperatorExpr operator*(const RatScalar& c, OperatorExpr a) { return a *= c; }
    bool operator==(const OperatorExpr& o) const { return terms_ == o.terms_; }
    bool operator!=(const OperatorExpr& o) const { return !(*this == o); }

    OperatorExpr pow(int n) const;

    /// Letters render as E1, F2, K[h1+2*h2]; the output parses back.
    std::string to_string(const RootDatum& rd) const;
    /// Grammar: sums/differences of products of scalars (in q), E<i>, F<i>,
    /// K[<coweight>], K<i> (= K_i = K[d_i h_i]), parentheses, ^ with integer
    /// exponents (negative only for K letters and scalars), / by scalars.
    static OperatorExpr parse(const std::string& text, const RootDatum& rd);

    /// Adds c * w after merging adjacent K letters.
    void add_term(Word w, const RatScalar& c);

private:
    Terms terms_;
};

/// K_i^power with K_i := K_{d_i h_i}.
OperatorExpr Ki(const RootDatum& rd, int i, int power = 1);
/// E_i^{(n)} or F_i^{(n)}: the n-th power over [n]_i!.
OperatorExpr divided_power(const RootDatum& rd, Letter::Kind kind, int i, int n);

/// T''_{i,1}.
OperatorExpr braid_apply(const RootDatum& rd, int i, const OperatorExpr& x);
/// T_w = T''_{i1,1} ... T''_{il,1}.
OperatorExpr braid_apply(const RootDatum& rd, const WeylWord& w, const OperatorExpr& x);
/// The Chevalley involution: E_i <-> F_i, K_h -> K_{-h}; an automorphism.
OperatorExpr chevalley_omega(const OperatorExpr& x);
/// The anti-automorphism rho: E_i -> q_i K_i F_i, F_i -> q_i K_i^{-1} E_i, K_h -> K_h.
OperatorExpr rho_twist(const RootDatum& rd, const OperatorExpr& x);

/// Linear combinations of w1 (x) w2.
class TensorExpr {
public:
    using Terms = std::map<std::pair<Word, Word>, RatScalar>;

    TensorExpr() = default;
    static TensorExpr pure(const OperatorExpr& a, const OperatorExpr& b);

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    void add_term(const Word& a, const Word& b, const RatScalar& c);
    TensorExpr& operator+=(const TensorExpr& o);
    TensorExpr& operator*=(const TensorExpr& o);
    friend TensorExpr operator+(TensorExpr a, const TensorExpr& b) { return a += b; }
    friend TensorExpr operator*(TensorExpr a, const TensorExpr& b) { return a *= b; }
    bool operator==(const TensorExpr& o) const { return terms_ == o.terms_; }

private:
    Terms terms_;
};

/// Delta(E_i) = E_i (x) 1 + K_i (x) E_i, Delta(F_i) = F_i (x) K_i^{-1} + 1 (x) F_i,
/// Delta(K_h) = K_h (x) K_h, extended multiplicatively.
TensorExpr coproduct(const RootDatum& rd, const OperatorExpr& x);

/// A relation of U written as an expression that must act as zero.
struct NamedRelation {
    std::string name;
    OperatorExpr expr;
};

/// K-E and K-F commutation (for a basis of Y), the E-F commutator, and both
/// quantum Serre relations.
std::vector<NamedRelation> defining_relations(const RootDatum& rd);

std::string letter_to_string(const Letter& l, const RootDatum& rd);
/// "h1-h3" when h is an integer combination of simple coroots, else in the y_i basis.
std::string format_coweight(const Coweight& h, const RootDatum& rd);

}  // namespace iqg
