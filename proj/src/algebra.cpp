#include "iqg/algebra.hpp"

#include <Eigen/LU>

#include <cctype>
#include <optional>
#include <stdexcept>

namespace iqg {

bool Letter::operator==(const Letter& o) const {
    if (kind != o.kind || index != o.index) return false;
    return kind != Kind::K || h == o.h;
}

bool Letter::operator<(const Letter& o) const {
    if (kind != o.kind) return kind < o.kind;
    if (index != o.index) return index < o.index;
    if (kind != Kind::K) return false;
    return LatticeLess{}(h, o.h);
}

OperatorExpr::OperatorExpr(const RatScalar& c) {
    if (!c.is_zero()) terms_.emplace(Word{}, c);
}

OperatorExpr OperatorExpr::word(const Word& w, const RatScalar& c) {
    OperatorExpr e;
    e.add_term(w, c);
    return e;
}

void OperatorExpr::add_term(Word w, const RatScalar& c) {
    if (c.is_zero()) return;
    Word merged;
    merged.reserve(w.size());
    for (auto& l : w) {
        if (l.kind == Letter::Kind::K) {
            if (!merged.empty() && merged.back().kind == Letter::Kind::K) {
                merged.back().h += l.h;
                if (merged.back().h.isZero()) merged.pop_back();
                continue;
            }
            if (l.h.isZero()) continue;
        }
        merged.push_back(std::move(l));
    }
    auto [it, inserted] = terms_.emplace(std::move(merged), c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

int OperatorExpr::degree() const {
    int d = 0;
    for (const auto& [w, c] : terms_) d = std::max(d, static_cast<int>(w.size()));
    return d;
}

OperatorExpr OperatorExpr::operator-() const {
    OperatorExpr r = *this;
    for (auto& [w, c] : r.terms_) c = -c;
    return r;
}

OperatorExpr& OperatorExpr::operator+=(const OperatorExpr& o) {
    for (const auto& [w, c] : o.terms_) add_term(w, c);
    return *this;
}

OperatorExpr& OperatorExpr::operator-=(const OperatorExpr& o) {
    for (const auto& [w, c] : o.terms_) add_term(w, -c);
    return *this;
}

OperatorExpr& OperatorExpr::operator*=(const OperatorExpr& o) {
    OperatorExpr r;
    for (const auto& [w1, c1] : terms_)
        for (const auto& [w2, c2] : o.terms_) {
            Word w = w1;
            w.insert(w.end(), w2.begin(), w2.end());
            r.add_term(std::move(w), c1 * c2);
        }
    terms_ = std::move(r.terms_);
    return *this;
}

OperatorExpr& OperatorExpr::operator*=(const RatScalar& c) {
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [w, x] : terms_) x *= c;
    return *this;
}

OperatorExpr OperatorExpr::pow(int n) const {
    if (n < 0) throw std::invalid_argument("negative power of an operator expression");
    OperatorExpr r(1);
    for (int k = 0; k < n; ++k) r *= *this;
    return r;
}

OperatorExpr Ki(const RootDatum& rd, int i, int power) { return OperatorExpr::K(power * rd.d(i) * rd.h(i)); }

OperatorExpr divided_power(const RootDatum& rd, Letter::Kind kind, int i, int n) {
    if (n < 0) throw std::invalid_argument("divided_power: negative order");
    if (kind == Letter::Kind::K) throw std::invalid_argument("divided_power: only for E and F");
    Word w(static_cast<std::size_t>(n), kind == Letter::Kind::E ? Letter::E(i) : Letter::F(i));
    return OperatorExpr::word(w, qfact(n, rd.d(i)).inverse());
}

namespace {

OperatorExpr braid_letter(const RootDatum& rd, int i, const Letter& l) {
    const int di = rd.d(i);
    switch (l.kind) {
        case Letter::Kind::K:
            return OperatorExpr::K(rd.reflect_Y(i, l.h));
        case Letter::Kind::E: {
            if (l.index == i) return -(OperatorExpr::F(i) * Ki(rd, i));
            OperatorExpr out;
            const int m = -rd.a(i, l.index);
            for (int r = 0; r <= m; ++r) {
                const int s = m - r;
                RatScalar c = RatScalar::q_pow(-di * r);
                if (r % 2) c = -c;
                out += c * (divided_power(rd, Letter::Kind::E, i, s) * OperatorExpr::E(l.index) *
                            divided_power(rd, Letter::Kind::E, i, r));
            }
            return out;
        }
        case Letter::Kind::F: {
            if (l.index == i) return -(Ki(rd, i, -1) * OperatorExpr::E(i));
            OperatorExpr out;
            const int m = -rd.a(i, l.index);
            for (int r = 0; r <= m; ++r) {
                const int s = m - r;
                RatScalar c = RatScalar::q_pow(di * r);
                if (r % 2) c = -c;
                out += c * (divided_power(rd, Letter::Kind::F, i, r) * OperatorExpr::F(l.index) *
                            divided_power(rd, Letter::Kind::F, i, s));
            }
            return out;
        }
    }
    throw std::logic_error("unreachable");
}

template <class LetterMap>
OperatorExpr map_letters(const OperatorExpr& x, LetterMap f, bool reverse) {
    OperatorExpr out;
    for (const auto& [w, c] : x.terms()) {
        OperatorExpr prod(c);
        if (reverse) {
            for (auto it = w.rbegin(); it != w.rend(); ++it) prod *= f(*it);
        } else {
            for (const auto& l : w) prod *= f(l);
        }
        out += prod;
    }
    return out;
}

}  // namespace

OperatorExpr braid_apply(const RootDatum& rd, int i, const OperatorExpr& x) {
    if (i < 0 || i >= rd.rank()) throw std::out_of_range("braid_apply: unknown index " + std::to_string(i + 1));
    return map_letters(x, [&](const Letter& l) { return braid_letter(rd, i, l); }, false);
}

OperatorExpr braid_apply(const RootDatum& rd, const WeylWord& w, const OperatorExpr& x) {
    OperatorExpr y = x;
    for (auto it = w.rbegin(); it != w.rend(); ++it) y = braid_apply(rd, *it, y);
    return y;
}

OperatorExpr chevalley_omega(const OperatorExpr& x) {
    return map_letters(
        x,
        [](const Letter& l) {
            switch (l.kind) {
                case Letter::Kind::E: return OperatorExpr::F(l.index);
                case Letter::Kind::F: return OperatorExpr::E(l.index);
                case Letter::Kind::K: return OperatorExpr::K(-l.h);
            }
            throw std::logic_error("unreachable");
        },
        false);
}

OperatorExpr rho_twist(const RootDatum& rd, const OperatorExpr& x) {
    return map_letters(
        x,
        [&](const Letter& l) {
            switch (l.kind) {
                case Letter::Kind::E:
                    return RatScalar::q_pow(rd.d(l.index)) * (Ki(rd, l.index) * OperatorExpr::F(l.index));
                case Letter::Kind::F:
                    return RatScalar::q_pow(rd.d(l.index)) * (Ki(rd, l.index, -1) * OperatorExpr::E(l.index));
                case Letter::Kind::K: return OperatorExpr::K(l.h);
            }
            throw std::logic_error("unreachable");
        },
        true);
}

// ------------------------------------------------------------------ tensors

TensorExpr TensorExpr::pure(const OperatorExpr& a, const OperatorExpr& b) {
    TensorExpr t;
    for (const auto& [w1, c1] : a.terms())
        for (const auto& [w2, c2] : b.terms()) t.add_term(w1, w2, c1 * c2);
    return t;
}

void TensorExpr::add_term(const Word& a, const Word& b, const RatScalar& c) {
    if (c.is_zero()) return;
    // Normalize each factor the same way OperatorExpr does.
    auto norm = [](const Word& w) {
        OperatorExpr e = OperatorExpr::word(w);
        return e.terms().begin()->first;
    };
    auto key = std::make_pair(norm(a), norm(b));
    auto [it, inserted] = terms_.emplace(std::move(key), c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

TensorExpr& TensorExpr::operator+=(const TensorExpr& o) {
    for (const auto& [k, c] : o.terms_) add_term(k.first, k.second, c);
    return *this;
}

TensorExpr& TensorExpr::operator*=(const TensorExpr& o) {
    TensorExpr r;
    for (const auto& [k1, c1] : terms_)
        for (const auto& [k2, c2] : o.terms_) {
            Word a = k1.first, b = k1.second;
            a.insert(a.end(), k2.first.begin(), k2.first.end());
            b.insert(b.end(), k2.second.begin(), k2.second.end());
            r.add_term(a, b, c1 * c2);
        }
    terms_ = std::move(r.terms_);
    return *this;
}

TensorExpr coproduct(const RootDatum& rd, const OperatorExpr& x) {
    const OperatorExpr one(1);
    TensorExpr out;
    for (const auto& [w, c] : x.terms()) {
        TensorExpr prod = TensorExpr::pure(OperatorExpr(c), one);
        for (const auto& l : w) {
            switch (l.kind) {
                case Letter::Kind::E:
                    prod *= TensorExpr::pure(OperatorExpr::E(l.index), one) +
                            TensorExpr::pure(Ki(rd, l.index), OperatorExpr::E(l.index));
                    break;
                case Letter::Kind::F:
                    prod *= TensorExpr::pure(OperatorExpr::F(l.index), Ki(rd, l.index, -1)) +
                            TensorExpr::pure(one, OperatorExpr::F(l.index));
                    break;
                case Letter::Kind::K:
                    prod *= TensorExpr::pure(OperatorExpr::K(l.h), OperatorExpr::K(l.h));
                    break;
            }
        }
        out += prod;
    }
    return out;
}

// ---------------------------------------------------------------- relations

std::vector<NamedRelation> defining_relations(const RootDatum& rd) {
    std::vector<NamedRelation> out;
    const int n = rd.rank();
    for (int k = 0; k < rd.y_rank(); ++k) {
        Coweight y = Coweight::Unit(rd.y_rank(), k);
        for (int i = 0; i < n; ++i) {
            const int p = rd.pair(y, rd.alpha(i));
            out.push_back({"K(y" + std::to_string(k + 1) + ")E" + std::to_string(i + 1),
                           OperatorExpr::K(y) * OperatorExpr::E(i) -
                               RatScalar::q_pow(p) * (OperatorExpr::E(i) * OperatorExpr::K(y))});
            out.push_back({"K(y" + std::to_string(k + 1) + ")F" + std::to_string(i + 1),
                           OperatorExpr::K(y) * OperatorExpr::F(i) -
                               RatScalar::q_pow(-p) * (OperatorExpr::F(i) * OperatorExpr::K(y))});
        }
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            OperatorExpr comm = OperatorExpr::E(i) * OperatorExpr::F(j) - OperatorExpr::F(j) * OperatorExpr::E(i);
            if (i == j) {
                RatScalar denom = RatScalar::q_pow(rd.d(i)) - RatScalar::q_pow(-rd.d(i));
                comm -= denom.inverse() * (Ki(rd, i) - Ki(rd, i, -1));
            }
            out.push_back({"[E" + std::to_string(i + 1) + ",F" + std::to_string(j + 1) + "]", comm});
        }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const int m = 1 - rd.a(i, j);
            OperatorExpr se, sf;
            for (int r = 0; r <= m; ++r) {
                RatScalar sign(r % 2 ? -1 : 1);
                se += sign * (divided_power(rd, Letter::Kind::E, i, r) * OperatorExpr::E(j) *
                              divided_power(rd, Letter::Kind::E, i, m - r));
                sf += sign * (divided_power(rd, Letter::Kind::F, i, r) * OperatorExpr::F(j) *
                              divided_power(rd, Letter::Kind::F, i, m - r));
            }
            std::string tag = "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
            out.push_back({"serre-E" + tag, se});
            out.push_back({"serre-F" + tag, sf});
        }
    return out;
}

// ----------------------------------------------------------- text rendering

namespace {

std::string coweight_to_string(const Coweight& h, const RootDatum& rd) {
    // Prefer the simple coroots when h is an integer combination of them.
    Eigen::MatrixXd hm(rd.y_rank(), rd.rank());
    for (int i = 0; i < rd.rank(); ++i) hm.col(i) = rd.h(i).cast<double>();
    Eigen::VectorXd sol = hm.fullPivLu().solve(h.cast<double>());
    Eigen::VectorXi c = sol.array().round().cast<int>();
    Coweight back = Coweight::Zero(rd.y_rank());
    for (int i = 0; i < rd.rank(); ++i) back += c(i) * rd.h(i);
    char sym = 'h';
    if (back != h) {
        c = h;
        sym = 'y';
    }
    std::string s;
    for (Eigen::Index i = 0; i < c.size(); ++i) {
        if (c(i) == 0) continue;
        const int a = std::abs(c(i));
        if (c(i) < 0) s += "-";
        else if (!s.empty()) s += "+";
        if (a != 1) s += std::to_string(a) + "*";
        s += sym + std::to_string(i + 1);
    }
    return s.empty() ? "0" : s;
}

std::string wrap_scalar(const RatScalar& c) {
    std::string s = c.pretty();
    bool atomic = s.find_first_of("+-*/", 1) == std::string::npos;
    return atomic ? s : "(" + s + ")";
}

}  // namespace

std::string letter_to_string(const Letter& l, const RootDatum& rd) {
    switch (l.kind) {
        case Letter::Kind::E: return "E" + std::to_string(l.index + 1);
        case Letter::Kind::F: return "F" + std::to_string(l.index + 1);
        case Letter::Kind::K: return "K[" + coweight_to_string(l.h, rd) + "]";
    }
    throw std::logic_error("unreachable");
}

std::string format_coweight(const Coweight& h, const RootDatum& rd) { return coweight_to_string(h, rd); }

std::string OperatorExpr::to_string(const RootDatum& rd) const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [w, c] : terms_) {
        std::string t;
        if (w.empty()) {
            t = wrap_scalar(c);
        } else {
            if (c == RatScalar(-1)) t = "-";
            else if (!c.is_one()) t = wrap_scalar(c) + "*";
            for (std::size_t k = 0; k < w.size(); ++k) {
                if (k) t += "*";
                t += letter_to_string(w[k], rd);
            }
        }
        if (out.empty()) out = t;
        else if (t[0] == '-') out += " - " + t.substr(1);
        else out += " + " + t;
    }
    return out;
}

namespace {

class OpParser {
public:
    OpParser(const std::string& s, const RootDatum& rd) : s_(s), rd_(rd) {}

    OperatorExpr parse_all() {
        OperatorExpr e = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected character");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw std::invalid_argument("cannot parse expression '" + s_ + "' at offset " + std::to_string(pos_) + ": " +
                                    what);
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    char peek() {
        skip();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    int integer() {
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected integer");
        return std::stoi(s_.substr(start, pos_ - start));
    }
    static std::optional<RatScalar> as_scalar(const OperatorExpr& e) {
        if (e.is_zero()) return RatScalar();
        if (e.terms().size() == 1 && e.terms().begin()->first.empty()) return e.terms().begin()->second;
        return std::nullopt;
    }

    OperatorExpr expr() {
        OperatorExpr v = term();
        for (char c = peek(); c == '+' || c == '-'; c = peek()) {
            ++pos_;
            OperatorExpr t = term();
            if (c == '+') v += t;
            else v -= t;
        }
        return v;
    }

    OperatorExpr term() {
        OperatorExpr v = unary();
        for (char c = peek(); c == '*' || c == '/'; c = peek()) {
            ++pos_;
            OperatorExpr f = unary();
            if (c == '*') {
                v *= f;
            } else {
                auto s = as_scalar(f);
                if (!s) fail("division by a non-scalar");
                if (s->is_zero()) fail("division by zero");
                v *= s->inverse();
            }
        }
        return v;
    }

    OperatorExpr unary() {
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

    OperatorExpr power() {
        OperatorExpr base = atom();
        if (peek() != '^') return base;
        ++pos_;
        skip();
        bool neg = false;
        if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) neg = s_[pos_++] == '-';
        int e = integer();
        if (!neg) return base.pow(e);
        if (auto s = as_scalar(base)) {
            if (s->is_zero()) fail("zero to a negative power");
            return OperatorExpr(s->pow(-e));
        }
        if (base.terms().size() == 1) {
            const auto& [w, c] = *base.terms().begin();
            if (w.size() == 1 && w[0].kind == Letter::Kind::K)
                return OperatorExpr::K(-e * w[0].h) * OperatorExpr(c.pow(-e));
        }
        fail("negative powers only for scalars and K letters");
    }

    int index() {
        int i = integer();
        if (i < 1 || i > rd_.rank()) fail("generator index out of range");
        return i - 1;
    }

    OperatorExpr atom() {
        char c = peek();
        if (c == '(') {
            ++pos_;
            OperatorExpr e = expr();
            if (peek() != ')') fail("expected ')'");
            ++pos_;
            return e;
        }
        if (c == 'q') {
            ++pos_;
            return OperatorExpr(RatScalar::q());
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return OperatorExpr(RatScalar(mpq_class(mpz_class(s_.substr(start, pos_ - start)))));
        }
        if (c == 'E' || c == 'F') {
            ++pos_;
            if (pos_ < s_.size() && s_[pos_] == '_') ++pos_;
            int i = index();
            return c == 'E' ? OperatorExpr::E(i) : OperatorExpr::F(i);
        }
        if (c == 'K') {
            ++pos_;
            if (pos_ < s_.size() && s_[pos_] == '[') {
                std::size_t close = s_.find(']', pos_);
                if (close == std::string::npos) fail("expected ']'");
                std::string inner = s_.substr(pos_ + 1, close - pos_ - 1);
                pos_ = close + 1;
                try {
                    return OperatorExpr::K(rd_.parse_coweight(inner));
                } catch (const std::invalid_argument& e) {
                    fail(e.what());
                }
            }
            if (pos_ < s_.size() && s_[pos_] == '_') ++pos_;
            return Ki(rd_, index());
        }
        fail("expected a generator, scalar or '('");
    }

    const std::string& s_;
    const RootDatum& rd_;
    std::size_t pos_ = 0;
};

}  // namespace

OperatorExpr OperatorExpr::parse(const std::string& text, const RootDatum& rd) { return OpParser(text, rd).parse_all(); }

}  // namespace iqg
