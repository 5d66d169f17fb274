#include "iqg/rootdata.hpp"

#include <Eigen/LU>
#include <gmpxx.h>

#include <algorithm>
#include <cstdlib>
#include <cctype>
#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>

namespace iqg {

namespace {

// Solves a x = b over Q; free variables are set to zero. Returns numerators
// and a common positive denominator.
std::optional<std::pair<Eigen::VectorXi, int>> rational_solve(const Eigen::MatrixXi& a, const Eigen::VectorXi& b) {
    const Eigen::Index rows = a.rows(), cols = a.cols();
    std::vector<std::vector<mpq_class>> m(static_cast<std::size_t>(rows),
                                          std::vector<mpq_class>(static_cast<std::size_t>(cols + 1)));
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) m[i][j] = a(i, j);
        m[i][cols] = b(i);
    }
    std::vector<Eigen::Index> pivots;
    Eigen::Index r = 0;
    for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
        Eigen::Index p = r;
        while (p < rows && m[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[r]);
        mpq_class inv = 1 / m[r][c];
        for (auto& x : m[r]) x *= inv;
        for (Eigen::Index i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            mpq_class f = m[i][c];
            for (Eigen::Index j = 0; j <= cols; ++j) m[i][j] -= f * m[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    for (Eigen::Index i = r; i < rows; ++i)
        if (m[i][cols] != 0) return std::nullopt;
    std::vector<mpq_class> x(static_cast<std::size_t>(cols), mpq_class(0));
    for (Eigen::Index i = 0; i < r; ++i) x[static_cast<std::size_t>(pivots[i])] = m[i][cols];
    mpz_class den = 1;
    for (const auto& v : x) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.get_den_mpz_t());
    Eigen::VectorXi num(cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        mpq_class s = x[static_cast<std::size_t>(j)] * den;
        num(j) = static_cast<int>(s.get_num().get_si());
    }
    return std::make_pair(num, static_cast<int>(den.get_si()));
}

Eigen::MatrixXi simple_reflection_root(const Eigen::MatrixXi& cartan, int i) {
    const int n = static_cast<int>(cartan.rows());
    Eigen::MatrixXi s = Eigen::MatrixXi::Identity(n, n);
    for (int j = 0; j < n; ++j) s(i, j) -= cartan(i, j);
    return s;
}

}  // namespace

std::string format_vector(const Eigen::VectorXi& v) {
    std::string s = "[";
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(v(i));
    }
    return s + "]";
}

std::vector<int> symmetrizer(const Eigen::MatrixXi& a) {
    const int n = static_cast<int>(a.rows());
    if (a.cols() != n) throw std::invalid_argument("Cartan matrix must be square");
    for (int i = 0; i < n; ++i) {
        if (a(i, i) != 2) throw std::invalid_argument("Cartan matrix needs a_ii = 2");
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            if (a(i, j) > 0) throw std::invalid_argument("Cartan matrix needs a_ij <= 0 off the diagonal");
            if ((a(i, j) == 0) != (a(j, i) == 0)) throw std::invalid_argument("Cartan matrix needs a_ij = 0 iff a_ji = 0");
        }
    }
    std::vector<mpq_class> d(static_cast<std::size_t>(n), mpq_class(0));
    for (int root = 0; root < n; ++root) {
        if (d[root] != 0) continue;
        std::vector<int> comp{root};
        d[root] = 1;
        for (std::size_t k = 0; k < comp.size(); ++k) {
            int i = comp[k];
            for (int j = 0; j < n; ++j) {
                if (j == i || a(i, j) == 0) continue;
                mpq_class dj = d[i] * a(i, j) / a(j, i);
                if (d[j] == 0) {
                    d[j] = dj;
                    comp.push_back(j);
                } else if (d[j] != dj) {
                    throw std::invalid_argument("Cartan matrix is not symmetrizable");
                }
            }
        }
        mpz_class l = 1;
        for (int i : comp) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), d[i].get_den_mpz_t());
        mpz_class g = 0;
        for (int i : comp) {
            d[i] *= l;
            mpz_class v = d[i].get_num();
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
        }
        for (int i : comp) d[i] /= g;
    }
    std::vector<int> out;
    for (const auto& x : d) out.push_back(static_cast<int>(x.get_num().get_si()));
    return out;
}

RootDatum::RootDatum(Eigen::MatrixXi cartan, Eigen::MatrixXi pairing, Eigen::MatrixXi coroots,
                     Eigen::MatrixXi roots, std::string name)
    : name_(std::move(name)),
      cartan_(std::move(cartan)),
      pairing_(std::move(pairing)),
      coroots_(std::move(coroots)),
      roots_(std::move(roots)) {
    d_ = symmetrizer(cartan_);
    validate();
}

void RootDatum::validate() {
    const int n = rank();
    if (coroots_.cols() != n || roots_.cols() != n) throw std::invalid_argument("root datum: wrong number of (co)roots");
    if (pairing_.rows() != y_rank() || pairing_.cols() != x_rank())
        throw std::invalid_argument("root datum: pairing matrix has the wrong shape");
    Eigen::MatrixXi check = coroots_.transpose() * pairing_ * roots_;
    if (check != cartan_) throw std::invalid_argument("root datum: <h_i, alpha_j> differs from a_ij");
    // Regularity: full column rank of the coroot and root matrices.
    auto full_rank = [](const Eigen::MatrixXi& m) {
        Eigen::MatrixXd md = m.cast<double>();
        Eigen::FullPivLU<Eigen::MatrixXd> lu(md);
        return lu.rank() == m.cols();
    };
    if (!full_rank(coroots_)) throw std::invalid_argument("root datum is not Y-regular");
    if (!full_rank(roots_)) throw std::invalid_argument("root datum is not X-regular");
}

RootDatum RootDatum::simply_connected(const Eigen::MatrixXi& cartan, const std::string& name) {
    const int n = static_cast<int>(cartan.rows());
    Eigen::MatrixXi id = Eigen::MatrixXi::Identity(n, n);
    return RootDatum(cartan, id, id, cartan, name);
}

RootDatum RootDatum::adjoint(const Eigen::MatrixXi& cartan, const std::string& name) {
    const int n = static_cast<int>(cartan.rows());
    Eigen::MatrixXi id = Eigen::MatrixXi::Identity(n, n);
    return RootDatum(cartan, id, cartan.transpose(), id, name);
}

Eigen::MatrixXi RootDatum::cartan_of_type(const std::string& type) {
    if (type.size() < 2) throw std::invalid_argument("unknown Cartan type '" + type + "'");
    const char letter = static_cast<char>(std::toupper(static_cast<unsigned char>(type[0])));
    int n = 0;
    try {
        n = std::stoi(type.substr(1));
    } catch (const std::exception&) {
        throw std::invalid_argument("unknown Cartan type '" + type + "'");
    }
    if (n < 1) throw std::invalid_argument("unknown Cartan type '" + type + "'");
    Eigen::MatrixXi a = 2 * Eigen::MatrixXi::Identity(n, n);
    for (int i = 0; i + 1 < n; ++i) a(i, i + 1) = a(i + 1, i) = -1;
    switch (letter) {
        case 'A':
            break;
        case 'B':
            if (n < 2) throw std::invalid_argument("type B needs rank >= 2");
            a(n - 1, n - 2) = -2;  // alpha_n short
            break;
        case 'C':
            if (n < 2) throw std::invalid_argument("type C needs rank >= 2");
            a(n - 2, n - 1) = -2;  // alpha_n long
            break;
        case 'D':
            if (n < 4) throw std::invalid_argument("type D needs rank >= 4");
            a(n - 2, n - 1) = a(n - 1, n - 2) = 0;
            a(n - 3, n - 1) = a(n - 1, n - 3) = -1;
            break;
        case 'G':
            if (n != 2) throw std::invalid_argument("type G has rank 2");
            a(0, 1) = -3;  // alpha_1 short
            break;
        default:
            throw std::invalid_argument("unknown Cartan type '" + type + "'");
    }
    return a;
}

RootDatum RootDatum::of_type(const std::string& type, const std::string& lattice) {
    Eigen::MatrixXi a = cartan_of_type(type);
    if (lattice == "simply-connected" || lattice == "sc") return simply_connected(a, type);
    if (lattice == "adjoint") return adjoint(a, type + "-adjoint");
    throw std::invalid_argument("unknown lattice '" + lattice + "' (expected simply-connected or adjoint)");
}

RootDatum RootDatum::from_json(const nlohmann::json& j) {
    if (j.is_string()) return of_type(j.get<std::string>());
    if (!j.is_object()) throw std::invalid_argument("root datum JSON must be an object or a type name");
    if (j.contains("type")) {
        std::string lattice = j.value("lattice", std::string("simply-connected"));
        return of_type(j.at("type").get<std::string>(), lattice);
    }
    std::optional<Eigen::MatrixXi> cartan, dots;
    auto read_matrix = [](const nlohmann::json& m) {
        const int rows = static_cast<int>(m.size());
        if (rows == 0) throw std::invalid_argument("empty matrix in root datum JSON");
        Eigen::MatrixXi out(rows, static_cast<int>(m.at(0).size()));
        for (int i = 0; i < rows; ++i) {
            if (static_cast<int>(m.at(i).size()) != out.cols()) throw std::invalid_argument("ragged matrix in JSON");
            for (int k = 0; k < out.cols(); ++k) out(i, k) = m.at(i).at(k).get<int>();
        }
        return out;
    };
    if (j.contains("cartan")) cartan = read_matrix(j.at("cartan"));
    if (j.contains("pairing")) dots = read_matrix(j.at("pairing"));
    if (!cartan && !dots) throw std::invalid_argument("root datum JSON needs \"type\", \"cartan\" or \"pairing\"");
    if (dots) {
        const Eigen::MatrixXi& p = *dots;
        if (p.rows() != p.cols() || p != p.transpose()) throw std::invalid_argument("pairing i.j must be symmetric");
        Eigen::MatrixXi derived(p.rows(), p.cols());
        for (int i = 0; i < p.rows(); ++i) {
            if (p(i, i) <= 0 || p(i, i) % 2 != 0) throw std::invalid_argument("pairing needs i.i in 2Z_{>0}");
            for (int k = 0; k < p.cols(); ++k) {
                if ((2 * p(i, k)) % p(i, i) != 0) throw std::invalid_argument("pairing needs 2(i.j)/(i.i) integral");
                derived(i, k) = 2 * p(i, k) / p(i, i);
            }
        }
        if (cartan && *cartan != derived) throw std::invalid_argument("cartan and pairing disagree");
        cartan = derived;
    }
    RootDatum rd = simply_connected(*cartan, j.value("name", std::string("custom")));
    if (dots)
        for (int i = 0; i < rd.rank(); ++i) rd.d_[static_cast<std::size_t>(i)] = (*dots)(i, i) / 2;
    return rd;
}

nlohmann::json RootDatum::to_json() const {
    nlohmann::json c = nlohmann::json::array();
    for (int i = 0; i < rank(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int k = 0; k < rank(); ++k) row.push_back(cartan_(i, k));
        c.push_back(row);
    }
    return {{"name", name_}, {"cartan", c}, {"symmetrizer", d_}};
}

int RootDatum::pair(const Coweight& y, const Weight& x) const { return y.dot(pairing_ * x); }

Eigen::VectorXi RootDatum::labels(const Weight& lambda) const { return coroots_.transpose() * (pairing_ * lambda); }

std::optional<Weight> RootDatum::from_labels(const Eigen::VectorXi& labels) const {
    Eigen::MatrixXi m = coroots_.transpose() * pairing_;
    auto sol = rational_solve(m, labels);
    if (!sol || sol->second != 1) return std::nullopt;
    if (this->labels(sol->first) != labels) return std::nullopt;
    return sol->first;
}

std::optional<Weight> RootDatum::fundamental_weight(int i) const {
    if (i < 0 || i >= rank()) throw std::out_of_range("fundamental_weight: unknown index " + std::to_string(i + 1));
    Eigen::VectorXi e = Eigen::VectorXi::Zero(rank());
    e(i) = 1;
    return from_labels(e);
}

Weight RootDatum::reflect_X(int i, const Weight& lambda) const {
    if (i < 0 || i >= rank()) throw std::out_of_range("reflect_X: unknown index " + std::to_string(i + 1));
    return lambda - pair(h(i), lambda) * alpha(i);
}

Coweight RootDatum::reflect_Y(int i, const Coweight& y) const {
    if (i < 0 || i >= rank()) throw std::out_of_range("reflect_Y: unknown index " + std::to_string(i + 1));
    return y - pair(y, alpha(i)) * h(i);
}

Eigen::VectorXi RootDatum::reflect_root(int i, const Eigen::VectorXi& c) const {
    if (i < 0 || i >= rank()) throw std::out_of_range("reflect_root: unknown index " + std::to_string(i + 1));
    Eigen::VectorXi out = c;
    out(i) -= cartan_.row(i).dot(c);
    return out;
}

Weight RootDatum::act_X(const WeylWord& w, Weight lambda) const {
    for (auto it = w.rbegin(); it != w.rend(); ++it) lambda = reflect_X(*it, lambda);
    return lambda;
}

Coweight RootDatum::act_Y(const WeylWord& w, Coweight y) const {
    for (auto it = w.rbegin(); it != w.rend(); ++it) y = reflect_Y(*it, y);
    return y;
}

Eigen::VectorXi RootDatum::act_root(const WeylWord& w, Eigen::VectorXi c) const {
    for (auto it = w.rbegin(); it != w.rend(); ++it) c = reflect_root(*it, c);
    return c;
}

Eigen::MatrixXi RootDatum::matrix_X(const WeylWord& w) const {
    Eigen::MatrixXi m(x_rank(), x_rank());
    for (int c = 0; c < x_rank(); ++c) m.col(c) = act_X(w, Weight::Unit(x_rank(), c));
    return m;
}

Eigen::MatrixXi RootDatum::matrix_Y(const WeylWord& w) const {
    Eigen::MatrixXi m(y_rank(), y_rank());
    for (int c = 0; c < y_rank(); ++c) m.col(c) = act_Y(w, Coweight::Unit(y_rank(), c));
    return m;
}

Eigen::MatrixXi RootDatum::matrix_root(const WeylWord& w) const {
    Eigen::MatrixXi m(rank(), rank());
    for (int c = 0; c < rank(); ++c) m.col(c) = act_root(w, Eigen::VectorXi::Unit(rank(), c));
    return m;
}

std::optional<std::pair<Eigen::VectorXi, int>> RootDatum::rational_root_coordinates(const Weight& lambda) const {
    return rational_solve(roots_, lambda);
}

std::optional<Eigen::VectorXi> RootDatum::root_coordinates(const Weight& lambda) const {
    auto sol = rational_solve(roots_, lambda);
    if (!sol || sol->second != 1) return std::nullopt;
    if (roots_ * sol->first != lambda) return std::nullopt;
    return sol->first;
}

bool RootDatum::dominance_leq(const Weight& lambda, const Weight& mu) const {
    auto c = root_coordinates(mu - lambda);
    return c && (c->array() >= 0).all();
}

bool RootDatum::is_dominant(const Weight& lambda) const { return (labels(lambda).array() >= 0).all(); }

int RootDatum::label_height(const Weight& lambda) const { return labels(lambda).sum(); }

int RootDatum::root_height(const Weight& lambda) const {
    auto c = rational_root_coordinates(lambda);
    if (!c) throw std::invalid_argument("weight outside the rational span of the simple roots");
    const int num = c->first.sum(), den = c->second;
    // ceiling division for positive den
    return num >= 0 ? (num + den - 1) / den : -((-num) / den);
}

int RootDatum::coxeter_m(int i, int j) const {
    if (i == j) return 1;
    switch (cartan_(i, j) * cartan_(j, i)) {
        case 0: return 2;
        case 1: return 3;
        case 2: return 4;
        case 3: return 6;
        default: throw std::invalid_argument("infinite Coxeter exponent");
    }
}

WeylWord RootDatum::longest_element(const std::vector<int>& sub) const {
    for (int j : sub)
        if (j < 0 || j >= rank()) throw std::out_of_range("longest_element: unknown index " + std::to_string(j + 1));
    WeylWord w;
    const int bound = 4 * rank() * rank() * 16 + 64;
    for (;;) {
        bool extended = false;
        for (int j : sub) {
            // l(w s_j) > l(w) iff w(alpha_j) is a positive root
            Eigen::VectorXi img = act_root(w, Eigen::VectorXi::Unit(rank(), j));
            if ((img.array() >= 0).all()) {
                w.push_back(j);
                extended = true;
                break;
            }
        }
        if (!extended) return w;
        if (static_cast<int>(w.size()) > bound)
            throw std::invalid_argument("longest_element: parabolic subgroup is not finite");
    }
}

WeylWord RootDatum::reduced_word(const WeylWord& word) const {
    Eigen::MatrixXi m = matrix_root(word);
    WeylWord suffix;
    const Eigen::MatrixXi id = Eigen::MatrixXi::Identity(rank(), rank());
    while (m != id) {
        int found = -1;
        for (int i = 0; i < rank() && found < 0; ++i)
            if ((m.col(i).array() <= 0).all()) found = i;
        if (found < 0) throw std::logic_error("reduced_word: no descent found");
        m = m * simple_reflection_root(cartan_, found);
        suffix.push_back(found);
        if (suffix.size() > word.size()) throw std::logic_error("reduced_word: length grew");
    }
    return WeylWord(suffix.rbegin(), suffix.rend());
}

bool RootDatum::same_element(const WeylWord& a, const WeylWord& b) const { return matrix_root(a) == matrix_root(b); }

std::set<Weight, LatticeLess> RootDatum::orbit(const Weight& lambda) const {
    std::set<Weight, LatticeLess> seen{lambda};
    std::deque<Weight> todo{lambda};
    while (!todo.empty()) {
        Weight w = todo.front();
        todo.pop_front();
        for (int i = 0; i < rank(); ++i) {
            Weight s = reflect_X(i, w);
            if (seen.insert(s).second) todo.push_back(s);
        }
        if (seen.size() > 100000) throw std::invalid_argument("orbit: Weyl group too large or infinite");
    }
    return seen;
}

Weight RootDatum::dominant_conjugate(const Weight& lambda) const {
    Weight w = lambda;
    for (int steps = 0; steps < 100000; ++steps) {
        Eigen::VectorXi l = labels(w);
        int i = 0;
        while (i < rank() && l(i) >= 0) ++i;
        if (i == rank()) return w;
        w = reflect_X(i, w);
    }
    throw std::invalid_argument("dominant_conjugate: did not terminate");
}

Weight RootDatum::lowest_weight(const Weight& dominant) const {
    std::vector<int> all(static_cast<std::size_t>(rank()));
    for (int i = 0; i < rank(); ++i) all[static_cast<std::size_t>(i)] = i;
    return act_X(longest_element(all), dominant);
}

std::vector<Weight> RootDatum::dominant_weights_up_to(int hmax) const {
    std::vector<std::pair<Eigen::VectorXi, Weight>> found;
    Eigen::VectorXi l = Eigen::VectorXi::Zero(rank());
    // odometer over label vectors with sum <= hmax
    for (;;) {
        if (auto w = from_labels(l)) found.emplace_back(l, *w);
        int i = 0;
        for (; i < rank(); ++i) {
            l(i) += 1;
            if (l.sum() <= hmax) break;
            l(i) = 0;
        }
        if (i == rank()) break;
    }
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
        if (a.first.sum() != b.first.sum()) return a.first.sum() < b.first.sum();
        return LatticeLess{}(b.first, a.first);
    });
    std::vector<Weight> out;
    for (auto& [lab, w] : found) out.push_back(w);
    return out;
}

namespace {

struct LinearTerm {
    int coeff;
    char symbol;  // 0 for a bare integer
    int index;    // 1-based
};

std::vector<LinearTerm> parse_linear(const std::string& text, const std::string& symbols) {
    std::vector<LinearTerm> out;
    std::size_t pos = 0;
    auto skip = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    auto fail = [&](const std::string& what) {
        throw std::invalid_argument("cannot parse '" + text + "' at offset " + std::to_string(pos) + ": " + what);
    };
    auto read_int = [&]() {
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (start == pos) fail("expected a number");
        return std::stoi(text.substr(start, pos - start));
    };
    skip();
    if (pos == text.size()) fail("empty expression");
    bool first = true;
    while (true) {
        skip();
        if (pos == text.size()) break;
        int sign = 1;
        if (text[pos] == '+' || text[pos] == '-') {
            sign = text[pos] == '-' ? -1 : 1;
            ++pos;
            skip();
        } else if (!first) {
            fail("expected '+' or '-'");
        }
        first = false;
        int coeff = 1;
        bool have_coeff = false;
        if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            coeff = read_int();
            have_coeff = true;
            skip();
            if (pos < text.size() && text[pos] == '*') {
                ++pos;
                skip();
            } else {
                out.push_back({sign * coeff, 0, 0});
                continue;
            }
        }
        if (pos >= text.size() || symbols.find(text[pos]) == std::string::npos)
            fail(have_coeff ? "expected a symbol after '*'" : "expected a term");
        char sym = text[pos++];
        if (pos < text.size() && text[pos] == '_') ++pos;
        int idx = read_int();
        out.push_back({sign * coeff, sym, idx});
    }
    return out;
}

}  // namespace

Weight RootDatum::parse_weight(const std::string& text) const {
    Weight w = zero_weight();
    for (const auto& t : parse_linear(text, "wa")) {
        if (t.symbol == 0) {
            if (t.coeff == 0) continue;
            if (rank() != 1) throw std::invalid_argument("bare integer weight '" + text + "' needs rank one");
            auto f = fundamental_weight(0);
            if (!f) throw std::invalid_argument("fundamental weight w1 is not in X");
            w += t.coeff * *f;
            continue;
        }
        if (t.index < 1 || t.index > rank())
            throw std::invalid_argument("index out of range in weight '" + text + "'");
        if (t.symbol == 'a') {
            w += t.coeff * alpha(t.index - 1);
        } else {
            auto f = fundamental_weight(t.index - 1);
            if (!f) throw std::invalid_argument("fundamental weight w" + std::to_string(t.index) + " is not in X");
            w += t.coeff * *f;
        }
    }
    return w;
}

Coweight RootDatum::parse_coweight(const std::string& text) const {
    Coweight y = zero_coweight();
    for (const auto& t : parse_linear(text, "hy")) {
        if (t.symbol == 0) {
            if (t.coeff == 0) continue;
            throw std::invalid_argument("bare integer in coweight '" + text + "'");
        }
        if (t.symbol == 'h') {
            if (t.index < 1 || t.index > rank()) throw std::invalid_argument("index out of range in '" + text + "'");
            y += t.coeff * h(t.index - 1);
        } else {
            if (t.index < 1 || t.index > y_rank()) throw std::invalid_argument("index out of range in '" + text + "'");
            y(t.index - 1) += t.coeff;
        }
    }
    return y;
}

std::string RootDatum::weight_to_string(const Weight& lambda) const {
    Eigen::VectorXi l = labels(lambda);
    auto back = from_labels(l);
    if (!back || *back != lambda) return format_vector(lambda);
    std::string s;
    for (int i = 0; i < rank(); ++i) {
        if (l(i) == 0) continue;
        std::string term = (std::abs(l(i)) == 1 ? "" : std::to_string(std::abs(l(i))) + "*") + "w" + std::to_string(i + 1);
        if (l(i) < 0) s += "-";
        else if (!s.empty()) s += "+";
        s += term;
    }
    return s.empty() ? "0" : s;
}

}  // namespace iqg
