#include "iqg/satake.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace iqg {

namespace {

using MatL = Eigen::Matrix<long, Eigen::Dynamic, Eigen::Dynamic>;

int floor_mod(long a, long m) {
    long r = a % m;
    if (r < 0) r += m;
    return static_cast<int>(r);
}

long floor_div(long a, long b) {
    long qv = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --qv;
    return qv;
}

Eigen::MatrixXi narrow(const MatL& m) {
    Eigen::MatrixXi out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (std::labs(m(i, j)) > 1000000000L) throw std::overflow_error("smith_normal_form: entry overflow");
            out(i, j) = static_cast<int>(m(i, j));
        }
    return out;
}

Eigen::MatrixXi permutation_matrix(const std::vector<int>& p) {
    const int n = static_cast<int>(p.size());
    Eigen::MatrixXi m = Eigen::MatrixXi::Zero(n, n);
    for (int i = 0; i < n; ++i) m(p[static_cast<std::size_t>(i)], i) = 1;
    return m;
}

Eigen::MatrixXi read_int_matrix(const nlohmann::json& j) {
    const int rows = static_cast<int>(j.size());
    if (rows == 0) throw std::invalid_argument("empty matrix");
    Eigen::MatrixXi m(rows, static_cast<int>(j.at(0).size()));
    for (int i = 0; i < rows; ++i) {
        if (static_cast<int>(j.at(i).size()) != m.cols()) throw std::invalid_argument("ragged matrix");
        for (int k = 0; k < m.cols(); ++k) m(i, k) = j.at(i).at(k).get<int>();
    }
    return m;
}

nlohmann::json write_int_matrix(const Eigen::MatrixXi& m) {
    nlohmann::json out = nlohmann::json::array();
    for (int i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
        out.push_back(row);
    }
    return out;
}

// Positive definiteness of the symmetrized Cartan submatrix, by exact
// leading principal minors (fraction-free elimination).
bool finite_type(const RootDatum& rd, const std::vector<int>& sub) {
    const auto n = static_cast<Eigen::Index>(sub.size());
    MatL s(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b)
            s(a, b) = rd.dot(sub[static_cast<std::size_t>(a)], sub[static_cast<std::size_t>(b)]);
    long prev = 1;
    for (Eigen::Index k = 0; k < n; ++k) {
        // after k steps of Bareiss, s(k, k) is the (k+1)-th leading minor
        if (s(k, k) <= 0) return false;
        for (Eigen::Index i = k + 1; i < n; ++i)
            for (Eigen::Index j = k + 1; j < n; ++j) s(i, j) = (s(k, k) * s(i, j) - s(i, k) * s(k, j)) / prev;
        prev = s(k, k);
    }
    return true;
}

}  // namespace

SmithForm smith_normal_form(const Eigen::MatrixXi& m) {
    const Eigen::Index rows = m.rows(), cols = m.cols();
    MatL a = m.cast<long>();
    MatL u = MatL::Identity(rows, rows), uinv = MatL::Identity(rows, rows), v = MatL::Identity(cols, cols);

    auto swap_rows = [&](Eigen::Index i, Eigen::Index j) {
        if (i == j) return;
        a.row(i).swap(a.row(j));
        u.row(i).swap(u.row(j));
        uinv.col(i).swap(uinv.col(j));
    };
    auto swap_cols = [&](Eigen::Index i, Eigen::Index j) {
        if (i == j) return;
        a.col(i).swap(a.col(j));
        v.col(i).swap(v.col(j));
    };
    // row_i -= c row_t
    auto row_sub = [&](Eigen::Index i, Eigen::Index t, long c) {
        if (c == 0) return;
        a.row(i) -= c * a.row(t);
        u.row(i) -= c * u.row(t);
        uinv.col(t) += c * uinv.col(i);
    };
    auto col_sub = [&](Eigen::Index j, Eigen::Index t, long c) {
        if (c == 0) return;
        a.col(j) -= c * a.col(t);
        v.col(j) -= c * v.col(t);
    };

    Eigen::Index t = 0;
    for (; t < std::min(rows, cols); ++t) {
        // smallest nonzero entry of the trailing block as pivot
        Eigen::Index bi = -1, bj = -1;
        for (Eigen::Index i = t; i < rows; ++i)
            for (Eigen::Index j = t; j < cols; ++j)
                if (a(i, j) != 0 && (bi < 0 || std::labs(a(i, j)) < std::labs(a(bi, bj)))) {
                    bi = i;
                    bj = j;
                }
        if (bi < 0) break;
        swap_rows(t, bi);
        swap_cols(t, bj);
        for (;;) {
            bool again = false;
            for (Eigen::Index i = t + 1; i < rows; ++i) row_sub(i, t, floor_div(a(i, t), a(t, t)));
            for (Eigen::Index j = t + 1; j < cols; ++j) col_sub(j, t, floor_div(a(t, j), a(t, t)));
            Eigen::Index ri = -1, cj = -1;
            for (Eigen::Index i = t + 1; i < rows; ++i)
                if (a(i, t) != 0 && (ri < 0 || std::labs(a(i, t)) < std::labs(a(ri, t)))) ri = i;
            for (Eigen::Index j = t + 1; j < cols; ++j)
                if (a(t, j) != 0 && (cj < 0 || std::labs(a(t, j)) < std::labs(a(t, cj)))) cj = j;
            if (ri >= 0) {
                swap_rows(t, ri);
                again = true;
            } else if (cj >= 0) {
                swap_cols(t, cj);
                again = true;
            } else {
                // divisibility of the trailing block by the pivot
                for (Eigen::Index i = t + 1; i < rows && !again; ++i)
                    for (Eigen::Index j = t + 1; j < cols; ++j)
                        if (a(i, j) % a(t, t) != 0) {
                            a.row(t) += a.row(i);
                            u.row(t) += u.row(i);
                            uinv.col(i) -= uinv.col(t);
                            again = true;
                            break;
                        }
            }
            if (!again) break;
        }
        if (a(t, t) < 0) {
            a.row(t) = -a.row(t);
            u.row(t) = -u.row(t);
            uinv.col(t) = -uinv.col(t);
        }
    }
    SmithForm out;
    out.U = narrow(u);
    out.Uinv = narrow(uinv);
    out.D = narrow(a);
    out.V = narrow(v);
    out.rank = static_cast<int>(t);
    return out;
}

Eigen::MatrixXi integer_kernel(const Eigen::MatrixXi& m) {
    SmithForm s = smith_normal_form(m);
    return s.V.rightCols(m.cols() - s.rank);
}

std::string to_string(KCase c) {
    switch (c) {
        case KCase::I: return "I";
        case KCase::II: return "II";
        case KCase::III: return "III";
    }
    return "?";
}

SatakeDatum::SatakeDatum(RootDatum rd, std::vector<int> black, std::vector<int> tau,
                         std::optional<Eigen::MatrixXi> tau_X, std::optional<Eigen::MatrixXi> tau_Y,
                         std::string name)
    : name_(std::move(name)), rd_(std::move(rd)), black_(std::move(black)), tau_(std::move(tau)) {
    const int n = rd_.rank();
    if (tau_.empty()) {
        tau_.resize(static_cast<std::size_t>(n));
        std::iota(tau_.begin(), tau_.end(), 0);
    }
    if (static_cast<int>(tau_.size()) != n) throw std::invalid_argument("tau must have one entry per node");
    std::vector<int> seen(static_cast<std::size_t>(n), 0);
    for (int t : tau_) {
        if (t < 0 || t >= n) throw std::invalid_argument("tau entry out of range");
        if (seen[static_cast<std::size_t>(t)]++) throw std::invalid_argument("tau is not a permutation");
    }
    std::sort(black_.begin(), black_.end());
    if (std::adjacent_find(black_.begin(), black_.end()) != black_.end())
        throw std::invalid_argument("repeated black node");
    for (int j : black_)
        if (j < 0 || j >= n) throw std::invalid_argument("black node out of range");
    for (int i = 0; i < n; ++i)
        if (!is_black(i)) white_.push_back(i);

    // Coordinate permutations are the canonical choice when either lattice
    // basis is indexed by I compatibly with the pairing.
    const bool perm_ok = rd_.x_rank() == n && rd_.y_rank() == n &&
                         rd_.pairing_matrix() == Eigen::MatrixXi::Identity(n, n) &&
                         (rd_.coroot_matrix() == Eigen::MatrixXi::Identity(n, n) ||
                          rd_.root_matrix() == Eigen::MatrixXi::Identity(n, n));
    if (tau_X) {
        tau_X_ = *tau_X;
    } else if (perm_ok) {
        tau_X_ = permutation_matrix(tau_);
    }
    if (tau_Y) {
        tau_Y_ = *tau_Y;
    } else if (perm_ok) {
        tau_Y_ = permutation_matrix(tau_);
    }
    if (tau_X_.size() == 0 || tau_Y_.size() == 0)
        throw std::invalid_argument("tau_X and tau_Y must be given for this root datum");
    if (tau_X_.rows() != rd_.x_rank() || tau_X_.cols() != rd_.x_rank() || tau_Y_.rows() != rd_.y_rank() ||
        tau_Y_.cols() != rd_.y_rank())
        throw std::invalid_argument("tau_X / tau_Y have the wrong size");
    derive();
}

bool SatakeDatum::is_black(int i) const { return std::binary_search(black_.begin(), black_.end(), i); }

void SatakeDatum::derive() {
    finite_ = finite_type(rd_, black_);
    if (!finite_) return;
    w_black_ = rd_.longest_element(black_);
    const Eigen::MatrixXi tau_root = permutation_matrix(tau_);
    theta_X_ = -rd_.matrix_X(w_black_) * tau_X_;
    theta_Y_ = -rd_.matrix_Y(w_black_) * tau_Y_;
    theta_root_ = -rd_.matrix_root(w_black_) * tau_root;

    snf_ = smith_normal_form(Eigen::MatrixXi::Identity(rd_.x_rank(), rd_.x_rank()) - theta_X_);
    moduli_.clear();
    kept_.clear();
    for (int i = 0; i < rd_.x_rank(); ++i) {
        const int m = i < snf_.rank ? snf_.D(i, i) : 0;
        if (m == 1) continue;
        kept_.push_back(i);
        moduli_.push_back(m);
    }
    y_fixed_ = integer_kernel(theta_Y_ - Eigen::MatrixXi::Identity(rd_.y_rank(), rd_.y_rank()));
}

std::vector<std::string> SatakeDatum::validate() const {
    std::vector<std::string> out;
    const int n = rd_.rank();
    auto node = [](int i) { return std::to_string(i + 1); };
    for (int i = 0; i < n; ++i)
        if (tau(tau(i)) != i) {
            out.push_back("tau is not an involution on I");
            break;
        }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (rd_.a(tau(i), tau(j)) != rd_.a(i, j)) {
                out.push_back("tau does not preserve the Cartan matrix (a_" + node(i) + node(j) + ")");
                i = n;
                break;
            }
    for (int j : black_)
        if (!is_black(tau(j))) {
            out.push_back("tau(I_black) != I_black (node " + node(j) + ")");
            break;
        }
    // tau on the lattices
    if (tau_X_ * tau_X_ != Eigen::MatrixXi::Identity(rd_.x_rank(), rd_.x_rank()))
        out.push_back("tau_X is not an involution");
    if (tau_Y_ * tau_Y_ != Eigen::MatrixXi::Identity(rd_.y_rank(), rd_.y_rank()))
        out.push_back("tau_Y is not an involution");
    for (int i = 0; i < n; ++i) {
        if (tau_X_ * rd_.alpha(i) != rd_.alpha(tau(i))) {
            out.push_back("tau_X alpha_" + node(i) + " != alpha_tau(" + node(i) + ")");
            break;
        }
    }
    for (int i = 0; i < n; ++i) {
        if (tau_Y_ * rd_.h(i) != rd_.h(tau(i))) {
            out.push_back("tau_Y h_" + node(i) + " != h_tau(" + node(i) + ")");
            break;
        }
    }
    if (tau_Y_.transpose() * rd_.pairing_matrix() * tau_X_ != rd_.pairing_matrix())
        out.push_back("tau does not preserve the pairing of Y and X");
    if (!finite_) {
        out.push_back("I_black is not of finite type");
        return out;
    }
    for (int j : black_) {
        Eigen::VectorXi wa = rd_.act_root(w_black_, Eigen::VectorXi::Unit(n, j));
        if (wa != -Eigen::VectorXi::Unit(n, tau(j))) {
            out.push_back("w_black alpha_" + node(j) + " != -alpha_tau(" + node(j) + ")");
        }
    }
    for (int i = 0; i < n; ++i) {
        const int v = gsat4_value(i);
        if (v == -1) out.push_back("(gSat4) <h_" + node(i) + ", theta(alpha_" + node(i) + ")> = -1");
    }
    if (theta_X_ * theta_X_ != Eigen::MatrixXi::Identity(rd_.x_rank(), rd_.x_rank()))
        out.push_back("theta^2 != id on X");
    if (theta_Y_ * theta_Y_ != Eigen::MatrixXi::Identity(rd_.y_rank(), rd_.y_rank()))
        out.push_back("theta^2 != id on Y");
    return out;
}

int SatakeDatum::gsat4_value(int i) const {
    if (!finite_) throw std::logic_error("gsat4_value: I_black is not of finite type");
    const Eigen::VectorXi c = theta_root_.col(i);
    int s = 0;
    for (int j = 0; j < rank(); ++j) s += rd_.a(i, j) * c(j);
    return s;
}

int SatakeDatum::lemma_value(int k) const {
    if (!finite_) throw std::logic_error("lemma_value: I_black is not of finite type");
    Eigen::VectorXi c = rd_.act_root(w_black_, Eigen::VectorXi::Unit(rank(), k));
    c(k) -= 1;
    int s = 0;
    for (int j = 0; j < rank(); ++j) s += rd_.a(k, j) * c(j);
    return s;
}

int SatakeDatum::dot_theta(int k) const {
    const Eigen::VectorXi c = theta_root_.col(k);
    int s = 0;
    for (int j = 0; j < rank(); ++j) s += c(j) * rd_.dot(k, j);
    return s;
}

KCase SatakeDatum::case_of(int k) const {
    if (k < 0 || k >= rank() || is_black(k)) throw std::invalid_argument("case_of: node is not white");
    if (tau(k) != k) return KCase::III;
    const Eigen::VectorXi wa = rd_.act_root(w_black_, Eigen::VectorXi::Unit(rank(), k));
    if (wa == Eigen::VectorXi::Unit(rank(), k)) return KCase::I;
    if (lemma_value(k) > -2)
        throw std::logic_error("case II bound <h_k, w_black alpha_k - alpha_k> <= -2 fails at node " +
                               std::to_string(k + 1));
    return KCase::II;
}

IWeight SatakeDatum::project(const Weight& lambda) const {
    if (!finite_) throw std::logic_error("project: I_black is not of finite type");
    const Eigen::VectorXi s = snf_.U * lambda;
    IWeight out;
    out.coords.resize(static_cast<Eigen::Index>(kept_.size()));
    for (std::size_t r = 0; r < kept_.size(); ++r) {
        const int m = moduli_[r];
        const int v = s(kept_[r]);
        out.coords(static_cast<Eigen::Index>(r)) = m == 0 ? v : floor_mod(v, m);
    }
    return out;
}

Weight SatakeDatum::lift(const IWeight& zeta) const {
    if (zeta.coords.size() != static_cast<Eigen::Index>(kept_.size()))
        throw std::invalid_argument("lift: class has the wrong shape");
    Eigen::VectorXi s = Eigen::VectorXi::Zero(rd_.x_rank());
    for (std::size_t r = 0; r < kept_.size(); ++r) s(kept_[r]) = zeta.coords(static_cast<Eigen::Index>(r));
    return snf_.Uinv * s;
}

std::string SatakeDatum::iweight_to_string(const IWeight& zeta) const {
    std::ostringstream os;
    os << "(";
    for (Eigen::Index r = 0; r < zeta.coords.size(); ++r) {
        if (r) os << ", ";
        os << zeta.coords(r);
        const int m = moduli_[static_cast<std::size_t>(r)];
        if (m != 0) os << " mod " << m;
    }
    os << ")";
    return os.str();
}

int SatakeDatum::pair(const Coweight& h, const IWeight& zeta) const {
    if (!in_y_fixed(h)) throw std::invalid_argument("pair: coweight is not theta-fixed");
    return rd_.pair(h, lift(zeta));
}

int SatakeDatum::parity(int k, const IWeight& zeta) const {
    if (case_of(k) != KCase::I) throw std::invalid_argument("parity: node " + std::to_string(k + 1) + " is not case I");
    return floor_mod(rd_.pair(rd_.h(k), lift(zeta)), 2);
}

SatakeDatum SatakeDatum::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("Satake datum JSON must be an object");
    RootDatum rd = [&] {
        const auto& d = j.at("datum");
        if (d.is_string()) return RootDatum::of_type(d.get<std::string>(), j.value("lattice", std::string("simply-connected")));
        return RootDatum::from_json(d);
    }();
    const int n = rd.rank();
    std::vector<int> black;
    if (j.contains("black"))
        for (const auto& b : j.at("black")) black.push_back(b.get<int>() - 1);
    std::vector<int> tau(static_cast<std::size_t>(n));
    std::iota(tau.begin(), tau.end(), 0);
    if (j.contains("tau")) {
        const auto& t = j.at("tau");
        if (t.is_string()) {
            const std::string s = t.get<std::string>();
            if (s == "flip") {
                const std::string& nm = rd.name();
                if (!nm.empty() && nm[0] == 'A') {
                    for (int i = 0; i < n; ++i) tau[static_cast<std::size_t>(i)] = n - 1 - i;
                } else if (!nm.empty() && nm[0] == 'D' && n >= 4) {
                    std::swap(tau[static_cast<std::size_t>(n - 1)], tau[static_cast<std::size_t>(n - 2)]);
                } else {
                    throw std::invalid_argument("\"flip\" is only defined for types A and D");
                }
            } else if (s != "id") {
                throw std::invalid_argument("tau must be \"id\", \"flip\" or a permutation list");
            }
        } else {
            if (static_cast<int>(t.size()) != n) throw std::invalid_argument("tau list must have one entry per node");
            for (int i = 0; i < n; ++i) tau[static_cast<std::size_t>(i)] = t.at(static_cast<std::size_t>(i)).get<int>() - 1;
        }
    }
    std::optional<Eigen::MatrixXi> tx, ty;
    if (j.contains("tau_X")) tx = read_int_matrix(j.at("tau_X"));
    if (j.contains("tau_Y")) ty = read_int_matrix(j.at("tau_Y"));
    return SatakeDatum(std::move(rd), std::move(black), std::move(tau), tx, ty, j.value("name", std::string()));
}

nlohmann::json SatakeDatum::to_json() const {
    nlohmann::json j;
    if (!name_.empty()) j["name"] = name_;
    j["datum"] = rd_.to_json();
    nlohmann::json b = nlohmann::json::array();
    for (int x : black_) b.push_back(x + 1);
    j["black"] = b;
    nlohmann::json t = nlohmann::json::array();
    for (int x : tau_) t.push_back(x + 1);
    j["tau"] = t;
    j["tau_X"] = write_int_matrix(tau_X_);
    j["tau_Y"] = write_int_matrix(tau_Y_);
    return j;
}

IParams IParams::defaults(const SatakeDatum& sd) {
    IParams p;
    for (int i = 0; i < sd.rank(); ++i) {
        p.sigma.push_back(RatScalar::q_pow(-sd.datum().d(i)));
        p.kappa.emplace_back(0);
    }
    return p;
}

IParams IParams::from_json(const SatakeDatum& sd, const nlohmann::json& j) {
    IParams p = defaults(sd);
    if (j.is_null()) return p;
    auto read = [&](const char* key, std::vector<RatScalar>& dst) {
        if (!j.contains(key)) return;
        for (const auto& [k, v] : j.at(key).items()) {
            const int i = std::stoi(k) - 1;
            if (i < 0 || i >= sd.rank()) throw std::invalid_argument(std::string(key) + ": node " + k + " out of range");
            dst[static_cast<std::size_t>(i)] =
                v.is_string() ? RatScalar::parse(v.get<std::string>()) : RatScalar(v.get<long>());
        }
    };
    read("sigma", p.sigma);
    read("kappa", p.kappa);
    return p;
}

nlohmann::json IParams::to_json(const SatakeDatum& sd) const {
    nlohmann::json s = nlohmann::json::object(), k = nlohmann::json::object();
    for (int i : sd.white()) {
        s[std::to_string(i + 1)] = sigma[static_cast<std::size_t>(i)].pretty();
        k[std::to_string(i + 1)] = kappa[static_cast<std::size_t>(i)].pretty();
    }
    return {{"sigma", s}, {"kappa", k}};
}

bool kappa_allowed(const SatakeDatum& sd, int k) {
    const RootDatum& rd = sd.datum();
    auto orthogonal_to_black = [&](int i) {
        for (int j : sd.black())
            if (rd.a(i, j) != 0) return false;
        return true;
    };
    if (sd.tau(k) != k || !orthogonal_to_black(k)) return false;
    for (int kk : sd.white())
        if (sd.tau(kk) == kk && orthogonal_to_black(kk) && rd.a(k, kk) % 2 != 0) return false;
    return true;
}

std::vector<std::string> validate_params(const SatakeDatum& sd, const IParams& p) {
    std::vector<std::string> out;
    const auto n = static_cast<std::size_t>(sd.rank());
    if (p.sigma.size() != n || p.kappa.size() != n) {
        out.push_back("parameter vectors have the wrong length");
        return out;
    }
    for (int k : sd.white()) {
        const std::string node = std::to_string(k + 1);
        const auto uk = static_cast<std::size_t>(k);
        if (p.sigma[uk].is_zero()) out.push_back("sigma_" + node + " = 0");
        if (sd.dot_theta(k) == 0 && p.sigma[uk] != p.sigma[static_cast<std::size_t>(sd.tau(k))])
            out.push_back("sigma_" + node + " != sigma_tau(" + node + ") although k.theta(k) = 0");
        if (!p.kappa[uk].is_zero() && !kappa_allowed(sd, k)) out.push_back("kappa_" + node + " must vanish");
    }
    return out;
}

const std::vector<CatalogueEntry>& satake_catalogue() {
    static const std::vector<CatalogueEntry> entries = {
        {"split-a1", "split sl2 (AI, rank one)", {{"name", "split-a1"}, {"datum", "A1"}, {"black", nlohmann::json::array()}, {"tau", "id"}}},
        {"a2-flip", "quasi-split A2 with the diagram flip (AIII)", {{"name", "a2-flip"}, {"datum", "A2"}, {"black", nlohmann::json::array()}, {"tau", "flip"}}},
        {"a3-aii", "A3 with black nodes 1, 3 (AII)", {{"name", "a3-aii"}, {"datum", "A3"}, {"black", {1, 3}}, {"tau", "id"}}},
        {"b2-bi", "B2 with the short node 2 black (BI)", {{"name", "b2-bi"}, {"datum", "B2"}, {"black", {2}}, {"tau", "id"}}},
        {"c2-ci", "split C2 (CI)", {{"name", "c2-ci"}, {"datum", "C2"}, {"black", nlohmann::json::array()}, {"tau", "id"}}},
    };
    return entries;
}

nlohmann::json rejected_example() {
    return {{"name", "a2-black1"}, {"datum", "A2"}, {"black", {1}}, {"tau", "id"}};
}

std::optional<SatakeDatum> catalogue_datum(const std::string& name) {
    for (const auto& e : satake_catalogue())
        if (e.name == name) return SatakeDatum::from_json(e.spec);
    return std::nullopt;
}

SatakeDatum load_satake(const nlohmann::json& j) {
    if (j.is_string()) {
        if (auto sd = catalogue_datum(j.get<std::string>())) return *sd;
        throw std::invalid_argument("unknown catalogue entry " + j.get<std::string>());
    }
    return SatakeDatum::from_json(j);
}

}  // namespace iqg
