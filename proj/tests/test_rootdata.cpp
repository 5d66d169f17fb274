#include <doctest.h>

#include <random>

#include "iqg/rootdata.hpp"

using namespace iqg;

namespace {

const char* kTypes[] = {"A1", "A2", "A3", "B2", "C2", "G2", "B3", "C3", "D4"};

Eigen::VectorXi vec(std::initializer_list<int> xs) {
    Eigen::VectorXi v(static_cast<Eigen::Index>(xs.size()));
    int i = 0;
    for (int x : xs) v(i++) = x;
    return v;
}

// Roots enumerated as the Weyl orbit of the simple roots in root coordinates.
std::set<Eigen::VectorXi, LatticeLess> all_roots(const RootDatum& rd) {
    std::set<Eigen::VectorXi, LatticeLess> roots;
    std::vector<Eigen::VectorXi> todo;
    for (int i = 0; i < rd.rank(); ++i) {
        roots.insert(Eigen::VectorXi::Unit(rd.rank(), i));
        todo.push_back(Eigen::VectorXi::Unit(rd.rank(), i));
    }
    while (!todo.empty()) {
        Eigen::VectorXi r = todo.back();
        todo.pop_back();
        for (int i = 0; i < rd.rank(); ++i) {
            Eigen::VectorXi s = rd.reflect_root(i, r);
            if (roots.insert(s).second) todo.push_back(s);
        }
    }
    return roots;
}

}  // namespace

TEST_CASE("catalogue Cartan matrices") {
    CHECK(RootDatum::cartan_of_type("B2") == (Eigen::MatrixXi(2, 2) << 2, -1, -2, 2).finished());
    CHECK(RootDatum::cartan_of_type("C2") == (Eigen::MatrixXi(2, 2) << 2, -2, -1, 2).finished());
    CHECK(RootDatum::cartan_of_type("G2") == (Eigen::MatrixXi(2, 2) << 2, -3, -1, 2).finished());
    auto b2 = RootDatum::of_type("B2");
    CHECK(b2.d(0) == 2);
    CHECK(b2.d(1) == 1);
    auto g2 = RootDatum::of_type("G2");
    CHECK(g2.d(0) == 1);
    CHECK(g2.d(1) == 3);
    for (const char* t : kTypes)
        for (const char* lat : {"simply-connected", "adjoint"}) {
            auto rd = RootDatum::of_type(t, lat);
            for (int i = 0; i < rd.rank(); ++i)
                for (int j = 0; j < rd.rank(); ++j) {
                    CHECK(rd.pair(rd.h(i), rd.alpha(j)) == rd.a(i, j));
                    CHECK(rd.dot(i, j) == rd.dot(j, i));
                }
        }
    CHECK_THROWS(RootDatum::of_type("E9"));
    CHECK_THROWS(RootDatum::of_type("A2", "weird"));
}

TEST_CASE("JSON root data") {
    auto rd = RootDatum::from_json(nlohmann::json::parse(R"({"type":"A3","lattice":"simply-connected"})"));
    CHECK(rd.rank() == 3);
    auto c = RootDatum::from_json(nlohmann::json::parse(R"({"cartan":[[2,-1],[-1,2]]})"));
    CHECK(c.cartan() == RootDatum::cartan_of_type("A2"));
    auto p = RootDatum::from_json(nlohmann::json::parse(R"({"pairing":[[4,-2],[-2,2]]})"));
    CHECK(p.cartan() == RootDatum::cartan_of_type("B2"));
    CHECK_THROWS(RootDatum::from_json(nlohmann::json::parse(R"({"cartan":[[2,1],[-1,2]]})")));
    CHECK_THROWS(RootDatum::from_json(nlohmann::json::parse(R"({"cartan":[[2,-1],[0,2]]})")));
    CHECK_THROWS(RootDatum::from_json(nlohmann::json::parse(R"({"pairing":[[3,-1],[-1,2]]})")));
}

TEST_CASE("simple reflections") {
    auto a1 = RootDatum::of_type("A1");
    Weight w = *a1.fundamental_weight(0);
    CHECK(a1.reflect_X(0, a1.alpha(0)) == -a1.alpha(0));
    CHECK(a1.reflect_X(0, w) == w - a1.alpha(0));
    auto a2 = RootDatum::of_type("A2");
    CHECK(a2.reflect_X(0, a2.alpha(1)) == a2.alpha(0) + a2.alpha(1));
    CHECK(a2.reflect_Y(0, a2.h(0)) == -a2.h(0));
    CHECK(a2.reflect_Y(0, a2.h(1)) == a2.h(0) + a2.h(1));
    CHECK_THROWS(a2.reflect_X(2, a2.alpha(0)));

    std::mt19937 rng(7);
    std::uniform_int_distribution<int> dist(-4, 4);
    for (const char* t : kTypes)
        for (const char* lat : {"simply-connected", "adjoint"}) {
            auto rd = RootDatum::of_type(t, lat);
            for (int trial = 0; trial < 20; ++trial) {
                Weight x(rd.x_rank());
                Coweight y(rd.y_rank());
                for (int k = 0; k < x.size(); ++k) x(k) = dist(rng);
                for (int k = 0; k < y.size(); ++k) y(k) = dist(rng);
                for (int i = 0; i < rd.rank(); ++i) {
                    CHECK(rd.reflect_X(i, rd.reflect_X(i, x)) == x);
                    CHECK(rd.reflect_Y(i, rd.reflect_Y(i, y)) == y);
                    CHECK(rd.pair(rd.reflect_Y(i, y), rd.reflect_X(i, x)) == rd.pair(y, x));
                }
            }
        }
}

TEST_CASE("braid relations") {
    for (const char* t : kTypes) {
        auto rd = RootDatum::of_type(t);
        for (int i = 0; i < rd.rank(); ++i)
            for (int j = 0; j < rd.rank(); ++j) {
                if (i == j) continue;
                int m = rd.coxeter_m(i, j);
                WeylWord u, v;
                for (int k = 0; k < m; ++k) {
                    u.push_back(k % 2 ? j : i);
                    v.push_back(k % 2 ? i : j);
                }
                CHECK(rd.matrix_X(u) == rd.matrix_X(v));
                CHECK(rd.matrix_Y(u) == rd.matrix_Y(v));
            }
    }
}

TEST_CASE("dominance and dominant weights") {
    auto a1 = RootDatum::of_type("A1");
    Weight w = *a1.fundamental_weight(0);
    CHECK(a1.dominance_leq(w, w));
    CHECK(a1.dominance_leq(w - a1.alpha(0), w));
    CHECK_FALSE(a1.dominance_leq(w, w - a1.alpha(0)));
    CHECK(a1.is_dominant(a1.zero_weight()));
    CHECK_FALSE(a1.is_dominant(-a1.alpha(0)));
    auto a2 = RootDatum::of_type("A2");
    CHECK_FALSE(a2.dominance_leq(a2.zero_weight(), *a2.fundamental_weight(0)));
    CHECK(a2.is_dominant(a2.parse_weight("w1+w2")));
    CHECK(a2.parse_weight("2*w1 - a2") == vec({3, -2}));
    CHECK(a1.parse_weight("3") == vec({3}));
    CHECK_THROWS(a2.parse_weight("3"));
    CHECK_THROWS(a2.parse_weight("w3"));
    CHECK(a2.weight_to_string(vec({2, -1})) == "2*w1-w2");
    CHECK(a2.label_height(a2.parse_weight("w1+w2")) == 2);
    CHECK(a2.root_height(a2.parse_weight("w1")) == 1);
    CHECK(a2.root_height(a2.parse_weight("w1+w2")) == 2);
    auto g2 = RootDatum::of_type("G2");
    CHECK(g2.dominant_weights_up_to(2).size() == 6);
    auto adj = RootDatum::of_type("A2", "adjoint");
    CHECK_FALSE(adj.fundamental_weight(0).has_value());
    CHECK(adj.dominant_weights_up_to(3).size() == 4);  // 0, w1+w2, 3w1, 3w2
}

TEST_CASE("longest elements") {
    auto a3 = RootDatum::of_type("A3");
    CHECK(a3.longest_element({}).empty());
    CHECK(a3.longest_element({0}) == WeylWord{0});
    CHECK(a3.longest_element({0, 2}) == WeylWord{0, 2});
    for (const char* t : kTypes) {
        auto rd = RootDatum::of_type(t);
        std::vector<int> all;
        for (int i = 0; i < rd.rank(); ++i) all.push_back(i);
        WeylWord w0 = rd.longest_element(all);
        auto roots = all_roots(rd);
        CHECK(w0.size() * 2 == roots.size());
        CHECK(rd.reduced_word(w0).size() == w0.size());
        for (int j : all) {
            Eigen::VectorXi img = rd.act_root(w0, Eigen::VectorXi::Unit(rd.rank(), j));
            CHECK((img.array() <= 0).all());
            CHECK(roots.count(-img) == 1);
            CHECK((-img).sum() == 1);  // a negative simple root
        }
        WeylWord doubled = w0;
        doubled.insert(doubled.end(), w0.begin(), w0.end());
        CHECK(rd.reduced_word(doubled).empty());
    }
    auto b2 = RootDatum::of_type("B2");
    CHECK(b2.same_element({0, 1, 0, 1}, {1, 0, 1, 0}));
    CHECK(b2.reduced_word({0, 1, 1, 0, 1}) == WeylWord{1});
}
