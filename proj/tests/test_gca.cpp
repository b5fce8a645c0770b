#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <random>

#include "tatelab/gca.hpp"

using namespace tatelab;
using namespace tatelab::gca;

namespace {

long binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    long r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

}  // namespace

TEST_CASE("nine-variable presentation with three linear eliminations") {
    auto pres = load_presentation_file("share/presentations/M.json");
    Algebra& m = pres.alg();
    CHECK(m.num_gens() == 9);
    CHECK(m.num_kept() == 6);
    CHECK(m.characteristic() == 0);

    // The defining linear relations hold after substitution.
    for (int i = 0; i < 3; ++i) {
        auto rel = m.add(m.add(m.var(i), m.var(i + 3)), m.var(i + 6));
        CHECK(m.is_zero(rel));
    }

    // Slice dimensions are those of a polynomial ring on six variables.
    for (int deg = 1; deg <= 8; ++deg)
        CHECK(static_cast<long>(m.basis_in_degree({-2 * deg}).size()) == binom(deg + 5, 5));
    CHECK(m.basis_in_degree({-2}).size() == 6);
    CHECK(m.basis_in_degree({-6}).size() == 56);
    CHECK(m.basis_in_degree({-1}).empty());
    CHECK(m.basis_in_degree({2}).empty());
    CHECK(m.basis_in_degree({0}).size() == 1);
}

TEST_CASE("cyclic action on the nine-variable presentation") {
    auto pres = load_presentation_file("share/presentations/M.json");
    Algebra& m = pres.alg();
    const RingMap& gamma = pres.maps.at("gamma");

    CHECK(m.equal(gamma.apply(m.var("x0")), m.var("x1")));
    auto img5 = gamma.apply(m.var("x5"));
    CHECK(m.equal(img5, m.sub(m.sub(m.zero(), m.var("x0")), m.var("x3"))));

    for (int t : {-2, -4, -6}) {
        IntMat a = gamma.matrix_in_degree({t});
        int n = a.rows();

        IntMat p = IntMat::identity(n);
        for (int k = 0; k < 9; ++k) p = p * a;
        CHECK(p == IntMat::identity(n));

        Int d = det(a);
        CHECK((d == 1 || d == -1));

        // The cube of the action is unipotent mod 3 of nilpotency class 3.
        F3Mat a3 = to_f3(a).pow(3);
        F3Mat nil = a3 - F3Mat::identity(n);
        CHECK(nil.pow(3).is_zero());
    }

    // Functoriality: the matrix implements the map on coordinates.
    auto basis = m.basis_in_degree({-4});
    IntMat a = gamma.matrix_in_degree({-4});
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> d(-5, 5);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Int> c(basis.size());
        for (auto& x : c) x = d(rng);
        Element el = m.from_coords(c, basis);
        auto lhs = m.coords(gamma.apply(el), basis);
        IntMat cm(static_cast<int>(c.size()), 1);
        for (size_t i = 0; i < c.size(); ++i) cm.at(static_cast<int>(i), 0) = c[i];
        IntMat rhs = a * cm;
        for (size_t i = 0; i < c.size(); ++i) CHECK(lhs[i] == rhs.at(static_cast<int>(i), 0));
    }

    // Packed mod-3 matrix agrees with the exact one.
    CHECK(to_f3(a) == gamma.matrix_in_degree_mod3({-4}));
}

TEST_CASE("exterior-polynomial presentation over F_3") {
    auto pres = load_presentation_file("share/presentations/T.json");
    Algebra& t = pres.alg();
    CHECK(t.characteristic() == 3);

    auto c1 = t.var("c1"), c2 = t.var("c2"), d1 = t.var("d1"), d2 = t.var("d2");

    CHECK(t.is_zero(t.mul(c1, c1)));
    CHECK(t.equal(t.mul(c1, c2), t.scale(t.mul(c2, c1), -1)));
    CHECK(t.equal(t.mul(d1, c1), t.mul(c1, d1)));
    CHECK(t.is_zero(t.scale(d1, 3)));
    CHECK(t.equal(t.pow(t.add(d1, d2), 3), t.add(t.pow(d1, 3), t.pow(d2, 3))));

    CHECK(t.basis_in_degree({1, -8}).size() == 9);
    CHECK(t.basis_in_degree({3, -6}).size() == 1);
    CHECK(t.basis_in_degree({0, -18}).size() == 10);
    CHECK(t.basis_in_degree({2, -4}).size() == 3);
    CHECK(t.basis_in_degree({4, -8}).empty());

    const RingMap& gamma = pres.maps.at("gamma");
    IntMat a = gamma.matrix_in_degree({1, -2});
    CHECK(a.rows() == 3);
    CHECK(a * a * a == IntMat::identity(3));
    CHECK_FALSE(a == IntMat::identity(3));

    // Signs behave associatively and graded-commutatively on random words.
    std::mt19937 rng(19);
    std::uniform_int_distribution<int> pick(0, 5);
    std::vector<Element> vars = {t.var("d1"), t.var("d2"), t.var("d3"),
                                 t.var("c1"), t.var("c2"), t.var("c3")};
    for (int trial = 0; trial < 40; ++trial) {
        Element a1 = vars[pick(rng)], b1 = vars[pick(rng)], e1 = vars[pick(rng)];
        CHECK(t.equal(t.mul(t.mul(a1, b1), e1), t.mul(a1, t.mul(b1, e1))));
    }
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            bool both_odd = i >= 3 && j >= 3;
            Element lhs = t.mul(vars[i], vars[j]);
            Element rhs = t.mul(vars[j], vars[i]);
            CHECK(t.equal(lhs, both_odd ? t.scale(rhs, -1) : rhs));
        }
}

TEST_CASE("formula evaluation follows the written order of factors") {
    auto pres = load_presentation_file("share/presentations/T.json");
    Algebra& t = pres.alg();
    const RingMap& gamma = pres.maps.at("gamma");

    CHECK(t.equal(eval_formula(t, "d1 + 2*d2"), t.add(t.var("d1"), t.scale(t.var("d2"), 2))));
    CHECK(t.equal(eval_formula(t, "(d1 - d2)^2"),
                  t.pow(t.sub(t.var("d1"), t.var("d2")), 2)));
    CHECK(t.is_zero(eval_formula(t, "c1*c1")));
    CHECK(t.is_zero(eval_formula(t, "3*d1^2")));

    // Odd factors keep their typed order, so c3*c1 is the reversal of c1*c3.
    CHECK(t.equal(eval_formula(t, "c3*c1"),
                  t.scale(eval_formula(t, "c1*c3"), -1)));

    // Environment names shadow generators; unknown names are rejected.
    std::map<std::string, Element> env = {{"u", t.var("d3")}};
    CHECK(t.equal(eval_formula(t, "u^2", env), t.pow(t.var("d3"), 2)));
    CHECK_THROWS_WITH_AS(eval_formula(t, "d1 + w"), doctest::Contains("no generator"), Error);
    CHECK_THROWS_AS(eval_formula(t, "d1 + "), Error);
    CHECK_THROWS_AS(eval_formula(t, "(d1"), Error);
    CHECK_THROWS_AS(eval_formula(t, "d1 d2"), Error);

    // tr is the orbit sum under the supplied action.
    CHECK(t.equal(eval_formula(t, "tr(d1)", {}, &gamma),
                  t.add(t.add(t.var("d1"), t.var("d2")), t.var("d3"))));
    auto c1d2 = t.mul(t.var("c1"), t.var("d2"));
    CHECK(t.equal(eval_formula(t, "tr(c1*d2)", {}, &gamma),
                  t.add(t.add(c1d2, gamma.apply(c1d2)), gamma.apply(gamma.apply(c1d2)))));
    CHECK_THROWS_WITH_AS(eval_formula(t, "tr(d1)"), doctest::Contains("without an action"),
                         Error);
}

TEST_CASE("rank-two presentation and its order-three action") {
    auto pres = load_presentation_file("share/presentations/xy.json");
    Algebra& r = pres.alg();
    const RingMap& gamma = pres.maps.at("gamma");

    CHECK(r.equal(gamma.apply(r.var("x")), r.var("y")));
    IntMat a = gamma.matrix_in_degree({-2});
    CHECK(a * a * a == IntMat::identity(2));
    CHECK(det(a) == 1);
    CHECK(a + a * a == -IntMat::identity(2));  // trace relation for the action
}

TEST_CASE("coordinate round trips and printing") {
    auto pres = load_presentation_file("share/presentations/M.json");
    Algebra& m = pres.alg();
    auto basis = m.basis_in_degree({-6});
    std::mt19937 rng(41);
    std::uniform_int_distribution<int> d(-9, 9);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<Int> c(basis.size());
        for (auto& x : c) x = d(rng);
        CHECK(m.coords(m.from_coords(c, basis), basis) == c);
    }

    auto el = m.mul(m.mul(m.var("x0"), m.var("x0")), m.var("x3"));
    CHECK(m.str(el) == "x0^2*x3");
    CHECK(m.str(m.zero()) == "0");
    CHECK(m.str(m.sub(m.zero(), m.var("x1"))) == "-x1");

    auto sq = m.pow(m.add(m.var("x0"), m.var("x1")), 2);
    auto expect = m.add(m.add(m.pow(m.var("x0"), 2), m.scale(m.mul(m.var("x0"), m.var("x1")), 2)),
                        m.pow(m.var("x1"), 2));
    CHECK(m.equal(sq, expect));
}

TEST_CASE("presentation validation rejects malformed input") {
    auto doc = nlohmann::json::parse(R"({
        "name": "bad", "characteristic": 0, "gradings": ["t"],
        "generators": [{"name": "a", "degree": [-2]}, {"name": "b", "degree": [-4]}],
        "substitutions": [{"eliminate": "a", "replacement": [{"coef": 1, "var": "b"}]}]
    })");
    CHECK_THROWS_WITH_AS(load_presentation(doc), doctest::Contains("degree and parity"), Error);

    // A map that contradicts a recorded substitution is rejected.
    std::ifstream in("share/presentations/M.json");
    nlohmann::json mdoc;
    in >> mdoc;
    mdoc["maps"]["gamma"]["x8"] = nlohmann::json::parse(R"([{"coef":1,"vars":[["x1",1]]}])");
    CHECK_THROWS_AS(load_presentation(mdoc), Error);

    auto missing = nlohmann::json::parse(R"({"name": "n", "characteristic": 0})");
    CHECK_THROWS_WITH_AS(load_presentation(missing), doctest::Contains("missing field"), Error);
}
