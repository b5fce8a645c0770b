#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "tatelab/f3.hpp"

using namespace tatelab;

namespace {

F3Mat random_f3(std::mt19937& rng, int rows, int cols) {
    F3Mat m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            m.set(i, j, int(rng() % 3));
    return m;
}

}  // namespace

TEST_CASE("packed arithmetic matches scalar arithmetic exhaustively") {
    // Every (a, b) pair in every bit position of a word, plus both planes of
    // the boundary between words.
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            F3Mat x(1, 130), y(1, 130);
            for (int j = 0; j < 130; ++j) {
                x.set(0, j, a);
                y.set(0, j, b);
            }
            F3Mat s = x + y, d = x - y, n = -y;
            for (int j = 0; j < 130; ++j) {
                CHECK(s.get(0, j) == (a + b) % 3);
                CHECK(d.get(0, j) == ((a - b) % 3 + 3) % 3);
                CHECK(n.get(0, j) == (3 - b) % 3);
            }
        }
    // Mixed positions within one word.
    std::mt19937 rng(1);
    F3Mat x(1, 200), y(1, 200);
    std::vector<int> xa(200), yb(200);
    for (int j = 0; j < 200; ++j) {
        xa[j] = int(rng() % 3);
        yb[j] = int(rng() % 3);
        x.set(0, j, xa[j]);
        y.set(0, j, yb[j]);
    }
    F3Mat s = x + y;
    for (int j = 0; j < 200; ++j)
        CHECK(s.get(0, j) == (xa[j] + yb[j]) % 3);
}

TEST_CASE("get and set round-trip and add_at accumulates") {
    F3Mat m(3, 70);
    m.set(1, 64, 2);
    CHECK(m.get(1, 64) == 2);
    m.set(1, 64, 0);
    CHECK(m.get(1, 64) == 0);
    m.add_at(2, 69, 2);
    m.add_at(2, 69, 2);
    CHECK(m.get(2, 69) == 1);
}

TEST_CASE("matrix product matches the naive definition") {
    std::mt19937 rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 1 + int(rng() % 8), k = 1 + int(rng() % 8), m = 1 + int(rng() % 8);
        F3Mat a = random_f3(rng, n, k), b = random_f3(rng, k, m);
        F3Mat c = a * b;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < m; ++j) {
                int acc = 0;
                for (int t = 0; t < k; ++t)
                    acc += a.get(i, t) * b.get(t, j);
                CHECK(c.get(i, j) == acc % 3);
            }
    }
    // Across word boundaries.
    F3Mat a = random_f3(rng, 3, 150), b = random_f3(rng, 150, 140);
    F3Mat c = a * b;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 140; ++j) {
            int acc = 0;
            for (int t = 0; t < 150; ++t)
                acc += a.get(i, t) * b.get(t, j);
            CHECK(c.get(i, j) == acc % 3);
        }
}

TEST_CASE("pow iterates multiplication") {
    std::mt19937 rng(3);
    F3Mat a = random_f3(rng, 5, 5);
    CHECK(a.pow(0) == F3Mat::identity(5));
    CHECK(a.pow(1) == a);
    CHECK(a.pow(3) == a * a * a);
}

TEST_CASE("rank and kernel agree and match integer invariant factors") {
    std::mt19937 rng(4);
    for (int trial = 0; trial < 30; ++trial) {
        int r = 1 + int(rng() % 7), c = 1 + int(rng() % 7);
        F3Mat a = random_f3(rng, r, c);
        int rk = a.rank();
        F3Mat k = a.kernel();
        CHECK(k.cols() == c - rk);
        CHECK((a * k).is_zero());
        CHECK(k.rank() == k.cols());
        // Rank over F_3 counts invariant factors coprime to 3.
        SnfResult s = smith_normal_form(a.to_int());
        int coprime = 0;
        for (const Int& f : s.invariant_factors())
            if (f % 3 != 0)
                ++coprime;
        CHECK(rk == coprime);
    }
}

TEST_CASE("rref produces reduced pivots") {
    std::mt19937 rng(5);
    F3Mat a = random_f3(rng, 6, 9);
    std::vector<int> pivots;
    F3Mat r = a.rref(&pivots);
    CHECK(int(pivots.size()) == a.rank());
    for (int k = 0; k < int(pivots.size()); ++k) {
        CHECK(r.get(k, pivots[k]) == 1);
        for (int i = 0; i < 6; ++i)
            if (i != k)
                CHECK(r.get(i, pivots[k]) == 0);
    }
}

TEST_CASE("solve returns a solution exactly when one exists") {
    std::mt19937 rng(6);
    for (int trial = 0; trial < 30; ++trial) {
        int r = 2 + int(rng() % 5), c = 2 + int(rng() % 5);
        F3Mat a = random_f3(rng, r, c);
        std::vector<uint8_t> x0(c);
        for (auto& v : x0)
            v = uint8_t(rng() % 3);
        std::vector<uint8_t> b = a * x0;
        auto x = a.solve(b);
        REQUIRE(x.has_value());
        CHECK(a * *x == b);
    }
    F3Mat z(2, 2);
    z.set(0, 0, 1);
    CHECK(!z.solve({0, 1}).has_value());
}

TEST_CASE("kronecker product acts blockwise") {
    std::mt19937 rng(7);
    F3Mat a = random_f3(rng, 2, 3), b = random_f3(rng, 3, 2);
    F3Mat k = kronecker(a, b);
    CHECK(k.rows() == 6);
    CHECK(k.cols() == 6);
    for (int ia = 0; ia < 2; ++ia)
        for (int ja = 0; ja < 3; ++ja)
            for (int ib = 0; ib < 3; ++ib)
                for (int jb = 0; jb < 2; ++jb)
                    CHECK(k.get(ia * 3 + ib, ja * 2 + jb) == (a.get(ia, ja) * b.get(ib, jb)) % 3);
    // Mixed-product property on square matrices.
    F3Mat p = random_f3(rng, 3, 3), q = random_f3(rng, 2, 2);
    F3Mat r = random_f3(rng, 3, 3), s = random_f3(rng, 2, 2);
    CHECK(kronecker(p, q) * kronecker(r, s) == kronecker(p * r, q * s));
}

TEST_CASE("transpose round-trips and swaps factors") {
    std::mt19937 rng(8);
    F3Mat a = random_f3(rng, 5, 9);
    CHECK(a.transpose().transpose() == a);
    F3Mat b = random_f3(rng, 9, 4);
    CHECK((a * b).transpose() == b.transpose() * a.transpose());
}
