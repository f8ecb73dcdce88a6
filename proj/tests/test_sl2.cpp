#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "slab/sl2.hpp"

using namespace slab::sl2;
using slab::modmath::u64;

TEST_CASE("matrix arithmetic basics") {
    Mat2 A{7, 1, 2, 3, 0};
    CHECK(det(A) == (7 - 6 % 7) % 7);
    CHECK(mat_mul(A, identity(7)) == A);
    CHECK(mat_mul(identity(7), A) == A);
    Mat2 B{7, 2, 1, 1, 1};
    Mat2 AB = mat_mul(A, B);
    CHECK(AB.a == 4);  // 1*2+2*1
    CHECK(AB.b == 3);  // 1*1+2*1
    CHECK(AB.c == 6);  // 3*2+0*1
    CHECK(AB.d == 3);  // 3*1+0*1
    CHECK_THROWS(mat_mul(A, Mat2{5, 1, 0, 0, 1}));
}

TEST_CASE("deligne_factorization pinned values") {
    // a = 1: product is the identity
    {
        auto f = deligne_factorization(1, 11);
        Mat2 prod = identity(11);
        for (auto& m : f) prod = mat_mul(prod, m);
        CHECK(prod == identity(11));
    }
    // a = 2 mod 5 -> diag(3, 2)
    {
        auto f = deligne_factorization(2, 5);
        Mat2 prod = identity(5);
        for (auto& m : f) prod = mat_mul(prod, m);
        CHECK(prod == Mat2{5, 3, 0, 0, 2});
    }
    // a = 3 mod 7 -> diag(5, 3)
    {
        auto f = deligne_factorization(3, 7);
        Mat2 prod = identity(7);
        for (auto& m : f) prod = mat_mul(prod, m);
        CHECK(prod == Mat2{7, 5, 0, 0, 3});
    }
    CHECK_THROWS_AS(deligne_factorization(5, 15), std::domain_error);
}

TEST_CASE("deligne factors are unipotent and multiply to diag(a^-1, a)") {
    for (u64 m : {5ULL, 7ULL, 15ULL, 105ULL, 286ULL}) {
        for (u64 a = 1; a < m; ++a) {
            if (!slab::modmath::inv_mod_u64(a, m)) continue;
            auto f = deligne_factorization(a, m);
            Mat2 prod = identity(m);
            for (auto& g : f) {
                // triangular with unit diagonal
                CHECK(g.a == 1 % m);
                CHECK(g.d == 1 % m);
                CHECK((g.b == 0 || g.c == 0));
                CHECK(in_sl2(g));
                prod = mat_mul(prod, g);
            }
            u64 ainv = *slab::modmath::inv_mod_u64(a, m);
            CHECK(prod == Mat2{m, ainv, 0, 0, a});
        }
    }
}

TEST_CASE("elementary_decomposition pinned cases") {
    auto id_word = elementary_decomposition(identity(5));
    for (auto& [side, t] : id_word.letters) CHECK(t == 0);
    CHECK(id_word.evaluate() == identity(5));

    Mat2 w{5, 0, 1, 4, 0};  // [[0,1],[-1,0]] mod 5
    auto word = elementary_decomposition(w);
    CHECK(word.letters.size() <= 5);
    CHECK(word.evaluate() == w);

    Mat2 d23{5, 2, 0, 0, 3};
    CHECK(elementary_decomposition(d23).evaluate() == d23);

    CHECK_THROWS_AS(elementary_decomposition(Mat2{5, 2, 0, 0, 2}), std::domain_error);
    CHECK_THROWS(elementary_decomposition(Mat2{25, 1, 0, 0, 1}));  // non-squarefree
}

TEST_CASE("elementary_decomposition multiply-back on random samples mod 5*7*11") {
    std::mt19937_64 rng(23);
    const u64 m = 385;
    int found = 0;
    while (found < 500) {
        Mat2 g{m, rng() % m, rng() % m, rng() % m, 0};
        // solve for d when possible: ad - bc = 1
        bool ok = false;
        for (u64 d = 0; d < m && !ok; ++d) {
            g.d = d;
            ok = in_sl2(g);
        }
        if (!ok) continue;
        ++found;
        auto word = elementary_decomposition(g);
        CHECK(word.letters.size() <= 5);
        CHECK(word.evaluate() == g);
    }
}

TEST_CASE("crt_split and crt_join round-trip") {
    Mat2 g{15, 4, 7, 11, 13};
    auto parts = crt_split(g);
    REQUIRE(parts.size() == 2);
    CHECK(parts[0] == Mat2{3, 1, 1, 2, 1});
    CHECK(parts[1] == Mat2{5, 4, 2, 1, 3});
    CHECK(crt_join(parts) == g);

    CHECK(crt_split(identity(15))[0] == identity(3));
    CHECK(crt_split(identity(15))[1] == identity(5));

    // split is multiplicative
    std::mt19937_64 rng(29);
    for (int i = 0; i < 50; ++i) {
        Mat2 a{15, rng() % 15, rng() % 15, rng() % 15, rng() % 15};
        Mat2 b{15, rng() % 15, rng() % 15, rng() % 15, rng() % 15};
        auto sa = crt_split(a), sb = crt_split(b), sab = crt_split(mat_mul(a, b));
        for (std::size_t k = 0; k < sa.size(); ++k)
            CHECK(mat_mul(sa[k], sb[k]) == sab[k]);
    }
}

TEST_CASE("element orders in small groups") {
    CHECK(element_order(identity(5)) == 1);
    CHECK(element_order(Mat2{5, 4, 0, 0, 4}) == 2);  // -I
    CHECK(element_order(elem_upper(1, 5)) == 5);
    CHECK(element_order(elem_upper(1, 7)) == 7);
    // every element order divides the group order q(q^2-1)
    for (u64 q : {5ULL, 7ULL}) {
        u64 N = q * (q * q - 1);
        for_each_sl2(q, [&](const Mat2& g) { CHECK(N % element_order(g) == 0); });
    }
}

TEST_CASE("group enumeration has the right cardinality") {
    for (u64 q : {3ULL, 5ULL, 7ULL}) {
        u64 count = 0;
        for_each_sl2(q, [&](const Mat2&) { ++count; });
        CHECK(count == q * (q * q - 1));
    }
}

TEST_CASE("unipotent power conjugacy counts") {
    CHECK(unipotent_power_conjugacy_count(3) == 1);
    CHECK(unipotent_power_conjugacy_count(5) == 2);
    CHECK(unipotent_power_conjugacy_count(7) == 3);
    CHECK_THROWS(unipotent_power_conjugacy_count(2));
    CHECK_THROWS(unipotent_power_conjugacy_count(29));
}

TEST_CASE("semisimple power conjugacy counts stay within the Weyl bound") {
    CHECK(semisimple_power_conjugacy_count(Mat2{5, 2, 0, 0, 3}) == 2);
    CHECK(semisimple_power_conjugacy_count(Mat2{7, 3, 0, 0, 5}) <= 2);
    CHECK_THROWS_AS(semisimple_power_conjugacy_count(Mat2{5, 4, 0, 0, 4}), std::domain_error);
    CHECK_THROWS_AS(semisimple_power_conjugacy_count(Mat2{5, 1, 1, 0, 1}), std::domain_error);
    // every valid semisimple non-central element of SL2(F_5)
    for_each_sl2(5, [&](const Mat2& s) {
        u64 tr = (s.a + s.d) % 5;
        if (slab::modmath::mul_mod(tr, tr, 5) == 4) return;  // not distinct eigenvalues
        CHECK(semisimple_power_conjugacy_count(s) <= 2);
    });
}

TEST_CASE("order census matches the divisibility criterion") {
    CHECK(!has_element_of_order(5, 7));
    CHECK(has_element_of_order(5, 3));
    CHECK(has_element_of_order(7, 7));
    for (u64 q : {5ULL, 7ULL})
        for (u64 p : {5ULL, 7ULL, 11ULL, 13ULL}) {
            if (p == q) continue;
            CHECK(has_element_of_order(q, p) == (q * (q * q - 1) % p == 0));
        }
}
