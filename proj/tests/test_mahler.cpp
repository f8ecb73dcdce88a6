#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "slab/mahler.hpp"

using namespace slab::mahler;
using slab::modmath::Int;
using slab::modmath::u64;

namespace {

MahlerMap zero_map() {
    MahlerMap f;
    f.rule.tail = CoefficientRule::Tail::Zeros;
    return f;
}

}  // namespace

TEST_CASE("coefficient rules: head, constant and periodic tails") {
    CoefficientRule r;
    r.head = {Int(3), Int(-1)};
    r.tail = CoefficientRule::Tail::Periodic;
    r.period = {Int(7), Int(0), Int(2)};
    CHECK(r.coeff(0) == 3);
    CHECK(r.coeff(1) == -1);
    CHECK(r.coeff(2) == 7);
    CHECK(r.coeff(3) == 0);
    CHECK(r.coeff(4) == 2);
    CHECK(r.coeff(5) == 7);
    CoefficientRule c;
    c.tail = CoefficientRule::Tail::Constant;
    c.constant = -4;
    CHECK(c.coeff(0) == -4);
    CHECK(c.coeff(100) == -4);
}

TEST_CASE("eval_psi pinned values for the all-ones rule") {
    auto f = canonical_counterexample();
    CHECK(f.eval_psi(0) == 1);
    CHECK(f.eval_psi(2) == 5);     // 1 + 2 + 2*1
    CHECK(f.eval_psi(4) == 65);    // 1 + 4 + 12 + 24 + 24
    CHECK(zero_map().eval_psi(10) == 0);
    CHECK_THROWS_AS(f.eval_psi(-1), std::domain_error);
}

TEST_CASE("eval_psi agrees with a direct falling-factorial oracle") {
    MahlerMap f;
    f.rule.head = {Int(2), Int(-3)};
    f.rule.tail = CoefficientRule::Tail::Periodic;
    f.rule.period = {Int(1), Int(4)};
    for (long n = 0; n <= 25; ++n) {
        Int sum = 0;
        for (long k = 0; k <= n; ++k) {
            Int ff = 1;
            for (long i = 0; i < k; ++i) ff *= n - i;
            sum += f.rule.coeff(static_cast<std::size_t>(k)) * ff;
        }
        CHECK(f.eval_psi(n) == sum);
        // truncating above n changes nothing: ff vanishes for k > n
    }
}

TEST_CASE("eval_phi is even and extends to negative arguments") {
    auto f = canonical_counterexample();
    CHECK(f.eval_phi(0) == 1);
    CHECK(f.eval_phi(2) == 65);
    for (long n = -8; n <= 8; ++n) CHECK(f.eval_phi(n) == f.eval_phi(-n));
}

TEST_CASE("eval_phi_mod equals the exact value mod N") {
    auto f = canonical_counterexample();
    std::mt19937_64 rng(31);
    for (int i = 0; i < 300; ++i) {
        long n = static_cast<long>(rng() % 25) - 12;
        u64 N = rng() % 999 + 2;
        Int exact = f.eval_phi(n);
        u64 want = mpz_fdiv_ui(exact.get_mpz_t(), N);
        CHECK(f.eval_phi_mod(n, N) == want);
    }
    // and for a fancier rule
    MahlerMap g;
    g.rule.head = {Int(5)};
    g.rule.tail = CoefficientRule::Tail::Periodic;
    g.rule.period = {Int(-2), Int(9), Int(0)};
    for (long n = 0; n <= 12; ++n)
        for (u64 N : {2ULL, 6ULL, 30ULL, 97ULL}) {
            Int exact = g.eval_phi(n);
            CHECK(g.eval_phi_mod(n, N) == mpz_fdiv_ui(exact.get_mpz_t(), N));
        }
}

TEST_CASE("induced_map_mod builds a well-defined table") {
    auto f = canonical_counterexample();
    auto tab = induced_map_mod(f, 5, 3);
    REQUIRE(tab.well_defined);
    CHECK(tab.table[2] == 0);  // phi(2) = 65
    auto z = induced_map_mod(zero_map(), 7, 2);
    REQUIRE(z.well_defined);
    for (u64 v : z.table) CHECK(v == 0);
}

TEST_CASE("commuting square holds for moduli up to 50") {
    auto f = canonical_counterexample();
    for (u64 N = 2; N <= 50; ++N) {
        auto rep = check_commuting_square(f, N, 200);
        CHECK(rep.holds);
        CHECK(!rep.failure_input.has_value());
    }
    CHECK(check_commuting_square(zero_map(), 12, 100).holds);
}

TEST_CASE("congruence property on random triples") {
    auto f = canonical_counterexample();
    std::mt19937_64 rng(37);
    for (int i = 0; i < 200; ++i) {
        u64 N = rng() % 999 + 2;
        long n = static_cast<long>(rng() % 1000);
        long m = n + static_cast<long>(N) * static_cast<long>(rng() % 5);
        CHECK(f.eval_phi_mod(n, N) == f.eval_phi_mod(m, N));
    }
}

TEST_CASE("nonpolynomiality witnesses") {
    auto f = canonical_counterexample();
    for (unsigned d = 0; d <= 10; ++d) {
        auto w = nonpolynomiality_witness(f, d, d + 3);
        REQUIRE(w.has_value());
        CHECK(w->difference != 0);
    }
    CHECK(!nonpolynomiality_witness(zero_map(), 3, 10).has_value());
    MahlerMap constant;
    constant.rule.head = {Int(5)};
    CHECK(!nonpolynomiality_witness(constant, 0, 10).has_value());
}

TEST_CASE("witness differences match a finite-difference table oracle") {
    auto f = canonical_counterexample();
    const unsigned d = 3, W = 10;
    auto w = nonpolynomiality_witness(f, d, W);
    REQUIRE(w.has_value());
    // recompute the (d+1)-th difference at the witness base from scratch
    long t = w->base.get_si();
    Int sum = 0;
    long binom[5] = {1, 4, 6, 4, 1};
    for (long j = 0; j <= 4; ++j) {
        Int term = f.eval_phi(t + j) * binom[j];
        if ((4 - j) % 2 == 1) term = -term;
        sum += term;
    }
    CHECK(sum == w->difference);
    CHECK(sum != 0);
}
