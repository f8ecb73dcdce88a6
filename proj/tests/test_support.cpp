#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "slab/support.hpp"

using namespace slab::support;
using slab::ec::CurveOverQ;
using slab::ec::QPoint;
using slab::ec::Rat;
using slab::modmath::Int;
using slab::modmath::u64;

namespace {

CurveOverQ curve37a() { return CurveOverQ(0, 0, 1, -1, 0); }

ScanConfig cfg_with(u64 bound) {
    ScanConfig cfg;
    cfg.prime_bound = bound;
    return cfg;
}

}  // namespace

TEST_CASE("gm_order matches brute-force multiplication") {
    for (u64 p : {5ULL, 7ULL, 11ULL, 13ULL, 101ULL}) {
        for (u64 a = 2; a < p && a < 40; ++a) {
            u64 acc = a % p, ord = 1;
            while (acc != 1) {
                acc = slab::modmath::mul_mod(acc, a, p);
                ++ord;
            }
            CHECK(gm_order(a, p) == ord);
        }
    }
}

TEST_CASE("scan_gm: power relation always divides") {
    auto rep = scan_gm(2, 4, cfg_with(100));
    CHECK(rep.violations == 0);
    CHECK(!rep.first_violation.has_value());
    CHECK(!rep.rows.empty());
    for (auto& r : rep.rows) CHECK(r.ord_P % r.ord_Q == 0);
}

TEST_CASE("scan_gm: (4, 2) first violation at 11") {
    auto rep = scan_gm(4, 2, cfg_with(100));
    REQUIRE(rep.first_violation.has_value());
    CHECK(*rep.first_violation == 11);
    CHECK(rep.violations > 0);
    for (std::size_t i = 1; i < rep.rows.size(); ++i) CHECK(rep.rows[i - 1].p < rep.rows[i].p);
    // divides flag recomputable from the row's own entries
    for (auto& r : rep.rows) CHECK(r.divides == (r.ord_P % r.ord_Q == 0));
}

TEST_CASE("scan_gm: unrelated pair has a violation below 100") {
    auto rep = scan_gm(2, 3, cfg_with(100));
    CHECK(rep.first_violation.has_value());
}

TEST_CASE("scan_gm rejects degenerate inputs and skips divisor primes") {
    CHECK_THROWS(scan_gm(0, 2, cfg_with(100)));
    CHECK_THROWS(scan_gm(1, 2, cfg_with(100)));
    CHECK_THROWS(scan_gm(-1, 2, cfg_with(100)));
    CHECK_THROWS(scan_gm(2, 0, cfg_with(100)));
    auto rep = scan_gm(Rat(1, 7), 2, cfg_with(100));
    for (auto& r : rep.rows) CHECK(r.p != 7);
}

TEST_CASE("scan_ec: Q = 2P on the reference curve has no violations") {
    auto E = curve37a();
    QPoint P = QPoint::affine(0, 0);
    auto rep = scan_ec(E, P, E, slab::ec::q_mul(E, 2, P), cfg_with(500));
    CHECK(rep.violations == 0);
    CHECK(!rep.rows.empty());
    for (auto& r : rep.rows) CHECK(r.p != 37);  // bad prime skipped
}

TEST_CASE("scan_ec: Q = P gives equal orders each row") {
    auto E = curve37a();
    QPoint P = QPoint::affine(0, 0);
    auto rep = scan_ec(E, P, E, P, cfg_with(300));
    for (auto& r : rep.rows) {
        CHECK(r.ord_P == r.ord_Q);
        CHECK(r.divides);
    }
}

TEST_CASE("scan_ec: non-isogenous curves yield a violation") {
    auto E1 = curve37a();
    CurveOverQ E2(0, 0, 0, 1, 1);
    auto rep = scan_ec(E1, QPoint::affine(0, 0), E2, QPoint::affine(0, 1), cfg_with(300));
    CHECK(rep.first_violation.has_value());
}

TEST_CASE("scan_ec rejects off-curve or identity inputs") {
    auto E = curve37a();
    CHECK_THROWS(scan_ec(E, QPoint::affine(2, 3), E, QPoint::affine(0, 0), cfg_with(100)));
    CHECK_THROWS(scan_ec(E, QPoint::infinity(), E, QPoint::affine(0, 0), cfg_with(100)));
}

TEST_CASE("infer_multiplier_gm recovers powers and disproves non-powers") {
    auto c1 = infer_multiplier_gm(2, 8, 10, cfg_with(300));
    REQUIRE(c1.verdict == Verdict::Verified);
    CHECK(*c1.n == 3);
    auto c2 = infer_multiplier_gm(2, 2, 10, cfg_with(300));
    REQUIRE(c2.verdict == Verdict::Verified);
    CHECK(*c2.n == 1);
    auto c3 = infer_multiplier_gm(2, Rat(1, 8), 10, cfg_with(300));
    REQUIRE(c3.verdict == Verdict::Verified);
    CHECK(*c3.n == -3);
    auto c4 = infer_multiplier_gm(Rat(5, 2), Rat(125, 8), 10, cfg_with(300));
    REQUIRE(c4.verdict == Verdict::Verified);
    CHECK(*c4.n == 3);
    auto d = infer_multiplier_gm(2, 3, 50, cfg_with(1000));
    CHECK(d.verdict == Verdict::Disproved);
}

TEST_CASE("infer_multiplier_ec recovers small multipliers") {
    auto E = curve37a();
    QPoint P = QPoint::affine(0, 0);
    auto c2 = infer_multiplier_ec(E, P, QPoint::affine(1, 0), 10, cfg_with(300));
    REQUIRE(c2.verdict == Verdict::Verified);
    CHECK(*c2.n == 2);
    auto c3 = infer_multiplier_ec(E, P, QPoint::affine(-1, -1), 10, cfg_with(300));
    REQUIRE(c3.verdict == Verdict::Verified);
    CHECK(*c3.n == 3);
    auto c1 = infer_multiplier_ec(E, P, P, 10, cfg_with(300));
    REQUIRE(c1.verdict == Verdict::Verified);
    CHECK(*c1.n == 1);
    auto cm = infer_multiplier_ec(E, P, slab::ec::q_mul(E, -7, P), 10, cfg_with(500));
    REQUIRE(cm.verdict == Verdict::Verified);
    CHECK(*cm.n == -7);
}

TEST_CASE("cross-curve inference yields a disproof certificate") {
    auto E1 = curve37a();
    CurveOverQ E2(0, 0, 0, 1, 1);
    auto cert = infer_multiplier_ec(E1, QPoint::affine(0, 0), E2, QPoint::affine(0, 1), 10,
                                    cfg_with(1000));
    CHECK(cert.verdict == Verdict::Disproved);
    CHECK(cert.disproof_prime.has_value());
}

TEST_CASE("verify_global decides n*P = Q exactly") {
    auto E = curve37a();
    QPoint P = QPoint::affine(0, 0);
    for (long n = -6; n <= 6; ++n) {
        QPoint Q = slab::ec::q_mul(E, n, P);
        CHECK(verify_global(E, P, Q, n));
        CHECK(!verify_global(E, P, Q, n + 1));
    }
    CHECK(verify_global_gm(2, 1024, 10));
    CHECK(!verify_global_gm(2, 1024, 9));
    CHECK(verify_global_gm(Rat(2, 3), Rat(9, 4), -2));
}

TEST_CASE("is_probably_nontorsion separates torsion from infinite order") {
    CHECK(is_probably_nontorsion(curve37a(), QPoint::affine(0, 0), cfg_with(300)));
    CurveOverQ E2(0, 0, 0, -25, 0);
    CHECK(is_probably_nontorsion(E2, QPoint::affine(-4, 6), cfg_with(300)));
    CHECK(!is_probably_nontorsion(E2, QPoint::affine(0, 0), cfg_with(300)));  // 2-torsion
    CurveOverQ E5(0, -1, 1, 0, 0);
    CHECK(!is_probably_nontorsion(E5, QPoint::affine(0, 0), cfg_with(300)));  // 5-torsion
}

TEST_CASE("check_specialization commutes for multiply-by-n chains") {
    auto E = curve37a();
    QPoint P = QPoint::affine(0, 0);
    HomChain trivial{E, {MultiplyBy{1}}};
    auto r1 = check_specialization(trivial, P, cfg_with(200));
    CHECK(r1.failures == 0);
    CHECK(r1.checked > 0);
    HomChain by5{E, {MultiplyBy{5}}};
    auto r5 = check_specialization(by5, P, cfg_with(200));
    CHECK(r5.failures == 0);
    CHECK(r5.checked > 0);
}

TEST_CASE("check_specialization commutes through an isogeny step") {
    CurveOverQ E(0, 0, 0, -25, 0);
    QPoint P = QPoint::affine(-4, 6);
    slab::isogeny::QQField QQ;
    auto S = slab::isogeny::to_short(E);
    auto K = slab::isogeny::to_short_point(E, QPoint::affine(0, 0));
    auto j = slab::isogeny::velu_isogeny(QQ, S, K, 2);
    HomChain chain{E, {j, MultiplyBy{3}}};
    auto rep = check_specialization(chain, P, cfg_with(200));
    CHECK(rep.checked > 0);
    CHECK(rep.failures == 0);
    CHECK(!rep.first_failure.has_value());
}

TEST_CASE("chain validation catches mismatched steps") {
    CurveOverQ E(0, 0, 0, -25, 0);
    CHECK_THROWS(validate_chain(HomChain{E, {}}));  // empty
    // isogeny whose domain is not E's short model
    CurveOverQ other(0, -1, 1, 0, 0);
    slab::isogeny::QQField QQ;
    auto S = slab::isogeny::to_short(other);
    auto K = slab::isogeny::to_short_point(other, QPoint::affine(0, 0));
    auto j = slab::isogeny::velu_isogeny(QQ, S, K, 5);
    CHECK_THROWS(validate_chain(HomChain{E, {j}}));
}

TEST_CASE("order cache accelerates and never changes results") {
    auto E = curve37a();
    QPoint P = QPoint::affine(0, 0);
    slab::store::OrderCache cache;
    ScanConfig cold = cfg_with(300);
    cold.cache = &cache;
    auto first = scan_ec(E, P, E, slab::ec::q_mul(E, 2, P), cold);
    auto warm = scan_ec(E, P, E, slab::ec::q_mul(E, 2, P), cold);
    REQUIRE(first.rows.size() == warm.rows.size());
    for (std::size_t i = 0; i < first.rows.size(); ++i) {
        CHECK(first.rows[i].p == warm.rows[i].p);
        CHECK(first.rows[i].ord_P == warm.rows[i].ord_P);
        CHECK(first.rows[i].ord_Q == warm.rows[i].ord_Q);
    }
}

TEST_CASE("scan results are identical across thread counts") {
    auto E = curve37a();
    QPoint P = QPoint::affine(0, 0);
    ScanConfig one = cfg_with(400);
    ScanConfig four = cfg_with(400);
    four.threads = 4;
    auto a = scan_ec(E, P, E, slab::ec::q_mul(E, 3, P), one);
    auto b = scan_ec(E, P, E, slab::ec::q_mul(E, 3, P), four);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].p == b.rows[i].p);
        CHECK(a.rows[i].ord_P == b.rows[i].ord_P);
        CHECK(a.rows[i].ord_Q == b.rows[i].ord_Q);
        CHECK(a.rows[i].divides == b.rows[i].divides);
    }
}
