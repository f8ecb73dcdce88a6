#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "slab/modmath.hpp"

namespace slab::ec {

using modmath::Int;
using modmath::u64;
using Rat = mpq_class;

// Integral long Weierstrass model y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6.
struct CurveOverQ {
    Int a1, a2, a3, a4, a6;
    Int b2, b4, b6, b8, c4, c6, disc;

    CurveOverQ(Int a1_, Int a2_, Int a3_, Int a4_, Int a6_);

    std::string fingerprint() const;  // "a1,a2,a3,a4,a6"
};

// A rational point: the identity O or an affine pair.
struct QPoint {
    bool inf = true;
    Rat x, y;

    static QPoint infinity() { return {}; }
    static QPoint affine(Rat x, Rat y) { return {false, std::move(x), std::move(y)}; }

    bool operator==(const QPoint& o) const {
        if (inf != o.inf) return false;
        return inf || (x == o.x && y == o.y);
    }
};

bool on_curve(const CurveOverQ& E, const QPoint& P);
QPoint q_neg(const CurveOverQ& E, const QPoint& P);
QPoint q_add(const CurveOverQ& E, const QPoint& P, const QPoint& Q);
QPoint q_mul(const CurveOverQ& E, const Int& n, const QPoint& P);

// Normalized projective triple (X:Y:Z), gcd 1, Z > 0 (O = (0:1:0)).
struct ProjTriple {
    Int X, Y, Z;
};
ProjTriple normalize(const QPoint& P);
std::string point_fingerprint(const QPoint& P);  // "X:Y:Z"

// Short model over F_p: y^2 = x^3 + Ax + B, p > 3.
struct ReducedCurve {
    u64 p = 0, A = 0, B = 0;
};

struct FpPoint {
    bool inf = true;
    u64 x = 0, y = 0;

    bool operator==(const FpPoint& o) const {
        if (inf != o.inf) return false;
        return inf || (x == o.x && y == o.y);
    }
};

// Good reduction requires p > 3 and p not dividing disc; otherwise empty
// (a skip signal, not an error).
std::optional<ReducedCurve> reduce_curve(const CurveOverQ& E, u64 p);

// Specialization map composed with the long -> short coordinate change.
FpPoint reduce_point(const QPoint& P, const CurveOverQ& E, const ReducedCurve& C);

bool on_curve_fp(const ReducedCurve& C, const FpPoint& P);
FpPoint fp_neg(const ReducedCurve& C, const FpPoint& P);
FpPoint fp_add(const ReducedCurve& C, const FpPoint& U, const FpPoint& V);
FpPoint fp_mul(const ReducedCurve& C, const Int& n, const FpPoint& P);
FpPoint fp_mul(const ReducedCurve& C, u64 n, const FpPoint& P);

// |E(F_p)|. Naive character sum up to naive_cutoff, then a Hasse-interval
// annihilator search (BSGS on random points until the order is pinned down).
u64 group_order(const ReducedCurve& C, u64 naive_cutoff = 100000);
u64 group_order_naive(const ReducedCurve& C);
u64 group_order_annihilator(const ReducedCurve& C);

struct PointOrderRecord {
    u64 p = 0;
    u64 annihilator = 0;  // in the Hasse interval (or a group-order multiple)
    u64 order = 0;
    std::vector<std::pair<u64, unsigned>> order_factors;
};

// Exact order of P, stripping primes from an annihilator.
PointOrderRecord point_order(const FpPoint& P, const ReducedCurve& C, u64 annihilator);
PointOrderRecord point_order(const FpPoint& P, const ReducedCurve& C);

// Least n in [0, ord_P.order) with n*P = Q, or empty (NotInSubgroup).
// Plain BSGS below bsgs_limit, Pohlig-Hellman above.
std::optional<u64> ec_dlog(const FpPoint& P, const PointOrderRecord& ord_P,
                           const FpPoint& Q, const ReducedCurve& C,
                           u64 bsgs_limit = 100000000);
std::optional<u64> ec_dlog_bsgs(const FpPoint& P, u64 order_P, const FpPoint& Q,
                                const ReducedCurve& C);
std::optional<u64> ec_dlog_pohlig_hellman(const FpPoint& P, const PointOrderRecord& ord_P,
                                          const FpPoint& Q, const ReducedCurve& C);

}  // namespace slab::ec
