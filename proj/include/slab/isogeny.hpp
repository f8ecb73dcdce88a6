#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "slab/ec.hpp"

namespace slab::isogeny {

using modmath::Int;
using modmath::u64;
using ec::Rat;

// Field of exact rationals.
struct QQField {
    using Elem = Rat;
    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem sub(const Elem& a, const Elem& b) const { return a - b; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem neg(const Elem& a) const { return -a; }
    Elem inv(const Elem& a) const {
        if (a == 0) throw std::domain_error("QQField: division by zero");
        return 1 / a;
    }
    Elem from_int(long v) const { return Rat(v); }
    bool is_zero(const Elem& a) const { return a == 0; }
    bool eq(const Elem& a, const Elem& b) const { return a == b; }
};

// Prime field F_p, p > 3.
struct FpField {
    u64 p;
    using Elem = u64;
    Elem add(Elem a, Elem b) const { return (a + b) % p; }
    Elem sub(Elem a, Elem b) const { return (a + p - b % p) % p; }
    Elem mul(Elem a, Elem b) const { return modmath::mul_mod(a, b, p); }
    Elem neg(Elem a) const { return a % p == 0 ? 0 : p - a % p; }
    Elem inv(Elem a) const {
        auto r = modmath::inv_mod_u64(a, p);
        if (!r) throw std::domain_error("FpField: non-invertible element");
        return *r;
    }
    Elem from_int(long v) const {
        long r = v % static_cast<long>(p);
        if (r < 0) r += static_cast<long>(p);
        return static_cast<u64>(r);
    }
    bool is_zero(Elem a) const { return a % p == 0; }
    bool eq(Elem a, Elem b) const { return a % p == b % p; }
};

// y^2 = x^3 + Ax + B over F.
template <class F>
struct ShortW {
    typename F::Elem A{}, B{};
};

template <class F>
struct SPt {
    bool inf = true;
    typename F::Elem x{}, y{};
};

template <class F>
bool sw_eq(const F& f, const SPt<F>& a, const SPt<F>& b) {
    if (a.inf != b.inf) return false;
    return a.inf || (f.eq(a.x, b.x) && f.eq(a.y, b.y));
}

template <class F>
bool sw_on_curve(const F& f, const ShortW<F>& C, const SPt<F>& P) {
    if (P.inf) return true;
    auto lhs = f.mul(P.y, P.y);
    auto rhs = f.add(f.add(f.mul(f.mul(P.x, P.x), P.x), f.mul(C.A, P.x)), C.B);
    return f.eq(lhs, rhs);
}

template <class F>
SPt<F> sw_neg(const F& f, const SPt<F>& P) {
    if (P.inf) return P;
    return {false, P.x, f.neg(P.y)};
}

template <class F>
SPt<F> sw_add(const F& f, const ShortW<F>& C, const SPt<F>& P, const SPt<F>& Q) {
    if (P.inf) return Q;
    if (Q.inf) return P;
    typename F::Elem lambda;
    if (!f.eq(P.x, Q.x)) {
        lambda = f.mul(f.sub(Q.y, P.y), f.inv(f.sub(Q.x, P.x)));
    } else {
        if (f.is_zero(f.add(P.y, Q.y))) return {};
        auto num = f.add(f.mul(f.from_int(3), f.mul(P.x, P.x)), C.A);
        lambda = f.mul(num, f.inv(f.mul(f.from_int(2), P.y)));
    }
    auto x3 = f.sub(f.sub(f.mul(lambda, lambda), P.x), Q.x);
    auto y3 = f.sub(f.mul(lambda, f.sub(P.x, x3)), P.y);
    return {false, x3, y3};
}

template <class F>
SPt<F> sw_mul(const F& f, const ShortW<F>& C, Int n, SPt<F> P) {
    if (n < 0) {
        n = -n;
        P = sw_neg(f, P);
    }
    SPt<F> acc{};
    while (n > 0) {
        if (mpz_odd_p(n.get_mpz_t())) acc = sw_add(f, C, acc, P);
        P = sw_add(f, C, P, P);
        n >>= 1;
    }
    return acc;
}

// A normalized Velu isogeny of prime degree with rational kernel data.
template <class F>
struct Velu {
    ShortW<F> domain, codomain;
    unsigned degree = 0;
    SPt<F> kernel_gen;
    // per representative Q of the kernel half-set S: x_Q, v_Q, u_Q
    std::vector<typename F::Elem> kx, kv, ku;
};

// Builds the quotient by <K> where K has exact prime order ell in {2,3,5,7,11,13}.
// Throws std::invalid_argument for kernel points of the wrong order.
template <class F>
Velu<F> velu_isogeny(const F& f, const ShortW<F>& E, const SPt<F>& K, unsigned ell) {
    static const unsigned allowed[] = {2, 3, 5, 7, 11, 13};
    bool ok = false;
    for (unsigned d : allowed) ok = ok || (d == ell);
    if (!ok) throw std::invalid_argument("velu_isogeny: degree must be 2 or an odd prime <= 13");
    if (K.inf || !sw_on_curve(f, E, K))
        throw std::invalid_argument("velu_isogeny: kernel generator not on the curve");
    if (!sw_mul(f, E, Int(static_cast<long>(ell)), K).inf)
        throw std::invalid_argument("velu_isogeny: kernel generator order does not divide ell");

    Velu<F> j;
    j.domain = E;
    j.degree = ell;
    j.kernel_gen = K;
    auto v = f.from_int(0);
    auto w = f.from_int(0);
    if (ell == 2) {
        if (!f.is_zero(K.y)) throw std::invalid_argument("velu_isogeny: 2-torsion kernel must have y = 0");
        auto gx = f.add(f.mul(f.from_int(3), f.mul(K.x, K.x)), E.A);
        j.kx.push_back(K.x);
        j.kv.push_back(gx);
        j.ku.push_back(f.from_int(0));
        v = gx;
        w = f.mul(K.x, gx);
    } else {
        SPt<F> Q = K;
        for (unsigned i = 1; i <= (ell - 1) / 2; ++i) {
            if (Q.inf) throw std::invalid_argument("velu_isogeny: kernel generator order < ell");
            for (auto& seen : j.kx)
                if (f.eq(seen, Q.x))
                    throw std::invalid_argument("velu_isogeny: kernel x-coordinates not distinct");
            auto gx = f.add(f.mul(f.from_int(3), f.mul(Q.x, Q.x)), E.A);
            auto vq = f.mul(f.from_int(2), gx);
            auto uq = f.mul(f.from_int(4), f.mul(Q.y, Q.y));
            j.kx.push_back(Q.x);
            j.kv.push_back(vq);
            j.ku.push_back(uq);
            v = f.add(v, vq);
            w = f.add(w, f.add(uq, f.mul(Q.x, vq)));
            Q = sw_add(f, E, Q, K);
        }
    }
    j.codomain.A = f.sub(E.A, f.mul(f.from_int(5), v));
    j.codomain.B = f.sub(E.B, f.mul(f.from_int(7), w));
    return j;
}

// Rational-map evaluation; x-coordinates hitting the kernel map to O.
template <class F>
SPt<F> isogeny_eval(const F& f, const Velu<F>& j, const SPt<F>& P) {
    if (P.inf) return {};
    auto X = P.x;
    auto dX = f.from_int(1);  // d/dx of the x-map; the y-map is y * X'(x)
    for (std::size_t i = 0; i < j.kx.size(); ++i) {
        auto d = f.sub(P.x, j.kx[i]);
        if (f.is_zero(d)) return {};
        auto di = f.inv(d);
        auto di2 = f.mul(di, di);
        auto di3 = f.mul(di2, di);
        X = f.add(X, f.add(f.mul(j.kv[i], di), f.mul(j.ku[i], di2)));
        dX = f.sub(dX, f.add(f.mul(j.kv[i], di2),
                             f.mul(f.from_int(2), f.mul(j.ku[i], di3))));
    }
    return {false, X, f.mul(P.y, dX)};
}

using VeluQ = Velu<QQField>;
using VeluP = Velu<FpField>;
using SPtQ = SPt<QQField>;
using ShortWQ = ShortW<QQField>;

// ---- bridges between the generic layer and ec_core concretes ----

// Short model of an integral curve over Q: A = -27 c4, B = -54 c6,
// points map by (x, y) -> (36x + 3 b2, 216y + 108(a1 x + a3)).
ShortWQ to_short(const ec::CurveOverQ& E);
SPtQ to_short_point(const ec::CurveOverQ& E, const ec::QPoint& P);

inline ShortW<FpField> to_sw(const ec::ReducedCurve& C) { return {C.A, C.B}; }
inline SPt<FpField> to_spt(const ec::FpPoint& P) { return {P.inf, P.x, P.y}; }
inline ec::FpPoint from_spt(const SPt<FpField>& P) { return {P.inf, P.x, P.y}; }

// Reduce a rational element mod p; empty when the denominator vanishes mod p.
std::optional<u64> reduce_rat(const Rat& r, u64 p);

// Reduce a short curve over Q mod p; empty at bad or non-integral primes.
std::optional<ec::ReducedCurve> reduce_short(const ShortWQ& E, u64 p);
std::optional<ec::FpPoint> reduce_short_point(const SPtQ& P, u64 p);

// Entrywise reduction of the isogeny data; empty when any denominator
// vanishes or either end has bad reduction.
std::optional<VeluP> reduce_isogeny(const VeluQ& j, u64 p);

// Primes p > 3 where the short rational curve has bad reduction
// (denominator primes and primes dividing the discriminant numerator).
std::vector<u64> bad_primes_short(const ShortWQ& E, u64 bound);

}  // namespace slab::isogeny
