#include "slab/ec.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <unordered_map>

namespace slab::ec {

using modmath::inv_mod_u64;
using modmath::isqrt_u64;
using modmath::mul_mod;
using modmath::pow_mod;

CurveOverQ::CurveOverQ(Int a1_, Int a2_, Int a3_, Int a4_, Int a6_)
    : a1(std::move(a1_)), a2(std::move(a2_)), a3(std::move(a3_)),
      a4(std::move(a4_)), a6(std::move(a6_)) {
    b2 = a1 * a1 + 4 * a2;
    b4 = 2 * a4 + a1 * a3;
    b6 = a3 * a3 + 4 * a6;
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    c4 = b2 * b2 - 24 * b4;
    c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6;
    disc = -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
    if (disc == 0) throw std::domain_error("CurveOverQ: singular model (disc = 0)");
}

std::string CurveOverQ::fingerprint() const {
    return a1.get_str() + "," + a2.get_str() + "," + a3.get_str() + "," +
           a4.get_str() + "," + a6.get_str();
}

bool on_curve(const CurveOverQ& E, const QPoint& P) {
    if (P.inf) return true;
    Rat lhs = P.y * P.y + Rat(E.a1) * P.x * P.y + Rat(E.a3) * P.y;
    Rat rhs = P.x * P.x * P.x + Rat(E.a2) * P.x * P.x + Rat(E.a4) * P.x + Rat(E.a6);
    return lhs == rhs;
}

QPoint q_neg(const CurveOverQ& E, const QPoint& P) {
    if (P.inf) return P;
    return QPoint::affine(P.x, -P.y - Rat(E.a1) * P.x - Rat(E.a3));
}

QPoint q_add(const CurveOverQ& E, const QPoint& P, const QPoint& Q) {
    if (P.inf) return Q;
    if (Q.inf) return P;
    Rat a1(E.a1), a2(E.a2), a3(E.a3), a4(E.a4), a6(E.a6);
    Rat lambda, nu;
    if (P.x != Q.x) {
        lambda = (Q.y - P.y) / (Q.x - P.x);
        nu = (P.y * Q.x - Q.y * P.x) / (Q.x - P.x);
    } else {
        if (Q.y == -P.y - a1 * P.x - a3) return QPoint::infinity();
        Rat den = 2 * P.y + a1 * P.x + a3;
        lambda = (3 * P.x * P.x + 2 * a2 * P.x + a4 - a1 * P.y) / den;
        nu = (-P.x * P.x * P.x + a4 * P.x + 2 * a6 - a3 * P.y) / den;
    }
    Rat x3 = lambda * lambda + a1 * lambda - a2 - P.x - Q.x;
    Rat y3 = -(lambda + a1) * x3 - nu - a3;
    return QPoint::affine(x3, y3);
}

QPoint q_mul(const CurveOverQ& E, const Int& n, const QPoint& P) {
    Int k = n;
    QPoint base = P;
    if (k < 0) {
        k = -k;
        base = q_neg(E, base);
    }
    QPoint acc = QPoint::infinity();
    while (k > 0) {
        if (mpz_odd_p(k.get_mpz_t())) acc = q_add(E, acc, base);
        base = q_add(E, base, base);
        k >>= 1;
    }
    return acc;
}

ProjTriple normalize(const QPoint& P) {
    if (P.inf) return {0, 1, 0};
    Int xd = P.x.get_den(), yd = P.y.get_den();
    Int l;
    mpz_lcm(l.get_mpz_t(), xd.get_mpz_t(), yd.get_mpz_t());
    Int X = P.x.get_num() * (l / xd);
    Int Y = P.y.get_num() * (l / yd);
    Int Z = l;
    Int g;
    mpz_gcd(g.get_mpz_t(), X.get_mpz_t(), Y.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), Z.get_mpz_t());
    return {X / g, Y / g, Z / g};
}

std::string point_fingerprint(const QPoint& P) {
    ProjTriple t = normalize(P);
    return t.X.get_str() + ":" + t.Y.get_str() + ":" + t.Z.get_str();
}

namespace {

u64 mod_p(const Int& a, u64 p) {
    Int r = a % static_cast<unsigned long>(p);
    if (r < 0) r += static_cast<unsigned long>(p);
    return r.get_ui();
}

}  // namespace

std::optional<ReducedCurve> reduce_curve(const CurveOverQ& E, u64 p) {
    if (p <= 3 || !modmath::is_prime_u64(p)) return std::nullopt;
    if (mod_p(E.disc, p) == 0) return std::nullopt;
    ReducedCurve C;
    C.p = p;
    C.A = mod_p(-27 * E.c4, p);
    C.B = mod_p(-54 * E.c6, p);
    return C;
}

FpPoint reduce_point(const QPoint& P, const CurveOverQ& E, const ReducedCurve& C) {
    const u64 p = C.p;
    ProjTriple t = normalize(P);
    u64 Z = mod_p(t.Z, p);
    if (Z == 0) return FpPoint{};
    u64 zi = *inv_mod_u64(Z, p);
    u64 x = mul_mod(mod_p(t.X, p), zi, p);
    u64 y = mul_mod(mod_p(t.Y, p), zi, p);
    // (x, y) -> (36x + 3 b2, 216y + 108(a1 x + a3))
    u64 xs = (mul_mod(36 % p, x, p) + mul_mod(3 % p, mod_p(E.b2, p), p)) % p;
    u64 ys = (mul_mod(216 % p, y, p) +
              mul_mod(108 % p, (mul_mod(mod_p(E.a1, p), x, p) + mod_p(E.a3, p)) % p, p)) % p;
    return FpPoint{false, xs, ys};
}

bool on_curve_fp(const ReducedCurve& C, const FpPoint& P) {
    if (P.inf) return true;
    const u64 p = C.p;
    u64 lhs = mul_mod(P.y, P.y, p);
    u64 rhs = (mul_mod(mul_mod(P.x, P.x, p), P.x, p) + mul_mod(C.A, P.x, p) + C.B) % p;
    return lhs == rhs;
}

FpPoint fp_neg(const ReducedCurve& C, const FpPoint& P) {
    if (P.inf) return P;
    return FpPoint{false, P.x, P.y == 0 ? 0 : C.p - P.y};
}

FpPoint fp_add(const ReducedCurve& C, const FpPoint& U, const FpPoint& V) {
    if (U.inf) return V;
    if (V.inf) return U;
    const u64 p = C.p;
    u64 lambda;
    if (U.x != V.x) {
        u64 num = (V.y + p - U.y) % p;
        u64 den = (V.x + p - U.x) % p;
        lambda = mul_mod(num, *inv_mod_u64(den, p), p);
    } else {
        if ((U.y + V.y) % p == 0) return FpPoint{};
        u64 num = (mul_mod(3, mul_mod(U.x, U.x, p), p) + C.A) % p;
        u64 den = mul_mod(2, U.y, p);
        lambda = mul_mod(num, *inv_mod_u64(den, p), p);
    }
    u64 x3 = (mul_mod(lambda, lambda, p) + 2 * p - U.x % p - V.x % p) % p;
    u64 y3 = (mul_mod(lambda, (U.x + p - x3) % p, p) + p - U.y) % p;
    return FpPoint{false, x3, y3};
}

FpPoint fp_mul(const ReducedCurve& C, u64 n, const FpPoint& P) {
    FpPoint acc{}, base = P;
    while (n > 0) {
        if (n & 1) acc = fp_add(C, acc, base);
        base = fp_add(C, base, base);
        n >>= 1;
    }
    return acc;
}

FpPoint fp_mul(const ReducedCurve& C, const Int& n, const FpPoint& P) {
    Int k = n;
    FpPoint base = P;
    if (k < 0) {
        k = -k;
        base = fp_neg(C, base);
    }
    FpPoint acc{};
    while (k > 0) {
        if (mpz_odd_p(k.get_mpz_t())) acc = fp_add(C, acc, base);
        base = fp_add(C, base, base);
        k >>= 1;
    }
    return acc;
}

u64 group_order_naive(const ReducedCurve& C) {
    const u64 p = C.p;
    // chi[t] = legendre(t, p) via one squaring pass
    std::vector<signed char> chi(p, -1);
    chi[0] = 0;
    for (u64 y = 1; y <= (p - 1) / 2; ++y) chi[mul_mod(y, y, p)] = 1;
    long long sum = 0;
    for (u64 x = 0; x < p; ++x) {
        u64 rhs = (mul_mod(mul_mod(x, x, p), x, p) + mul_mod(C.A, x, p) + C.B) % p;
        sum += chi[rhs];
    }
    return p + 1 + sum;
}

namespace {

// Random point on C, deterministic per (p, A, B, attempt).
FpPoint sample_point(const ReducedCurve& C, u64 attempt) {
    std::mt19937_64 rng(C.p * 1000003 + C.A * 37 + C.B * 101 + attempt);
    while (true) {
        u64 x = rng() % C.p;
        u64 rhs = (mul_mod(mul_mod(x, x, C.p), x, C.p) + mul_mod(C.A, x, C.p) + C.B) % C.p;
        if (auto y = modmath::sqrt_mod(rhs, C.p)) return FpPoint{false, x, *y};
    }
}

// An annihilator m = p + 1 + t in the Hasse interval with m*P = O, via BSGS.
u64 annihilator_bsgs(const ReducedCurve& C, const FpPoint& P) {
    const u64 p = C.p;
    const u64 h = 2 * isqrt_u64(p) + 2;       // |t| <= h
    const u64 s = isqrt_u64(2 * h) + 1;
    const u64 J = h / s + 1;
    std::unordered_map<u64, std::vector<std::pair<u64, u64>>> baby;  // x -> [(y, i)]
    FpPoint iP = P;
    for (u64 i = 1; i <= s; ++i) {
        if (iP.inf) {
            // ord(P) = i; pick the multiple of i nearest p + 1
            u64 m = ((p + 1) / i) * i;
            if (m == 0) m = i;
            return m;
        }
        baby[iP.x].emplace_back(iP.y, i);
        iP = fp_add(C, iP, P);
    }
    const FpPoint negbase = fp_neg(C, fp_mul(C, p + 1, P));  // -((p+1)P)
    const FpPoint sP = fp_mul(C, s, P);
    const FpPoint negsP = fp_neg(C, sP);
    // T_j = -base - (j s) P; a hit T_j = iP gives t = j s + i
    FpPoint T = fp_add(C, negbase, fp_mul(C, J * s, P));  // j = -J
    for (long long j = -static_cast<long long>(J); j <= static_cast<long long>(J); ++j) {
        long long base_t = j * static_cast<long long>(s);
        if (T.inf) {
            long long m = static_cast<long long>(p + 1) + base_t;
            if (m > 0 && fp_mul(C, static_cast<u64>(m), P).inf) return static_cast<u64>(m);
        } else if (auto it = baby.find(T.x); it != baby.end()) {
            for (auto& [y, i] : it->second) {
                if (y != T.y) continue;
                long long m = static_cast<long long>(p + 1) + base_t + static_cast<long long>(i);
                if (m > 0 && fp_mul(C, static_cast<u64>(m), P).inf) return static_cast<u64>(m);
            }
        }
        T = fp_add(C, T, negsP);
    }
    throw std::logic_error("annihilator_bsgs: no annihilator in the Hasse interval");
}

u64 exact_order_from_annihilator(const ReducedCurve& C, const FpPoint& P, u64 m) {
    for (auto& [q, e] : modmath::factorize_u64(m)) {
        for (unsigned i = 0; i < e; ++i) {
            if (fp_mul(C, m / q, P).inf)
                m /= q;
            else
                break;
        }
    }
    return m;
}

}  // namespace

u64 group_order_annihilator(const ReducedCurve& C) {
    const u64 p = C.p;
    const u64 h = 2 * isqrt_u64(p) + 1;
    const u64 lo = p + 1 > h ? p + 1 - h : 1;
    const u64 hi = p + 1 + h;

    // Quadratic twist: its order N' satisfies N + N' = 2p + 2, so an
    // exponent multiple on the twist prunes candidates when the exponent
    // of E(F_p) alone is smaller than the Hasse window.
    u64 d = 2;
    while (modmath::pow_mod(d, (p - 1) / 2, p) != p - 1) ++d;
    const u64 d2 = modmath::mul_mod(d, d, p);
    const ReducedCurve twist{p, modmath::mul_mod(C.A, d2, p),
                             modmath::mul_mod(C.B, modmath::mul_mod(d2, d, p), p)};

    u64 L = 1, Lt = 1;
    for (u64 attempt = 0; attempt < 64; ++attempt) {
        {
            FpPoint P = sample_point(C, attempt);
            u64 ann = annihilator_bsgs(C, P);
            L = std::lcm(L, exact_order_from_annihilator(C, P, ann));
        }
        {
            FpPoint P = sample_point(twist, attempt);
            u64 ann = annihilator_bsgs(twist, P);
            Lt = std::lcm(Lt, exact_order_from_annihilator(twist, P, ann));
        }
        u64 found = 0, count = 0;
        for (u64 N = ((lo + L - 1) / L) * L; N <= hi; N += L) {
            if ((2 * p + 2 - N) % Lt != 0) continue;
            found = N;
            ++count;
        }
        if (count == 0) throw std::logic_error("group_order_annihilator: empty interval");
        if (count == 1) return found;
    }
    return group_order_naive(C);  // unreachable in practice; correctness backstop
}

u64 group_order(const ReducedCurve& C, u64 naive_cutoff) {
    return C.p <= naive_cutoff ? group_order_naive(C) : group_order_annihilator(C);
}

PointOrderRecord point_order(const FpPoint& P, const ReducedCurve& C, u64 annihilator) {
    PointOrderRecord rec;
    rec.p = C.p;
    rec.annihilator = annihilator;
    rec.order = exact_order_from_annihilator(C, P, annihilator);
    rec.order_factors = modmath::factorize_u64(rec.order);
    return rec;
}

PointOrderRecord point_order(const FpPoint& P, const ReducedCurve& C) {
    return point_order(P, C, group_order(C));
}

std::optional<u64> ec_dlog_bsgs(const FpPoint& P, u64 order_P, const FpPoint& Q,
                                const ReducedCurve& C) {
    if (Q.inf) return 0;
    if (P.inf) return std::nullopt;
    const u64 s = isqrt_u64(order_P) + 1;
    std::unordered_map<u64, std::vector<std::pair<u64, u64>>> baby;  // x -> [(y, i)]
    FpPoint cur = P;
    for (u64 i = 1; i < s; ++i) {
        if (cur.inf) break;
        baby[cur.x].emplace_back(cur.y, i);
        cur = fp_add(C, cur, P);
    }
    const FpPoint giant = fp_neg(C, fp_mul(C, s, P));
    FpPoint g = Q;
    std::optional<u64> best;
    for (u64 j = 0; j * s < order_P + s; ++j) {
        if (g.inf) {
            u64 n = j * s;
            if (n < order_P && (!best || n < *best)) best = n;
        } else if (auto it = baby.find(g.x); it != baby.end()) {
            for (auto& [y, i] : it->second) {
                if (y != g.y) continue;
                u64 n = j * s + i;
                if (n < order_P && (!best || n < *best)) best = n;
            }
        }
        if (best) return best;  // js + i grows with j, so the first hit is least
        g = fp_add(C, g, giant);
    }
    return std::nullopt;
}

std::optional<u64> ec_dlog_pohlig_hellman(const FpPoint& P, const PointOrderRecord& ord_P,
                                          const FpPoint& Q, const ReducedCurve& C) {
    const u64 N = ord_P.order;
    std::vector<modmath::Congruence> system;
    for (auto& [q, e] : ord_P.order_factors) {
        u64 qe = 1;
        for (unsigned i = 0; i < e; ++i) qe *= q;
        FpPoint P0 = fp_mul(C, N / qe, P);
        FpPoint Q0 = fp_mul(C, N / qe, Q);
        // digits of n mod q^e
        u64 n_qe = 0, qk = 1;
        FpPoint gamma = fp_mul(C, qe / q, P0);  // order q
        for (unsigned k = 0; k < e; ++k) {
            FpPoint rem = fp_add(C, Q0, fp_neg(C, fp_mul(C, n_qe, P0)));
            FpPoint target = fp_mul(C, qe / (qk * q), rem);
            auto d = ec_dlog_bsgs(gamma, q, target, C);
            if (!d) return std::nullopt;
            n_qe += *d * qk;
            qk *= q;
        }
        system.push_back({Int(static_cast<unsigned long>(n_qe)), Int(static_cast<unsigned long>(qe))});
    }
    if (system.empty()) return 0;
    auto res = modmath::crt_combine(system);
    if (!res) return std::nullopt;
    u64 n = res->first.get_ui();
    if (fp_mul(C, n, P) == Q) return n;
    return std::nullopt;
}

std::optional<u64> ec_dlog(const FpPoint& P, const PointOrderRecord& ord_P,
                           const FpPoint& Q, const ReducedCurve& C, u64 bsgs_limit) {
    if (ord_P.order <= bsgs_limit) return ec_dlog_bsgs(P, ord_P.order, Q, C);
    return ec_dlog_pohlig_hellman(P, ord_P, Q, C);
}

}  // namespace slab::ec
