#include "slab/isogeny.hpp"

namespace slab::isogeny {

ShortWQ to_short(const ec::CurveOverQ& E) {
    return {Rat(-27 * E.c4), Rat(-54 * E.c6)};
}

SPtQ to_short_point(const ec::CurveOverQ& E, const ec::QPoint& P) {
    if (P.inf) return {};
    Rat xs = 36 * P.x + Rat(3 * E.b2);
    Rat ys = 216 * P.y + Rat(108) * (Rat(E.a1) * P.x + Rat(E.a3));
    return {false, xs, ys};
}

std::optional<u64> reduce_rat(const Rat& r, u64 p) {
    Int den = r.get_den();
    Int dm = den % static_cast<unsigned long>(p);
    if (dm == 0) return std::nullopt;
    Int num = r.get_num() % static_cast<unsigned long>(p);
    if (num < 0) num += static_cast<unsigned long>(p);
    u64 inv = *modmath::inv_mod_u64(dm.get_ui(), p);
    return modmath::mul_mod(num.get_ui(), inv, p);
}

std::optional<ec::ReducedCurve> reduce_short(const ShortWQ& E, u64 p) {
    if (p <= 3 || !modmath::is_prime_u64(p)) return std::nullopt;
    auto A = reduce_rat(E.A, p);
    auto B = reduce_rat(E.B, p);
    if (!A || !B) return std::nullopt;
    // 4A^3 + 27B^2 != 0 mod p
    u64 d = (modmath::mul_mod(4, modmath::pow_mod(*A, 3, p), p) +
             modmath::mul_mod(27, modmath::mul_mod(*B, *B, p), p)) % p;
    if (d == 0) return std::nullopt;
    return ec::ReducedCurve{p, *A, *B};
}

std::optional<ec::FpPoint> reduce_short_point(const SPtQ& P, u64 p) {
    if (P.inf) return ec::FpPoint{};
    auto x = reduce_rat(P.x, p);
    auto y = reduce_rat(P.y, p);
    if (!x || !y) return std::nullopt;
    return ec::FpPoint{false, *x, *y};
}

std::optional<VeluP> reduce_isogeny(const VeluQ& j, u64 p) {
    auto dom = reduce_short(j.domain, p);
    auto cod = reduce_short(j.codomain, p);
    if (!dom || !cod) return std::nullopt;
    if (j.degree % p == 0) return std::nullopt;
    VeluP out;
    out.domain = {dom->A, dom->B};
    out.codomain = {cod->A, cod->B};
    out.degree = j.degree;
    auto kg = reduce_short_point(j.kernel_gen, p);
    if (!kg) return std::nullopt;
    out.kernel_gen = {kg->inf, kg->x, kg->y};
    for (std::size_t i = 0; i < j.kx.size(); ++i) {
        auto x = reduce_rat(j.kx[i], p);
        auto v = reduce_rat(j.kv[i], p);
        auto u = reduce_rat(j.ku[i], p);
        if (!x || !v || !u) return std::nullopt;
        out.kx.push_back(*x);
        out.kv.push_back(*v);
        out.ku.push_back(*u);
    }
    return out;
}

std::vector<u64> bad_primes_short(const ShortWQ& E, u64 bound) {
    std::vector<u64> bad;
    Rat d = 4 * E.A * E.A * E.A + 27 * E.B * E.B;
    Int num = d.get_num();
    Int den = E.A.get_den() * E.B.get_den();
    for (u64 p : modmath::sieve_primes(bound).primes) {
        if (p <= 3) { bad.push_back(p); continue; }
        Int pm(static_cast<unsigned long>(p));
        if (num % pm == 0 || den % pm == 0) bad.push_back(p);
    }
    return bad;
}

}  // namespace slab::isogeny
