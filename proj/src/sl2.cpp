#include "slab/sl2.hpp"

#include <stdexcept>

namespace slab::sl2 {

using modmath::inv_mod_u64;
using modmath::mul_mod;

Mat2 identity(u64 m) { return {m, 1 % m, 0, 0, 1 % m}; }

Mat2 mat_mul(const Mat2& A, const Mat2& B) {
    if (A.m != B.m) throw std::invalid_argument("mat_mul: modulus mismatch");
    const u64 m = A.m;
    return {m,
            (mul_mod(A.a, B.a, m) + mul_mod(A.b, B.c, m)) % m,
            (mul_mod(A.a, B.b, m) + mul_mod(A.b, B.d, m)) % m,
            (mul_mod(A.c, B.a, m) + mul_mod(A.d, B.c, m)) % m,
            (mul_mod(A.c, B.b, m) + mul_mod(A.d, B.d, m)) % m};
}

u64 det(const Mat2& A) {
    return (mul_mod(A.a, A.d, A.m) + A.m - mul_mod(A.b, A.c, A.m)) % A.m;
}

bool in_sl2(const Mat2& A) { return det(A) == 1 % A.m; }

Mat2 elem_upper(u64 t, u64 m) { return {m, 1 % m, t % m, 0, 1 % m}; }
Mat2 elem_lower(u64 t, u64 m) { return {m, 1 % m, 0, t % m, 1 % m}; }

std::array<Mat2, 4> deligne_factorization(u64 a, u64 m) {
    a %= m;
    auto ainv = inv_mod_u64(a, m);
    if (!ainv) throw std::domain_error("deligne_factorization: a is not a unit mod m");
    u64 am1 = (a + m - 1) % m;
    u64 t4 = mul_mod(m - am1 % m, *ainv, m);  // -(a-1)/a
    return {elem_upper(m - *ainv % m, m), elem_lower(am1, m), elem_upper(1, m),
            elem_lower(t4 % m, m)};
}

Mat2 ElementaryWord::evaluate() const {
    Mat2 acc = identity(m);
    for (auto& [side, t] : letters)
        acc = mat_mul(acc, side == Side::Upper ? elem_upper(t, m) : elem_lower(t, m));
    return acc;
}

namespace {

// Parameters (x1..x5) with g = U(x1) L(x2) U(x3) L(x4) U(x5) in SL2(F_p).
std::array<u64, 5> decompose_mod_p(const Mat2& g) {
    const u64 p = g.m;
    if (g == identity(p)) return {0, 0, 0, 0, 0};
    if (g.c % p != 0) {
        u64 cinv = *inv_mod_u64(g.c, p);
        u64 x1 = mul_mod((g.a + p - 1) % p, cinv, p);
        u64 x3 = mul_mod((g.d + p - 1) % p, cinv, p);
        return {x1, g.c % p, x3, 0, 0};
    }
    // c = 0: shear right by E21(1); the shifted matrix has c' = d, a unit
    u64 d = g.d % p;
    u64 dinv = *inv_mod_u64(d, p);
    u64 a1 = (g.a + g.b) % p;
    u64 x1 = mul_mod((a1 + p - 1) % p, dinv, p);
    u64 x3 = mul_mod((d + p - 1) % p, dinv, p);
    return {x1, d, x3, p - 1, 0};
}

std::vector<std::pair<u64, unsigned>> squarefree_factors(u64 m) {
    auto f = modmath::factorize_u64(m);
    for (auto& [p, e] : f)
        if (e > 1) throw std::invalid_argument("modulus must be squarefree");
    return f;
}

u64 crt_u64(const std::vector<std::pair<u64, u64>>& residues) {
    std::vector<modmath::Congruence> sys;
    for (auto& [r, p] : residues)
        sys.push_back({modmath::Int(static_cast<unsigned long>(r)),
                       modmath::Int(static_cast<unsigned long>(p))});
    return modmath::crt_combine(sys)->first.get_ui();
}

}  // namespace

ElementaryWord elementary_decomposition(const Mat2& g) {
    if (!in_sl2(g)) throw std::domain_error("elementary_decomposition: det != 1");
    auto factors = squarefree_factors(g.m);
    std::array<std::vector<std::pair<u64, u64>>, 5> params;
    for (auto& [p, e] : factors) {
        Mat2 gp{p, g.a % p, g.b % p, g.c % p, g.d % p};
        auto xs = decompose_mod_p(gp);
        for (int i = 0; i < 5; ++i) params[i].emplace_back(xs[i], p);
    }
    ElementaryWord w;
    w.m = g.m;
    static const Side pattern[5] = {Side::Upper, Side::Lower, Side::Upper, Side::Lower,
                                    Side::Upper};
    for (int i = 0; i < 5; ++i) w.letters.emplace_back(pattern[i], crt_u64(params[i]));
    return w;
}

std::vector<Mat2> crt_split(const Mat2& g) {
    std::vector<Mat2> out;
    for (auto& [p, e] : squarefree_factors(g.m))
        out.push_back({p, g.a % p, g.b % p, g.c % p, g.d % p});
    return out;
}

Mat2 crt_join(const std::vector<Mat2>& parts) {
    if (parts.empty()) throw std::invalid_argument("crt_join: no components");
    u64 m = 1;
    std::vector<std::pair<u64, u64>> ra, rb, rc, rd;
    for (auto& g : parts) {
        m *= g.m;
        ra.emplace_back(g.a, g.m);
        rb.emplace_back(g.b, g.m);
        rc.emplace_back(g.c, g.m);
        rd.emplace_back(g.d, g.m);
    }
    return {m, crt_u64(ra), crt_u64(rb), crt_u64(rc), crt_u64(rd)};
}

u64 element_order(const Mat2& g) {
    Mat2 acc = g;
    Mat2 id = identity(g.m);
    for (u64 k = 1; k <= 8 * g.m * g.m + 8; ++k) {
        if (acc == id) return k;
        acc = mat_mul(acc, g);
    }
    throw std::logic_error("element_order: order not found (non-invertible input?)");
}

bool are_conjugate(u64 q, const Mat2& A, const Mat2& B) {
    bool found = false;
    for_each_sl2(q, [&](const Mat2& g) {
        if (found) return;
        if (mat_mul(g, A) == mat_mul(B, g)) found = true;
    });
    return found;
}

unsigned unipotent_power_conjugacy_count(u64 p) {
    if (p <= 2 || p > 23 || !modmath::is_prime_u64(p))
        throw std::invalid_argument("unipotent_power_conjugacy_count: need an odd prime <= 23");
    Mat2 u = elem_upper(1, p);
    unsigned count = 0;
    for (u64 k = 1; k < p; ++k) {
        Mat2 uk = elem_upper(k, p);  // u^k = E12(k)
        if (are_conjugate(p, u, uk)) ++count;
    }
    return count;
}

unsigned semisimple_power_conjugacy_count(const Mat2& s) {
    const u64 q = s.m;
    if (q > 13 || !modmath::is_prime_u64(q))
        throw std::invalid_argument("semisimple_power_conjugacy_count: q must be a prime <= 13");
    if (!in_sl2(s)) throw std::domain_error("semisimple_power_conjugacy_count: det != 1");
    if (s == identity(q) || s == Mat2{q, q - 1, 0, 0, q - 1})
        throw std::domain_error("semisimple_power_conjugacy_count: central element");
    // distinct eigenvalues <=> trace^2 != 4
    u64 tr = (s.a + s.d) % q;
    if (mul_mod(tr, tr, q) == 4 % q)
        throw std::domain_error("semisimple_power_conjugacy_count: not semisimple with distinct eigenvalues");
    u64 ord = element_order(s);
    unsigned count = 0;
    Mat2 acc = s;
    for (u64 k = 1; k <= ord; ++k) {
        if (are_conjugate(q, s, acc)) ++count;
        acc = mat_mul(acc, s);
    }
    return count;
}

bool has_element_of_order(u64 q, u64 n) {
    if (q > 13 || !modmath::is_prime_u64(q))
        throw std::invalid_argument("has_element_of_order: q must be a prime <= 13");
    bool found = false;
    for_each_sl2(q, [&](const Mat2& g) {
        if (!found && element_order(g) == n) found = true;
    });
    return found;
}

}  // namespace slab::sl2
