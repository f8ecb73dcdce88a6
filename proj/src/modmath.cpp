#include "slab/modmath.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace slab::modmath {

u64 pow_mod(u64 base, u64 exp, u64 m) {
    if (m == 1) return 0;
    u64 r = 1;
    base %= m;
    while (exp) {
        if (exp & 1) r = mul_mod(r, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return r;
}

std::optional<u64> inv_mod_u64(u64 a, u64 m) {
    a %= m;
    std::int64_t t = 0, newt = 1;
    std::int64_t r = static_cast<std::int64_t>(m), newr = static_cast<std::int64_t>(a);
    while (newr != 0) {
        std::int64_t q = r / newr;
        t = std::exchange(newt, t - q * newt);
        r = std::exchange(newr, r - q * newr);
    }
    if (r > 1) return std::nullopt;
    if (t < 0) t += static_cast<std::int64_t>(m);
    return static_cast<u64>(t);
}

u64 isqrt_u64(u64 n) {
    if (n == 0) return 0;
    u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    // This base set is deterministic-correct for all n < 2^64.
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mul_mod(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

std::optional<u64> sqrt_mod(u64 a, u64 p) {
    a %= p;
    if (a == 0) return 0;
    if (p == 2) return a;
    if (pow_mod(a, (p - 1) / 2, p) != 1) return std::nullopt;
    if (p % 4 == 3) return pow_mod(a, (p + 1) / 4, p);
    // Tonelli-Shanks
    u64 q = p - 1;
    unsigned s = 0;
    while ((q & 1) == 0) { q >>= 1; ++s; }
    u64 z = 2;
    while (pow_mod(z, (p - 1) / 2, p) != p - 1) ++z;
    u64 m = s;
    u64 c = pow_mod(z, q, p);
    u64 t = pow_mod(a, q, p);
    u64 r = pow_mod(a, (q + 1) / 2, p);
    while (t != 1) {
        u64 t2 = t;
        unsigned i = 0;
        while (t2 != 1) { t2 = mul_mod(t2, t2, p); ++i; }
        u64 b = c;
        for (unsigned j = 0; j + i + 1 < m; ++j) b = mul_mod(b, b, p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    return r;
}

PrimeTable sieve_primes(u64 bound) {
    if (bound < 2) throw std::domain_error("sieve_primes: bound must be >= 2");
    std::vector<bool> composite(bound + 1, false);
    PrimeTable table;
    table.bound = bound;
    for (u64 i = 2; i <= bound; ++i) {
        if (composite[i]) continue;
        table.primes.push_back(i);
        for (u64 j = i * i; j <= bound; j += i) composite[j] = true;
    }
    return table;
}

namespace {

constexpr u64 kTrialCutoff = 1'000'000;

const std::vector<u64>& small_primes() {
    static const std::vector<u64> primes = sieve_primes(kTrialCutoff).primes;
    return primes;
}

u64 brent_rho(u64 n) {
    // Deterministic: increments c from 1, x0 = 2.
    for (u64 c = 1;; ++c) {
        u64 x = 2, y = 2, d = 1;
        u64 q = 1;
        int lam = 1;
        while (d == 1) {
            x = y;
            for (int i = 0; i < lam; ++i) y = (mul_mod(y, y, n) + c) % n;
            int k = 0;
            while (k < lam && d == 1) {
                u64 ys = y;
                int lim = std::min(128, lam - k);
                for (int i = 0; i < lim; ++i) {
                    y = (mul_mod(y, y, n) + c) % n;
                    q = mul_mod(q, x > y ? x - y : y - x, n);
                }
                d = std::gcd(q, n);
                if (d == n) {
                    // backtrack
                    d = 1;
                    do {
                        ys = (mul_mod(ys, ys, n) + c) % n;
                        d = std::gcd(x > ys ? x - ys : ys - x, n);
                    } while (d == 1);
                    break;
                }
                k += lim;
            }
            lam *= 2;
        }
        if (d != n) return d;
    }
}

void factor_u64_into(u64 n, std::vector<std::pair<u64, unsigned>>& out) {
    if (n == 1) return;
    if (is_prime_u64(n)) {
        out.emplace_back(n, 1);
        return;
    }
    u64 d = brent_rho(n);
    factor_u64_into(d, out);
    factor_u64_into(n / d, out);
}

Int mpz_rho(const Int& n) {
    // Brent's rho over mpz, fixed seed.
    for (unsigned long c = 1;; ++c) {
        Int x = 2, y = 2, d = 1;
        do {
            x = (x * x + c) % n;
            y = (y * y + c) % n;
            y = (y * y + c) % n;
            Int diff = x > y ? x - y : y - x;
            if (diff == 0) { d = n; break; }
            mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
        } while (d == 1);
        if (d != n) return d;
    }
}

void factor_mpz_into(const Int& n, std::vector<Int>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    Int d = mpz_rho(n);
    factor_mpz_into(d, out);
    factor_mpz_into(n / d, out);
}

}  // namespace

bool is_prime(const Int& n) {
    if (n.fits_ulong_p()) return is_prime_u64(n.get_ui());
    return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

std::vector<std::pair<u64, unsigned>> factorize_u64(u64 n) {
    std::vector<std::pair<u64, unsigned>> out;
    for (u64 p : small_primes()) {
        if (p * p > n) break;
        if (n % p == 0) {
            unsigned e = 0;
            while (n % p == 0) { n /= p; ++e; }
            out.emplace_back(p, e);
        }
    }
    if (n > 1) {
        if (n <= kTrialCutoff * kTrialCutoff && is_prime_u64(n)) {
            out.emplace_back(n, 1);
        } else {
            std::vector<std::pair<u64, unsigned>> rest;
            factor_u64_into(n, rest);
            std::sort(rest.begin(), rest.end());
            for (auto& [p, e] : rest) {
                if (!out.empty() && out.back().first == p)
                    out.back().second += e;
                else
                    out.emplace_back(p, e);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

Factorization factorize(const Int& n) {
    if (n < 1) throw std::domain_error("factorize: n must be positive");
    if (mpz_sizeinbase(n.get_mpz_t(), 2) > 128)
        throw std::domain_error("factorize: n exceeds the 128-bit size bound");
    Factorization f;
    f.value = n;
    if (n == 1) return f;
    if (n.fits_ulong_p()) {
        for (auto& [p, e] : factorize_u64(n.get_ui())) f.factors.emplace_back(Int(static_cast<unsigned long>(p)), e);
        return f;
    }
    Int m = n;
    for (u64 p : small_primes()) {
        if (m == 1) break;
        if (m % p == 0) {
            unsigned e = 0;
            while (m % p == 0) { m /= p; ++e; }
            f.factors.emplace_back(Int(static_cast<unsigned long>(p)), e);
        }
    }
    if (m > 1) {
        std::vector<Int> rest;
        factor_mpz_into(m, rest);
        std::sort(rest.begin(), rest.end());
        for (auto& p : rest) {
            if (!f.factors.empty() && f.factors.back().first == p)
                f.factors.back().second += 1;
            else
                f.factors.emplace_back(p, 1);
        }
    }
    std::sort(f.factors.begin(), f.factors.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return f;
}

std::optional<std::pair<Int, Int>> crt_combine(const std::vector<Congruence>& system) {
    Int r = 0, m = 1;
    for (const auto& c : system) {
        if (c.modulus < 2) throw std::domain_error("crt_combine: modulus must be >= 2");
        Int r2 = ((c.residue % c.modulus) + c.modulus) % c.modulus;
        Int g;
        mpz_gcd(g.get_mpz_t(), m.get_mpz_t(), c.modulus.get_mpz_t());
        Int diff = r2 - r;
        if (diff % g != 0) return std::nullopt;
        Int m2 = c.modulus / g;
        Int lcm = m * m2;
        Int inv;
        Int mg = m / g;
        if (mpz_invert(inv.get_mpz_t(), mg.get_mpz_t(), m2.get_mpz_t()) == 0 && m2 != 1)
            return std::nullopt;  // unreachable: mg and m2 are coprime
        Int step = ((diff / g) % m2) * inv % m2;
        r = (r + m * step) % lcm;
        if (r < 0) r += lcm;
        m = lcm;
    }
    return std::make_pair(r, m);
}

int legendre(const Int& a, const Int& p) {
    if (p == 2 || p % 2 == 0 || !is_prime(p))
        throw std::domain_error("legendre: p must be an odd prime");
    Int r = ((a % p) + p) % p;
    if (r == 0) return 0;
    Int e = (p - 1) / 2;
    Int v;
    mpz_powm(v.get_mpz_t(), r.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
    return v == 1 ? 1 : -1;
}

std::optional<Int> mod_inv(const Int& a, const Int& m) {
    if (m < 2) throw std::domain_error("mod_inv: modulus must be >= 2");
    Int r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) return std::nullopt;
    return r;
}

}  // namespace slab::modmath
