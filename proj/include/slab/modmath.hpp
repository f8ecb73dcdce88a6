#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace slab::modmath {

using Int = mpz_class;
using u64 = std::uint64_t;

// ---- fixed-width helpers (fast path for residues mod p < 2^63) ----

inline u64 mul_mod(u64 a, u64 b, u64 m) {
    return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % m);
}

u64 pow_mod(u64 base, u64 exp, u64 m);

// Extended-gcd inverse; empty when gcd(a, m) > 1.
std::optional<u64> inv_mod_u64(u64 a, u64 m);

u64 isqrt_u64(u64 n);

// Deterministic Miller-Rabin, valid for all n < 2^64.
bool is_prime_u64(u64 n);

// Square root mod an odd prime (Tonelli-Shanks); empty when a is a non-residue.
std::optional<u64> sqrt_mod(u64 a, u64 p);

// ---- prime table ----

struct PrimeTable {
    u64 bound = 0;
    std::vector<u64> primes;
};

// All primes <= bound, ascending. Throws std::domain_error for bound < 2.
PrimeTable sieve_primes(u64 bound);

// ---- factorization ----

struct Factorization {
    Int value;
    std::vector<std::pair<Int, unsigned>> factors;  // primes ascending
};

// Exact factorization for 1 <= n < 2^128. Trial division below 10^6,
// then Brent's rho with a fixed seed; primality by Miller-Rabin.
Factorization factorize(const Int& n);

std::vector<std::pair<u64, unsigned>> factorize_u64(u64 n);

// ---- CRT ----

struct Congruence {
    Int residue;
    Int modulus;  // >= 2
};

// Solves all congruences simultaneously; moduli need not be coprime.
// Returns (residue, lcm of moduli), or empty when the system conflicts.
std::optional<std::pair<Int, Int>> crt_combine(const std::vector<Congruence>& system);

// ---- residues ----

// Quadratic residue symbol via the Euler criterion.
// Throws std::domain_error unless p is an odd prime.
int legendre(const Int& a, const Int& p);

std::optional<Int> mod_inv(const Int& a, const Int& m);

bool is_prime(const Int& n);

}  // namespace slab::modmath
