#pragma once

#include <array>
#include <string>
#include <vector>

#include "slab/modmath.hpp"

namespace slab::sl2 {

using modmath::u64;

// 2x2 matrix over Z/m. Product rings prod Z/p are represented as Z/m with
// m the squarefree product of the primes.
struct Mat2 {
    u64 m = 0;
    u64 a = 0, b = 0, c = 0, d = 0;

    bool operator==(const Mat2& o) const {
        return m == o.m && a == o.a && b == o.b && c == o.c && d == o.d;
    }
};

Mat2 identity(u64 m);
Mat2 mat_mul(const Mat2& A, const Mat2& B);
u64 det(const Mat2& A);
bool in_sl2(const Mat2& A);

Mat2 elem_upper(u64 t, u64 m);  // E12(t)
Mat2 elem_lower(u64 t, u64 m);  // E21(t)

// The 4-unipotent identity: E12(-a^-1) E21(a-1) E12(1) E21(-(a-1)/a)
// multiplies to diag(a^-1, a). Throws for non-units.
std::array<Mat2, 4> deligne_factorization(u64 a, u64 m);

enum class Side { Upper, Lower };

struct ElementaryWord {
    u64 m = 0;
    std::vector<std::pair<Side, u64>> letters;  // fixed pattern U,L,U,L,U

    Mat2 evaluate() const;
};

// Word of length <= 5 reproducing g, solved per prime factor of the
// squarefree modulus and CRT-recombined parameterwise.
ElementaryWord elementary_decomposition(const Mat2& g);

// Entrywise CRT projection to the prime components; join inverts it.
std::vector<Mat2> crt_split(const Mat2& g);
Mat2 crt_join(const std::vector<Mat2>& parts);

u64 element_order(const Mat2& g);

bool are_conjugate(u64 q, const Mat2& A, const Mat2& B);

// Number of k in {1,...,p-1} with u^k conjugate to u, u = E12(1) in SL2(Z/p).
// Exhaustive; requires 2 < p <= 23.
unsigned unipotent_power_conjugacy_count(u64 p);

// Number of k in {1,...,ord(s)} with s^k conjugate to s, for semisimple
// non-central s in SL2(Z/q), q <= 13 prime.
unsigned semisimple_power_conjugacy_count(const Mat2& s);

// Whether SL2(Z/q) contains an element of exact order n (q <= 13).
bool has_element_of_order(u64 q, u64 n);

// Calls fn for every element of SL2(Z/q).
template <class Fn>
void for_each_sl2(u64 q, Fn fn) {
    for (u64 a = 0; a < q; ++a)
        for (u64 b = 0; b < q; ++b)
            for (u64 c = 0; c < q; ++c)
                for (u64 d = 0; d < q; ++d) {
                    if ((modmath::mul_mod(a, d, q) + q - modmath::mul_mod(b, c, q)) % q != 1)
                        continue;
                    fn(Mat2{q, a, b, c, d});
                }
}

}  // namespace slab::sl2
