#include "slab/mahler.hpp"

#include <stdexcept>

namespace slab::mahler {

using modmath::mul_mod;

Int CoefficientRule::coeff(std::size_t k) const {
    if (k < head.size()) return head[k];
    switch (tail) {
        case Tail::Zeros:
            return 0;
        case Tail::Constant:
            return constant;
        case Tail::Periodic:
            if (period.empty()) throw std::logic_error("periodic tail with empty period");
            return period[(k - head.size()) % period.size()];
    }
    throw std::logic_error("unreachable");
}

Int MahlerMap::eval_psi(const Int& n) const {
    if (n < 0) throw std::domain_error("eval_psi: n must be nonnegative");
    Int sum = 0;
    Int ff = 1;  // n(n-1)...(n-k+1), empty product at k = 0
    for (std::size_t k = 0;; ++k) {
        sum += rule.coeff(k) * ff;
        ff *= n - static_cast<long>(k);
        if (ff == 0) break;
    }
    return sum;
}

Int MahlerMap::eval_phi(const Int& n) const { return eval_psi(n * n); }

u64 MahlerMap::eval_phi_mod(const Int& n, u64 N) const {
    if (N == 0) throw std::domain_error("eval_phi_mod: zero modulus");
    if (N == 1) return 0;
    Int n2 = n * n;
    const u64 x = mpz_fdiv_ui(n2.get_mpz_t(), N);
    auto coeff_mod = [&](std::size_t k) -> u64 {
        Int c = rule.coeff(k);
        return mpz_fdiv_ui(c.get_mpz_t(), N);
    };
    u64 sum = coeff_mod(0) % N;
    u64 prod = 1;
    // The k-th falling factorial gains the factor (n^2 - (k-1)); once the
    // running product is 0 mod N every later term vanishes mod N, and the
    // zero factor arrives within the first N steps.
    for (u64 k = 1;; ++k) {
        u64 factor = (x + N - (k - 1) % N) % N;
        prod = mul_mod(prod, factor, N);
        if (prod == 0) break;
        sum = (sum + mul_mod(coeff_mod(k), prod, N)) % N;
    }
    return sum;
}

MahlerMap canonical_counterexample() {
    MahlerMap f;
    f.rule.head = {Int(1)};
    f.rule.tail = CoefficientRule::Tail::Constant;
    f.rule.constant = 1;
    return f;
}

InducedTable induced_map_mod(const MahlerMap& f, u64 N, unsigned window) {
    if (N == 0 || window == 0) throw std::invalid_argument("induced_map_mod: N, window >= 1");
    InducedTable out;
    out.N = N;
    out.table.assign(N, 0);
    for (u64 r = 0; r < N; ++r) {
        u64 base = f.eval_phi_mod(Int(static_cast<unsigned long>(r)), N);
        out.table[r] = base;
        for (unsigned j = 1; j <= window; ++j) {
            Int shifted = Int(static_cast<unsigned long>(r)) +
                          Int(static_cast<unsigned long>(N)) * j;
            if (f.eval_phi_mod(shifted, N) != base) {
                out.failure = {Int(static_cast<unsigned long>(r)), shifted};
                out.table.clear();
                return out;
            }
        }
    }
    out.well_defined = true;
    return out;
}

CommutingSquareReport check_commuting_square(const MahlerMap& f, u64 N, u64 range) {
    CommutingSquareReport rep;
    rep.N = N;
    std::vector<u64> table(N);
    for (u64 r = 0; r < N; ++r)
        table[r] = f.eval_phi_mod(Int(static_cast<unsigned long>(r)), N);
    for (Int n = -Int(static_cast<unsigned long>(range)); n <= static_cast<long>(range); ++n) {
        u64 r = mpz_fdiv_ui(n.get_mpz_t(), N);
        if (f.eval_phi_mod(n, N) != table[r]) {
            rep.failure_input = n;
            return rep;
        }
    }
    rep.holds = true;
    return rep;
}

std::optional<NonpolynomialityWitness> nonpolynomiality_witness(const MahlerMap& f,
                                                                unsigned degree,
                                                                unsigned window) {
    const unsigned depth = degree + 1;
    std::vector<Int> vals;
    vals.reserve(window + depth + 1);
    for (unsigned n = 0; n <= window + depth; ++n)
        vals.push_back(f.eval_phi(Int(static_cast<unsigned long>(n))));
    for (unsigned d = 0; d < depth; ++d)
        for (std::size_t i = 0; i + 1 < vals.size() - d; ++i) vals[i] = vals[i + 1] - vals[i];
    for (unsigned t = 0; t <= window; ++t) {
        if (vals[t] != 0)
            return NonpolynomialityWitness{degree, Int(static_cast<unsigned long>(t)), vals[t]};
    }
    return std::nullopt;
}

}  // namespace slab::mahler
