#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "slab/modmath.hpp"

namespace slab::mahler {

using modmath::Int;
using modmath::u64;

// Coefficient sequence a_0, a_1, ... of a Mahler (binomial-transform style)
// series, given as an explicit head followed by an eventually-simple tail.
struct CoefficientRule {
    enum class Tail { Zeros, Constant, Periodic };

    std::vector<Int> head;
    Tail tail = Tail::Zeros;
    Int constant = 0;          // used when tail == Constant
    std::vector<Int> period;   // used when tail == Periodic (nonempty)

    Int coeff(std::size_t k) const;
};

// f(n) = sum_k a_k * n(n-1)...(n-k+1), a falling-factorial series.
struct MahlerMap {
    CoefficientRule rule;

    // Exact evaluation; finite because ff(n,k) = 0 for k > n. Requires n >= 0.
    Int eval_psi(const Int& n) const;

    // phi(n) = psi(n^2), defined for every integer n.
    Int eval_phi(const Int& n) const;

    // phi(n) mod N. The running falling-factorial product hits 0 mod N after
    // finitely many steps and stays there, so the sum truncates.
    u64 eval_phi_mod(const Int& n, u64 N) const;
};

// The all-ones rule: a_k = 1 for every k, so psi(n) = sum_k n(n-1)...(n-k+1).
MahlerMap canonical_counterexample();

struct InducedTable {
    u64 N = 0;
    bool well_defined = false;
    // residue -> image residue; populated only when well_defined
    std::vector<u64> table;
    // witness pair (n1, n2) with n1 = n2 mod N but phi(n1) != phi(n2) mod N
    std::optional<std::pair<Int, Int>> failure;
};

// Checks whether n -> phi(n) mod N factors through Z/N, testing all inputs
// in [0, N) against shifted representatives within [0, window*N).
InducedTable induced_map_mod(const MahlerMap& f, u64 N, unsigned window);

struct CommutingSquareReport {
    u64 N = 0;
    bool holds = false;
    std::optional<Int> failure_input;
};

// Verifies phi(n) mod N depends only on n mod N for n in [-range, range].
CommutingSquareReport check_commuting_square(const MahlerMap& f, u64 N, u64 range);

struct NonpolynomialityWitness {
    unsigned degree = 0;
    Int base;       // start of the window where the (d+1)-th difference is nonzero
    Int difference; // the nonzero iterated forward difference
};

// A degree-d polynomial has identically-zero (d+1)-th forward differences.
// Searches offsets in [0, window] for a nonzero (d+1)-th difference of phi.
std::optional<NonpolynomialityWitness> nonpolynomiality_witness(const MahlerMap& f,
                                                                unsigned degree,
                                                                unsigned window);

}  // namespace slab::mahler
