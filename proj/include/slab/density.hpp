#pragma once

#include <optional>
#include <vector>

#include "slab/support.hpp"

namespace slab::density {

using modmath::Int;
using modmath::u64;

struct DensityReport {
    u64 ell = 0;
    u64 bound = 0;
    u64 usable = 0;        // good primes classified
    u64 count_div = 0;     // ell | ord(P mod p)
    u64 count_coprime = 0; // ell does not divide ord(P mod p)
    struct Checkpoint {
        u64 bound = 0;
        u64 count_div = 0;
        u64 count_total = 0;
    };
    std::vector<Checkpoint> trace;  // at B/10, 2B/10, ..., B
    bool empty_domain = false;      // no usable prime; densities undefined
};

// Classifies every good prime in [5, B] by ell | ord(P mod p).
// Throws for torsion P or composite ell.
DensityReport density_scan(const ec::CurveOverQ& E, const ec::QPoint& P, u64 ell,
                           const support::ScanConfig& cfg);

struct TorsionShiftReport {
    DensityReport shifted;          // density report for P + R
    u64 qualifying = 0;             // primes with ord((P+R) mod p) coprime to ell
    u64 crosscheck_ok = 0;          // ... where additionally ell | ord(P mod p)
    std::optional<u64> first_crosscheck_failure;
};

// The remark after the coprime-order lemma: where ord(P+R) is coprime to
// ell, ord(P) must be divisible by ell. R must have exact order ell over Q.
TorsionShiftReport torsion_shift_scan(const ec::CurveOverQ& E, const ec::QPoint& P,
                                      const ec::QPoint& R, const support::ScanConfig& cfg);

}  // namespace slab::density
