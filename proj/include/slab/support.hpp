#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "slab/ec.hpp"
#include "slab/isogeny.hpp"
#include "slab/store.hpp"

namespace slab::support {

using modmath::Int;
using modmath::u64;
using ec::Rat;

struct ScanConfig {
    u64 prime_bound = 1000;        // scans cover [5, prime_bound]
    std::vector<u64> skip;         // explicit user skips
    store::OrderCache* cache = nullptr;
    unsigned threads = 1;
    u64 naive_cutoff = 100000;     // group_order naive/annihilator switch

    void validate() const;
};

struct ScanRow {
    u64 p = 0;
    u64 ord_P = 0;
    u64 ord_Q = 0;
    bool divides = false;  // ord_Q | ord_P
};

struct DivisibilityReport {
    std::vector<ScanRow> rows;  // ascending by p
    std::optional<u64> first_violation;
    u64 violations = 0;
    std::string subject;
};

// Multiplicative order of a unit mod p (p not dividing num/den of a).
u64 gm_order(u64 a, u64 p);

// Support scan in the multiplicative group: ord(y mod p) | ord(x mod p)?
// Skips primes dividing num/den of x, y and primes where either reduces
// to +-1 (locally degenerate, mirroring the x, y not in {0, +-1} input rule).
DivisibilityReport scan_gm(const Rat& x, const Rat& y, const ScanConfig& cfg);

// Support scan on elliptic curves: ord(Q mod p) | ord(P mod p)?
DivisibilityReport scan_ec(const ec::CurveOverQ& E1, const ec::QPoint& P,
                           const ec::CurveOverQ& E2, const ec::QPoint& Q,
                           const ScanConfig& cfg);

enum class Verdict { Verified, Disproved, Inconclusive };

struct CrtStep {
    u64 p = 0;
    u64 residue = 0;  // n_p
    u64 modulus = 0;  // ord_p(P)
};

struct MultiplierCertificate {
    std::optional<Int> n;
    std::vector<CrtStep> trail;
    Int combined_modulus = 1;
    Verdict verdict = Verdict::Inconclusive;
    std::optional<u64> disproof_prime;
    std::string detail;
};

// Reconstructs m with y = x^m from local discrete logs, CRT-combined until
// the modulus exceeds 2*n_bound, then verified exactly over Q.
MultiplierCertificate infer_multiplier_gm(const Rat& x, const Rat& y, u64 n_bound,
                                          const ScanConfig& cfg);

// Reconstructs n with Q = n*P on E (the self-isogeny case), same protocol
// with elliptic discrete logs.
MultiplierCertificate infer_multiplier_ec(const ec::CurveOverQ& E, const ec::QPoint& P,
                                          const ec::QPoint& Q, u64 n_bound,
                                          const ScanConfig& cfg);

// Cross-curve form: for distinct curves no discrete log relates the groups,
// so the certificate is a divisibility disproof (or Inconclusive).
MultiplierCertificate infer_multiplier_ec(const ec::CurveOverQ& E1, const ec::QPoint& P,
                                          const ec::CurveOverQ& E2, const ec::QPoint& Q,
                                          u64 n_bound, const ScanConfig& cfg);

// Exact rational decision of n*P = Q / x^m = y.
bool verify_global(const ec::CurveOverQ& E, const ec::QPoint& P, const ec::QPoint& Q,
                   const Int& n);
bool verify_global_gm(const Rat& x, const Rat& y, const Int& m);

// ---- homomorphism chains (the Question-1 diagram) ----

struct MultiplyBy {
    Int n;
};

using ChainStep = std::variant<MultiplyBy, isogeny::VeluQ>;

struct HomChain {
    ec::CurveOverQ base;
    std::vector<ChainStep> steps;  // nonempty; adjacent codomain/domain match
};

void validate_chain(const HomChain& chain);

struct SpecializationReport {
    struct Row {
        u64 p = 0;
        bool commutes = false;
    };
    std::vector<Row> rows;
    u64 checked = 0, failures = 0;
    std::optional<u64> first_failure;
};

// Verifies sp_p(chain(P)) = chain_p(sp_p(P)) at every good prime in [5, B],
// skipping bad primes of every intermediate curve and isogeny degrees.
SpecializationReport check_specialization(const HomChain& chain, const ec::QPoint& P,
                                          const ScanConfig& cfg);

// Orders at one prime, cache-aware. Empty when reduction fails.
struct LocalOrders {
    u64 group_order = 0;
    u64 point_order = 0;
};
std::optional<LocalOrders> ec_orders_at(const ec::CurveOverQ& E, const ec::QPoint& P,
                                        u64 p, const ScanConfig& cfg);

// Heuristic non-torsion test from the spec: a 12-prime order sample must
// exceed the Mazur bound 16 somewhere, with an exact small-multiple fallback.
bool is_probably_nontorsion(const ec::CurveOverQ& E, const ec::QPoint& P,
                            const ScanConfig& cfg);

}  // namespace slab::support
