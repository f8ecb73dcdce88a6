#include "slab/density.hpp"

#include <algorithm>

#include "slab/parallel.hpp"

namespace slab::density {

namespace {

struct Classified {
    u64 p = 0;
    bool divisible = false;
};

std::vector<Classified> classify(const ec::CurveOverQ& E, const ec::QPoint& P, u64 ell,
                                 const support::ScanConfig& cfg) {
    std::vector<u64> primes;
    for (u64 p : modmath::sieve_primes(cfg.prime_bound).primes) {
        if (p < 5) continue;
        if (std::find(cfg.skip.begin(), cfg.skip.end(), p) != cfg.skip.end()) continue;
        primes.push_back(p);
    }
    std::vector<std::optional<Classified>> slots(primes.size());
    parallel_for(primes.size(), cfg.threads, [&](std::size_t i) {
        auto orders = support::ec_orders_at(E, P, primes[i], cfg);
        if (!orders) return;
        slots[i] = Classified{primes[i], orders->point_order % ell == 0};
    });
    std::vector<Classified> out;
    for (auto& s : slots)
        if (s) out.push_back(*s);
    return out;
}

DensityReport fold(const std::vector<Classified>& rows, u64 ell, u64 bound) {
    DensityReport rep;
    rep.ell = ell;
    rep.bound = bound;
    for (auto& r : rows) {
        ++rep.usable;
        if (r.divisible)
            ++rep.count_div;
        else
            ++rep.count_coprime;
    }
    rep.empty_domain = rep.usable == 0;
    for (unsigned k = 1; k <= 10; ++k) {
        u64 cb = bound / 10 * k;
        if (k == 10) cb = bound;
        DensityReport::Checkpoint cp;
        cp.bound = cb;
        for (auto& r : rows) {
            if (r.p > cb) break;  // rows ascend by p
            ++cp.count_total;
            if (r.divisible) ++cp.count_div;
        }
        rep.trace.push_back(cp);
    }
    return rep;
}

}  // namespace

DensityReport density_scan(const ec::CurveOverQ& E, const ec::QPoint& P, u64 ell,
                           const support::ScanConfig& cfg) {
    cfg.validate();
    if (!modmath::is_prime_u64(ell)) throw std::invalid_argument("density_scan: ell must be prime");
    if (!ec::on_curve(E, P)) throw std::invalid_argument("density_scan: P not on the curve");
    if (!support::is_probably_nontorsion(E, P, cfg))
        throw std::invalid_argument("density_scan: P appears to be torsion");
    return fold(classify(E, P, ell, cfg), ell, cfg.prime_bound);
}

TorsionShiftReport torsion_shift_scan(const ec::CurveOverQ& E, const ec::QPoint& P,
                                      const ec::QPoint& R, const support::ScanConfig& cfg) {
    cfg.validate();
    if (R.inf) throw std::invalid_argument("torsion_shift_scan: R must be a nonzero torsion point");
    if (!ec::on_curve(E, R) || !ec::on_curve(E, P))
        throw std::invalid_argument("torsion_shift_scan: point not on the curve");
    // exact order of R over Q (bounded by Mazur's 12)
    u64 ell = 0;
    ec::QPoint acc = R;
    for (u64 k = 1; k <= 12; ++k) {
        if (acc.inf) { ell = k; break; }
        acc = ec::q_add(E, acc, R);
    }
    if (ell == 0 || !modmath::is_prime_u64(ell))
        throw std::invalid_argument("torsion_shift_scan: R must have exact prime order over Q");
    if (!support::is_probably_nontorsion(E, P, cfg))
        throw std::invalid_argument("torsion_shift_scan: P appears to be torsion");

    ec::QPoint shifted = ec::q_add(E, P, R);
    auto shifted_rows = classify(E, shifted, ell, cfg);
    TorsionShiftReport rep;
    rep.shifted = fold(shifted_rows, ell, cfg.prime_bound);
    for (auto& row : shifted_rows) {
        if (row.divisible) continue;  // qualifying primes have coprime shifted order
        ++rep.qualifying;
        auto orders = support::ec_orders_at(E, P, row.p, cfg);
        if (orders && orders->point_order % ell == 0)
            ++rep.crosscheck_ok;
        else if (!rep.first_crosscheck_failure)
            rep.first_crosscheck_failure = row.p;
    }
    return rep;
}

}  // namespace slab::density
