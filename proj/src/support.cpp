#include "slab/support.hpp"

#include <algorithm>
#include <unordered_map>

#include "slab/parallel.hpp"

namespace slab::support {

using modmath::mul_mod;
using modmath::pow_mod;

void ScanConfig::validate() const {
    if (prime_bound < 5) throw std::invalid_argument("ScanConfig: prime bound must be >= 5");
}

namespace {

bool skipped(const ScanConfig& cfg, u64 p) {
    return std::find(cfg.skip.begin(), cfg.skip.end(), p) != cfg.skip.end();
}

std::vector<u64> scan_primes(const ScanConfig& cfg) {
    std::vector<u64> out;
    for (u64 p : modmath::sieve_primes(cfg.prime_bound).primes)
        if (p >= 5 && !skipped(cfg, p)) out.push_back(p);
    return out;
}

bool degenerate_rat(const Rat& r) { return r == 0 || r == 1 || r == -1; }

// Reduction of a nonzero rational mod p; empty when p divides num or den,
// or when the residue is 0 or +-1.
std::optional<u64> gm_reduce(const Rat& r, u64 p) {
    auto v = isogeny::reduce_rat(r, p);
    if (!v) return std::nullopt;
    if (*v == 0 || *v == 1 || *v == p - 1) return std::nullopt;
    if (r.get_num() % static_cast<unsigned long>(p) == 0) return std::nullopt;
    return v;
}

std::optional<u64> gm_dlog(u64 a, u64 b, u64 ord, u64 p) {
    if (b == 1) return 0;
    u64 s = modmath::isqrt_u64(ord) + 1;
    std::unordered_map<u64, u64> baby;
    u64 cur = 1;
    for (u64 i = 0; i < s; ++i) {
        baby.emplace(cur, i);  // keep the least i
        cur = mul_mod(cur, a, p);
    }
    u64 giant = pow_mod(*modmath::inv_mod_u64(a, p), s, p);
    u64 g = b;
    for (u64 j = 0; j * s < ord + s; ++j) {
        auto it = baby.find(g);
        if (it != baby.end()) {
            u64 m = j * s + it->second;
            if (m < ord && pow_mod(a, m, p) == b) return m;
        }
        g = mul_mod(g, giant, p);
    }
    return std::nullopt;
}

}  // namespace

u64 gm_order(u64 a, u64 p) {
    u64 m = p - 1;
    for (auto& [q, e] : modmath::factorize_u64(p - 1)) {
        for (unsigned i = 0; i < e; ++i) {
            if (pow_mod(a, m / q, p) == 1)
                m /= q;
            else
                break;
        }
    }
    return m;
}

DivisibilityReport scan_gm(const Rat& x, const Rat& y, const ScanConfig& cfg) {
    cfg.validate();
    if (degenerate_rat(x) || degenerate_rat(y))
        throw std::invalid_argument("scan_gm: x and y must avoid {0, +-1}");
    auto primes = scan_primes(cfg);
    std::vector<std::optional<ScanRow>> slots(primes.size());
    parallel_for(primes.size(), cfg.threads, [&](std::size_t i) {
        u64 p = primes[i];
        auto xb = gm_reduce(x, p);
        auto yb = gm_reduce(y, p);
        if (!xb || !yb) return;
        ScanRow row;
        row.p = p;
        row.ord_P = gm_order(*xb, p);
        row.ord_Q = gm_order(*yb, p);
        row.divides = row.ord_P % row.ord_Q == 0;
        slots[i] = row;
    });
    DivisibilityReport rep;
    rep.subject = "gm " + Rat(x).get_str() + " " + Rat(y).get_str();
    for (auto& s : slots) {
        if (!s) continue;
        rep.rows.push_back(*s);
        if (!s->divides) {
            ++rep.violations;
            if (!rep.first_violation) rep.first_violation = s->p;
        }
    }
    return rep;
}

std::optional<LocalOrders> ec_orders_at(const ec::CurveOverQ& E, const ec::QPoint& P,
                                        u64 p, const ScanConfig& cfg) {
    auto C = ec::reduce_curve(E, p);
    if (!C) return std::nullopt;
    const std::string cfp = E.fingerprint();
    const std::string pfp = ec::point_fingerprint(P);
    if (cfg.cache) {
        if (auto hit = cfg.cache->get(cfp, pfp, p))
            return LocalOrders{hit->group_order, hit->point_order};
    }
    u64 N;
    if (cfg.cache) {
        if (auto ghit = cfg.cache->get(cfp, "-", p))
            N = ghit->group_order;
        else {
            N = ec::group_order(*C, cfg.naive_cutoff);
            cfg.cache->put({cfp, "-", p, N, 0});
        }
    } else {
        N = ec::group_order(*C, cfg.naive_cutoff);
    }
    ec::FpPoint Pb = ec::reduce_point(P, E, *C);
    u64 ord = ec::point_order(Pb, *C, N).order;
    if (cfg.cache) cfg.cache->put({cfp, pfp, p, N, ord});
    return LocalOrders{N, ord};
}

DivisibilityReport scan_ec(const ec::CurveOverQ& E1, const ec::QPoint& P,
                           const ec::CurveOverQ& E2, const ec::QPoint& Q,
                           const ScanConfig& cfg) {
    cfg.validate();
    if (!ec::on_curve(E1, P) || !ec::on_curve(E2, Q))
        throw std::invalid_argument("scan_ec: point not on its curve");
    if (P.inf || Q.inf) throw std::invalid_argument("scan_ec: P and Q must be nonzero");
    auto primes = scan_primes(cfg);
    std::vector<std::optional<ScanRow>> slots(primes.size());
    parallel_for(primes.size(), cfg.threads, [&](std::size_t i) {
        u64 p = primes[i];
        auto a = ec_orders_at(E1, P, p, cfg);
        auto b = ec_orders_at(E2, Q, p, cfg);
        if (!a || !b) return;  // bad reduction for either curve
        ScanRow row;
        row.p = p;
        row.ord_P = a->point_order;
        row.ord_Q = b->point_order;
        row.divides = row.ord_P % row.ord_Q == 0;
        slots[i] = row;
    });
    DivisibilityReport rep;
    rep.subject = "ec " + E1.fingerprint() + " " + ec::point_fingerprint(P) + " | " +
                  E2.fingerprint() + " " + ec::point_fingerprint(Q);
    for (auto& s : slots) {
        if (!s) continue;
        rep.rows.push_back(*s);
        if (!s->divides) {
            ++rep.violations;
            if (!rep.first_violation) rep.first_violation = s->p;
        }
    }
    return rep;
}

bool verify_global_gm(const Rat& x, const Rat& y, const Int& m) {
    Int e = m >= 0 ? m : Int(-m);
    if (!e.fits_ulong_p()) return false;
    Rat pw;
    mpz_pow_ui(mpq_numref(pw.get_mpq_t()), x.get_num().get_mpz_t(), e.get_ui());
    mpz_pow_ui(mpq_denref(pw.get_mpq_t()), x.get_den().get_mpz_t(), e.get_ui());
    pw.canonicalize();
    if (m < 0) pw = 1 / pw;
    return pw == y;
}

bool verify_global(const ec::CurveOverQ& E, const ec::QPoint& P, const ec::QPoint& Q,
                   const Int& n) {
    return ec::q_mul(E, n, P) == Q;
}

namespace {

struct LocalDlogInput {
    u64 p = 0;
    u64 ord = 0;  // ord_p(P) (or of x mod p)
};

// Shared CRT accumulation protocol for both group flavors.
// local_dlog(p, ord) returns n_p or nullopt (NotInSubgroup).
template <class DlogFn, class VerifyFn>
MultiplierCertificate run_inference(std::vector<LocalDlogInput> locals, u64 n_bound,
                                    DlogFn local_dlog, VerifyFn verify) {
    // largest local order first; fewer primes to exceed 2*n_bound
    std::sort(locals.begin(), locals.end(), [](const auto& a, const auto& b) {
        if (a.ord != b.ord) return a.ord > b.ord;
        return a.p < b.p;
    });
    MultiplierCertificate cert;
    std::vector<modmath::Congruence> system;
    const Int target = 2 * Int(static_cast<unsigned long>(n_bound));
    for (auto& loc : locals) {
        if (loc.ord <= 1) continue;
        auto np = local_dlog(loc.p, loc.ord);
        if (!np) {
            cert.verdict = Verdict::Disproved;
            cert.disproof_prime = loc.p;
            cert.detail = "not in the local cyclic subgroup at p=" + std::to_string(loc.p);
            return cert;
        }
        cert.trail.push_back({loc.p, *np, loc.ord});
        system.push_back({Int(static_cast<unsigned long>(*np)),
                          Int(static_cast<unsigned long>(loc.ord))});
        auto combined = modmath::crt_combine(system);
        if (!combined) {
            cert.verdict = Verdict::Disproved;
            cert.disproof_prime = loc.p;
            cert.detail = "local congruences are inconsistent; no single multiplier exists";
            return cert;
        }
        cert.combined_modulus = combined->second;
        if (combined->second > target) {
            Int cand = combined->first;
            if (2 * cand > combined->second) cand -= combined->second;  // symmetric range
            cert.n = cand;
            break;
        }
    }
    if (!cert.n) {
        if (system.empty()) {
            cert.verdict = Verdict::Inconclusive;
            cert.detail = "no usable primes below the bound";
            return cert;
        }
        auto combined = modmath::crt_combine(system);
        Int cand = combined->first;
        if (2 * cand > combined->second) cand -= combined->second;
        cert.n = cand;
        cert.combined_modulus = combined->second;
    }
    if (*cert.n > Int(static_cast<unsigned long>(n_bound)) ||
        *cert.n < -Int(static_cast<unsigned long>(n_bound))) {
        cert.verdict = Verdict::Disproved;
        cert.detail = "no multiplier within the bound satisfies the local congruences";
        return cert;
    }
    if (verify(*cert.n)) {
        cert.verdict = Verdict::Verified;
    } else {
        cert.verdict = Verdict::Disproved;
        cert.detail = "global exact verification failed";
    }
    return cert;
}

}  // namespace

MultiplierCertificate infer_multiplier_gm(const Rat& x, const Rat& y, u64 n_bound,
                                          const ScanConfig& cfg) {
    cfg.validate();
    if (degenerate_rat(x) || degenerate_rat(y))
        throw std::invalid_argument("infer_multiplier_gm: x and y must avoid {0, +-1}");
    std::vector<LocalDlogInput> locals;
    std::unordered_map<u64, std::pair<u64, u64>> residues;
    for (u64 p : scan_primes(cfg)) {
        auto xb = gm_reduce(x, p);
        auto yb = gm_reduce(y, p);
        if (!xb || !yb) continue;
        locals.push_back({p, gm_order(*xb, p)});
        residues[p] = {*xb, *yb};
    }
    return run_inference(
        std::move(locals), n_bound,
        [&](u64 p, u64 ord) { return gm_dlog(residues[p].first, residues[p].second, ord, p); },
        [&](const Int& m) { return verify_global_gm(x, y, m); });
}

bool is_probably_nontorsion(const ec::CurveOverQ& E, const ec::QPoint& P,
                            const ScanConfig& cfg) {
    if (P.inf) return false;
    unsigned sampled = 0;
    for (u64 p : modmath::sieve_primes(cfg.prime_bound).primes) {
        if (p < 5 || sampled >= 12) break;
        auto orders = ec_orders_at(E, P, p, cfg);
        if (!orders) continue;
        ++sampled;
        if (orders->point_order > 16) return true;
    }
    // exact fallback: any torsion point has k*P = O for some k <= 12*16
    ec::QPoint acc = P;
    for (unsigned k = 2; k <= 192; ++k) {
        acc = ec::q_add(E, acc, P);
        if (acc.inf) return false;
    }
    return true;
}

MultiplierCertificate infer_multiplier_ec(const ec::CurveOverQ& E, const ec::QPoint& P,
                                          const ec::QPoint& Q, u64 n_bound,
                                          const ScanConfig& cfg) {
    cfg.validate();
    if (!ec::on_curve(E, P) || !ec::on_curve(E, Q))
        throw std::invalid_argument("infer_multiplier_ec: point not on the curve");
    if (P.inf) throw std::invalid_argument("infer_multiplier_ec: P must be nonzero");
    if (!is_probably_nontorsion(E, P, cfg))
        throw std::invalid_argument("infer_multiplier_ec: P appears to be torsion");
    std::vector<LocalDlogInput> locals;
    for (u64 p : scan_primes(cfg)) {
        auto orders = ec_orders_at(E, P, p, cfg);
        if (!orders || orders->point_order <= 1) continue;
        locals.push_back({p, orders->point_order});
    }
    return run_inference(
        std::move(locals), n_bound,
        [&](u64 p, u64 /*ord*/) -> std::optional<u64> {
            auto C = *ec::reduce_curve(E, p);
            ec::FpPoint Pb = ec::reduce_point(P, E, C);
            ec::FpPoint Qb = ec::reduce_point(Q, E, C);
            auto orders = ec_orders_at(E, P, p, cfg);
            auto rec = ec::point_order(Pb, C, orders->group_order);
            return ec::ec_dlog(Pb, rec, Qb, C);
        },
        [&](const Int& n) { return verify_global(E, P, Q, n); });
}

MultiplierCertificate infer_multiplier_ec(const ec::CurveOverQ& E1, const ec::QPoint& P,
                                          const ec::CurveOverQ& E2, const ec::QPoint& Q,
                                          u64 n_bound, const ScanConfig& cfg) {
    if (E1.fingerprint() == E2.fingerprint())
        return infer_multiplier_ec(E1, P, Q, n_bound, cfg);
    auto rep = scan_ec(E1, P, E2, Q, cfg);
    MultiplierCertificate cert;
    if (rep.first_violation) {
        cert.verdict = Verdict::Disproved;
        cert.disproof_prime = rep.first_violation;
        cert.detail = "order divisibility fails at p=" + std::to_string(*rep.first_violation) +
                      "; no specializing homomorphism maps P to Q";
    } else {
        cert.verdict = Verdict::Inconclusive;
        cert.detail = "distinct curves with no divisibility violation below the bound; "
                      "multiplier inference needs a supplied isogeny";
    }
    return cert;
}

void validate_chain(const HomChain& chain) {
    if (chain.steps.empty()) throw std::invalid_argument("HomChain: empty chain");
    isogeny::QQField f;
    isogeny::ShortWQ cur = isogeny::to_short(chain.base);
    for (const auto& step : chain.steps) {
        if (std::holds_alternative<MultiplyBy>(step)) continue;
        const auto& j = std::get<isogeny::VeluQ>(step);
        if (!f.eq(j.domain.A, cur.A) || !f.eq(j.domain.B, cur.B))
            throw std::invalid_argument("HomChain: isogeny domain does not match the chain");
        cur = j.codomain;
    }
}

namespace {

// Affine short point over Q reduced projectively: a p in the denominator
// of x pushes the point to O.
std::optional<ec::FpPoint> reduce_chain_point(const isogeny::SPtQ& S, u64 p) {
    if (S.inf) return ec::FpPoint{};
    if (S.x.get_den() % static_cast<unsigned long>(p) == 0) return ec::FpPoint{};
    return isogeny::reduce_short_point(S, p);
}

}  // namespace

SpecializationReport check_specialization(const HomChain& chain, const ec::QPoint& P,
                                          const ScanConfig& cfg) {
    cfg.validate();
    validate_chain(chain);
    if (!ec::on_curve(chain.base, P))
        throw std::invalid_argument("check_specialization: P not on the chain's domain");

    isogeny::QQField f;
    // global path once
    isogeny::ShortWQ cur = isogeny::to_short(chain.base);
    isogeny::SPtQ S = isogeny::to_short_point(chain.base, P);
    std::vector<isogeny::ShortWQ> curves{cur};
    for (const auto& step : chain.steps) {
        if (auto* mul = std::get_if<MultiplyBy>(&step)) {
            S = isogeny::sw_mul(f, cur, mul->n, S);
        } else {
            const auto& j = std::get<isogeny::VeluQ>(step);
            S = isogeny::isogeny_eval(f, j, S);
            cur = j.codomain;
            curves.push_back(cur);
        }
    }

    auto primes = scan_primes(cfg);
    std::vector<int> slots(primes.size(), -1);  // -1 skip, 0 fail, 1 ok
    parallel_for(primes.size(), cfg.threads, [&](std::size_t i) {
        u64 p = primes[i];
        auto C0 = ec::reduce_curve(chain.base, p);
        if (!C0) return;
        for (const auto& E : curves)
            if (!isogeny::reduce_short(E, p)) return;
        // bottom path
        ec::FpPoint bottom = ec::reduce_point(P, chain.base, *C0);
        ec::ReducedCurve Cp = *C0;
        isogeny::FpField fp{p};
        bool skip = false;
        for (const auto& step : chain.steps) {
            if (auto* mul = std::get_if<MultiplyBy>(&step)) {
                bottom = ec::fp_mul(Cp, mul->n, bottom);
            } else {
                auto jp = isogeny::reduce_isogeny(std::get<isogeny::VeluQ>(step), p);
                if (!jp) { skip = true; break; }
                auto img = isogeny::isogeny_eval(fp, *jp, isogeny::to_spt(bottom));
                bottom = isogeny::from_spt(img);
                Cp = ec::ReducedCurve{p, jp->codomain.A, jp->codomain.B};
            }
        }
        if (skip) return;
        auto top = reduce_chain_point(S, p);
        if (!top) return;
        slots[i] = (*top == bottom) ? 1 : 0;
    });

    SpecializationReport rep;
    for (std::size_t i = 0; i < primes.size(); ++i) {
        if (slots[i] < 0) continue;
        rep.rows.push_back({primes[i], slots[i] == 1});
        ++rep.checked;
        if (slots[i] == 0) {
            ++rep.failures;
            if (!rep.first_failure) rep.first_failure = primes[i];
        }
    }
    return rep;
}

}  // namespace slab::support
