#include "slab/jobs.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "slab/isogeny.hpp"
#include "slab/sl2.hpp"

namespace slab::jobs {

namespace {

using JE = JobError;
using Kind = JobError::Kind;

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct RawVal {
    std::string text;
    int line = 0;
    bool used = false;
};

u64 parse_u64_tok(const std::string& tok, int line, const std::string& field) {
    u64 v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw JE(Kind::Semantic, line, field, field + ": expected an unsigned integer, got '" + tok + "'");
    return v;
}

Int parse_int_tok(const std::string& tok, int line, const std::string& field) {
    try {
        return Int(tok);
    } catch (const std::invalid_argument&) {
        throw JE(Kind::Semantic, line, field, field + ": expected an integer, got '" + tok + "'");
    }
}

Rat parse_rat_tok(const std::string& tok, int line, const std::string& field) {
    mpq_class q;
    if (q.set_str(tok, 10) != 0 || tok.empty())
        throw JE(Kind::Semantic, line, field, field + ": expected a rational (n or n/d), got '" + tok + "'");
    if (q.get_den() == 0)
        throw JE(Kind::Semantic, line, field, field + ": zero denominator in '" + tok + "'");
    q.canonicalize();
    return q;
}

std::vector<std::string> split_list(const std::string& raw, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : raw) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

std::vector<std::string> parse_array(const RawVal& rv, const std::string& field) {
    std::string t = trim(rv.text);
    if (t.size() < 2 || t.front() != '[' || t.back() != ']')
        throw JE(Kind::Semantic, rv.line, field, field + ": expected an array [v1, v2, ...]");
    std::string inner = trim(t.substr(1, t.size() - 2));
    if (inner.empty()) return {};
    return split_list(inner, ',');
}

ec::QPoint point_from_triple(const std::vector<std::string>& toks, int line,
                             const std::string& field) {
    if (toks.size() != 3)
        throw JE(Kind::Semantic, line, field, field + ": expected a projective triple [X, Y, Z]");
    Int X = parse_int_tok(toks[0], line, field);
    Int Y = parse_int_tok(toks[1], line, field);
    Int Z = parse_int_tok(toks[2], line, field);
    if (Z == 0) {
        if (Y == 0) throw JE(Kind::Semantic, line, field, field + ": (X:0:0) is not a point");
        return ec::QPoint::infinity();
    }
    return ec::QPoint::affine(Rat(X) / Rat(Z), Rat(Y) / Rat(Z));
}

void require_on_curve(const ec::CurveOverQ& E, const ec::QPoint& P, int line,
                      const std::string& field) {
    if (P.inf || ec::on_curve(E, P)) return;
    Rat residual = P.y * P.y + E.a1 * P.x * P.y + Rat(E.a3) * P.y -
                   (P.x * P.x * P.x + E.a2 * P.x * P.x + E.a4 * P.x + E.a6);
    throw JE(Kind::Semantic, line, field,
             field + ": point is not on curve [" + E.fingerprint() +
                 "]; equation residual = " + residual.get_str());
}

std::string yn(bool b) { return b ? "yes" : "no"; }
std::string jb(bool b) { return b ? "true" : "false"; }

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    return out;
}

std::string verdict_name(support::Verdict v) {
    switch (v) {
        case support::Verdict::Verified: return "Verified";
        case support::Verdict::Disproved: return "Disproved";
        case support::Verdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

}  // namespace

JobSpec parse_job(const std::string& text) {
    std::map<std::string, RawVal> kv;
    {
        std::istringstream in(text);
        std::string line;
        int ln = 0;
        while (std::getline(in, line)) {
            ++ln;
            if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
            std::string t = trim(line);
            if (t.empty()) continue;
            auto eq = t.find('=');
            if (eq == std::string::npos)
                throw JE(Kind::Syntax, ln, "", "line " + std::to_string(ln) + ": expected 'key = value'");
            std::string key = trim(t.substr(0, eq));
            std::string val = trim(t.substr(eq + 1));
            if (key.empty())
                throw JE(Kind::Syntax, ln, "", "line " + std::to_string(ln) + ": empty key");
            if (kv.count(key))
                throw JE(Kind::Syntax, ln, "", "line " + std::to_string(ln) + ": duplicate key '" + key + "'");
            kv[key] = {val, ln, false};
        }
    }

    auto take = [&](const std::string& k) -> RawVal* {
        auto it = kv.find(k);
        if (it == kv.end()) return nullptr;
        it->second.used = true;
        return &it->second;
    };
    auto need = [&](const std::string& k) -> RawVal& {
        RawVal* rv = take(k);
        if (!rv) throw JE(Kind::Semantic, 0, k, "missing required field '" + k + "'");
        return *rv;
    };
    auto opt_u64 = [&](const std::string& k) -> std::optional<u64> {
        RawVal* rv = take(k);
        if (!rv) return std::nullopt;
        return parse_u64_tok(rv->text, rv->line, k);
    };
    auto opt_rat = [&](const std::string& k) -> std::optional<Rat> {
        RawVal* rv = take(k);
        if (!rv) return std::nullopt;
        return parse_rat_tok(rv->text, rv->line, k);
    };
    auto opt_point = [&](const std::string& k) -> std::optional<ec::QPoint> {
        RawVal* rv = take(k);
        if (!rv) return std::nullopt;
        return point_from_triple(parse_array(*rv, k), rv->line, k);
    };
    auto opt_curve = [&](const std::string& k) -> std::optional<ec::CurveOverQ> {
        RawVal* rv = take(k);
        if (!rv) return std::nullopt;
        auto toks = parse_array(*rv, k);
        if (toks.size() != 5)
            throw JE(Kind::Semantic, rv->line, k, k + ": expected [a1, a2, a3, a4, a6]");
        try {
            return ec::CurveOverQ(parse_int_tok(toks[0], rv->line, k), parse_int_tok(toks[1], rv->line, k),
                                  parse_int_tok(toks[2], rv->line, k), parse_int_tok(toks[3], rv->line, k),
                                  parse_int_tok(toks[4], rv->line, k));
        } catch (const std::domain_error& e) {
            throw JE(Kind::Semantic, rv->line, k, k + ": " + e.what());
        }
    };

    JobSpec spec;

    RawVal& cmd = need("command");
    if (cmd.text == "scan-gm") spec.command = Command::ScanGm;
    else if (cmd.text == "scan-ec") spec.command = Command::ScanEc;
    else if (cmd.text == "infer-n") spec.command = Command::InferN;
    else if (cmd.text == "specialize") spec.command = Command::Specialize;
    else if (cmd.text == "density") spec.command = Command::Density;
    else if (cmd.text == "isogeny") spec.command = Command::Isogeny;
    else if (cmd.text == "sl2") spec.command = Command::Sl2;
    else if (cmd.text == "mahler") spec.command = Command::Mahler;
    else
        throw JE(Kind::Semantic, cmd.line, "command", "unknown command '" + cmd.text + "'");

    // common keys
    if (auto v = opt_u64("primes-max")) spec.primes_max = *v;
    if (RawVal* rv = take("skip"))
        for (auto& t : parse_array(*rv, "skip")) spec.skip.push_back(parse_u64_tok(t, rv->line, "skip"));
    if (RawVal* rv = take("out")) spec.out = rv->text;
    if (RawVal* rv = take("cache")) spec.cache = rv->text;
    if (auto v = opt_u64("threads")) {
        if (*v == 0) throw JE(Kind::Semantic, 0, "threads", "threads: must be >= 1");
        spec.threads = static_cast<unsigned>(*v);
    }
    if (RawVal* rv = take("format")) {
        if (rv->text == "csv") spec.format = Format::Csv;
        else if (rv->text == "json-lines") spec.format = Format::JsonLines;
        else throw JE(Kind::Semantic, rv->line, "format", "format: expected csv or json-lines");
    }

    switch (spec.command) {
        case Command::ScanGm: {
            spec.x = parse_rat_tok(need("x").text, 0, "x");
            spec.y = parse_rat_tok(need("y").text, 0, "y");
            break;
        }
        case Command::ScanEc: {
            spec.curve = opt_curve("curve");
            if (!spec.curve) throw JE(Kind::Semantic, 0, "curve", "missing required field 'curve'");
            spec.point = opt_point("point");
            if (!spec.point) throw JE(Kind::Semantic, 0, "point", "missing required field 'point'");
            spec.curve2 = opt_curve("curve2");
            spec.point2 = opt_point("point2");
            if (!spec.point2) throw JE(Kind::Semantic, 0, "point2", "missing required field 'point2'");
            break;
        }
        case Command::InferN: {
            spec.n_bound = opt_u64("n-bound");
            if (!spec.n_bound) throw JE(Kind::Semantic, 0, "n-bound", "missing required field 'n-bound'");
            spec.x = opt_rat("x");
            spec.y = opt_rat("y");
            spec.curve = opt_curve("curve");
            spec.curve2 = opt_curve("curve2");
            spec.point = opt_point("point");
            spec.point2 = opt_point("point2");
            bool gm = spec.x && spec.y;
            bool ecm = spec.curve && spec.point && spec.point2;
            if (gm == ecm)
                throw JE(Kind::Semantic, 0, "x",
                         "infer-n needs either x and y, or curve, point and point2");
            break;
        }
        case Command::Specialize: {
            spec.curve = opt_curve("curve");
            if (!spec.curve) throw JE(Kind::Semantic, 0, "curve", "missing required field 'curve'");
            spec.point = opt_point("point");
            if (!spec.point) throw JE(Kind::Semantic, 0, "point", "missing required field 'point'");
            RawVal& rv = need("steps");
            spec.steps = parse_array(rv, "steps");
            if (spec.steps.empty()) throw JE(Kind::Semantic, rv.line, "steps", "steps: must be nonempty");
            break;
        }
        case Command::Density: {
            spec.curve = opt_curve("curve");
            if (!spec.curve) throw JE(Kind::Semantic, 0, "curve", "missing required field 'curve'");
            spec.point = opt_point("point");
            if (!spec.point) throw JE(Kind::Semantic, 0, "point", "missing required field 'point'");
            spec.ell = opt_u64("ell");
            if (!spec.ell) throw JE(Kind::Semantic, 0, "ell", "missing required field 'ell'");
            spec.shift_point = opt_point("shift-point");
            break;
        }
        case Command::Isogeny: {
            spec.curve = opt_curve("curve");
            if (!spec.curve) throw JE(Kind::Semantic, 0, "curve", "missing required field 'curve'");
            spec.kernel = opt_point("kernel");
            if (!spec.kernel) throw JE(Kind::Semantic, 0, "kernel", "missing required field 'kernel'");
            break;
        }
        case Command::Sl2: {
            spec.sl2_task = need("sl2-task").text;
            spec.modulus = opt_u64("modulus");
            if (!spec.modulus) throw JE(Kind::Semantic, 0, "modulus", "missing required field 'modulus'");
            if (spec.sl2_task == "deligne") {
                spec.unit = opt_u64("unit");
                if (!spec.unit) throw JE(Kind::Semantic, 0, "unit", "missing required field 'unit'");
            } else if (spec.sl2_task == "decompose") {
                RawVal& rv = need("matrix");
                for (auto& t : parse_array(rv, "matrix"))
                    spec.matrix.push_back(parse_u64_tok(t, rv.line, "matrix"));
                if (spec.matrix.size() != 4)
                    throw JE(Kind::Semantic, rv.line, "matrix", "matrix: expected [a, b, c, d]");
            } else if (spec.sl2_task != "census") {
                throw JE(Kind::Semantic, 0, "sl2-task",
                         "sl2-task: expected deligne, decompose or census");
            }
            break;
        }
        case Command::Mahler: {
            spec.mahler_task = need("mahler-task").text;
            if (RawVal* rv = take("head"))
                for (auto& t : parse_array(*rv, "head")) spec.head.push_back(parse_int_tok(t, rv->line, "head"));
            if (RawVal* rv = take("tail")) spec.tail = rv->text;
            if (spec.mahler_task == "square") {
                spec.modulus_n = opt_u64("modulus-n");
                spec.range = opt_u64("range");
                if (!spec.modulus_n) throw JE(Kind::Semantic, 0, "modulus-n", "missing required field 'modulus-n'");
                if (!spec.range) throw JE(Kind::Semantic, 0, "range", "missing required field 'range'");
            } else if (spec.mahler_task == "witness") {
                spec.degree = opt_u64("degree");
                spec.window = opt_u64("window");
                if (!spec.degree) throw JE(Kind::Semantic, 0, "degree", "missing required field 'degree'");
                if (!spec.window) throw JE(Kind::Semantic, 0, "window", "missing required field 'window'");
            } else if (spec.mahler_task == "table") {
                spec.modulus_n = opt_u64("modulus-n");
                if (!spec.modulus_n) throw JE(Kind::Semantic, 0, "modulus-n", "missing required field 'modulus-n'");
                spec.window = opt_u64("window");
            } else {
                throw JE(Kind::Semantic, 0, "mahler-task",
                         "mahler-task: expected square, witness or table");
            }
            break;
        }
    }

    for (auto& [k, rv] : kv)
        if (!rv.used)
            throw JE(Kind::Semantic, rv.line, k,
                     "unknown key '" + k + "' for command '" + cmd.text + "'");

    // cross-field semantic checks
    if (spec.curve && spec.point) require_on_curve(*spec.curve, *spec.point, 0, "point");
    if (spec.point2 && (spec.curve2 || spec.curve))
        require_on_curve(spec.curve2 ? *spec.curve2 : *spec.curve, *spec.point2, 0, "point2");
    if (spec.curve && spec.kernel) require_on_curve(*spec.curve, *spec.kernel, 0, "kernel");
    if (spec.curve && spec.shift_point) require_on_curve(*spec.curve, *spec.shift_point, 0, "shift-point");

    return spec;
}

namespace {

std::string curve_str(const ec::CurveOverQ& E) {
    return "[" + E.a1.get_str() + ", " + E.a2.get_str() + ", " + E.a3.get_str() + ", " +
           E.a4.get_str() + ", " + E.a6.get_str() + "]";
}

std::string point_str(const ec::QPoint& P) {
    ec::ProjTriple t = ec::normalize(P);
    return "[" + t.X.get_str() + ", " + t.Y.get_str() + ", " + t.Z.get_str() + "]";
}

}  // namespace

std::string render_job(const JobSpec& spec) {
    static const char* names[] = {"scan-gm", "scan-ec", "infer-n", "specialize",
                                  "density", "isogeny", "sl2", "mahler"};
    std::ostringstream out;
    out << "command = " << names[static_cast<int>(spec.command)] << "\n";
    if (spec.x) out << "x = " << spec.x->get_str() << "\n";
    if (spec.y) out << "y = " << spec.y->get_str() << "\n";
    if (spec.curve) out << "curve = " << curve_str(*spec.curve) << "\n";
    if (spec.point) out << "point = " << point_str(*spec.point) << "\n";
    if (spec.curve2) out << "curve2 = " << curve_str(*spec.curve2) << "\n";
    if (spec.point2) out << "point2 = " << point_str(*spec.point2) << "\n";
    if (spec.n_bound) out << "n-bound = " << *spec.n_bound << "\n";
    if (spec.ell) out << "ell = " << *spec.ell << "\n";
    if (spec.shift_point) out << "shift-point = " << point_str(*spec.shift_point) << "\n";
    if (!spec.steps.empty()) {
        out << "steps = [";
        for (std::size_t i = 0; i < spec.steps.size(); ++i)
            out << (i ? ", " : "") << spec.steps[i];
        out << "]\n";
    }
    if (spec.kernel) out << "kernel = " << point_str(*spec.kernel) << "\n";
    if (!spec.sl2_task.empty()) out << "sl2-task = " << spec.sl2_task << "\n";
    if (spec.modulus) out << "modulus = " << *spec.modulus << "\n";
    if (spec.unit) out << "unit = " << *spec.unit << "\n";
    if (!spec.matrix.empty()) {
        out << "matrix = [";
        for (std::size_t i = 0; i < spec.matrix.size(); ++i)
            out << (i ? ", " : "") << spec.matrix[i];
        out << "]\n";
    }
    if (!spec.mahler_task.empty()) out << "mahler-task = " << spec.mahler_task << "\n";
    if (!spec.head.empty()) {
        out << "head = [";
        for (std::size_t i = 0; i < spec.head.size(); ++i)
            out << (i ? ", " : "") << spec.head[i].get_str();
        out << "]\n";
    }
    if (!spec.tail.empty()) out << "tail = " << spec.tail << "\n";
    if (spec.modulus_n) out << "modulus-n = " << *spec.modulus_n << "\n";
    if (spec.range) out << "range = " << *spec.range << "\n";
    if (spec.degree) out << "degree = " << *spec.degree << "\n";
    if (spec.window) out << "window = " << *spec.window << "\n";
    out << "primes-max = " << spec.primes_max << "\n";
    if (!spec.skip.empty()) {
        out << "skip = [";
        for (std::size_t i = 0; i < spec.skip.size(); ++i) out << (i ? ", " : "") << spec.skip[i];
        out << "]\n";
    }
    if (!spec.out.empty()) out << "out = " << spec.out << "\n";
    if (!spec.cache.empty()) out << "cache = " << spec.cache << "\n";
    out << "threads = " << spec.threads << "\n";
    out << "format = " << (spec.format == Format::Csv ? "csv" : "json-lines") << "\n";
    return out.str();
}

std::string density_decimal(u64 num, u64 den) {
    if (den == 0) return "undefined";
    u64 scaled = (num * 2000000 + den) / (2 * den);  // round half up to 6 places
    char buf[40];
    std::snprintf(buf, sizeof buf, "%llu.%06llu",
                  static_cast<unsigned long long>(scaled / 1000000),
                  static_cast<unsigned long long>(scaled % 1000000));
    return buf;
}

std::string render_scan(const support::DivisibilityReport& rep, Format fmt) {
    std::ostringstream out;
    if (fmt == Format::Csv) {
        out << "p,ord_P,ord_Q,divides\n";
        for (auto& r : rep.rows)
            out << r.p << ',' << r.ord_P << ',' << r.ord_Q << ',' << yn(r.divides) << "\n";
    } else {
        for (auto& r : rep.rows)
            out << "{\"p\":" << r.p << ",\"ord_P\":" << r.ord_P << ",\"ord_Q\":" << r.ord_Q
                << ",\"divides\":" << jb(r.divides) << "}\n";
    }
    return out.str();
}

std::string render_density(const density::DensityReport& rep, Format fmt) {
    std::ostringstream out;
    if (fmt == Format::Csv) {
        out << "checkpoint,count_div,count_total,density_decimal\n";
        for (auto& c : rep.trace)
            out << c.bound << ',' << c.count_div << ',' << c.count_total << ','
                << density_decimal(c.count_div, c.count_total) << "\n";
    } else {
        for (auto& c : rep.trace)
            out << "{\"checkpoint\":" << c.bound << ",\"count_div\":" << c.count_div
                << ",\"count_total\":" << c.count_total << ",\"density_decimal\":\""
                << density_decimal(c.count_div, c.count_total) << "\"}\n";
    }
    return out.str();
}

std::string render_certificate(const support::MultiplierCertificate& cert, Format fmt) {
    std::ostringstream out;
    if (fmt == Format::Csv) {
        out << "key,value\n";
        out << "verdict," << verdict_name(cert.verdict) << "\n";
        out << "n," << (cert.n ? cert.n->get_str() : std::string("none")) << "\n";
        out << "combined_modulus," << cert.combined_modulus.get_str() << "\n";
        out << "disproof_prime,"
            << (cert.disproof_prime ? std::to_string(*cert.disproof_prime) : std::string("none"))
            << "\n";
        out << "detail," << cert.detail << "\n";
        for (std::size_t i = 0; i < cert.trail.size(); ++i)
            out << "trail[" << i << "],p=" << cert.trail[i].p << " residue=" << cert.trail[i].residue
                << " modulus=" << cert.trail[i].modulus << "\n";
    } else {
        out << "{\"verdict\":\"" << verdict_name(cert.verdict) << "\",\"n\":"
            << (cert.n ? "\"" + cert.n->get_str() + "\"" : std::string("null"))
            << ",\"combined_modulus\":\"" << cert.combined_modulus.get_str()
            << "\",\"disproof_prime\":"
            << (cert.disproof_prime ? std::to_string(*cert.disproof_prime) : std::string("null"))
            << ",\"detail\":\"" << json_escape(cert.detail) << "\"}\n";
        for (auto& s : cert.trail)
            out << "{\"p\":" << s.p << ",\"residue\":" << s.residue << ",\"modulus\":" << s.modulus
                << "}\n";
    }
    return out.str();
}

std::string render_specialization(const support::SpecializationReport& rep, Format fmt) {
    std::ostringstream out;
    if (fmt == Format::Csv) {
        out << "p,commutes\n";
        for (auto& r : rep.rows) out << r.p << ',' << yn(r.commutes) << "\n";
    } else {
        for (auto& r : rep.rows)
            out << "{\"p\":" << r.p << ",\"commutes\":" << jb(r.commutes) << "}\n";
    }
    return out.str();
}

namespace {

void emit(const JobSpec& spec, const std::string& bytes) {
    if (spec.out.empty()) {
        std::cout << bytes;
        return;
    }
    std::ofstream f(spec.out, std::ios::binary);
    if (!f) throw JE(Kind::Semantic, 0, "out", "out: cannot open '" + spec.out + "' for writing");
    f << bytes;
}

support::ScanConfig make_config(const JobSpec& spec, store::OrderCache& cache) {
    support::ScanConfig cfg;
    cfg.prime_bound = spec.primes_max;
    cfg.skip = spec.skip;
    cfg.threads = spec.threads;
    cfg.cache = &cache;
    return cfg;
}

mahler::MahlerMap build_mahler_map(const JobSpec& spec) {
    if (spec.head.empty() && spec.tail.empty()) return mahler::canonical_counterexample();
    mahler::MahlerMap f;
    f.rule.head = spec.head;
    if (spec.tail.empty() || spec.tail == "zeros") {
        f.rule.tail = mahler::CoefficientRule::Tail::Zeros;
    } else if (spec.tail.rfind("constant:", 0) == 0) {
        f.rule.tail = mahler::CoefficientRule::Tail::Constant;
        f.rule.constant = parse_int_tok(spec.tail.substr(9), 0, "tail");
    } else if (spec.tail.rfind("periodic:", 0) == 0) {
        f.rule.tail = mahler::CoefficientRule::Tail::Periodic;
        for (auto& t : split_list(spec.tail.substr(9), ':'))
            f.rule.period.push_back(parse_int_tok(t, 0, "tail"));
        if (f.rule.period.empty())
            throw JE(Kind::Semantic, 0, "tail", "tail: periodic rule needs at least one value");
    } else {
        throw JE(Kind::Semantic, 0, "tail", "tail: expected zeros, constant:<c> or periodic:<v1>:<v2>:...");
    }
    return f;
}

// Kernel data for one velu step. Coordinates are on the long base model
// until the first isogeny, then directly on the running short model.
isogeny::SPtQ chain_kernel(const std::string& arg, bool still_base,
                           const ec::CurveOverQ& base, int /*line*/) {
    auto toks = split_list(arg, ':');
    if (toks.size() != 3)
        throw JE(Kind::Semantic, 0, "steps", "steps: velu step needs velu:X:Y:Z");
    Int X = parse_int_tok(toks[0], 0, "steps");
    Int Y = parse_int_tok(toks[1], 0, "steps");
    Int Z = parse_int_tok(toks[2], 0, "steps");
    if (Z == 0) throw JE(Kind::Semantic, 0, "steps", "steps: kernel generator cannot be O");
    Rat x = Rat(X) / Rat(Z), y = Rat(Y) / Rat(Z);
    if (still_base) return isogeny::to_short_point(base, ec::QPoint::affine(x, y));
    return {false, x, y};
}

support::HomChain build_chain(const JobSpec& spec) {
    support::HomChain chain{*spec.curve, {}};
    isogeny::QQField f;
    isogeny::ShortWQ cur = isogeny::to_short(chain.base);
    bool still_base = true;
    for (auto& s : spec.steps) {
        if (s.rfind("mul:", 0) == 0) {
            chain.steps.push_back(support::MultiplyBy{parse_int_tok(s.substr(4), 0, "steps")});
        } else if (s.rfind("velu:", 0) == 0) {
            auto K = chain_kernel(s.substr(5), still_base, chain.base, 0);
            if (!isogeny::sw_on_curve(f, cur, K))
                throw JE(Kind::Semantic, 0, "steps", "steps: kernel generator not on current curve");
            unsigned ell = 0;
            for (unsigned d : {2u, 3u, 5u, 7u, 11u, 13u})
                if (isogeny::sw_mul(f, cur, Int(static_cast<long>(d)), K).inf) {
                    ell = d;
                    break;
                }
            if (ell == 0)
                throw JE(Kind::Semantic, 0, "steps",
                         "steps: kernel generator has no prime order in {2,...,13}");
            auto j = isogeny::velu_isogeny(f, cur, K, ell);
            cur = j.codomain;
            still_base = false;
            chain.steps.push_back(std::move(j));
        } else {
            throw JE(Kind::Semantic, 0, "steps", "steps: entries must be mul:<n> or velu:X:Y:Z");
        }
    }
    return chain;
}

int run_sl2(const JobSpec& spec) {
    std::ostringstream out;
    int rc = 0;
    if (spec.sl2_task == "deligne") {
        auto f = sl2::deligne_factorization(*spec.unit, *spec.modulus);
        sl2::Mat2 prod = sl2::identity(*spec.modulus);
        out << "k,a,b,c,d\n";
        for (std::size_t i = 0; i < f.size(); ++i) {
            prod = sl2::mat_mul(prod, f[i]);
            out << i << ',' << f[i].a << ',' << f[i].b << ',' << f[i].c << ',' << f[i].d << "\n";
        }
        out << "product," << prod.a << ',' << prod.b << ',' << prod.c << ',' << prod.d << "\n";
        u64 ainv = *modmath::inv_mod_u64(*spec.unit % *spec.modulus, *spec.modulus);
        sl2::Mat2 want{*spec.modulus, ainv, 0, 0, *spec.unit % *spec.modulus};
        if (!(prod == want)) rc = 1;
    } else if (spec.sl2_task == "decompose") {
        sl2::Mat2 g{*spec.modulus, spec.matrix[0], spec.matrix[1], spec.matrix[2], spec.matrix[3]};
        auto w = sl2::elementary_decomposition(g);
        out << "k,side,parameter\n";
        for (std::size_t i = 0; i < w.letters.size(); ++i)
            out << i << ',' << (w.letters[i].first == sl2::Side::Upper ? "upper" : "lower") << ','
                << w.letters[i].second << "\n";
        if (!(w.evaluate() == g)) rc = 1;
    } else {  // census
        std::map<u64, u64> hist;
        sl2::for_each_sl2(*spec.modulus, [&](const sl2::Mat2& g) { ++hist[sl2::element_order(g)]; });
        out << "order,count\n";
        for (auto& [o, c] : hist) out << o << ',' << c << "\n";
    }
    emit(spec, out.str());
    return rc;
}

int run_mahler(const JobSpec& spec) {
    auto f = build_mahler_map(spec);
    std::ostringstream out;
    int rc = 0;
    if (spec.mahler_task == "square") {
        auto rep = mahler::check_commuting_square(f, *spec.modulus_n, *spec.range);
        out << "key,value\n";
        out << "N," << rep.N << "\n";
        out << "holds," << yn(rep.holds) << "\n";
        if (rep.failure_input) out << "failure_input," << rep.failure_input->get_str() << "\n";
        if (!rep.holds) rc = 1;
    } else if (spec.mahler_task == "witness") {
        auto w = mahler::nonpolynomiality_witness(f, static_cast<unsigned>(*spec.degree),
                                                  static_cast<unsigned>(*spec.window));
        out << "key,value\n";
        out << "degree," << *spec.degree << "\n";
        if (w) {
            out << "witness_base," << w->base.get_str() << "\n";
            out << "difference," << w->difference.get_str() << "\n";
        } else {
            out << "witness_base,none\n";
        }
    } else {  // table
        unsigned window = spec.window ? static_cast<unsigned>(*spec.window) : 2;
        auto tab = mahler::induced_map_mod(f, *spec.modulus_n, window);
        out << "residue,value\n";
        if (tab.well_defined) {
            for (u64 r = 0; r < tab.N; ++r) out << r << ',' << tab.table[r] << "\n";
        } else {
            rc = 1;
        }
    }
    emit(spec, out.str());
    return rc;
}

}  // namespace

int run_job(const JobSpec& spec) {
    try {
        store::OrderCache cache = spec.cache.empty() ? store::OrderCache() : store::OrderCache(spec.cache);
        support::ScanConfig cfg = make_config(spec, cache);

        switch (spec.command) {
            case Command::ScanGm: {
                auto rep = support::scan_gm(*spec.x, *spec.y, cfg);
                emit(spec, render_scan(rep, spec.format));
                return rep.violations > 0 ? 1 : 0;
            }
            case Command::ScanEc: {
                const ec::CurveOverQ& E2 = spec.curve2 ? *spec.curve2 : *spec.curve;
                auto rep = support::scan_ec(*spec.curve, *spec.point, E2, *spec.point2, cfg);
                emit(spec, render_scan(rep, spec.format));
                return rep.violations > 0 ? 1 : 0;
            }
            case Command::InferN: {
                support::MultiplierCertificate cert;
                if (spec.x) {
                    cert = support::infer_multiplier_gm(*spec.x, *spec.y, *spec.n_bound, cfg);
                } else if (spec.curve2) {
                    cert = support::infer_multiplier_ec(*spec.curve, *spec.point, *spec.curve2,
                                                        *spec.point2, *spec.n_bound, cfg);
                } else {
                    cert = support::infer_multiplier_ec(*spec.curve, *spec.point, *spec.point2,
                                                        *spec.n_bound, cfg);
                }
                emit(spec, render_certificate(cert, spec.format));
                return 0;
            }
            case Command::Specialize: {
                auto chain = build_chain(spec);
                auto rep = support::check_specialization(chain, *spec.point, cfg);
                emit(spec, render_specialization(rep, spec.format));
                return rep.failures > 0 ? 1 : 0;
            }
            case Command::Density: {
                density::DensityReport rep;
                int rc = 0;
                if (spec.shift_point) {
                    auto sh = density::torsion_shift_scan(*spec.curve, *spec.point,
                                                          *spec.shift_point, cfg);
                    rep = sh.shifted;
                    if (sh.first_crosscheck_failure) rc = 1;
                } else {
                    rep = density::density_scan(*spec.curve, *spec.point, *spec.ell, cfg);
                }
                emit(spec, render_density(rep, spec.format));
                return rc;
            }
            case Command::Isogeny: {
                isogeny::QQField f;
                auto E = isogeny::to_short(*spec.curve);
                auto K = isogeny::to_short_point(*spec.curve, *spec.kernel);
                unsigned ell = 0;
                for (unsigned d : {2u, 3u, 5u, 7u, 11u, 13u})
                    if (isogeny::sw_mul(f, E, Int(static_cast<long>(d)), K).inf) {
                        ell = d;
                        break;
                    }
                if (ell == 0)
                    throw JE(Kind::Semantic, 0, "kernel",
                             "kernel: generator has no prime order in {2,...,13}");
                auto j = isogeny::velu_isogeny(f, E, K, ell);
                std::ostringstream out;
                out << "key,value\n";
                out << "degree," << j.degree << "\n";
                out << "domain_A," << j.domain.A.get_str() << "\n";
                out << "domain_B," << j.domain.B.get_str() << "\n";
                out << "codomain_A," << j.codomain.A.get_str() << "\n";
                out << "codomain_B," << j.codomain.B.get_str() << "\n";
                emit(spec, out.str());
                return 0;
            }
            case Command::Sl2:
                return run_sl2(spec);
            case Command::Mahler:
                return run_mahler(spec);
        }
        return 2;
    } catch (const JobError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace slab::jobs
