#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "slab/density.hpp"
#include "slab/ec.hpp"
#include "slab/mahler.hpp"
#include "slab/support.hpp"

namespace slab::jobs {

using modmath::Int;
using modmath::u64;
using ec::Rat;

enum class Command { ScanGm, ScanEc, InferN, Specialize, Density, Isogeny, Sl2, Mahler };

enum class Format { Csv, JsonLines };

// Parse/validation failure: syntax errors carry the offending line number,
// semantic errors carry the offending field name.
struct JobError : std::runtime_error {
    enum class Kind { Syntax, Semantic };
    Kind kind;
    int line;           // 0 when not line-specific
    std::string field;  // empty for syntax errors

    JobError(Kind k, int ln, std::string fld, const std::string& msg)
        : std::runtime_error(msg), kind(k), line(ln), field(std::move(fld)) {}
};

struct JobSpec {
    Command command = Command::ScanGm;

    // common
    u64 primes_max = 1000;
    std::vector<u64> skip;
    std::string out;     // empty = stdout
    std::string cache;   // empty = in-memory only
    unsigned threads = 1;
    Format format = Format::Csv;

    // multiplicative payload
    std::optional<Rat> x, y;

    // elliptic payload (curves as [a1,a2,a3,a4,a6]; points as projective [X,Y,Z])
    std::optional<ec::CurveOverQ> curve, curve2;
    std::optional<ec::QPoint> point, point2;

    // inference
    std::optional<u64> n_bound;

    // density
    std::optional<u64> ell;
    std::optional<ec::QPoint> shift_point;  // torsion point for the shifted scan

    // specialize: steps like "mul:3" or "velu:X:Y:Z"
    std::vector<std::string> steps;

    // isogeny
    std::optional<ec::QPoint> kernel;

    // sl2
    std::string sl2_task;          // deligne | decompose | census
    std::optional<u64> modulus;
    std::optional<u64> unit;
    std::vector<u64> matrix;       // a, b, c, d

    // mahler
    std::string mahler_task;       // square | witness | table
    std::vector<Int> head;
    std::string tail;              // "zeros" | "constant:c" | "periodic:v1:v2:..."
    std::optional<u64> modulus_n;  // N
    std::optional<u64> range;
    std::optional<u64> degree;
    std::optional<u64> window;
};

// Parses the key = value job format (one key per line, '#' comments,
// arrays as [v1, v2, ...]). Unknown keys are rejected.
JobSpec parse_job(const std::string& text);

// Canonical serialization; parse_job(render_job(s)) reproduces s.
std::string render_job(const JobSpec& spec);

// ---- report rendering ----

std::string render_scan(const support::DivisibilityReport& rep, Format fmt);
std::string render_density(const density::DensityReport& rep, Format fmt);
std::string render_certificate(const support::MultiplierCertificate& cert, Format fmt);
std::string render_specialization(const support::SpecializationReport& rep, Format fmt);

// Fixed-point decimal rendering of a ratio to 6 places (round half up).
std::string density_decimal(u64 num, u64 den);

// Dispatches to the owning module and writes the report to spec.out (or
// stdout). Exit status: 0 success, 1 violation/check failure, 2 input error.
int run_job(const JobSpec& spec);

}  // namespace slab::jobs
