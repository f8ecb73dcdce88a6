#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "slab/jobs.hpp"

namespace {

const char* command_name(slab::jobs::Command c) {
    static const char* names[] = {"scan-gm", "scan-ec", "infer-n", "specialize",
                                  "density", "isogeny", "sl2", "mahler"};
    return names[static_cast<int>(c)];
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"support-lab: order-divisibility and homomorphism-inference experiments"};
    app.require_subcommand(1);

    std::string config, out, cache, format;
    unsigned long long primes_max = 0;
    unsigned threads = 0;

    const char* commands[] = {"scan-gm", "scan-ec", "infer-n", "specialize",
                              "density", "isogeny", "sl2", "mahler"};
    for (const char* name : commands) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config, "job file")->required();
        sub->add_option("--primes-max", primes_max, "override the prime bound");
        sub->add_option("--out", out, "override the output path");
        sub->add_option("--cache", cache, "override the order-cache path");
        sub->add_option("--threads", threads, "override the worker count");
        sub->add_option("--format", format, "csv or json-lines")
            ->check(CLI::IsMember({"csv", "json-lines"}));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    const std::string chosen = app.get_subcommands().front()->get_name();

    std::ifstream in(config);
    if (!in) {
        std::cerr << "error: cannot read config file '" << config << "'\n";
        return 2;
    }
    std::ostringstream buf;
    buf << in.rdbuf();

    slab::jobs::JobSpec spec;
    try {
        spec = slab::jobs::parse_job(buf.str());
    } catch (const slab::jobs::JobError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    if (chosen != command_name(spec.command)) {
        std::cerr << "error: config file declares command '" << command_name(spec.command)
                  << "' but '" << chosen << "' was requested\n";
        return 2;
    }

    if (primes_max != 0) spec.primes_max = primes_max;
    if (!out.empty()) spec.out = out;
    if (!cache.empty()) spec.cache = cache;
    if (threads != 0) spec.threads = threads;
    if (format == "csv") spec.format = slab::jobs::Format::Csv;
    if (format == "json-lines") spec.format = slab::jobs::Format::JsonLines;
    if (spec.cache.empty())
        if (const char* env = std::getenv("SUPPORT_LAB_CACHE")) spec.cache = env;

    return slab::jobs::run_job(spec);
}
