// hampack CLI: generate random hypergraphs, pack them into edge-disjoint
// type-ell Hamilton cycles or perfect matchings, validate packings, audit
// pseudo-randomness, and run the small-graph matching oracle.
//
// Exit codes: 0 ok, 2 invalid input, 3 unsupported case, 4 internal
// invariant violation.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hampack/pipeline.hpp"

namespace {

using namespace hampack;

Hypergraph load_hypergraph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open " + path);
    return parse_hypergraph(in);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write " + path);
    out << content;
}

GenerateSpec parse_gen_triple(const std::string& text) {
    GenerateSpec g;
    char c1 = 0, c2 = 0;
    std::istringstream ss(text);
    if (!(ss >> g.n >> c1 >> g.k >> c2 >> g.p) || c1 != ',' || c2 != ',')
        throw InvalidInput("--gen expects n,k,p");
    return g;
}

int run_gen(const std::string& out, int n, int k, double p, std::uint64_t seed) {
    auto h = generate_hnpk(n, k, p, seed);
    write_file(out, write_hypergraph(h));
    std::cout << "wrote " << h.m() << " edges to " << out << "\n";
    return 0;
}

int run_pack(const std::string& in, const std::string& gen, int ell, double r,
             const std::optional<double>& f0, const std::optional<double>& eps,
             std::uint64_t seed, const std::string& cycles_out, const std::string& report_out,
             const std::string& audit, int workers) {
    RunConfig cfg;
    if (!in.empty()) cfg.input_path = in;
    if (!gen.empty()) cfg.generate = parse_gen_triple(gen);
    cfg.ell = ell;
    cfg.overrides.r = r;
    cfg.overrides.f0 = f0;
    cfg.overrides.eps = eps;
    cfg.seed = seed;
    if (!audit.empty()) {
        cfg.audit = true;
        if (audit == "exact") {
            cfg.audit_exact = true;
        } else if (audit.rfind("sampled:", 0) == 0) {
            cfg.audit_exact = false;
            cfg.audit_samples = std::stoll(audit.substr(8));
        } else {
            throw InvalidInput("--audit expects 'exact' or 'sampled:COUNT'");
        }
    }
    auto [result, report] = run_packing(cfg, ExecutionPolicy{workers});
    if (!cycles_out.empty()) write_file(cycles_out, write_packing(result));
    if (!report_out.empty()) write_file(report_out, emit_report(report).dump(2) + "\n");
    std::cout << "items " << report.totals.items << "  coverage " << report.totals.coverage
              << "  unlabeled " << report.totals.unlabeled << "\n";
    return 0;
}

int run_validate(const std::string& in, const std::string& cycles) {
    auto h = load_hypergraph(in);
    std::ifstream cin_s(cycles);
    if (!cin_s) throw InvalidInput("cannot open " + cycles);
    auto packing = parse_packing(cin_s, h.n(), h.k());
    std::size_t idx = 0;
    bool all_ok = true;
    for (const auto& c : packing.cycles) {
        auto v = validate_cycle(h, c);
        std::cout << "cycle " << idx++ << ": " << (v.ok ? "ok" : v.reason) << "\n";
        all_ok &= v.ok;
    }
    for (const auto& m : packing.matchings) {
        auto v = validate_matching(h, m);
        std::cout << "matching " << idx++ << ": " << (v.ok ? "ok" : v.reason) << "\n";
        all_ok &= v.ok;
    }
    auto pv = verify_packing(h, packing);
    std::cout << "edge-disjointness: " << (pv.ok ? "ok" : pv.reason) << "\n";
    return (all_ok && pv.ok) ? 0 : 2;
}

int run_audit(const std::string& in, int ell, double eps, std::int64_t samples,
              std::uint64_t seed, const std::string& report_out) {
    auto h = load_hypergraph(in);
    AuditMode mode = samples > 0 ? AuditMode::sampled(samples) : AuditMode::exact_mode();
    std::vector<AuditReport> reports;
    auto derived = mode_for(h.k(), ell);
    if (!derived)
        throw UnsupportedCase("no audit family for k = " + std::to_string(h.k()) + ", ell = " +
                              std::to_string(ell));
    switch (*derived) {
        case PartitionMode::BipartitionCycle:
            reports = audit_degree_properties(h, ell, eps, mode, DegreeFamily::P, seed);
            break;
        case PartitionMode::Matching:
            reports = audit_degree_properties(h, ell, eps, mode, DegreeFamily::R, seed);
            break;
        case PartitionMode::FullPartition: {
            // (alpha, eps)-regularity of sampled partition graphs G_P.
            const std::int64_t budget = samples > 0 ? samples : 1000;
            for (std::int64_t i = 1; i <= 4; ++i) {
                auto s = sample_scheme(h.n(), h.k(), ell, PartitionMode::FullPartition, seed, i);
                auto reps = audit_partition_regularity(
                    h, s, eps, budget, derive_seed(seed, streams::kAudit, static_cast<std::uint64_t>(i)));
                reports.insert(reports.end(), reps.begin(), reps.end());
            }
            break;
        }
    }

    Json j;
    j["n"] = h.n();
    j["k"] = h.k();
    j["ell"] = ell;
    j["p"] = h.density();
    j["eps"] = eps;
    Json audits = Json::array();
    int failures = 0;
    for (const auto& a : reports) {
        Json ja;
        ja["property"] = a.property;
        ja["mode"] = a.mode;
        ja["verdict"] = a.pass ? "pass" : "fail";
        ja["witness"] = a.witness;
        ja["slack"] = a.slack;
        audits.push_back(std::move(ja));
        failures += a.pass ? 0 : 1;
        std::cout << a.property << ": " << (a.pass ? "pass" : "fail") << " (slack " << a.slack
                  << ")\n";
    }
    j["audits"] = std::move(audits);
    if (!report_out.empty()) write_file(report_out, j.dump(2) + "\n");
    std::cout << failures << " of " << reports.size() << " properties failed\n";
    return 0;
}

int run_oracle_pm(const std::string& in) {
    std::ifstream s(in);
    if (!s) throw InvalidInput("cannot open " + in);
    auto g = parse_bipartite(s);
    std::cout << brute_force_pm_oracle(g) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"edge-disjoint Hamilton cycle / perfect matching packing for k-uniform hypergraphs"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("gen", "generate a random hypergraph H(n,p,k)");
    int gn = 0, gk = 0;
    double gp = 0.0;
    std::uint64_t gseed = 0;
    std::string gout;
    gen->add_option("--n", gn, "vertex count")->required();
    gen->add_option("--k", gk, "uniformity")->required();
    gen->add_option("--p", gp, "edge probability")->required();
    gen->add_option("--seed", gseed, "seed")->default_val(0);
    gen->add_option("--out", gout, "output file")->required();

    auto* pack = app.add_subcommand("pack", "pack edge-disjoint cycles/matchings");
    std::string pin, pgen, pcycles, preport, paudit;
    int pell = 0, pworkers = 1;
    double pr = 0.0;
    std::optional<double> pf0, peps;
    std::uint64_t pseed = 0;
    pack->add_option("--in", pin, "input hypergraph file");
    pack->add_option("--gen", pgen, "generate input: n,k,p");
    pack->add_option("--ell", pell, "cycle type ell")->required();
    pack->add_option("--r", pr, "number of partition instances")->required();
    pack->add_option("--f0", pf0, "override f0");
    pack->add_option("--eps", peps, "override eps");
    pack->add_option("--seed", pseed, "master seed")->default_val(0);
    pack->add_option("--cycles-out", pcycles, "cycle/matching output file");
    pack->add_option("--report-out", preport, "JSON report output file");
    pack->add_option("--audit", paudit, "run audits: exact | sampled:COUNT");
    pack->add_option("--workers", pworkers, "worker threads")->default_val(1);

    auto* validate = app.add_subcommand("validate", "validate a packing against a hypergraph");
    std::string vin, vcycles;
    validate->add_option("--in", vin, "hypergraph file")->required();
    validate->add_option("--cycles", vcycles, "cycle/matching file")->required();

    auto* audit = app.add_subcommand("audit", "pseudo-randomness audit of a hypergraph");
    std::string ain, areport;
    int aell = 0;
    double aeps = 0.2;
    std::int64_t asamples = 0;
    std::uint64_t aseed = 0;
    audit->add_option("--in", ain, "hypergraph file")->required();
    audit->add_option("--ell", aell, "cycle type ell")->required();
    audit->add_option("--eps", aeps, "regularity slack")->default_val(0.2);
    audit->add_option("--samples", asamples, "sample count (0 = exact)")->default_val(0);
    audit->add_option("--seed", aseed, "seed for sampled audits")->default_val(0);
    audit->add_option("--report-out", areport, "JSON report output file");

    auto* oracle = app.add_subcommand("oracle-pm", "exact max edge-disjoint perfect matchings (N <= 7)");
    std::string oin;
    oracle->add_option("--in", oin, "bipartite graph file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (gen->parsed()) return run_gen(gout, gn, gk, gp, gseed);
        if (pack->parsed()) {
            if (pin.empty() == pgen.empty())
                throw hampack::InvalidInput("pack: exactly one of --in / --gen required");
            return run_pack(pin, pgen, pell, pr, pf0, peps, pseed, pcycles, preport, paudit,
                            pworkers);
        }
        if (validate->parsed()) return run_validate(vin, vcycles);
        if (audit->parsed()) return run_audit(ain, aell, aeps, asamples, aseed, areport);
        if (oracle->parsed()) return run_oracle_pm(oin);
    } catch (const hampack::InvalidInput& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const hampack::UnsupportedCase& e) {
        std::cerr << "unsupported case: " << e.what() << "\n";
        return 3;
    } catch (const hampack::InternalInvariantViolation& e) {
        std::cerr << "internal invariant violation: " << e.what() << "\n";
        return 4;
    }
    return 2;
}
