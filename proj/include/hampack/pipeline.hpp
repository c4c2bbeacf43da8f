#pragma once

#include <atomic>
#include <chrono>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hampack/auxgraph.hpp"
#include "hampack/cycles.hpp"
#include "hampack/errors.hpp"
#include "hampack/hypergraph.hpp"
#include "hampack/packers.hpp"
#include "hampack/partitions.hpp"

namespace hampack {

using Json = nlohmann::ordered_json;

struct GenerateSpec {
    int n = 0;
    int k = 0;
    double p = 0.0;
};

struct RunConfig {
    std::optional<std::string> input_path; // hypergraph file
    std::optional<GenerateSpec> generate;  // H(n, p, k) from the master seed
    int ell = 0;
    std::optional<PartitionMode> mode; // derived from (k, ell) when absent
    ParameterOverrides overrides;
    std::uint64_t seed = 0;
    bool audit = false;
    bool audit_exact = true;
    std::int64_t audit_samples = 100000;
    std::int64_t audit_instance_budget = 4; // aux graphs to audit
    bool include_timings = true;
    HamiltonParams hamilton;
    std::vector<PartitionScheme> pinned_schemes; // test hook: overrides sampling and r
};

struct ExecutionPolicy {
    int workers = 1;
};

struct RunTotals {
    std::int64_t items = 0;
    std::int64_t edges_used = 0;
    double coverage = 0.0;
    std::int64_t unlabeled = 0;
    std::int64_t labeled_unpacked = 0;

    bool operator==(const RunTotals&) const = default;
};

struct RunReport {
    SchemeParameters params_theoretical;
    SchemeParameters params_used;
    std::vector<InstanceHarvest> instances;
    RunTotals totals;
    std::vector<AuditReport> audits;
    std::map<std::string, double> timings;

    bool operator==(const RunReport&) const = default;
};

namespace detail {

struct InstanceOutcome {
    InstanceHarvest harvest;
    std::vector<TypeLCycle> cycles;
    std::vector<HyperMatching> matchings;
};

inline InstanceOutcome pack_instance(const Hypergraph& h, const PartitionScheme& scheme,
                                     const LabeledEdgeSet& labels, const RunConfig& config) {
    InstanceOutcome out;
    out.harvest.instance_id = scheme.id;
    AuxGraph aux = build_aux_graph(h, scheme, labels);
    out.harvest.aux_edges = static_cast<std::int64_t>(aux.edges.size());
    switch (scheme.mode) {
        case PartitionMode::BipartitionCycle: {
            MatchingPack pack = pack_perfect_matchings(aux.as_bipartite());
            for (const auto& phi : pack.matchings)
                out.cycles.push_back(assemble_bipartition_cycle(scheme, phi));
            break;
        }
        case PartitionMode::Matching: {
            MatchingPack pack = pack_perfect_matchings(aux.as_bipartite());
            for (const auto& phi : pack.matchings)
                out.matchings.push_back(assemble_hyper_matching(scheme, phi));
            break;
        }
        case PartitionMode::FullPartition: {
            CyclePack pack = pack_graph_hamilton(
                aux.as_simple(), 0,
                derive_seed(config.seed, streams::kHamilton, static_cast<std::uint64_t>(scheme.id)),
                config.hamilton);
            for (const auto& cyc : pack.cycles)
                out.cycles.push_back(assemble_full_partition_cycle(scheme, cyc));
            break;
        }
    }
    out.harvest.items = static_cast<std::int64_t>(out.cycles.size() + out.matchings.size());
    return out;
}

template <class Fn>
auto with_stage(const char* stage, Fn&& fn) {
    try {
        return fn();
    } catch (const InvalidInput& e) {
        throw InvalidInput(std::string(stage) + ": " + e.what());
    } catch (const UnsupportedCase& e) {
        throw UnsupportedCase(std::string(stage) + ": " + e.what());
    }
}

class StageTimer {
public:
    explicit StageTimer(bool enabled) : enabled_(enabled) {}

    template <class Fn>
    auto time(const std::string& stage, std::map<std::string, double>& sink, Fn&& fn) {
        auto t0 = std::chrono::steady_clock::now();
        if constexpr (std::is_void_v<decltype(fn())>) {
            fn();
            sink[stage] = elapsed(t0);
        } else {
            auto out = fn();
            sink[stage] = elapsed(t0);
            return out;
        }
    }

private:
    double elapsed(std::chrono::steady_clock::time_point t0) const {
        if (!enabled_) return 0.0;
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }

    bool enabled_;
};

inline std::vector<AuditReport> pipeline_audits(const Hypergraph& h,
                                                const std::vector<PartitionScheme>& schemes,
                                                const LabeledEdgeSet& labels,
                                                const SchemeParameters& params,
                                                const RunConfig& config) {
    std::vector<AuditReport> out;
    const AuditMode mode = config.audit_exact ? AuditMode::exact_mode()
                                              : AuditMode::sampled(config.audit_samples);
    const double eps = params.eps;

    if (params.mode == PartitionMode::BipartitionCycle) {
        auto reps = audit_degree_properties(h, params.ell, eps, mode, DegreeFamily::P, config.seed);
        out.insert(out.end(), reps.begin(), reps.end());
    } else if (params.mode == PartitionMode::Matching) {
        auto reps = audit_degree_properties(h, params.ell, eps, mode, DegreeFamily::R, config.seed);
        out.insert(out.end(), reps.begin(), reps.end());
    } else {
        // (alpha, eps)-regularity of H: Q-audit of G_P for sampled partitions.
        const std::int64_t budget = std::max<std::int64_t>(1, config.audit_samples / 100);
        std::int64_t audited = 0;
        for (const auto& scheme : schemes) {
            if (audited++ >= config.audit_instance_budget) break;
            auto reps = audit_partition_regularity(h, scheme, eps, budget,
                                                   derive_seed(config.seed, streams::kAudit,
                                                               static_cast<std::uint64_t>(scheme.id)));
            out.insert(out.end(), reps.begin(), reps.end());
        }
    }

    out.push_back(audit_inclusion_counts(labels, params.r, params.rho, h.n(), h.k()));

    if (params.mode != PartitionMode::FullPartition) {
        std::int64_t audited = 0;
        for (const auto& scheme : schemes) {
            if (audited++ >= config.audit_instance_budget) break;
            AuxGraph aux = build_aux_graph(h, scheme, labels);
            auto [deg_rep, codeg_rep] =
                audit_bipartite_premises(aux.as_bipartite(), params.p0, 5.0 * eps);
            deg_rep.witness = "G_" + std::to_string(scheme.id) + ": " + deg_rep.witness;
            codeg_rep.witness = "G_" + std::to_string(scheme.id) + ": " + codeg_rep.witness;
            out.push_back(std::move(deg_rep));
            out.push_back(std::move(codeg_rep));
        }
    }
    return out;
}

} // namespace detail

/// End-to-end pipeline: parameterize, sample r partition instances, label,
/// build per-instance aux graphs, pack, assemble, verify, report. The result
/// is deterministic for a fixed config, independent of the worker count.
inline std::pair<PackingResult, RunReport> run_packing(const RunConfig& config,
                                                       const ExecutionPolicy& policy = {}) {
    detail::StageTimer timer(config.include_timings);
    RunReport report;

    if (config.input_path.has_value() == config.generate.has_value())
        throw InvalidInput("run_packing: exactly one of input_path / generate required");

    auto load = [&]() -> Hypergraph {
        if (config.input_path) {
            std::ifstream in(*config.input_path);
            if (!in) throw InvalidInput("cannot open " + *config.input_path);
            return parse_hypergraph(in);
        }
        const auto& g = *config.generate;
        return generate_hnpk(g.n, g.k, g.p, config.seed);
    };
    Hypergraph h = timer.time("input", report.timings, load);

    const int n = h.n();
    const int k = h.k();
    const int ell = config.ell;
    auto derived = mode_for(k, ell);
    if (!derived)
        throw UnsupportedCase("no supported mode for k = " + std::to_string(k) + ", ell = " +
                              std::to_string(ell));
    const PartitionMode mode = config.mode.value_or(*derived);
    if (mode != *derived)
        throw UnsupportedCase("explicit mode inconsistent with (k, ell)");

    detail::with_stage("parameterize", [&] {
        report.params_theoretical = scheme_parameters(n, k, ell, h.density(), mode, {});
        report.params_used = scheme_parameters(n, k, ell, h.density(), mode, config.overrides);
    });
    if (!config.pinned_schemes.empty())
        report.params_used.r = static_cast<std::int64_t>(config.pinned_schemes.size());
    const std::int64_t r = report.params_used.r;

    auto sample_all = [&]() {
        std::vector<PartitionScheme> schemes;
        if (!config.pinned_schemes.empty()) {
            schemes = config.pinned_schemes;
            for (auto& s : schemes) {
                if (s.n != n || s.k != k || s.ell != ell || s.mode != mode)
                    throw InvalidInput("pinned scheme shape mismatch");
                if (s.side_of.empty()) s.build_index();
            }
            return schemes;
        }
        schemes.reserve(static_cast<std::size_t>(r));
        for (std::int64_t i = 1; i <= r; ++i)
            schemes.push_back(sample_scheme(n, k, ell, mode, config.seed, i));
        return schemes;
    };
    std::vector<PartitionScheme> schemes =
        timer.time("sample", report.timings, [&] { return detail::with_stage("sample", sample_all); });

    LabeledEdgeSet labels = timer.time("label", report.timings, [&] {
        return detail::with_stage("label", [&] { return label_edges(h, schemes, config.seed); });
    });

    // Pack every instance; work is pulled dynamically but results land in
    // id-indexed slots, so aggregation order never depends on scheduling.
    std::vector<detail::InstanceOutcome> outcomes(schemes.size());
    auto pack_all = [&] {
        const int workers = std::max(1, policy.workers);
        if (workers == 1) {
            for (std::size_t i = 0; i < schemes.size(); ++i)
                outcomes[i] = detail::pack_instance(h, schemes[i], labels, config);
            return;
        }
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < schemes.size(); i = next.fetch_add(1))
                    outcomes[i] = detail::pack_instance(h, schemes[i], labels, config);
            });
        for (auto& t : pool) t.join();
    };
    timer.time("pack", report.timings, pack_all);

    PackingResult result;
    result.kind = mode == PartitionMode::Matching ? PackingResult::Kind::MatchingPacking
                                                  : PackingResult::Kind::CyclePacking;
    for (auto& oc : outcomes) {
        result.per_instance.push_back(oc.harvest);
        for (auto& c : oc.cycles) result.cycles.push_back(std::move(c));
        for (auto& m : oc.matchings) result.matchings.push_back(std::move(m));
    }

    timer.time("verify", report.timings, [&] {
        auto verdict = verify_packing(h, result);
        require_invariant(verdict.ok, "pipeline produced an invalid packing: " + verdict.reason);
    });

    if (config.audit) {
        report.audits = timer.time("audit", report.timings, [&] {
            return detail::pipeline_audits(h, schemes, labels, report.params_used, config);
        });
    } else {
        report.timings["audit"] = 0.0;
    }

    report.instances = result.per_instance;
    const std::int64_t nu = n / ell;
    report.totals.items = static_cast<std::int64_t>(result.items());
    report.totals.edges_used = report.totals.items * nu;
    report.totals.coverage =
        h.m() > 0 ? static_cast<double>(report.totals.edges_used) / static_cast<double>(h.m()) : 0.0;
    report.totals.unlabeled = static_cast<std::int64_t>(labels.unlabeled_count);
    report.totals.labeled_unpacked =
        static_cast<std::int64_t>(h.m()) - report.totals.unlabeled - report.totals.edges_used;

    // Coverage accounting identity: used = m - unlabeled - labeled_unpacked,
    // and every labeled edge sits in exactly one aux graph.
    std::int64_t aux_total = 0;
    for (const auto& inst : report.instances) aux_total += inst.aux_edges;
    require_invariant(aux_total == static_cast<std::int64_t>(h.m()) - report.totals.unlabeled,
                      "labeled edges must partition across aux graphs");
    require_invariant(report.totals.labeled_unpacked >= 0, "negative labeled-unpacked count");

    if (!config.include_timings)
        for (auto& [stage, secs] : report.timings) secs = 0.0;
    return {std::move(result), std::move(report)};
}

// ---------------------------------------------------------------------------
// JSON report
// ---------------------------------------------------------------------------

inline Json to_json(const SchemeParameters& p) {
    Json j;
    j["n"] = p.n;
    j["k"] = p.k;
    j["ell"] = p.ell;
    j["p"] = p.p;
    j["mode"] = to_string(p.mode);
    j["rho"] = p.rho;
    j["r_theoretical"] = p.r_theoretical;
    j["r"] = p.r;
    j["eps"] = p.eps;
    j["f0"] = p.f0;
    j["p0"] = p.p0;
    j["n0"] = p.n0;
    j["f0_window_lo"] = p.f0_window_lo;
    j["f0_window_hi"] = p.f0_window_hi;
    j["f0_pseudo"] = p.f0_pseudo;
    j["r_pseudo"] = p.r_pseudo;
    j["n0_pseudo"] = p.n0_pseudo;
    j["diagnostics"] = p.diagnostics;
    return j;
}

inline SchemeParameters scheme_parameters_from_json(const Json& j) {
    SchemeParameters p;
    p.n = j.at("n").get<int>();
    p.k = j.at("k").get<int>();
    p.ell = j.at("ell").get<int>();
    p.p = j.at("p").get<double>();
    auto mode = parse_mode(j.at("mode").get<std::string>());
    if (!mode) throw InvalidInput("report: bad mode string");
    p.mode = *mode;
    p.rho = j.at("rho").get<double>();
    p.r_theoretical = j.at("r_theoretical").get<double>();
    p.r = j.at("r").get<std::int64_t>();
    p.eps = j.at("eps").get<double>();
    p.f0 = j.at("f0").get<double>();
    p.p0 = j.at("p0").get<double>();
    p.n0 = j.at("n0").get<double>();
    p.f0_window_lo = j.at("f0_window_lo").get<double>();
    p.f0_window_hi = j.at("f0_window_hi").get<double>();
    p.f0_pseudo = j.at("f0_pseudo").get<double>();
    p.r_pseudo = j.at("r_pseudo").get<double>();
    p.n0_pseudo = j.at("n0_pseudo").get<double>();
    p.diagnostics = j.at("diagnostics").get<std::vector<std::string>>();
    return p;
}

inline Json emit_report(const RunReport& r) {
    Json j;
    j["params_theoretical"] = to_json(r.params_theoretical);
    j["params_used"] = to_json(r.params_used);
    Json instances = Json::array();
    for (const auto& inst : r.instances) {
        Json ji;
        ji["id"] = inst.instance_id;
        ji["aux_edges"] = inst.aux_edges;
        ji["harvest"] = inst.items;
        instances.push_back(std::move(ji));
    }
    j["instances"] = std::move(instances);
    Json totals;
    totals["items"] = r.totals.items;
    totals["edges_used"] = r.totals.edges_used;
    totals["coverage"] = r.totals.coverage;
    totals["unlabeled"] = r.totals.unlabeled;
    totals["labeled_unpacked"] = r.totals.labeled_unpacked;
    j["totals"] = std::move(totals);
    Json audits = Json::array();
    for (const auto& a : r.audits) {
        Json ja;
        ja["property"] = a.property;
        ja["mode"] = a.mode;
        ja["verdict"] = a.pass ? "pass" : "fail";
        ja["witness"] = a.witness;
        ja["slack"] = a.slack;
        audits.push_back(std::move(ja));
    }
    j["audits"] = std::move(audits);
    j["timings"] = r.timings;
    return j;
}

inline RunReport report_from_json(const Json& j) {
    RunReport r;
    r.params_theoretical = scheme_parameters_from_json(j.at("params_theoretical"));
    r.params_used = scheme_parameters_from_json(j.at("params_used"));
    for (const auto& ji : j.at("instances")) {
        InstanceHarvest inst;
        inst.instance_id = ji.at("id").get<std::int64_t>();
        inst.aux_edges = ji.at("aux_edges").get<std::int64_t>();
        inst.items = ji.at("harvest").get<std::int64_t>();
        r.instances.push_back(inst);
    }
    const auto& totals = j.at("totals");
    r.totals.items = totals.at("items").get<std::int64_t>();
    r.totals.edges_used = totals.at("edges_used").get<std::int64_t>();
    r.totals.coverage = totals.at("coverage").get<double>();
    r.totals.unlabeled = totals.at("unlabeled").get<std::int64_t>();
    r.totals.labeled_unpacked = totals.at("labeled_unpacked").get<std::int64_t>();
    for (const auto& ja : j.at("audits")) {
        AuditReport a;
        a.property = ja.at("property").get<std::string>();
        a.mode = ja.at("mode").get<std::string>();
        a.pass = ja.at("verdict").get<std::string>() == "pass";
        a.witness = ja.at("witness").get<std::string>();
        a.slack = ja.at("slack").get<double>();
        r.audits.push_back(std::move(a));
    }
    r.timings = j.at("timings").get<std::map<std::string, double>>();
    return r;
}

} // namespace hampack
