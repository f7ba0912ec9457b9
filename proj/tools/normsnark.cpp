// normsnark: batch front end for building superpositions and extending
// normal 5-edge-colorings.

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>
#include <thread>

#include "normsnark.hpp"

using namespace normsnark;

namespace {

constexpr const char* kVersion = "normsnark 0.1.0";

enum Exit : int {
    kOk = 0,
    kNotSnark = 1,
    kParse = 2,
    kInvalid = 3,
    kInapplicable = 4,
    kVerification = 5,
};

std::string read_input(const std::string& path) {
    if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read " + path);
    return {std::istreambuf_iterator<char>(in), {}};
}

json read_json(const std::string& path) {
    try {
        return json::parse(read_input(path));
    } catch (const json::exception& ex) {
        throw ParseError(path + ": " + ex.what());
    }
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot write " + path);
    out << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

/// Records inputs, outputs and seed so a run can be repeated.
struct Manifest {
    std::string path;
    json body = json::object();

    void record(const std::string& command, json inputs, json outputs, std::optional<std::uint64_t> seed = {}) {
        body["version"] = kVersion;
        body["command"] = command;
        body["inputs"] = std::move(inputs);
        body["outputs"] = std::move(outputs);
        if (seed) body["seed"] = *seed;
    }
    void flush() const {
        if (!path.empty()) write_output(path, dump(body));
    }
};

json coloring_report(const Multipole& g, const EdgeColoring& sigma) {
    EdgeClassCounts c = classify_all(g, sigma);
    return {{"edges", coloring_to_json(g, sigma)},
            {"poor", c.poor},
            {"rich", c.rich},
            {"normal", is_normal(g, sigma)}};
}

EdgeColoring base_coloring(const SuperpositionSpec& spec, const std::string& path) {
    if (!path.empty()) {
        EdgeColoring sigma = coloring_from_json(spec.base, read_json(path));
        if (!is_normal(spec.base, sigma)) throw InvalidInput(path + ": base coloring is not normal");
        return sigma;
    }
    auto found = find_normal_coloring(spec.base);
    if (!found) throw InvalidInput("base graph has no normal 5-edge-coloring");
    return *found;
}

// ---------------------------------------------------------------------------
// Subcommands

int cmd_check_snark(const std::string& input) {
    Multipole g = read_graph(read_input(input));
    detail::require_closed_cubic(g, "check-snark");
    bool bridgeless = is_bridgeless(g);
    bool colorable = is_three_edge_colorable(g);
    json out = {{"vertices", g.vertex_count()},
                {"edges", g.edge_count()},
                {"girth", girth(g)},
                {"bridgeless", bridgeless},
                {"threeEdgeColorable", colorable},
                {"snark", bridgeless && !colorable}};
    std::cout << dump(out);
    return bridgeless && !colorable ? kOk : kNotSnark;
}

int cmd_find_normal(const std::string& input, const std::string& output) {
    Multipole g = read_graph(read_input(input));
    auto sigma = find_normal_coloring(g);
    if (!sigma) {
        std::cout << dump({{"found", false}});
        return kVerification;
    }
    write_output(output, dump(coloring_report(g, *sigma)));
    return kOk;
}

int cmd_superpose(const std::string& spec_path, const std::string& output, const std::string& dot_path,
                  bool as_graph6) {
    SuperpositionSpec spec = spec_from_json(read_json(spec_path));
    SpecReport report = validate_spec(spec);
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
    Superposition sp = build(spec);
    SizeFormula expect = expected_size(spec);
    if (sp.graph.vertex_count() != expect.vertices || sp.graph.edge_count() != expect.edges)
        throw VerificationFailed("superpose: size does not match the closed form");
    if (as_graph6) write_output(output, write_graph6(sp.graph) + "\n");
    else write_output(output, dump(graph_to_json(sp.graph)));
    if (!dot_path.empty()) write_output(dot_path, to_dot(sp.graph));
    return kOk;
}

int cmd_extend(const std::string& spec_path, const std::string& coloring_path, const std::string& output,
               const std::string& dot_path, Manifest& manifest) {
    SuperpositionSpec spec = spec_from_json(read_json(spec_path));
    for (const auto& w : validate_spec(spec).warnings) std::cerr << "warning: " << w << "\n";
    EdgeColoring sigma = base_coloring(spec, coloring_path);
    ExtensionResult res = extend(spec, sigma);

    json out = coloring_report(res.superposition.graph, res.coloring);
    json templates = json::object();
    for (std::size_t k = 0; k < res.stats.slot_templates.size(); ++k)
        templates[std::to_string(k)] = res.stats.slot_templates[k];
    out["templates"] = templates;
    out["reversed"] = res.stats.reversed;
    write_output(output, dump(out));
    if (!dot_path.empty()) write_output(dot_path, to_dot(res.superposition.graph, &res.coloring));

    manifest.record("extend", {{"spec", spec_path}, {"coloring", coloring_path}},
                    {{"coloring", output.empty() ? "-" : output}, {"dot", dot_path}});
    return kOk;
}

int cmd_verify(const std::string& spec_path, const std::string& coloring_path, const std::string& base_path) {
    SuperpositionSpec spec = spec_from_json(read_json(spec_path));
    Superposition sp = build(spec);
    EdgeColoring coloring = coloring_from_json(sp.graph, read_json(coloring_path));
    json out;
    bool ok = false;
    if (!base_path.empty()) {
        EdgeColoring sigma = coloring_from_json(spec.base, read_json(base_path));
        VerificationReport v = verify_extension(spec, sp, coloring, sigma);
        out = {{"proper", v.proper},
               {"normal", v.normal},
               {"mIntPreserved", v.m_int_preserved},
               {"poor", v.counts.poor},
               {"rich", v.counts.rich},
               {"issues", v.issues}};
        ok = v.ok();
    } else {
        NormalityReport nr = normality_report(sp.graph, coloring);
        out = {{"proper", nr.improper_vertices.empty()},
               {"normal", nr.normal()},
               {"poor", nr.counts.poor},
               {"rich", nr.counts.rich},
               {"improperVertices", nr.improper_vertices},
               {"abnormalEdges", nr.abnormal_edges}};
        ok = nr.normal();
    }
    std::cout << dump(out);
    return ok ? kOk : kVerification;
}

int cmd_templates_export(const std::string& output) {
    write_output(output, export_registry());
    return kOk;
}

int cmd_templates_validate(const std::string& input) {
    RegistryCheck check = input.empty() ? validate_registry_text(export_registry())
                                        : validate_registry_text(read_input(input));
    std::cout << dump({{"templates", check.templates}, {"problems", check.problems}, {"ok", check.ok()}});
    return check.ok() ? kOk : kVerification;
}

int cmd_oracle_search(const std::string& input, bool three_only, const std::string& output) {
    Multipole g = read_graph(read_input(input));
    if (three_only) {
        auto sigma = find_three_edge_coloring(g);
        json out = {{"threeEdgeColorable", sigma.has_value()}};
        if (sigma) out["edges"] = coloring_to_json(g, *sigma);
        write_output(output, dump(out));
        return kOk;
    }
    auto sigma = search_normal_coloring(g);
    if (!sigma) {
        write_output(output, dump({{"found", false}}));
        return kVerification;
    }
    json out = coloring_report(g, *sigma);
    out["found"] = true;
    write_output(output, dump(out));
    return kOk;
}

// ---------------------------------------------------------------------------
// Sweep

struct SweepJob {
    std::size_t index = 0;
    SuperpositionSpec spec;
};

/// Random kinds, permutations and docks, skipping the configurations the
/// construction does not cover (odd cycle, every dock 1, every p(1) = 1).
SuperpositionSpec random_spec(const SuperpositionSpec& frame, std::mt19937_64& rng) {
    SuperpositionSpec spec = frame;
    const std::size_t g = spec.g();
    for (;;) {
        spec.kinds.assign(g, SupervertexKind::A);
        spec.junctions.assign(g, {});
        for (std::size_t i = 0; i < g; ++i) {
            spec.kinds[i] = rng() % 2 ? SupervertexKind::APrime : SupervertexKind::A;
            spec.junctions[i].p = all_perm3()[rng() % 6];
            spec.junctions[i].d = static_cast<int>(rng() % 3) + 1;
        }
        // Bias a third of the draws toward the all-docks-1 branch.
        if (rng() % 3 == 0)
            for (auto& j : spec.junctions) j.d = 1;
        bool trivial = g % 2 == 1 && std::all_of(spec.junctions.begin(), spec.junctions.end(),
                                                 [](const JunctionParams& j) { return j.d == 1 && j.p[0] == 1; });
        if (!trivial) return spec;
    }
}

int cmd_sweep(const std::string& frame_path, std::uint64_t seed, std::size_t count, std::size_t jobs,
              const std::string& output, Manifest& manifest) {
    SuperpositionSpec frame;
    if (frame_path.empty()) {
        frame.base = petersen_graph();
        for (const char* l : {"12", "34", "15", "23", "45"}) frame.cycle.push_back(*frame.base.find_vertex(l));
    } else {
        json j = read_json(frame_path);
        frame.base = graph_from_json(j.at("base"));
        for (const auto& v : j.at("cycle")) frame.cycle.push_back(detail::json_vertex(frame.base, v));
    }
    const EdgeColoring sigma = base_coloring(frame, "");

    std::mt19937_64 rng(seed);
    std::vector<SweepJob> work(count);
    for (std::size_t k = 0; k < count; ++k) work[k] = {k, random_spec(frame, rng)};

    std::vector<json> results(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k; (k = next++) < count;) {
            const SuperpositionSpec& spec = work[k].spec;
            json r = {{"index", k}};
            json params = json::array();
            for (std::size_t i = 0; i < spec.g(); ++i)
                params.push_back({{"kind", to_string(spec.kinds[i])},
                                  {"p", spec.junctions[i].p},
                                  {"d", spec.junctions[i].d}});
            r["junctions"] = params;
            try {
                ExtensionResult res = extend(spec, sigma);
                r["status"] = "ok";
                r["poor"] = res.stats.poor;
                r["rich"] = res.stats.rich;
                r["reversed"] = res.stats.reversed;
            } catch (const MethodInapplicable& ex) {
                r["status"] = "inapplicable";
                r["error"] = ex.what();
            } catch (const std::exception& ex) {
                r["status"] = "failed";
                r["error"] = ex.what();
            }
            results[k] = std::move(r);
        }
    };
    jobs = std::max<std::size_t>(1, std::min(jobs, count));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::size_t ok = 0, failed = 0, min_poor = 0;
    for (const auto& r : results) {
        if (r["status"] == "ok") {
            std::size_t p = r["poor"].get<std::size_t>();
            min_poor = ok++ ? std::min(min_poor, p) : p;
        } else if (r["status"] == "failed") {
            ++failed;
        }
    }
    json out = {{"seed", seed},
                {"count", count},
                {"succeeded", ok},
                {"failed", failed},
                {"minPoor", min_poor},
                {"runs", results}};
    write_output(output, dump(out));
    manifest.record("sweep", {{"frame", frame_path.empty() ? "petersen:12-34-15-23-45" : frame_path}},
                    {{"report", output.empty() ? "-" : output}}, seed);
    return failed ? kVerification : kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Superpositions of snarks by Petersen superedges, with normal 5-edge-coloring extension"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    app.fallthrough();
    Manifest manifest;
    app.add_option("--manifest", manifest.path, "Write a run manifest (JSON) to this path");

    std::string input, output, dot, spec_path, coloring_path, base_path, frame_path;
    bool three_only = false, graph6_out = false;
    std::uint64_t seed = 1;
    std::size_t count = 100, jobs = std::max(1u, std::thread::hardware_concurrency());

    auto* check = app.add_subcommand("check-snark", "Decide bridgeless and 3-edge-colorable; exit 0 iff snark");
    check->add_option("graph", input, "graph6 or JSON graph ('-' for stdin)")->required();

    auto* find = app.add_subcommand("find-normal", "Find a normal 5-edge-coloring of a cubic graph");
    find->add_option("graph", input)->required();
    find->add_option("-o,--output", output);

    auto* sup = app.add_subcommand("superpose", "Build the superposition described by a spec");
    sup->add_option("spec", spec_path)->required();
    sup->add_option("-o,--output", output);
    sup->add_option("--dot", dot, "Also write DOT here");
    sup->add_flag("--graph6", graph6_out, "Emit graph6 instead of JSON");

    auto* ext = app.add_subcommand("extend", "Extend a normal coloring of the base to the superposition");
    ext->add_option("spec", spec_path)->required();
    ext->add_option("-c,--coloring", coloring_path, "Base coloring JSON (found by search when omitted)");
    ext->add_option("-o,--output", output);
    ext->add_option("--dot", dot, "Write DOT with poor edges in bold");

    auto* ver = app.add_subcommand("verify", "Check a coloring of the superposition");
    ver->add_option("spec", spec_path)->required();
    ver->add_option("coloring", coloring_path)->required();
    ver->add_option("-b,--base-coloring", base_path, "Also check that base colors off the cycle are kept");

    auto* tpl = app.add_subcommand("templates", "Template registry");
    tpl->require_subcommand(1);
    auto* tpl_export = tpl->add_subcommand("export", "Print the registry");
    tpl_export->add_option("-o,--output", output);
    auto* tpl_validate = tpl->add_subcommand("validate", "Check registry contracts (built-in when no file)");
    tpl_validate->add_option("file", input);

    auto* orc = app.add_subcommand("oracle", "Brute-force oracles");
    orc->require_subcommand(1);
    auto* orc_search = orc->add_subcommand("search", "Exhaustive normal (or 3-) edge-coloring search");
    orc_search->add_option("graph", input)->required();
    orc_search->add_flag("--three", three_only, "Look for a 3-edge-coloring only");
    orc_search->add_option("-o,--output", output);

    auto* sweep = app.add_subcommand("sweep", "Seeded random extension runs");
    sweep->add_option("--frame", frame_path, "JSON with base and cycle (default: Petersen, outer 5-cycle)");
    sweep->add_option("--seed", seed);
    sweep->add_option("-n,--count", count);
    sweep->add_option("-j,--jobs", jobs);
    sweep->add_option("-o,--output", output);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kParse;
    }

    try {
        int rc = kOk;
        if (*check) rc = cmd_check_snark(input);
        else if (*find) rc = cmd_find_normal(input, output);
        else if (*sup) rc = cmd_superpose(spec_path, output, dot, graph6_out);
        else if (*ext) rc = cmd_extend(spec_path, coloring_path, output, dot, manifest);
        else if (*ver) rc = cmd_verify(spec_path, coloring_path, base_path);
        else if (*tpl_export) rc = cmd_templates_export(output);
        else if (*tpl_validate) rc = cmd_templates_validate(input);
        else if (*orc_search) rc = cmd_oracle_search(input, three_only, output);
        else if (*sweep) rc = cmd_sweep(frame_path, seed, count, jobs, output, manifest);
        manifest.flush();
        return rc;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kParse;
    } catch (const SizeGuardExceeded& e) {
        std::cerr << "size guard: " << e.what() << "\n";
        return kInvalid;
    } catch (const InvalidInput& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kInvalid;
    } catch (const MethodInapplicable& e) {
        std::cerr << e.what() << "\n";
        return kInapplicable;
    } catch (const VerificationFailed& e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return kVerification;
    } catch (const json::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kVerification;
    }
}
