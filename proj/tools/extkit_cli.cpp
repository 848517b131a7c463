// extkit command line: solve / verify / reduce / gen / bench for extension
// problems. Exit codes: 0 = YES, 1 = NO, 2 = usage or input error, 3 = size cap.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "extkit/binpacking.hpp"
#include "extkit/fpt.hpp"
#include "extkit/framework.hpp"
#include "extkit/graph.hpp"
#include "extkit/reductions.hpp"
#include "extkit/treewidth.hpp"

using nlohmann::json;
using namespace extkit;

namespace {

std::ifstream open_or_die(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open file: " + path);
    return in;
}

struct ProblemSpec {
    ProblemId id;
    int r = 1;
};

ProblemSpec problem_from_name(const std::string& name) {
    if (name == "vc") return {ProblemId::VC};
    if (name == "is") return {ProblemId::IS};
    if (name == "ec") return {ProblemId::EC};
    if (name == "em") return {ProblemId::EM};
    if (name == "ds") return {ProblemId::DS};
    if (name == "eds") return {ProblemId::EDS};
    if (name == "hs") return {ProblemId::HS};
    if (name == "bp") return {ProblemId::BP};
    if (name == "rdcps") return {ProblemId::EM, 0}; // r supplied via --r
    if (name == "rec") return {ProblemId::EC, 0};
    if (name == "tau") return {ProblemId::SAT_TAU};
    throw precondition_error("unknown problem: " + name);
}

struct LoadedInstance {
    ExtensionInstance inst;
    std::optional<NiceTreeDecomposition> ntd;
    std::string label;
};

LoadedInstance load_instance(const std::string& problem, int r, const std::string& graph_path,
                             const std::string& presolution_path, const std::string& instance_path,
                             const std::string& td_path, const std::string& cnf_path) {
    ProblemSpec ps = problem_from_name(problem);
    if (ps.r == 0) {
        if (r < 1) throw precondition_error("--r must be a positive integer for this problem");
        ps.r = r;
    }
    LoadedInstance out;
    if (ps.id == ProblemId::SAT_TAU) {
        if (cnf_path.empty()) throw precondition_error("tau needs --cnf");
        auto in = open_or_die(cnf_path);
        Cnf f = parse_dimacs(in);
        out.inst = ExtensionInstance{ProblemId::SAT_TAU, Payload(f),
                                     Candidate(std::vector<bool>(f.vars, true)), 1};
        out.label = cnf_path;
        return out;
    }
    if (!instance_path.empty()) {
        auto in = open_or_die(instance_path);
        if (ps.id == ProblemId::HS) {
            HittingSetInstance h = parse_hitting_set(in);
            if (presolution_path.empty()) throw precondition_error("hs needs --presolution");
            auto pin = open_or_die(presolution_path);
            // element sets reuse the V k layout against the ground size
            std::string line, text;
            while (std::getline(pin, line)) text += line + "\n";
            Graph dummy(h.ground_size, {});
            std::istringstream pss(text);
            auto [set, is_vertex] = parse_presolution(pss, dummy);
            if (!is_vertex) throw parse_error("hitting-set pre-solutions use the V layout");
            out.inst = hs_to_instance(h, set);
        } else {
            std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
            if (ps.id == ProblemId::BP && text.rfind("# ext-", 0) != 0) {
                std::istringstream ss(text); // plain bin packing file
                auto [bi, pu] = parse_bp(ss);
                out.inst = ExtensionInstance{ProblemId::BP, Payload(bi), Candidate(pu), 1};
            } else {
                std::istringstream ss(text);
                out.inst = parse_instance_file(ss);
                if (out.inst.problem != ps.id)
                    throw precondition_error("instance file is for " +
                                             problem_tag(out.inst.problem));
                out.inst.r = ps.r;
            }
        }
        out.label = instance_path;
        return out;
    }
    if (ps.id == ProblemId::BP) throw precondition_error("bp needs --instance");
    if (ps.id == ProblemId::HS) throw precondition_error("hs needs --instance");
    if (graph_path.empty() || presolution_path.empty())
        throw precondition_error("graph problems need --graph and --presolution (or --instance)");
    auto gin = open_or_die(graph_path);
    Graph g = parse_graph(gin);
    auto pin = open_or_die(presolution_path);
    auto [set, is_vertex] = parse_presolution(pin, g);
    if (is_vertex != vertex_based(ps.id))
        throw parse_error(std::string("this problem needs a ") +
                          (vertex_based(ps.id) ? "vertex" : "edge") + " pre-solution");
    out.inst = ExtensionInstance{ps.id, Payload(g), Candidate(set), ps.r};
    out.label = graph_path;
    if (!td_path.empty()) {
        auto tin = open_or_die(td_path);
        out.ntd = to_nice(parse_tree_decomposition(tin, g), g);
    }
    return out;
}

Verdict dispatch(const LoadedInstance& li, const std::string& algo, const OracleLimits& limits) {
    const ExtensionInstance& inst = li.inst;
    if (algo == "oracle") return decide_extension_oracle(inst, limits);
    if (algo == "dual-fpt") return decide_extension_dual_fpt(inst);

    auto ntd_for = [&](const Graph& g) {
        return li.ntd ? *li.ntd : to_nice(compute_tree_decomposition(g), g);
    };
    switch (inst.problem) {
        case ProblemId::VC: {
            if (algo != "treewidth") break;
            const Graph& g = std::get<Graph>(inst.payload);
            return ext_vc_treewidth(g, std::get<IndexSet>(inst.presolution), ntd_for(g));
        }
        case ProblemId::IS: { // by complementation to Ext VC
            if (algo != "treewidth") break;
            const Graph& g = std::get<Graph>(inst.payload);
            IndexSet u = std::get<IndexSet>(inst.presolution).complement();
            Verdict v = ext_vc_treewidth(g, u, ntd_for(g));
            if (v.answer) v.witness = Candidate(std::get<IndexSet>(*v.witness).complement());
            return v;
        }
        case ProblemId::DS: {
            if (algo != "treewidth") break;
            const Graph& g = std::get<Graph>(inst.payload);
            return ext_ds_treewidth(g, std::get<IndexSet>(inst.presolution), ntd_for(g));
        }
        case ProblemId::EDS: {
            if (algo != "treewidth") break;
            const Graph& g = std::get<Graph>(inst.payload);
            return ext_eds_treewidth(g, std::get<IndexSet>(inst.presolution), ntd_for(g));
        }
        case ProblemId::EM: {
            const Graph& g = std::get<Graph>(inst.payload);
            const IndexSet& u = std::get<IndexSet>(inst.presolution);
            if (algo == "treewidth" && inst.r == 1) return ext_em_treewidth(g, u, ntd_for(g));
            if (algo == "fpt")
                return inst.r == 1 ? ext_em_dual(g, u.complement())
                                   : ext_r_dcps_dual(g, u.complement(), inst.r);
            break;
        }
        case ProblemId::EC: {
            const Graph& g = std::get<Graph>(inst.payload);
            const IndexSet& u = std::get<IndexSet>(inst.presolution);
            if (algo == "treewidth" && inst.r == 1) return ext_ec_treewidth(g, u, ntd_for(g));
            if (algo == "fpt") return ext_r_ec_standard(g, u, inst.r);
            break;
        }
        case ProblemId::BP: {
            if (algo != "dp") break;
            BpVerdict v = ext_bp_dp(std::get<BpInstance>(inst.payload),
                                    std::get<Partition>(inst.presolution));
            if (!v.answer) return {false, std::nullopt};
            return {true, Candidate(*v.witness)};
        }
        case ProblemId::SAT_TAU: {
            break; // oracle only
        }
        default: break;
    }
    throw precondition_error("algorithm '" + algo + "' does not apply to this problem");
}

void print_witness(std::ostream& os, const ExtensionInstance& inst, const Candidate& w) {
    if (std::holds_alternative<Partition>(w)) {
        for (auto& blk : std::get<Partition>(w).blocks) {
            for (size_t i = 0; i < blk.size(); ++i) os << (i ? " " : "") << blk[i] + 1;
            os << '\n';
        }
        return;
    }
    if (std::holds_alternative<std::vector<bool>>(w)) {
        auto& a = std::get<std::vector<bool>>(w);
        for (size_t i = 0; i < a.size(); ++i) os << (i ? " " : "") << (a[i] ? 1 : 0);
        os << '\n';
        return;
    }
    const IndexSet& s = std::get<IndexSet>(w);
    if (inst.problem == ProblemId::HS) {
        os << "V " << s.count() << '\n';
        for (int e : s.elements()) os << e + 1 << '\n';
        return;
    }
    serialize_presolution(os, std::get<Graph>(inst.payload), s, vertex_based(inst.problem));
}

json witness_json(const ExtensionInstance& inst, const Candidate& w) {
    if (std::holds_alternative<Partition>(w)) {
        json blocks = json::array();
        for (auto& blk : std::get<Partition>(w).blocks) {
            json b = json::array();
            for (int i : blk) b.push_back(i + 1);
            blocks.push_back(b);
        }
        return blocks;
    }
    if (std::holds_alternative<std::vector<bool>>(w)) {
        json bits = json::array();
        for (bool v : std::get<std::vector<bool>>(w)) bits.push_back(v ? 1 : 0);
        return bits;
    }
    const IndexSet& s = std::get<IndexSet>(w);
    json out = json::array();
    if (inst.problem != ProblemId::HS && !vertex_based(inst.problem)) {
        const Graph& g = std::get<Graph>(inst.payload);
        for (int k : s.elements()) out.push_back({g.edge(k).first + 1, g.edge(k).second + 1});
    } else {
        for (int v : s.elements()) out.push_back(v + 1);
    }
    return out;
}

int run_solve(const LoadedInstance& li, const std::string& algo, bool as_json) {
    Verdict v = dispatch(li, algo, limits_from_env());
    if (as_json) {
        json out{{"command", "solve"},
                 {"problem", problem_tag(li.inst.problem)},
                 {"algo", algo},
                 {"answer", v.answer ? "YES" : "NO"}};
        if (v.witness) out["witness"] = witness_json(li.inst, *v.witness);
        std::cout << out.dump() << '\n';
    } else {
        std::cout << (v.answer ? "YES" : "NO") << '\n';
        if (v.witness) print_witness(std::cout, li.inst, *v.witness);
    }
    return v.answer ? 0 : 1;
}

int run_verify(const LoadedInstance& li, bool as_json) {
    const ExtensionInstance& inst = li.inst;
    bool ok = feasible(inst, inst.presolution);
    json out{{"command", "verify"}, {"problem", problem_tag(inst.problem)}, {"feasible", ok}};
    std::ostringstream text;
    text << "feasible: " << (ok ? "yes" : "no") << '\n';
    bool extremal = false;
    if (ok) {
        if (inst.problem == ProblemId::BP || inst.problem == ProblemId::SAT_TAU) {
            extremal = is_extremal(inst, inst.presolution);
            text << "extremal: " << (extremal ? "yes" : "no") << '\n';
        } else if (inst.problem == ProblemId::HS) {
            auto rep = extremality_with_privacy(std::get<HittingSetInstance>(inst.payload),
                                                std::get<IndexSet>(inst.presolution));
            extremal = rep.extremal;
            text << "extremal: " << (extremal ? "yes" : "no") << '\n';
            for (auto [e, s] : rep.witnesses)
                text << "private " << e + 1 << " hyperedge " << s + 1 << '\n';
            if (rep.offender) text << "offender " << *rep.offender + 1 << '\n';
        } else {
            const Graph& g = std::get<Graph>(inst.payload);
            auto rep = extremality_with_privacy(inst.problem, g,
                                                std::get<IndexSet>(inst.presolution), inst.r);
            extremal = rep.extremal;
            text << "extremal: " << (extremal ? "yes" : "no") << '\n';
            bool vertices = vertex_based(inst.problem);
            for (auto [elem, wit] : rep.witnesses) {
                if (vertices)
                    text << "private vertex " << elem + 1 << ": witness "
                         << (inst.problem == ProblemId::VC
                                 ? "edge " + std::to_string(g.edge(wit).first + 1) + "-" +
                                       std::to_string(g.edge(wit).second + 1)
                                 : "vertex " + std::to_string(wit + 1))
                         << '\n';
                else
                    text << "private edge " << g.edge(elem).first + 1 << "-"
                         << g.edge(elem).second + 1 << ": witness "
                         << (inst.problem == ProblemId::EC
                                 ? "vertex " + std::to_string(wit + 1)
                                 : "edge " + std::to_string(g.edge(wit).first + 1) + "-" +
                                       std::to_string(g.edge(wit).second + 1))
                         << '\n';
            }
            if (rep.offender)
                text << "offender " << (vertices ? std::to_string(*rep.offender + 1)
                                                 : std::to_string(g.edge(*rep.offender).first + 1) +
                                                       "-" +
                                                       std::to_string(g.edge(*rep.offender).second + 1))
                     << '\n';
            if (rep.addable)
                text << "addable " << (vertices ? std::to_string(*rep.addable + 1)
                                                : std::to_string(g.edge(*rep.addable).first + 1) +
                                                      "-" +
                                                      std::to_string(g.edge(*rep.addable).second + 1))
                     << '\n';
        }
    }
    out["extremal"] = extremal;
    if (as_json) std::cout << out.dump() << '\n';
    else std::cout << text.str();
    return ok && extremal ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"extension problem toolkit"};
    app.require_subcommand(1);
    bool as_json = false;
    app.add_flag("--json", as_json, "wrap output in a single JSON object");

    std::string problem, algo = "oracle", graph_path, presolution_path, instance_path, td_path,
                cnf_path, out_path, from, to, in_path, family = "3b2sat", candidate_path;
    int r = 0, gen_n = 3;
    std::uint64_t seed = 1;
    int jobs = 1;
    std::vector<std::string> bench_instances, bench_algos;

    auto* solve = app.add_subcommand("solve", "decide an extension instance");
    solve->add_option("--problem", problem)->required();
    solve->add_option("--algo", algo)
        ->check(CLI::IsMember({"oracle", "dual-fpt", "fpt", "treewidth", "dp"}));
    solve->add_option("--graph", graph_path);
    solve->add_option("--presolution", presolution_path);
    solve->add_option("--instance", instance_path);
    solve->add_option("--td", td_path);
    solve->add_option("--cnf", cnf_path);
    solve->add_option("--r", r);

    auto* verify = app.add_subcommand("verify", "check feasibility, extremality and privacy");
    verify->add_option("--problem", problem)->required();
    verify->add_option("--graph", graph_path);
    verify->add_option("--candidate", candidate_path);
    verify->add_option("--instance", instance_path);
    verify->add_option("--cnf", cnf_path);
    verify->add_option("--r", r);

    auto* reduce = app.add_subcommand("reduce", "run a hardness reduction as a generator");
    reduce->add_option("--from", from)->required()
        ->check(CLI::IsMember({"3b2sat", "hs", "extvc", "3partition"}));
    reduce->add_option("--to", to)->required();
    reduce->add_option("--in", in_path)->required();
    reduce->add_option("--presolution", presolution_path);
    reduce->add_option("--out", out_path)->required();

    auto* gen = app.add_subcommand("gen", "generate a random source instance");
    gen->add_option("--family", family)->check(CLI::IsMember({"3b2sat"}));
    gen->add_option("--n", gen_n)->required();
    gen->add_option("--seed", seed);
    gen->add_option("--out", out_path)->required();

    auto* bench = app.add_subcommand("bench", "time algorithms on instance files (CSV)");
    bench->add_option("--problem", problem)->required();
    bench->add_option("--algos", bench_algos)->required()->delimiter(',');
    bench->add_option("--instance", bench_instances)->required();
    bench->add_option("--r", r);
    bench->add_option("--jobs", jobs);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (solve->parsed()) {
            auto li = load_instance(problem, r, graph_path, presolution_path, instance_path,
                                    td_path, cnf_path);
            return run_solve(li, algo, as_json);
        }
        if (verify->parsed()) {
            auto li = load_instance(problem, r, graph_path, candidate_path, instance_path, "",
                                    cnf_path);
            return run_verify(li, as_json);
        }
        if (reduce->parsed()) {
            std::ofstream out(out_path);
            if (!out) throw parse_error("cannot open output file: " + out_path);
            if (from == "3b2sat") {
                auto in = open_or_die(in_path);
                auto src = validate_3b2sat(parse_dimacs(in));
                ReductionTarget tgt;
                if (to == "ext-ec") tgt = ReductionTarget::EXT_EC;
                else if (to == "ext-em") tgt = ReductionTarget::EXT_EM;
                else if (to == "ext-ds") tgt = ReductionTarget::EXT_DS;
                else if (to == "ext-eds") tgt = ReductionTarget::EXT_EDS;
                else throw precondition_error("3b2sat reduces to ext-ec/ext-em/ext-ds/ext-eds");
                auto red = reduce_3b2sat(src, tgt);
                write_instance_file(out, red.instance, red.vertex_names);
            } else if (from == "3partition") {
                if (to != "ext-bp") throw precondition_error("3partition reduces to ext-bp");
                auto in = open_or_die(in_path);
                std::string line;
                long long mm = -1, bb = 0;
                std::vector<long long> vals;
                while (std::getline(in, line)) {
                    if (line.empty() || line[0] == '#') continue;
                    std::istringstream ss(line);
                    if (mm < 0) {
                        if (!(ss >> mm >> bb)) throw parse_error("expected 'm b'");
                        continue;
                    }
                    long long v;
                    while (ss >> v) vals.push_back(v);
                }
                if (mm < 0 || (long long)vals.size() != 3 * mm)
                    throw parse_error("expected 3m values after the 'm b' line");
                auto inst = reduce_3partition_to_ext_bp(ThreePartitionInstance(vals, bb));
                write_instance_file(out, inst);
            } else if (from == "hs") {
                if (to != "ext-ds") throw precondition_error("hs reduces to ext-ds");
                auto in = open_or_die(in_path);
                HittingSetInstance h = parse_hitting_set(in);
                IndexSet u(h.ground_size);
                if (!presolution_path.empty()) {
                    auto pin = open_or_die(presolution_path);
                    Graph dummy(h.ground_size, {});
                    auto [set, is_vertex] = parse_presolution(pin, dummy);
                    if (!is_vertex) throw parse_error("hitting-set pre-solutions use the V layout");
                    u = set;
                }
                auto red = reduce_hs_to_ext_ds(h, u);
                write_instance_file(out, red.instance, red.vertex_names);
            } else { // extvc
                if (to != "ext-eds") throw precondition_error("extvc reduces to ext-eds");
                auto in = open_or_die(in_path);
                Graph g = parse_graph(in);
                IndexSet u(g.vertex_count());
                if (!presolution_path.empty()) {
                    auto pin = open_or_die(presolution_path);
                    auto [set, is_vertex] = parse_presolution(pin, g);
                    if (!is_vertex) throw parse_error("extvc pre-solutions are vertex sets");
                    u = set;
                }
                auto red = reduce_extvc_to_exteds(g, u);
                write_instance_file(out, red.instance, red.vertex_names);
            }
            if (as_json) std::cout << json{{"command", "reduce"}, {"out", out_path}}.dump() << '\n';
            return 0;
        }
        if (gen->parsed()) {
            auto inst = gen_3b2sat(gen_n, seed);
            std::ofstream out(out_path);
            if (!out) throw parse_error("cannot open output file: " + out_path);
            serialize_dimacs(out, inst.formula);
            if (as_json) std::cout << json{{"command", "gen"}, {"out", out_path}}.dump() << '\n';
            return 0;
        }
        if (bench->parsed()) {
            struct Line { std::string text; };
            std::vector<Line> lines(bench_instances.size() * bench_algos.size());
            auto work = [&](size_t start, size_t step) {
                for (size_t i = start; i < bench_instances.size(); i += step) {
                    for (size_t a = 0; a < bench_algos.size(); ++a) {
                        std::ostringstream row;
                        try {
                            auto li = load_instance(problem, r, "", "", bench_instances[i], "", "");
                            auto t0 = std::chrono::steady_clock::now();
                            Verdict v = dispatch(li, bench_algos[a], limits_from_env());
                            auto t1 = std::chrono::steady_clock::now();
                            double ms =
                                std::chrono::duration<double, std::milli>(t1 - t0).count();
                            row << bench_instances[i] << ',' << bench_algos[a] << ','
                                << (v.answer ? "YES" : "NO") << ',' << ms;
                        } catch (const std::exception& e) {
                            row << bench_instances[i] << ',' << bench_algos[a] << ",error,"
                                << e.what();
                        }
                        lines[i * bench_algos.size() + a].text = row.str();
                    }
                }
            };
            int k = std::max(1, jobs);
            std::vector<std::thread> threads;
            for (int t = 1; t < k; ++t) threads.emplace_back(work, (size_t)t, (size_t)k);
            work(0, (size_t)k);
            for (auto& th : threads) th.join();
            std::cout << "instance,algo,answer,wall_ms\n";
            for (auto& l : lines) std::cout << l.text << '\n';
            return 0;
        }
    } catch (const size_limit_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
