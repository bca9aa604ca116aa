// Command-line front end: bounds, group-order, orbits, km, solve, zoom,
// expand, verify, reproduce.
//
// Exit codes: 0 success, 1 invalid input, 2 verification failure,
// 3 resource cap exceeded.

#include <CLI11.hpp>
#include <functional>
#include <iostream>

#include "qpack/qpack.hpp"

namespace {

using namespace qpack;

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t level) {
    return detail::mix64(seed ^ (level * 0x9e3779b97f4a7c15ull));
}

struct CommonOpts {
    std::uint32_t q = 2;
    std::uint32_t n = 0, t = 2, k = 3;
    std::string generators, subgroup_unused;
    std::vector<std::string> subgroups;
    std::string design, reps, out;
    std::uint32_t alpha = 50, beta = 20;
    std::uint64_t seed = 1;
    double time_limit_s = 5.0;
    std::uint64_t max_iterations = 0;  // 0 = unset
    std::uint64_t target_size = 0;     // 0 = unset
    std::uint32_t threads = 1;
    std::string fixtures;
};

void print_notes(const std::vector<std::string>& notes) {
    for (const auto& n : notes) std::cout << "note: " << n << "\n";
}

StopRule make_stop(const CommonOpts& o) {
    StopRule s;
    if (o.max_iterations) s.max_iterations = o.max_iterations;
    if (o.target_size) s.target_size = o.target_size;
    if (o.time_limit_s > 0)
        s.time_limit = std::chrono::milliseconds(static_cast<std::uint64_t>(o.time_limit_s * 1000));
    return s;
}

std::string tuple_str(const std::vector<std::uint64_t>& t) {
    std::string s;
    for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
    return s;
}

void write_out_design(const std::string& path, const Design& d) {
    std::ofstream out(path);
    if (!out) throw ParseError(path + ": cannot open for writing");
    write_design(out, d);
}

int cmd_bounds(const CommonOpts& o, std::uint32_t n_from, std::uint32_t n_to) {
    if (n_to < n_from) throw std::invalid_argument("--n-to below --n-from");
    for (std::uint32_t n = n_from; n <= n_to; ++n)
        std::cout << "n=" << n << " upper=" << packing_bound(n, o.t, o.k, o.q).str() << "\n";
    return 0;
}

int cmd_group_order(const CommonOpts& o, std::uint64_t order_cap) {
    GeneratorFile gf = load_generators(o.generators);
    print_notes(gf.notes);
    GroupClosure gc = close_group(gf.gens, order_cap);
    std::cout << "q=" << gf.gens.q.value() << " n=" << gf.gens.n
              << " generators=" << gf.gens.generators.size() << "\n";
    std::cout << "order=" << gc.order() << "\n";
    return 0;
}

int cmd_orbits(const CommonOpts& o, bool list) {
    GeneratorFile gf = load_generators(o.generators);
    print_notes(gf.notes);
    OrbitPartition part = orbit_partition(gf.gens, o.k);
    std::cout << "orbits=" << part.orbits.size() << " total=" << part.total_size() << "\n";
    if (list)
        for (const auto& orb : part.orbits)
            std::cout << "rep=" << tuple_str(orb.representative.encoding())
                      << " size=" << orb.size << "\n";
    if (!o.out.empty()) {
        std::ofstream out(o.out);
        if (!out) throw ParseError(o.out + ": cannot open for writing");
        std::vector<std::vector<std::uint64_t>> tuples;
        for (const auto& orb : part.orbits) tuples.push_back(orb.representative.encoding());
        write_blocks(out, gf.gens.q.value(), gf.gens.n, o.k, tuples);
    }
    return 0;
}

IncidenceMatrix build_matrix(const CommonOpts& o, GroupGens* gens_out = nullptr) {
    if (o.generators.empty()) {
        if (o.n == 0) throw std::invalid_argument("--n is required without --generators");
        return plain_matrix(o.n, o.t, o.k, FieldOrder(o.q));
    }
    GeneratorFile gf = load_generators(o.generators);
    print_notes(gf.notes);
    if (gens_out) *gens_out = gf.gens;
    return reduced_matrix(gf.gens, o.t, o.k);
}

int cmd_km(const CommonOpts& o) {
    IncidenceMatrix m = build_matrix(o);
    std::cout << "rows=" << m.rows << " cols=" << m.cols << "\n";
    if (!o.out.empty()) {
        std::ofstream out(o.out);
        if (!out) throw ParseError(o.out + ": cannot open for writing");
        write_incidence_matrix(out, m);
    } else {
        write_incidence_matrix(std::cout, m);
    }
    return 0;
}

void report_solution(const IncidenceMatrix& m, const Solution& sol) {
    std::cout << "solution=" << solution_to_string(sol) << "\n";
    std::string ids;
    for (std::size_t j = 0; j < m.cols; ++j)
        if (sol.selected[j]) ids += (ids.empty() ? "" : ",") + std::to_string(j);
    std::cout << "cols=" << ids << "\n";
    std::cout << "size=" << sol.weighted_size << "\n";
}

Design solution_design(const IncidenceMatrix& m, const Solution& sol, const GroupGens& gens) {
    std::vector<Subspace> reps;
    for (std::size_t j = 0; j < m.cols; ++j)
        if (sol.selected[j])
            reps.push_back(Subspace::from_canonical(m.q, m.n, m.col_reps[j]));
    return expand(reps, gens, m.t);
}

int cmd_solve(const CommonOpts& o, bool print_log) {
    GroupGens gens = GroupGens::trivial(FieldOrder(o.q), std::max(o.n, 1u));
    IncidenceMatrix m = build_matrix(o, &gens);
    SolverParams params{o.alpha, o.beta, o.seed, make_stop(o)};
    BeamResult res = beam_search(m, params);
    for (const auto& w : res.warnings) std::cout << "warning: " << w << "\n";
    if (print_log)
        for (const auto& e : res.log) std::cout << e.to_line() << "\n";
    std::cout << "iterations=" << res.iterations << " restarts=" << res.restarts << "\n";
    report_solution(m, res.best);
    Design d = solution_design(m, res.best, gens);
    ValidityReport rep = verify_coverage(d);
    std::cout << "expanded=" << rep.size << " valid=" << (rep.valid ? "true" : "false") << "\n";
    if (!rep.valid) return 2;
    if (!o.out.empty()) write_out_design(o.out, d);
    return 0;
}

int cmd_zoom(const CommonOpts& o, bool print_log) {
    if (o.generators.empty()) throw std::invalid_argument("--generators is required");
    if (o.subgroups.empty()) throw std::invalid_argument("at least one --subgroup is required");

    GeneratorFile top = load_generators(o.generators);
    print_notes(top.notes);
    SolverParams params{o.alpha, o.beta, o.seed, make_stop(o)};

    // (Z1) solve at the coarsest resolution
    GroupGens cur_gens = top.gens;
    IncidenceMatrix cur = reduced_matrix(cur_gens, o.t, o.k);
    std::cout << "stage=0 rows=" << cur.rows << " cols=" << cur.cols << "\n";
    BeamResult res = beam_search(cur, params);
    std::cout << "stage=0 size=" << res.best.weighted_size << "\n";
    Solution sol = res.best;

    for (std::size_t level = 0; level < o.subgroups.size(); ++level) {
        GeneratorFile sub = load_generators(o.subgroups[level]);
        print_notes(sub.notes);
        // (Z2) translate down the chain
        FusionMap fcols = fuse(sub.gens, cur_gens, o.k);
        FusionMap frows = fuse(sub.gens, cur_gens, o.t);
        IncidenceMatrix fine = reduced_matrix(sub.gens, o.t, o.k);
        FuseResult fused = fuse_matrix(fine, fcols, frows);
        Solution y = translate_solution(fused.coarse, sol, fcols);
        // (Z3) prune and extend at the finer resolution
        std::vector<std::uint8_t> excluded = zoom_prune(fcols, admissible_columns(fused.coarse));
        std::vector<std::uint8_t> allowed(fine.cols);
        for (std::size_t j = 0; j < fine.cols; ++j) allowed[j] = !excluded[j];
        std::cout << "stage=" << level + 1 << " rows=" << fine.rows << " cols=" << fine.cols
                  << " pruned=" << std::count(excluded.begin(), excluded.end(), 1) << "\n";
        params.seed = mix_seed(o.seed, level + 1);
        BeamResult ext = beam_search(fine, params, y, &allowed);
        if (print_log)
            for (const auto& e : ext.log) std::cout << e.to_line() << "\n";
        std::cout << "stage=" << level + 1 << " size=" << ext.best.weighted_size << "\n";
        sol = ext.best;
        cur_gens = sub.gens;
        cur = std::move(fine);
    }

    report_solution(cur, sol);
    Design d = solution_design(cur, sol, cur_gens);
    ValidityReport rep = verify_coverage(d);
    std::cout << "expanded=" << rep.size << " valid=" << (rep.valid ? "true" : "false") << "\n";
    if (!rep.valid) return 2;
    if (!o.out.empty()) write_out_design(o.out, d);
    return 0;
}

int cmd_expand(const CommonOpts& o) {
    BlockFile bf = load_blocks(o.reps);
    print_notes(bf.notes);
    GeneratorFile gf = load_generators(o.generators);
    print_notes(gf.notes);
    Design d = expand(bf.decode(), gf.gens, o.t);
    std::cout << "reps=" << bf.tuples.size() << " size=" << d.size() << "\n";
    if (!o.out.empty()) write_out_design(o.out, d);
    return 0;
}

void print_report(const ValidityReport& rep) {
    std::cout << "valid=" << (rep.valid ? "true" : "false") << " size=" << rep.size
              << " covered=" << rep.covered << " violations=" << rep.total_violations << "\n";
    for (const auto& v : rep.violations) {
        std::cout << "violation t=" << tuple_str(v.t_encoding) << " blocks=";
        for (std::size_t i = 0; i < v.blocks.size(); ++i)
            std::cout << (i ? "," : "") << v.blocks[i];
        std::cout << "\n";
    }
    for (const auto& [i, j] : rep.duplicate_blocks)
        std::cout << "duplicate blocks=" << i << "," << j << "\n";
}

int cmd_verify(const CommonOpts& o, const std::string& method) {
    BlockFile bf = load_blocks(o.design);
    print_notes(bf.notes);
    Design d = bf.to_design(o.t);
    ValidityReport rep;
    if (method == "pairwise")
        rep = verify_pairwise(d);
    else if (method == "coverage")
        rep = verify_coverage(d);
    else {
        rep = verify_coverage(d);
        ValidityReport pw = verify_pairwise(d);
        if (rep.valid != pw.valid)
            throw std::logic_error("verifier disagreement: pairwise vs coverage");
    }
    print_report(rep);
    return rep.valid ? 0 : 2;
}

int cmd_reproduce(const CommonOpts& o, const std::string& scenario);

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t level) {
    return detail::mix64(seed ^ (level * 0x9e3779b97f4a7c15ull));
}

}  // namespace

// ---- reproduce scenarios: the paper's published results from fixtures ----

namespace {

int scenario_bounds(const CommonOpts&) {
    const std::uint64_t expected[] = {93,    381,    1542,    6205,   24893,
                                      99718, 399165, 1597245, 6390150};
    bool ok = true;
    for (std::uint32_t n = 6; n <= 14; ++n) {
        BigInt b = packing_bound(n, 2, 3, 2);
        ok = ok && b == expected[n - 6];
        std::cout << "n=" << n << " upper=" << b.str() << "\n";
    }
    std::cout << (ok ? "bounds: reproduced" : "bounds: MISMATCH") << "\n";
    return ok ? 0 : 2;
}

int scenario_example(const CommonOpts& o) {
    GeneratorFile gf = load_fixture_generators("example_g4", o.fixtures);
    GroupClosure gc = close_group(gf.gens);
    std::cout << "group order=" << gc.order() << "\n";
    GroupGens h = cyclic_subgroup_of_order(gc, 3);
    IncidenceMatrix ah = reduced_matrix(h, 1, 2);
    IncidenceMatrix ag = reduced_matrix(gf.gens, 1, 2);
    std::cout << "A^H " << ah.rows << "x" << ah.cols << ", A^G " << ag.rows << "x" << ag.cols
              << "\n";
    FusionMap fcols = fuse(h, gf.gens, 2);
    FusionMap frows = fuse(h, gf.gens, 1);
    FuseResult fr = fuse_matrix(ah, fcols, frows);
    bool ok = fr.coarse.a == ag.a;
    std::cout << "fuse(A^H) == A^G: " << (ok ? "yes" : "NO") << "\n";
    return ok ? 0 : 2;
}

int scenario_table3(const CommonOpts& o) {
    BlockFile bf = load_fixture_blocks("p2_2_3_7", o.fixtures);
    Design d = bf.to_design(2);
    ValidityReport rep = verify_coverage(d);
    print_report(rep);
    CodeParameters cp = code_parameters(d);
    std::cout << "code [" << cp.n << "," << cp.k << "," << cp.d << "," << cp.s << "]_" << cp.q
              << " min-distance=" << cp.min_distance
              << (cp.exhaustive ? " (exhaustive)" : " (sampled)") << "\n";
    return rep.valid && rep.size == 329 ? 0 : 2;
}

int scenario_table4(const CommonOpts& o) {
    GeneratorFile gf = load_fixture_generators("gen_n8", o.fixtures);
    GroupClosure gc = close_group(gf.gens);
    std::cout << "group order=" << gc.order() << "\n";
    GroupGens h = cyclic_subgroup_of_order(gc, 7);
    BlockFile bf = load_fixture_blocks("reps_2_3_8", o.fixtures);
    Design d = expand(bf.decode(), h, 2);
    ValidityReport rep = verify_coverage(d);
    print_report(rep);
    return rep.valid && rep.size == 1312 ? 0 : 2;
}

int scenario_table(const CommonOpts& o, const char* genfix, const char* repfix,
                   std::uint64_t expect) {
    GeneratorFile gf = load_fixture_generators(genfix, o.fixtures);
    print_notes(gf.notes);
    GroupClosure gc = close_group(gf.gens);
    std::cout << "group order=" << gc.order() << "\n";
    BlockFile bf = load_fixture_blocks(repfix, o.fixtures);
    Design d = expand(bf.decode(), gf.gens, 2);
    ValidityReport rep = verify_coverage(d);
    print_report(rep);
    return rep.valid && rep.size == expect ? 0 : 2;
}

int cmd_reproduce(const CommonOpts& o, const std::string& scenario) {
    using Fn = std::function<int()>;
    std::vector<std::pair<std::string, Fn>> all = {
        {"bounds", [&] { return scenario_bounds(o); }},
        {"example", [&] { return scenario_example(o); }},
        {"table3", [&] { return scenario_table3(o); }},
        {"table4", [&] { return scenario_table4(o); }},
        {"table5", [&] { return scenario_table(o, "gen_n11", "reps_2_3_11", 92411); }},
        {"table6", [&] { return scenario_table(o, "gen_n12", "reps_2_3_12", 385515); }},
        {"table7", [&] { return scenario_table(o, "gen_n14", "reps_2_3_14", 5996178); }},
    };
    int status = 0;
    bool found = false;
    for (const auto& [name, fn] : all) {
        if (scenario != "all" && scenario != name) continue;
        found = true;
        std::cout << "--- " << name << " ---\n";
        int rc = fn();
        std::cout << name << ": " << (rc == 0 ? "ok" : "FAILED") << "\n";
        status = std::max(status, rc);
    }
    if (!found) throw std::invalid_argument("unknown scenario '" + scenario + "'");
    return status;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"q-packing design toolkit: Kramer-Mesner matrices, subgroup zooming, "
                 "beam search, design verification"};
    app.require_subcommand(1);

    CommonOpts o;
    std::uint32_t n_from = 6, n_to = 14;
    std::uint64_t order_cap = kDefaultOrderCap;
    bool list_orbits = false, print_log = false;
    std::string method = "coverage", scenario = "all";

    auto add_common = [&](CLI::App* c) {
        c->add_option("--q", o.q, "field order (prime)");
        c->add_option("--t", o.t, "t-subspace dimension");
        c->add_option("--k", o.k, "block dimension");
        c->add_option("--threads", o.threads, "worker cap (current build is single-threaded)")
            ->check(CLI::PositiveNumber);
        c->add_option("--fixtures", o.fixtures, "fixtures directory override");
    };

    auto* bounds = app.add_subcommand("bounds", "packing bounds for a parameter range");
    add_common(bounds);
    bounds->add_option("--n", o.n, "single ambient dimension");
    bounds->add_option("--n-from", n_from, "range start");
    bounds->add_option("--n-to", n_to, "range end");

    auto* gorder = app.add_subcommand("group-order", "closure order of a generator file");
    add_common(gorder);
    gorder->add_option("--generators", o.generators, "generator matrix file")->required();
    gorder->add_option("--order-cap", order_cap, "closure size cap");

    auto* orbits = app.add_subcommand("orbits", "orbit partition on k-subspaces");
    add_common(orbits);
    orbits->add_option("--generators", o.generators, "generator matrix file")->required();
    orbits->add_flag("--list", list_orbits, "print every orbit");
    orbits->add_option("--out", o.out, "write orbit representatives to a blocks file");

    auto* km = app.add_subcommand("km", "emit a plain or reduced incidence matrix");
    add_common(km);
    km->add_option("--n", o.n, "ambient dimension (plain matrix)");
    km->add_option("--generators", o.generators, "generator file (reduced matrix)");
    km->add_option("--out", o.out, "output file (default stdout)");

    auto* solve = app.add_subcommand("solve", "beam search on an incidence matrix");
    add_common(solve);
    solve->add_option("--n", o.n, "ambient dimension (plain matrix)");
    solve->add_option("--generators", o.generators, "generator file (reduced matrix)");
    solve->add_option("--alpha", o.alpha, "beam width");
    solve->add_option("--beta", o.beta, "extensions per state");
    solve->add_option("--seed", o.seed, "RNG seed");
    solve->add_option("--time-limit-s", o.time_limit_s, "wall clock budget in seconds");
    solve->add_option("--max-iterations", o.max_iterations, "iteration budget");
    solve->add_option("--target-size", o.target_size, "stop at this weighted size");
    solve->add_flag("--log", print_log, "print the per-iteration run log");
    solve->add_option("--out", o.out, "write the expanded design");

    auto* zoom = app.add_subcommand("zoom", "zoomed Kramer-Mesner over a subgroup chain");
    add_common(zoom);
    zoom->add_option("--generators", o.generators, "top group generator file")->required();
    zoom->add_option("--subgroup", o.subgroups, "subgroup generator file (repeatable, in order)")
        ->required();
    zoom->add_option("--alpha", o.alpha, "beam width");
    zoom->add_option("--beta", o.beta, "extensions per state");
    zoom->add_option("--seed", o.seed, "RNG seed");
    zoom->add_option("--time-limit-s", o.time_limit_s, "wall clock budget per stage in seconds");
    zoom->add_option("--max-iterations", o.max_iterations, "iteration budget per stage");
    zoom->add_option("--target-size", o.target_size, "stop at this weighted size");
    zoom->add_flag("--log", print_log, "print the per-iteration run log");
    zoom->add_option("--out", o.out, "write the expanded design");

    auto* expand_cmd = app.add_subcommand("expand", "expand orbit representatives to a design");
    add_common(expand_cmd);
    expand_cmd->add_option("--reps", o.reps, "orbit representative blocks file")->required();
    expand_cmd->add_option("--generators", o.generators, "generator file")->required();
    expand_cmd->add_option("--out", o.out, "write the expanded design");

    auto* verify = app.add_subcommand("verify", "validity of a design file");
    add_common(verify);
    verify->add_option("--design", o.design, "design blocks file")->required();
    verify->add_option("--method", method, "pairwise | coverage | both")
        ->check(CLI::IsMember({"pairwise", "coverage", "both"}));

    auto* repro = app.add_subcommand("reproduce", "re-derive the published results");
    add_common(repro);
    repro->add_option("--scenario", scenario,
                      "bounds | example | table3 | table4 | table5 | table6 | table7 | all");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (bounds->parsed()) {
            if (bounds->count("--n")) return cmd_bounds(o, o.n, o.n);
            return cmd_bounds(o, n_from, n_to);
        }
        if (gorder->parsed()) return cmd_group_order(o, order_cap);
        if (orbits->parsed()) return cmd_orbits(o, list_orbits);
        if (km->parsed()) return cmd_km(o);
        if (solve->parsed()) return cmd_solve(o, print_log);
        if (zoom->parsed()) return cmd_zoom(o, print_log);
        if (expand_cmd->parsed()) return cmd_expand(o);
        if (verify->parsed()) return cmd_verify(o, method);
        if (repro->parsed()) return cmd_reproduce(o, scenario);
    } catch (const CapExceededError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
