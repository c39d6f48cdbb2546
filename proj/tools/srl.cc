#include <srl/core/iso.hh>
#include <srl/core/structure_io.hh>
#include <srl/core/structure_ops.hh>
#include <srl/mesa/mesa.hh>
#include <srl/mesa/yellow.hh>
#include <srl/polling/goodness.hh>
#include <srl/regularity/pipeline.hh>
#include <srl/regularity/removal.hh>
#include <srl/regularity/report.hh>
#include <srl/regularity/verify.hh>
#include <srl/stability/density.hh>
#include <srl/stability/search.hh>
#include <srl/stepfun/stepfun.hh>
#include <srl/toolkit/generators.hh>

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

using namespace srl;
using std::string;
using std::uint64_t;
using std::vector;

namespace
{
    enum Exit
    {
        ok = 0,
        verify_fail = 1,
        usage = 2,
        precondition = 3
    };

    // bad input files are usage errors, not preconditions
    struct InputError : Error
    {
        using Error::Error;
    };

    auto load(const string & path) -> Structure
    {
        try {
            return load_structure(path);
        } catch (const Error & e) {
            throw InputError(e.what());
        }
    }

    auto is_step_file(const string & path) -> bool
    {
        return path.size() > 5 && path.substr(path.size() - 5) == ".step";
    }

    // .step files hold step structures; anything else is a finite
    // structure, read as its Borel blow-up
    auto load_step(const string & path) -> StepStructure
    {
        if (! is_step_file(path))
            return borel_blowup(load(path));
        try {
            return parse_step(read_file(path));
        } catch (const Error & e) {
            throw InputError(e.what());
        }
    }

    auto parse_signature(const string & text) -> Signature
    {
        vector<RelationSymbol> rels;
        std::stringstream in(text);
        string item;
        while (std::getline(in, item, ',')) {
            auto slash = item.find('/');
            if (slash == string::npos || slash == 0)
                throw InputError("bad relation '" + item + "', expected NAME/ARITY");
            rels.push_back(RelationSymbol{item.substr(0, slash), static_cast<unsigned>(std::stoul(item.substr(slash + 1)))});
        }
        if (rels.empty())
            throw InputError("empty signature");
        return Signature(rels);
    }

    // "0 1 2|3 4" style block lists
    auto parse_blocks(const string & text, uint64_t n) -> Partition
    {
        vector<ElementSet> blocks;
        std::stringstream in(text);
        string item;
        while (std::getline(in, item, '|')) {
            ElementSet b;
            std::stringstream es(item);
            for (uint64_t x ; es >> x ; )
                b.push_back(static_cast<Element>(x));
            std::sort(b.begin(), b.end());
            blocks.push_back(b);
        }
        return Partition(n, blocks);
    }

    auto parse_set(const string & text) -> ElementSet
    {
        ElementSet s;
        std::stringstream in(text);
        for (uint64_t x ; in >> x ; )
            s.push_back(static_cast<Element>(x));
        std::sort(s.begin(), s.end());
        return s;
    }

    void write_or_print(const string & out, const string & text)
    {
        if (out.empty() || out == "-")
            std::cout << text;
        else
            write_file(out, text);
    }

    auto cmd_check(const string & input, unsigned tauhat, std::optional<unsigned> tau) -> int
    {
        auto m = load(input);
        auto b = has_branching(m, tauhat);
        if (b.witness) {
            std::cout << tauhat << "-branching: yes\n" << format_witness(m, *b.witness) << "\n";
            auto err = check_branching_witness(m, *b.witness);
            std::cout << "recheck: " << (err.empty() ? "ok" : err) << "\n";
        } else {
            std::cout << tauhat << "-branching: no (" << to_string(b.tag) << ")\n";
        }
        unsigned t = tau ? *tau : tauhat + 1;
        auto o = has_order(m, t);
        if (o.witness) {
            std::cout << t << "-order: yes\n" << format_witness(m, *o.witness) << "\n";
            auto err = check_order_witness(m, *o.witness);
            std::cout << "recheck: " << (err.empty() ? "ok" : err) << "\n";
        } else {
            std::cout << t << "-order: no (" << to_string(o.tag) << ")\n";
        }
        return ok;
    }

    struct RegularizeArgs
    {
        string input, out, epsilon, mode = "opportunistic";
        uint64_t seed = 0;
        unsigned tauhat = 2;
        bool almost_stable = false;
        std::optional<unsigned> catalog_cap;
    };

    auto cmd_regularize(const RegularizeArgs & a) -> int
    {
        auto m = load(a.input);
        Fraction eps;
        Mode mode;
        try {
            eps = parse_fraction(a.epsilon);
            mode = parse_mode(a.mode);
        } catch (const Error & e) {
            throw InputError(e.what());
        }
        RegularityReport r;
        try {
            if (a.almost_stable) {
                if (mode != Mode::opportunistic)
                    throw InputError("--almost-stable runs the opportunistic pipeline only");
                AlmostStableOptions o;
                o.regularize.tauhat = a.tauhat;
                o.catalog_cap = a.catalog_cap;
                r = almost_stable_regularize(m, eps, a.tauhat, a.seed, o);
            } else {
                RegularizeOptions o;
                o.tauhat = a.tauhat;
                r = regularize(m, eps, mode, a.seed, o);
            }
        } catch (const PreconditionError & e) {
            // what() already lists the failing conditions and k_eps
            std::cerr << "precondition failed: " << e.what() << "\n";
            return precondition;
        }
        std::cout << format_report(r);
        if (! a.out.empty()) {
            write_report(a.out, r);
            std::cout << "report written to " << a.out << "\n";
        }
        return ok;
    }

    auto cmd_verify(const string & dir, const string & input) -> int
    {
        auto m = load(input);
        RegularityReport r;
        try {
            r = read_report(dir);
        } catch (const Error & e) {
            throw InputError(e.what());
        }
        auto v = verify_report(m, r);
        for (auto & c : v.checks)
            std::cout << "checked: " << c << "\n";
        for (auto & s : v.violations)
            std::cout << "violation: " << s << "\n";
        std::cout << (v.pass ? "PASS" : "FAIL") << "\n";
        return v.pass ? ok : verify_fail;
    }

    auto cmd_distance(const string & a, const string & b) -> int
    {
        auto x = load(a), y = load(b);
        if (! (x.signature() == y.signature()))
            throw InputError("structures have different signatures");
        if (x.size() == y.size()) {
            auto d = edit_distance(x, y);
            for (size_t rel = 0 ; rel < x.signature().size() ; ++rel)
                std::cout << "edits " << x.signature().name(rel) << " " << d.counts[rel] << "\n";
            std::cout << "normalized " << to_string(d.normalized) << "\n";
        } else {
            std::cout << "edits n/a (universe sizes " << x.size() << " and " << y.size() << ")\n";
        }
        std::cout << "d1 " << to_string(d1(borel_blowup(x), borel_blowup(y))) << "\n";
        return ok;
    }

    auto cmd_explain_mesa(const string & input, const string & epsilon, const string & set_text,
            uint64_t m_top, std::optional<unsigned> g) -> int
    {
        auto m = load(input);
        Fraction eps;
        try {
            eps = parse_fraction(epsilon);
        } catch (const Error & e) {
            throw InputError(e.what());
        }
        ElementSet a = set_text.empty() ? range_set(0, static_cast<Element>(m.size())) : parse_set(set_text);
        for (auto x : a)
            if (x >= m.size())
                throw InputError("element " + std::to_string(x) + " outside the universe");
        check_epsilon(eps);
        uint64_t r = static_cast<uint64_t>(eps.den / eps.num);
        unsigned height = 0;
        if (g)
            height = *g;
        else
            for (uint64_t size = m_top ; size * r <= a.size() && r > 1 ; size *= r)
                ++height;
        auto stairs = make_staircase(eps, m_top, height);
        auto growth = grow_mesa(m, a, eps, stairs, GoodSetFamily::of({}));
        std::cout << "staircase";
        for (auto s : stairs.m)
            std::cout << " " << s;
        std::cout << "\n" << dump_mesa(m, growth.mesa);
        if (growth.cap)
            std::cout << "cap at depth " << growth.cap->depth << ", " << growth.cap->set.size() << " elements, excellent\n";
        else
            std::cout << "no cap: " << growth.diagnostic << "\n";
        if (growth.mesa.height > 0) {
            auto w = mesa_to_branching(m, growth.mesa);
            std::cout << format_witness(m, w) << "\n";
        }
        auto problems = validate_mesa(m, growth.mesa);
        for (auto & p : problems)
            std::cout << "invalid: " << p << "\n";
        return problems.empty() ? ok : verify_fail;
    }
}

auto main(int argc, char ** argv) -> int
{
    CLI::App app{"stable regularity toolkit for finite relational structures"};
    app.require_subcommand(1);

    string input, out;

    auto check = app.add_subcommand("check", "branching and order diagnostics");
    unsigned check_tauhat = 2;
    std::optional<unsigned> check_tau;
    check->add_option("--tau-hat", check_tauhat, "branching height")->required();
    check->add_option("--tau", check_tau, "order length (default tau-hat + 1)");
    check->add_option("input", input, "structure file")->required();

    auto reg = app.add_subcommand("regularize", "equitable indivisible partition with certified defects");
    RegularizeArgs ra;
    reg->add_option("--epsilon", ra.epsilon, "epsilon, decimal or p/q")->required();
    reg->add_option("--mode", ra.mode, "guaranteed or opportunistic");
    reg->add_option("--seed", ra.seed);
    reg->add_option("--tau-hat", ra.tauhat);
    reg->add_flag("--almost-stable", ra.almost_stable, "remove minimal branching structures first");
    reg->add_option("--catalog-cap", ra.catalog_cap, "size cap of the removed catalog");
    reg->add_option("-o,--output", ra.out, "report directory");
    reg->add_option("input", ra.input)->required();

    auto ver = app.add_subcommand("verify", "recheck a report against its input");
    string report_dir;
    ver->add_option("report", report_dir)->required();
    ver->add_option("input", input)->required();

    auto dist = app.add_subcommand("distance", "edit distances and d1");
    string da, db;
    dist->add_option("a", da)->required();
    dist->add_option("b", db)->required();

    auto gen = app.add_subcommand("gen", "generate structures");
    gen->require_subcommand(1);
    uint64_t seed = 0;
    auto g_blow = gen->add_subcommand("blowup", "noisy equitable blow-up");
    string base;
    uint64_t part = 1;
    double flip = 0.0;
    g_blow->add_option("--base", base)->required();
    g_blow->add_option("--part", part)->required()->check(CLI::PositiveNumber);
    g_blow->add_option("--flip", flip)->check(CLI::Range(0.0, 1.0));
    g_blow->add_option("--seed", seed);
    g_blow->add_option("-o,--output", out);
    auto g_half = gen->add_subcommand("halfgraph", "half-graph on 2n elements");
    uint64_t n = 1;
    g_half->add_option("--n", n)->required()->check(CLI::PositiveNumber);
    g_half->add_option("-o,--output", out);
    auto g_rand = gen->add_subcommand("random", "independent random tuples");
    string sig_text = "E/2";
    double density = 0.5;
    g_rand->add_option("--n", n)->required();
    g_rand->add_option("--signature", sig_text, "e.g. E/2,R/3");
    g_rand->add_option("--density", density)->check(CLI::Range(0.0, 1.0));
    g_rand->add_option("--seed", seed);
    g_rand->add_option("-o,--output", out);
    auto g_tree = gen->add_subcommand("branchtree", "structure carrying a branching witness");
    unsigned tree_tauhat = 1;
    g_tree->add_option("--tau-hat", tree_tauhat)->required();
    g_tree->add_option("-o,--output", out);

    auto step = app.add_subcommand("step", "step structure operations (.step files or finite structures)");
    step->require_subcommand(1);
    auto s_d1 = step->add_subcommand("d1", "L1 distance");
    s_d1->add_option("a", da)->required();
    s_d1->add_option("b", db)->required();
    auto s_tind = step->add_subcommand("tind", "induced density of a finite structure in a step structure");
    s_tind->add_option("f", da)->required();
    s_tind->add_option("s", db)->required();
    auto s_lift = step->add_subcommand("lift", "equal-measure lift of an equitable partition");
    string blocks;
    s_lift->add_option("input", input)->required();
    s_lift->add_option("--blocks", blocks, "blocks as '0 1 2|3 4'")->required();
    s_lift->add_option("-o,--output", out, "write the lifted step structure");
    auto s_canon = step->add_subcommand("canonicalize", "coarsest grid of a step structure");
    s_canon->add_option("input", input)->required();
    s_canon->add_option("-o,--output", out);

    auto explain = app.add_subcommand("explain", "dumps");
    bool mesa_flag = false;
    string eps_text = "1/5", set_text;
    uint64_t m_top = 1;
    std::optional<unsigned> height;
    explain->add_flag("--mesa", mesa_flag, "grow a mesa and dump it")->required();
    explain->add_option("--epsilon", eps_text);
    explain->add_option("--set", set_text, "root set as '0 1 2' (default: universe)");
    explain->add_option("--m-top", m_top, "smallest staircase size");
    explain->add_option("--height", height, "staircase height (default: tallest that fits)");
    explain->add_option("input", input)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError & e) {
        int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    try {
        if (*check)
            return cmd_check(input, check_tauhat, check_tau);
        if (*reg)
            return cmd_regularize(ra);
        if (*ver)
            return cmd_verify(report_dir, input);
        if (*dist)
            return cmd_distance(da, db);
        if (*gen) {
            Structure m;
            if (*g_blow)
                m = gen_blowup_noise(load(base), part, flip, seed);
            else if (*g_half)
                m = gen_half_graph(n);
            else if (*g_rand)
                m = gen_random(parse_signature(sig_text), n, density, seed);
            else
                m = gen_branch_tree(tree_tauhat);
            write_or_print(out, serialize_structure(m));
            return ok;
        }
        if (*step) {
            if (*s_d1) {
                std::cout << "d1 " << to_string(d1(load_step(da), load_step(db))) << "\n";
            } else if (*s_tind) {
                std::cout << "t_ind " << to_string(t_ind_step(load(da), load_step(db))) << "\n";
            } else if (*s_lift) {
                auto m = load(input);
                auto l = lift_equitable(m, parse_blocks(blocks, m.size()));
                std::cout << "grid " << l.lifted.grid() << "\nd1 " << to_string(l.achieved_d1) << "\nbound "
                    << to_string(l.bound) << "\nwithin_bound " << (l.within_bound ? "yes" : "no") << "\n";
                if (! out.empty())
                    write_file(out, serialize_step(l.lifted));
            } else {
                write_or_print(out, serialize_step(canonicalize(load_step(input))));
            }
            return ok;
        }
        if (*explain && mesa_flag)
            return cmd_explain_mesa(input, eps_text, set_text, m_top, height);
    } catch (const InputError & e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    } catch (const Error & e) {
        std::cerr << "precondition failed: " << e.what() << "\n";
        return precondition;
    } catch (const std::exception & e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    }
    return usage;
}
