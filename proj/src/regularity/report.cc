#include <srl/regularity/report.hh>
#include <srl/core/structure_io.hh>

#include <filesystem>
#include <map>
#include <sstream>

using std::size_t;
using std::uint64_t;
using std::vector;

namespace srl
{
    namespace
    {
        auto list(const ElementSet & s) -> std::string
        {
            std::string t;
            for (size_t i = 0 ; i < s.size() ; ++i)
                t += (i ? " " : "") + std::to_string(s[i]);
            return t;
        }

        auto parse_list(const std::string & s) -> ElementSet
        {
            ElementSet out;
            std::istringstream in(s);
            uint64_t x;
            while (in >> x)
                out.push_back(static_cast<Element>(x));
            return out;
        }

        auto cell_name(const Signature & sig, const CellDefect & c) -> std::string
        {
            std::string t = sig.name(c.relation) + "(";
            for (size_t i = 0 ; i < c.blocks.size() ; ++i)
                t += (i ? "," : "") + std::string("p") + std::to_string(c.blocks[i]);
            return t + ")";
        }
    }

    auto format_report(const RegularityReport & r) -> std::string
    {
        const auto & p = r.params;
        const auto & sig = r.modified.signature();
        std::ostringstream o;
        o << "PARAMS\n";
        o << "  mode " << to_string(r.mode) << (r.almost_stable ? " (almost-stable)" : "") << "\n";
        o << "  epsilon " << p.epsilon.str() << "\n";
        if (r.almost_stable)
            o << "  global epsilon " << r.global_eps.str() << "\n";
        o << "  eps_cert " << r.eps_cert.str() << "\n";
        o << "  zeta " << to_string(p.zeta) << "\n";
        o << "  eta " << to_string(p.eta) << "\n";
        o << "  tauhat " << p.tauhat << "  n_L " << p.n_l << "  g " << p.g << "  r " << p.r << "\n";
        o << "  beta " << to_string(p.beta) << "\n";
        o << "  m " << p.m.str() << "  |M| " << p.n << "\n";
        o << "  seed " << r.seed << "\n";
        o << "  size-choosing conditions:\n";
        for (auto & c : p.conditions)
            o << "    " << format_condition(c) << "\n";
        o << "  internal parameters: gamma1 " << to_string(p.main.gamma1) << "  p " << p.main.p.str()
            << "\n    eps1 " << to_string(p.main.eps1) << "\n    zeta1 " << to_string(p.main.zeta1) << "\n";
        o << "  conditions at |M| (k_eps " << (p.main.k_eps ? p.main.k_eps->str() : std::string("unbounded")) << "):\n";
        for (auto & c : p.main.conditions)
            o << "    " << format_condition(c) << "\n";

        o << "PARTITION\n";
        o << "  " << r.partition.size() << " blocks, sizes " << r.partition.min_block_size() << ".."
            << r.partition.max_block_size() << "\n";
        for (size_t i = 0 ; i < r.partition.size() ; ++i)
            o << "  p" << i << " [" << r.partition.block(i).size() << "]: " << list(r.partition.block(i)) << "\n";

        o << "QUOTIENT\n";
        std::istringstream q(serialize_structure(r.quotient));
        for (std::string line ; std::getline(q, line) ; )
            o << "  " << line << "\n";

        o << "DEFECTS\n";
        for (size_t rel = 0 ; rel < sig.size() ; ++rel)
            o << "  " << sig.name(rel) << " total " << r.defects.total(rel) << "\n";
        for (auto & c : r.defects.cells)
            o << "  " << cell_name(sig, c) << " " << c.defect << " / " << c.size << "\n";
        auto bad = r.defects.violations(sig, p.epsilon);
        o << "  cells over arity*eps*size: " << bad.size() << "\n";
        if (r.almost_stable) {
            o << "  removal edits:";
            for (auto e : r.removal_edits)
                o << " " << e;
            o << "\n";
        }

        o << "CERTIFICATION\n";
        o << "  family " << to_string(r.family) << " over the " << r.cores.size() << " cores, eps " << r.eps_cert.str() << "\n";
        for (auto & c : r.certificates)
            o << "  core p" << c.block << " [" << c.core.size() << "] " << (c.excellent ? "excellent" : "NOT excellent") << "\n";

        o << "NOTES\n";
        for (auto & n : r.notes)
            o << "  " << n << "\n";
        return o.str();
    }

    auto format_report_kv(const RegularityReport & r) -> std::string
    {
        std::ostringstream o;
        const auto & p = r.params;
        o << "format=srl-report-1\n";
        o << "mode=" << to_string(r.mode) << "\n";
        o << "almost_stable=" << (r.almost_stable ? 1 : 0) << "\n";
        o << "epsilon=" << p.epsilon.str() << "\n";
        o << "global_epsilon=" << r.global_eps.str() << "\n";
        o << "eps_cert=" << r.eps_cert.str() << "\n";
        o << "zeta=" << to_string(p.zeta) << "\n";
        o << "eta=" << to_string(p.eta) << "\n";
        o << "tauhat=" << p.tauhat << "\n";
        o << "g=" << p.g << "\n";
        o << "r=" << p.r << "\n";
        o << "n=" << r.partition.universe_size() << "\n";
        o << "seed=" << r.seed << "\n";
        o << "family=" << to_string(r.family) << "\n";
        o << "blocks=" << r.partition.size() << "\n";
        for (size_t i = 0 ; i < r.partition.size() ; ++i)
            o << "block." << i << "=" << list(r.partition.block(i)) << "\n";
        for (size_t i = 0 ; i < r.cores.size() ; ++i)
            o << "core." << i << "=" << list(r.cores[i]) << "\n";
        for (size_t i = 0 ; i < r.certificates.size() ; ++i)
            o << "certified." << i << "=" << (r.certificates[i].excellent ? 1 : 0) << "\n";
        o << "defect_cells=" << r.defects.cells.size() << "\n";
        for (size_t i = 0 ; i < r.defects.cells.size() ; ++i) {
            auto & c = r.defects.cells[i];
            o << "defect." << i << "=" << c.relation;
            for (auto b : c.blocks)
                o << " " << b;
            o << " " << c.defect << " " << c.size << "\n";
        }
        if (r.almost_stable) {
            o << "removal_edits=";
            for (size_t i = 0 ; i < r.removal_edits.size() ; ++i)
                o << (i ? " " : "") << r.removal_edits[i];
            o << "\n";
            o << "catalog_cap=" << r.catalog_cap << "\n";
        }
        for (auto & c : p.conditions)
            o << "condition." << c.name << "=" << (c.satisfied ? "holds" : "fails") << "\n";
        return o.str();
    }

    void write_report(const std::string & dir, const RegularityReport & r)
    {
        std::filesystem::create_directories(dir);
        auto path = [&] (const char * name) { return (std::filesystem::path(dir) / name).string(); };
        write_file(path("report.txt"), format_report(r));
        write_file(path("report.kv"), format_report_kv(r));
        save_structure(path("modified.rst"), r.modified);
        save_structure(path("quotient.rst"), r.quotient);
        if (r.cleaned)
            save_structure(path("cleaned.rst"), *r.cleaned);
    }

    auto read_report(const std::string & dir) -> RegularityReport
    {
        auto path = [&] (const char * name) { return (std::filesystem::path(dir) / name).string(); };
        std::map<std::string, std::string> kv;
        std::istringstream in(read_file(path("report.kv")));
        for (std::string line ; std::getline(in, line) ; ) {
            auto eq = line.find('=');
            if (eq == std::string::npos)
                continue;
            kv[line.substr(0, eq)] = line.substr(eq + 1);
        }
        auto get = [&] (const std::string & k) -> const std::string & {
            auto it = kv.find(k);
            if (it == kv.end())
                throw Error("report.kv: missing key '" + k + "'");
            return it->second;
        };
        if (get("format") != "srl-report-1")
            throw Error("report.kv: unknown format '" + get("format") + "'");

        RegularityReport r;
        r.mode = parse_mode(get("mode"));
        r.almost_stable = get("almost_stable") == "1";
        r.params.epsilon = parse_fraction(get("epsilon"));
        r.global_eps = parse_fraction(get("global_epsilon"));
        r.eps_cert = parse_fraction(get("eps_cert"));
        r.params.zeta = parse_rational(get("zeta"));
        r.params.eta = parse_rational(get("eta"));
        r.params.tauhat = static_cast<unsigned>(std::stoul(get("tauhat")));
        r.params.g = std::stoull(get("g"));
        r.params.r = std::stoull(get("r"));
        r.params.n = std::stoull(get("n"));
        r.seed = std::stoull(get("seed"));
        if (get("family") != to_string(FamilyMode::family))
            throw Error("report.kv: unsupported family '" + get("family") + "'");
        r.family = FamilyMode::family;

        size_t blocks = std::stoull(get("blocks"));
        vector<ElementSet> bs;
        for (size_t i = 0 ; i < blocks ; ++i)
            bs.push_back(parse_list(get("block." + std::to_string(i))));
        r.partition = Partition(r.params.n, bs);
        for (size_t i = 0 ; kv.count("core." + std::to_string(i)) ; ++i)
            r.cores.push_back(parse_list(get("core." + std::to_string(i))));
        for (size_t i = 0 ; kv.count("certified." + std::to_string(i)) ; ++i)
            r.certificates.push_back(BlockCertificate{i, r.cores.at(i), get("certified." + std::to_string(i)) == "1"});

        r.modified = load_structure(path("modified.rst"));
        r.quotient = load_structure(path("quotient.rst"));
        size_t cells = std::stoull(get("defect_cells"));
        for (size_t i = 0 ; i < cells ; ++i) {
            std::istringstream d(get("defect." + std::to_string(i)));
            CellDefect c;
            d >> c.relation;
            c.blocks.resize(r.modified.arity(c.relation));
            for (auto & b : c.blocks)
                d >> b;
            d >> c.defect >> c.size;
            r.defects.cells.push_back(std::move(c));
        }
        if (r.almost_stable) {
            std::istringstream e(get("removal_edits"));
            for (uint64_t x ; e >> x ; )
                r.removal_edits.push_back(x);
            r.catalog_cap = static_cast<unsigned>(std::stoul(get("catalog_cap")));
            r.cleaned = load_structure(path("cleaned.rst"));
        }
        return r;
    }
}
