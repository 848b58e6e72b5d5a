#include "cli.hpp"

#include "fraglab/c2.hpp"
#include "fraglab/eval.hpp"
#include "fraglab/fragment.hpp"
#include "fraglab/gadgets.hpp"
#include "fraglab/graph.hpp"
#include "fraglab/pml.hpp"
#include "fraglab/query.hpp"
#include "fraglab/sat.hpp"
#include "fraglab/semilinear.hpp"
#include "fraglab/shtp.hpp"
#include "fraglab/syntax.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace fraglab::cli {

namespace {

struct UsageError : Error {
    using Error::Error;
};

// a file path, or inline text when it cannot be a path
std::string read_input(const std::string& arg, bool shtp = false) {
    if (!arg.empty() && (arg[0] == '(' || arg[0] == '{' || arg[0] == '['))
        return arg;
    std::error_code ec;
    if (std::filesystem::is_regular_file(arg, ec)) {
        std::ifstream in(arg, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        if (!in && !in.eof()) throw UsageError("cannot read '" + arg + "'");
        return ss.str();
    }
    if (shtp && arg.find('=') != std::string::npos) return arg;
    throw UsageError("no such file: '" + arg + "'");
}

void write_output(const std::string& path, const std::string& data, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << data << '\n';
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot write '" + path + "'");
    f << data << '\n';
    if (!f) throw UsageError("cannot write '" + path + "'");
}

Assignment parse_assign(const std::string& s, std::size_t n) {
    Assignment a;
    if (s.empty()) return a;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eqp = item.find('=');
        if (eqp == std::string::npos) throw UsageError("--assign expects x=i,y=j");
        std::string var = item.substr(0, eqp), val = item.substr(eqp + 1);
        std::size_t pos = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(val, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos == 0 || pos != val.size()) throw UsageError("bad element '" + val + "' in --assign");
        if (v >= n) throw UsageError("element " + val + " out of range in --assign");
        if (var == "x")
            a.x = static_cast<Element>(v);
        else if (var == "y")
            a.y = static_cast<Element>(v);
        else
            throw UsageError("unknown variable '" + var + "' in --assign");
    }
    return a;
}

std::string truth_json(bool value) {
    nlohmann::ordered_json j;
    j["result"] = value;
    return j.dump();
}

std::string semilinear_json(const PsiStar& ps) {
    auto j = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < ps.semilinear.size(); ++i) {
        const auto& s = ps.semilinear[i];
        nlohmann::ordered_json p;
        auto atoms = nlohmann::ordered_json::array();
        for (std::size_t k = 0; k < ps.system.atoms.size(); ++k) {
            const auto& a = ps.system.atoms[k];
            std::string name = a.loop ? a.pred + "(x,x)" : a.pred + "(x)";
            atoms.push_back({{"atom", name}, {"value", static_cast<bool>(ps.system.profiles[i].values[k])}});
        }
        p["profile"] = atoms;
        p["binaries"] = s.binaries;
        p["groups"] = s.groups;
        p["set"] = nlohmann::ordered_json::parse(print_semilinear(s.set));
        j.push_back(p);
    }
    return j.dump(2);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"fraglab: model checking and reductions for two-variable logics with percentage and Presburger counting"};
    app.require_subcommand(1);
    bool json = false;
    app.add_flag("--json", json, "wrap truth-valued results as JSON");

    std::string model, formula, query, system, solution, output, assign, semi_out;
    std::size_t max_size = 0, root = 0;
    std::optional<std::size_t> cap;
    bool force = false;

    auto* check = app.add_subcommand("check", "evaluate a formula on a structure (exit 0 true, 1 false)");
    check->add_option("--model", model, "structure JSON")->required();
    check->add_option("--formula", formula, "formula")->required();
    check->add_option("--assign", assign, "values of free variables, e.g. x=0,y=2");

    auto* validate_cmd = app.add_subcommand("validate", "report fragment membership of a formula");
    validate_cmd->add_option("--formula", formula, "formula")->required();

    auto* sat = app.add_subcommand("sat", "search for a model up to a domain size (exit 0 found, 1 none)");
    sat->add_option("--formula", formula, "formula")->required();
    sat->add_option("--max-size", max_size, "largest domain size tried")->required()->check(CLI::PositiveNumber);

    auto* to_c2 = app.add_subcommand("to-c2", "reduce a GF2_pres sentence to an equisatisfiable C2 sentence");
    to_c2->add_option("--formula", formula, "formula")->required();
    to_c2->add_option("-o,--output", output, "output file (default: standard output)");
    to_c2->add_option("--emit-semilinear", semi_out, "write the per-profile semilinear sets as JSON");

    auto* semilinear = app.add_subcommand("semilinear", "semilinear set utilities");
    semilinear->require_subcommand(1);
    auto* solve = semilinear->add_subcommand("solve", "minimal offsets and periods of x A = c over N");
    solve->add_option("--system", system, "system JSON {\"A\": [...], \"c\": [...]}")->required();

    auto* pump_cmd = app.add_subcommand("pump", "girth-increasing pumping of a structure");
    pump_cmd->add_option("--model", model, "structure JSON")->required();
    pump_cmd->add_option("--cap", cap, "maximal number of Gaifman edges (default FRAGLAB_PUMP_CAP or 16)");
    pump_cmd->add_flag("--force", force, "ignore the edge cap");

    auto* girth_cmd = app.add_subcommand("girth", "girth of the Gaifman graph (inf when acyclic)");
    girth_cmd->add_option("--model", model, "structure JSON")->required();

    auto* shtp = app.add_subcommand("shtp", "SHTP encoding into percentage logic");
    shtp->require_subcommand(1);
    auto* encode = shtp->add_subcommand("encode", "print the encoding of a system");
    encode->add_option("--system", system, "system, one entry per line")->required();
    auto* witness = shtp->add_subcommand("witness", "build a model of the encoding from a solution");
    witness->add_option("--system", system, "system")->required();
    witness->add_option("--solution", solution, "solution JSON {\"u\": 1, ...}")->required();
    auto* extract = shtp->add_subcommand("extract", "read a solution off a model of the encoding");
    extract->add_option("--system", system, "system")->required();
    extract->add_option("--model", model, "structure JSON")->required();

    auto* rollup_cmd = app.add_subcommand("rollup", "roll a tree-shaped query up into a unary formula");
    rollup_cmd->add_option("--query", query, "query")->required();
    rollup_cmd->add_option("--root", root, "root variable index (default 0)");

    auto* entail = app.add_subcommand("entail", "reduce query entailment to unsatisfiability");
    entail->add_option("--formula", formula, "formula")->required();
    entail->add_option("--query", query, "query")->required();
    entail->add_option("-o,--output", output, "output file (default: standard output)");

    auto* hom = app.add_subcommand("hom", "find a match of a query in a structure (exit 0 found, 1 none)");
    hom->add_option("--query", query, "query")->required();
    hom->add_option("--model", model, "structure JSON")->required();

    auto* pml = app.add_subcommand("pml", "Presburger modal logic");
    pml->require_subcommand(1);
    auto* translate = pml->add_subcommand("translate", "translate into GF2_pres");
    translate->add_option("--formula", formula, "modal formula")->required();

    auto* gadget = app.add_subcommand("gadget", "print a fixed gadget sentence");
    gadget->require_subcommand(1);
    auto* gfunc = gadget->add_subcommand("func", "sentence forcing F to be functional");
    auto* guniv = gadget->add_subcommand("universal", "guarded sentence forcing U to be universal");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    auto truth = [&](bool v) {
        if (json) out << truth_json(v) << '\n';
        return v ? 0 : 1;
    };

    try {
        if (*check) {
            Structure m = parse_structure(read_input(model));
            Formula f = parse_formula(read_input(formula));
            auto a = parse_assign(assign, m.size());
            for (auto v : free_vars(f))
                if (!a.get(v)) throw UsageError(std::string("free variable ") + var_name(v) + " needs --assign");
            Structure full = with_signature(m, signature_of(f));
            return truth(eval(full, a, f));
        }
        if (*validate_cmd) {
            std::string text = read_input(formula);
            Formula f = parse_formula(text);
            auto rep = validate(f, infer_signature(text));
            nlohmann::ordered_json j;
            j["fo2"] = rep.is_fo2;
            j["gf2"] = rep.is_gf2;
            j["gf2_pres"] = rep.is_gf2pres;
            j["fo2_pct"] = rep.is_fo2_pct;
            j["c2"] = rep.is_c2;
            j["violations"] = nlohmann::ordered_json::array();
            for (auto& v : rep.violations) j["violations"].push_back({{"path", v.path}, {"reason", v.reason}});
            out << j.dump(2) << '\n';
            return 0;
        }
        if (*sat) {
            std::string text = read_input(formula);
            Formula f = parse_formula(text);
            auto m = bounded_sat(f, infer_signature(text), max_size);
            if (json) {
                nlohmann::ordered_json j;
                j["result"] = m.has_value();
                if (m) j["model"] = nlohmann::ordered_json::parse(print_structure(*m));
                out << j.dump() << '\n';
            } else if (m) {
                out << print_structure(*m) << '\n';
            }
            return m ? 0 : 1;
        }
        if (*to_c2) {
            std::string text = read_input(formula);
            PsiStar ps = reduce_to_c2(parse_formula(text), infer_signature(text));
            write_output(output, print_formula(ps.formula), out);
            if (!semi_out.empty()) write_output(semi_out, semilinear_json(ps), out);
            return 0;
        }
        if (*solve) {
            out << print_eq_solution(solve_eq_system(parse_eq_system(read_input(system)))) << '\n';
            return 0;
        }
        if (*pump_cmd) {
            PumpOptions opt;
            opt.cap = cap;
            opt.force = force;
            out << print_structure(pump(parse_structure(read_input(model)), opt)) << '\n';
            return 0;
        }
        if (*girth_cmd) {
            auto g = girth(parse_structure(read_input(model)));
            out << (g ? std::to_string(*g) : std::string("inf")) << '\n';
            return 0;
        }
        if (*encode) {
            out << print_formula(shtp_encode(parse_shtp(read_input(system, true)))) << '\n';
            return 0;
        }
        if (*witness) {
            auto e = parse_shtp(read_input(system, true));
            out << print_structure(shtp_witness(e, parse_solution(read_input(solution)))) << '\n';
            return 0;
        }
        if (*extract) {
            auto e = parse_shtp(read_input(system, true));
            out << print_solution(shtp_extract(parse_structure(read_input(model)), e)) << '\n';
            return 0;
        }
        if (*rollup_cmd) {
            out << print_formula(rollup(parse_query(read_input(query)), root)) << '\n';
            return 0;
        }
        if (*entail) {
            Formula f = parse_formula(read_input(formula));
            write_output(output, print_formula(entail_reduce(f, parse_query(read_input(query)))), out);
            return 0;
        }
        if (*hom) {
            auto q = parse_query(read_input(query));
            auto h = find_homomorphism(q, parse_structure(read_input(model)));
            nlohmann::ordered_json j = nlohmann::ordered_json::object();
            if (h)
                for (std::size_t i = 0; i < q.vars.size(); ++i) j[q.vars[i]] = (*h)[i];
            if (json) {
                nlohmann::ordered_json w;
                w["result"] = h.has_value();
                if (h) w["match"] = j;
                out << w.dump() << '\n';
            } else if (h) {
                out << j.dump() << '\n';
            }
            return h ? 0 : 1;
        }
        if (*translate) {
            out << print_formula(pml_translate(parse_pml(read_input(formula)))) << '\n';
            return 0;
        }
        if (*gfunc) {
            out << print_formula(func_gadget()) << '\n';
            return 0;
        }
        if (*guniv) {
            out << print_formula(gf_universal_gadget(Signature{}).formula) << '\n';
            return 0;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    err << "error: no subcommand\n";
    return 2;
}

}  // namespace fraglab::cli
