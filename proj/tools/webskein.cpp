// webskein command line: eval, relcheck, periodic-check, mirror-check, web-eval.
#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <future>
#include <thread>
#include <iostream>
#include <memory>
#include <sstream>

#include "webskein/cache.hpp"
#include "webskein/invariants.hpp"
#include "webskein/oracle.hpp"
#include "webskein/periodicity.hpp"
#include "webskein/reduce.hpp"

using namespace webskein;

namespace {

enum Exit { kOk = 0, kError = 1, kIrreducible = 2, kObstructed = 3 };

struct DiagramArgs {
    std::string braid, pd, file, coloring;
    bool have_braid = false;
    int strands = 0;
    int color = 0;
};

void add_diagram_options(CLI::App* app, DiagramArgs& a, const std::string& prefix = "") {
    app->add_option("--" + prefix + "braid", a.braid, "braid word, e.g. 1,-2,1");
    app->add_option("--" + prefix + "strands", a.strands, "number of braid strands");
    app->add_option("--" + prefix + "pd", a.pd, "PD text X[a,b,c,d],... or diagram JSON");
    app->add_option("--" + prefix + "file", a.file, "file holding PD text or diagram JSON");
    app->add_option("--" + prefix + "coloring", a.coloring, "colors per component, e.g. 1,2");
    if (prefix.empty()) app->add_option("--color", a.color, "one color for every component");
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<int> parse_ints(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.find_first_not_of(" \t") == std::string::npos) continue;
        try {
            out.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw Error("not an integer list: " + s);
        }
    }
    return out;
}

ColoredDiagram load_diagram(const DiagramArgs& a, const CLI::App* app, const std::string& prefix = "") {
    bool braid = app->count("--" + prefix + "braid") > 0;
    bool pd = app->count("--" + prefix + "pd") > 0;
    bool file = app->count("--" + prefix + "file") > 0;
    if (int(braid) + int(pd) + int(file) != 1) throw Error("give exactly one of --braid, --pd, --file");
    ColoredDiagram cd;
    Coloring from_json;
    if (braid) {
        auto word = parse_braid_word(a.braid);
        int need = 1;
        for (int g : word) need = std::max(need, std::abs(g) + 1);
        int s = a.strands > 0 ? a.strands : need;
        cd.diagram = from_braid(word, s);
    } else {
        std::string text = pd ? a.pd : slurp(a.file);
        cd.diagram = parse_pd(text, &from_json);
    }
    if (!a.coloring.empty()) {
        cd.coloring = parse_ints(a.coloring);
    } else if (a.color > 0) {
        cd.coloring = uniform_coloring(cd.diagram, a.color);
    } else if (int(from_json.size()) == cd.diagram.num_components() && !from_json.empty()) {
        cd.coloring = from_json;
    } else {
        cd.coloring = uniform_coloring(cd.diagram, 1);
    }
    return cd;
}

struct Common {
    int n = 2;
    std::string engine = "both";
    std::string cache;
    bool json = false;
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--n", c.n, "sl(n) rank parameter")->capture_default_str();
    app->add_option("--engine", c.engine, "rewrite, oracle or both")
        ->check(CLI::IsMember({"rewrite", "oracle", "both"}))
        ->capture_default_str();
    app->add_option("--cache", c.cache, "persistent web value cache (default $WEBSKEIN_CACHE)");
    app->add_flag("--json", c.json, "machine-readable output");
}

std::unique_ptr<Cache> open_cache(const Common& c) {
    std::string path = c.cache;
    if (path.empty())
        if (const char* env = std::getenv("WEBSKEIN_CACHE")) path = env;
    if (path.empty()) return nullptr;
    return std::make_unique<Cache>(path);
}

EvalOptions options(const Common& c, Cache* cache) {
    EvalOptions o;
    o.engine = engine_from_name(c.engine);
    o.fallback = o.engine != Engine::Rewrite;
    o.cache = cache;
    return o;
}

nlohmann::json coloring_json(const Coloring& mu) { return nlohmann::json(mu); }

// Corpus lines: "braid WORD [STRANDS]", PD text or diagram JSON. Blank lines and # comments are skipped.
ColoredDiagram corpus_item(const std::string& line, const DiagramArgs& a) {
    ColoredDiagram cd;
    Coloring from_json;
    if (line.rfind("braid", 0) == 0) {
        std::stringstream ss(line.substr(5));
        std::string word;
        int strands = 0;
        ss >> word >> strands;
        auto w = parse_braid_word(word == "-" ? "" : word);
        int need = 1;
        for (int g : w) need = std::max(need, std::abs(g) + 1);
        cd.diagram = from_braid(w, strands > 0 ? strands : need);
    } else {
        cd.diagram = parse_pd(line, &from_json);
    }
    if (!a.coloring.empty())
        cd.coloring = parse_ints(a.coloring);
    else if (a.color > 0)
        cd.coloring = uniform_coloring(cd.diagram, a.color);
    else if (int(from_json.size()) == cd.diagram.num_components() && !from_json.empty())
        cd.coloring = from_json;
    else
        cd.coloring = uniform_coloring(cd.diagram, 1);
    return cd;
}

nlohmann::json eval_json(const std::string& invariant, int n, const Coloring& mu, const LPoly& v) {
    return {{"invariant", invariant == "P" ? "P_n" : "K_n"}, {"n", n}, {"coloring", coloring_json(mu)}, {"value", v.to_json()}};
}

LPoly eval_one(ColoredDiagram& cd, int n, const EvalOptions& opt, const std::string& invariant) {
    if (invariant == "P") {
        cd.coloring = uniform_coloring(cd.diagram, 1);
        return homfly_pn(cd.diagram, n, opt);
    }
    return k_invariant(cd.diagram, cd.coloring, n, opt);
}

int run_eval(const Common& c, const DiagramArgs& da, const CLI::App* app, const std::string& invariant) {
    auto cd = load_diagram(da, app);
    auto cache = open_cache(c);
    LPoly v = eval_one(cd, c.n, options(c, cache.get()), invariant);
    if (c.json)
        std::cout << eval_json(invariant, c.n, cd.coloring, v).dump() << "\n";
    else
        std::cout << v.to_string() << "\n";
    return kOk;
}

// Items run in a pool of `jobs` threads; results print in input order.
int run_corpus(const Common& c, const DiagramArgs& da, const std::string& path, int jobs, const std::string& invariant) {
    std::vector<std::string> lines;
    {
        std::stringstream in(slurp(path));
        std::string line;
        while (std::getline(in, line)) {
            auto b = line.find_first_not_of(" \t\r");
            if (b == std::string::npos || line[b] == '#') continue;
            lines.push_back(line.substr(b));
        }
    }
    auto cache = open_cache(c);
    EvalOptions opt = options(c, cache.get());
    struct Result {
        Coloring coloring;
        LPoly value;
        std::string error;
        bool irreducible = false;
    };
    auto work = [&](size_t i) {
        Result r;
        try {
            auto cd = corpus_item(lines[i], da);
            r.value = eval_one(cd, c.n, opt, invariant);
            r.coloring = cd.coloring;
        } catch (const Irreducible&) {
            r.irreducible = true;
            r.error = "irreducible web, rerun with --engine both";
        } catch (const std::exception& e) {
            r.error = e.what();
        }
        return r;
    };
    if (jobs <= 0) jobs = int(std::max(1u, std::thread::hardware_concurrency()));
    int code = kOk;
    for (size_t start = 0; start < lines.size(); start += size_t(jobs)) {
        std::vector<std::future<Result>> batch;
        for (size_t i = start; i < std::min(lines.size(), start + size_t(jobs)); ++i)
            batch.push_back(std::async(std::launch::async, work, i));
        for (size_t k = 0; k < batch.size(); ++k) {
            Result r = batch[k].get();
            size_t item = start + k + 1;
            if (!r.error.empty()) {
                std::cerr << "item " << item << ": " << r.error << "\n";
                int e = r.irreducible ? kIrreducible : kError;
                code = std::max(code, e);
                if (c.json) std::cout << nlohmann::json{{"item", item}, {"error", r.error}}.dump() << "\n";
                else std::cout << item << "\terror\n";
                continue;
            }
            if (c.json) {
                auto j = eval_json(invariant, c.n, r.coloring, r.value);
                j["item"] = item;
                std::cout << j.dump() << "\n";
            } else {
                std::cout << item << "\t" << r.value.to_string() << "\n";
            }
        }
    }
    return code;
}

int run_relcheck(int nmax, int max_l, bool extended, bool json) {
    bool all_ok = true;
    nlohmann::json report = nlohmann::json::array();
    for (int n = 2; n <= nmax; ++n) {
        std::map<std::string, std::pair<int, int>> tally;  // family -> (passed, total)
        std::vector<std::string> failures;
        for (auto& id : local_identities(n, max_l, extended)) {
            for (int var = 0; var < 4; ++var) {
                auto tr = [&](SliceWeb w) {
                    if (var & 1) w = reflect(w, n);
                    if (var & 2) w = reverse_orientation(w);
                    return w;
                };
                Tensor lhs = eval_tensor(tr(SliceWeb{id.bottom, id.lhs}), n);
                Tensor rhs;
                for (auto& [coef, sl] : id.rhs)
                    for (auto& [k, val] : eval_tensor(tr(SliceWeb{id.bottom, sl}), n)) rhs[k] += coef * val;
                auto strip = [](Tensor& t) {
                    for (auto it = t.begin(); it != t.end();)
                        it = it->second.is_zero() ? t.erase(it) : std::next(it);
                };
                strip(lhs);
                strip(rhs);
                auto& t = tally[relation_name(id.rel)];
                t.second++;
                if (lhs == rhs)
                    t.first++;
                else
                    failures.push_back(id.label + (var & 1 ? " mirrored" : "") + (var & 2 ? " reversed" : ""));
            }
        }
        for (auto& [fam, t] : tally) {
            all_ok = all_ok && t.first == t.second;
            if (json)
                report.push_back({{"n", n}, {"relation", fam}, {"passed", t.first}, {"total", t.second}});
            else
                std::cout << "n=" << n << " " << fam << " " << t.first << "/" << t.second << " pass\n";
        }
        if (!json)
            for (auto& f : failures) std::cout << "n=" << n << " FAIL " << f << "\n";
    }
    if (json) std::cout << report.dump() << "\n";
    return all_ok ? kOk : kError;
}

int print_verdict(const Verdict& v) {
    std::cout << verdict_to_json(v).dump() << "\n";
    return v.obstructed ? kObstructed : kOk;
}

int run_web_eval(const Common& c, const std::string& path, const std::string& text) {
    if (path.empty() == text.empty()) throw Error("give exactly one of --web, --web-json");
    SliceWeb w = web_from_json(nlohmann::json::parse(path.empty() ? text : slurp(path)));
    if (auto e = validate(w, c.n, true, false)) throw Error(*e);
    auto cache = open_cache(c);
    LPoly v = eval_closed_web(w, c.n, options(c, cache.get()));
    if (c.json)
        std::cout << nlohmann::json{{"n", c.n}, {"value", v.to_json()}}.dump() << "\n";
    else
        std::cout << v.to_string() << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"webskein: sl(n) web evaluation and link invariants"};
    app.require_subcommand(1);

    Common common;
    DiagramArgs da;
    std::string invariant = "K";
    auto* eval = app.add_subcommand("eval", "evaluate K_n (or P_n) of a link diagram");
    add_common(eval, common);
    add_diagram_options(eval, da);
    std::string corpus;
    int jobs = 0;
    eval->add_option("--corpus", corpus, "file with one diagram per line (braid WORD [STRANDS], PD text or JSON)");
    eval->add_option("--jobs", jobs, "worker threads for --corpus (default: hardware threads)");
    eval->add_option("--invariant", invariant, "K or P")->check(CLI::IsMember({"K", "P"}))->capture_default_str();

    int rel_n = 5, max_l = 3;
    bool extended = false, rel_json = false;
    auto* rel = app.add_subcommand("relcheck", "verify the web relations against the state sum");
    rel->add_option("--n", rel_n, "largest n to check")->capture_default_str();
    rel->add_option("--max-l", max_l, "largest l in the square relations")->capture_default_str();
    rel->add_flag("--extended", extended, "sweep the wider square ranges used by the rewriter");
    rel->add_flag("--json", rel_json, "machine-readable output");

    Common pc;
    DiagramArgs pl, pf;
    std::string tangle, tangle_colors, pinv = "K";
    int tangle_strands = 0;
    long p = 0;
    auto* per = app.add_subcommand("periodic-check", "factor-link congruence modulo I_n");
    add_common(per, pc);
    add_diagram_options(per, pl);
    add_diagram_options(per, pf, "factor-");
    per->add_option("--tangle", tangle, "braid-like tangle, e.g. sigma1 or 1,2; builds cover and factor");
    per->add_option("--tangle-strands", tangle_strands, "strand count of the tangle");
    per->add_option("--tangle-colors", tangle_colors, "bottom endpoint colors of the tangle");
    per->add_option("--p", p, "period (prime)")->required();
    per->add_option("--invariant", pinv, "K or P")->check(CLI::IsMember({"K", "P"}))->capture_default_str();

    Common mc;
    DiagramArgs ml;
    long mp = 0;
    auto* mir = app.add_subcommand("mirror-check", "mirror congruence modulo (p, q^p - 1)");
    add_common(mir, mc);
    add_diagram_options(mir, ml);
    mir->add_option("--p", mp, "period")->required();

    Common wc;
    std::string web_path, web_text;
    auto* web = app.add_subcommand("web-eval", "evaluate a closed web given as slice JSON");
    add_common(web, wc);
    web->add_option("--web", web_path, "web JSON file");
    web->add_option("--web-json", web_text, "web JSON text");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kError;
    }

    try {
        if (*eval && !corpus.empty()) return run_corpus(common, da, corpus, jobs, invariant);
        if (*eval) return run_eval(common, da, eval, invariant);
        if (*rel) return run_relcheck(rel_n, max_l, extended, rel_json);
        if (*per) {
            auto cache = open_cache(pc);
            EvalOptions opt = options(pc, cache.get());
            ColoredDiagram L, F;
            if (!tangle.empty()) {
                Tangle t = parse_tangle(tangle, tangle_strands, parse_ints(tangle_colors));
                L = periodic_cover(t, int(p));
                F = closure(t);
            } else {
                L = load_diagram(pl, per);
                F = load_diagram(pf, per, "factor-");
            }
            return print_verdict(check_factor_congruence(L.diagram, L.coloring, F.diagram, F.coloring, p, pc.n, opt,
                                                         pinv == "P" ? Invariant::P : Invariant::K));
        }
        if (*mir) {
            auto cache = open_cache(mc);
            auto L = load_diagram(ml, mir);
            return print_verdict(check_mirror_congruence(L.diagram, L.coloring, mp, mc.n, options(mc, cache.get())));
        }
        if (*web) return run_web_eval(wc, web_path, web_text);
    } catch (const Irreducible&) {
        std::cerr << "irreducible web, rerun with --engine both\n";
        return kIrreducible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kError;
    }
    return kError;
}
