#include "zpg/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include "zpg/identities.hpp"
#include "zpg/serialize.hpp"

namespace zpg {

namespace {

const std::set<std::string> kGridKeys{"p", "n", "d", "a", "b", "m", "kappa", "l", "res", "procyclic", "norm"};

i64 parse_int(const std::string& s, const std::string& key) {
    std::size_t pos = 0;
    i64 v = 0;
    try {
        v = std::stoll(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != s.size()) throw FormatError("grid value for " + key + " is not an integer: \"" + s + "\"");
    return v;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

template <class F>
void parallel_for(std::size_t count, int jobs, F&& body) {
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, jobs)), std::max<std::size_t>(count, 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) body(i);
        });
    for (auto& t : pool) t.join();
}

std::vector<i64> values_or(const GridSpec& g, const std::string& key, std::vector<i64> dflt) {
    auto it = g.find(key);
    return it == g.end() ? dflt : it->second;
}

std::vector<i64> range(i64 lo, i64 hi) {
    std::vector<i64> v;
    for (i64 x = lo; x <= hi; ++x) v.push_back(x);
    return v;
}

void check_desk_limits(const GridSpec& g) {
    for (i64 p : values_or(g, "p", {}))
        if (p > kMaxGridPrime) throw FormatError("grid bound exceeded: p ≤ 5");
    for (i64 n : values_or(g, "n", {}))
        if (n > kMaxGridN) throw FormatError("grid bound exceeded: n ≤ 3");
    const auto as = values_or(g, "a", {0});
    const auto ms = values_or(g, "m", {0});
    if (*std::max_element(as.begin(), as.end()) + *std::max_element(ms.begin(), ms.end()) > kMaxGridAPlusM)
        throw FormatError("grid bound exceeded: a+m ≤ 5");
}

std::optional<int> effective_precision(std::optional<int> cli) {
    if (cli) return cli;
    return precision_override_from_env();
}

std::string order_text(i64 p, int e) { return std::to_string(p) + "^" + std::to_string(e); }

struct SweepRow {
    ExtensionDescriptor desc;
    std::optional<Classification> result;
    std::string error;
};

json sweep_row_json(const SweepRow& r) {
    const auto& d = r.desc;
    json j{{"p", d.p}, {"n", d.n}, {"d", d.d}, {"a", d.a}, {"b", d.b}, {"m", d.m}};
    if (!r.result) {
        j["kappa"] = d.kappa ? json(*d.kappa) : json(nullptr);
        j["error"] = r.error;
        j["match"] = false;
        return j;
    }
    const Classification& c = *r.result;
    const auto& nd = c.normalized.desc;
    j["kappa"] = *nd.kappa;
    j["l"] = nd.l ? json(*nd.l) : json(nullptr);
    j["residual_char_is_p"] = nd.residual_char_is_p;
    j["procyclic"] = nd.procyclic;
    j["minus_one_is_norm"] = nd.minus_one_is_norm;
    j["case"] = case_name(c.case_id);
    j["zp_rank"] = c.measured.zp_rank;
    json tors = json::array();
    for (int e : c.measured.torsion_divisors) tors.push_back(order_text(d.p, e));
    j["torsion"] = tors;
    j["h0"] = order_text(d.p, c.measured.h0_exponent);
    j["h1"] = order_text(d.p, c.measured.h1_exponent);
    j["character"] = c.measured.character;
    j["splitting"] = c.splitting;
    j["match"] = c.match();
    return j;
}

std::string csv_cell(const json& v) {
    if (v.is_null()) return "";
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array()) {
        std::string s;
        for (const auto& x : v) s += (s.empty() ? "" : " ") + csv_cell(x);
        return s;
    }
    return v.dump();
}

void write_sweep(const std::string& path, const std::vector<json>& rows) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write " + path);
    const bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
    if (!csv) {
        out << json(rows).dump(2) << "\n";
        return;
    }
    const std::vector<std::string> cols{"p", "n", "d", "a", "b", "m", "kappa", "l", "residual_char_is_p", "procyclic",
                                        "minus_one_is_norm", "case", "zp_rank", "torsion", "h0", "h1", "character",
                                        "splitting", "match", "error"};
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << "\n";
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < cols.size(); ++i) {
            std::string cell = r.contains(cols[i]) ? csv_cell(r.at(cols[i])) : "";
            if (cell.find_first_of(",\"") != std::string::npos) cell = "\"" + cell + "\"";
            out << (i ? "," : "") << cell;
        }
        out << "\n";
    }
}

IdentityGrid identity_grid(const std::optional<std::string>& spec) {
    IdentityGrid g;
    if (!spec) return g;
    GridSpec gs = parse_grid(*spec);
    check_desk_limits(gs);
    g.spot_p5 = false;
    g.primes = values_or(gs, "p", {2, 3});
    auto ns = values_or(gs, "n", {2});
    auto as = values_or(gs, "a", {3});
    g.n_max = static_cast<int>(*std::max_element(ns.begin(), ns.end()));
    g.a_max = static_cast<int>(*std::max_element(as.begin(), as.end()));
    g.ls.clear();
    for (i64 l : values_or(gs, "l", {2, 3})) g.ls.push_back(static_cast<int>(l));
    return g;
}

// Classifier coherence records for the verify suite.
std::vector<IdentityCheck> classifier_checks(const IdentityGrid& g, int jobs) {
    GridSpec gs;
    gs["p"] = g.primes;
    gs["n"] = range(1, g.n_max);
    gs["a"] = range(0, g.a_max);
    gs["d"] = {1, 2};
    gs["res"] = {1, 0};
    gs["procyclic"] = {1, 0};
    gs["norm"] = {0, 1};
    gs["l"] = {3};
    std::vector<ExtensionDescriptor> descs = sweep_descriptors(gs);
    std::vector<IdentityCheck> out(descs.size());
    parallel_for(descs.size(), jobs, [&](std::size_t i) {
        const auto& d = descs[i];
        IdentityCheck& chk = out[i];
        chk.name = "classifier";
        chk.params.p = d.p;
        chk.params.n = d.n;
        chk.params.a = d.a;
        chk.params.b = d.b;
        chk.params.m = d.m;
        try {
            Classification c = classify(d);
            chk.params.kappa = c.normalized.desc.kappa;
            chk.params.l = c.normalized.desc.l;
            chk.params.variant = case_name(c.case_id) + (d.residual_char_is_p ? "" : ", residual≠p") +
                                 (d.d > 1 ? ", d=" + std::to_string(d.d) : "");
            chk.pass = c.match();
            for (const auto& s : c.diff) chk.detail += s + "; ";
            if (c.case7)
                for (const auto& s : c.case7->diff) chk.detail += "concrete " + s + "; ";
        } catch (const std::exception& e) {
            chk.pass = false;
            chk.detail = e.what();
        }
    });
    return out;
}

void print_validation(std::ostream& err, const ValidationError& e) {
    err << "error: invalid input\n";
    for (const auto& c : e.constraints()) err << "  violated: " << c << "\n";
}

}  // namespace

GridSpec parse_grid(const std::string& spec) {
    GridSpec g;
    for (const std::string& part : split(spec, ';')) {
        if (part.empty()) continue;
        const auto eq = part.find('=');
        if (eq == std::string::npos) throw FormatError("grid entry without '=': \"" + part + "\"");
        const std::string key = trim(part.substr(0, eq));
        if (!kGridKeys.count(key)) throw FormatError("unknown grid key: \"" + key + "\"");
        if (g.count(key)) throw FormatError("grid key given twice: \"" + key + "\"");
        std::vector<i64> vals;
        for (const std::string& item : split(part.substr(eq + 1), ',')) {
            const auto dots = item.find("..");
            if (dots == std::string::npos) {
                vals.push_back(parse_int(item, key));
                continue;
            }
            const i64 lo = parse_int(trim(item.substr(0, dots)), key);
            const i64 hi = parse_int(trim(item.substr(dots + 2)), key);
            if (hi < lo) throw FormatError("empty grid range for " + key);
            if (hi - lo > 64) throw FormatError("grid range too long for " + key);
            for (i64 x = lo; x <= hi; ++x) vals.push_back(x);
        }
        if (vals.empty()) throw FormatError("no values for grid key " + key);
        std::sort(vals.begin(), vals.end());
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        g[key] = vals;
    }
    if (!g.count("p")) throw FormatError("grid must set p");
    return g;
}

std::vector<ExtensionDescriptor> sweep_descriptors(const GridSpec& g) {
    check_desk_limits(g);
    std::vector<ExtensionDescriptor> out;
    for (i64 p : values_or(g, "p", {}))
        for (i64 n : values_or(g, "n", {1, 2}))
            for (i64 d : values_or(g, "d", {1}))
                for (i64 a : values_or(g, "a", range(0, 3)))
                    for (i64 b : values_or(g, "b", range(0, n)))
                        for (i64 m : values_or(g, "m", range(0, n)))
                            for (i64 res : values_or(g, "res", {1}))
                                for (i64 pc : values_or(g, "procyclic", {1}))
                                    for (i64 norm : values_or(g, "norm", {0})) {
                                        if (a + m > kMaxGridAPlusM) continue;
                                        std::vector<std::optional<i64>> kappas;
                                        if (g.count("kappa"))
                                            for (i64 k : g.at("kappa")) kappas.push_back(k);
                                        else
                                            kappas = {std::nullopt, 1 + p};
                                        std::vector<std::optional<int>> ls{std::nullopt};
                                        if (g.count("l")) {
                                            ls.clear();
                                            for (i64 l : g.at("l")) ls.push_back(static_cast<int>(l));
                                        }
                                        for (const auto& k : kappas)
                                            for (const auto& l : ls) {
                                                ExtensionDescriptor e;
                                                e.p = p;
                                                e.n = static_cast<int>(n);
                                                e.d = static_cast<int>(d);
                                                e.a = static_cast<int>(a);
                                                e.b = static_cast<int>(b);
                                                e.m = static_cast<int>(m);
                                                e.residual_char_is_p = res != 0;
                                                e.procyclic = pc != 0;
                                                e.minus_one_is_norm = norm != 0;
                                                e.kappa = k;
                                                e.l = l;
                                                if (descriptor_violations(e).empty()) out.push_back(e);
                                            }
                                    }
    // one row per normalized descriptor
    std::vector<ExtensionDescriptor> uniq;
    std::vector<ExtensionDescriptor> seen;
    for (const auto& e : out) {
        ExtensionDescriptor nd = validate_descriptor(e).desc;
        if (std::find(seen.begin(), seen.end(), nd) != seen.end()) continue;
        seen.push_back(nd);
        uniq.push_back(e);
    }
    return uniq;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Invariants and classification of modules over Z_p[C_{p^n}]", "zpg"};
    app.require_subcommand(1);
    app.fallthrough();
    std::optional<int> precision;
    app.add_option("--precision", precision, "K1 for stabilized invariants (K2 = K1 + 2); overrides ZPG_PRECISION")
        ->check(CLI::Range(2, 60));
    int jobs = 1;
    app.add_option("--jobs", jobs, "worker threads for verify and sweep")->check(CLI::Range(1, 256));

    auto* c_classify = app.add_subcommand("classify", "classify an extension descriptor");
    std::string desc_file;
    c_classify->add_option("--desc", desc_file, "descriptor JSON file")->required();

    auto* c_inv = app.add_subcommand("invariants", "measure the invariants of a presentation");
    std::string pres_file;
    c_inv->add_option("--pres", pres_file, "presentation JSON file")->required();

    auto* c_verify = app.add_subcommand("verify", "run the identity and invariant checks");
    std::optional<std::string> only, verify_grid, fault;
    c_verify->add_option("--only", only, "run one check family");
    c_verify->add_option("--grid", verify_grid, "grid spec, e.g. \"p=2,3;n=1..2;a=1..3\"");
    c_verify->add_option("--inject-fault", fault, "")->group("");

    auto* c_sweep = app.add_subcommand("sweep", "classify every descriptor of a grid");
    std::string sweep_grid, sweep_out;
    c_sweep->add_option("--grid", sweep_grid, "grid spec")->required();
    c_sweep->add_option("--out", sweep_out, "output file (.csv for CSV, JSON otherwise)")->required();

    auto* c_compare = app.add_subcommand("compare", "diff two invariant reports");
    std::string rep_a, rep_b;
    c_compare->add_option("A", rep_a, "first report JSON")->required();
    c_compare->add_option("B", rep_b, "second report JSON")->required();

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return kExitInput;
    }

    try {
        const std::optional<int> k1 = effective_precision(precision);

        if (*c_classify) {
            Classification c = classify(descriptor_from_json(read_json_file(desc_file)), k1);
            out << to_json(c).dump(2) << "\n";
            if (!c.match()) {
                err << "mismatch: expected and measured invariants differ\n";
                return kExitMismatch;
            }
            return kExitOk;
        }

        if (*c_inv) {
            Presentation pres = presentation_from_json(read_json_file(pres_file));
            PrecisionPair prec = k1 ? precision_from_k1(*k1) : default_precision(pres);
            out << to_json(measure(pres, prec)).dump(2) << "\n";
            return kExitOk;
        }

        if (*c_verify) {
            IdentityOptions opt;
            if (fault) {
                if (*fault != "wrong-sm") throw FormatError("unknown fault: " + *fault);
                opt.inject_wrong_sm = true;
            }
            IdentityGrid grid = identity_grid(verify_grid);
            std::vector<IdentityCheck> checks;
            const bool want_classifier = !only || *only == "classifier";
            if (!only || *only != "classifier") checks = run_identity_suite(grid, only, opt, jobs);
            if (want_classifier) {
                auto cc = classifier_checks(grid, jobs);
                checks.insert(checks.end(), cc.begin(), cc.end());
            }
            std::size_t passed = 0;
            const IdentityCheck* first_fail = nullptr;
            for (const auto& c : checks) {
                out << to_json(c).dump() << "\n";
                if (c.pass)
                    ++passed;
                else if (!first_fail)
                    first_fail = &c;
            }
            std::map<std::string, std::size_t> counts;
            for (const auto& c : checks) ++counts[c.name];
            json summary{{"total", checks.size()}, {"passed", passed}, {"failed", checks.size() - passed}, {"by_name", counts}};
            out << json{{"summary", summary}}.dump() << "\n";
            if (first_fail) {
                err << "verification failed: " << to_json(*first_fail).dump() << "\n";
                return kExitMismatch;
            }
            return kExitOk;
        }

        if (*c_sweep) {
            std::vector<ExtensionDescriptor> descs = sweep_descriptors(parse_grid(sweep_grid));
            std::vector<SweepRow> rows(descs.size());
            parallel_for(descs.size(), jobs, [&](std::size_t i) {
                rows[i].desc = descs[i];
                try {
                    rows[i].result = classify(descs[i], k1);
                } catch (const std::exception& e) {
                    rows[i].error = e.what();
                }
            });
            std::vector<json> js;
            for (const auto& r : rows) js.push_back(sweep_row_json(r));
            auto key = [](const json& j) {
                auto num = [&](const char* k) { return j.contains(k) && j.at(k).is_number() ? j.at(k).get<i64>() : i64{-1000}; };
                auto flag = [&](const char* k) { return j.contains(k) && j.at(k).is_boolean() && j.at(k).get<bool>() ? 1 : 0; };
                return std::vector<i64>{num("p"), num("n"), num("d"), num("a"), num("b"), num("m"), num("kappa"), num("l"),
                                        flag("residual_char_is_p"), flag("procyclic"), flag("minus_one_is_norm")};
            };
            std::stable_sort(js.begin(), js.end(), [&](const json& x, const json& y) { return key(x) < key(y); });
            write_sweep(sweep_out, js);
            const auto bad = std::count_if(js.begin(), js.end(), [](const json& j) { return !j.at("match").get<bool>(); });
            out << json{{"rows", js.size()}, {"flagged", bad}, {"out", sweep_out}}.dump() << "\n";
            return bad ? kExitMismatch : kExitOk;
        }

        if (*c_compare) {
            InvariantReport a = report_from_json(read_json_file(rep_a));
            InvariantReport b = report_from_json(read_json_file(rep_b));
            err << "note: invariant reports are not complete isomorphism invariants; an empty diff does not prove the "
                   "modules isomorphic\n";
            auto diff = report_diff(a, b);
            out << json{{"identical", diff.empty()}, {"diff", diff}}.dump(2) << "\n";
            return diff.empty() ? kExitOk : kExitMismatch;
        }
    } catch (const ValidationError& e) {
        print_validation(err, e);
        return kExitInput;
    } catch (const FormatError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const InstabilityError& e) {
        err << "mismatch: " << e.what() << "\n";
        return kExitMismatch;
    } catch (const PrecisionError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitMismatch;
    }
    return kExitInput;
}

}  // namespace zpg
