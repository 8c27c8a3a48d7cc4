#include "zpg/serialize.hpp"

#include <fstream>
#include <sstream>

namespace zpg {

namespace {

json order_json(i64 p, int e) { return json{{"p", p}, {"exponent", e}}; }

template <class T>
T field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field \"") + key + "\"");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw FormatError(std::string("field \"") + key + "\" has the wrong type");
    }
}

template <class T>
std::optional<T> opt_field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return field<T>(j, key);
}

int order_exponent(const json& j, i64 p, const char* what) {
    if (field<i64>(j, "p") != p) throw FormatError(std::string(what) + ": prime differs from the report prime");
    return field<int>(j, "exponent");
}

json params_json(const IdentityParams& q) {
    json j{{"p", q.p}, {"n", q.n}};
    if (q.a) j["a"] = *q.a;
    if (q.b) j["b"] = *q.b;
    if (q.m) j["m"] = *q.m;
    if (q.c) j["c"] = *q.c;
    if (q.kappa) j["kappa"] = *q.kappa;
    if (q.l) j["l"] = *q.l;
    if (q.variant) j["variant"] = *q.variant;
    return j;
}

}  // namespace

json to_json(const RingContext& ctx) {
    return json{{"p", ctx.p}, {"n", ctx.n}, {"K", ctx.K}, {"mode", ctx.mode == CoeffMode::Exact ? "exact" : "truncated"}};
}

json to_json(const GroupRingElem& u) { return json{{"ctx", to_json(u.ctx())}, {"coeffs", u.coeffs()}}; }

json to_json(const Presentation& pres) {
    json rows = json::array();
    for (const Row& r : pres.relations()) {
        json row = json::array();
        for (const auto& e : r) row.push_back(e.coeffs());
        rows.push_back(row);
    }
    return json{{"ctx", json{{"p", pres.ctx().p}, {"n", pres.ctx().n}}},
                {"gen_names", pres.gen_names()},
                {"rows", rows},
                {"invariant_gens", pres.invariant_gens()}};
}

json to_json(const InvariantReport& r) {
    json tors = json::array();
    for (int e : r.torsion_divisors) tors.push_back(order_json(r.p, e));
    return json{{"p", r.p},
                {"zp_rank", r.zp_rank},
                {"torsion_divisors", tors},
                {"h0_order", order_json(r.p, r.h0_exponent)},
                {"h1_order", order_json(r.p, r.h1_exponent)},
                {"character", r.character},
                {"torsion_gen_order", r.torsion_gen_exponent ? order_json(r.p, *r.torsion_gen_exponent) : json(nullptr)},
                {"stabilized_at", json::array({r.K1, r.K2})}};
}

json to_json(const ExtensionDescriptor& d) {
    json j{{"p", d.p}, {"n", d.n}, {"residual_char_is_p", d.residual_char_is_p}, {"d", d.d},
           {"a", d.a}, {"b", d.b}, {"m", d.m}};
    j["kappa"] = d.kappa ? json(*d.kappa) : json(nullptr);
    j["procyclic"] = d.procyclic;
    j["l"] = d.l ? json(*d.l) : json(nullptr);
    j["minus_one_is_norm"] = d.minus_one_is_norm;
    return j;
}

json to_json(const ConcreteModel& m) {
    return json{{"p", m.p},         {"n", m.n},         {"K", m.K},
                {"torsion_modulus", order_json(m.p, m.torsion_exponent)},
                {"delta", m.delta}, {"k_sigma", m.k_sigma}};
}

json to_json(const Classification& c) {
    const auto& nd = c.normalized;
    json j{{"case", case_name(c.case_id)},
           {"descriptor", to_json(nd.desc)},
           {"derived", json{{"k_sigma", nd.k_sigma},
                            {"mu_F_order", order_json(nd.desc.p, nd.mu_F_exponent)},
                            {"mu_K_cap_norms_order", order_json(nd.desc.p, nd.norm_exponent)},
                            {"special_case_1", nd.special_case_1},
                            {"special_case_2", nd.special_case_2}}},
           {"presentation", to_json(c.presentation)},
           {"expected", to_json(c.expected)},
           {"measured", to_json(c.measured)},
           {"splitting", c.splitting},
           {"match", c.match()},
           {"diff", c.diff}};
    if (c.case7) {
        j["concrete_check"] = json{{"model", to_json(c.case7->model)},
                                   {"report", to_json(c.case7->concrete)},
                                   {"iterate_identity", c.case7->iterate_identity},
                                   {"diff", c.case7->diff},
                                   {"match", c.case7->match()}};
    }
    return j;
}

json to_json(const IdentityCheck& c) {
    json ws = json::array();
    for (const auto& w : c.witnesses) {
        json lambda = json::array();
        for (const auto& l : w.witness.lambda) lambda.push_back(to_text(l));
        ws.push_back(json{{"label", w.label}, {"K", w.witness.K}, {"lambda", lambda}, {"verified", w.verified}});
    }
    json j{{"name", c.name}, {"params", params_json(c.params)}, {"pass", c.pass}};
    if (!ws.empty()) j["witnesses"] = ws;
    if (!c.detail.empty()) j["detail"] = c.detail;
    return j;
}

RingContext context_from_json(const json& j) {
    const i64 p = field<i64>(j, "p");
    const int n = field<int>(j, "n");
    const std::string mode = opt_field<std::string>(j, "mode").value_or("exact");
    try {
        if (mode == "exact") return RingContext::exact(p, n);
        if (mode == "truncated") return RingContext::truncated(p, n, field<int>(j, "K"));
    } catch (const FormatError&) {
        throw;
    } catch (const std::exception& e) {
        throw FormatError(e.what());
    }
    throw FormatError("ctx.mode must be \"exact\" or \"truncated\"");
}

GroupRingElem element_from_json(const json& j) {
    RingContext ctx = context_from_json(field<json>(j, "ctx"));
    auto coeffs = field<std::vector<i64>>(j, "coeffs");
    if (static_cast<i64>(coeffs.size()) != ctx.order()) throw FormatError("coeffs must list p^n entries");
    return gre_make(ctx, coeffs);
}

Presentation presentation_from_json(const json& j) {
    RingContext ctx = context_from_json(field<json>(j, "ctx"));
    if (ctx.mode != CoeffMode::Exact) throw FormatError("presentations use exact coefficients");
    auto names = field<std::vector<std::string>>(j, "gen_names");
    auto inv = opt_field<std::vector<std::size_t>>(j, "invariant_gens").value_or(std::vector<std::size_t>{});
    std::vector<Row> rows;
    for (const auto& jr : field<json>(j, "rows")) {
        if (!jr.is_array() || jr.size() != names.size()) throw FormatError("each row needs one entry per generator");
        Row r;
        for (const auto& je : jr) {
            if (je.is_array()) {
                auto c = je.get<std::vector<i64>>();
                if (static_cast<i64>(c.size()) != ctx.order()) throw FormatError("row entries must list p^n coefficients");
                r.push_back(gre_make(ctx, c));
            } else if (je.is_string()) {
                r.push_back(from_text(ctx, je.get<std::string>()));
            } else {
                throw FormatError("row entries are coefficient arrays or text elements");
            }
        }
        rows.push_back(std::move(r));
    }
    try {
        return pres_make(ctx, names, rows, inv);
    } catch (const std::exception& e) {
        throw FormatError(e.what());
    }
}

InvariantReport report_from_json(const json& j) {
    InvariantReport r;
    r.p = field<i64>(j, "p");
    r.zp_rank = field<std::size_t>(j, "zp_rank");
    for (const auto& t : field<json>(j, "torsion_divisors")) r.torsion_divisors.push_back(order_exponent(t, r.p, "torsion_divisors"));
    r.h0_exponent = order_exponent(field<json>(j, "h0_order"), r.p, "h0_order");
    r.h1_exponent = order_exponent(field<json>(j, "h1_order"), r.p, "h1_order");
    r.character = field<std::vector<int>>(j, "character");
    if (j.contains("torsion_gen_order") && !j.at("torsion_gen_order").is_null())
        r.torsion_gen_exponent = order_exponent(j.at("torsion_gen_order"), r.p, "torsion_gen_order");
    if (auto st = opt_field<std::vector<int>>(j, "stabilized_at")) {
        if (st->size() != 2) throw FormatError("stabilized_at must be [K1, K2]");
        r.K1 = (*st)[0];
        r.K2 = (*st)[1];
    }
    return r;
}

ExtensionDescriptor descriptor_from_json(const json& j) {
    ExtensionDescriptor d;
    d.p = field<i64>(j, "p");
    d.n = field<int>(j, "n");
    d.residual_char_is_p = field<bool>(j, "residual_char_is_p");
    d.d = opt_field<int>(j, "d").value_or(1);
    d.a = field<int>(j, "a");
    d.b = field<int>(j, "b");
    d.m = field<int>(j, "m");
    d.kappa = opt_field<i64>(j, "kappa");
    d.procyclic = opt_field<bool>(j, "procyclic").value_or(false);
    d.l = opt_field<int>(j, "l");
    d.minus_one_is_norm = opt_field<bool>(j, "minus_one_is_norm").value_or(false);
    return d;
}

json parse_json_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("malformed JSON: ") + e.what());
    }
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str());
}

}  // namespace zpg
