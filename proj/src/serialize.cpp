#include "qpr/serialize.hpp"

#include <fstream>
#include <sstream>

namespace qpr {

namespace {

u64 parse_u64(const Json& j) {
    if (!j.is_string()) throw SerializationError("coefficient must be a decimal string");
    const std::string s = j.get<std::string>();
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw SerializationError("bad coefficient string: " + s);
    return std::stoull(s);
}

i64 parse_i64(const Json& j) {
    if (j.is_number_integer()) return j.get<i64>();
    if (j.is_string()) return std::stoll(j.get<std::string>());
    throw SerializationError("expected integer");
}

Json scaled_payload(const Scaled& v, const char* type) {
    Json coeffs = Json::array();
    for (u64 c : v.c) coeffs.push_back(std::to_string(c));
    return Json{{"type", type}, {"scale_exp", v.e}, {"eff_prec", v.A}, {"coeffs", coeffs}};
}

Scaled scaled_from_payload(const QuotCtx& q, const Json& j, const char* type) {
    if (j.value("type", "") != type) throw SerializationError(std::string("expected payload type ") + type);
    Scaled v;
    v.e = parse_i64(j.at("scale_exp"));
    v.A = parse_i64(j.at("eff_prec"));
    const Json& coeffs = j.at("coeffs");
    if (!coeffs.is_array() || coeffs.size() != static_cast<size_t>(q.width()))
        throw SerializationError("coefficient array has the wrong length");
    v.c.resize(coeffs.size());
    for (size_t i = 0; i < coeffs.size(); ++i) {
        v.c[i] = parse_u64(coeffs[i]);
        if (v.c[i] >= q.gr.zq.pN) throw SerializationError("coefficient out of range");
    }
    return v;
}

} // namespace

Json profile_to_json(const PrecisionProfile& p) {
    return Json{{"p", p.p},       {"k", p.k},         {"N", p.N},
                {"alpha", p.alpha}, {"s", p.s},        {"n_max", p.n_max}};
}

PrecisionProfile profile_from_json(const Json& j) {
    PrecisionProfile p;
    p.p = j.at("p").get<u64>();
    p.k = j.at("k").get<int>();
    p.N = j.at("N").get<int>();
    p.alpha = j.at("alpha").get<int>();
    p.s = j.at("s").get<int>();
    p.n_max = j.value("n_max", p.k);
    p.validate();
    return p;
}

Json bdr_payload(const BdrElement& a) { return scaled_payload(a.raw(), "bdr"); }

BdrElement bdr_from_payload(const std::shared_ptr<const BdrContext>& ctx, const Json& j) {
    return BdrElement(ctx, scaled_from_payload(ctx->q, j, "bdr"));
}

Json cyclo_payload(const CycloElement& a) { return scaled_payload(a.raw(), "cyclo"); }

CycloElement cyclo_from_payload(const std::shared_ptr<const CycloContext>& ctx, const Json& j) {
    return CycloElement(ctx, scaled_from_payload(ctx->q, j, "cyclo"));
}

Json toric_payload(const ToricElement& a) {
    Json terms = Json::array();
    for (const auto& [key, coeff] : a.terms()) {
        Json e = Json::array();
        for (i64 c : key) e.push_back(std::to_string(c));
        terms.push_back(Json{{"e", e}, {"c", bdr_payload(coeff)}});
    }
    return Json{{"type", "toric"}, {"d", a.d()}, {"level", a.level()}, {"terms", terms}};
}

ToricElement toric_from_payload(const std::shared_ptr<const BdrContext>& ctx, const Json& j) {
    if (j.value("type", "") != "toric") throw SerializationError("expected payload type toric");
    int d = j.at("d").get<int>();
    int level = j.at("level").get<int>();
    std::map<std::vector<i64>, BdrElement> terms;
    for (const Json& t : j.at("terms")) {
        std::vector<i64> key;
        for (const Json& c : t.at("e")) key.push_back(parse_i64(c));
        terms.emplace(std::move(key), bdr_from_payload(ctx, t.at("c")));
    }
    return ToricElement(ctx, d, level, std::move(terms));
}

Json bdr_mat_payload(const BdrMat& m) {
    Json entries = Json::array();
    for (const auto& e : m.data()) entries.push_back(bdr_payload(e));
    return Json{{"type", "matrix"}, {"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

BdrMat bdr_mat_from_payload(const std::shared_ptr<const BdrContext>& ctx, const Json& j) {
    if (j.value("type", "") != "matrix") throw SerializationError("expected payload type matrix");
    int rows = j.at("rows").get<int>(), cols = j.at("cols").get<int>();
    const Json& entries = j.at("entries");
    if (static_cast<int>(entries.size()) != rows * cols)
        throw SerializationError("matrix entry count mismatch");
    BdrMat m(rows, cols, BdrElement::zero(ctx));
    for (int i = 0; i < rows * cols; ++i)
        m.data()[static_cast<size_t>(i)] = bdr_from_payload(ctx, entries[static_cast<size_t>(i)]);
    return m;
}

Json toric_mat_payload(const ToricMat& m) {
    Json entries = Json::array();
    for (const auto& e : m.data()) entries.push_back(toric_payload(e));
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

ToricMat toric_mat_from_payload(const std::shared_ptr<const BdrContext>& ctx, const Json& j) {
    int rows = j.at("rows").get<int>(), cols = j.at("cols").get<int>();
    const Json& entries = j.at("entries");
    if (static_cast<int>(entries.size()) != rows * cols)
        throw SerializationError("matrix entry count mismatch");
    ToricMat m(rows, cols, ToricElement());
    for (int i = 0; i < rows * cols; ++i)
        m.data()[static_cast<size_t>(i)] = toric_from_payload(ctx, entries[static_cast<size_t>(i)]);
    return m;
}

Json cocycle_payload(const Cocycle& c) {
    Json mats = Json::array();
    for (const auto& m : c.mats) mats.push_back(toric_mat_payload(m));
    return Json{{"type", "cocycle"}, {"d", c.d},          {"r", c.r},
                {"level", c.level},  {"twist", twist_name(c.twist)}, {"mats", mats}};
}

Cocycle cocycle_from_payload(const std::shared_ptr<const BdrContext>& ctx, const Json& j) {
    if (j.value("type", "") != "cocycle") throw SerializationError("expected payload type cocycle");
    Cocycle c;
    c.d = j.at("d").get<int>();
    c.r = j.at("r").get<int>();
    c.level = j.at("level").get<int>();
    c.twist = twist_from_name(j.at("twist").get<std::string>());
    for (const Json& m : j.at("mats")) c.mats.push_back(toric_mat_from_payload(ctx, m));
    if (static_cast<int>(c.mats.size()) != c.d) throw SerializationError("cocycle needs d matrices");
    return c;
}

Json connection_payload(const TConnection& n) {
    Json mats = Json::array();
    for (const auto& m : n.mats) mats.push_back(toric_mat_payload(m));
    return Json{{"type", "connection"}, {"d", n.d}, {"r", n.r}, {"frame", n.frame}, {"mats", mats}};
}

TConnection connection_from_payload(const std::shared_ptr<const BdrContext>& ctx, const Json& j) {
    if (j.value("type", "") != "connection")
        throw SerializationError("expected payload type connection");
    TConnection n;
    n.d = j.at("d").get<int>();
    n.r = j.at("r").get<int>();
    n.frame = j.value("frame", "standard");
    for (const Json& m : j.at("mats")) n.mats.push_back(toric_mat_from_payload(ctx, m));
    if (static_cast<int>(n.mats.size()) != n.d)
        throw SerializationError("connection needs d matrices");
    return n;
}

Json make_document(const PrecisionProfile& profile, Json payload) {
    return Json{{"schema_version", kSchemaVersion},
                {"profile", profile_to_json(profile)},
                {"payload", std::move(payload)}};
}

std::pair<std::shared_ptr<const BdrContext>, Json> open_document(const Json& doc) {
    if (!doc.contains("schema_version") || doc.at("schema_version").get<int>() != kSchemaVersion)
        throw SerializationError("unsupported schema_version");
    PrecisionProfile p = profile_from_json(doc.at("profile"));
    return {BdrContext::make(p), doc.at("payload")};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SerializationError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SerializationError("cannot write " + path);
    out << content;
}

} // namespace qpr
