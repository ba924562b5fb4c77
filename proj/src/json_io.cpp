#include "symmarkov/json_io.hpp"

#include <fstream>
#include <sstream>

#include "symmarkov/util.hpp"

namespace symmarkov::io {

namespace {

void require_schema(const json& doc) {
    if (!doc.is_object()) throw Error("document must be a JSON object");
    if (!doc.contains("schema") || !doc["schema"].is_number_integer() ||
        doc["schema"].get<int>() != kSchemaVersion)
        throw Error("document must carry \"schema\": " + std::to_string(kSchemaVersion));
}

void reject_unknown_fields(const json& doc, std::initializer_list<const char*> known) {
    for (const auto& [key, value] : doc.items()) {
        bool ok = key == "schema";
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw Error("unknown field \"" + key + "\" in document");
    }
}

}  // namespace

json network_to_json(const FiniteSymmetricMeasure& m) {
    json doc;
    doc["schema"] = kSchemaVersion;
    doc["mu"] = std::vector<double>(m.mu().data(), m.mu().data() + m.size());
    json triplets = json::array();
    for (const Triplet& t : m.triplets()) triplets.push_back(json::array({t.i, t.j, t.w}));
    doc["triplets"] = std::move(triplets);
    doc["allow_diagonal"] = m.allow_diagonal();
    return doc;
}

FiniteSymmetricMeasure network_from_json(const json& doc, bool force) {
    require_schema(doc);
    reject_unknown_fields(doc, {"mu", "triplets", "allow_diagonal", "weights"});
    if (!doc.contains("mu") || !doc["mu"].is_array()) throw Error("network needs a \"mu\" array");
    std::vector<double> mu = doc["mu"].get<std::vector<double>>();
    bool allow_diagonal = doc.value("allow_diagonal", false);

    if (doc.contains("weights") && doc.contains("triplets"))
        throw Error("network carries both \"weights\" and \"triplets\"");
    if (doc.contains("weights")) {
        // Full-matrix form; the only way to ingest an asymmetric W, and
        // only behind force.
        auto rows = doc["weights"].get<std::vector<std::vector<double>>>();
        Eigen::MatrixXd W(rows.size(), rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != rows.size()) throw Error("weight matrix must be square");
            for (std::size_t j = 0; j < rows[i].size(); ++j) W(i, j) = rows[i][j];
        }
        FiniteSymmetricMeasure m = FiniteSymmetricMeasure::build_unchecked(std::move(mu), W, allow_diagonal);
        if (!force && !m.symmetric())
            throw AsymmetryError("weight matrix is not symmetric (use --force to ingest anyway)");
        return m;
    }

    if (!doc.contains("triplets") || !doc["triplets"].is_array())
        throw Error("network needs a \"triplets\" array");
    std::vector<Triplet> entries;
    for (const json& row : doc["triplets"]) {
        if (!row.is_array() || row.size() != 3) throw Error("triplets must be [i, j, w] rows");
        entries.push_back({row[0].get<int>(), row[1].get<int>(), row[2].get<double>()});
    }
    return FiniteSymmetricMeasure::build(std::move(mu), entries, allow_diagonal);
}

json states_to_json(const StateSet& states) {
    json doc;
    doc["schema"] = kSchemaVersion;
    doc["states"] = states;
    return doc;
}

StateSet states_from_json(const json& doc) {
    require_schema(doc);
    reject_unknown_fields(doc, {"states"});
    if (!doc.contains("states") || !doc["states"].is_array())
        throw Error("set document needs a \"states\" array");
    return doc["states"].get<StateSet>();
}

json boundary_to_json(const BoundaryData& b) {
    json doc;
    doc["schema"] = kSchemaVersion;
    doc["states"] = b.states;
    doc["values"] = std::vector<double>(b.values.data(), b.values.data() + b.values.size());
    return doc;
}

BoundaryData boundary_from_json(const json& doc) {
    require_schema(doc);
    reject_unknown_fields(doc, {"states", "values"});
    if (!doc.contains("states") || !doc.contains("values"))
        throw Error("boundary document needs \"states\" and \"values\"");
    BoundaryData b;
    b.states = doc["states"].get<StateSet>();
    std::vector<double> values = doc["values"].get<std::vector<double>>();
    if (values.size() != b.states.size())
        throw Error("boundary \"values\" must match \"states\" in length");
    b.values = Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<long>(values.size()));
    return b;
}

FactorData factor_from_json(const json& doc) {
    require_schema(doc);
    reject_unknown_fields(doc, {"q", "r"});
    FactorData f;
    if (doc.contains("q")) {
        std::vector<double> q = doc["q"].get<std::vector<double>>();
        f.q = Eigen::Map<Eigen::VectorXd>(q.data(), static_cast<long>(q.size()));
    }
    if (doc.contains("r")) {
        std::vector<Triplet> entries;
        for (const json& row : doc["r"]) {
            if (!row.is_array() || row.size() != 3) throw Error("\"r\" must hold [i, j, value] rows");
            entries.push_back({row[0].get<int>(), row[1].get<int>(), row[2].get<double>()});
        }
        f.r = std::move(entries);
    }
    if (!f.q.has_value() && !f.r.has_value())
        throw Error("factor document needs \"q\" or \"r\"");
    return f;
}

kernels::KernelSpec kernel_from_json(const json& doc) {
    require_schema(doc);
    reject_unknown_fields(doc, {"expr", "builtin", "params", "quadrature"});
    kernels::Quadrature quad;
    if (doc.contains("quadrature")) {
        const json& q = doc["quadrature"];
        std::string rule = q.value("rule", "gauss");
        if (rule == "gauss" || rule == "gauss-legendre")
            quad.rule = kernels::QuadRule::GaussLegendre;
        else if (rule == "midpoint")
            quad.rule = kernels::QuadRule::Midpoint;
        else
            throw Error("unknown quadrature rule \"" + rule + "\"");
        quad.points = q.value("points", 4);
    }
    if (doc.contains("expr")) return kernels::KernelSpec::expression(doc["expr"].get<std::string>(), quad);
    if (doc.contains("builtin")) {
        std::map<std::string, double> params;
        if (doc.contains("params"))
            for (const auto& [key, value] : doc["params"].items()) params[key] = value.get<double>();
        return kernels::KernelSpec::builtin(doc["builtin"].get<std::string>(), params, quad);
    }
    throw Error("kernel document needs \"expr\" or \"builtin\"");
}

kernels::KernelSpec kernel_from_text_or_json(const std::string& text) {
    std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{')
        return kernel_from_json(json::parse(text));
    if (text.size() > 5 && text.rfind(".json") == text.size() - 5)
        return kernel_from_json(load_json(text));
    return kernels::KernelSpec::expression(text);
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw Error("invalid JSON in " + path + ": " + e.what());
    }
    return doc;
}

void save_json(const std::string& path, const json& doc) { save_text(path, doc.dump(2) + "\n"); }

void save_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

std::string file_sha256(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    util::Sha256 h;
    char buf[65536];
    while (in) {
        in.read(buf, sizeof(buf));
        h.update(buf, static_cast<std::size_t>(in.gcount()));
    }
    return util::hex(h.digest());
}

json make_manifest(const std::string& command, const std::vector<std::string>& args,
                   const std::vector<std::string>& input_paths) {
    json manifest;
    manifest["schema"] = kSchemaVersion;
    manifest["tool"] = "symmarkov";
    manifest["version"] = kToolVersion;
    manifest["command"] = command;
    manifest["args"] = args;
    json inputs = json::object();
    for (const std::string& path : input_paths) inputs[path] = {{"sha256", file_sha256(path)}};
    manifest["inputs"] = std::move(inputs);
    return manifest;
}

}  // namespace symmarkov::io
