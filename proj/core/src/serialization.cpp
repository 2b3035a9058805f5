#include "altsssom/serialization.hpp"

#include <fstream>

#include <json.hpp>

#include "altsssom/dataset.hpp"
#include "altsssom/errors.hpp"

namespace altsssom {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "alt-sssom-model";
constexpr int kVersion = 1;

json params_json(const Params& p) {
    return json{{"lp", p.lp},           {"beta", p.beta},   {"age_wins", p.age_wins},
                {"e_b", p.e_b},         {"e_n", p.e_n},     {"s", p.s},
                {"minwd", p.minwd},     {"epochs", p.epochs}, {"n_max", p.n_max},
                {"eps_act", p.eps_act}, {"var_floor", p.var_floor}};
}

template <typename T>
void read_field(const json& doc, const char* key, T& out) {
    if (auto it = doc.find(key); it != doc.end()) out = it->get<T>();
}

Params params_from(const json& doc, Params p) {
    if (!doc.is_object()) throw ParseError("parameters must be a JSON object", 0);
    static const char* known[] = {"lp", "beta", "age_wins", "e_b", "e_n", "s",
                                  "minwd", "epochs", "n_max", "eps_act", "var_floor"};
    for (const auto& [key, value] : doc.items()) {
        if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
            throw ParseError("unknown parameter '" + key + "'", 0);
        }
    }
    read_field(doc, "lp", p.lp);
    read_field(doc, "beta", p.beta);
    read_field(doc, "age_wins", p.age_wins);
    read_field(doc, "e_b", p.e_b);
    read_field(doc, "e_n", p.e_n);
    read_field(doc, "s", p.s);
    read_field(doc, "minwd", p.minwd);
    read_field(doc, "epochs", p.epochs);
    read_field(doc, "n_max", p.n_max);
    read_field(doc, "eps_act", p.eps_act);
    read_field(doc, "var_floor", p.var_floor);
    return p;
}

json parse_json(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(), 0);
    }
}

}  // namespace

std::string model_to_json(const SomModel& model) {
    json nodes = json::array();
    for (const Node& n : model.nodes()) {
        nodes.push_back({{"id", to_underlying(n.id)},
                         {"center", n.center},
                         {"relevance", n.relevance},
                         {"delta", n.delta},
                         {"delta_hat", n.delta_hat},
                         {"t", n.t},
                         {"wins", n.wins},
                         {"class", n.class_label ? json(*n.class_label) : json(nullptr)}});
    }
    json edges = json::array();
    for (auto [a, b] : model.graph().edges()) edges.push_back({to_underlying(a), to_underlying(b)});

    json doc{{"format", kFormat},
             {"version", kVersion},
             {"dim", model.dim()},
             {"phase", to_string(model.phase())},
             {"nwins", model.nwins()},
             {"next_id", model.next_id()},
             {"params", params_json(model.params())},
             {"class_names", model.class_names},
             {"nodes", std::move(nodes)},
             {"edges", std::move(edges)}};
    return doc.dump(1) + "\n";
}

SomModel model_from_json(std::string_view text) {
    const json doc = parse_json(text);
    try {
        if (!doc.is_object() || doc.value("format", "") != kFormat) {
            throw ParseError("not an alt-sssom model document", 0);
        }
        if (doc.at("version").get<int>() != kVersion) {
            throw ParseError("unsupported model version " + doc.at("version").dump(), 0);
        }
        const auto dim = doc.at("dim").get<std::size_t>();
        const auto phase = phase_from_string(doc.at("phase").get<std::string>());
        if (!phase) throw ParseError("unknown phase '" + doc.at("phase").get<std::string>() + "'", 0);
        const Params params = params_from(doc.at("params"), Params{});

        std::vector<Node> nodes;
        for (const json& jn : doc.at("nodes")) {
            Node n;
            n.id = NodeId{jn.at("id").get<std::uint32_t>()};
            n.center = jn.at("center").get<std::vector<double>>();
            n.relevance = jn.at("relevance").get<std::vector<double>>();
            n.delta = jn.at("delta").get<std::vector<double>>();
            n.delta_hat = jn.at("delta_hat").get<std::vector<double>>();
            n.t = jn.at("t").get<std::uint64_t>();
            n.wins = jn.at("wins").get<double>();
            if (const json& c = jn.at("class"); !c.is_null()) n.class_label = c.get<ClassId>();
            nodes.push_back(std::move(n));
        }
        Graph graph;
        for (const json& e : doc.at("edges")) {
            if (!e.is_array() || e.size() != 2) throw ParseError("edge must be a pair of node ids", 0);
            graph.connect(NodeId{e[0].get<std::uint32_t>()}, NodeId{e[1].get<std::uint32_t>()});
        }
        SomModel model = model_from_parts(dim, params, *phase, doc.at("nwins").get<std::uint64_t>(),
                                          doc.at("next_id").get<std::uint32_t>(), std::move(nodes),
                                          std::move(graph));
        model.class_names = doc.value("class_names", std::vector<std::string>{});
        return model;
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed model document: ") + e.what(), 0);
    }
}

void save_model(const SomModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << model_to_json(model);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
}

SomModel load_model(const std::filesystem::path& path) {
    return model_from_json(read_text_file(path));
}

std::string params_to_json(const Params& params) {
    return params_json(params).dump(1) + "\n";
}

Params params_from_json(std::string_view text, const Params& base) {
    const json doc = parse_json(text);
    try {
        return params_from(doc, base);
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed parameter document: ") + e.what(), 0);
    }
}

}  // namespace altsssom
