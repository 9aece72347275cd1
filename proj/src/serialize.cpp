#include "bk/serialize.hpp"

#include <fstream>

namespace bk {

namespace {

Json group_to_json(const GroupTable& g) {
    return Json{{"names", g.names}, {"table", g.mul}};
}

GroupTable group_from_json(const Json& j) {
    GroupTable g;
    g.names = j.at("names").get<std::vector<std::string>>();
    g.mul = j.at("table").get<std::vector<std::vector<int>>>();
    g.verify();
    return g;
}

Json mask_list_to_labels(const GroundSet& ground, const std::vector<Mask>& masks) {
    Json out = Json::array();
    for (Mask m : masks) out.push_back(ground.labels_of(m));
    return out;
}

std::vector<Mask> labels_to_masks(const GroundSet& ground, const Json& j) {
    std::vector<Mask> out;
    for (const auto& item : j) out.push_back(ground.mask_of(item.get<std::vector<std::string>>()));
    return out;
}

// All bases of a matroid, for serializing derived matroids exactly.
std::vector<Mask> all_bases(const Matroid& m) {
    std::vector<Mask> out;
    int r = m.rank();
    if (r == 0) return out;
    Mask limit = m.everything();
    for (Mask s = first_subset_of_size(r); s != 0; s = next_subset_same_size(s, limit))
        if (m.rank(s) == r) out.push_back(s);
    return out;
}

}  // namespace

Json matroid_to_json(const Matroid& m) {
    const Provenance& p = m.provenance();
    Json j;
    j["labels"] = m.ground().labels();
    Json data;
    switch (p.kind) {
        case Provenance::Kind::Uniform:
            data["r"] = p.uniform_r;
            data["n"] = p.uniform_n;
            break;
        case Provenance::Kind::Graphic: {
            data["vertices"] = p.graphic_vertices;
            Json edges = Json::array();
            for (auto [u, v] : p.graphic_edges) edges.push_back(Json::array({u, v}));
            data["edges"] = std::move(edges);
            break;
        }
        case Provenance::Kind::Linear:
            data["prime"] = p.prime;
            data["columns"] = p.columns;
            break;
        case Provenance::Kind::Projective:
            data["d"] = p.pg_dim;
            data["p"] = p.prime;
            break;
        case Provenance::Kind::Dowling:
            data["d"] = p.dowling_d;
            data["group"] = group_to_json(p.group);
            break;
        case Provenance::Kind::Bases:
            data["bases"] = mask_list_to_labels(m.ground(), p.bases);
            break;
        case Provenance::Kind::Circuits:
            data["circuits"] = mask_list_to_labels(m.ground(), p.circuits);
            break;
        case Provenance::Kind::ParallelConnection:
            data["m1"] = matroid_to_json(*p.pc_left);
            data["m2"] = matroid_to_json(*p.pc_right);
            data["p1"] = p.pc_left_point;
            data["p2"] = p.pc_right_point;
            break;
        case Provenance::Kind::Derived:
            data["bases"] = mask_list_to_labels(m.ground(), all_bases(m));
            if (!p.derived_from.empty()) data["derived_from"] = p.derived_from;
            break;
    }
    j["kind"] = p.kind == Provenance::Kind::Derived ? "bases" : Provenance::kind_name(p.kind);
    j["data"] = std::move(data);
    return j;
}

Matroid matroid_from_json(const Json& j) {
    std::string kind = j.at("kind").get<std::string>();
    const Json& data = j.at("data");
    std::vector<std::string> labels;
    if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
    if (kind == "uniform") {
        Matroid m = Matroid::uniform(data.at("r").get<int>(), data.at("n").get<int>());
        return m;
    }
    if (kind == "graphic") {
        std::vector<std::pair<int, int>> edges;
        for (const auto& e : data.at("edges"))
            edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
        return Matroid::graphic(data.at("vertices").get<int>(), std::move(edges), labels);
    }
    if (kind == "linear") {
        return Matroid::linear(data.at("prime").get<int>(),
                               data.at("columns").get<std::vector<std::vector<int>>>(), labels);
    }
    if (kind == "projective") {
        return Matroid::projective_geometry(data.at("d").get<int>(), data.at("p").get<int>());
    }
    if (kind == "dowling") {
        return Matroid::dowling(data.at("d").get<int>(), group_from_json(data.at("group")));
    }
    if (kind == "bases") {
        GroundSet g(labels);
        return Matroid::from_bases(labels, labels_to_masks(g, data.at("bases")));
    }
    if (kind == "circuits") {
        GroundSet g(labels);
        return Matroid::from_circuits(labels, labels_to_masks(g, data.at("circuits")));
    }
    if (kind == "parallel_connection") {
        Matroid m1 = matroid_from_json(data.at("m1"));
        Matroid m2 = matroid_from_json(data.at("m2"));
        return Matroid::parallel_connection(m1, m2, data.at("p1").get<std::string>(),
                                            data.at("p2").get<std::string>());
    }
    throw std::invalid_argument("unknown matroid kind: " + kind);
}

Json fan_to_json(const Fan& fan) {
    Json j;
    Json rays = Json::array();
    for (const Ray& r : fan.rays()) {
        Json jr;
        jr["coords"] = r.dir.coords();
        if (r.flat) jr["flat"] = fan.base().ground().labels_of(*r.flat);
        else if (r.factor_flat && fan.factors()) {
            const auto& f = r.factor == 0 ? fan.factors()->first : fan.factors()->second;
            jr["flat"] = f.ground().labels_of(*r.factor_flat);
            jr["factor"] = r.factor;
        } else jr["flat"] = nullptr;
        jr["rank"] = r.flat_rank >= 0 ? Json(r.flat_rank) : Json(nullptr);
        rays.push_back(std::move(jr));
    }
    j["rays"] = std::move(rays);
    Json cones = Json::array();
    for (int k = 1; k <= fan.dim(); ++k)
        for (const auto& c : fan.cones_of_dim(k)) cones.push_back(c);
    j["cones"] = std::move(cones);
    j["structure"] = fan.structure();
    return j;
}

Json weight_to_json(const MinkowskiWeight& w) {
    return Json{{"k", w.k}, {"cones", w.cones}, {"weights", w.weights}};
}

MinkowskiWeight weight_from_json(const Json& j) {
    MinkowskiWeight w;
    w.k = j.at("k").get<int>();
    w.cones = j.at("cones").get<std::vector<std::vector<int>>>();
    w.weights = j.at("weights").get<std::vector<long long>>();
    if (w.cones.size() != w.weights.size())
        throw std::invalid_argument("weight file: cones and weights misaligned");
    return w;
}

Json map_to_json(const LatticeMap& m) {
    Json j;
    j["source_labels"] = m.src_labels;
    j["target_labels"] = m.tgt_labels;
    j["matrix"] = m.matrix;
    j["source_blocks"] = m.src_blocks;
    j["target_blocks"] = m.tgt_blocks;
    if (auto c = m.ones_multiplier()) j["ones_multiplier"] = *c;
    return j;
}

LatticeMap map_from_json(const Json& j) {
    LatticeMap m;
    m.src_labels = j.at("source_labels").get<std::vector<std::string>>();
    m.tgt_labels = j.at("target_labels").get<std::vector<std::string>>();
    m.matrix = j.at("matrix").get<IntMat>();
    if (j.contains("source_blocks"))
        m.src_blocks = j.at("source_blocks").get<std::vector<std::pair<int, int>>>();
    else m.src_blocks = {{0, static_cast<int>(m.src_labels.size())}};
    if (j.contains("target_blocks"))
        m.tgt_blocks = j.at("target_blocks").get<std::vector<std::pair<int, int>>>();
    else m.tgt_blocks = {{0, static_cast<int>(m.tgt_labels.size())}};
    if (m.matrix.size() != m.tgt_labels.size())
        throw std::invalid_argument("map file: matrix row count mismatch");
    for (const auto& row : m.matrix)
        if (row.size() != m.src_labels.size())
            throw std::invalid_argument("map file: matrix column count mismatch");
    return m;
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    Json j;
    in >> j;
    return j;
}

void save_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write file: " + path);
    out << j.dump(2) << "\n";
}

}  // namespace bk
