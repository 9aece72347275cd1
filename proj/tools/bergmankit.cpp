// bergmankit: build matroids, fan structures on Bergman fans, invariants,
// Chow degrees, CSM weights, and lattice-linear maps from the command line.
//
// Exit codes: 0 success, 1 input error, 2 verification failure.

#include <CLI11.hpp>

#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>

#include "bk/chow.hpp"
#include "bk/csm.hpp"
#include "bk/invariants.hpp"
#include "bk/maps.hpp"
#include "bk/serialize.hpp"

using namespace bk;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitVerification = 2;

struct Options {
    std::string format = "table";
    std::string output;
};

bool structured(const Options& o) { return o.format == "structured"; }

// -o always receives the structured artifact; --format only switches what is
// printed on stdout.
void emit(const Options& o, const Json& j, const std::string& table) {
    if (!o.output.empty()) save_json_file(o.output, j);
    if (structured(o)) std::cout << j.dump(2) << "\n";
    else std::cout << table;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) { out.push_back(cur); cur.clear(); }
        else cur += c;
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

Matroid load_matroid(const std::string& path) { return matroid_from_json(load_json_file(path)); }

Mask parse_flat(const Matroid& m, const std::string& spec) {
    Mask f = 0;
    for (const auto& label : split(spec, ',')) f |= bit(m.ground().index(label));
    return f;
}

// "F1^d1;F2^d2" with each F a comma-joined label list
FlagMonomial parse_monomial(const Matroid& m, const std::string& spec) {
    FlagMonomial mono;
    if (spec.empty() || spec == "1") return mono;
    for (const auto& part : split(spec, ';')) {
        auto caret = part.find('^');
        std::string flat_spec = caret == std::string::npos ? part : part.substr(0, caret);
        int exp = caret == std::string::npos ? 1 : std::stoi(part.substr(caret + 1));
        mono.flats.push_back(parse_flat(m, flat_spec));
        mono.exponents.push_back(exp);
    }
    return mono;
}

// comma-separated integers or fractions a/b; fractions are cleared by scaling
IntVec parse_point(const std::string& spec, int n) {
    auto parts = split(spec, ',');
    if (static_cast<int>(parts.size()) != n)
        throw std::invalid_argument("point needs " + std::to_string(n) + " coordinates");
    std::vector<long long> num(parts.size()), den(parts.size(), 1);
    for (std::size_t i = 0; i < parts.size(); ++i) {
        auto slash = parts[i].find('/');
        num[i] = std::stoll(parts[i].substr(0, slash));
        if (slash != std::string::npos) den[i] = std::stoll(parts[i].substr(slash + 1));
        if (den[i] <= 0) throw std::invalid_argument("denominators must be positive");
    }
    long long scale = 1;
    for (long long d : den) scale = std::lcm(scale, d);
    IntVec out(parts.size());
    for (std::size_t i = 0; i < parts.size(); ++i) out[i] = num[i] * (scale / den[i]);
    return out;
}

Fan build_fan(const Matroid& m, const std::string& structure) {
    if (structure == "fine") return fine_fan(m);
    if (structure == "nested") return nested_fan(m);
    if (structure == "coarse") return coarse_fan(m);
    throw std::invalid_argument("unknown fan structure: " + structure);
}

GroupTable parse_group(const std::string& spec) {
    if (spec == "trivial") return GroupTable::trivial();
    if (spec.size() > 1 && (spec[0] == 'z' || spec[0] == 'Z'))
        return GroupTable::cyclic(std::stoi(spec.substr(1)));
    if (!spec.empty() && spec[0] == '@') {
        Json j = load_json_file(spec.substr(1));
        GroupTable g;
        g.names = j.at("names").get<std::vector<std::string>>();
        g.mul = j.at("table").get<std::vector<std::vector<int>>>();
        g.verify();
        return g;
    }
    throw std::invalid_argument("group must be 'trivial', 'zN', or '@table.json'");
}

std::string flat_to_string(const Matroid& m, Mask f) {
    std::string out = "{";
    bool first = true;
    for (int i : elements_of(f)) {
        if (!first) out += ",";
        out += m.ground().label(i);
        first = false;
    }
    return out + "}";
}

// ---------------------------------------------------------------------------

int cmd_matroid_build(const std::string& kind, int r, int n, int vertices,
                      const std::string& edges, int prime, const std::string& columns,
                      const std::string& group, const std::string& labels_spec,
                      const std::string& sets, const std::string& m1_path,
                      const std::string& m2_path, const std::string& p1, const std::string& p2,
                      const Options& opt) {
    Matroid m = [&]() -> Matroid {
        if (kind == "uniform") return Matroid::uniform(r, n);
        if (kind == "graphic") {
            std::vector<std::pair<int, int>> e;
            for (const auto& tok : split(edges, ',')) {
                auto uv = split(tok, '-');
                if (uv.size() != 2) throw std::invalid_argument("edges look like '1-2,1-3,...'");
                e.push_back({std::stoi(uv[0]), std::stoi(uv[1])});
            }
            return Matroid::graphic(vertices, e);
        }
        if (kind == "linear") {
            std::vector<std::vector<int>> cols;
            for (const auto& c : split(columns, ';')) {
                std::vector<int> col;
                for (const auto& x : split(c, ',')) col.push_back(std::stoi(x));
                cols.push_back(col);
            }
            return Matroid::linear(prime, cols);
        }
        if (kind == "projective") return Matroid::projective_geometry(n, prime);
        if (kind == "dowling") return Matroid::dowling(n, parse_group(group));
        if (kind == "bases" || kind == "circuits") {
            std::vector<std::string> labels = split(labels_spec, ',');
            GroundSet g(labels);
            std::vector<Mask> masks;
            for (const auto& s : split(sets, ';')) masks.push_back(g.mask_of(split(s, ',')));
            return kind == "bases" ? Matroid::from_bases(labels, masks)
                                   : Matroid::from_circuits(labels, masks);
        }
        if (kind == "parallel") {
            Matroid a = load_matroid(m1_path), b = load_matroid(m2_path);
            return Matroid::parallel_connection(a, b, p1, p2);
        }
        throw std::invalid_argument("unknown matroid kind: " + kind);
    }();
    Json j = matroid_to_json(m);
    if (opt.output.empty()) std::cout << j.dump(2) << "\n";
    else save_json_file(opt.output, j);
    return kExitOk;
}

int cmd_matroid_describe(const std::string& path, const Options& opt) {
    Matroid m = load_matroid(path);
    Json j;
    j["labels"] = m.ground().labels();
    j["kind"] = Provenance::kind_name(m.provenance().kind);
    j["rank"] = m.rank();
    j["simple"] = m.is_simple();
    j["loop_free"] = m.is_loop_free();
    j["connected"] = m.is_connected();
    j["totally_disconnected"] = m.is_totally_disconnected();
    Json flats = Json::array();
    for (int k = 0; k <= m.rank(); ++k) flats.push_back(m.flats_of_rank(k).size());
    j["flats_per_rank"] = flats;
    j["circuit_count"] = m.circuits().size();
    Json comps = Json::array();
    for (Mask c : m.connected_components()) comps.push_back(m.ground().labels_of(c));
    j["components"] = comps;

    std::ostringstream t;
    t << "matroid on " << m.n() << " elements, rank " << m.rank() << " (kind "
      << Provenance::kind_name(m.provenance().kind) << ")\n";
    t << "  simple: " << (m.is_simple() ? "yes" : "no")
      << "   connected: " << (m.is_connected() ? "yes" : "no")
      << "   totally disconnected: " << (m.is_totally_disconnected() ? "yes" : "no") << "\n";
    t << "  flats per rank:";
    for (int k = 0; k <= m.rank(); ++k) t << " " << m.flats_of_rank(k).size();
    t << "\n  circuits: " << m.circuits().size() << "\n";
    emit(opt, j, t.str());
    return kExitOk;
}

int cmd_matroid_simplify(const std::string& path, const Options& opt) {
    Matroid m = load_matroid(path);
    SimplifyResult s = m.simplify();
    // -o gets a loadable matroid file; the quotient goes to stdout
    if (!opt.output.empty()) save_json_file(opt.output, matroid_to_json(s.matroid));
    Json j;
    j["matroid"] = matroid_to_json(s.matroid);
    j["label_quotient"] = s.label_quotient;
    std::ostringstream t;
    t << "simplification has " << s.matroid.n() << " elements\n";
    for (auto& [from, to] : s.label_quotient)
        if (from != to) t << "  " << from << " -> " << to << "\n";
    if (structured(opt)) std::cout << j.dump(2) << "\n";
    else std::cout << t.str();
    return kExitOk;
}

int cmd_matroid_minor(const std::string& path, const std::string& restrict_spec,
                      const std::string& delete_spec, const std::string& contract_spec,
                      int truncate_k, const Options& opt) {
    Matroid m = load_matroid(path);
    Matroid out = m;
    if (!restrict_spec.empty()) out = out.restrict_to(parse_flat(out, restrict_spec));
    if (!delete_spec.empty()) out = out.remove(parse_flat(out, delete_spec));
    if (!contract_spec.empty()) out = out.contract(parse_flat(out, contract_spec));
    if (truncate_k > 0) out = out.truncate(truncate_k);
    Json j = matroid_to_json(out);
    if (opt.output.empty()) std::cout << j.dump(2) << "\n";
    else save_json_file(opt.output, j);
    return kExitOk;
}

int cmd_fan_build(const std::string& path, const std::string& structure, const Options& opt) {
    Matroid m = load_matroid(path);
    Fan fan = build_fan(m, structure);
    Json j = fan_to_json(fan);
    std::ostringstream t;
    t << fan.structure() << " fan: " << fan.rays().size() << " rays, "
      << fan.maximal_cones().size() << " maximal cones of dimension " << fan.dim() << "\n";
    emit(opt, j, t.str());
    return kExitOk;
}

int cmd_fan_rays(const std::string& path, const std::string& structure, const Options& opt) {
    Matroid m = load_matroid(path);
    Fan fan = build_fan(m, structure);
    Json j = fan_to_json(fan)["rays"];
    std::ostringstream t;
    for (std::size_t i = 0; i < fan.rays().size(); ++i) {
        const Ray& r = fan.rays()[i];
        t << i << ": (";
        for (int c = 0; c < m.n(); ++c) t << (c ? "," : "") << r.dir.coords()[c];
        t << ")";
        if (r.flat) t << "  flat " << flat_to_string(m, *r.flat) << " rank " << r.flat_rank;
        if (r.factor >= 0) t << "  factor " << r.factor << " rank " << r.flat_rank;
        t << "\n";
    }
    auto prof = ray_rank_profile(fan);
    for (std::size_t f = 0; f < prof.per_factor.size(); ++f) {
        t << (prof.per_factor.size() > 1 ? "factor " + std::to_string(f) + " " : "")
          << "rank profile:";
        for (auto& [rk, cnt] : prof.per_factor[f]) t << " " << rk << ":" << cnt;
        t << "\n";
    }
    emit(opt, j, t.str());
    return kExitOk;
}

int cmd_fan_cones(const std::string& path, const std::string& structure, const Options& opt) {
    Matroid m = load_matroid(path);
    Fan fan = build_fan(m, structure);
    Json j = fan_to_json(fan)["cones"];
    std::ostringstream t;
    for (int k = 1; k <= fan.dim(); ++k) {
        t << "dimension " << k << ": " << fan.cones_of_dim(k).size() << " cones\n";
        for (const auto& c : fan.cones_of_dim(k)) {
            t << "  [";
            for (std::size_t i = 0; i < c.size(); ++i) t << (i ? " " : "") << c[i];
            t << "]\n";
        }
    }
    emit(opt, j, t.str());
    return kExitOk;
}

int cmd_fan_member(const std::string& path, const std::string& point_spec, const Options& opt) {
    Matroid m = load_matroid(path);
    IntVec p = parse_point(point_spec, m.n());
    bool member = bergman_membership(m, p);
    Json j{{"member", member}};
    emit(opt, j, member ? "true\n" : "false\n");
    return member ? kExitOk : kExitVerification;
}

int cmd_fan_star(const std::string& path, const std::string& flag_spec, const Options& opt) {
    Matroid m = load_matroid(path);
    std::vector<Mask> flag;
    for (const auto& f : split(flag_spec, ';')) flag.push_back(parse_flat(m, f));
    LocalMatroid st = star(m, flag);
    Json j;
    j["flag"] = Json::array();
    for (Mask f : flag) j["flag"].push_back(m.ground().labels_of(f));
    j["local_matroid"] = matroid_to_json(st.local);
    j["lineality_dim"] = lineality_dim(st.local);
    std::ostringstream t;
    t << "star local matroid: " << st.local.n() << " elements, rank " << st.local.rank()
      << ", " << st.local.connected_components().size() << " components, lineality "
      << lineality_dim(st.local) << "\n";
    emit(opt, j, t.str());
    return kExitOk;
}

int cmd_invariants(const std::string& path, const std::string& what, int k, const Options& opt) {
    Matroid m = load_matroid(path);
    if (what == "charpoly") {
        IntPoly chi = characteristic_polynomial(m);
        IntPoly chi_dc = characteristic_polynomial_delcon(m);
        IntPoly red = reduced_characteristic_polynomial(m);
        bool agree = chi == chi_dc;
        Json j{{"chi", chi.coeffs()}, {"chi_deletion_contraction", chi_dc.coeffs()},
               {"chi_reduced", red.coeffs()}, {"routes_agree", agree}};
        std::ostringstream t;
        t << "chi(t)         = " << chi.to_string() << "\n";
        t << "chi~(t)        = " << red.to_string() << "\n";
        t << "del-con route  = " << chi_dc.to_string() << (agree ? "  (agrees)" : "  (MISMATCH)")
          << "\n";
        emit(opt, j, t.str());
        return agree ? kExitOk : kExitVerification;
    }
    if (what == "beta") {
        long long b = beta(m);
        emit(opt, Json{{"beta", b}}, "beta = " + std::to_string(b) + "\n");
        return kExitOk;
    }
    if (what == "mu") {
        auto mus = mu_vector(m);
        if (k >= 0) {
            long long v = k < static_cast<int>(mus.size()) ? mus[k] : 0;
            emit(opt, Json{{"k", k}, {"mu", v}},
                 "mu^" + std::to_string(k) + " = " + std::to_string(v) + "\n");
        } else {
            std::ostringstream t;
            t << "mu =";
            for (long long v : mus) t << " " << v;
            t << "\n";
            emit(opt, Json{{"mu", mus}}, t.str());
        }
        return kExitOk;
    }
    if (what == "osdim") {
        WedgeSpaceReport rep = os_dimension(m, k);
        Json j{{"p", rep.p}, {"dimension", rep.dimension}, {"ambient", rep.ambient}};
        std::ostringstream t;
        t << "dim F_" << rep.p << " = " << rep.dimension << " (ambient " << rep.ambient << ")\n";
        emit(opt, j, t.str());
        return kExitOk;
    }
    if (what == "verify-os") {
        OsIdentityReport rep = verify_os_identity(m);
        Json rows = Json::array();
        std::ostringstream t;
        t << "p   mu^p   dim F_p   match\n";
        for (const auto& r : rep.rows) {
            rows.push_back(Json{{"p", r.p}, {"mu", r.mu}, {"wedge_dim", r.wedge_dim},
                                {"match", r.match}});
            t << r.p << "   " << r.mu << "   " << r.wedge_dim << "   "
              << (r.match ? "yes" : "NO") << "\n";
        }
        emit(opt, Json{{"rows", rows}, {"all_match", rep.all_match}}, t.str());
        return rep.all_match ? kExitOk : kExitVerification;
    }
    throw std::invalid_argument("unknown invariants subcommand");
}

int cmd_chow_degree(const std::string& path, const std::string& monomial_spec,
                    const Options& opt) {
    Matroid m = load_matroid(path);
    FlagMonomial mono = parse_monomial(m, monomial_spec);
    DegreeValue v = eur_degree(m, mono);
    Json j{{"degree", v.value}, {"non_face", v.non_face}};
    std::ostringstream t;
    t << "deg = " << v.value << (v.non_face ? "  (non-face)" : "") << "\n";
    emit(opt, j, t.str());
    return kExitOk;
}

int cmd_chow_relations(const std::string& path, const std::string& partial_spec,
                       const std::string& li, const std::string& lj, const Options& opt) {
    Matroid m = load_matroid(path);
    FlagMonomial partial = parse_monomial(m, partial_spec);
    auto rep = relation_annihilation_check(m, partial, m.ground().index(li), m.ground().index(lj));
    Json j{{"equal", rep.equal}, {"sum_i", rep.sum_i}, {"sum_j", rep.sum_j}};
    std::ostringstream t;
    t << "sum over flats containing " << li << ": " << rep.sum_i << "\n";
    t << "sum over flats containing " << lj << ": " << rep.sum_j << "\n";
    t << (rep.equal ? "equal\n" : "NOT equal\n");
    emit(opt, j, t.str());
    return rep.equal ? kExitOk : kExitVerification;
}

int cmd_chow_presentation(const std::string& path, const std::string& structure,
                          const Options& opt) {
    Matroid m = load_matroid(path);
    Fan fan = build_fan(m, structure);
    ChowPresentation p = chow_presentation(fan);
    Json j{{"generators", p.generator_count}, {"minimal_non_faces", p.minimal_non_faces},
           {"relations", p.relations}};
    std::ostringstream t;
    t << p.generator_count << " generators, " << p.minimal_non_faces.size()
      << " minimal non-faces, " << p.relations.size() << " linear relations\n";
    emit(opt, j, t.str());
    return kExitOk;
}

int cmd_chow_coarse3(const std::string& path, const std::string& fa, const std::string& fb,
                     const Options& opt) {
    Matroid m = load_matroid(path);
    long long v = coarse_rank3_degree(m, parse_flat(m, fa), parse_flat(m, fb));
    emit(opt, Json{{"degree", v}}, "deg = " + std::to_string(v) + "\n");
    return kExitOk;
}

int cmd_csm_weights(const std::string& path, int k, const Options& opt) {
    Matroid m = load_matroid(path);
    Fan fine = fine_fan(m);
    MinkowskiWeight w = csm_weights(m, k, fine);
    Json j = weight_to_json(w);
    std::ostringstream t;
    t << "csm_" << k << " on " << w.cones.size() << " cones\n";
    for (std::size_t i = 0; i < w.cones.size(); ++i) {
        t << "  [";
        for (std::size_t a = 0; a < w.cones[i].size(); ++a) t << (a ? " " : "") << w.cones[i][a];
        t << "] -> " << w.weights[i] << "\n";
    }
    emit(opt, j, t.str());
    return kExitOk;
}

int cmd_csm_balancing(const std::string& path, int k, const std::string& weights_path,
                      const Options& opt) {
    Matroid m = load_matroid(path);
    Fan fine = fine_fan(m);
    MinkowskiWeight w = weights_path.empty() ? csm_weights(m, k, fine)
                                             : weight_from_json(load_json_file(weights_path));
    BalancingReport rep = balancing_check(fine, w);
    Json j{{"balanced", rep.balanced}, {"faces_checked", rep.faces_checked},
           {"failing_faces", rep.failing_faces}};
    std::ostringstream t;
    t << (rep.balanced ? "balanced" : "NOT balanced") << " (" << rep.faces_checked
      << " faces checked";
    if (!rep.balanced) t << ", " << rep.failing_faces.size() << " failing";
    t << ")\n";
    emit(opt, j, t.str());
    return rep.balanced ? kExitOk : kExitVerification;
}

int cmd_csm_cross_check(const std::string& path, int k, const Options& opt) {
    Matroid m = load_matroid(path);
    Fan fine = fine_fan(m);
    MinkowskiWeight w = csm_weights(m, k, fine);
    bool all = true;
    Json rows = Json::array();
    std::ostringstream t;
    for (std::size_t i = 0; i < w.cones.size(); ++i) {
        long long support = csm_weight_from_support(m, fine, w.cones[i], k);
        bool match = support == w.weights[i];
        all = all && match;
        rows.push_back(Json{{"cone", w.cones[i]}, {"flag_formula", w.weights[i]},
                            {"support_route", support}, {"match", match}});
        if (!match) {
            t << "mismatch on cone [";
            for (std::size_t a = 0; a < w.cones[i].size(); ++a)
                t << (a ? " " : "") << w.cones[i][a];
            t << "]: " << w.weights[i] << " vs " << support << "\n";
        }
    }
    t << (all ? "all cones agree\n" : "route mismatch\n");
    emit(opt, Json{{"rows", rows}, {"all_match", all}}, t.str());
    return all ? kExitOk : kExitVerification;
}

int cmd_map_matroid_iso(const std::string& p1, const std::string& p2,
                        const std::string& bijection, const Options& opt) {
    Matroid m1 = load_matroid(p1), m2 = load_matroid(p2);
    std::vector<int> f(m1.n(), -1);
    for (const auto& pair : split(bijection, ',')) {
        auto ab = split(pair, ':');
        if (ab.size() != 2) throw std::invalid_argument("bijection looks like 'a:x,b:y,...'");
        f[m1.ground().index(ab[0])] = m2.ground().index(ab[1]);
    }
    for (int v : f)
        if (v < 0) throw std::invalid_argument("bijection must cover every element");
    LatticeMap map;
    try {
        map = from_matroid_iso(f, m1, m2);
    } catch (const std::invalid_argument& e) {
        std::cerr << "rejected: " << e.what() << "\n";
        return kExitVerification;
    }
    Fan fine1 = fine_fan(m1), fine2 = fine_fan(m2);
    auto rep = verify_fan_isomorphism(map, fine1, fine2);
    Json j = map_to_json(map);
    j["fine_fan_isomorphism"] = rep.ok;
    std::ostringstream t;
    t << "rank-preserving bijection; fine fan isomorphism: " << (rep.ok ? "yes" : "no") << "\n";
    emit(opt, j, t.str());
    return rep.ok ? kExitOk : kExitVerification;
}

int cmd_map_cremona_criterion(const std::string& path, const std::string& basis_spec,
                              const Options& opt) {
    Matroid m = load_matroid(path);
    auto crit = cremona_criterion(m, parse_flat(m, basis_spec));
    Json blocks = Json::array();
    std::ostringstream t;
    t << (crit.holds ? "criterion holds\n" : "criterion fails: " + crit.witness + "\n");
    for (auto& [pair, block] : crit.blocks) {
        blocks.push_back(Json{{"pair", Json::array({m.ground().label(pair.first),
                                                    m.ground().label(pair.second)})},
                              {"block", m.ground().labels_of(block)}});
        t << "  F(" << m.ground().label(pair.first) << "," << m.ground().label(pair.second)
          << ") \\ pair = " << flat_to_string(m, block) << "\n";
    }
    emit(opt, Json{{"holds", crit.holds}, {"witness", crit.witness}, {"blocks", blocks}},
         t.str());
    return crit.holds ? kExitOk : kExitVerification;
}

int cmd_map_cremona(const std::string& path, const std::string& basis_spec, bool check_support,
                    int samples, const Options& opt) {
    Matroid m = load_matroid(path);
    Mask basis = parse_flat(m, basis_spec);
    auto crit = cremona_criterion(m, basis);
    if (!crit.holds) {
        std::cerr << "Cremona criterion fails: " << crit.witness << "\n";
        return kExitVerification;
    }
    LatticeMap crem = cremona_map(m, basis);
    Json j = map_to_json(crem);
    std::ostringstream t;
    t << "Cremona map for basis " << flat_to_string(m, basis) << ", ones multiplier "
      << *crem.ones_multiplier() << "\n";
    if (check_support) {
        SupportReport rep = preserves_support(crem, m, {m}, samples);
        j["preserves_support"] = rep.ok;
        t << "support preservation: " << (rep.ok ? "passes" : "FAILS") << " ("
          << rep.points_checked << " points)\n";
        if (!rep.ok) {
            emit(opt, j, t.str());
            return kExitVerification;
        }
    }
    emit(opt, j, t.str());
    return kExitOk;
}

int cmd_map_parallel_split(const std::string& path, int samples, const Options& opt) {
    Matroid m = load_matroid(path);
    LatticeMap split = parallel_split_map(m);
    const Matroid& m1 = *m.provenance().pc_left;
    const Matroid& m2 = *m.provenance().pc_right;
    SupportReport rep = preserves_support(split, m, {m1, m2}, samples);
    Json j = map_to_json(split);
    j["forward_support"] = rep.ok;
    std::ostringstream t;
    t << "splitting map into " << m1.n() << "+" << m2.n() << " coordinates; forward support "
      << (rep.ok ? "passes" : "FAILS") << " (" << rep.points_checked << " points)\n";
    emit(opt, j, t.str());
    return rep.ok ? kExitOk : kExitVerification;
}

int cmd_map_verify_iso(const std::string& map_path, const std::string& m1_path,
                       const std::string& s1, const std::string& m2_path, const std::string& s2,
                       const Options& opt) {
    LatticeMap map = map_from_json(load_json_file(map_path));
    Matroid m1 = load_matroid(m1_path);
    Matroid m2 = m2_path.empty() ? m1 : load_matroid(m2_path);
    Fan f1 = build_fan(m1, s1);
    Fan f2 = build_fan(m2, s2.empty() ? s1 : s2);
    auto rep = verify_fan_isomorphism(map, f1, f2);
    Json j{{"ok", rep.ok}, {"reason", rep.reason}, {"ray_map", rep.ray_map}};
    std::ostringstream t;
    t << (rep.ok ? "fan isomorphism verified\n" : "verification failed: " + rep.reason + "\n");
    emit(opt, j, t.str());
    return rep.ok ? kExitOk : kExitVerification;
}

int cmd_map_group_order(const std::string& path, const std::string& structure,
                        const std::string& maps_spec, bool with_autos,
                        const std::string& cremona_basis, const Options& opt) {
    Matroid m = load_matroid(path);
    Fan fan = build_fan(m, structure);
    std::vector<std::vector<int>> gens;
    if (!maps_spec.empty()) {
        for (const auto& p : split(maps_spec, ','))
            gens.push_back(ray_permutation(map_from_json(load_json_file(p)), fan));
    }
    if (with_autos) {
        for (const auto& f : m.automorphisms())
            gens.push_back(ray_permutation(from_matroid_iso(f, m, m), fan));
    }
    if (!cremona_basis.empty()) {
        gens.push_back(ray_permutation(cremona_map(m, parse_flat(m, cremona_basis)), fan));
    }
    long long order = group_closure_order(gens);
    Json j{{"generators", gens.size()}, {"group_order", order}};
    std::ostringstream t;
    t << "group order " << order << " (from " << gens.size() << " generators)\n";
    emit(opt, j, t.str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bergmankit: Bergman fans of matroids, their invariants and maps"};
    app.require_subcommand(1);
    Options opt;
    app.add_option("--format", opt.format, "output format: table|structured")
        ->check(CLI::IsMember({"table", "structured"}));
    app.add_option("-o,--output", opt.output, "write output to a file");

    // matroid ---------------------------------------------------------------
    auto* matroid = app.add_subcommand("matroid", "build and inspect matroids");
    matroid->require_subcommand(1);

    auto* mb = matroid->add_subcommand("build", "construct a matroid");
    std::string kind, edges, columns, group = "trivial", labels_spec, sets;
    std::string m1_path, m2_path, p1, p2;
    int r = 0, n = 0, vertices = 0, prime = 2;
    mb->add_option("--kind", kind,
                   "uniform|graphic|linear|projective|dowling|bases|circuits|parallel")
        ->required();
    mb->add_option("--r", r, "rank (uniform)");
    mb->add_option("--n", n, "size (uniform) / dimension (projective, dowling)");
    mb->add_option("--vertices", vertices, "vertex count (graphic)");
    mb->add_option("--edges", edges, "edges '1-2,1-3,...' (graphic)");
    mb->add_option("--prime", prime, "field order (linear, projective)");
    mb->add_option("--columns", columns, "columns '1,0;0,1;...' (linear)");
    mb->add_option("--group", group, "trivial|zN|@table.json (dowling)");
    mb->add_option("--labels", labels_spec, "labels 'a,b,c' (bases, circuits)");
    mb->add_option("--sets", sets, "subsets 'a,b;b,c' (bases, circuits)");
    mb->add_option("--m1", m1_path, "left matroid file (parallel)");
    mb->add_option("--m2", m2_path, "right matroid file (parallel)");
    mb->add_option("--p1", p1, "left base point label (parallel)");
    mb->add_option("--p2", p2, "right base point label (parallel)");

    std::string matroid_path, restrict_spec, delete_spec, contract_spec;
    int truncate_k = 0;
    auto* md = matroid->add_subcommand("describe", "summary of a matroid");
    md->add_option("--matroid", matroid_path, "matroid file")->required();
    auto* ms = matroid->add_subcommand("simplify", "simplification with label quotient");
    ms->add_option("--matroid", matroid_path, "matroid file")->required();
    auto* mm = matroid->add_subcommand("minor", "restrict/delete/contract/truncate");
    mm->add_option("--matroid", matroid_path, "matroid file")->required();
    mm->add_option("--restrict", restrict_spec, "labels to restrict to");
    mm->add_option("--delete", delete_spec, "labels to delete");
    mm->add_option("--contract", contract_spec, "labels to contract");
    mm->add_option("--truncate", truncate_k, "truncation rank");

    // fan ---------------------------------------------------------------------
    auto* fan = app.add_subcommand("fan", "fan structures on Bergman fans");
    fan->require_subcommand(1);
    std::string structure = "fine", point_spec, flag_spec;
    auto* fb = fan->add_subcommand("build", "construct a fan structure");
    fb->add_option("--matroid", matroid_path, "matroid file")->required();
    fb->add_option("--structure", structure, "fine|nested|coarse");
    auto* fr = fan->add_subcommand("rays", "list rays with flat metadata");
    fr->add_option("--matroid", matroid_path, "matroid file")->required();
    fr->add_option("--structure", structure, "fine|nested|coarse");
    auto* fc = fan->add_subcommand("cones", "list cones by dimension");
    fc->add_option("--matroid", matroid_path, "matroid file")->required();
    fc->add_option("--structure", structure, "fine|nested|coarse");
    auto* fm = fan->add_subcommand("member", "Bergman support membership of a point");
    fm->add_option("--matroid", matroid_path, "matroid file")->required();
    fm->add_option("--point", point_spec, "comma-separated coordinates (integers or a/b)")
        ->required();
    auto* fs = fan->add_subcommand("star", "star of a flag of flats");
    fs->add_option("--matroid", matroid_path, "matroid file")->required();
    fs->add_option("--flag", flag_spec, "flats 'a,b;a,b,c' from small to large")->required();

    // invariants -----------------------------------------------------------
    auto* inv = app.add_subcommand("invariants", "characteristic polynomial and friends");
    inv->require_subcommand(1);
    int k_opt = -1;
    auto* ic = inv->add_subcommand("charpoly", "both routes to chi and chi~");
    ic->add_option("--matroid", matroid_path, "matroid file")->required();
    auto* ib = inv->add_subcommand("beta", "beta invariant");
    ib->add_option("--matroid", matroid_path, "matroid file")->required();
    auto* im = inv->add_subcommand("mu", "unsigned reduced coefficients");
    im->add_option("--matroid", matroid_path, "matroid file")->required();
    im->add_option("--k", k_opt, "single coefficient (default: all)");
    auto* io = inv->add_subcommand("osdim", "dim F_p of the Bergman fan");
    io->add_option("--matroid", matroid_path, "matroid file")->required();
    io->add_option("--p", k_opt, "wedge power")->required();
    auto* iv = inv->add_subcommand("verify-os", "mu^p vs wedge dimensions, all p");
    iv->add_option("--matroid", matroid_path, "matroid file")->required();

    // chow -------------------------------------------------------------------
    auto* chow = app.add_subcommand("chow", "degrees in Chow rings of matroid fans");
    chow->require_subcommand(1);
    std::string monomial_spec, partial_spec, elem_i, elem_j, flat_a, flat_b;
    auto* cd = chow->add_subcommand("degree", "degree of a flag monomial (fine structure)");
    cd->add_option("--matroid", matroid_path, "matroid file")->required();
    cd->add_option("--monomial", monomial_spec, "'F1^d1;F2^d2', flats as label lists")
        ->required();
    auto* cr = chow->add_subcommand("relations", "linear-relation annihilation check");
    cr->add_option("--matroid", matroid_path, "matroid file")->required();
    cr->add_option("--partial", partial_spec, "monomial of degree rank-2")->required();
    cr->add_option("--i", elem_i, "first element label")->required();
    cr->add_option("--j", elem_j, "second element label")->required();
    auto* cp = chow->add_subcommand("presentation", "generators, non-faces, relations");
    cp->add_option("--matroid", matroid_path, "matroid file")->required();
    cp->add_option("--structure", structure, "fine|nested|coarse");
    auto* c3 = chow->add_subcommand("coarse3", "rank-3 coarse closed-form degree");
    c3->add_option("--matroid", matroid_path, "matroid file")->required();
    c3->add_option("--a", flat_a, "first ray (flat label list)")->required();
    c3->add_option("--b", flat_b, "second ray (flat label list)")->required();

    // csm ---------------------------------------------------------------------
    auto* csm = app.add_subcommand("csm", "CSM Minkowski weights");
    csm->require_subcommand(1);
    std::string weights_path;
    int csm_k = 0;
    auto* cw = csm->add_subcommand("weights", "flag-formula weights on the fine fan");
    cw->add_option("--matroid", matroid_path, "matroid file")->required();
    cw->add_option("--k", csm_k, "cycle dimension")->required();
    auto* cb = csm->add_subcommand("balancing", "balancing condition at codim-1 faces");
    cb->add_option("--matroid", matroid_path, "matroid file")->required();
    cb->add_option("--k", csm_k, "cycle dimension")->required();
    cb->add_option("--weights", weights_path, "weight file (default: csm weights)");
    auto* cc = csm->add_subcommand("cross-check", "flag formula vs support route");
    cc->add_option("--matroid", matroid_path, "matroid file")->required();
    cc->add_option("--k", csm_k, "cycle dimension")->required();

    // map ---------------------------------------------------------------------
    auto* mapcmd = app.add_subcommand("map", "lattice-linear maps between fans");
    mapcmd->require_subcommand(1);
    std::string bijection, basis_spec, map_path, maps_spec, s2, m2_path_iso, cremona_basis;
    bool check_support = false, with_autos = false;
    int samples = 50;
    auto* mi = mapcmd->add_subcommand("matroid-iso", "map induced by a matroid isomorphism");
    mi->add_option("--m1", m1_path, "source matroid file")->required();
    mi->add_option("--m2", m2_path, "target matroid file")->required();
    mi->add_option("--bijection", bijection, "'a:x,b:y,...'")->required();
    auto* mc = mapcmd->add_subcommand("cremona-criterion", "partition criterion for a basis");
    mc->add_option("--matroid", matroid_path, "matroid file")->required();
    mc->add_option("--basis", basis_spec, "basis labels 'a,b,c'")->required();
    auto* mcr = mapcmd->add_subcommand("cremona", "Cremona map for a passing basis");
    mcr->add_option("--matroid", matroid_path, "matroid file")->required();
    mcr->add_option("--basis", basis_spec, "basis labels 'a,b,c'")->required();
    mcr->add_flag("--check-support", check_support, "sample support preservation");
    mcr->add_option("--samples", samples, "points per cone for sampling");
    auto* mp = mapcmd->add_subcommand("parallel-split", "splitting map of a parallel connection");
    mp->add_option("--matroid", matroid_path, "matroid file (parallel_connection kind)")
        ->required();
    mp->add_option("--samples", samples, "points per cone for sampling");
    auto* mv = mapcmd->add_subcommand("verify-iso", "verify a map as a fan isomorphism");
    mv->add_option("--map", map_path, "map file")->required();
    mv->add_option("--matroid", matroid_path, "source matroid file")->required();
    mv->add_option("--structure1", structure, "source structure");
    mv->add_option("--matroid2", m2_path_iso, "target matroid file (default: source)");
    mv->add_option("--structure2", s2, "target structure (default: structure1)");
    auto* mg = mapcmd->add_subcommand("group-order", "order of the group generated by maps");
    mg->add_option("--matroid", matroid_path, "matroid file")->required();
    mg->add_option("--structure", structure, "fan structure");
    mg->add_option("--maps", maps_spec, "comma-separated map files");
    mg->add_flag("--with-matroid-autos", with_autos, "include all matroid automorphisms");
    mg->add_option("--with-cremona", cremona_basis, "include the Cremona map of this basis");

    // allow --format/-o to appear after the subcommand
    std::function<void(CLI::App*)> enable_fallthrough = [&](CLI::App* a) {
        for (CLI::App* sub : a->get_subcommands({})) {
            sub->fallthrough();
            enable_fallthrough(sub);
        }
    };
    enable_fallthrough(&app);

    CLI11_PARSE(app, argc, argv);

    try {
        if (mb->parsed())
            return cmd_matroid_build(kind, r, n, vertices, edges, prime, columns, group,
                                     labels_spec, sets, m1_path, m2_path, p1, p2, opt);
        if (md->parsed()) return cmd_matroid_describe(matroid_path, opt);
        if (ms->parsed()) return cmd_matroid_simplify(matroid_path, opt);
        if (mm->parsed())
            return cmd_matroid_minor(matroid_path, restrict_spec, delete_spec, contract_spec,
                                     truncate_k, opt);
        if (fb->parsed()) return cmd_fan_build(matroid_path, structure, opt);
        if (fr->parsed()) return cmd_fan_rays(matroid_path, structure, opt);
        if (fc->parsed()) return cmd_fan_cones(matroid_path, structure, opt);
        if (fm->parsed()) return cmd_fan_member(matroid_path, point_spec, opt);
        if (fs->parsed()) return cmd_fan_star(matroid_path, flag_spec, opt);
        if (ic->parsed()) return cmd_invariants(matroid_path, "charpoly", -1, opt);
        if (ib->parsed()) return cmd_invariants(matroid_path, "beta", -1, opt);
        if (im->parsed()) return cmd_invariants(matroid_path, "mu", k_opt, opt);
        if (io->parsed()) return cmd_invariants(matroid_path, "osdim", k_opt, opt);
        if (iv->parsed()) return cmd_invariants(matroid_path, "verify-os", -1, opt);
        if (cd->parsed()) return cmd_chow_degree(matroid_path, monomial_spec, opt);
        if (cr->parsed())
            return cmd_chow_relations(matroid_path, partial_spec, elem_i, elem_j, opt);
        if (cp->parsed()) return cmd_chow_presentation(matroid_path, structure, opt);
        if (c3->parsed()) return cmd_chow_coarse3(matroid_path, flat_a, flat_b, opt);
        if (cw->parsed()) return cmd_csm_weights(matroid_path, csm_k, opt);
        if (cb->parsed()) return cmd_csm_balancing(matroid_path, csm_k, weights_path, opt);
        if (cc->parsed()) return cmd_csm_cross_check(matroid_path, csm_k, opt);
        if (mi->parsed()) return cmd_map_matroid_iso(m1_path, m2_path, bijection, opt);
        if (mc->parsed()) return cmd_map_cremona_criterion(matroid_path, basis_spec, opt);
        if (mcr->parsed())
            return cmd_map_cremona(matroid_path, basis_spec, check_support, samples, opt);
        if (mp->parsed()) return cmd_map_parallel_split(matroid_path, samples, opt);
        if (mv->parsed())
            return cmd_map_verify_iso(map_path, matroid_path, structure, m2_path_iso, s2, opt);
        if (mg->parsed())
            return cmd_map_group_order(matroid_path, structure, maps_spec, with_autos,
                                       cremona_basis, opt);
    } catch (const CoarseUnsupportedError& e) {
        std::cerr << "verification failure: " << e.what() << "\n";
        return kExitVerification;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    std::cerr << "no subcommand executed\n";
    return kExitInput;
}
