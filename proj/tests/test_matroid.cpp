#include <doctest.h>

#include <algorithm>
#include <set>
#include <thread>

#include "bk/matroid.hpp"
#include "corpus.hpp"
#include "oracles.hpp"

using namespace bk;

namespace {

std::set<Mask> as_set(const std::vector<Mask>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("uniform matroids") {
    Matroid u33 = Matroid::uniform(3, 3);
    CHECK(u33.rank(u33.everything()) == 3);

    Matroid u23 = Matroid::uniform(2, 3);
    CHECK(as_set(u23.flats_of_rank(1)) == std::set<Mask>{0b001, 0b010, 0b100});
    CHECK(u23.circuits() == std::vector<Mask>{0b111});

    CHECK_THROWS(Matroid::uniform(4, 3));
    CHECK_THROWS(Matroid::uniform(1, 0));
}

TEST_CASE("graphic K4: flats, circuits, connectivity") {
    Matroid m = corpus::k4();
    CHECK(m.n() == 6);
    CHECK(m.rank() == 3);
    CHECK(m.ground().label(0) == "12");

    // 4 triangles + 3 disjoint-edge pairs
    auto rank2 = m.flats_of_rank(2);
    CHECK(rank2.size() == 7);
    int triangles = 0, pairs = 0;
    for (Mask f : rank2) {
        if (popcount(f) == 3) ++triangles;
        if (popcount(f) == 2) ++pairs;
    }
    CHECK(triangles == 4);
    CHECK(pairs == 3);

    // 7 circuits: 4 triangles and 3 four-cycles
    auto circ = m.circuits();
    CHECK(circ.size() == 7);
    CHECK(std::count_if(circ.begin(), circ.end(), [](Mask c) { return popcount(c) == 3; }) == 4);
    CHECK(std::count_if(circ.begin(), circ.end(), [](Mask c) { return popcount(c) == 4; }) == 3);

    CHECK(m.is_connected());
    CHECK_FALSE(m.is_totally_disconnected());
    for (int i = 0; i < m.n(); ++i) CHECK_FALSE(m.is_nontrivial_parallel_connection_along(i));

    // closure of two adjacent edges is their triangle
    Mask e12 = bit(m.ground().index("12")), e23 = bit(m.ground().index("23"));
    Mask t = m.closure(e12 | e23);
    CHECK(popcount(t) == 3);
    CHECK((t & bit(m.ground().index("13"))) != 0);

    CHECK_THROWS(Matroid::graphic(3, {{1, 1}}));  // self-loop rejected
    // duplicate edges are fine by default (parallel elements) and rejected in
    // simple mode
    Matroid dbl = Matroid::graphic(3, {{1, 2}, {2, 1}}, {"a", "b"});
    CHECK(dbl.rank() == 1);
    CHECK_FALSE(dbl.is_simple());
    CHECK_THROWS(Matroid::graphic(3, {{1, 2}, {2, 1}}, {"a", "b"}, true));
}

TEST_CASE("flats lattice covering relation") {
    Matroid k4 = corpus::k4();
    const FlatsLattice& lat = k4.flats_lattice();
    // bottom is covered by the six rank-1 flats
    CHECK(lat.upper_covers.at(lat.by_rank[0][0]).size() == 6);
    // every flat of rank k+1 covering F contains it
    for (int k = 0; k < lat.rank(); ++k)
        for (Mask f : lat.by_rank[k])
            for (Mask g : lat.upper_covers.at(f)) CHECK((f & ~g) == 0);
    // Fano: each point lies on exactly 3 lines
    Matroid fano = corpus::fano();
    const FlatsLattice& fl = fano.flats_lattice();
    for (Mask pt : fl.by_rank[1]) CHECK(fl.upper_covers.at(pt).size() == 3);
}

TEST_CASE("library flats/circuits agree with brute-force oracles") {
    for (auto& [name, m] : corpus::small()) {
        CAPTURE(name);
        for (int k = 0; k <= m.rank(); ++k)
            CHECK(as_set(m.flats_of_rank(k)) == as_set(oracle::flats_of_rank(m, k)));
        auto lib = m.circuits();
        CHECK(as_set(lib) == as_set(oracle::circuits(m)));
    }
}

TEST_CASE("Fano = PG(2,2)") {
    Matroid f = corpus::fano();
    CHECK(f.n() == 7);
    CHECK(f.rank() == 3);
    auto lines = f.flats_of_rank(2);
    CHECK(lines.size() == 7);
    for (Mask l : lines) CHECK(popcount(l) == 3);
    // flats per rank (1,7,7,1)
    CHECK(f.flats_of_rank(0).size() == 1);
    CHECK(f.flats_of_rank(1).size() == 7);
    CHECK(f.flats_of_rank(3).size() == 1);
    // circuits: 7 lines + 7 line complements
    auto circ = f.circuits();
    CHECK(circ.size() == 14);
    CHECK(std::count_if(circ.begin(), circ.end(), [](Mask c) { return popcount(c) == 3; }) == 7);
    CHECK(std::count_if(circ.begin(), circ.end(), [](Mask c) { return popcount(c) == 4; }) == 7);
}

TEST_CASE("linear matroids over GF(p)") {
    // identity columns = free matroid
    Matroid id3 = Matroid::linear(2, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    CHECK(id3.same_rank_oracle(Matroid::uniform(3, 3)));
    CHECK_THROWS(Matroid::linear(4, {{1}}));          // non-prime modulus
    CHECK_THROWS(Matroid::linear(2, {{0, 0}}));       // zero column
}

TEST_CASE("projective geometries") {
    CHECK(corpus::fano().n() == 7);
    Matroid pg32 = corpus::pg32();
    CHECK(pg32.n() == 15);
    CHECK(pg32.rank() == 4);
    CHECK(pg32.flats_of_rank(2).size() == 35);
    CHECK(pg32.flats_of_rank(3).size() == 15);
    Matroid pg23 = Matroid::projective_geometry(2, 3);
    CHECK(pg23.n() == 13);
    auto lines = pg23.flats_of_rank(2);
    CHECK(lines.size() == 13);
    for (Mask l : lines) CHECK(popcount(l) == 4);
}

TEST_CASE("dowling matroids") {
    Matroid d = corpus::dowling3z2();
    CHECK(d.n() == 9);
    CHECK(d.rank() == 3);
    CHECK(d.is_simple());

    // coordinate flat b1 v b2 = {b1, b2} + {g_12 : g in G}
    Mask b1 = bit(d.ground().index("b1")), b2 = bit(d.ground().index("b2"));
    Mask f = d.closure(b1 | b2);
    CHECK(f == (b1 | b2 | bit(d.ground().index("e_12")) | bit(d.ground().index("g_12"))));

    // rank-2 flats: 3 coordinate (size 4) + 4 non-coordinate (size 3) + 6 pairs
    auto rank2 = d.flats_of_rank(2);
    int coordinate = 0, noncoord = 0, pairs = 0;
    for (Mask fl : rank2) {
        if (popcount(fl) == 4) ++coordinate;
        if (popcount(fl) == 3) ++noncoord;
        if (popcount(fl) == 2) ++pairs;
    }
    CHECK(coordinate == 3);
    CHECK(noncoord == 4);
    CHECK(pairs == 6);

    // flats are exactly the line-closed sets
    for (Mask s = 0; s <= d.everything(); ++s) {
        bool line_closed = true;
        for (int x : elements_of(s))
            for (int y : elements_of(s)) {
                if (x >= y) continue;
                if ((d.closure(bit(x) | bit(y)) & ~s) != 0) line_closed = false;
            }
        CHECK(line_closed == d.is_flat(s));
    }

    // trivial group gives the graphic matroid of K_{d+1}
    Matroid dt = Matroid::dowling(3, GroupTable::trivial());
    Matroid k4 = corpus::k4();
    // natural bijection: b_i <-> edge {i,4}, e_ij <-> edge {i,j}
    std::vector<int> f_map(6);
    f_map[dt.ground().index("b1")] = k4.ground().index("14");
    f_map[dt.ground().index("b2")] = k4.ground().index("24");
    f_map[dt.ground().index("b3")] = k4.ground().index("34");
    f_map[dt.ground().index("e_12")] = k4.ground().index("12");
    f_map[dt.ground().index("e_13")] = k4.ground().index("13");
    f_map[dt.ground().index("e_23")] = k4.ground().index("23");
    CHECK(dt.rank_preserving(k4, f_map));

    CHECK_THROWS(Matroid::dowling(2, GroupTable::cyclic(2)));
    GroupTable bad;
    bad.names = {"e", "g"};
    bad.mul = {{0, 1}, {1, 1}};  // no inverse for g
    CHECK_THROWS(Matroid::dowling(3, bad));
}

TEST_CASE("from_bases and from_circuits") {
    Matroid free3 = Matroid::from_bases(numeric_labels(3), {0b111});
    CHECK(free3.same_rank_oracle(Matroid::uniform(3, 3)));

    Matroid u23 = Matroid::from_circuits(numeric_labels(3), {0b111});
    CHECK(u23.same_rank_oracle(Matroid::uniform(2, 3)));

    // {{0,1},{1,2}} violates elimination ({0,2} must contain a circuit)
    CHECK_THROWS_AS(Matroid::from_circuits(numeric_labels(3), {0b011, 0b110}), AxiomViolation);
    // non-equicardinal bases
    CHECK_THROWS_AS(Matroid::from_bases(numeric_labels(3), {0b011, 0b100}), AxiomViolation);
    // exchange failure: bases {01, 23} on 4 elements
    CHECK_THROWS_AS(Matroid::from_bases(numeric_labels(4), {0b0011, 0b1100}), AxiomViolation);
}

TEST_CASE("parallel connection of two U_{2,3}") {
    Matroid p = corpus::parallel_u23_u23();
    CHECK(p.n() == 5);
    CHECK(p.rank() == 3);
    CHECK(as_set(p.circuits()) == as_set(oracle::circuits(p)));
    CHECK(p.circuits().size() == 3);

    // contracting the base point disconnects
    int glued = p.ground().index("2");
    CHECK_FALSE(p.contract(bit(glued)).is_connected());
    CHECK(p.is_nontrivial_parallel_connection_along(glued));
    // along a non-glued point it is not one
    CHECK_FALSE(p.is_nontrivial_parallel_connection_along(p.ground().index("0")));

    CHECK_THROWS(Matroid::parallel_connection(Matroid::uniform(2, 3), Matroid::uniform(2, 3),
                                              "7", "0"));  // missing label

    // coloop fallback: U_{1,1} glued anywhere gives a direct sum
    Matroid coloop = Matroid::uniform(1, 1);
    Matroid ds = Matroid::parallel_connection(coloop, Matroid::uniform(2, 3), "0", "0");
    CHECK(ds.n() == 3);
    CHECK(ds.same_rank_oracle(Matroid::uniform(2, 3)));
    Matroid ds2 = Matroid::parallel_connection(Matroid::uniform(2, 3), coloop, "0", "0");
    CHECK(ds2.n() == 3);
    CHECK(ds2.is_connected());
}

TEST_CASE("minors") {
    Matroid k4 = corpus::k4();
    // contract one edge, simplify: U_{2,3}
    auto simp = k4.contract(bit(0)).simplify();
    CHECK(simp.matroid.n() == 3);
    CHECK(simp.matroid.isomorphism_to(Matroid::uniform(2, 3)).has_value());

    // truncate(U_{3,4}, 2) = U_{2,4}
    CHECK(Matroid::uniform(3, 4).truncate(2).same_rank_oracle(Matroid::uniform(2, 4)));
    CHECK_THROWS(Matroid::uniform(3, 4).truncate(0));
    CHECK_THROWS(Matroid::uniform(3, 4).truncate(4));

    // delete/restrict duality
    for (auto& [name, m] : corpus::small()) {
        CAPTURE(name);
        Mask s = m.everything() & 0b1010;
        Matroid del = m.remove(s);
        Matroid res = m.restrict_to(m.everything() & ~s);
        CHECK(del.same_rank_oracle(res));
    }

    // simplification merges a parallel pair
    Matroid u23 = Matroid::uniform(2, 3);
    Matroid pc = Matroid::parallel_connection(u23, Matroid::uniform(1, 2), "0", "0");
    // gluing a rank-1 two-element matroid creates a parallel pair at the base point
    auto s = pc.simplify();
    CHECK(s.matroid.n() == pc.n() - 1);
}

TEST_CASE("closure properties") {
    for (auto& [name, m] : corpus::small()) {
        CAPTURE(name);
        if (m.n() > 9) continue;
        for (Mask s = 0; s <= m.everything(); ++s) {
            Mask cl = m.closure(s);
            CHECK(m.closure(cl) == cl);          // idempotent
            CHECK((s & ~cl) == 0);               // extensive
            CHECK(m.rank(cl) == m.rank(s));      // rank preserved
        }
        CHECK(m.closure(m.everything()) == m.everything());
    }
}

TEST_CASE("submodularity and unit increase over the corpus") {
    for (auto& [name, m] : corpus::small()) {
        CAPTURE(name);
        if (m.n() > 9) continue;
        for (Mask a = 0; a <= m.everything(); a += 3) {   // deterministic stride sample
            for (Mask b = 0; b <= m.everything(); b += 5) {
                CHECK(m.rank(a | b) + m.rank(a & b) <= m.rank(a) + m.rank(b));
            }
            for (int i = 0; i < m.n(); ++i) {
                int d = m.rank(a | bit(i)) - m.rank(a);
                CHECK(d >= 0);
                CHECK(d <= 1);
            }
        }
    }
    // larger corpus members: sampled pairs
    for (auto& [name, m] : corpus::all()) {
        CAPTURE(name);
        SplitMix64 rng(7);
        for (int t = 0; t < 300; ++t) {
            Mask a = static_cast<Mask>(rng.next()) & m.everything();
            Mask b = static_cast<Mask>(rng.next()) & m.everything();
            CHECK(m.rank(a | b) + m.rank(a & b) <= m.rank(a) + m.rank(b));
        }
    }
}

TEST_CASE("connectivity cross-check against the circuit definition") {
    for (auto& [name, m] : corpus::all()) {
        CAPTURE(name);
        if (m.n() > 10) continue;
        CHECK(m.connected_components() == oracle::circuit_components(m));
    }
    Matroid ds = Matroid::direct_sum(Matroid::uniform(2, 3), Matroid::uniform(2, 3));
    CHECK(ds.connected_components().size() == 2);
    CHECK(Matroid::uniform(4, 4).is_totally_disconnected());
    CHECK(Matroid::uniform(4, 4).connected_components().size() == 4);
    // U_{2,3}: rank-1 contraction stays connected
    Matroid u23 = Matroid::uniform(2, 3);
    for (int i = 0; i < 3; ++i) CHECK_FALSE(u23.is_nontrivial_parallel_connection_along(i));
}

TEST_CASE("bases and circuits reconstruct random linear matroids") {
    // random GF(p) matroids; the basis and circuit families must pass the
    // axiom checks and reproduce the same rank oracle
    SplitMix64 rng(2024);
    for (int trial = 0; trial < 12; ++trial) {
        int p = trial % 2 == 0 ? 2 : 3;
        int dim = 2 + static_cast<int>(rng.next() % 2);   // 2..3
        int cols = dim + 2 + static_cast<int>(rng.next() % 2);
        std::vector<std::vector<int>> matrix;
        while (static_cast<int>(matrix.size()) < cols) {
            std::vector<int> col(dim);
            bool zero = true;
            for (auto& x : col) {
                x = static_cast<int>(rng.next() % p);
                if (x) zero = false;
            }
            if (!zero) matrix.push_back(col);
        }
        Matroid lin = Matroid::linear(p, matrix);
        CAPTURE(trial);

        std::vector<Mask> bases;
        int r = lin.rank();
        for (Mask s = first_subset_of_size(r); s != 0;
             s = next_subset_same_size(s, lin.everything()))
            if (lin.rank(s) == r) bases.push_back(s);
        Matroid from_b = Matroid::from_bases(lin.ground().labels(), bases);
        CHECK(from_b.same_rank_oracle(lin));

        Matroid from_c = Matroid::from_circuits(lin.ground().labels(), lin.circuits());
        CHECK(from_c.same_rank_oracle(lin));
    }
}

TEST_CASE("PG(2,3) invariant values") {
    Matroid pg = Matroid::projective_geometry(2, 3);
    CHECK(pg.n() == 13);
    auto lines = pg.flats_of_rank(2);
    CHECK(lines.size() == 13);
    for (Mask l : lines) CHECK(popcount(l) == 4);
}

TEST_CASE("Dowling rank-2 flats for d = 4") {
    Matroid d4 = Matroid::dowling(4, GroupTable::cyclic(2));
    CHECK(d4.n() == 4 + 2 * 6);
    CHECK(d4.rank() == 4);
    CHECK(d4.is_simple());
    int coordinate = 0, noncoord = 0, pairs = 0;
    for (Mask f : d4.flats_of_rank(2)) {
        int sz = popcount(f);
        bool has_joint = (f & full_mask(4)) != 0;  // b_i occupy the first d indices
        if (sz == 4 && has_joint) ++coordinate;
        else if (sz == 3 && !has_joint) ++noncoord;
        else if (sz == 2) ++pairs;
        else FAIL("unexpected rank-2 flat shape");
    }
    CHECK(coordinate == 6);      // one per vertex pair
    CHECK(noncoord == 16);       // {g_ij, h_jk, (gh)_ik}: 4 triples x |G|^2
    CHECK(pairs > 0);
}

TEST_CASE("totally disconnected iff no circuit of size >= 3, corpus-wide") {
    for (auto& [name, m] : corpus::all()) {
        CAPTURE(name);
        bool no_big_circuit = true;
        for (Mask c : m.circuits())
            if (popcount(c) >= 3) no_big_circuit = false;
        CHECK(m.is_totally_disconnected() == no_big_circuit);
    }
}

TEST_CASE("automorphism enumeration") {
    CHECK(corpus::k4().automorphisms().size() == 24);
    CHECK(Matroid::uniform(2, 3).automorphisms().size() == 6);
    CHECK(corpus::fano().automorphisms().size() == 168);
}

TEST_CASE("matroid values are safely shareable across threads") {
    Matroid m = corpus::pg32();
    std::vector<std::thread> workers;
    std::vector<long long> sums(4, 0);
    for (int t = 0; t < 4; ++t) {
        workers.emplace_back([&m, &sums, t] {
            SplitMix64 rng(100 + t);
            long long acc = 0;
            for (int i = 0; i < 20000; ++i) {
                Mask s = static_cast<Mask>(rng.next()) & m.everything();
                acc += m.rank(s);
            }
            sums[t] = acc;
        });
    }
    for (auto& w : workers) w.join();
    // same queries single-threaded give the same totals
    for (int t = 0; t < 4; ++t) {
        SplitMix64 rng(100 + t);
        long long acc = 0;
        for (int i = 0; i < 20000; ++i) {
            Mask s = static_cast<Mask>(rng.next()) & m.everything();
            acc += m.rank(s);
        }
        CHECK(acc == sums[t]);
    }
}
