#include <doctest.h>

#include "bk/csm.hpp"
#include "bk/invariants.hpp"
#include "bk/maps.hpp"
#include "corpus.hpp"

using namespace bk;

TEST_CASE("csm weights on K_4") {
    Matroid k4 = corpus::k4();
    Fan fine = fine_fan(k4);

    MinkowskiWeight w1 = csm_weights(k4, 1, fine);
    for (std::size_t i = 0; i < w1.cones.size(); ++i) {
        const Ray& r = fine.rays()[w1.cones[i][0]];
        if (popcount(*r.flat) == 2 && r.flat_rank == 2) {
            CHECK(w1.weights[i] == 0);  // disjoint-pair flat: disconnected restriction
        } else {
            CHECK(w1.weights[i] == -1);  // edges and triangles
        }
    }

    // top dimension: fundamental cycle, weight identically 1
    MinkowskiWeight w2 = csm_weights(k4, 2, fine);
    for (long long w : w2.weights) CHECK(w == 1);

    // k = 0: single origin cone with weight (-1)^d beta(M)
    MinkowskiWeight w0 = csm_weights(k4, 0, fine);
    CHECK(w0.cones.size() == 1);
    CHECK(w0.weights[0] == 2);

    CHECK_THROWS(csm_weights(k4, 3));
    CHECK_THROWS(csm_weights(k4, -1));
}

TEST_CASE("csm_1 of the free matroid U_{3,3} vanishes") {
    // every flag minor pair contains a disconnected Boolean piece
    MinkowskiWeight w = csm_weights(Matroid::uniform(3, 3), 1);
    for (long long v : w.weights) CHECK(v == 0);
}

TEST_CASE("top-dimensional csm weight is identically 1 on the corpus") {
    for (auto& [name, m] : corpus::all()) {
        CAPTURE(name);
        MinkowskiWeight top = csm_weights(m, m.rank() - 1);
        for (long long w : top.weights) CHECK(w == 1);
    }
}

TEST_CASE("support route equals the flag formula") {
    for (auto& [name, m] : corpus::all()) {
        CAPTURE(name);
        if (m.n() > 10) continue;  // PG(3,2) exercised separately below
        Fan fine = fine_fan(m);
        for (int k = 0; k <= m.rank() - 1; ++k) {
            MinkowskiWeight w = csm_weights(m, k, fine);
            for (std::size_t i = 0; i < w.cones.size(); ++i) {
                CHECK(csm_weight_from_support(m, fine, w.cones[i], k) == w.weights[i]);
            }
        }
    }
    // one larger instance, sampled: all rays of PG(3,2)
    Matroid pg = corpus::pg32();
    Fan fine = fine_fan(pg);
    MinkowskiWeight w = csm_weights(pg, 1, fine);
    for (std::size_t i = 0; i < w.cones.size(); i += 13)
        CHECK(csm_weight_from_support(pg, fine, w.cones[i], 1) == w.weights[i]);
}

TEST_CASE("support route on the nested fan transports along the Cremona map") {
    // The support-intrinsic weight of a cone equals the weight of its image
    // under a verified coarse automorphism.
    Matroid k4 = corpus::k4();
    Fan nested = nested_fan(k4);
    Mask basis = bit(k4.ground().index("14")) | bit(k4.ground().index("24")) |
                 bit(k4.ground().index("34"));
    LatticeMap crem = cremona_map(k4, basis);
    std::vector<int> perm = ray_permutation(crem, nested);
    for (int k = 1; k <= 2; ++k) {
        for (const auto& cone : nested.cones_of_dim(k)) {
            std::vector<int> image;
            for (int id : cone) image.push_back(perm[id]);
            std::sort(image.begin(), image.end());
            CHECK(csm_weight_from_support(k4, nested, cone, k) ==
                  csm_weight_from_support(k4, nested, image, k));
        }
    }
}

TEST_CASE("csm weights transported by matroid automorphisms") {
    Matroid k4 = corpus::k4();
    Fan fine = fine_fan(k4);
    auto autos = k4.automorphisms();
    for (int k = 0; k <= 2; ++k) {
        MinkowskiWeight w = csm_weights(k4, k, fine);
        for (const auto& f : autos) {
            LatticeMap map = from_matroid_iso(f, k4, k4);
            std::vector<int> perm = ray_permutation(map, fine);
            for (std::size_t i = 0; i < w.cones.size(); ++i) {
                std::vector<int> image;
                for (int id : w.cones[i]) image.push_back(perm[id]);
                std::sort(image.begin(), image.end());
                CHECK(w.weight_of(image) == w.weights[i]);
            }
        }
    }
}

TEST_CASE("balancing") {
    for (auto& [name, m] : {std::pair<std::string, Matroid>{"K_4", corpus::k4()},
                            {"U_{3,4}", Matroid::uniform(3, 4)}}) {
        CAPTURE(name);
        Fan fine = fine_fan(m);
        for (int k = 0; k <= m.rank() - 1; ++k) {
            MinkowskiWeight w = csm_weights(m, k, fine);
            BalancingReport rep = balancing_check(fine, w);
            CHECK(rep.balanced);
        }
    }
    // the top csm weight balances corpus-wide
    for (auto& [name, m] : corpus::all()) {
        CAPTURE(name);
        Fan fine = fine_fan(m);
        MinkowskiWeight top = csm_weights(m, m.rank() - 1, fine);
        CHECK(balancing_check(fine, top).balanced);
    }
    // a deliberately corrupted weight fails at some face
    Matroid k4 = corpus::k4();
    Fan fine = fine_fan(k4);
    MinkowskiWeight w = csm_weights(k4, 1, fine);
    w.weights[0] += 1;
    BalancingReport rep = balancing_check(fine, w);
    CHECK_FALSE(rep.balanced);
    CHECK(rep.failing_faces.size() > 0);
}

TEST_CASE("support route input errors") {
    Matroid k4 = corpus::k4();
    Fan fine = fine_fan(k4);
    // mismatched k and cone size
    CHECK_THROWS(csm_weight_from_support(k4, fine, {0, 1}, 1));
    // not a cone: two incomparable triangles
    std::vector<int> bad;
    for (std::size_t i = 0; i < fine.rays().size() && bad.size() < 2; ++i)
        if (fine.rays()[i].flat_rank == 2 && popcount(*fine.rays()[i].flat) == 3)
            bad.push_back(static_cast<int>(i));
    REQUIRE(bad.size() == 2);
    CHECK_FALSE(fine.is_cone(bad));
    CHECK_THROWS(csm_weight_from_support(k4, fine, bad, 2));
}
