#include <doctest.h>

#include "bk/csm.hpp"
#include "bk/invariants.hpp"
#include "bk/serialize.hpp"
#include "corpus.hpp"

using namespace bk;

TEST_CASE("matroid round trips preserve the rank oracle") {
    for (auto& [name, m] : corpus::all()) {
        CAPTURE(name);
        if (m.n() > 16) continue;
        Json j = matroid_to_json(m);
        Matroid back = matroid_from_json(j);
        REQUIRE(back.n() == m.n());
        // property: identical rank oracle (sampled for the larger ones)
        if (m.n() <= 10) {
            CHECK(back.same_rank_oracle(m));
        } else {
            SplitMix64 rng(3);
            for (int t = 0; t < 2000; ++t) {
                Mask s = static_cast<Mask>(rng.next()) & m.everything();
                CHECK(back.rank(s) == m.rank(s));
            }
        }
        // byte stability: serialize -> parse -> serialize is the identity
        CHECK(matroid_to_json(back).dump() == j.dump());
    }
}

TEST_CASE("linear matroids round trip") {
    Matroid m = Matroid::linear(3, {{1, 0}, {0, 1}, {1, 1}, {1, 2}});
    Matroid back = matroid_from_json(matroid_to_json(m));
    CHECK(back.same_rank_oracle(m));
}

TEST_CASE("derived matroids serialize through their bases") {
    Matroid k4 = corpus::k4();
    Matroid minor = k4.contract(bit(0));
    Json j = matroid_to_json(minor);
    CHECK(j.at("kind") == "bases");
    Matroid back = matroid_from_json(j);
    CHECK(back.same_rank_oracle(minor));
}

TEST_CASE("fan serialization shape") {
    Matroid k4 = corpus::k4();
    Json j = fan_to_json(nested_fan(k4));
    CHECK(j.at("structure") == "nested");
    CHECK(j.at("rays").size() == 10);
    CHECK(j.at("rays")[0].contains("coords"));
    CHECK(j.at("rays")[0].contains("flat"));
    CHECK(j.at("rays")[0].contains("rank"));
    // cones list every dimension, faces included
    CHECK(j.at("cones").size() == 10 + 15);

    // product fans carry per-factor flats
    Json jp = fan_to_json(coarse_fan(corpus::parallel_u23_u23()));
    CHECK(jp.at("structure") == "product");
    CHECK(jp.at("rays")[0].contains("factor"));
}

TEST_CASE("weight and map round trips") {
    Matroid k4 = corpus::k4();
    Fan fine = fine_fan(k4);
    MinkowskiWeight w = csm_weights(k4, 1, fine);
    MinkowskiWeight back = weight_from_json(weight_to_json(w));
    CHECK(back.k == w.k);
    CHECK(back.cones == w.cones);
    CHECK(back.weights == w.weights);

    LatticeMap ident = LatticeMap::from_permutation(k4.ground().labels(), k4.ground().labels(),
                                                    {0, 1, 2, 3, 4, 5});
    LatticeMap mback = map_from_json(map_to_json(ident));
    CHECK(mback.matrix == ident.matrix);
    CHECK(mback.src_labels == ident.src_labels);
    CHECK(mback.tgt_blocks == ident.tgt_blocks);
}

TEST_CASE("malformed input is rejected") {
    Json j{{"kind", "mystery"}, {"data", Json::object()}};
    CHECK_THROWS(matroid_from_json(j));
    Json w{{"k", 1}, {"cones", Json::array({Json::array({0})})}, {"weights", Json::array()}};
    CHECK_THROWS(weight_from_json(w));
}
