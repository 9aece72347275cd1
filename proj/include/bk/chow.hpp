#pragma once

#include <string>
#include <vector>

#include "bk/fan.hpp"
#include "bk/matroid.hpp"

namespace bk {

// x_{F_1}^{d_1} ... x_{F_k}^{d_k} with F_1 c F_2 c ... a strict chain of
// proper nonempty flats and positive exponents.
struct FlagMonomial {
    std::vector<Mask> flats;
    std::vector<int> exponents;

    int total_degree() const {
        int t = 0;
        for (int e : exponents) t += e;
        return t;
    }
};

struct DegreeValue {
    long long value = 0;
    bool non_face = false;  // product lies in the non-face ideal
};

// Degree of a flag monomial in the Chow ring of the fine structure, via the
// characteristic-polynomial coefficient formula. Non-chain inputs evaluate
// to 0 and are tagged non_face.
DegreeValue eur_degree(const Matroid& m, const FlagMonomial& monomial);

struct RelationCheck {
    bool equal = false;
    long long sum_i = 0;
    long long sum_j = 0;
};

// Multiplies a degree-(d-1) monomial by the two linear forms sum_{F ni i} x_F
// and sum_{G ni j} x_G and compares degrees; both sums must agree because
// their difference lies in the linear ideal.
RelationCheck relation_annihilation_check(const Matroid& m, const FlagMonomial& partial,
                                          int i, int j);

// Closed-form degrees in the coarse Chow ring of a rank-3 matroid whose
// coarse structure exists via the Feichtner-Sturmfels criterion. Rays are
// given by their flats (rank 1, or connected rank 2).
long long coarse_rank3_degree(const Matroid& m, Mask ray_a, Mask ray_b);

struct ChowPresentation {
    int generator_count = 0;
    std::vector<std::vector<int>> minimal_non_faces;  // sorted ray-id sets
    IntMat relations;  // one row per quotient-basis covector, columns = rays
};

ChowPresentation chow_presentation(const Fan& fan);

}  // namespace bk
