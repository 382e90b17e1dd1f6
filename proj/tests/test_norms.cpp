#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "bregkit/norms.hpp"
#include "bregkit/rng.hpp"

using namespace bregkit;

TEST_CASE("lp norm evaluation") {
    CHECK(norm_eval(NormSpec::lp(2, 2), {3.0, 4.0}) == doctest::Approx(5.0));
    CHECK(norm_eval(NormSpec::lp(1, 3), {1.0, -2.0, 3.0}) == doctest::Approx(6.0));
    CHECK(norm_eval(NormSpec::lp(std::numeric_limits<double>::infinity(), 3), {1.0, -7.0, 3.0}) ==
          doctest::Approx(7.0));
    CHECK(norm_eval(NormSpec::lp(1.5, 1), {-2.0}) == doctest::Approx(2.0));
    CHECK_THROWS_AS(norm_eval(NormSpec::lp(2, 2), {1.0}), DimensionMismatch);
}

TEST_CASE("mixed l1/l2 norm evaluation") {
    CHECK(norm_eval(NormSpec::mixed_l1_l2(2, 4), {1.0, 1.0, 3.0, 4.0}) == doctest::Approx(7.0));
    // split 0 is the Euclidean norm
    CHECK(norm_eval(NormSpec::mixed_l1_l2(0, 2), {3.0, 4.0}) == doctest::Approx(5.0));
    CHECK_THROWS_AS(NormSpec::mixed_l1_l2(3, 4), InvalidSpec);
    CHECK_THROWS_AS(NormSpec::mixed_l1_l2(6, 4), InvalidSpec);
}

TEST_CASE("equivalence constants for the lp family") {
    const auto e1 = equivalence_constants(NormSpec::lp(1, 4));
    CHECK(e1.c2 == doctest::Approx(0.5));
    CHECK(e1.c_inf == doctest::Approx(1.0));
    CHECK(e1.gamma == doctest::Approx(4.0));

    const auto e2 = equivalence_constants(NormSpec::lp(2, 9));
    CHECK(e2.c2 == doctest::Approx(1.0));
    CHECK(e2.gamma == doctest::Approx(3.0));

    const auto ei = equivalence_constants(NormSpec::lp(std::numeric_limits<double>::infinity(), 3));
    CHECK(ei.c2 == doctest::Approx(1.0));
    CHECK(ei.c_inf == doctest::Approx(1.0));
    CHECK(ei.gamma == doctest::Approx(1.0));
}

TEST_CASE("constants hold on sampled vectors") {
    for (std::size_t dim : {1u, 2u, 5u, 8u}) {
        for (double p : {1.0, 1.5, 2.0, 3.0, std::numeric_limits<double>::infinity()}) {
            const NormSpec n = NormSpec::lp(p, dim);
            CHECK(verify_equivalence_constants(n, equivalence_constants(n), 42, 10000) >= -1e-12);
        }
        if (dim % 2 == 0) {
            for (std::size_t split : {std::size_t(0), std::size_t(2), dim}) {
                const NormSpec n = NormSpec::mixed_l1_l2(split, dim);
                CHECK(verify_equivalence_constants(n, equivalence_constants(n), 7, 10000) >=
                      -1e-12);
            }
        }
    }
}

TEST_CASE("homogeneity") {
    Rng rng(3);
    const NormSpec norms[] = {NormSpec::lp(1.7, 4), NormSpec::mixed_l1_l2(2, 4)};
    for (const auto& n : norms) {
        for (int it = 0; it < 1000; ++it) {
            Vector v(4);
            for (auto& x : v) x = rng.normal();
            const double a = rng.normal() * rng.log_uniform(1e-3, 1e3);
            const double lhs = norm_eval(n, [&] {
                Vector s = v;
                for (auto& x : s) x *= a;
                return s;
            }());
            const double rhs = std::fabs(a) * norm_eval(n, v);
            CHECK(std::fabs(lhs - rhs) <= 1e-14 * std::max(1.0, rhs));
        }
    }
}
