#include <doctest.h>

#include <cmath>

#include "test_oracles.hpp"
#include "upm/errors.hpp"
#include "upm/metrics.hpp"
#include "upm/rng.hpp"

using namespace upm;

namespace {

ConfusionMatrix make_cm(std::int64_t pp, std::int64_t pu, std::int64_t up, std::int64_t uu) {
    ConfusionMatrix cm;
    cm.counts = {{{pp, pu}, {up, uu}}};
    return cm;
}

oracle::Pairs to_pairs(const ConfusionMatrix& cm) {
    oracle::Pairs pairs;
    for (int a = 0; a < 2; ++a)
        for (int p = 0; p < 2; ++p)
            for (std::int64_t i = 0; i < cm.at(a, p); ++i) pairs.emplace_back(a, p);
    return pairs;
}

}  // namespace

TEST_SUITE("evaluate.metrics") {

TEST_CASE("accuracy") {
    CHECK(accuracy_pct(make_cm(50, 0, 0, 50)) == doctest::Approx(100.0));
    CHECK(accuracy_pct(make_cm(40, 10, 10, 40)) == doctest::Approx(80.0));
    CHECK(accuracy_pct(make_cm(10, 0, 0, 0)) == doctest::Approx(100.0));
    CHECK_THROWS_AS(accuracy_pct(ConfusionMatrix{}), DataError);
}

TEST_CASE("weighted F1") {
    CHECK(weighted_f1_pct(make_cm(40, 10, 10, 40)) == doctest::Approx(80.0));
    CHECK(weighted_f1_pct(make_cm(50, 0, 0, 50)) == doctest::Approx(100.0));
    // Class F1s 2/3 and 8/11 at supports 0.4/0.6.
    CHECK(weighted_f1_pct(make_cm(30, 10, 20, 40)) ==
          doctest::Approx(100.0 * (0.4 * (2.0 / 3.0) + 0.6 * (8.0 / 11.0))).epsilon(1e-12));
    CHECK(weighted_f1_pct(make_cm(30, 10, 20, 40)) == doctest::Approx(70.30).epsilon(1e-3));
}

TEST_CASE("kappa") {
    CHECK(cohen_kappa(make_cm(50, 0, 0, 50)) == doctest::Approx(1.0));
    CHECK(cohen_kappa(make_cm(40, 10, 10, 40)) == doctest::Approx(0.6));
    CHECK(cohen_kappa(make_cm(50, 0, 50, 0)) == doctest::Approx(0.0));
    CHECK(cohen_kappa(make_cm(7, 0, 0, 0)) == doctest::Approx(1.0));  // p_e = 1, p_o = 1
}

TEST_CASE("metrics match the pairwise brute-force oracle on random matrices") {
    Rng rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto cm = make_cm(rng.next_below(50), rng.next_below(50), rng.next_below(50),
                                rng.next_below(50));
        if (cm.total() == 0) continue;
        const auto pairs = to_pairs(cm);
        CHECK(std::fabs(accuracy_pct(cm) - oracle::accuracy_pct(pairs)) < 1e-12);
        CHECK(std::fabs(weighted_f1_pct(cm) - oracle::weighted_f1_pct(pairs)) < 1e-12);
        CHECK(std::fabs(cohen_kappa(cm) - oracle::cohen_kappa(pairs)) < 1e-12);
        CHECK(cohen_kappa(cm) <= 1.0);
        // Algebraic identity: kappa rescales p_o against chance.
        const double n = static_cast<double>(cm.total());
        const double po = (cm.at(0, 0) + cm.at(1, 1)) / n;
        const double pe = (cm.row_sum(0) * cm.col_sum(0) + cm.row_sum(1) * cm.col_sum(1)) / (n * n);
        if (pe < 1.0)
            CHECK(cohen_kappa(cm) == doctest::Approx((po - pe) / (1.0 - pe)).epsilon(1e-12));
    }
}

TEST_CASE("matrix accumulation") {
    ConfusionMatrix a = make_cm(1, 2, 3, 4);
    a += make_cm(10, 20, 30, 40);
    CHECK(a == make_cm(11, 22, 33, 44));
    CHECK(a.total() == 110);
}

}  // TEST_SUITE
