// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>

#include "icc_cta/icc_code.hpp"

using namespace icc_cta;

TEST_CASE("weight formula") {
    CHECK(weight_for(7, 1) == 4);
    CHECK(weight_for(5, 5) == 5);
    CHECK(weight_for(167, 127) == 147);
    CHECK_THROWS_AS(weight_for(6, 1), std::domain_error);  // odd n_b + s
    CHECK_THROWS_AS(weight_for(3, 5), std::domain_error);  // s > n_b
    CHECK_THROWS_AS(weight_for(4, 0), std::domain_error);
}

TEST_CASE("code size") {
    CHECK(code_size(7, 4) == 35);
    CHECK(code_size(5, 5) == 1);
    CHECK(code_size(7, 0) == 1);
    CHECK(code_size(167, 147) == binomial(167, 20));
}

TEST_CASE("code rate") {
    CHECK(code_rate(7, 1) == doctest::Approx(0.7328).epsilon(1e-4 / 0.7328));
    CHECK(code_rate(5, 5) == 0.0);
    CHECK(code_rate(167, 127) == doctest::Approx(0.5083).epsilon(1e-3 / 0.5083));
}

TEST_CASE("code rate monotone in n_b at fixed s") {
    for (int s : {1, 2, 3}) {
        double prev = -1.0;
        for (int n_b = s + 2; n_b <= s + 40; n_b += 2) {
            const double r = code_rate(n_b, s);
            CHECK(r > prev);
            prev = r;
        }
    }
}

TEST_CASE("identification error probability, closed form") {
    CHECK(iep_closed_form(7, 1) == doctest::Approx(0.1328125).epsilon(1e-12));
    // (7! - 4!3!) / (2^8 * 4!3!) spelled out
    CHECK(iep_closed_form(7, 1) == doctest::Approx((5040.0 - 144.0) / (256.0 * 144.0)));
    CHECK(iep_closed_form(3, 1) == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(iep_closed_form(5, 5) == 0.0);
}

TEST_CASE("identification error probability, exhaustive oracle") {
    CHECK(iep_bruteforce(7, 1) == BigRational(34, 256));
    CHECK(iep_bruteforce(3, 1) == BigRational(4, 32));
    CHECK(iep_bruteforce(5, 5) == BigRational(0, 1));
    CHECK_THROWS_AS(iep_bruteforce(22, 2), std::domain_error);
}

TEST_CASE("oracle equals closed form for all n_b <= 12") {
    for (int n_b = 1; n_b <= 12; ++n_b)
        for (int s = 1 + (n_b % 2 == 0 ? 1 : 0); s <= n_b; s += 2)
            CHECK(iep_bruteforce(n_b, s) == iep_closed_form_exact(n_b, s));
}

TEST_CASE("unrank basics") {
    IccCode c42(4, 2); // w = 3
    CHECK(c42.size() == 4);
    CHECK(c42.unrank(0).bits == std::vector<uint8_t>{0, 1, 1, 1});
    CHECK(c42.unrank(3).bits == std::vector<uint8_t>{1, 1, 1, 0});
    CHECK_THROWS_AS(c42.unrank(4), std::out_of_range);

    IccCode c71(7, 1); // w = 4
    CHECK(c71.unrank(34).bits == std::vector<uint8_t>{1, 1, 1, 1, 0, 0, 0});
}

TEST_CASE("rank and unrank are mutual inverses") {
    SUBCASE("exhaustive over small codebooks") {
        for (int n_b : {4, 7, 9, 12}) {
            const int s = n_b % 2 ? 1 : 2;
            IccCode code(n_b, s);
            for (BigInt i = 0; i < code.size(); ++i) {
                const Codeword cw = code.unrank(i);
                CHECK(cw.weight() == code.weight());
                CHECK(code.rank(cw.bits) == i);
            }
        }
    }
    SUBCASE("random indices over a large codebook") {
        IccCode code(167, 127);
        Rng rng(42);
        for (int t = 0; t < 10000; ++t) {
            BigInt i = 0;
            for (int k = 0; k < 3; ++k) {
                i <<= 64;
                i += rng.next_u64();
            }
            i %= code.size();
            const Codeword cw = code.unrank(i);
            CHECK(cw.weight() == 147);
            CHECK(code.rank(cw.bits) == i);
        }
    }
}

TEST_CASE("codeword order is lexicographic") {
    IccCode code(6, 2);
    std::vector<std::vector<uint8_t>> words;
    for (BigInt i = 0; i < code.size(); ++i)
        words.push_back(code.unrank(i).bits);
    for (size_t i = 1; i < words.size(); ++i)
        CHECK(words[i - 1] < words[i]);
}

TEST_CASE("minimum pairwise overlap") {
    CHECK(IccCode(7, 1).min_pairwise_overlap(1u << 20) == 1);
    CHECK(IccCode(5, 5).min_pairwise_overlap(1u << 20) == 5);
    CHECK(IccCode(6, 2).min_pairwise_overlap(1u << 20) == 2);
    SUBCASE("tightness for all n_b <= 12") {
        for (int n_b = 2; n_b <= 12; ++n_b)
            for (int s = 1 + (n_b % 2 == 0 ? 1 : 0); s < n_b; s += 2)
                CHECK(IccCode(n_b, s).min_pairwise_overlap(1u << 24) == s);
    }
    SUBCASE("sampling mode lower-bounds at s") {
        Rng rng(7);
        IccCode code(31, 3);
        CHECK(code.min_pairwise_overlap(5000, &rng) >= 3);
    }
}

TEST_CASE("membership is a popcount check") {
    IccCode code(7, 1);
    CHECK(code.is_codeword({1, 1, 1, 1, 0, 0, 0}));
    CHECK(!code.is_codeword({1, 1, 1, 0, 0, 0, 0}));
    CHECK(!code.is_codeword({1, 1, 1, 1, 1, 0, 0}));
}
