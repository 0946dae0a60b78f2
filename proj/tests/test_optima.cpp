#include <cmath>

#include "doctest.h"
#include "ucl/fidelity.hpp"
#include "ucl/optima.hpp"
#include "ucl/qmath.hpp"

using namespace ucl;

TEST_CASE("discriminant values") {
    CHECK(std::abs(discriminant(2, 2) - std::sqrt(5.0)) < 1e-15);
    CHECK(std::abs(discriminant(2, 1) - 2.0) < 1e-15);  // M = 1 collapses to d
    CHECK(std::abs(discriminant(3, 2) - std::sqrt(8.0)) < 1e-15);
    // both radicand arrangements agree
    for (int d = 2; d <= 6; ++d)
        for (int M = 1; M <= 6; ++M) {
            double naive = std::sqrt(static_cast<double>(M + d - 1) * (M + d - 1) -
                                     4.0 * (M - 1) * (d - 1));
            CHECK(std::abs(discriminant(d, M) - naive) < 1e-12);
        }
}

TEST_CASE("lambda_max closed form") {
    CHECK(std::abs(lambda_max(2, 2) - (3.0 + std::sqrt(5.0)) / 4.0) < 1e-15);
    CHECK(std::abs(lambda_max(3, 2) - (4.0 + std::sqrt(8.0)) / 6.0) < 1e-15);
    for (int d = 2; d <= 5; ++d) CHECK(std::abs(lambda_max(d, 1) - 1.0) < 1e-15);
}

TEST_CASE("lambda_max matches the numerically computed top eigenvalue") {
    for (int d = 2; d <= 5; ++d)
        for (int M = 1; M <= 4; ++M) {
            Matrix op = max_entangled_projector(d);
            Matrix zero_proj = Matrix::Zero(d, d);
            zero_proj(0, 0) = 1.0;
            op += (static_cast<double>(M - 1) / d) *
                  tensor_product(zero_proj, Matrix::Identity(d, d));
            HermitianSpectrum spec = hermitian_eig(op);
            CHECK(std::abs(spec.eigenvalues[0] - lambda_max(d, M)) < 1e-10);
        }
}

TEST_CASE("xi and gamma") {
    SUBCASE("M = 1 gives the identity filter") {
        auto [xi, gamma] = xi_gamma(2, 1);
        CHECK(std::abs(xi - 0.5) < 1e-15);
        CHECK(std::abs(gamma - 1.0) < 1e-15);
    }
    SUBCASE("d = 2, M = 2 is golden") {
        auto [xi, gamma] = xi_gamma(2, 2);
        CHECK(std::abs(xi - 0.7236067977499790) < 1e-14);
        CHECK(std::abs(gamma - 0.6180339887498949) < 1e-14);
    }
    SUBCASE("d = 3, M = 2 is exactly one half") {
        auto [xi, gamma] = xi_gamma(3, 2);
        CHECK(std::abs(xi - 0.5) < 1e-14);
        CHECK(std::abs(gamma - 1.0 / std::sqrt(2.0)) < 1e-14);
    }
    SUBCASE("gamma stays a contraction") {
        for (int d = 2; d <= 6; ++d)
            for (int M = 1; M <= 6; ++M) {
                auto [xi, gamma] = xi_gamma(d, M);
                CHECK(xi > 0.0);
                CHECK(xi <= 1.0 + 1e-15);
                CHECK(gamma >= 0.0);
                CHECK(gamma <= 1.0 + 1e-12);
            }
    }
}

TEST_CASE("optimal fidelities per case") {
    SUBCASE("det-sym") {
        OptimaReport r = optimal_fidelities(Case::DetSym, 2, 2);
        CHECK(r.f_bar == 0.5);
        CHECK(r.f_k == 0.5);
        CHECK(r.f_other == 0.5);
        CHECK_FALSE(r.xi.has_value());
        CHECK_FALSE(r.gamma.has_value());
    }
    SUBCASE("det-asym") {
        OptimaReport r = optimal_fidelities(Case::DetAsym, 2, 2);
        CHECK(r.f_bar == 0.75);
        CHECK(r.f_k == 1.0);
        CHECK(r.f_other == 0.5);
        CHECK_FALSE(r.discriminant.has_value());
    }
    SUBCASE("prob-asym d=2 M=2") {
        OptimaReport r = optimal_fidelities(Case::ProbAsym, 2, 2);
        CHECK(std::abs(r.f_bar - 0.7696723314583158) < 1e-14);
        CHECK(std::abs(r.f_k - 0.9648090636666387) < 1e-14);
        CHECK(std::abs(r.f_other - 0.5745355992499930) < 1e-14);
        REQUIRE(r.xi.has_value());
        CHECK(std::abs(*r.xi - 0.7236067977499790) < 1e-14);
    }
    SUBCASE("prob-asym d=3 M=2") {
        OptimaReport r = optimal_fidelities(Case::ProbAsym, 3, 2);
        CHECK(std::abs(r.f_bar - 0.6767766952966369) < 1e-14);
        CHECK(std::abs(r.f_k - 0.9785533905932737) < 1e-14);
        CHECK(std::abs(r.f_other - 0.375) < 1e-14);
    }
    SUBCASE("prob-sym") {
        OptimaReport r = optimal_fidelities(Case::ProbSym, 2, 2);
        CHECK(std::abs(r.f_bar - 2.0 / 3.0) < 1e-15);
        CHECK(r.f_k == r.f_other);
        CHECK(r.f_k == r.f_bar);
    }
}

TEST_CASE("per-output decomposition is consistent with the mean") {
    for (int d = 2; d <= 5; ++d)
        for (int M = 1; M <= 5; ++M)
            for (Case c : {Case::DetSym, Case::DetAsym, Case::ProbSym, Case::ProbAsym}) {
                OptimaReport r = optimal_fidelities(c, d, M);
                CHECK(std::abs(r.f_bar - (r.f_k + (M - 1) * r.f_other) / M) < 1e-10);
            }
}

TEST_CASE("prob-asym degenerates to the identity at M = 1") {
    OptimaReport r = optimal_fidelities(Case::ProbAsym, 2, 1);
    CHECK(std::abs(r.f_bar - 1.0) < 1e-14);
    REQUIRE(r.xi.has_value());
    CHECK(std::abs(*r.xi - 0.5) < 1e-14);
    REQUIRE(r.gamma.has_value());
    CHECK(std::abs(*r.gamma - 1.0) < 1e-14);
}

TEST_CASE("probabilistic outputs clear the randomization floor") {
    for (int d = 2; d <= 5; ++d)
        for (int M = 2; M <= 5; ++M) {
            OptimaReport r = optimal_fidelities(Case::ProbAsym, d, M);
            CHECK(r.f_other > 1.0 / d);
            CHECK(r.f_k > 1.0 / d);
        }
}

TEST_CASE("bridge identities tie the cases together") {
    for (int d = 2; d <= 5; ++d) {
        OptimaReport det_asym = optimal_fidelities(Case::DetAsym, d, 3);
        CHECK(std::abs(average_from_entanglement(1.0 / (d * d), d) - det_asym.f_other) <
              1e-15);
        OptimaReport prob_sym = optimal_fidelities(Case::ProbSym, d, 3);
        CHECK(std::abs(average_from_entanglement(1.0 / d, d) - prob_sym.f_bar) < 1e-15);
    }
}

TEST_CASE("average_from_entanglement") {
    CHECK(average_from_entanglement(1.0, 2) == 1.0);
    CHECK(average_from_entanglement(0.25, 2) == 0.5);
    for (int d = 2; d <= 5; ++d)
        CHECK(std::abs(average_from_entanglement(1.0 / d, d) - 2.0 / (d + 1)) < 1e-15);
}

TEST_CASE("table layout and ordering") {
    auto rows = table({2}, {2});
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].scenario == Case::DetSym);
    CHECK(rows[0].f_bar == 0.5);
    CHECK(rows[2].scenario == Case::ProbSym);
    CHECK(std::abs(rows[2].f_bar - 2.0 / 3.0) < 1e-15);

    auto grid = table({2, 3}, {2, 3});
    CHECK(grid.size() == 16);
    CHECK_THROWS_AS(table({}, {2}), std::invalid_argument);
}

TEST_CASE("prob-asym mean fidelity is nonincreasing in M") {
    for (int d = 2; d <= 4; ++d) {
        double prev = optimal_fidelities(Case::ProbAsym, d, 1).f_bar;
        CHECK(std::abs(prev - 1.0) < 1e-14);
        for (int M = 2; M <= 6; ++M) {
            double cur = optimal_fidelities(Case::ProbAsym, d, M).f_bar;
            CHECK(cur <= prev + 1e-14);
            prev = cur;
        }
    }
}

TEST_CASE("case ordering prob-asym >= det-asym >= det-sym") {
    for (int d = 2; d <= 5; ++d)
        for (int M = 1; M <= 4; ++M) {
            double pa = optimal_fidelities(Case::ProbAsym, d, M).f_bar;
            double da = optimal_fidelities(Case::DetAsym, d, M).f_bar;
            double ds = optimal_fidelities(Case::DetSym, d, M).f_bar;
            CHECK(pa >= da - 1e-14);
            CHECK(da >= ds - 1e-14);
        }
}

TEST_CASE("closed-form mean entanglement fidelity") {
    CHECK(std::abs(closed_form_mean_entanglement_fidelity(Case::ProbAsym, 2, 2) -
                   (3.0 + std::sqrt(5.0)) / 8.0) < 1e-15);
    CHECK(closed_form_mean_entanglement_fidelity(Case::ProbSym, 2, 2) == 0.5);
    CHECK(closed_form_mean_entanglement_fidelity(Case::DetSym, 2, 2) == 0.25);
    CHECK(std::abs(closed_form_mean_entanglement_fidelity(Case::DetAsym, 2, 2) - 0.625) <
          1e-15);
    // bridging the closed-form mean reproduces f_bar
    for (int d = 2; d <= 4; ++d)
        for (int M = 1; M <= 4; ++M)
            for (Case c : {Case::DetSym, Case::DetAsym, Case::ProbSym, Case::ProbAsym}) {
                double fe = closed_form_mean_entanglement_fidelity(c, d, M);
                double f = optimal_fidelities(c, d, M).f_bar;
                CHECK(std::abs(average_from_entanglement(fe, d) - f) < 1e-12);
            }
}
