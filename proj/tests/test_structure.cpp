#include <cmath>

#include "doctest.h"
#include "test_util.hpp"
#include "ucl/errors.hpp"
#include "ucl/structure.hpp"

using namespace ucl;
using namespace ucl::testing;

namespace {

PureState plus_state() {
    Vector v(2);
    v << Complex(1.0, 0.0), Complex(1.0, 0.0);
    return PureState::from_unnormalized(v);
}

// Generic operator of Schmidt rank >= 2: two independent product terms.
Matrix two_term_operator(int da, int db, std::mt19937_64& rng) {
    return tensor_product(random_matrix(da, da, rng), random_matrix(db, db, rng)) +
           tensor_product(random_matrix(da, da, rng), random_matrix(db, db, rng));
}

ChoiState raw_choi(int d, int M, Matrix m) {
    ChoiState a;
    a.d = d;
    a.M = M;
    a.matrix = std::move(m);
    return a;
}

}  // namespace

TEST_CASE("product operators are recognized") {
    auto rng = make_rng(51);
    Matrix w = tensor_product(random_density(2, rng), random_density(3, rng));
    ProductVerdict v = is_product_form(w, {2, 3}, {{0}});
    CHECK(v.is_product);
    CHECK(v.worst_residual < 1e-10);
    REQUIRE(v.schmidt_numbers.size() == 1);
}

TEST_CASE("the entangled projector is not a product") {
    ProductVerdict v = is_product_form(max_entangled_projector(2), {2, 2}, {{0}});
    CHECK_FALSE(v.is_product);
    REQUIRE(v.schmidt_numbers.size() == 1);
    REQUIRE(v.schmidt_numbers[0].size() == 4);
    for (double s : v.schmidt_numbers[0]) CHECK(std::abs(s - 0.5) < 1e-12);
}

TEST_CASE("classical correlation is not a product") {
    // p|00><00| + (1-p)|11><11| at p = 1/2
    Matrix w = Matrix::Zero(4, 4);
    w(0, 0) = 0.5;
    w(3, 3) = 0.5;
    ProductVerdict v = is_product_form(w, {2, 2}, {{0}});
    CHECK_FALSE(v.is_product);
}

TEST_CASE("uncorrelated Choi verification of built channels") {
    SUBCASE("det-asym is a product on every cut") {
        ChoiState a = choi_of(build_optimal_channel(Case::DetAsym, 2, 2));
        ProductVerdict v = verify_uncorrelated_choi(a, 1);
        CHECK(v.is_product);
        CHECK(v.worst_residual < 1e-10);
        CHECK(v.schmidt_numbers.size() == 2);  // (R,S_k | rest) plus one per output
    }
    SUBCASE("prob-asym with three outputs") {
        ChoiState a = choi_of(build_optimal_channel(Case::ProbAsym, 2, 3));
        ProductVerdict v = verify_uncorrelated_choi(a, 1);
        CHECK(v.is_product);
        CHECK(v.worst_residual < 1e-10);
        CHECK(v.schmidt_numbers.size() == 3);
    }
    SUBCASE("measurement-based cloning fails") {
        ChoiState a = measurement_based_cloner(2, 2);
        CHECK_FALSE(verify_uncorrelated_choi(a, 1).is_product);
    }
    SUBCASE("single output is vacuously uncorrelated") {
        ChoiState a = choi_of(build_optimal_channel(Case::ProbAsym, 2, 1));
        CHECK(verify_uncorrelated_choi(a, 1).is_product);
    }
    SUBCASE("an entangled tail is caught by the per-output cuts") {
        // X_{R S_1} (x) P+_{S_2 S_3}: fine across (R,S_1 | rest), entangled inside
        auto rng = make_rng(52);
        Matrix w = tensor_product(random_density(4, rng), max_entangled_projector(2));
        ChoiState a = raw_choi(2, 3, std::move(w));
        ProductVerdict v = verify_uncorrelated_choi(a, 1);
        CHECK_FALSE(v.is_product);
        // the favored cut alone looks clean
        CHECK(is_product_form(a.matrix, a.local_dims(), {{0, 1}}).is_product);
    }
    SUBCASE("favored index is checked") {
        ChoiState a = choi_of(build_optimal_channel(Case::DetSym, 2, 2));
        CHECK_THROWS_AS(verify_uncorrelated_choi(a, 0), std::invalid_argument);
        CHECK_THROWS_AS(verify_uncorrelated_choi(a, 3), std::invalid_argument);
    }
}

TEST_CASE("conditional outputs of the optimal channels are products") {
    for (Case c : {Case::DetSym, Case::DetAsym, Case::ProbSym, Case::ProbAsym}) {
        Channel ch = build_optimal_channel(c, 2, 2);
        auto [all_product, worst] = verify_output_uncorrelated(ch, 100, 61);
        CHECK(all_product);
        CHECK(worst < 1e-9);
    }
}

TEST_CASE("measurement-based cloning produces a correlated output") {
    Channel mb = Channel(measurement_based_cloner(2, 2));
    auto [product, residual] = output_product_check(mb, plus_state());
    CHECK_FALSE(product);
    CHECK(residual > 0.1);
    // and over Haar samples as well
    auto [all_product, worst] = verify_output_uncorrelated(mb, 50, 62);
    CHECK_FALSE(all_product);
}

TEST_CASE("constant product output passes the output check") {
    auto rng = make_rng(63);
    Matrix rho0 = random_density(2, rng);
    // Choi of psi -> rho0 (x) rho0 is I/d (x) rho0 (x) rho0
    Matrix a = tensor_product(tensor_product(Matrix::Identity(2, 2) / 2.0, rho0), rho0);
    Channel ch = Channel(raw_choi(2, 2, std::move(a)));
    auto [all_product, worst] = verify_output_uncorrelated(ch, 50, 64);
    CHECK(all_product);
    CHECK(worst < 1e-9);
}

TEST_CASE("lemma 2 criterion") {
    SUBCASE("product Choi states pass") {
        auto rng = make_rng(65);
        Matrix w = tensor_product(random_density(4, rng), random_density(2, rng));
        CHECK(lemma2_criterion(raw_choi(2, 2, std::move(w)), 1, 20, 66));
        ChoiState da = choi_of(build_optimal_channel(Case::DetAsym, 2, 2));
        CHECK(lemma2_criterion(da, 1, 20, 67));
    }
    SUBCASE("entanglement between S_k and another output fails") {
        Matrix w = tensor_product(Matrix::Identity(2, 2) / 2.0, max_entangled_projector(2));
        // A = I_R/2 (x) P+_{S_1 S_2}: the favored pair is correlated with S_2
        CHECK_FALSE(lemma2_criterion(raw_choi(2, 2, std::move(w)), 1, 20, 68));
    }
    SUBCASE("zero operator is inconclusive") {
        CHECK_THROWS_AS(lemma2_criterion(raw_choi(2, 2, Matrix::Zero(8, 8)), 1, 5, 69),
                        InconclusiveError);
    }
}

TEST_CASE("lemma 2 agrees with the favored-cut Schmidt verdict") {
    auto rng = make_rng(70);
    int checked = 0;
    for (int trial = 0; trial < 50; ++trial) {
        Matrix w;
        if (trial % 2 == 0) {
            w = tensor_product(random_psd(4, rng), random_psd(2, rng));
        } else {
            w = random_psd(8, rng);
        }
        w /= w.trace().real();
        ChoiState a = raw_choi(2, 2, std::move(w));
        bool lemma2 = lemma2_criterion(a, 1, 20, 1000 + trial);
        bool schmidt = is_product_form(a.matrix, a.local_dims(), {{0, 1}}).is_product;
        CHECK(lemma2 == schmidt);
        ++checked;
    }
    CHECK(checked == 50);
    for (Case c : {Case::DetSym, Case::DetAsym, Case::ProbSym, Case::ProbAsym}) {
        ChoiState a = choi_of(build_optimal_channel(c, 2, 2));
        CHECK(lemma2_criterion(a, 1, 20, 71) ==
              is_product_form(a.matrix, a.local_dims(), {{0, 1}}).is_product);
    }
}

TEST_CASE("lemma 1: Schmidt rank and block proportionality agree everywhere") {
    auto rng = make_rng(72);
    int agree = 0;
    for (int trial = 0; trial < 100; ++trial) {
        Matrix w = tensor_product(random_matrix(2, 2, rng), random_matrix(3, 3, rng));
        bool schmidt = is_product_form(w, {2, 3}, {{0}}).is_product;
        bool blocks = lemma1_proportionality(w, 2, 3);
        CHECK(schmidt);
        CHECK(blocks);
        if (schmidt == blocks) ++agree;
    }
    for (int trial = 0; trial < 100; ++trial) {
        Matrix w = two_term_operator(2, 3, rng);
        bool schmidt = is_product_form(w, {2, 3}, {{0}}).is_product;
        bool blocks = lemma1_proportionality(w, 2, 3);
        CHECK_FALSE(schmidt);
        CHECK_FALSE(blocks);
        if (schmidt == blocks) ++agree;
    }
    CHECK(agree == 200);
}

TEST_CASE("channel-Choi coherence for the built channels") {
    for (Case c : {Case::DetSym, Case::DetAsym, Case::ProbSym, Case::ProbAsym})
        for (int M : {2, 3}) {
            Channel ch = build_optimal_channel(c, 2, M);
            if (verify_uncorrelated_choi(choi_of(ch), 1).is_product) {
                auto [all_product, worst] = verify_output_uncorrelated(ch, 30, 73);
                CHECK(all_product);
            }
        }
}

TEST_CASE("perturbing a product Choi state raises the residual monotonically") {
    ChoiState base = choi_of(build_optimal_channel(Case::DetAsym, 2, 2));
    Matrix bump = tensor_product(Matrix::Identity(2, 2) / 2.0, max_entangled_projector(2));
    double previous = verify_uncorrelated_choi(base, 1).worst_residual;
    for (double eps : {1e-3, 1e-2, 1e-1}) {
        ChoiState noisy = raw_choi(2, 2, base.matrix + eps * bump);
        double residual = verify_uncorrelated_choi(noisy, 1).worst_residual;
        CHECK(residual > previous);
        previous = residual;
    }
}
