#include <gtest/gtest.h>

#include <numbers>

#include "oracles.hpp"

using namespace entbat;

namespace {

BipartiteState random_state(std::size_t da, std::size_t db, std::mt19937_64& rng, int rank = -1) {
    return {oracle::random_density(static_cast<int>(da * db), rng, rank), da, db};
}

/// Random mixture of product pure states: separable by construction.
BipartiteState random_separable(std::size_t da, std::size_t db, int terms, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(da * db), static_cast<Eigen::Index>(da * db));
    double total = 0.0;
    for (int t = 0; t < terms; ++t) {
        const double w = u(rng);
        m += w * product_pure(random_unit_vector(da, rng), random_unit_vector(db, rng)).matrix();
        total += w;
    }
    return {m / total, da, db};
}

BipartiteState local_rotation(const BipartiteState& s, std::mt19937_64& rng) {
    return conjugate(s, kron(random_unitary(s.dim_a(), rng), random_unitary(s.dim_b(), rng)));
}

} // namespace

TEST(MeasureIdTest, NamesRoundTrip) {
    for (auto id : kAllMeasures) EXPECT_EQ(parse_measure(to_string(id)), id);
    EXPECT_THROW(parse_measure("concurrence"), DomainError);
    EXPECT_TRUE(traits(MeasureId::LogNegativity).additive);
    EXPECT_FALSE(traits(MeasureId::RelativeEntropy).additive);
    EXPECT_TRUE(traits(MeasureId::RelativeEntropy).optimizer_backed);
    EXPECT_TRUE(traits(MeasureId::Geometric).pure_only);
}

TEST(EntropyOfEntanglementTest, Values) {
    EXPECT_NEAR(entanglement_entropy(bell()).value, 1.0, 1e-12);
    const double a = std::numbers::pi / 8;
    EXPECT_NEAR(entanglement_entropy(pure_alpha(a)).value, oracle::entropy_alpha(a), 1e-12);
    EXPECT_NEAR(entanglement_entropy(pure_alpha(a)).value, 0.6009, 1e-4);
    EXPECT_NEAR(entanglement_entropy(embezzler_psi(5)).value, 2.0, 1e-12);
    EXPECT_NEAR(entanglement_entropy(embezzler_psi(5).to_state()).value, 2.0, 1e-10);
    EXPECT_THROW(entanglement_entropy(werner(0.5)), ApplicabilityError);
}

TEST(EntropyOfEntanglementTest, AliasesAgree) {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 10; ++i) {
        const BipartiteState s = random_pure_state(3, 3, rng);
        const double e = entanglement_entropy(s).value;
        EXPECT_NEAR(e, oracle::entropy(oracle::trace_b(s.matrix(), 3, 3)), 1e-9);
        EXPECT_EQ(entanglement_cost_pure(s).value, e);
        EXPECT_EQ(squashed_pure(s).value, e);
        EXPECT_EQ(entanglement_cost_pure(s).id, MeasureId::EntanglementCostPure);
    }
    EXPECT_THROW(entanglement_cost_pure(maximally_mixed(2, 2)), ApplicabilityError);
    EXPECT_THROW(squashed_pure(maximally_mixed(2, 2)), ApplicabilityError);
}

TEST(LogNegativityTest, Values) {
    EXPECT_NEAR(log_negativity(bell()).value, 1.0, 1e-12);
    EXPECT_EQ(log_negativity(maximally_mixed(2, 3)).value, 0.0);
    EXPECT_EQ(log_negativity(werner(1.0 / 3.0)).value, 0.0);
    const double e = std::log2(oracle::trace_norm(oracle::partial_transpose(werner(0.9).matrix(), 2, 2)));
    EXPECT_NEAR(log_negativity(werner(0.9)).value, e, 1e-12);
    for (double a = 0.05; a < std::numbers::pi / 2; a += 0.1)
        EXPECT_NEAR(log_negativity(pure_alpha(a).to_state()).value, oracle::log_negativity_alpha(a), 1e-9);
}

TEST(LogNegativityTest, ZeroOnProducts) {
    std::mt19937_64 rng(32);
    for (int i = 0; i < 10; ++i) {
        const BipartiteState s(kron(oracle::random_density(2, rng), oracle::random_density(3, rng)), 2, 3);
        EXPECT_NEAR(log_negativity(s).value, 0.0, 1e-12);
        EXPECT_NEAR(squashed_upper(s).value, 0.0, 1e-12);
    }
}

TEST(LogNegativityTest, Additive) {
    std::mt19937_64 rng(33);
    for (int i = 0; i < 20; ++i) {
        const BipartiteState x = random_state(2, 2, rng, 2), y = random_state(2, 2, rng, 1);
        EXPECT_NEAR(log_negativity(tensor(x, y)).value, log_negativity(x).value + log_negativity(y).value, 1e-8);
    }
}

TEST(GeometricTest, Values) {
    EXPECT_NEAR(geometric_entanglement(bell()).value, 0.5, 1e-12);
    for (std::size_t d = 2; d <= 10; ++d) {
        EXPECT_NEAR(geometric_entanglement(embezzler_psi(d)).value, 0.5, 1e-12);
        EXPECT_NEAR(geometric_entanglement(embezzler_psi(d).to_state()).value, 0.5, 1e-9);
    }
    for (std::size_t n = 1; n <= 3; ++n)
        EXPECT_NEAR(geometric_entanglement(tensor_power(bell(), n)).value, 1.0 - std::pow(0.5, n), 1e-10);
    EXPECT_THROW(geometric_entanglement(werner(0.9)), ApplicabilityError);
}

TEST(GeometricTest, CertificateReproducesValue) {
    std::mt19937_64 rng(34);
    for (int i = 0; i < 10; ++i) {
        const BipartiteState s = random_pure_state(2, 3, rng);
        const MeasureResult r = geometric_entanglement(s);
        ASSERT_TRUE(r.certificate.has_value());
        EXPECT_GE(r.value, 0.0);
        EXPECT_LT(r.value, 1.0);
        EXPECT_NEAR(objective_at_certificate(MeasureId::Geometric, s, *r.certificate), r.value, 1e-8);
    }
    const PureSchmidtState p = pure_alpha(0.4);
    const MeasureResult r = geometric_entanglement(p);
    EXPECT_NEAR(objective_at_certificate(MeasureId::Geometric, p.to_state(), *r.certificate), r.value, 1e-8);
}

TEST(SquashedUpperTest, Values) {
    EXPECT_NEAR(squashed_upper(bell()).value, 1.0, 1e-12);
    const ComplexMatrix w = werner(0.9).matrix();
    const double half_mi = 0.5 * (oracle::entropy(oracle::trace_b(w, 2, 2)) + oracle::entropy(oracle::trace_a(w, 2, 2)) -
                                  oracle::entropy(w));
    EXPECT_NEAR(squashed_upper(werner(0.9)).value, half_mi, 1e-10);
    std::mt19937_64 rng(35);
    for (int i = 0; i < 5; ++i) {
        const BipartiteState s = random_pure_state(3, 3, rng);
        EXPECT_NEAR(squashed_upper(s).value, entanglement_entropy(s).value, 1e-9);
    }
}

TEST(RelativeEntropyOfEntanglementTest, Calibration) {
    const MeasureResult b = relative_entropy_of_entanglement(bell());
    EXPECT_GE(b.value, 0.995);
    EXPECT_LE(b.value, 1.005);
    EXPECT_NEAR(relative_entropy_of_entanglement(maximally_correlated_lami()).value, std::log2(1.5), 5e-3);
    EXPECT_LE(relative_entropy_of_entanglement(maximally_mixed(2, 2)).value, 1e-4);
    for (double p : {0.5, 0.9})
        EXPECT_NEAR(relative_entropy_of_entanglement(werner(p)).value, oracle::werner_er(p), 5e-3);
}

TEST(RelativeEntropyOfEntanglementTest, CertificateAndConvergence) {
    std::mt19937_64 rng(36);
    const BipartiteState s = random_state(2, 2, rng, 2);
    const MeasureResult r = relative_entropy_of_entanglement(s);
    ASSERT_TRUE(r.certificate.has_value());
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.certificate->terms(), 16u);
    EXPECT_NEAR(r.certificate->weights.sum(), 1.0, 1e-12);
    EXPECT_GE(r.certificate->weights.minCoeff(), 0.0);
    EXPECT_LE((r.certificate->local_a.colwise().norm().array() - 1.0).abs().maxCoeff(), 1e-12);
    EXPECT_NEAR(objective_at_certificate(MeasureId::RelativeEntropy, s, *r.certificate), r.value, 1e-8);
    EXPECT_NO_THROW(BipartiteState(r.certificate->assemble(), 2, 2));
}

TEST(RelativeEntropyOfEntanglementTest, HistoryNeverIncreases) {
    std::mt19937_64 rng(37);
    OptimizerOptions opts;
    opts.record_history = true;
    opts.restarts = 2;
    const SeparableFit fit = minimize_relative_entropy(random_state(2, 3, rng, 3), opts);
    ASSERT_GT(fit.history.size(), 1u);
    for (std::size_t i = 1; i < fit.history.size(); ++i) EXPECT_LE(fit.history[i], fit.history[i - 1]);
}

TEST(RelativeEntropyOfEntanglementTest, SeparableInputsNearZero) {
    std::mt19937_64 rng(38);
    for (int i = 0; i < 3; ++i)
        EXPECT_LE(relative_entropy_of_entanglement(random_separable(2, 2, 3, rng)).value, 1e-4);
}

TEST(RelativeEntropyOfEntanglementTest, DeterministicForSeed) {
    const BipartiteState s = werner(0.7);
    OptimizerOptions opts;
    opts.seed = 42;
    EXPECT_EQ(relative_entropy_of_entanglement(s, opts).value, relative_entropy_of_entanglement(s, opts).value);
}

TEST(RelativeEntropyOfEntanglementTest, DimensionBudget) {
    EXPECT_THROW(relative_entropy_of_entanglement(maximally_mixed(6, 7)), CapacityError);
    OptimizerOptions opts;
    opts.restarts = 0;
    EXPECT_THROW(relative_entropy_of_entanglement(bell(), opts), DomainError);
}

TEST(RelativeEntropyOfEntanglementTest, Subadditive) {
    std::mt19937_64 rng(39);
    for (int i = 0; i < 2; ++i) {
        const BipartiteState x = random_state(2, 2, rng, 2), y = random_state(2, 1, rng);
        const double joint = relative_entropy_of_entanglement(tensor(x, y)).value;
        EXPECT_LE(joint, relative_entropy_of_entanglement(x).value + relative_entropy_of_entanglement(y).value + 1e-2);
    }
}

TEST(LocalUnitaryInvarianceTest, AllMeasures) {
    std::mt19937_64 rng(40);
    for (int i = 0; i < 5; ++i) {
        const BipartiteState pure = random_pure_state(2, 3, rng);
        const BipartiteState mixed = random_state(2, 2, rng, 2);
        const BipartiteState pure_r = local_rotation(pure, rng), mixed_r = local_rotation(mixed, rng);
        for (auto id : kAllMeasures) {
            if (id == MeasureId::RelativeEntropy) continue;
            EXPECT_NEAR(measure_value(id, pure), measure_value(id, pure_r), 1e-6) << to_string(id);
            if (!traits(id).pure_only)
                EXPECT_NEAR(measure_value(id, mixed), measure_value(id, mixed_r), 1e-6) << to_string(id);
        }
        if (i == 0)
            EXPECT_NEAR(measure_value(MeasureId::RelativeEntropy, mixed),
                        measure_value(MeasureId::RelativeEntropy, mixed_r), 2e-3);
    }
}

TEST(EvaluateTest, Dispatch) {
    EXPECT_NEAR(evaluate(MeasureId::LogNegativity, bell()).value, 1.0, 1e-12);
    EXPECT_NEAR(evaluate(MeasureId::Geometric, bell()).value, 0.5, 1e-12);
    EXPECT_LE(evaluate(MeasureId::RelativeEntropy, maximally_mixed(2, 2)).value, 1e-4);
    EXPECT_EQ(evaluate(MeasureId::SquashedUpper, bell()).id, MeasureId::SquashedUpper);
    EXPECT_THROW(evaluate(MeasureId::EntropyOfEntanglement, werner(0.5)), ApplicabilityError);
}
