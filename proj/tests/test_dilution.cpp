#include <gtest/gtest.h>

#include <numbers>
#include <sstream>

#include "oracles.hpp"

using namespace entbat;

namespace {

double closed_form_ratio(double a) { return oracle::log_negativity_alpha(a) / oracle::entropy_alpha(a); }

} // namespace

TEST(SelfDilutionTest, PointValues) {
    const CurvePoint quarter = self_dilution_point(std::numbers::pi / 4);
    EXPECT_NEAR(quarter.ratio, 1.0, 1e-9);
    const CurvePoint eighth = self_dilution_point(std::numbers::pi / 8);
    EXPECT_NEAR(eighth.ratio, closed_form_ratio(std::numbers::pi / 8), 1e-9);
    EXPECT_NEAR(eighth.ratio, 1.284, 1e-3);
    EXPECT_GT(self_dilution_point(0.01).ratio, self_dilution_point(0.1).ratio);
}

TEST(SelfDilutionTest, DefaultCurve) {
    const auto curve = self_dilution_curve();
    ASSERT_EQ(curve.size(), kDefaultCurveSteps);
    EXPECT_EQ(curve.front().alpha, 0.01);
    EXPECT_EQ(curve.back().alpha, std::numbers::pi / 4);
    EXPECT_NEAR(curve.back().ratio, 1.0, 1e-9);
    for (std::size_t i = 0; i < curve.size(); ++i) {
        const auto& p = curve[i];
        EXPECT_NEAR(p.ratio, p.e_n / p.e_c, 1e-12);
        EXPECT_NEAR(p.e_n, oracle::log_negativity_alpha(p.alpha), 1e-9);
        EXPECT_NEAR(p.ratio, closed_form_ratio(p.alpha), 1e-9);
        if (i + 1 < curve.size()) {
            EXPECT_GT(p.ratio, 1.0);
            EXPECT_GT(p.ratio, curve[i + 1].ratio);
        }
    }
}

TEST(SelfDilutionTest, RangeChecks) {
    EXPECT_THROW(self_dilution_curve(0.0, 0.5, 10), DomainError);
    EXPECT_THROW(self_dilution_curve(0.5, 0.4, 10), DomainError);
    EXPECT_THROW(self_dilution_curve(0.1, 1.0, 10), DomainError);
    EXPECT_THROW(self_dilution_curve(0.1, 0.5, 1), DomainError);
    EXPECT_EQ(self_dilution_curve(0.1, 0.5, 2).size(), 2u);
}

TEST(SelfDilutionTest, CsvFormat) {
    std::ostringstream out;
    write_curve_csv(out, self_dilution_curve(0.1, std::numbers::pi / 4, 2));
    std::istringstream in(out.str());
    std::string header, first, last;
    std::getline(in, header);
    std::getline(in, first);
    std::getline(in, last);
    EXPECT_EQ(header, "alpha,e_n,e_c,ratio");
    EXPECT_EQ(first.substr(0, 4), "0.1,");
    EXPECT_EQ(last, "0.785398163397,1,1,1");
    EXPECT_EQ(format_g12(1.0 / 3.0), "0.333333333333");
    EXPECT_EQ(format_g12(19.394076780012), "19.39407678");
}

TEST(DistillationBoundTest, Values) {
    EXPECT_NEAR(distillation_bound(bell()), 1.0, 1e-12);
    EXPECT_EQ(distillation_bound(maximally_mixed(2, 2)), 0.0);
    const double en = std::log2(oracle::trace_norm(oracle::partial_transpose(werner(0.9).matrix(), 2, 2)));
    EXPECT_NEAR(distillation_bound(werner(0.9)), en, 1e-12);
}

TEST(EmbezzlementTest, Rows) {
    std::vector<std::size_t> ds;
    for (std::size_t d = 2; d <= 17; ++d) ds.push_back(d);
    const auto rows = embezzlement_demo(ds);
    ASSERT_EQ(rows.size(), ds.size());
    for (const auto& r : rows) {
        EXPECT_NEAR(r.e_g, 0.5, 1e-12);
        EXPECT_NEAR(r.entropy, 1.0 + 0.5 * std::log2(static_cast<double>(r.d - 1)), 1e-12);
        EXPECT_TRUE(r.swap_feasible) << r.d;
        EXPECT_NEAR(r.battery_after, r.battery_before, 1e-9);
    }
    EXPECT_EQ(rows[0].amplification, 1.0);
    EXPECT_EQ(rows[3].amplification, 2.0);
    EXPECT_EQ(rows[15].amplification, 3.0);
    EXPECT_THROW(embezzlement_demo({1}), DomainError);
}
