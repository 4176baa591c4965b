#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "synutil/errors.hpp"
#include "synutil/measures.hpp"
#include "test_helpers.hpp"

using namespace synutil;
using namespace testutil;

namespace {

double raw(const UtilityResult& r, MeasureId id) { return r.measures.at(id).raw; }

// Expected values below were frozen from a standalone brute-force evaluation
// of each formula (independent scripts, run before this module was written).
const CellTable kWorked = table_from_counts({2, 2}, {4, 0});

}  // namespace

TEST_CASE("worked 2-cell table: pMSE and VW") {
  const UtilityResult r = tab_utility(kWorked, all_measures());
  CHECK(raw(r, MeasureId::pMSE) == doctest::Approx(0.08333333333333333).epsilon(1e-12));
  CHECK(raw(r, MeasureId::VW) == doctest::Approx(5.333333333333333).epsilon(1e-12));
  // pMSE = VW c(1-c)^2 / N
  CHECK(raw(r, MeasureId::pMSE) ==
        doctest::Approx(raw(r, MeasureId::VW) * 0.5 * 0.25 / 8).epsilon(1e-12));
}

TEST_CASE("worked 2-cell table: FT and dBhatt") {
  const UtilityResult r = tab_utility(kWorked, all_measures());
  CHECK(raw(r, MeasureId::FT) == doctest::Approx(9.372583002030481).epsilon(1e-12));
  CHECK(raw(r, MeasureId::dBhatt) == doctest::Approx(0.5411961001461969).epsilon(1e-12));
  CHECK(raw(r, MeasureId::dBhatt) ==
        doctest::Approx(std::sqrt(raw(r, MeasureId::FT) / (8.0 * 4.0))).epsilon(1e-12));
}

TEST_CASE("worked 2-cell table: remaining measures") {
  const UtilityResult r = tab_utility(kWorked, all_measures());
  CHECK(raw(r, MeasureId::MabsDD) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(raw(r, MeasureId::SPECKS) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(raw(r, MeasureId::PO50) == doctest::Approx(25.0).epsilon(1e-12));
  CHECK(raw(r, MeasureId::JSD) == doctest::Approx(0.31127812445913283).epsilon(1e-12));
  CHECK(raw(r, MeasureId::G) == doctest::Approx(5.545177444479562).epsilon(1e-12));
  CHECK(raw(r, MeasureId::WMabsDD) == doctest::Approx(3.9538307837475353).epsilon(1e-12));
  CHECK(raw(r, MeasureId::U) == doctest::Approx(22.0).epsilon(1e-12));
  CHECK(r.k == 2);
  CHECK(r.dfG == 1);
}

TEST_CASE("formula variants behind the compatibility flags") {
  TabOptions opts;
  opts.g_proportion_scale = true;
  opts.wmabsdd_split_weight = true;
  const UtilityResult r = tab_utility(kWorked, all_measures(), opts);
  CHECK(raw(r, MeasureId::G) == doctest::Approx(1.3862943611198906).epsilon(1e-12));
  CHECK(raw(r, MeasureId::WMabsDD) == doctest::Approx(2.7957805588520044).epsilon(1e-12));
}

TEST_CASE("identical tables give zero for every distance measure") {
  const CellTable t = table_from_counts({5, 3, 9, 1}, {5, 3, 9, 1});
  const UtilityResult r = tab_utility(t, all_measures());
  for (MeasureId id : {MeasureId::pMSE, MeasureId::VW, MeasureId::FT, MeasureId::JSD,
                       MeasureId::G, MeasureId::SPECKS, MeasureId::MabsDD, MeasureId::WMabsDD,
                       MeasureId::dBhatt, MeasureId::PO50}) {
    CAPTURE(measure_name(id));
    CHECK(raw(r, id) == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("analytic null expectations and standardized ratios") {
  const UtilityResult r = tab_utility(kWorked, all_measures());
  const double df = 1.0;
  const double N = 8.0;
  CHECK(*r.measures.at(MeasureId::VW).null_expectation == doctest::Approx(df));
  CHECK(*r.measures.at(MeasureId::pMSE).null_expectation ==
        doctest::Approx(df * 0.5 * 0.25 / N));
  CHECK(*r.measures.at(MeasureId::FT).null_expectation == doctest::Approx(df));
  CHECK(*r.measures.at(MeasureId::G).null_expectation == doctest::Approx(df));
  CHECK(*r.measures.at(MeasureId::WMabsDD).null_expectation == doctest::Approx(df));
  CHECK(*r.measures.at(MeasureId::JSD).null_expectation ==
        doctest::Approx(df * std::numbers::ln2 / (2 * N)));
  CHECK(!r.measures.at(MeasureId::SPECKS).null_expectation.has_value());
  CHECK(!r.measures.at(MeasureId::U).null_expectation.has_value());
  CHECK(!r.measures.at(MeasureId::dBhatt).null_expectation.has_value());
  CHECK(!r.measures.at(MeasureId::MabsDD).null_expectation.has_value());
  CHECK(*r.measures.at(MeasureId::VW).standardized ==
        doctest::Approx(raw(r, MeasureId::VW) / df));
}

TEST_CASE("pMSE equals VW c(1-c)^2/N on random tables") {
  Rng rng(4242);
  for (int trial = 0; trial < 400; ++trial) {
    const CellTable t = random_table(rng);
    const UtilityResult r = tab_utility(t, {MeasureId::pMSE, MeasureId::VW});
    const double scaled =
        raw(r, MeasureId::VW) * t.c * (1 - t.c) * (1 - t.c) / static_cast<double>(t.N);
    CHECK(raw(r, MeasureId::pMSE) == doctest::Approx(scaled).epsilon(1e-12));
  }
}

TEST_CASE("equal-n identities: SPECKS, PO50, MabsDD, dBhatt") {
  Rng rng(777);
  for (int trial = 0; trial < 400; ++trial) {
    const CellTable t = random_table(rng, 50, 40, /*equal_n=*/true);
    REQUIRE(t.n1 == t.n2);
    const UtilityResult r = tab_utility(t, all_measures());
    // exact linear relations; the PO50 comparison re-rounds once through the
    // division by 50, so it is checked at the 1-ulp scale
    CHECK(raw(r, MeasureId::SPECKS) ==
          doctest::Approx(2.0 * raw(r, MeasureId::PO50) / 100.0).epsilon(1e-14));
    CHECK(raw(r, MeasureId::MabsDD) == 2.0 * raw(r, MeasureId::SPECKS));
    const double lhs = raw(r, MeasureId::dBhatt);
    const double rhs = std::sqrt(raw(r, MeasureId::FT) / (8.0 * static_cast<double>(t.n1)));
    CHECK(std::abs(lhs - rhs) < 1e-9);
  }
}

TEST_CASE("G ignores cells where either side is zero") {
  // adding one-sided cells must not change G
  const CellTable base = table_from_counts({4, 6}, {5, 5});
  const CellTable extended = table_from_counts({4, 6, 3, 0}, {5, 5, 0, 3});
  const double g1 = raw(tab_utility(base, {MeasureId::G}), MeasureId::G);
  const double g2 = raw(tab_utility(extended, {MeasureId::G}), MeasureId::G);
  CHECK(g1 == doctest::Approx(g2).epsilon(1e-12));
}

TEST_CASE("measures are invariant under cell permutation") {
  Rng rng(31337);
  for (int trial = 0; trial < 50; ++trial) {
    CellTable t = random_table(rng, 20, 30);
    const UtilityResult before = tab_utility(t, all_measures());
    std::vector<Cell> shuffled = t.cells;
    rng.shuffle(shuffled);
    CellTable t2 = t;
    t2.cells = shuffled;
    const UtilityResult after = tab_utility(t2, all_measures());
    for (MeasureId id : all_measures()) {
      CAPTURE(measure_name(id));
      CHECK(raw(before, id) == doctest::Approx(raw(after, id)).epsilon(1e-12));
    }
  }
}

TEST_CASE("swapping original and synthetic keeps symmetric measures for n1=n2") {
  Rng rng(55);
  for (int trial = 0; trial < 100; ++trial) {
    const CellTable t = random_table(rng, 30, 25, /*equal_n=*/true);
    std::vector<std::int64_t> o, s;
    for (const Cell& cell : t.cells) {
      o.push_back(cell.o);
      s.push_back(cell.s);
    }
    const CellTable swapped = table_from_counts(s, o);
    const UtilityResult a = tab_utility(t, all_measures());
    const UtilityResult b = tab_utility(swapped, all_measures());
    for (MeasureId id : {MeasureId::pMSE, MeasureId::FT, MeasureId::JSD, MeasureId::SPECKS,
                         MeasureId::MabsDD, MeasureId::dBhatt}) {
      CAPTURE(measure_name(id));
      CHECK(raw(a, id) == doctest::Approx(raw(b, id)).epsilon(1e-9));
    }
  }
}

TEST_CASE("measure set parsing") {
  const MeasureSet s = parse_measure_set("pMSE, VW,JSD", all_measures());
  CHECK(s == MeasureSet{MeasureId::pMSE, MeasureId::VW, MeasureId::JSD});
  CHECK(parse_measure_set("all", all_measures()) == all_measures());
  CHECK_THROWS_AS(parse_measure_set("nope", all_measures()), ContractError);
  CHECK_THROWS_AS(parse_measure_set("FT", score_measures()), ContractError);
  CHECK_THROWS_AS(parse_measure_set("", all_measures()), ContractError);
}
