#include <doctest.h>

#include "synutil/crosstab.hpp"
#include "synutil/measures.hpp"
#include "synutil/errors.hpp"
#include "test_helpers.hpp"

using namespace synutil;
using namespace testutil;

TEST_CASE("crosstab of two binary vars with every combination occupied") {
  const Dataset orig({cat_var("a", 2), cat_var("b", 2)},
                     {cat_col({0, 0, 1, 1}), cat_col({0, 1, 0, 1})});
  const Dataset syn({cat_var("a", 2), cat_var("b", 2)},
                    {cat_col({0, 0, 1, 1}), cat_col({0, 1, 0, 1})});
  const CellTable t = crosstab(pair(orig, syn), {"a", "b"});
  CHECK(t.k == 4);
  CHECK(t.dfG == 4);
  CHECK(t.n1 == 4);
  CHECK(t.n2 == 4);
  CHECK(t.c == 0.5);
}

TEST_CASE("crosstab keeps only occupied cells and counts dfG") {
  // original occupies {A,B}, synthetic occupies {B,C}
  const Dataset orig({cat_var("v", 3)}, {cat_col({0, 1})});
  const Dataset syn({cat_var("v", 3)}, {cat_col({1, 2})});
  const CellTable t = crosstab(pair(orig, syn), {"v"});
  CHECK(t.k == 3);
  CHECK(t.dfG == 1);
}

TEST_CASE("crosstab cells are ordered lexicographically in level indices") {
  const Dataset orig({cat_var("a", 2), cat_var("b", 3)},
                     {cat_col({1, 0, 1}), cat_col({2, 1, 0})});
  const Dataset syn = orig;
  const CellTable t = crosstab(pair(orig, syn), {"a", "b"});
  REQUIRE(t.k == 3);
  // (0,1) < (1,0) < (1,2) in mixed radix
  CHECK(t.cells[0].index == 0 * 3 + 1);
  CHECK(t.cells[1].index == 1 * 3 + 0);
  CHECK(t.cells[2].index == 1 * 3 + 2);
}

TEST_CASE("crosstab treats categorical missing as its own cell coordinate") {
  const Dataset orig({cat_var("v", 2, /*allow_missing=*/true)}, {cat_col({0, -1, 1})});
  const Dataset syn({cat_var("v", 2, /*allow_missing=*/true)}, {cat_col({-1, -1, 0})});
  const CellTable t = crosstab(pair(orig, syn), {"v"});
  CHECK(t.k == 3);
  // missing sorts after the declared levels
  CHECK(t.cells.back().o == 1);
  CHECK(t.cells.back().s == 2);
}

TEST_CASE("crosstab rejects numeric variables and empty lists") {
  const Dataset orig({num_var("x")}, {num_col({1, 2})});
  const Dataset syn({num_var("x")}, {num_col({3, 4})});
  const DatasetPair p = pair(orig, syn);
  CHECK_THROWS_AS(crosstab(p, {"x"}), ContractError);
  CHECK_THROWS_AS(crosstab(p, {}), ContractError);
}

TEST_CASE("crosstab row sums match the pair sizes on random data") {
  Rng rng(99);
  const Dataset orig = make_dependent_dataset(257, 1);
  const Dataset syn = make_dependent_dataset(181, 2);
  const CellTable t = crosstab(pair(orig, syn), {"alpha", "beta", "gamma", "delta"});
  std::int64_t so = 0, ss = 0;
  for (const Cell& cell : t.cells) {
    CHECK(cell.o + cell.s > 0);
    so += cell.o;
    ss += cell.s;
  }
  CHECK(so == 257);
  CHECK(ss == 181);
  CHECK(t.dfG <= t.k);
}

TEST_CASE("table_from_counts validates and fills totals") {
  const CellTable t = table_from_counts({2, 2}, {4, 0});
  CHECK(t.k == 2);
  CHECK(t.dfG == 1);
  CHECK(t.n1 == 4);
  CHECK(t.n2 == 4);
  CHECK(t.c == 0.5);
  CHECK_THROWS_AS(table_from_counts({0}, {0}), ContractError);
  CHECK_THROWS_AS(table_from_counts({1}, {0, 1}), ContractError);
}

TEST_CASE("measures are invariant under variable-order permutation") {
  const Dataset orig = make_dependent_dataset(211, 61);
  const Dataset syn = make_dependent_dataset(167, 62);
  const DatasetPair p = pair(orig, syn);
  const UtilityResult fwd = tab_utility(crosstab(p, {"alpha", "beta", "gamma"}), all_measures());
  const UtilityResult rev = tab_utility(crosstab(p, {"gamma", "alpha", "beta"}), all_measures());
  REQUIRE(fwd.k == rev.k);
  for (MeasureId id : all_measures()) {
    CAPTURE(measure_name(id));
    CHECK(fwd.measures.at(id).raw == doctest::Approx(rev.measures.at(id).raw).epsilon(1e-12));
  }
}

TEST_CASE("a six-variable table at survey scale stays sparse but indexable") {
  // 2*7*5*5*5*4 = 14,000 potential cells; with 5,000 rows per side only a
  // few thousand are occupied
  Rng rng(909);
  const std::vector<int> levels = {2, 7, 5, 5, 5, 4};
  auto gen = [&](std::size_t n) {
    std::vector<Variable> vars;
    std::vector<Column> cols(levels.size());
    for (std::size_t v = 0; v < levels.size(); ++v) {
      vars.push_back(cat_var("v" + std::to_string(v), levels[v]));
      cols[v].codes.resize(n);
    }
    for (std::size_t i = 0; i < n; ++i) {
      std::int32_t prev = 0;
      for (std::size_t v = 0; v < levels.size(); ++v) {
        prev = rng.uniform() < 0.4 ? prev % levels[v]
                                   : static_cast<std::int32_t>(rng.index(levels[v]));
        cols[v].codes[i] = prev;
      }
    }
    return Dataset(std::move(vars), std::move(cols));
  };
  const DatasetPair p = pair(gen(5000), gen(5000));
  const CellTable t = crosstab(p, {"v0", "v1", "v2", "v3", "v4", "v5"});
  CHECK(t.k > 1000);
  CHECK(t.k < 8000);
  CHECK(t.dfG < t.k);
  const UtilityResult r = tab_utility(t, {MeasureId::pMSE});
  CHECK(r.measures.at(MeasureId::pMSE).raw > 0.0);
}
