#include <gtest/gtest.h>

#include "nilmag/error.hpp"
#include "nilmag/liealg.hpp"
#include "support.hpp"

using namespace nilmag;
using namespace testing_support;

namespace {

ErrorCategory category_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& err) {
    return err.category();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCategory::validation;
}

}  // namespace

TEST(Rational, ParsesAndNormalizes) {
  EXPECT_EQ(parse_rational("2/4"), Rational(1, 2));
  EXPECT_EQ(parse_rational("-6/4"), Rational(-3, 2));
  EXPECT_EQ(parse_rational("+7"), Rational(7));
  EXPECT_EQ(to_string(parse_rational("10/5")), "2");
  EXPECT_EQ(to_string(parse_rational("-3/9")), "-1/3");
  EXPECT_EQ(category_of([] { parse_rational("3/0"); }), ErrorCategory::parse);
  EXPECT_EQ(category_of([] { parse_rational("1/2/3"); }), ErrorCategory::parse);
  EXPECT_EQ(category_of([] { parse_rational("x"); }), ErrorCategory::parse);
}

TEST(Rational, LiftIsExact) {
  for (double v : {0.1, -3.75, 1e-300, 12345.678}) EXPECT_EQ(lift(v).get_d(), v);
}

TEST(LieAlgebra, RejectsMalformedInput) {
  EXPECT_THROW(make_algebra({"A", "A"}, {}), Error);
  EXPECT_THROW(LieAlgebra({"A", "B"}, {{{1, 0}, RVec{1, 0}}}), Error);
  EXPECT_THROW(LieAlgebra({"A", "B"}, {{{0, 1}, RVec{1}}}), Error);
  EXPECT_THROW(InnerProduct(RMatrix::from_rows({{1, 1}, {1, 1}})), Error);
  EXPECT_THROW(InnerProduct(RMatrix::from_rows({{1, 2}, {0, 1}})), Error);
  EXPECT_THROW(TwoForm(RMatrix::from_rows({{0, 1}, {1, 0}})), Error);
  EXPECT_THROW(LatticeBasis({{1, 2}, {2, 4}}), Error);
}

TEST(Bracket, PaperBrackets) {
  const LieAlgebra g = paper5d_algebra();
  EXPECT_EQ(bracket(g, e(5, X), e(5, Y)), e(5, Z));
  EXPECT_EQ(bracket(g, e(5, Y), e(5, V)), e(5, U));
  EXPECT_EQ(bracket(g, e(5, Y), e(5, X)), scale(-1, e(5, Z)));
}

TEST(Bracket, SelfBracketVanishes) {
  std::mt19937_64 rng(11);
  const LieAlgebra g = paper5d_algebra();
  for (int trial = 0; trial < 20; ++trial) {
    const RVec x = random_rvec(rng, 5);
    EXPECT_TRUE(is_zero(bracket(g, x, x)));
  }
}

TEST(Bracket, ExtensionBracketXU) {
  const ExtendedSystem ext = t4ext();
  EXPECT_EQ(bracket(ext.algebra(), e(6, X), e(6, U)), e(6, W));
}

TEST(Bracket, BilinearAndAntisymmetric) {
  std::mt19937_64 rng(12);
  const LieAlgebra g = t4ext().algebra();
  for (int trial = 0; trial < 20; ++trial) {
    const RVec x = random_rvec(rng, 6), y = random_rvec(rng, 6), z = random_rvec(rng, 6);
    const Rational a = random_rational(rng);
    EXPECT_EQ(bracket(g, add(scale(a, x), z), y), add(scale(a, bracket(g, x, y)), bracket(g, z, y)));
    EXPECT_EQ(bracket(g, x, y), scale(-1, bracket(g, y, x)));
  }
  EXPECT_THROW(bracket(g, zero_vector(5), zero_vector(6)), Error);
}

TEST(Validate, Examples) {
  const ValidationReport abelian = validate(LieAlgebra::abelian({"A", "B", "C", "D"}));
  EXPECT_TRUE(abelian.pass);
  EXPECT_EQ(abelian.max_residual, 0);

  const ValidationReport paper = validate(paper5d_algebra());
  EXPECT_TRUE(paper.pass);
  EXPECT_EQ(paper.max_residual, 0);

  EXPECT_TRUE(validate(so3_algebra()).pass);
  EXPECT_FALSE(lower_central_series(so3_algebra()).step.has_value());
}

TEST(Validate, ReportsFailingTriple) {
  // [e1,e2] = e3, [e2,e3] = e2: J(e1,e2,e3) = [e1,[e2,e3]] = e3.
  const LieAlgebra bad = make_algebra({"A", "B", "C"}, {{0, 1, 2, 1}, {1, 2, 1, 1}});
  const ValidationReport r = validate(bad);
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.max_residual, 1);
  ASSERT_TRUE(r.worst.has_value());
  EXPECT_EQ(*r.worst, (std::array<std::size_t, 3>{0, 1, 2}));
}

TEST(Validate, RandomHeisenbergTypeAlgebrasPass) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t m = 1 + trial % 3;
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < 2 * m + 1; ++i) labels.push_back("e" + std::to_string(i));
    std::vector<Bracket> brackets;
    for (std::size_t i = 0; i < 2 * m; ++i)
      for (std::size_t j = i + 1; j < 2 * m; ++j) brackets.emplace_back(i, j, 2 * m, random_rational(rng));
    const LieAlgebra g = make_algebra(labels, brackets);
    EXPECT_EQ(validate(g).max_residual, 0);
    EXPECT_EQ(validate(LieAlgebra::abelian(labels)).max_residual, 0);
  }
}

TEST(Validate, BuiltinsPass) {
  for (const auto& name : builtin_scenario_names()) {
    EXPECT_EQ(validate(builtin(name).algebra()).max_residual, 0) << name;
  }
}

TEST(CentralSeries, Examples) {
  const CentralSeries abelian = lower_central_series(LieAlgebra::abelian({"A", "B", "C", "D", "E"}));
  EXPECT_EQ(abelian.dims, (std::vector<std::size_t>{5, 0}));
  EXPECT_EQ(abelian.step, 1u);

  const CentralSeries paper = lower_central_series(paper5d_algebra());
  EXPECT_EQ(paper.dims, (std::vector<std::size_t>{5, 2, 0}));
  EXPECT_EQ(paper.step, 2u);

  const CentralSeries ext = lower_central_series(t4ext().algebra());
  EXPECT_EQ(ext.dims, (std::vector<std::size_t>{6, 3, 1, 0}));
  EXPECT_EQ(ext.step, 3u);

  const CentralSeries so3 = lower_central_series(so3_algebra());
  EXPECT_EQ(so3.dims.back(), 3u);
  EXPECT_FALSE(so3.step.has_value());
}

TEST(CentralSeries, DerivedIsSecondTermAndDimsDecrease) {
  for (const auto& name : builtin_scenario_names()) {
    const LieAlgebra g = builtin(name).algebra();
    const CentralSeries s = lower_central_series(g);
    ASSERT_GE(s.dims.size(), 2u);
    EXPECT_EQ(derived_algebra(g).dim(), s.dims[1]) << name;
    for (std::size_t i = 1; i < s.dims.size(); ++i) EXPECT_LT(s.dims[i], s.dims[i - 1]) << name;
    EXPECT_EQ(s.dims.back(), 0u);
  }
}

TEST(DerivedAlgebra, Examples) {
  EXPECT_EQ(derived_algebra(LieAlgebra::abelian({"A", "B"})).dim(), 0u);
  EXPECT_EQ(derived_algebra(paper5d_algebra()), Subspace(5, {e(5, Z), e(5, U)}));
  EXPECT_EQ(derived_algebra(heisenberg_algebra()), Subspace(3, {e(3, 2)}));
}

TEST(Subspace, EchelonFormIsCanonical) {
  const Subspace a(3, {{1, 1, 0}, {0, 1, 1}});
  const Subspace b(3, {{1, 2, 1}, {Rational(1, 2), 0, Rational(-1, 2)}});
  EXPECT_EQ(a, b);
  EXPECT_TRUE(a.contains(RVec{2, 3, 1}));
  EXPECT_FALSE(a.contains(RVec{1, 0, 0}));
}

TEST(AdMatrix, Examples) {
  const LieAlgebra g = paper5d_algebra();
  EXPECT_EQ(ad_matrix(LieAlgebra::abelian({"A", "B"}), {1, 2}), RMatrix(2, 2));
  const RMatrix ad = ad_matrix(g, e(5, Y));
  EXPECT_EQ(ad.column(X), scale(-1, e(5, Z)));
  EXPECT_EQ(ad.column(V), e(5, U));
  for (std::size_t j : {U, Y, Z}) EXPECT_TRUE(is_zero(ad.column(j)));

  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    const RVec x = random_rvec(rng, 5), y = random_rvec(rng, 5);
    EXPECT_TRUE(is_zero(ad_matrix(g, x).apply(x)));
    EXPECT_EQ(ad_matrix(g, add(x, y)).apply(y), add(ad_matrix(g, x).apply(y), ad_matrix(g, y).apply(y)));
  }
}

TEST(Cocycle, Examples) {
  const LieAlgebra g = paper5d_algebra();
  EXPECT_TRUE(is_cocycle(g, TwoForm::zero(5)).closed);

  const CocycleReport paper = is_cocycle(g, paper_sigma());
  EXPECT_TRUE(paper.closed);
  EXPECT_EQ(paper.max_residual, 0);

  const TwoForm single = TwoForm::from_entries(5, {{Z, V, 1}});
  const CocycleReport r = is_cocycle(g, single);
  EXPECT_FALSE(r.closed);
  EXPECT_EQ(coboundary(g, single, X, Y, V), -1);
  EXPECT_EQ(r.max_residual, 1);
}

TEST(Cocycle, ExhaustiveTripleOracle) {
  // Independent oracle: expand d(sigma) through bracket() on unit vectors.
  const LieAlgebra g = paper5d_algebra();
  const TwoForm s = paper_sigma();
  for (std::size_t a = 0; a < 5; ++a)
    for (std::size_t b = 0; b < 5; ++b)
      for (std::size_t c = 0; c < 5; ++c) {
        const Rational expected = -s(bracket(g, e(5, a), e(5, b)), e(5, c)) -
                                  s(bracket(g, e(5, b), e(5, c)), e(5, a)) -
                                  s(bracket(g, e(5, c), e(5, a)), e(5, b));
        EXPECT_EQ(coboundary(g, s, a, b, c), expected);
        EXPECT_EQ(expected, 0);
      }
}

TEST(VanishesOnDerived, Examples) {
  EXPECT_TRUE(vanishes_on_derived(paper5d_algebra(), TwoForm::zero(5)));
  EXPECT_FALSE(vanishes_on_derived(paper5d_algebra(), paper_sigma()));
  EXPECT_TRUE(vanishes_on_derived(heisenberg_algebra(), TwoForm::from_entries(3, {{0, 1, 1}})));
}

TEST(Bch, Examples) {
  const RVec x{1, 2}, y{-3, Rational(1, 2)};
  EXPECT_EQ(bch(LieAlgebra::abelian({"A", "B"}), x, y), add(x, y));

  const RVec h = bch(heisenberg_algebra(), e(3, 0), e(3, 1));
  EXPECT_EQ(h, (RVec{1, 1, Rational(1, 2)}));

  const LieAlgebra t4 = t4ext().algebra();
  EXPECT_EQ(bch(t4, e(6, X), e(6, U)), add(add(e(6, X), e(6, U)), scale(Rational(1, 2), e(6, W))));
}

TEST(Bch, RejectsDeepAlgebras) {
  // Filiform, step 4.
  const LieAlgebra f = make_algebra({"A", "B", "C", "D", "E"}, {{0, 1, 2, 1}, {0, 2, 3, 1}, {0, 3, 4, 1}});
  EXPECT_EQ(lower_central_series(f).step, 4u);
  EXPECT_EQ(category_of([&] { bch(f, e(5, 0), e(5, 1)); }), ErrorCategory::unsupported_step);
  EXPECT_EQ(category_of([&] { bch(so3_algebra(), e(3, 0), e(3, 1)); }), ErrorCategory::unsupported_step);
}

TEST(Bch, TripleBracketsVanishInStepThree) {
  std::mt19937_64 rng(15);
  for (const auto& name : builtin_scenario_names()) {
    const LieAlgebra g = builtin(name).algebra();
    for (int trial = 0; trial < 10; ++trial) {
      const RVec x = random_rvec(rng, g.dim()), y = random_rvec(rng, g.dim());
      EXPECT_TRUE(is_zero(bracket(g, x, bracket(g, x, bracket(g, x, y))))) << name;
    }
  }
}

TEST(Bch, AssociativeOnRandomTriples) {
  std::mt19937_64 rng(16);
  for (const auto& name : builtin_scenario_names()) {
    const LieAlgebra g = builtin(name).algebra();
    for (int trial = 0; trial < 25; ++trial) {
      const RVec a = random_rvec(rng, g.dim()), b = random_rvec(rng, g.dim()), c = random_rvec(rng, g.dim());
      EXPECT_EQ(bch(g, bch(g, a, b), c), bch(g, a, bch(g, b, c))) << name;
    }
  }
}

TEST(Bch, InverseIsNegation) {
  std::mt19937_64 rng(17);
  const LieAlgebra g = t4ext().algebra();
  for (int trial = 0; trial < 10; ++trial) {
    const RVec a = random_rvec(rng, 6);
    EXPECT_TRUE(is_zero(bch(g, a, scale(-1, a))));
  }
}

TEST(LatticeBasis, Membership) {
  const LatticeBasis l({{Rational(1, 2), 0}, {0, 1}});
  EXPECT_TRUE(l.contains({Rational(3, 2), -2}));
  EXPECT_FALSE(l.contains({Rational(1, 4), 0}));
  EXPECT_EQ(l.coordinates({Rational(3, 2), -2}), (RVec{3, -2}));
}
