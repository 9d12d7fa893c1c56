#include <doctest.h>

#include <cmath>
#include <random>

#include "hmp/errors.hpp"
#include "hmp/markov.hpp"
#include "support.hpp"

using namespace hmp;

namespace {

Matrix square(std::initializer_list<double> values, Eigen::Index n) {
  Matrix m(n, n);
  auto it = values.begin();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = *it++;
  return m;
}

double residual(const Matrix& p, const SimplexVector& x) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < p.cols(); ++j) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < p.rows(); ++i) s += x[static_cast<std::size_t>(i)] * p(i, j);
    worst = std::max(worst, std::abs(s - x[static_cast<std::size_t>(j)]));
  }
  return worst;
}

}  // namespace

TEST_CASE("primitivity") {
  const Matrix example = test::load("example4.hmp").transition();
  const PrimitivityResult r = is_primitive(example);
  CHECK(r.primitive);
  REQUIRE(r.witness.has_value());
  CHECK(*r.witness <= 2);  // every entry is positive already

  // Independent check: P^2 entrywise positive.
  const Matrix p2 = example * example;
  CHECK((p2.array() > 0.0).all());

  CHECK_FALSE(is_primitive(Matrix::Identity(2, 2)).primitive);
  CHECK_FALSE(is_primitive(square({0, 1, 1, 0}, 2)).primitive);

  const PrimitivityResult cyclic = is_primitive(test::load("three_state_cyclic.hmp").transition());
  CHECK(cyclic.primitive);
  CHECK(*cyclic.witness == 2);

  // Wielandt's extremal matrix reaches the bound (n-1)^2 + 1 exactly.
  const Matrix wielandt = square({0, 1, 0, 0,  //
                                  0, 0, 1, 0,  //
                                  0, 0, 0, 1,  //
                                  0.5, 0.5, 0, 0},
                                 4);
  const PrimitivityResult w = is_primitive(wielandt);
  CHECK(w.primitive);
  CHECK(*w.witness == 10);

  CHECK_THROWS_AS(is_primitive(Matrix(2, 3)), InvalidArgument);
}

TEST_CASE("stationary distribution examples") {
  const SimplexVector two = stationary_distribution(square({0.9, 0.1, 0.2, 0.8}, 2));
  CHECK(std::abs(two[0] - 2.0 / 3.0) <= 1e-15);
  CHECK(std::abs(two[1] - 1.0 / 3.0) <= 1e-15);

  const SimplexVector half = stationary_distribution(square({0.5, 0.5, 0.5, 0.5}, 2));
  CHECK(half[0] == doctest::Approx(0.5).epsilon(1e-15));

  const Matrix swap = square({0, 1, 1, 0}, 2);
  const SimplexVector flip = stationary_distribution(swap);
  CHECK(flip[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_FALSE(analyze_chain(swap).is_primitive);

  CHECK_THROWS_AS(stationary_distribution(Matrix::Identity(2, 2)), SingularSystemError);
}

TEST_CASE("stationary distribution is invariant under P") {
  const Matrix example = test::load("example4.hmp").transition();
  CHECK(residual(example, stationary_distribution(example)) <= 1e-12);

  std::mt19937_64 rng(17);
  for (int i = 0; i < 100; ++i) {
    const HmmModel m = test::random_model(rng, 2 + static_cast<std::size_t>(i % 5), 2);
    CHECK(residual(m.transition(), stationary_distribution(m.transition())) <= 1e-12);
  }
}

TEST_CASE("markov entropy rate") {
  const double rate = markov_entropy_rate(test::load("example4.hmp").transition());
  CHECK(std::abs(rate - 0.678) <= 1e-3);
  CHECK(std::abs(rate - 0.677898805782) <= 1e-11);

  CHECK(markov_entropy_rate(square({0, 1, 1, 0}, 2)) == 0.0);
  CHECK(markov_entropy_rate(square({0.5, 0.5, 0.5, 0.5}, 2)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(markov_entropy_rate(square({0.5, 0.5, 0.5, 0.5}, 2), LogBase::E) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-15));

  std::mt19937_64 rng(23);
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = 2 + static_cast<std::size_t>(i % 4);
    const HmmModel m = test::random_model(rng, n, 2);
    CHECK(markov_entropy_rate(m.transition()) <= std::log2(static_cast<double>(n)) + 1e-12);
  }
}

TEST_CASE("chain analysis and validation") {
  const HmmModel m = test::load("example4.hmp");
  const ChainAnalysis chain = analyze_chain(m.transition());
  CHECK(chain.is_primitive);
  CHECK(*chain.primitivity_witness <= 10);
  CHECK(chain.markov_entropy_rate == markov_entropy_rate(m.transition()));

  const ValidationReport ok = validate_with_chain(m);
  REQUIRE(ok.is_primitive_P.has_value());
  CHECK(*ok.is_primitive_P);

  const ValidationReport periodic = validate_with_chain(test::load("permutation.hmp"));
  CHECK_FALSE(*periodic.is_primitive_P);
  CHECK_FALSE(periodic.warnings.empty());
}
