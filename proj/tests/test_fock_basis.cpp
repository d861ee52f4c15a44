#include <doctest.h>

#include <set>

#include "fockbath/fock_basis.hpp"

using namespace fockbath;

TEST_CASE("dimension formulas") {
  CHECK(BasisIndex(1, 4).bath_dimension() == 4);
  CHECK(BasisIndex(30, 4).bath_dimension() == 5456);
  CHECK(BasisIndex(30, 4).dimension() == 10912);
  CHECK(BasisIndex(30, 2).bath_dimension() == 31);
  CHECK(BasisIndex(12, 4).bath_dimension() == 455);
  CHECK(BasisIndex(48, 4).bath_dimension() == 20825);
}

TEST_CASE("binomial") {
  CHECK(binomial(33, 3) == 5456);
  CHECK(binomial(30, 15) == 155117520);
  CHECK(binomial(5, 0) == 1);
  CHECK_THROWS_AS((void)binomial(80, 40), std::overflow_error);
}

TEST_CASE("enumeration is lexicographic and distinct") {
  for (int modes : {2, 4}) {
    const BasisIndex basis(5, modes);
    std::set<std::array<int, 4>> seen;
    for (std::int64_t j = 0; j < basis.bath_dimension(); ++j) {
      const auto& ket = basis.ket(j);
      int sum = 0;
      for (int m = 0; m < modes; ++m) sum += ket[static_cast<std::size_t>(m)];
      CHECK(sum == 5);
      if (j > 0) CHECK(basis.ket(j - 1) < ket);
      seen.insert(ket);
    }
    CHECK(static_cast<std::int64_t>(seen.size()) == basis.bath_dimension());
  }
}

TEST_CASE("rank/unrank bijectivity, exhaustive") {
  for (int atoms : {1, 2, 4, 6, 8}) {
    for (int modes : {2, 4}) {
      const BasisIndex basis(atoms, modes);
      for (std::int64_t i = 0; i < basis.dimension(); ++i) {
        const FockKet ket = basis.unrank(i);
        CHECK(basis.rank(ket) == i);
      }
    }
  }
}

TEST_CASE("rank/unrank sampled at large N") {
  const BasisIndex basis(40, 4);
  for (std::int64_t i = 0; i < basis.dimension(); i += 97) {
    CHECK(basis.rank(basis.unrank(i)) == i);
  }
}

TEST_CASE("probe index is the fastest-varying bit") {
  const BasisIndex basis(3, 4);
  FockKet ket = basis.unrank(0);
  CHECK(ket.probe == 0);
  CHECK(basis.rank(ket) == 0);
  ket.probe = 1;
  CHECK(basis.rank(ket) == 1);
  for (std::int64_t j = 0; j < basis.bath_dimension(); ++j) {
    FockKet k{basis.ket(j), 0};
    CHECK(basis.rank(k) == 2 * j);
    k.probe = 1;
    CHECK(basis.rank(k) == 2 * j + 1);
  }
}

TEST_CASE("constraint violations rejected") {
  const BasisIndex basis(4, 4);
  CHECK_THROWS_AS((void)basis.rank(FockKet{{1, 1, 1, 0}, 0}), std::invalid_argument);
  CHECK_THROWS_AS((void)basis.rank(FockKet{{5, -1, 0, 0}, 0}), std::invalid_argument);
  CHECK_THROWS_AS((void)basis.rank(FockKet{{2, 2, 0, 0}, 2}), std::invalid_argument);
  CHECK_THROWS_AS((void)basis.unrank(basis.dimension()), std::out_of_range);
  CHECK_THROWS_AS(BasisIndex(0, 4), std::invalid_argument);
  CHECK_THROWS_AS(BasisIndex(3, 3), std::invalid_argument);
}

TEST_CASE("dimension cap guard") {
  CHECK_THROWS_AS(BasisIndex(100, 4, 1000), std::length_error);
  CHECK_NOTHROW(BasisIndex(100, 4, 1'000'000));
}

TEST_CASE("occupation accessor matches unrank") {
  const BasisIndex basis(6, 4);
  for (std::int64_t j = 0; j < basis.bath_dimension(); ++j) {
    const auto ket = basis.bath_unrank(j);
    for (int m = 0; m < 4; ++m) {
      CHECK(basis.occupation(j, m) == ket[static_cast<std::size_t>(m)]);
    }
  }
}
