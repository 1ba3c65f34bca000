#include <cstdint>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rbm/bitvec.hpp"
#include "rbm/errors.hpp"
#include "rbm/gf2.hpp"
#include "rbm/rng.hpp"

namespace rbm {
namespace {

TEST(BitVecTest, StringRoundTripAndCounts) {
  const BitVec v = BitVec::from_string("1011000001");
  EXPECT_EQ(v.size(), 10u);
  EXPECT_EQ(v.count(), 4u);
  EXPECT_EQ(v.to_string(), "1011000001");
  EXPECT_EQ(v.first_set(), 0u);
  EXPECT_EQ(v.next_set(1), 2u);
  EXPECT_EQ(v.next_set(4), 9u);
  EXPECT_EQ(v.next_set(10), BitVec::npos);
}

TEST(BitVecTest, ComplementKeepsTrailingBitsZero) {
  for (std::size_t len : {1u, 63u, 64u, 65u, 130u}) {
    const BitVec c = BitVec(len).complement();
    EXPECT_EQ(c.count(), len);
    const std::size_t used = len % 64;
    if (used != 0) EXPECT_EQ(c.words().back() >> used, 0u);
  }
}

TEST(BitVecTest, MismatchedLengthsThrow) {
  BitVec a(5);
  const BitVec b(6);
  EXPECT_THROW(a ^= b, DimensionMismatch);
  EXPECT_THROW((void)a.dot(b), DimensionMismatch);
}

TEST(BitVecTest, DotIsParityOfIntersection) {
  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    BitVec a(100), b(100);
    int common = 0;
    for (std::size_t i = 0; i < 100; ++i) {
      const bool x = rng() & 1U, y = rng() & 1U;
      if (x) a.set(i);
      if (y) b.set(i);
      common += x && y;
    }
    EXPECT_EQ(a.dot(b), common % 2 == 1);
    EXPECT_EQ(a.intersection_count(b), static_cast<std::size_t>(common));
  }
}

TEST(RankTest, Identity) { EXPECT_EQ(rank(GF2Matrix::identity(7)), 7u); }

TEST(RankTest, Zero) { EXPECT_EQ(rank(GF2Matrix(5, 9)), 0u); }

TEST(RankTest, AllNonzeroVectorsOfLengthThree) {
  GF2Matrix m(3, 7);
  for (std::size_t j = 0; j < 7; ++j) {
    for (std::size_t i = 0; i < 3; ++i) {
      if (((j + 1) >> i) & 1U) m.set(i, j);
    }
  }
  // Oracle: no nonempty combination of the rows vanishes.
  for (unsigned combo = 1; combo < 8; ++combo) {
    BitVec sum(7);
    for (std::size_t i = 0; i < 3; ++i) {
      if ((combo >> i) & 1U) sum ^= m.row(i);
    }
    EXPECT_TRUE(sum.any());
  }
  EXPECT_EQ(rank(m), 3u);
}

TEST(RankTest, MatchesNaiveEliminationAndTranspose) {
  Rng rng(11);
  for (int t = 0; t < 200; ++t) {
    const std::size_t r = 1 + rng.below(40), c = 1 + rng.below(40);
    const GF2Matrix m = oracle::random_matrix(rng, r, c);
    EXPECT_EQ(rank(m), oracle::naive_rank(oracle::to_dense(m)));
    EXPECT_EQ(rank(m), rank(m.transpose()));
  }
}

TEST(InvertTest, IdentityIsItsOwnInverse) {
  EXPECT_EQ(invert(GF2Matrix::identity(9)), GF2Matrix::identity(9));
}

TEST(InvertTest, UpperUnitriangularTwoByTwo) {
  const GF2Matrix m = GF2Matrix::from_dense({{1, 1}, {0, 1}});
  EXPECT_EQ(invert(m), m);
}

TEST(InvertTest, ExhaustiveTwoByTwo) {
  for (unsigned bits = 0; bits < 16; ++bits) {
    GF2Matrix m(2, 2);
    for (unsigned b = 0; b < 4; ++b) {
      if ((bits >> b) & 1U) m.set(b / 2, b % 2);
    }
    const bool det = ((bits & 1U) && (bits >> 3 & 1U)) != ((bits >> 1 & 1U) && (bits >> 2 & 1U));
    if (det) {
      const GF2Matrix inv = invert(m);
      EXPECT_TRUE(multiply(m, inv).is_identity());
      EXPECT_TRUE(multiply(inv, m).is_identity());
    } else {
      EXPECT_THROW(invert(m), SingularMatrix);
    }
  }
}

TEST(InvertTest, SingularAndNonSquareThrow) {
  GF2Matrix m = GF2Matrix::identity(4);
  m.row(3) = m.row(2);
  EXPECT_THROW(invert(m), SingularMatrix);
  EXPECT_THROW(invert(GF2Matrix(3, 4)), SingularMatrix);
}

TEST(InvertTest, RandomRoundTripUpTo512) {
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng.below(512);
    const GF2Matrix m = oracle::random_nonsingular(rng, n);
    const GF2Matrix inv = invert(m);
    ASSERT_TRUE(multiply(m, inv).is_identity()) << "n = " << n;
    ASSERT_TRUE(multiply(inv, m).is_identity()) << "n = " << n;
  }
}

TEST(MultiplyTest, IdentityOnTheRight) {
  Rng rng(1);
  const GF2Matrix a = oracle::random_matrix(rng, 6, 9);
  EXPECT_EQ(multiply(a, GF2Matrix::identity(9)), a);
}

TEST(MultiplyTest, CharacteristicTwo) {
  const GF2Matrix row = GF2Matrix::from_dense({{1, 1}});
  const GF2Matrix col = GF2Matrix::from_dense({{1}, {1}});
  EXPECT_EQ(multiply(row, col), GF2Matrix(1, 1));
}

TEST(MultiplyTest, MatchesNaiveTripleLoop) {
  Rng rng(2);
  for (int t = 0; t < 50; ++t) {
    const GF2Matrix a = oracle::random_matrix(rng, 8, 8);
    const GF2Matrix b = oracle::random_matrix(rng, 8, 8);
    EXPECT_EQ(oracle::to_dense(multiply(a, b)),
              oracle::naive_multiply(oracle::to_dense(a), oracle::to_dense(b)));
  }
}

TEST(MultiplyTest, DimensionMismatchThrows) {
  EXPECT_THROW(multiply(GF2Matrix(2, 3), GF2Matrix(2, 3)), DimensionMismatch);
  EXPECT_THROW(multiply(GF2Matrix(2, 3), BitVec(2)), DimensionMismatch);
}

TEST(EchelonTest, TransformReproducesReducedForm) {
  Rng rng(8);
  for (int t = 0; t < 100; ++t) {
    const GF2Matrix m = oracle::random_matrix(rng, 1 + rng.below(20), 1 + rng.below(20));
    const EchelonResult e = echelon(m);
    EXPECT_EQ(e.rank, e.pivot_cols.size());
    EXPECT_EQ(e.rank, rank(m));
    EXPECT_EQ(multiply(e.transform, m), e.reduced);
    EXPECT_EQ(rank(e.transform), m.rows());
    for (std::size_t i = 1; i < e.pivot_cols.size(); ++i) {
      EXPECT_LT(e.pivot_cols[i - 1], e.pivot_cols[i]);
    }
    for (std::size_t i = 0; i < e.reduced.rows(); ++i) {
      if (i < e.rank) {
        EXPECT_EQ(e.reduced.row(i).first_set(), e.pivot_cols[i]);
        EXPECT_EQ(e.reduced.column(e.pivot_cols[i]).count(), 1u);
      } else {
        EXPECT_TRUE(e.reduced.row(i).none());
      }
    }
  }
}

TEST(SolveTest, IdentitySystem) {
  const BitVec b = BitVec::from_string("10110");
  const SolutionSet s = solve(GF2Matrix::identity(5), b);
  ASSERT_FALSE(s.empty());
  EXPECT_EQ(*s.particular, b);
  EXPECT_TRUE(s.null_basis.empty());
}

TEST(SolveTest, ZeroSystem) {
  const SolutionSet s = solve(GF2Matrix(3, 3), BitVec(3));
  ASSERT_FALSE(s.empty());
  EXPECT_TRUE(s.particular->none());
  EXPECT_EQ(s.null_basis.size(), 3u);
}

TEST(SolveTest, InconsistentIsEmpty) {
  EXPECT_TRUE(solve(GF2Matrix(2, 2), BitVec::from_string("01")).empty());
}

TEST(SolveTest, CosetMatchesExhaustiveEnumeration) {
  Rng rng(21);
  for (int t = 0; t < 50; ++t) {
    GF2Matrix a;
    do {
      a = oracle::random_matrix(rng, 2, 4);
    } while (rank(a) != 2);
    BitVec b(2);
    if (rng() & 1U) b.set(0);
    if (rng() & 1U) b.set(1);
    std::set<std::string> expected;
    for (unsigned x = 0; x < 16; ++x) {
      BitVec v(4);
      for (std::size_t i = 0; i < 4; ++i) {
        if ((x >> i) & 1U) v.set(i);
      }
      if (multiply(a, v) == b) expected.insert(v.to_string());
    }
    const SolutionSet s = solve(a, b);
    ASSERT_FALSE(s.empty());
    std::set<std::string> got;
    for (unsigned c = 0; c < (1U << s.null_basis.size()); ++c) {
      BitVec v = *s.particular;
      for (std::size_t i = 0; i < s.null_basis.size(); ++i) {
        if ((c >> i) & 1U) v ^= s.null_basis[i];
      }
      EXPECT_EQ(multiply(a, v), b);
      got.insert(v.to_string());
    }
    EXPECT_EQ(got, expected);
  }
}

TEST(XorBasisTest, DimensionMatchesRank) {
  Rng rng(4);
  for (int t = 0; t < 100; ++t) {
    const GF2Matrix m = oracle::random_matrix(rng, 1 + rng.below(12), 30);
    XorBasis basis(30);
    for (std::size_t i = 0; i < m.rows(); ++i) basis.insert(m.row(i));
    EXPECT_EQ(basis.dimension(), rank(m));
    for (std::size_t i = 0; i < m.rows(); ++i) EXPECT_TRUE(basis.contains(m.row(i)));
  }
}

TEST(XorBasisTest, ReduceGivesCanonicalCosetRepresentative) {
  Rng rng(6);
  XorBasis basis(20);
  for (int i = 0; i < 6; ++i) basis.insert(oracle::random_matrix(rng, 1, 20).row(0));
  for (int t = 0; t < 100; ++t) {
    const BitVec v = oracle::random_matrix(rng, 1, 20).row(0);
    BitVec w = v;
    for (const BitVec& b : basis.vectors()) {
      if (rng() & 1U) w ^= b;
    }
    EXPECT_EQ(basis.reduce(v), basis.reduce(w));
    for (std::size_t p : basis.pivots()) EXPECT_FALSE(basis.reduce(v).test(p));
  }
}

}  // namespace
}  // namespace rbm
