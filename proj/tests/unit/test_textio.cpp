#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <limits>
#include <sstream>

#include "../support/expect_error.hpp"
#include "obsolve/random.hpp"
#include "obsolve/textio.hpp"

using namespace obsolve;
using namespace obsolve::io;

namespace {

std::string parse_message(const std::string& text) {
  std::istringstream in(text);
  try {
    read_matrices(in, "m.txt");
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Parse);
    return e.what();
  }
  ADD_FAILURE() << "no parse error for:\n" << text;
  return {};
}

}  // namespace

TEST(Read, BlocksCommentsAndBlankLines) {
  std::istringstream in(
      "# header comment\n"
      "2 3   # G\n"
      "1 2 3\n"
      "\n"
      "4 -5 6.5e-1\n"
      "2 1\n"
      "+7\n"
      "-0.25\n");
  const auto blocks = read_matrices(in);
  ASSERT_EQ(blocks.size(), 2u);
  EXPECT_EQ(blocks[0], (Matrix{{1, 2, 3}, {4, -5, 0.65}}));
  EXPECT_EQ(blocks[1], (Matrix{{7}, {-0.25}}));
}

TEST(Read, EmptyInputHasNoBlocks) {
  std::istringstream in("# nothing\n\n");
  EXPECT_TRUE(read_matrices(in).empty());
}

TEST(Read, ShortRowReportsLine) {
  EXPECT_EQ(parse_message("2 2\n1 2\n3\n"), "m.txt:3: expected 2 values, found 1");
}

TEST(Read, LongRowReportsLine) {
  EXPECT_EQ(parse_message("1 2\n1 2 3\n"), "m.txt:2: expected 2 values, found 3");
}

TEST(Read, BadTokenReportsColumn) {
  EXPECT_EQ(parse_message("1 3\n1 x 3\n"), "m.txt:2: column 2: 'x' is not a number");
  EXPECT_EQ(parse_message("1 2\n1 2abc\n"), "m.txt:2: column 2: '2abc' is not a number");
}

TEST(Read, NonFiniteRejected) {
  EXPECT_EQ(parse_message("1 2\n1 nan\n"), "m.txt:2: column 2: value 'nan' is not finite");
  EXPECT_EQ(parse_message("1 1\n1e400\n"), "m.txt:2: column 1: '1e400' is not a number");
}

TEST(Read, BadHeaders) {
  EXPECT_NE(parse_message("2\n1 2\n").find("m.txt:1:"), std::string::npos);
  EXPECT_NE(parse_message("0 2\n").find("positive integers"), std::string::npos);
  EXPECT_NE(parse_message("2 2\n1 2\n").find("ends after 1"), std::string::npos);
}

TEST(Read, MissingFileIsIoError) {
  EXPECT_ERROR_CODE(read_matrix_file("/nonexistent/obsolve.txt"), ErrorCode::Io);
}

TEST(Write, RoundTripIsBitExact) {
  Lcg rng(61);
  std::vector<Matrix> blocks;
  for (int i = 0; i < 10; ++i) {
    Matrix m = random_matrix(rng, 1 + rng.below(5), 1 + rng.below(5), -1e6, 1e6);
    m(0, 0) = std::ldexp(rng.uniform(), -1060);  // subnormal range
    blocks.push_back(m);
  }
  blocks.push_back(Matrix{{0.1, 1.0 / 3.0, std::numeric_limits<double>::max(),
                           -std::numeric_limits<double>::min(), -0.0}});
  const auto path = std::filesystem::temp_directory_path() / "obsolve_roundtrip.txt";
  write_matrix_file(path.string(), blocks);
  EXPECT_EQ(read_matrix_file(path.string()), blocks);
  std::filesystem::remove(path);
}

TEST(Write, SeventeenDigits) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(2.0), "2");
}

TEST(Convert, VectorsAndSequences) {
  EXPECT_EQ(as_vector(Matrix{{1}, {2}}, "y"), Vec({1, 2}));
  EXPECT_EQ(as_vector(Matrix{{1, 2}}, "y"), Vec({1, 2}));
  EXPECT_ERROR_CODE(as_vector(Matrix::identity(2), "y"), ErrorCode::DimensionMismatch);
  const Matrix m{{1, 2}, {3, 4}, {5, 6}};
  EXPECT_EQ(from_sequence(as_sequence(m)), m);
}

TEST(Random, GeneratorMatchesDocumentedRecurrence) {
  Lcg rng(7);
  std::uint64_t x = 7;
  for (int i = 0; i < 5; ++i) {
    x = x * 6364136223846793005ULL + 1442695040888963407ULL;
    EXPECT_EQ(rng.next(), x);
  }
  Lcg a(99), b(99);
  const std::uint64_t raw = b.next();
  EXPECT_EQ(a.uniform(), static_cast<double>(raw >> 11) * 0x1.0p-53);
}

TEST(Random, RankMatrixHasRequestedRank) {
  Lcg rng(62);
  for (std::size_t p = 1; p <= 8; ++p)
    for (std::size_t q = 1; q <= 8; ++q)
      for (std::size_t m = 1; m <= std::min(p, q); ++m)
        EXPECT_EQ(rank(random_rank_matrix(rng, p, q, m)), m);
}

TEST(Random, ClassesRespectShape) {
  Lcg rng(63);
  EXPECT_EQ(rank_for_class(rng, 8, 5, RankClass::FullColumn), 5u);
  EXPECT_EQ(rank_for_class(rng, 5, 8, RankClass::FullRow), 5u);
  for (int i = 0; i < 50; ++i) {
    const std::size_t m = rank_for_class(rng, 6, 9, RankClass::Deficient);
    EXPECT_GE(m, 1u);
    EXPECT_LE(m, 5u);
  }
  EXPECT_ERROR_CODE(rank_for_class(rng, 3, 5, RankClass::FullColumn), ErrorCode::InvalidArgument);
  EXPECT_ERROR_CODE(rank_for_class(rng, 5, 3, RankClass::FullRow), ErrorCode::InvalidArgument);
  EXPECT_ERROR_CODE(rank_for_class(rng, 1, 5, RankClass::Deficient), ErrorCode::InvalidArgument);
}
