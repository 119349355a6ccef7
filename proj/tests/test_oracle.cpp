#include <doctest.h>

#include <stdexcept>

#include "procnet/oracle.hpp"
#include "support/gen.hpp"

using namespace procnet;

namespace {

std::vector<Word> ws(std::initializer_list<std::int64_t> xs, int width = 16) {
  std::vector<Word> out;
  for (auto x : xs) out.push_back(Word::wrap(x, width));
  return out;
}

// Second, independent formulation: c[i][j] = Σ_t a[i][t]·b[t][j] by triple loop
// over plain integers, reduced to the word width only at the end.
Matrix triple_loop(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), b.cols(), Orientation::ByCols, a.width());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      std::uint64_t acc = 0;
      for (std::size_t t = 0; t < a.cols(); ++t) {
        acc += static_cast<std::uint64_t>(a.at(i, t).value()) *
               static_cast<std::uint64_t>(b.at(t, j).value());
      }
      c.set(i, j, Word::wrap(static_cast<std::int64_t>(acc), a.width()));
    }
  }
  return c;
}

}  // namespace

TEST_CASE("word arithmetic wraps in two's complement") {
  CHECK(Word::wrap(32768).value() == -32768);
  CHECK(Word::wrap(-32769).value() == 32767);
  CHECK((Word::wrap(32767) + Word::wrap(1)).value() == -32768);
  CHECK((Word::wrap(256) * Word::wrap(256)).value() == 0);
  CHECK((Word::wrap(-3) * Word::wrap(4)).value() == -12);
  CHECK(Word::wrap(255, 8).value() == -1);
  CHECK(Word::wrap(-1, 64).value() == -1);
  CHECK_THROWS_AS(Word::wrap(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(Word::wrap(1, 8) + Word::wrap(1, 16), std::invalid_argument);
}

TEST_CASE("property: wrapped values stay in range and agree with modular arithmetic") {
  gen::Rng rng(11);
  for (int t = 0; t < 500; ++t) {
    const int width = static_cast<int>(gen::integer(rng, 2, 64));
    const std::int64_t raw = gen::integer(rng, INT64_MIN, INT64_MAX);
    const Word x = Word::wrap(raw, width);
    CHECK(x.value() >= Word::min_value(width));
    CHECK(x.value() <= Word::max_value(width));
    if (width < 64) {
      const std::uint64_t mask = (std::uint64_t{1} << width) - 1;
      CHECK((static_cast<std::uint64_t>(x.value()) & mask) ==
            (static_cast<std::uint64_t>(raw) & mask));
    }
  }
}

TEST_CASE("zipwithmul") {
  CHECK(zipwithmul_ref(ws({1, 2}), ws({3, 4})) == ws({3, 8}));
  CHECK(zipwithmul_ref({}, {}).empty());
  CHECK(zipwithmul_ref(ws({0, 9}), ws({7, 0})) == ws({0, 0}));
  CHECK_THROWS_AS(zipwithmul_ref(ws({1}), ws({1, 2})), std::invalid_argument);
}

TEST_CASE("sum") {
  CHECK(sum_ref(ws({1, 2, 3})) == Word::wrap(6));
  CHECK(sum_ref({}) == Word::wrap(0));
  CHECK(sum_ref(ws({32767, 1})) == Word::wrap(-32768));
}

TEST_CASE("scalarp") {
  CHECK(scalarp_ref(ws({1, 2, 3}), ws({4, 5, 6})) == Word::wrap(32));
  CHECK(scalarp_ref(ws({1, 0, 0}), ws({1, 0, 0})) == Word::wrap(1));
  CHECK(scalarp_ref(ws({5, -7, 2}), ws({0, 0, 0})) == Word::wrap(0));
  CHECK_THROWS_AS(scalarp_ref(ws({1}), ws({})), std::invalid_argument);
}

TEST_CASE("vmmult") {
  CHECK(vmmult_ref(Matrix::rows_of({{1, 0}, {0, 1}}), ws({7, 9})) == ws({7, 9}));
  CHECK(vmmult_ref(Matrix::rows_of({{1, 2}, {3, 4}}), ws({5, 6})) == ws({17, 39}));
  CHECK(vmmult_ref(Matrix::rows_of({{2, 3}}), ws({1, 1})) == ws({5}));
  CHECK_THROWS_AS(vmmult_ref(Matrix::rows_of({{1, 2}}), ws({1})), std::invalid_argument);
}

TEST_CASE("mmult of the two-by-two example") {
  const Matrix css = mmult_ref(Matrix::rows_of({{1, 2}, {3, 4}}), Matrix::cols_of({{5, 7}, {6, 8}}));
  CHECK(css == Matrix::cols_of({{19, 43}, {22, 50}}));
  CHECK(css.orientation() == Orientation::ByCols);
  CHECK(css.at(0, 1) == Word::wrap(22));
}

TEST_CASE("mmult identity, zero and dimension laws") {
  gen::Rng rng(12);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = gen::count(rng, 1, 8);
    const std::size_t m = gen::count(rng, 1, 8);
    const std::size_t k = gen::count(rng, 1, 8);
    const Matrix bss = gen::matrix(rng, m, k, Orientation::ByCols);
    Matrix id(m, m, Orientation::ByRows);
    for (std::size_t i = 0; i < m; ++i) id.set(i, i, Word::wrap(1));
    CHECK(mmult_ref(id, bss) == bss);
    const Matrix ass = gen::matrix(rng, n, m, Orientation::ByRows);
    const Matrix zero(m, k, Orientation::ByCols);
    CHECK(mmult_ref(ass, zero) == Matrix(n, k, Orientation::ByCols));
    const Matrix css = mmult_ref(ass, bss);
    CHECK(css.rows() == n);
    CHECK(css.cols() == k);
  }
  CHECK_THROWS_AS(mmult_ref(Matrix(2, 3, Orientation::ByRows), Matrix(2, 2, Orientation::ByCols)),
                  std::invalid_argument);
}

TEST_CASE("empty matrices give empty products") {
  const Matrix css = mmult_ref(Matrix(0, 3, Orientation::ByRows), Matrix(3, 2, Orientation::ByCols));
  CHECK(css.rows() == 0);
  CHECK(css.cols() == 2);
}

TEST_CASE("property: mmult agrees with an independent triple loop") {
  gen::Rng rng(13);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = gen::count(rng, 1, 8);
    const std::size_t m = gen::count(rng, 1, 8);
    const std::size_t k = gen::count(rng, 1, 8);
    const Matrix ass = gen::matrix(rng, n, m, Orientation::ByRows);
    const Matrix bss = gen::matrix(rng, m, k, Orientation::ByCols);
    CHECK(mmult_ref(ass, bss) == triple_loop(ass, bss));
  }
}

TEST_CASE("matrix lists follow the orientation") {
  const Matrix a = Matrix::rows_of({{1, 2, 3}, {4, 5, 6}});
  CHECK(a.lists().size() == 2);
  CHECK(a.reoriented(Orientation::ByCols).lists().size() == 3);
  CHECK(a.reoriented(Orientation::ByCols).lists()[0] == ws({1, 4}));
  CHECK(a.to_string() == "rows[[1,2,3],[4,5,6]]");
}
