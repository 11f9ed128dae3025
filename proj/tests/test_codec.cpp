#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>

#include "gafsm/analysis.hpp"
#include "gafsm/codec.hpp"
#include "gafsm/fsm.hpp"
#include "gafsm/rng.hpp"

using namespace gafsm;

namespace {

// independent reference decode: per-bit cumulative XOR, written without
// reusing the library helpers
BitVec reference_gray_decode(const BitVec& in) {
  BitVec out;
  std::uint8_t acc = 0;
  for (std::uint8_t b : in) {
    acc = acc ^ b;
    out.push_back(acc);
  }
  return out;
}

Chromosome random_chromosome(const ChromosomeLayout& layout, Rng& rng) {
  Chromosome chrom;
  chrom.layout = layout;
  chrom.bits.resize(chromosome_length(layout));
  for (auto& b : chrom.bits) b = static_cast<std::uint8_t>(rng.next_u64() & 1);
  return chrom;
}

Fsm random_machine(const ChromosomeLayout& layout, Rng& rng) {
  Fsm fsm;
  fsm.num_states = layout.num_states;
  fsm.num_actions = layout.num_actions;
  fsm.action_vector.resize(layout.num_states);
  fsm.state_matrix.assign(layout.num_states, std::vector<int>(layout.num_columns));
  for (int s = 0; s < layout.num_states; ++s) {
    fsm.action_vector[s] = 1 + static_cast<int>(rng.below(layout.num_actions));
    for (int c = 0; c < layout.num_columns; ++c) {
      fsm.state_matrix[s][c] = 1 + static_cast<int>(rng.below(layout.num_states));
    }
  }
  for (int j = 1; j <= layout.num_predictors(); ++j) {
    fsm.predictor_names.push_back("x" + std::to_string(j));
  }
  for (int a = 1; a <= layout.num_actions; ++a) {
    fsm.action_labels.push_back("a" + std::to_string(a));
  }
  return fsm;
}

}  // namespace

TEST_CASE("gray_to_binary known vectors") {
  CHECK(gray_to_binary({0, 0, 1, 0, 0, 0, 0, 0}) == BitVec{0, 0, 1, 1, 1, 1, 1, 1});
  CHECK(gray_to_binary({0, 0, 0, 0}) == BitVec{0, 0, 0, 0});
  CHECK(gray_to_binary({1, 1, 1}) == BitVec{1, 0, 1});
  CHECK_THROWS_AS(gray_to_binary({}), std::invalid_argument);
}

TEST_CASE("binary_to_gray known vectors") {
  CHECK(binary_to_gray({0, 0, 1, 1, 1, 1, 1, 1}) == BitVec{0, 0, 1, 0, 0, 0, 0, 0});
  CHECK(binary_to_gray({0}) == BitVec{0});
  CHECK(binary_to_gray({1, 0, 1}) == BitVec{1, 1, 1});
  CHECK_THROWS_AS(binary_to_gray({}), std::invalid_argument);
}

TEST_CASE("gray round trip and reference decode on random vectors") {
  Rng rng(12345);
  for (int trial = 0; trial < 10000; ++trial) {
    BitVec bits(1 + rng.below(32));
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng.next_u64() & 1);
    const BitVec decoded = gray_to_binary(bits);
    CHECK(decoded == reference_gray_decode(bits));
    CHECK(binary_to_gray(decoded) == bits);
    CHECK(gray_to_binary(binary_to_gray(bits)) == bits);
  }
}

TEST_CASE("chromosome_length") {
  CHECK(chromosome_length({2, 2, 4}) == 10);
  CHECK(chromosome_length({2, 2, 2}) == 6);
  CHECK(chromosome_length({3, 2, 8}) == 51);
  CHECK_THROWS_AS(chromosome_length({1, 2, 4}), std::invalid_argument);
  CHECK_THROWS_AS(chromosome_length({2, 1, 4}), std::invalid_argument);
  CHECK_THROWS_AS(chromosome_length({2, 2, 3}), std::invalid_argument);
}

TEST_CASE("golden decode of the reference raw string") {
  Chromosome chrom;
  chrom.layout = {2, 2, 4};
  chrom.bits = {0, 1, 0, 0, 1, 0, 0, 0, 0, 0};
  const Fsm fsm = decode_chromosome(chrom, {"my.lag", "opp.lag"}, {"c", "d"});
  CHECK(fsm.action_vector == std::vector<int>{1, 2});
  REQUIRE(fsm.state_matrix.size() == 2);
  CHECK(fsm.state_matrix[0] == std::vector<int>{1, 2, 2, 2});
  CHECK(fsm.state_matrix[1] == std::vector<int>{1, 2, 2, 2});
  Fsm expected = builtin_strategy("noisy-grim");
  expected.column_labels.clear();  // decoded machines carry no display labels
  CHECK(fsm == expected);

  SUBCASE("encoding the machine recovers the raw string") {
    CHECK(encode_chromosome(builtin_strategy("noisy-grim")).bits ==
          BitVec{0, 1, 0, 0, 1, 0, 0, 0, 0, 0});
  }
}

TEST_CASE("all-zero chromosome decodes to minimum indices") {
  Chromosome chrom;
  chrom.layout = {2, 2, 4};
  chrom.bits.assign(10, 0);
  const Fsm fsm = decode_chromosome(chrom);
  CHECK(fsm.action_vector == std::vector<int>{1, 1});
  for (const auto& row : fsm.state_matrix) {
    for (int cell : row) CHECK(cell == 1);
  }
}

TEST_CASE("column-major fill order") {
  // field sequence f1..f8 must land: f1,f2 -> column 1 rows 1,2; f3,f4 ->
  // column 2; and so on. Choose binary fields 0,1,0,1,1,0,1,0 and encode the
  // state segment by hand.
  const BitVec fields = {0, 1, 0, 1, 1, 0, 1, 0};
  Chromosome chrom;
  chrom.layout = {2, 2, 4};
  chrom.bits = {0, 0};
  const BitVec gray = binary_to_gray(fields);
  chrom.bits.insert(chrom.bits.end(), gray.begin(), gray.end());

  const Fsm fsm = decode_chromosome(chrom);
  CHECK(fsm.state_matrix[0] == std::vector<int>{1, 1, 2, 2});  // f1,f3,f5,f7 + 1
  CHECK(fsm.state_matrix[1] == std::vector<int>{2, 2, 1, 1});  // f2,f4,f6,f8 + 1
}

TEST_CASE("out-of-range fields wrap modulo the valid range") {
  // 3-state layout, 2-bit state fields: decoded value 3 wraps to state 1
  ChromosomeLayout layout{3, 2, 4};
  REQUIRE(layout.state_bits() == 2);

  BitVec actions = {0, 0, 0};
  BitVec fields(24, 0);
  fields[0] = 1;  // first field bits "11" -> 3 -> 1 + (3 mod 3) = 1
  fields[1] = 1;
  Chromosome chrom;
  chrom.layout = layout;
  chrom.bits = binary_to_gray(actions);
  const BitVec gray = binary_to_gray(fields);
  chrom.bits.insert(chrom.bits.end(), gray.begin(), gray.end());

  const Fsm fsm = decode_chromosome(chrom);
  CHECK(fsm.state_matrix[0][0] == 1);
}

TEST_CASE("every chromosome of correct length decodes to a valid machine") {
  Rng rng(777);
  for (const ChromosomeLayout layout :
       {ChromosomeLayout{2, 2, 4}, ChromosomeLayout{3, 2, 4}, ChromosomeLayout{5, 3, 8}}) {
    for (int trial = 0; trial < 200; ++trial) {
      const Fsm fsm = decode_chromosome(random_chromosome(layout, rng));
      CHECK_NOTHROW(fsm.validate());
    }
  }
}

TEST_CASE("encode/decode round trip on random machines") {
  Rng rng(99);
  const ChromosomeLayout layouts[] = {{2, 2, 4}, {3, 2, 4}, {4, 2, 8}, {3, 3, 2}};
  for (const ChromosomeLayout& layout : layouts) {
    for (int trial = 0; trial < 250; ++trial) {
      const Fsm fsm = random_machine(layout, rng);
      const Chromosome chrom = encode_chromosome(fsm);
      CHECK(static_cast<int>(chrom.bits.size()) == chromosome_length(layout));
      CHECK(decode_chromosome(chrom, fsm.predictor_names, fsm.action_labels) == fsm);
    }
  }
}

TEST_CASE("tft encodes to its hand-derived chromosome") {
  // av (1,2) -> binary 0,1; matrix column-major fields
  // (1,1,1,1,2,2,2,2) -> binary 0,0,0,0,1,1,1,1; gray both segments
  const Chromosome chrom = encode_chromosome(builtin_strategy("tft"));
  CHECK(chrom.bits == BitVec{0, 1, 0, 0, 0, 0, 1, 0, 0, 0});
}

TEST_CASE("decode rejects length mismatch") {
  Chromosome chrom;
  chrom.layout = {2, 2, 4};
  chrom.bits.assign(9, 0);
  CHECK_THROWS_AS(decode_chromosome(chrom), std::invalid_argument);
}

TEST_CASE("encode rejects out-of-range machine fields") {
  Fsm fsm = builtin_strategy("tft");
  fsm.state_matrix[0][0] = 3;
  CHECK_THROWS_AS(encode_chromosome(fsm), std::invalid_argument);
}
