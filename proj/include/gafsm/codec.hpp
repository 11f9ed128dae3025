#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gafsm {

using BitVec = std::vector<std::uint8_t>;

struct Fsm;

// Segment widths of the genotype for a machine shape. num_columns must be a
// power of two (one column per joint assignment of the binary predictors).
struct ChromosomeLayout {
  int num_states = 2;
  int num_actions = 2;
  int num_columns = 4;

  int action_bits() const;
  int state_bits() const;
  int action_segment_length() const { return num_states * action_bits(); }
  int state_segment_length() const { return num_states * num_columns * state_bits(); }
  int num_predictors() const;

  void validate() const;

  bool operator==(const ChromosomeLayout&) const = default;
};

// Gray-coded bit vector: action-vector segment followed by the state-matrix
// segment, each Gray-coded as one contiguous word.
struct Chromosome {
  BitVec bits;
  ChromosomeLayout layout;

  void validate() const;
  bool operator==(const Chromosome&) const = default;
};

int chromosome_length(const ChromosomeLayout& layout);

// Reflected-Gray decode: out[0] = in[0], out[i] = out[i-1] XOR in[i].
BitVec gray_to_binary(const BitVec& bits);
BitVec binary_to_gray(const BitVec& bits);

// Decode into caller-provided 0-based arrays: action_out[num_states] and
// state_out[num_states * num_columns], the latter indexed
// [state * num_columns + column]. Out-of-range field values wrap modulo the
// valid range, so every chromosome of the right length decodes. This is the
// hot path used directly by fitness evaluation; decode_chromosome wraps it.
void decode_fields(const Chromosome& chrom, int* action_out, int* state_out);

Fsm decode_chromosome(const Chromosome& chrom);
Fsm decode_chromosome(const Chromosome& chrom, std::vector<std::string> predictor_names,
                      std::vector<std::string> action_labels);

Chromosome encode_chromosome(const Fsm& fsm);

}  // namespace gafsm
