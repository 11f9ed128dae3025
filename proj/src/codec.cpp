#include "gafsm/codec.hpp"

#include <bit>
#include <stdexcept>

#include "gafsm/fsm.hpp"

namespace gafsm {

namespace {

int ceil_log2(int n) {
  return static_cast<int>(std::bit_width(static_cast<unsigned>(n - 1)));
}

}  // namespace

int ChromosomeLayout::action_bits() const { return ceil_log2(num_actions); }

int ChromosomeLayout::state_bits() const { return ceil_log2(num_states); }

int ChromosomeLayout::num_predictors() const {
  return static_cast<int>(std::bit_width(static_cast<unsigned>(num_columns))) - 1;
}

void ChromosomeLayout::validate() const {
  if (num_states < 2) throw std::invalid_argument("layout: num_states must be >= 2");
  if (num_actions < 2) throw std::invalid_argument("layout: num_actions must be >= 2");
  if (num_columns < 2) throw std::invalid_argument("layout: num_columns must be >= 2");
  if (!std::has_single_bit(static_cast<unsigned>(num_columns))) {
    throw std::invalid_argument("layout: num_columns must be a power of two (2^p predictors)");
  }
}

void Chromosome::validate() const {
  layout.validate();
  if (static_cast<int>(bits.size()) != chromosome_length(layout)) {
    throw std::invalid_argument("chromosome length does not match layout");
  }
  for (std::uint8_t b : bits) {
    if (b > 1) throw std::invalid_argument("chromosome bits must be 0 or 1");
  }
}

int chromosome_length(const ChromosomeLayout& layout) {
  layout.validate();
  return layout.action_segment_length() + layout.state_segment_length();
}

BitVec gray_to_binary(const BitVec& bits) {
  if (bits.empty()) throw std::invalid_argument("gray_to_binary: empty input");
  BitVec out(bits.size());
  std::uint8_t acc = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    acc ^= bits[i];
    out[i] = acc;
  }
  return out;
}

BitVec binary_to_gray(const BitVec& bits) {
  if (bits.empty()) throw std::invalid_argument("binary_to_gray: empty input");
  BitVec out(bits.size());
  out[0] = bits[0];
  for (std::size_t i = 1; i < bits.size(); ++i) {
    out[i] = bits[i - 1] ^ bits[i];
  }
  return out;
}

void decode_fields(const Chromosome& chrom, int* action_out, int* state_out) {
  const ChromosomeLayout& lay = chrom.layout;
  const std::uint8_t* bits = chrom.bits.data();
  const int ns = lay.num_states;
  const int nc = lay.num_columns;
  const int ab = lay.action_bits();
  const int sb = lay.state_bits();

  // Gray decode runs across each whole segment; fields are then cut out of
  // the decoded word at fixed widths, most significant bit first.
  std::uint8_t acc = 0;
  std::size_t pos = 0;
  for (int s = 0; s < ns; ++s) {
    int field = 0;
    for (int b = 0; b < ab; ++b) {
      acc ^= bits[pos++];
      field = (field << 1) | acc;
    }
    action_out[s] = field % lay.num_actions;
  }

  // State-matrix fields fill the matrix column by column.
  acc = 0;
  const int num_fields = ns * nc;
  for (int k = 0; k < num_fields; ++k) {
    int field = 0;
    for (int b = 0; b < sb; ++b) {
      acc ^= bits[pos++];
      field = (field << 1) | acc;
    }
    const int column = k / ns;
    const int row = k % ns;
    state_out[row * nc + column] = field % ns;
  }
}

Fsm decode_chromosome(const Chromosome& chrom, std::vector<std::string> predictor_names,
                      std::vector<std::string> action_labels) {
  chrom.validate();
  const ChromosomeLayout& lay = chrom.layout;
  if (static_cast<int>(predictor_names.size()) != lay.num_predictors()) {
    throw std::invalid_argument("decode_chromosome: predictor name count does not match layout");
  }
  if (static_cast<int>(action_labels.size()) != lay.num_actions) {
    throw std::invalid_argument("decode_chromosome: action label count does not match layout");
  }

  std::vector<int> av(lay.num_states);
  std::vector<int> sm(static_cast<std::size_t>(lay.num_states) * lay.num_columns);
  decode_fields(chrom, av.data(), sm.data());

  Fsm fsm;
  fsm.num_states = lay.num_states;
  fsm.num_actions = lay.num_actions;
  fsm.action_vector.resize(lay.num_states);
  fsm.state_matrix.assign(lay.num_states, std::vector<int>(lay.num_columns));
  for (int s = 0; s < lay.num_states; ++s) {
    fsm.action_vector[s] = av[s] + 1;
    for (int c = 0; c < lay.num_columns; ++c) {
      fsm.state_matrix[s][c] = sm[s * lay.num_columns + c] + 1;
    }
  }
  fsm.predictor_names = std::move(predictor_names);
  fsm.action_labels = std::move(action_labels);
  return fsm;
}

Fsm decode_chromosome(const Chromosome& chrom) {
  chrom.validate();
  std::vector<std::string> predictors;
  for (int j = 1; j <= chrom.layout.num_predictors(); ++j) {
    predictors.push_back("x" + std::to_string(j));
  }
  std::vector<std::string> actions;
  for (int a = 1; a <= chrom.layout.num_actions; ++a) {
    actions.push_back("a" + std::to_string(a));
  }
  return decode_chromosome(chrom, std::move(predictors), std::move(actions));
}

Chromosome encode_chromosome(const Fsm& fsm) {
  fsm.validate();
  const ChromosomeLayout lay = fsm.layout();

  Chromosome chrom;
  chrom.layout = lay;
  chrom.bits.reserve(chromosome_length(lay));

  const int ab = lay.action_bits();
  const int sb = lay.state_bits();

  BitVec segment;
  segment.reserve(lay.action_segment_length());
  for (int s = 0; s < lay.num_states; ++s) {
    const int field = fsm.action_vector[s] - 1;
    for (int b = ab - 1; b >= 0; --b) {
      segment.push_back(static_cast<std::uint8_t>((field >> b) & 1));
    }
  }
  BitVec gray = binary_to_gray(segment);
  chrom.bits.insert(chrom.bits.end(), gray.begin(), gray.end());

  segment.clear();
  segment.reserve(lay.state_segment_length());
  for (int c = 0; c < lay.num_columns; ++c) {
    for (int s = 0; s < lay.num_states; ++s) {
      const int field = fsm.state_matrix[s][c] - 1;
      for (int b = sb - 1; b >= 0; --b) {
        segment.push_back(static_cast<std::uint8_t>((field >> b) & 1));
      }
    }
  }
  gray = binary_to_gray(segment);
  chrom.bits.insert(chrom.bits.end(), gray.begin(), gray.end());
  return chrom;
}

}  // namespace gafsm
