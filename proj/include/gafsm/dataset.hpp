#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gafsm/codec.hpp"

namespace gafsm {

// One decision: the period it was taken in, the outcome (1-based action
// index), and the binary predictor values observed alongside it.
struct Row {
  int period = 0;
  int outcome = 0;
  BitVec predictors;

  bool operator==(const Row&) const = default;
};

// One sequence of consecutive decisions by one unit (a game, a dyad, ...).
// Machine state never carries across group boundaries.
struct Group {
  std::string id;
  std::vector<Row> rows;

  bool operator==(const Group&) const = default;
};

struct Dataset {
  std::vector<Group> groups;
  std::vector<std::string> predictor_names;
  std::vector<std::string> action_labels;

  int num_predictors() const { return static_cast<int>(predictor_names.size()); }
  int num_actions() const { return static_cast<int>(action_labels.size()); }
  int num_columns() const { return 1 << num_predictors(); }
  std::size_t num_groups() const { return groups.size(); }
  std::size_t num_rows() const;

  void validate() const;

  bool operator==(const Dataset&) const = default;
};

// Load failure carrying the offending location, for error messages like
// "row 17, column opp.lag: predictor value '2' is not binary".
class LoadError : public std::runtime_error {
 public:
  LoadError(std::string message, std::size_t row, std::string column);

  std::size_t row() const { return row_; }
  const std::string& column() const { return column_; }

 private:
  std::size_t row_;
  std::string column_;
};

// Column-name mapping for delimited text files. Canonical names are the
// defaults; predictor_columns empty means "every other header column, in
// header order". group_column is used only when present in the header.
struct TableSchema {
  std::string period_column = "period";
  std::string outcome_column = "outcome";
  std::string group_column = "group";
  std::vector<std::string> predictor_columns;
  std::vector<std::string> action_labels = {"c", "d"};
};

Dataset load_table(const std::string& path, const TableSchema& schema = {});
Dataset read_table(std::istream& in, const TableSchema& schema = {});

// Canonical writer: group,period,outcome,<predictors...> with outcomes as
// labels and predictors as 0/1. read_table(write_table(d)) == d.
void write_table(const Dataset& data, const std::string& path);
void write_table(const Dataset& data, std::ostream& out);
std::string table_to_string(const Dataset& data);

// 1 where value > threshold, else 0. Ties fall low.
BitVec binarize(const std::vector<double>& values, double threshold);
// Threshold at the sample median (mean of the two middle values for even n).
BitVec binarize_median(const std::vector<double>& values);

struct SplitSpec {
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
};

// Partition whole groups at random; train receives
// ceil(train_fraction * num_groups) of them.
std::pair<Dataset, Dataset> split_train_test(const Dataset& data, const SplitSpec& spec);

// Per-group fold labels in 1..k; fold sizes differ by at most one group.
std::vector<int> fold_assignments(const Dataset& data, int k, std::uint64_t seed);

// Groups whose fold label satisfies keep(fold).
Dataset select_groups(const Dataset& data, const std::vector<bool>& keep);

// Same rows restricted to the given predictor indices (0-based), in the
// given order.
Dataset project_predictors(const Dataset& data, const std::vector<int>& predictor_indices);

}  // namespace gafsm
