#include "gafsm/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "gafsm/rng.hpp"

namespace gafsm {

std::size_t Dataset::num_rows() const {
  std::size_t n = 0;
  for (const Group& g : groups) n += g.rows.size();
  return n;
}

void Dataset::validate() const {
  if (predictor_names.empty()) throw std::invalid_argument("dataset: needs >= 1 predictor");
  if (action_labels.size() < 2) throw std::invalid_argument("dataset: needs >= 2 action labels");
  for (const Group& g : groups) {
    int last_period = 0;
    bool first = true;
    for (const Row& row : g.rows) {
      if (!first && row.period <= last_period) {
        throw std::invalid_argument("dataset: periods must strictly increase within group '" +
                                    g.id + "'");
      }
      last_period = row.period;
      first = false;
      if (row.outcome < 1 || row.outcome > num_actions()) {
        throw std::invalid_argument("dataset: outcome out of range in group '" + g.id + "'");
      }
      if (row.predictors.size() != predictor_names.size()) {
        throw std::invalid_argument("dataset: predictor arity mismatch in group '" + g.id + "'");
      }
      for (std::uint8_t b : row.predictors) {
        if (b > 1) throw std::invalid_argument("dataset: predictor values must be 0 or 1");
      }
    }
  }
}

LoadError::LoadError(std::string message, std::size_t row, std::string column)
    : std::runtime_error(std::move(message)), row_(row), column_(std::move(column)) {}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(field);
      field.clear();
    } else if (ch != '\r') {
      field += ch;
    }
  }
  fields.push_back(field);
  return fields;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

int parse_outcome(const std::string& value, const std::vector<std::string>& labels,
                  std::size_t row, const std::string& column) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (value == labels[i]) return static_cast<int>(i) + 1;
  }
  throw LoadError("row " + std::to_string(row) + ", column " + column + ": unknown outcome label '" +
                      value + "'",
                  row, column);
}

std::uint8_t parse_predictor(const std::string& value, const std::vector<std::string>& labels,
                             std::size_t row, const std::string& column) {
  if (value == "0") return 0;
  if (value == "1") return 1;
  // binary-outcome corpora often record lagged moves with the outcome labels
  if (labels.size() == 2) {
    if (value == labels[0]) return 0;
    if (value == labels[1]) return 1;
  }
  throw LoadError("row " + std::to_string(row) + ", column " + column + ": predictor value '" +
                      value + "' is not binary",
                  row, column);
}

int parse_period(const std::string& value, std::size_t row, const std::string& column) {
  try {
    std::size_t consumed = 0;
    const int period = std::stoi(value, &consumed);
    if (consumed != value.size() || period < 1) throw std::invalid_argument("");
    return period;
  } catch (const std::exception&) {
    throw LoadError("row " + std::to_string(row) + ", column " + column + ": bad period value '" +
                        value + "'",
                    row, column);
  }
}

}  // namespace

Dataset read_table(std::istream& in, const TableSchema& schema) {
  std::string line;
  if (!std::getline(in, line)) throw LoadError("empty file: missing header row", 0, "");
  const std::vector<std::string> header = split_csv_line(line);

  auto find_column = [&](const std::string& name) -> int {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (trim(header[i]) == name) return static_cast<int>(i);
    }
    return -1;
  };

  const int period_col = find_column(schema.period_column);
  if (period_col < 0) {
    throw LoadError("missing column '" + schema.period_column + "'", 0, schema.period_column);
  }
  const int outcome_col = find_column(schema.outcome_column);
  if (outcome_col < 0) {
    throw LoadError("missing column '" + schema.outcome_column + "'", 0, schema.outcome_column);
  }
  const int group_col = schema.group_column.empty() ? -1 : find_column(schema.group_column);

  std::vector<std::string> predictor_names = schema.predictor_columns;
  std::vector<int> predictor_cols;
  if (predictor_names.empty()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      const int idx = static_cast<int>(i);
      if (idx == period_col || idx == outcome_col || idx == group_col) continue;
      const std::string name = trim(header[i]);
      if (name.empty()) continue;
      predictor_names.push_back(name);
      predictor_cols.push_back(idx);
    }
  } else {
    for (const std::string& name : predictor_names) {
      const int idx = find_column(name);
      if (idx < 0) throw LoadError("missing column '" + name + "'", 0, name);
      predictor_cols.push_back(idx);
    }
  }
  if (predictor_names.empty()) throw LoadError("no predictor columns found", 0, "");

  Dataset data;
  data.predictor_names = predictor_names;
  data.action_labels = schema.action_labels;

  Group current;
  bool have_group = false;
  int last_period = 0;
  std::size_t row_number = 1;  // header is row 1
  std::size_t anon_groups = 0;
  std::set<std::string> closed_groups;

  auto flush = [&]() {
    if (!current.rows.empty()) data.groups.push_back(std::move(current));
    current = Group{};
  };

  while (std::getline(in, line)) {
    ++row_number;
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw LoadError("row " + std::to_string(row_number) + ": expected " +
                          std::to_string(header.size()) + " fields, got " +
                          std::to_string(fields.size()),
                      row_number, "");
    }

    const int period = parse_period(trim(fields[period_col]), row_number, schema.period_column);
    const int outcome =
        parse_outcome(trim(fields[outcome_col]), schema.action_labels, row_number,
                      schema.outcome_column);
    BitVec predictors;
    predictors.reserve(predictor_cols.size());
    for (std::size_t j = 0; j < predictor_cols.size(); ++j) {
      predictors.push_back(parse_predictor(trim(fields[predictor_cols[j]]), schema.action_labels,
                                           row_number, predictor_names[j]));
    }

    if (group_col >= 0) {
      const std::string gid = trim(fields[group_col]);
      if (!have_group || gid != current.id) {
        if (have_group) closed_groups.insert(current.id);
        if (closed_groups.count(gid)) {
          throw LoadError("row " + std::to_string(row_number) + ", column " +
                              schema.group_column + ": group '" + gid +
                              "' reappears; rows of a group must be contiguous",
                          row_number, schema.group_column);
        }
        flush();
        current.id = gid;
        have_group = true;
        last_period = 0;
      } else if (period <= last_period) {
        throw LoadError("row " + std::to_string(row_number) + ", column " + schema.period_column +
                            ": periods must strictly increase within group '" + gid + "'",
                        row_number, schema.period_column);
      }
    } else {
      // no group column: a non-increasing period starts a new sequence
      if (!have_group || period <= last_period) {
        flush();
        current.id = "g" + std::to_string(++anon_groups);
        have_group = true;
      }
    }
    last_period = period;
    current.rows.push_back(Row{period, outcome, std::move(predictors)});
  }
  flush();
  data.validate();
  return data;
}

Dataset load_table(const std::string& path, const TableSchema& schema) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open file: " + path, 0, "");
  return read_table(in, schema);
}

void write_table(const Dataset& data, std::ostream& out) {
  data.validate();
  out << "group,period,outcome";
  for (const std::string& name : data.predictor_names) out << ',' << name;
  out << '\n';
  for (const Group& g : data.groups) {
    for (const Row& row : g.rows) {
      out << g.id << ',' << row.period << ',' << data.action_labels[row.outcome - 1];
      for (std::uint8_t b : row.predictors) out << ',' << static_cast<int>(b);
      out << '\n';
    }
  }
}

void write_table(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  write_table(data, out);
}

std::string table_to_string(const Dataset& data) {
  std::ostringstream out;
  write_table(data, out);
  return out.str();
}

BitVec binarize(const std::vector<double>& values, double threshold) {
  if (values.empty()) throw std::invalid_argument("binarize: empty input");
  BitVec bits(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    bits[i] = values[i] > threshold ? 1 : 0;
  }
  return bits;
}

BitVec binarize_median(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("binarize: empty input");
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  const double median =
      (n % 2 == 1) ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  return binarize(values, median);
}

std::pair<Dataset, Dataset> split_train_test(const Dataset& data, const SplitSpec& spec) {
  if (data.groups.size() < 2) {
    throw std::invalid_argument("split_train_test: need at least 2 groups");
  }
  if (spec.train_fraction <= 0.0 || spec.train_fraction >= 1.0) {
    throw std::invalid_argument("split_train_test: train fraction must be in (0,1)");
  }
  std::vector<std::size_t> order(data.groups.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed(spec.seed, 0x5197));
  rng.shuffle(order);

  const auto n_train = static_cast<std::size_t>(
      std::ceil(spec.train_fraction * static_cast<double>(data.groups.size())));
  std::vector<bool> in_train(data.groups.size(), false);
  for (std::size_t i = 0; i < n_train; ++i) in_train[order[i]] = true;

  Dataset train = data;
  Dataset test = data;
  train.groups.clear();
  test.groups.clear();
  for (std::size_t i = 0; i < data.groups.size(); ++i) {
    (in_train[i] ? train : test).groups.push_back(data.groups[i]);
  }
  return {std::move(train), std::move(test)};
}

std::vector<int> fold_assignments(const Dataset& data, int k, std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("fold_assignments: k must be >= 2");
  if (static_cast<std::size_t>(k) > data.groups.size()) {
    throw std::invalid_argument("fold_assignments: k exceeds number of groups");
  }
  std::vector<std::size_t> order(data.groups.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed(seed, 0xf01d5));
  rng.shuffle(order);

  // deal shuffled groups round-robin so fold sizes differ by at most one
  std::vector<int> folds(data.groups.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    folds[order[i]] = static_cast<int>(i % k) + 1;
  }
  return folds;
}

Dataset select_groups(const Dataset& data, const std::vector<bool>& keep) {
  if (keep.size() != data.groups.size()) {
    throw std::invalid_argument("select_groups: mask size mismatch");
  }
  Dataset out = data;
  out.groups.clear();
  for (std::size_t i = 0; i < data.groups.size(); ++i) {
    if (keep[i]) out.groups.push_back(data.groups[i]);
  }
  return out;
}

Dataset project_predictors(const Dataset& data, const std::vector<int>& predictor_indices) {
  if (predictor_indices.empty()) {
    throw std::invalid_argument("project_predictors: empty predictor set");
  }
  for (int idx : predictor_indices) {
    if (idx < 0 || idx >= data.num_predictors()) {
      throw std::invalid_argument("project_predictors: predictor index out of range");
    }
  }
  Dataset out = data;
  out.predictor_names.clear();
  for (int idx : predictor_indices) out.predictor_names.push_back(data.predictor_names[idx]);
  for (Group& g : out.groups) {
    for (Row& row : g.rows) {
      BitVec projected;
      projected.reserve(predictor_indices.size());
      for (int idx : predictor_indices) projected.push_back(row.predictors[idx]);
      row.predictors = std::move(projected);
    }
  }
  return out;
}

}  // namespace gafsm
