#include "hmp/model.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hmp/errors.hpp"

namespace hmp {

namespace {

std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string describe_row(MatrixId id, std::size_t row) {
  if (id == MatrixId::InitialBelief) return std::string(matrix_name(id));
  return std::string(matrix_name(id)) + " row " + std::to_string(row);
}

// Checks one row and renormalizes it when its sum is off by more than
// rounding but within the repair tolerance. Returns the signed defect.
double check_and_repair_row(std::span<double> row, MatrixId id, std::size_t index) {
  double sum = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    const double v = row[j];
    if (!std::isfinite(v)) {
      throw InvalidArgument(describe_row(id, index) + " has a non-finite entry");
    }
    if (v < 0.0) {
      throw InvalidArgument(describe_row(id, index) + " has negative entry " + format_double(v) + " in column " +
                            std::to_string(j));
    }
    sum += v;
  }
  const double defect = sum - 1.0;
  if (std::abs(defect) > kRowRepairTolerance + kRowExactSlack) {
    throw InvalidArgument(describe_row(id, index) + " sums to " + format_double(sum) + " (tolerance " +
                          format_double(kRowRepairTolerance) + ")");
  }
  if (std::abs(defect) > kRowExactSlack) normalize_in_place(row);
  return defect;
}

struct Line {
  std::size_t number;
  std::vector<std::string> tokens;
};

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw ParseError("line " + std::to_string(line) + ": " + what);
}

class LineCursor {
 public:
  explicit LineCursor(std::vector<Line> lines) : lines_(std::move(lines)) {}

  bool done() const { return pos_ >= lines_.size(); }
  std::size_t last_line() const { return lines_.empty() ? 0 : lines_.back().number; }

  const Line& next(const char* expecting) {
    if (done()) fail(last_line(), std::string("unexpected end of input, expected ") + expecting);
    return lines_[pos_++];
  }

  const Line* peek() const { return done() ? nullptr : &lines_[pos_]; }

 private:
  std::vector<Line> lines_;
  std::size_t pos_ = 0;
};

double parse_number(std::string_view tok, std::size_t line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
    fail(line, "not a finite decimal number: '" + std::string(tok) + "'");
  }
  return v;
}

std::size_t parse_count(const Line& line, std::string_view keyword) {
  if (line.tokens.size() != 2 || line.tokens[0] != keyword) {
    fail(line.number, "expected '" + std::string(keyword) + " <count>'");
  }
  std::size_t n = 0;
  const auto tok = line.tokens[1];
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), n);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || n == 0) {
    fail(line.number, "'" + std::string(keyword) + "' needs a positive integer");
  }
  return n;
}

void expect_keyword(const Line& line, std::string_view keyword) {
  if (line.tokens.size() != 1 || line.tokens[0] != keyword) {
    fail(line.number, "expected section '" + std::string(keyword) + "'");
  }
}

std::vector<double> parse_row(const Line& line, std::size_t width, MatrixId id, std::size_t row) {
  if (line.tokens.size() != width) {
    fail(line.number, describe_row(id, row) + " has " + std::to_string(line.tokens.size()) + " entries, expected " +
                          std::to_string(width));
  }
  std::vector<double> values;
  values.reserve(width);
  for (const auto& tok : line.tokens) values.push_back(parse_number(tok, line.number));
  return values;
}

Matrix parse_matrix(LineCursor& cur, std::size_t rows, std::size_t cols, MatrixId id) {
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const Line& line = cur.next("a matrix row");
    std::vector<double> values = parse_row(line, cols, id, r);
    // Checked on a copy so the constructor still sees, repairs and records
    // the original defect; errors here carry the line number.
    std::vector<double> probe = values;
    try {
      check_and_repair_row(probe, id, r);
    } catch (const InvalidArgument& e) {
      fail(line.number, e.what());
    }
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = values[c];
  }
  return m;
}

}  // namespace

std::string_view matrix_name(MatrixId id) {
  switch (id) {
    case MatrixId::Transition:
      return "P";
    case MatrixId::Emission:
      return "T";
    case MatrixId::InitialBelief:
      return "nu";
  }
  return "?";
}

HmmModel::HmmModel(Matrix transition, Matrix emission, std::optional<std::vector<double>> initial_belief)
    : transition_(std::move(transition)), emission_(std::move(emission)) {
  const auto ns = transition_.rows();
  if (ns == 0 || transition_.cols() != ns) {
    throw InvalidArgument("transition matrix must be square and non-empty");
  }
  if (emission_.rows() != ns || emission_.cols() == 0) {
    throw InvalidArgument("emission matrix must have one row per state and at least one column");
  }
  for (std::size_t s = 0; s < num_states(); ++s) {
    std::span<double> row(transition_.data() + s * num_states(), num_states());
    row_defects_.push_back({MatrixId::Transition, s, check_and_repair_row(row, MatrixId::Transition, s)});
  }
  for (std::size_t s = 0; s < num_states(); ++s) {
    std::span<double> row(emission_.data() + s * num_obs(), num_obs());
    row_defects_.push_back({MatrixId::Emission, s, check_and_repair_row(row, MatrixId::Emission, s)});
  }
  if (initial_belief) {
    if (initial_belief->size() != num_states()) {
      throw InvalidArgument("initial belief has dimension " + std::to_string(initial_belief->size()) + ", expected " +
                            std::to_string(num_states()));
    }
    row_defects_.push_back(
        {MatrixId::InitialBelief, 0, check_and_repair_row(*initial_belief, MatrixId::InitialBelief, 0)});
    initial_belief_ = SimplexVector::from_weights(std::move(*initial_belief));
  }
  positive_emissions_ = (emission_.array() > 0.0).all();
}

HmmModel parse_model(std::istream& in) {
  std::vector<Line> lines;
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    auto tokens = split_ws(raw);
    if (tokens.empty() || tokens.front().front() == '#') continue;
    lines.push_back({number, std::move(tokens)});
  }
  LineCursor cur(std::move(lines));

  const Line& header = cur.next("header 'hmp 1'");
  if (header.tokens.size() != 2 || header.tokens[0] != "hmp" || header.tokens[1] != "1") {
    fail(header.number, "expected header 'hmp 1'");
  }
  const std::size_t ns = parse_count(cur.next("'states <n>'"), "states");
  const std::size_t nz = parse_count(cur.next("'obs <n>'"), "obs");

  expect_keyword(cur.next("section 'P'"), "P");
  Matrix transition = parse_matrix(cur, ns, ns, MatrixId::Transition);
  expect_keyword(cur.next("section 'T'"), "T");
  Matrix emission = parse_matrix(cur, ns, nz, MatrixId::Emission);

  std::optional<std::vector<double>> nu;
  if (!cur.done()) {
    expect_keyword(cur.next("section 'nu'"), "nu");
    const Line& row = cur.next("the 'nu' row");
    nu = parse_row(row, ns, MatrixId::InitialBelief, 0);
    std::vector<double> probe = *nu;
    try {
      check_and_repair_row(probe, MatrixId::InitialBelief, 0);
    } catch (const InvalidArgument& e) {
      fail(row.number, e.what());
    }
  }
  if (const Line* extra = cur.peek()) fail(extra->number, "unexpected trailing content");

  return HmmModel(std::move(transition), std::move(emission), std::move(nu));
}

HmmModel parse_model(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_model(in);
}

HmmModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model file '" + path + "'");
  return parse_model(in);
}

std::string serialize_model(const HmmModel& model) {
  std::ostringstream out;
  out << "hmp 1\nstates " << model.num_states() << "\nobs " << model.num_obs() << "\n";
  auto write_rows = [&](const Matrix& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) out << (c ? " " : "") << format_double(m(r, c));
      out << "\n";
    }
  };
  out << "P\n";
  write_rows(model.transition());
  out << "T\n";
  write_rows(model.emission());
  if (const auto& nu = model.initial_belief()) {
    out << "nu\n";
    for (std::size_t i = 0; i < nu->dimension(); ++i) out << (i ? " " : "") << format_double((*nu)[i]);
    out << "\n";
  }
  return out.str();
}

ValidationReport validate_model(const HmmModel& model) {
  ValidationReport report;
  for (const RowDefect& d : model.row_defects()) {
    if (d.matrix != MatrixId::InitialBelief) report.row_sum_defects.push_back(d);
    if (std::abs(d.defect) > kRowExactSlack) {
      report.warnings.push_back(describe_row(d.matrix, d.row) + " summed to " + format_double(1.0 + d.defect) +
                                "; renormalized");
    }
  }
  report.has_zero_emissions = !model.strictly_positive_emissions();
  if (report.has_zero_emissions) {
    report.warnings.push_back("emission matrix T has zero entries; belief updates are only partially defined");
  }
  return report;
}

SimplexVector zeta(const HmmModel& model, const SimplexVector& belief) {
  if (belief.dimension() != model.num_states()) {
    throw InvalidArgument("belief has dimension " + std::to_string(belief.dimension()) + ", model has " +
                          std::to_string(model.num_states()) + " states");
  }
  std::vector<double> out(model.num_obs());
  zeta_into(model, belief.entries(), out);
  return SimplexVector::from_weights(std::move(out));
}

void zeta_into(const HmmModel& model, std::span<const double> belief, std::span<double> out) {
  const std::size_t ns = model.num_states();
  const std::size_t nz = model.num_obs();
  const double* t = model.emission().data();
  for (std::size_t z = 0; z < nz; ++z) out[z] = 0.0;
  for (std::size_t k = 0; k < ns; ++k) {
    const double b = belief[k];
    if (b == 0.0) continue;
    for (std::size_t z = 0; z < nz; ++z) out[z] += b * t[k * nz + z];
  }
}

}  // namespace hmp
