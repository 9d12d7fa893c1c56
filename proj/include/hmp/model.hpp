#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hmp/simplex.hpp"

namespace hmp {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Rows whose sum is within this distance of 1 are renormalized with a warning;
// anything further is rejected.
inline constexpr double kRowRepairTolerance = 1e-6;

// Deviations at or below this are rounding in the decimal input and are left
// untouched, so parsed numbers stay bit-identical to the file.
inline constexpr double kRowExactSlack = 1e-12;

enum class MatrixId { Transition, Emission, InitialBelief };

std::string_view matrix_name(MatrixId id);

struct RowDefect {
  MatrixId matrix;
  std::size_t row;
  double defect;  // sum - 1 before repair
};

// A finite-alphabet hidden Markov process: state transitions P (|S|x|S|),
// emissions T (|S|x|Z|) and an optional initial state distribution.
class HmmModel {
 public:
  // Throws InvalidArgument on shape mismatch, negative or non-finite entries,
  // or a row sum further than kRowRepairTolerance from 1.
  HmmModel(Matrix transition, Matrix emission, std::optional<std::vector<double>> initial_belief = std::nullopt);
  HmmModel(Matrix transition, Matrix emission, const SimplexVector& initial_belief)
      : HmmModel(std::move(transition), std::move(emission), initial_belief.to_vector()) {}

  std::size_t num_states() const { return static_cast<std::size_t>(transition_.rows()); }
  std::size_t num_obs() const { return static_cast<std::size_t>(emission_.cols()); }

  const Matrix& transition() const { return transition_; }
  const Matrix& emission() const { return emission_; }
  const std::optional<SimplexVector>& initial_belief() const { return initial_belief_; }

  std::span<const double> transition_row(std::size_t s) const {
    return {transition_.data() + s * num_states(), num_states()};
  }
  std::span<const double> emission_row(std::size_t s) const {
    return {emission_.data() + s * num_obs(), num_obs()};
  }

  // True iff every T[s,z] > 0.
  bool strictly_positive_emissions() const { return positive_emissions_; }

  // Sum defect of every row of P, T (and the initial belief, if any) as given
  // to the constructor. Rows with |defect| > kRowExactSlack were renormalized.
  const std::vector<RowDefect>& row_defects() const { return row_defects_; }

 private:
  Matrix transition_;
  Matrix emission_;
  std::optional<SimplexVector> initial_belief_;
  bool positive_emissions_ = false;
  std::vector<RowDefect> row_defects_;
};

struct ValidationReport {
  std::vector<RowDefect> row_sum_defects;  // every row of P then T, before repair
  bool has_zero_emissions = false;
  std::optional<bool> is_primitive_P;  // set by validate_with_chain
  std::vector<std::string> warnings;
};

// Reads the line-oriented `hmp 1` model format. Throws ParseError with the
// offending line number.
HmmModel parse_model(std::istream& in);
HmmModel parse_model(std::string_view text);
HmmModel load_model(const std::string& path);

// Shortest round-trip decimal representation of every entry.
std::string serialize_model(const HmmModel& model);

ValidationReport validate_model(const HmmModel& model);

// Predictive observation distribution belief * T.
SimplexVector zeta(const HmmModel& model, const SimplexVector& belief);

// Unchecked kernel: out[z] = sum_k belief[k] T[k,z].
void zeta_into(const HmmModel& model, std::span<const double> belief, std::span<double> out);

}  // namespace hmp
