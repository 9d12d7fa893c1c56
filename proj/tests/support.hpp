#pragma once

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "hmp/belief.hpp"
#include "hmp/model.hpp"
#include "hmp/simplex.hpp"

namespace hmp::test {

inline std::string data_path(const std::string& name) { return std::string(HMP_TEST_DATA_DIR) + "/" + name; }

inline HmmModel load(const std::string& name) { return load_model(data_path(name)); }

// Dirichlet(1,...,1) draw, i.e. uniform on the simplex.
inline SimplexVector random_simplex(std::mt19937_64& rng, std::size_t dim) {
  std::exponential_distribution<double> exp1(1.0);
  std::vector<double> w(dim);
  for (double& x : w) x = exp1(rng);
  return SimplexVector::from_weights(std::move(w));
}

inline Word random_word(std::mt19937_64& rng, std::size_t alphabet, std::size_t max_length) {
  std::uniform_int_distribution<std::size_t> len(0, max_length);
  std::uniform_int_distribution<std::size_t> sym(0, alphabet - 1);
  Word w(len(rng));
  for (Symbol& z : w) z = sym(rng);
  return w;
}

// Strictly positive random model.
inline HmmModel random_model(std::mt19937_64& rng, std::size_t states, std::size_t obs) {
  Matrix p(states, states);
  Matrix t(states, obs);
  for (std::size_t s = 0; s < states; ++s) {
    const SimplexVector prow = random_simplex(rng, states);
    const SimplexVector trow = random_simplex(rng, obs);
    for (std::size_t j = 0; j < states; ++j) p(s, j) = 0.01 + prow[j];
    for (std::size_t z = 0; z < obs; ++z) t(s, z) = 0.01 + trow[z];
    p.row(s) /= p.row(s).sum();
    t.row(s) /= t.row(s).sum();
  }
  return HmmModel(p, t);
}

}  // namespace hmp::test
