#pragma once

// Antisymmetric generators of SO(N) and their pairwise tensor products.
//
// Generator (i, j), i < j, has +1 at (i, j) and -1 at (j, i). Generators are
// enumerated lexicographically in (i, j). The single SO(2) generator gives
// L (x) L = -sigma_y (x) sigma_y, the two-qubit spin flip up to sign.

#include <resent/types.hpp>

#include <string>
#include <utility>
#include <vector>

namespace resent {

/// Support of one generator: +1 at (i, j), -1 at (j, i).
struct GeneratorIndex {
  int i = 0;
  int j = 0;
};

class GeneratorSet {
 public:
  explicit GeneratorSet(int n) : n_(n) {
    if (n < 2) throw InvalidArgument("so_generators: N must be >= 2, got " + std::to_string(n));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) index_.push_back({i, j});
  }

  int dim() const { return n_; }
  std::size_t size() const { return index_.size(); }
  const std::vector<GeneratorIndex>& indices() const { return index_; }
  const GeneratorIndex& index(std::size_t a) const { return index_[a]; }

  RMatrix matrix(std::size_t a) const {
    RMatrix l = RMatrix::Zero(n_, n_);
    l(index_[a].i, index_[a].j) = 1.0;
    l(index_[a].j, index_[a].i) = -1.0;
    return l;
  }

  std::vector<RMatrix> matrices() const {
    std::vector<RMatrix> out;
    out.reserve(size());
    for (std::size_t a = 0; a < size(); ++a) out.push_back(matrix(a));
    return out;
  }

 private:
  int n_;
  std::vector<GeneratorIndex> index_;
};

inline GeneratorSet so_generators(int n) { return GeneratorSet(n); }

/// Products S_ab = L_a (x) L_b, left index slow, right index fast.
class ProductGeneratorSet {
 public:
  ProductGeneratorSet(int n1, int n2) : left_(n1), right_(n2) {}

  const GeneratorSet& left() const { return left_; }
  const GeneratorSet& right() const { return right_; }
  std::size_t size() const { return left_.size() * right_.size(); }

  /// (left, right) generator indices of product k.
  std::pair<std::size_t, std::size_t> split(std::size_t k) const {
    return {k / right_.size(), k % right_.size()};
  }

  RMatrix matrix(std::size_t k) const {
    const auto [a, b] = split(k);
    const RMatrix l = left_.matrix(a);
    const RMatrix r = right_.matrix(b);
    RMatrix out(l.rows() * r.rows(), l.cols() * r.cols());
    for (Eigen::Index i = 0; i < l.rows(); ++i)
      for (Eigen::Index j = 0; j < l.cols(); ++j)
        out.block(i * r.rows(), j * r.cols(), r.rows(), r.cols()) = l(i, j) * r;
    return out;
  }

  std::vector<RMatrix> matrices() const {
    std::vector<RMatrix> out;
    out.reserve(size());
    for (std::size_t k = 0; k < size(); ++k) out.push_back(matrix(k));
    return out;
  }

 private:
  GeneratorSet left_;
  GeneratorSet right_;
};

inline ProductGeneratorSet product_generators(int n1, int n2) {
  return ProductGeneratorSet(n1, n2);
}

}  // namespace resent
