#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "rbw/linalg.hpp"
#include "rbw/root_system.hpp"

namespace rbw {

// Finite Weyl group W = W~/Q^vee in its reflection representation, enumerated
// by breadth-first closure over the generator matrices
// {pi(s_0),...,pi(s_d)} = {r_theta, r_alpha_1, ..., r_alpha_d}.
//
// Elements are deduplicated by hashing matrix entries rounded to 1e-6; the
// generator matrices have well-separated algebraic entries at every
// enumerable rank, and closure consistency is checked against the classical
// group orders.
class FiniteWeylGroup {
 public:
  static constexpr std::uint64_t kDefaultCap = 1000000;  // refuses E7/E8
  static constexpr int kDenseMultTableCap = 4096;

  // Throws GroupTooLarge when the classical order exceeds cap.
  static FiniteWeylGroup enumerate(const RootSystemSpec& spec, std::uint64_t cap = kDefaultCap);

  int size() const { return static_cast<int>(elements_.size()); }
  int dim() const { return dim_; }
  int identity_index() const { return identity_; }
  const Mat& matrix(int i) const { return elements_[i]; }
  const std::vector<Mat>& elements() const { return elements_; }

  // Index of pi(s_i), i in 0..d (0 is the reflection in theta).
  int generator(int i) const { return gen_index_[i]; }
  int num_generators() const { return static_cast<int>(gen_index_.size()); }

  // Index arithmetic. right_gen is O(1) table lookup; mult uses the dense
  // table when built, otherwise one matrix product plus a hash probe.
  int right_gen(int w, int i) const { return right_gen_[static_cast<size_t>(w) * gen_index_.size() + i]; }
  const std::int32_t* right_gen_data() const { return right_gen_.data(); }
  int mult(int a, int b) const;
  int inverse(int w) const { return inverse_[w]; }

  bool has_dense_mult_table() const { return !mult_table_.empty(); }
  int mult_table(int a, int b) const { return mult_table_[static_cast<size_t>(a) * elements_.size() + b]; }

  // Nearest element by max-norm. Hash probe first, linear scan fallback.
  // Returns nullopt when the nearest element is farther than tol.
  std::optional<int> find(const Mat& m, double tol = 1e-4) const;

 private:
  int dim_ = 0;
  int identity_ = 0;
  std::vector<Mat> elements_;
  std::vector<int> gen_index_;
  std::vector<std::int32_t> right_gen_;
  std::vector<std::int32_t> inverse_;
  std::vector<std::int32_t> mult_table_;  // empty unless |W| <= kDenseMultTableCap
  std::unordered_map<std::uint64_t, std::vector<std::int32_t>> index_;

  std::uint64_t hash_matrix(const Mat& m) const;
  int lookup_exact(const Mat& m) const;  // -1 when absent
};

}  // namespace rbw
