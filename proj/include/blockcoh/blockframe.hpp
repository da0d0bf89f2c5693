#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "blockcoh/matrix.hpp"

namespace blockcoh {

/// Structural checks on a candidate block frame. Reports, never throws.
struct FrameValidation {
  bool shape_ok = false;           // cols = m r, r >= 1
  bool regime_ok = false;          // r < n <= m r
  bool field_consistent = false;   // real tag implies zero imaginary parts
  bool unit_columns = false;       // | ||a_k|| - 1 | < 1e-8
  bool block_orthonormal = false;  // ||A_i* A_i - I||_F < 1e-8
  bool is_tight = false;           // ||A A* - (mr/n) I||_F < 1e-8
  bool is_union_of_orthobases = false;
  bool equi_isoclinic = false;     // every cross-Gram singular value equal, 1e-6
  double max_column_defect = 0.0;
  double max_block_defect = 0.0;
  double tightness_defect = 0.0;

  /// Requirements for a BlockFrame to exist.
  bool valid() const {
    return shape_ok && regime_ok && field_consistent && unit_columns && block_orthonormal;
  }
};

/// n x (m r) matrix whose m blocks of r columns each have orthonormal columns.
class BlockFrame {
 public:
  /// Validates and throws ValidationError on failure. The field defaults to
  /// the detected one.
  static BlockFrame make(CMatrix data, std::size_t r, std::optional<Field> field = std::nullopt);

  std::size_t n() const { return data_.rows(); }
  std::size_t r() const { return r_; }
  std::size_t m() const { return r_ == 0 ? 0 : data_.cols() / r_; }
  Field field() const { return field_; }
  const CMatrix& data() const { return data_; }
  CMatrix block(std::size_t i) const { return data_.columns(i * r_, r_); }

 private:
  BlockFrame(CMatrix data, std::size_t r, Field field)
      : data_(std::move(data)), r_(r), field_(field) {}
  CMatrix data_;
  std::size_t r_ = 0;
  Field field_ = Field::complex;
};

FrameValidation validate(const CMatrix& data, std::size_t r, Field field);
FrameValidation validate(const BlockFrame& a);

/// Symmetric m x m map of ||A_i* A_j||_2 with unit diagonal.
struct GramMap {
  std::size_t m = 0;
  std::vector<double> values;
  double operator()(std::size_t i, std::size_t j) const { return values[i * m + j]; }
  double max_off_diagonal() const;
  bool operator==(const GramMap&) const = default;
};

/// max_{i != j} ||A_i* A_j||_2.
double mu(const BlockFrame& a, unsigned threads = 1);
/// (1/(m-1)) max_i ||sum_{j != i} A_i* A_j||_2.
double nu(const BlockFrame& a);
/// (1/(m-1)) max_i |sum_{j != i} p_i* p_j| over the columns of P.
double nu1(const CMatrix& p);
GramMap gram_map(const BlockFrame& a, unsigned threads = 1);

/// sqrt(r - ||Ai* Aj||_F^2), clamped at zero.
double chordal_distance(const CMatrix& ai, const CMatrix& aj);
/// sqrt(1 - ||Ai* Aj||_2^2), clamped at zero.
double spectral_distance(const CMatrix& ai, const CMatrix& aj);

struct CoherenceReport {
  std::size_t n = 0, r = 0, m = 0;
  Field field = Field::complex;
  double mu = 0.0;
  double nu = 0.0;
  GramMap gram_map;
  double welch_block_lower = 0.0;
  std::optional<double> orthobases_lower;
  double rankin_chordal = 0.0;
  double spectral_distance_upper = 0.0;
  std::uint64_t max_equiisoclinic = 0;
  std::optional<std::uint64_t> max_blocks_orthobases;
  FrameValidation validation;
  bool is_union_of_orthobases = false;
  bool equi_isoclinic = false;
};

/// Every metric, bound and flag in one pass over the pairs.
CoherenceReport analyze(const BlockFrame& a, unsigned threads = 1);

}  // namespace blockcoh
