#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "halfreg/degree_matrix.hpp"
#include "halfreg/realization.hpp"

namespace halfreg {

// Brute-force ground truth for small instances. The enumerator knows
// nothing about the existence conditions: it fills cells one by one and
// prunes only on residual row and column counts.

/// Default cap on rows * cols; HALFREG_SIZE_GUARD overrides it.
constexpr int kDefaultSizeGuard = 30;
int size_guard();

struct EnumerationResult {
  DegreeMatrix instance;
  long count = 0;
  /// Number of colors used by the encodings: k, plus one when the instance
  /// leaves cells uncolored (those cells carry id k).
  int colors = 0;
  /// Sorted canonical encodings; empty in count-only mode.
  std::vector<std::string> encodings;
};

/// Visits every coloring whose rows carry exactly d[i] cells of color i,
/// whose columns carry exactly f[i][v], and whose remaining cells hold the
/// filler id k. The visitor returns false to stop early. Returns the number
/// of colorings visited. Throws Error(TooLarge) above the size guard.
long enumerate_each(const DegreeMatrix& matrix,
                    const std::function<bool(const ColorMatrix&)>& visit);

EnumerationResult enumerate(const DegreeMatrix& matrix, bool count_only = false);

/// At least one coloring exists (search stops at the first one).
bool has_realization(const DegreeMatrix& matrix);

struct ExistenceBounds {
  int max_rows = 3;
  int max_cols = 3;
  int max_colors = 3;
  int max_entry = 3;
};

struct ExistenceReport {
  long matrices = 0;
  long valid = 0;
  long realizable = 0;
  std::vector<DegreeMatrix> discrepancies;
};

/// Every half-regular matrix within the bounds: validate(M).ok must agree
/// with the enumerator finding a realization. Existence is invariant under
/// permuting columns, so oracle answers are cached per sorted column set.
ExistenceReport verify_existence_equivalence(const ExistenceBounds& bounds);

struct UniformityStats {
  double chi2 = 0;
  double p_value = 1;
  double tv_distance = 0;
  long samples = 0;
  long states = 0;
};

/// Pearson chi-square against the uniform law on `state_space` states
/// (unseen states count as zero), with its upper-tail p-value, and the total
/// variation distance of the empirical law from uniform.
/// Throws Error(InsufficientSamples) when the total is below 10 * state_space,
/// and Error(Malformed) when state_space < 2 or more distinct states were
/// observed than exist.
UniformityStats uniformity_test(const std::unordered_map<std::string, long>& counts,
                                long state_space);

/// Upper tail of the chi-square distribution.
double chi_square_survival(double statistic, double dof);

}  // namespace halfreg
