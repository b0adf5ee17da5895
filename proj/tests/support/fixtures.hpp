#pragma once

#include <functional>
#include <map>
#include <vector>

#include "halfreg/aux_graph.hpp"
#include "halfreg/degree_matrix.hpp"
#include "halfreg/rational.hpp"
#include "halfreg/realization.hpp"
#include "halfreg/rng.hpp"

namespace halfreg::testing {

/// n x n instance with every row and column degree 1 in each of n colors.
DegreeMatrix latin_instance(int n);

/// The equality-form instance a coloring realizes (row degrees read off
/// row 0).
DegreeMatrix instance_of(const ColoredRealization& r);

/// A valid instance drawn by coloring a random grid. With `slack`, cells may
/// take the extra id k, which is then dropped from the instance so that it
/// is a non-equality case.
DegreeMatrix random_instance(Rng& rng, int max_rows, int max_cols, int max_colors, bool slack);

/// Same, with fixed dimensions and equality form.
DegreeMatrix random_instance(Rng& rng, int rows, int cols, int colors);

/// Fixed 3-color multigraph with a loop at 0 and one surplus edge 0 -> 2,
/// so trails run from 0 to 2 and several lengths occur.
ColorMultigraph three_color_fixture();

/// Probability of every complete walk of the step-uniform trail rule from
/// `start` to `end`, keyed by label sequence, by depth-first expansion of
/// the edge list. Walks that get stuck before `end` are keyed with a
/// trailing -1.
std::map<std::vector<int>, Rational> trail_law(const ColorMultigraph& k, Color start, Color end);

/// Every realization of a small equality-form instance, in canonical order.
std::vector<ColoredRealization> all_realizations(const DegreeMatrix& matrix);

/// Constructed realization scrambled by `steps` sampler steps.
ColoredRealization random_realization(const DegreeMatrix& matrix, Rng& rng, long steps);

/// Visits every realization that agrees with `r` outside some set of
/// `rows` rows (r itself included). Found by enumerating the sub-instance
/// those rows form, so it does not depend on any move generator.
void for_each_row_neighbor(const ColoredRealization& r, int rows,
                           const std::function<void(const ColoredRealization&)>& visit);

}  // namespace halfreg::testing
