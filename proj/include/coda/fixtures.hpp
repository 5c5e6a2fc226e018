#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "coda/composition.hpp"

namespace coda {

// The 30-row, 3-part artificial dataset concentrated along a line in the
// ternary diagram (rows A1..A30), compiled in verbatim.
CompositionDataset load_fixture_table1();

// Printed reference means for the table1 fixture.
Composition table1_arithmetic_mean();
Composition table1_closed_geometric_mean();

struct SyntheticAlphaConfig {
    double alpha = 0.5;
    std::size_t rows = 500;
    std::size_t parts = 3;
    // z ~ N(0, variance * I) in the isometric alpha coordinates.
    double variance = 0.45;
    std::uint64_t seed = 1;
};

// Compositions whose isometric alpha-transform at config.alpha is normal.
// Draws that map outside the simplex are rejected and redrawn.
CompositionDataset synthetic_alpha_dataset(const SyntheticAlphaConfig& config = {});

std::vector<std::string> fixture_names();

// Writes a named fixture as CSV (header row, id column). table1 is written
// with its printed digits; generated fixtures use 17 significant digits so
// the file parses back to the same doubles. Throws UnknownFixture.
void write_fixture_csv(std::string_view name, std::ostream& out);

CompositionDataset load_fixture(std::string_view name);

} // namespace coda
