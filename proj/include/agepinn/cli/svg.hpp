#pragma once

// Standalone SVG renderings. Output depends only on the input data.

#include <span>
#include <string>

#include "agepinn/reference/field_io.hpp"
#include "agepinn/training/trainer.hpp"

namespace agepinn::cli {

// Age (vertical) by year (horizontal) heatmap on a linear color scale.
// Throws UsageError for an empty table.
std::string field_heatmap_svg(const ref::FieldTable& field);

// Log-scale chart with one polyline each for total, pde, ic and bc.
// Throws UsageError for an empty history.
std::string loss_chart_svg(std::span<const train::EpochRecord> history);

}  // namespace agepinn::cli
