#pragma once

#include <string>
#include <vector>

#include "tabcanon/ingest.hpp"
#include "tabcanon/model.hpp"

namespace tabcanon {

struct AssembleOptions {
  /// Fraction of a child's area that must fall inside a parent.
  double child_overlap = 0.5;
  /// Rows (columns) overlapping by at least this fraction of the smaller box are duplicates.
  double duplicate_overlap = 0.5;
  /// Every grid cell inside a spanning cell's rectangle must be covered at least this much.
  double span_min_coverage = 0.25;
};

struct Suppressed {
  AnnotatedObject object;
  std::string reason;
};

struct Resolution {
  std::vector<AnnotatedObject> objects;  // survivors, in deterministic order
  std::vector<Suppressed> suppressed;
  int boundaries_snapped = 0;
};

/// Suppresses lower-scoring objects that claim the same child as a better
/// object of their class, and snaps residual row/column overlaps to the
/// overlap midline. The result does not depend on input order.
Resolution resolve_conflicts(const std::vector<AnnotatedObject>& objects, const AssembleOptions& options = {});

struct Assembly {
  TableAnnotation table;
  std::vector<Suppressed> suppressed;
  std::vector<Violation> violations;  // reported, not repaired
};

/// Builds a logical table from structure objects: grid from rows and
/// columns, header and projected-row-header rows and spanning cells by
/// containment, text from the tokens each grid cell receives.
/// Throws NoTableObjectError and DegenerateStructureError.
Assembly assemble(const std::vector<AnnotatedObject>& objects, const TokenSequence& tokens,
                  const AssembleOptions& options = {});

inline TableAnnotation objects_to_table(const std::vector<AnnotatedObject>& objects, const TokenSequence& tokens,
                                        const AssembleOptions& options = {}) {
  return assemble(objects, tokens, options).table;
}

}  // namespace tabcanon
