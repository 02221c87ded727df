#pragma once

#include <string>
#include <vector>

#include "magprop/common.hpp"

namespace magprop {
namespace splitting {

/// Stage kinds of an inner splitting: pure kinetic exponential, pure
/// potential exponential, or a potential stage carrying a force-squared
/// term (compact splittings).
enum class StageKind { T, W, WU };

struct Stage {
  StageKind kind = StageKind::T;
  double coeff = 0.0;    // a for T stages, b for W/WU stages
  double u_coeff = 0.0;  // c for WU stages
};

/// An inner splitting as an ordered stage list (leftmost factor first; the
/// rightmost factor acts on the state first).
struct SplitScheme {
  std::string name;
  std::vector<Stage> stages;
  int order = 0;
  bool symmetric = false;

  bool compact() const;
  int kinetic_stage_count() const;
  /// Checks sum(T)=1, sum(W)=1 and the palindrome property when symmetric.
  void validate() const;
};

/// 15-stage sixth-order classical splitting (T-leading).
SplitScheme omf85();
/// 11-stage sixth-order compact splitting with force-squared stages.
SplitScheme omf76();

/// Named lookup over the built-ins plus `extra` user-supplied tables.
SplitScheme find_scheme_table(const std::string& name,
                              const std::vector<SplitScheme>& extra);

enum class OuterKind { S1, S2, S3, TimeOrdered, MaStBM4 };

/// A fully resolved propagation scheme: the outer strategy plus the inner
/// stage table. Lanczos settings apply to the commutator exponential of S1.
struct OuterScheme {
  OuterKind kind = OuterKind::S2;
  SplitScheme inner;
  int lanczos_m_start = 2;
  double lanczos_tol = 1e-12;

  std::string label() const;
};

/// Parses "S1+OMF85", "S2+OMF76", "S3+OMF85", "TO+<table>", "MaStBM4+<table>".
/// Rejects S3 with a compact inner table and TO/MaStBM4 with compact tables.
OuterScheme parse_scheme(const std::string& text,
                         const std::vector<SplitScheme>& extra_tables = {});

/// Kinetic exponentials per step (after merging the outer drift into the
/// edge T stages where the table allows it).
int kinetic_stages_per_step(const OuterScheme& scheme);

}  // namespace splitting
}  // namespace magprop
