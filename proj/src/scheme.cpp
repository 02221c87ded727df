#include "magprop/scheme.hpp"

#include <cmath>

namespace magprop {
namespace splitting {

bool SplitScheme::compact() const {
  for (const Stage& s : stages)
    if (s.kind == StageKind::WU) return true;
  return false;
}

int SplitScheme::kinetic_stage_count() const {
  int n = 0;
  for (const Stage& s : stages)
    if (s.kind == StageKind::T) ++n;
  return n;
}

void SplitScheme::validate() const {
  if (stages.empty()) throw SpecError("scheme '" + name + "' has no stages");
  double sum_t = 0.0, sum_w = 0.0;
  for (const Stage& s : stages) {
    if (s.kind == StageKind::T)
      sum_t += s.coeff;
    else
      sum_w += s.coeff;
  }
  if (std::abs(sum_t - 1.0) > 1e-14 || std::abs(sum_w - 1.0) > 1e-14)
    throw SpecError("scheme '" + name + "' is inconsistent: coefficient sums " +
                    std::to_string(sum_t) + ", " + std::to_string(sum_w));
  if (symmetric) {
    const std::size_t n = stages.size();
    for (std::size_t i = 0; i < n / 2; ++i) {
      const Stage& a = stages[i];
      const Stage& b = stages[n - 1 - i];
      if (a.kind != b.kind || a.coeff != b.coeff || a.u_coeff != b.u_coeff)
        throw SpecError("scheme '" + name + "' marked symmetric is not palindromic");
    }
  }
}

SplitScheme omf85() {
  const double a1 = -1.0130879789171747, b1 = 0.00016600692650009894;
  const double a2 = 1.1874295737325427, b2 = -0.3796242142637736;
  const double a3 = -0.018335852096460590, b3 = 0.6891374118518106;
  const double a4 = 0.3439942572810926, b4 = 0.3806415909709257;
  SplitScheme s;
  s.name = "OMF85";
  s.order = 6;
  s.symmetric = true;
  const double as[] = {a1, a2, a3, a4};
  const double bs[] = {b1, b2, b3, b4};
  for (int i = 0; i < 4; ++i) {
    s.stages.push_back({StageKind::T, as[i], 0.0});
    s.stages.push_back({StageKind::W, bs[i], 0.0});
  }
  for (int i = 3; i >= 0; --i) {
    s.stages.push_back({StageKind::T, as[i], 0.0});
    if (i > 0) s.stages.push_back({StageKind::W, bs[i - 1], 0.0});
  }
  s.validate();
  return s;
}

SplitScheme omf76() {
  const double a1 = 0.1097059723948682, b1 = 0.2693315848935301,
               c1 = 0.0008642161339706166;
  const double a2 = 0.4140632267310831, b2 = 1.1319803486515564,
               c2 = -0.01324638643416052;
  const double a3 = 0.5 - (a1 + a2);
  const double b3 = 1.0 - 2.0 * (b1 + b2);
  const double c3 = 0.0;
  SplitScheme s;
  s.name = "OMF76";
  s.order = 6;
  s.symmetric = true;
  s.stages = {{StageKind::T, a1, 0.0}, {StageKind::WU, b1, c1},
              {StageKind::T, a2, 0.0}, {StageKind::WU, b2, c2},
              {StageKind::T, a3, 0.0}, {StageKind::WU, b3, c3},
              {StageKind::T, a3, 0.0}, {StageKind::WU, b2, c2},
              {StageKind::T, a2, 0.0}, {StageKind::WU, b1, c1},
              {StageKind::T, a1, 0.0}};
  s.validate();
  return s;
}

SplitScheme find_scheme_table(const std::string& name,
                              const std::vector<SplitScheme>& extra) {
  if (name == "OMF85") return omf85();
  if (name == "OMF76") return omf76();
  for (const SplitScheme& s : extra)
    if (s.name == name) {
      s.validate();
      return s;
    }
  throw SpecError("unknown coefficient table '" + name +
                  "' (built-ins: OMF85, OMF76; others must be supplied)");
}

std::string OuterScheme::label() const {
  switch (kind) {
    case OuterKind::S1: return "S1+" + inner.name;
    case OuterKind::S2: return "S2+" + inner.name;
    case OuterKind::S3: return "S3+" + inner.name;
    case OuterKind::TimeOrdered: return "TO+" + inner.name;
    case OuterKind::MaStBM4: return "MaStBM4+" + inner.name;
  }
  return "?";
}

OuterScheme parse_scheme(const std::string& text,
                         const std::vector<SplitScheme>& extra_tables) {
  const auto plus = text.find('+');
  if (plus == std::string::npos)
    throw SpecError("scheme string must look like S2+OMF76, got '" + text + "'");
  const std::string outer = text.substr(0, plus);
  const std::string table = text.substr(plus + 1);

  OuterScheme s;
  if (outer == "S1")
    s.kind = OuterKind::S1;
  else if (outer == "S2")
    s.kind = OuterKind::S2;
  else if (outer == "S3")
    s.kind = OuterKind::S3;
  else if (outer == "TO")
    s.kind = OuterKind::TimeOrdered;
  else if (outer == "MaStBM4")
    s.kind = OuterKind::MaStBM4;
  else
    throw SpecError("unknown outer scheme '" + outer + "'");

  s.inner = find_scheme_table(table, extra_tables);
  if (s.kind == OuterKind::S3 && s.inner.compact())
    throw SpecError("S3 with a compact inner table re-introduces the gradient; "
                    "pick a classical table");
  if ((s.kind == OuterKind::TimeOrdered || s.kind == OuterKind::MaStBM4) &&
      s.inner.compact())
    throw SpecError(s.label() + " requires a classical (T/W only) table");
  return s;
}

int kinetic_stages_per_step(const OuterScheme& scheme) {
  int n = scheme.inner.kinetic_stage_count();
  const bool t_first = scheme.inner.stages.front().kind == StageKind::T;
  const bool t_last = scheme.inner.stages.back().kind == StageKind::T;
  switch (scheme.kind) {
    case OuterKind::S1:
      return n;  // the commutator exponential is Lanczos, not an FFT stage
    case OuterKind::S2:
    case OuterKind::S3:
    case OuterKind::MaStBM4:
      // Outer drift exponentials merge into adjacent T stages when present.
      return n + (t_first ? 0 : 1) + (t_last ? 0 : 1);
    case OuterKind::TimeOrdered:
      return n;
  }
  return n;
}

}  // namespace splitting
}  // namespace magprop
