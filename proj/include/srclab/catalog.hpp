#pragma once

#include <set>
#include <string>
#include <vector>

#include "srclab/connection.hpp"
#include "srclab/errors.hpp"
#include "srclab/spec_format.hpp"

namespace srclab {

struct OneFormVariant {
  std::string name;  ///< "const", "linear" or "trig"
  OneFormData pi;
};

/// A built-in manifold with the one-forms it ships with and the verdicts it
/// is expected to produce under the default configuration.
struct CatalogEntry {
  std::string name;
  std::string summary;
  std::string source;  ///< description text the entry was parsed from
  ManifoldSpec spec;
  std::vector<OneFormVariant> oneforms;
  /// Checks expected to be skipped; every other check is expected to pass.
  std::set<std::string> expected_skips;
  /// Stratified nilpotent group with a left-invariant orthonormal frame.
  bool carnot = false;
  /// [V0, V0] is contained in V0.
  bool involutive = false;
};

namespace detail {

struct CatalogSource {
  const char* name;
  const char* summary;
  const char* text;
  bool carnot;
  bool involutive;
};

inline const std::vector<CatalogSource>& catalog_sources() {
  static const std::vector<CatalogSource> sources = {
      {"heisenberg1", "first Heisenberg group, [X1,X2] = dz", R"(manifold heisenberg1
dim 3
hdim 2
coords x y z
hframe
  X1 = dx - (y/2) dz
  X2 = dy + (x/2) dz
vframe
  Z = dz
metric identity
)",
       true, false},
      {"heisenberg2", "two Heisenberg blocks sharing the vertical direction", R"(manifold heisenberg2
dim 5
hdim 4
coords x1 y1 x2 y2 z
hframe
  X1 = dx1 - (y1/2) dz
  X2 = dy1 + (x1/2) dz
  X3 = dx2 - (y2/2) dz
  X4 = dy2 + (x2/2) dz
vframe
  Z = dz
metric identity
)",
       true, false},
      {"free-step2-l3", "free step-2 nilpotent group of rank 3, [X_i,X_j] = Z_ij", R"(manifold free-step2-l3
dim 6
hdim 3
coords x1 x2 x3 z12 z13 z23
hframe
  X1 = dx1 - (x2/2) dz12 - (x3/2) dz13
  X2 = dx2 + (x1/2) dz12 - (x3/2) dz23
  X3 = dx3 + (x1/2) dz13 + (x2/2) dz23
vframe
  Z12 = dz12
  Z13 = dz13
  Z23 = dz23
metric identity
)",
       true, false},
      {"flat3", "commuting coordinate frame", R"(manifold flat3
dim 3
hdim 2
coords x y z
hframe
  X1 = dx
  X2 = dy
vframe
  Z = dz
metric identity
)",
       false, true},
      {"curved-metric-l3", "non-involutive frame with polynomial metric", R"(manifold curved-metric-l3
dim 4
hdim 3
coords x y z w
hframe
  X1 = dx + z dy - (y/2) dw
  X2 = dy + (x/2) dw
  X3 = w dx + dz
vframe
  V = dw
metric rows
  (2 + x^2)     (0.5*y)      (0.25*z*w)
  (0.5*y)       (2 + z^2)    (0.5*x)
  (0.25*z*w)    (0.5*x)      (2 + w^2 + y^2)
)",
       false, false},
      {"involutive-l3", "integrable horizontal distribution with curved metric", R"(manifold involutive-l3
dim 4
hdim 3
coords x y z w
hframe
  X1 = dx
  X2 = dy + x dz
  X3 = dz
vframe
  V = dw + y dx
metric rows
  (1 + y^2)       (0.3*z)       (0.2*sin(y))
  (0.3*z)         (1 + x^2)     0
  (0.2*sin(y))    0             exp(0.5*x*z)
)",
       false, true},
  };
  return sources;
}

/// Constant, affine and trigonometric one-forms over the entry's coordinates.
inline std::vector<OneFormVariant> catalog_oneforms(const ManifoldSpec& s) {
  const int ell = s.ell, n = s.n;
  std::vector<OneFormVariant> out;
  OneFormVariant c{"const", {}}, lin{"linear", {}}, trig{"trig", {}};
  for (int i = 0; i < ell; ++i) {
    c.pi.components.push_back(Expression::constant(i == 0 ? 1.0 : 0.25 * (i % 2 ? -1.0 : 1.0) * i));
    const Expression xa = Expression::coordinate(i % n);
    const Expression xb = Expression::coordinate((i + 1) % n);
    lin.pi.components.push_back(Expression::constant(0.3 - 0.1 * i) + Expression::constant(0.5) * xa -
                                Expression::constant(0.2) * xb);
    trig.pi.components.push_back(Expression::constant(0.5) * Expression::apply(Function::kSin, xa) +
                                 Expression::constant(0.3) * Expression::apply(Function::kCos, xb));
  }
  out.push_back(std::move(c));
  out.push_back(std::move(lin));
  out.push_back(std::move(trig));
  return out;
}

}  // namespace detail

/// Checks that need horizontal rank >= 3.
inline const std::set<std::string>& rank3_checks() {
  static const std::set<std::string> ids = {"C09", "C10", "C12", "C15"};
  return ids;
}

inline std::vector<std::string> builtin_names() {
  std::vector<std::string> names;
  for (const auto& s : detail::catalog_sources()) names.push_back(s.name);
  return names;
}

inline CatalogEntry builtin(const std::string& name) {
  for (const auto& src : detail::catalog_sources()) {
    if (name != src.name) continue;
    CatalogEntry e;
    e.name = src.name;
    e.summary = src.summary;
    e.source = src.text;
    e.spec = parse_manifold(src.text);
    e.oneforms = detail::catalog_oneforms(e.spec);
    if (e.spec.ell < 3) e.expected_skips = rank3_checks();
    e.carnot = src.carnot;
    e.involutive = src.involutive;
    return e;
  }
  throw UnknownEntry("no built-in manifold named '" + name + "'");
}

}  // namespace srclab
