#pragma once

// Torsion and curvature d-tensors of an h-normal linear connection, from
// their generic defining formulas, plus the specialized closed forms used
// as a second route and the zero-cell audit.
//
// Torsion families (key: tensor, valence):
//   R_tt   R^{(m)}_{(mu)ab}              VU TL TL
//   T_tx   T^m_{aj}                      SU TL SL
//   R_tx   R^{(m)}_{(mu)aj}              VU TL SL
//   T_xx   T^m_{ij}                      SU SL SL
//   R_xx   R^{(m)}_{(mu)ij}              VU SL SL
//   P_tv   P^{(m)(b)}_{(mu)a(j)}         VU TL VL
//   P_xv_h P^{m(b)}_{i(j)}               SU SL VL
//   P_xv   P^{(m)(b)}_{(mu)i(j)}         VU SL VL
//   S      S^{(m)(a)(b)}_{(mu)(i)(j)}    VU VL VL
// Curvature families:
//   H      H^a_{ebc}                     TU TL TL TL
//   R_tt   R^l_{ibc}                     SU SL TL TL
//   R_tx   R^l_{ibk}                     SU SL TL SL
//   R_xx   R^l_{ijk}                     SU SL SL SL
//   P_tv   P^{l(c)}_{ib(k)}              SU SL TL VL
//   P_xv   P^{l(c)}_{ij(k)}              SU SL SL VL
//   S_vv   S^{l(b)(c)}_{i(j)(k)}         SU SL VL VL
// and the delta-lifted families V_tt, V_tx, V_xx, V_tv, V_xv, V_vv with a
// leading (VU, VL) pair in place of (SU, SL).

#include <string>
#include <utility>
#include <vector>

#include "jetlag/cartan.hpp"
#include "jetlag/tensor.hpp"

namespace jetlag {

/// Ordered family -> tensor map.
class ComponentTable {
 public:
  void add(std::string key, DTensor t) { entries_.emplace_back(std::move(key), std::move(t)); }
  const std::vector<std::pair<std::string, DTensor>>& entries() const { return entries_; }
  bool has(const std::string& key) const;
  const DTensor& at(const std::string& key) const;

 private:
  std::vector<std::pair<std::string, DTensor>> entries_;
};

ComponentTable torsion_table(const LinearConnectionPack& pack, const JetPoint& pt);
ComponentTable curvature_table(const LinearConnectionPack& pack, const JetPoint& pt, bool with_lifts = true);

/// Closed forms valid for the Cartan connection of an electrodynamics
/// Lagrangian with p >= 2 (same layouts as the torsion families).
struct ClosedFormTorsion {
  std::vector<double> R_tt;
  std::vector<double> R_tx;
  std::vector<double> R_xx;
};
ClosedFormTorsion closed_form_torsion(const Space& space, const JetPoint& pt);

/// Whether g depends on neither t nor v (decided from the declared text for
/// builtin families, numerically at the given points otherwise).
bool autonomous_metric(const Space& space, const std::vector<JetPoint>& points);

struct ZeroAudit {
  std::vector<std::string> torsion_zero;    // families asserted zero
  std::vector<std::string> curvature_zero;
  double max_abs = 0.0;
  std::string worst;                        // "torsion.T_xx[0,1,0]"
  bool passed = true;
};

/// Families the tables declare zero for this instance.
void declared_zero_families(const LinearConnectionPack& pack, bool autonomous, std::vector<std::string>& torsion,
                            std::vector<std::string>& curvature);

ZeroAudit table_zero_audit(const LinearConnectionPack& pack, const std::vector<JetPoint>& points, double tol = 1e-7);

}  // namespace jetlag
