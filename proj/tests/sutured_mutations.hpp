#pragma once
// Single-field mutations of the hierarchy fixtures, each with the step and
// citation the validator has to report.

#include <string>
#include <vector>

#include "htk/sutured.hpp"

namespace mutations {

using namespace htk::sutured;

struct Mutation {
  std::string name;
  Hierarchy hierarchy;
  int step;
  Citation citation;
};

inline std::vector<Mutation> all() {
  std::vector<Mutation> out;
  auto g2 = fixture_genus2_handlebody;
  auto t2 = fixture_thickened_torus;
  {
    auto H = g2();
    H.steps[0].surface[0].curves[0].arcs[0].separating = true;
    out.push_back({"separating arc", H, 0, Citation::separating_arc});
  }
  {
    auto H = g2();
    H.steps[1].surface[0].curves[0].transverse = false;
    out.push_back({"not transverse", H, 1, Citation::transverse});
  }
  {
    auto H = g2();
    H.steps[0].surface[0].curves[0].arcs.clear();
    out.push_back({"arc count zeroed", H, 0, Citation::well_positioned});
  }
  {
    auto H = t2();
    H.steps[0].surface[0].curves[0].suture_class = 0;
    out.push_back({"inessential toric circle", H, 0, Citation::circle_class});
  }
  {
    auto H = t2();
    H.steps[0].surface[0].curves[1].bounds_disk = true;
    out.push_back({"boundary curve bounds a disk", H, 0, Citation::disk_boundary});
  }
  {
    auto H = t2();
    auto& curves = H.steps[0].surface[0].curves;
    curves.erase(curves.begin());
    out.push_back({"disk component in R", H, 0, Citation::disk_component});
  }
  {
    auto H = g2();
    H.steps[1].result[0].boundary[0].regions[0].genus = 1;
    out.push_back({"declared region genus", H, 1, Citation::ledger});
  }
  {
    auto H = g2();
    H.steps[0].surface[0].pi1_injective_declared = false;
    out.push_back({"not pi1-injective", H, 0, Citation::pi1});
  }
  {
    auto H = g2();
    H.start.pieces[0].boundary[0].sutures[1].core_sign = -1;
    out.push_back({"reversed suture core", H, 0, Citation::orientation});
  }
  {
    auto H = t2();
    H.steps[1].surface[0].curves[0].arcs[1].sign = 1;
    out.push_back({"crossing direction", H, 1, Citation::separating_arc});
  }
  return out;
}

}  // namespace mutations
