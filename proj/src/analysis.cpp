// Copyright 2026 The weakstance Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "stance/analysis.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "stance/propagation.hpp"
#include "stance/table_io.hpp"

namespace stance {
namespace {

using nlohmann::json;

json entries_json(const std::vector<EntityStanceEntry>& list) {
  json out = json::array();
  for (const auto& e : list) {
    out.push_back(json{{"entity", e.entity.name},
                       {"kind", to_string(e.entity.kind)},
                       {"stance", to_int(e.stance)},
                       {"confidence", e.confidence},
                       {"usage", e.usage}});
  }
  return out;
}

void sort_by_usage(std::vector<EntityStanceEntry>& list) {
  std::sort(list.begin(), list.end(), [](const auto& a, const auto& b) {
    if (a.usage != b.usage) return a.usage > b.usage;
    return a.entity < b.entity;
  });
}

std::size_t side(Stance s) { return s == Stance::kPro ? 0 : 1; }

}  // namespace

json EntityStanceReport::to_json() const {
  return json{{"theta", theta},
              {"top_n", top_n},
              {"pro", entries_json(pro)},
              {"anti", entries_json(anti)}};
}

void EntityStanceReport::write_csv(const std::filesystem::path& path) const {
  std::ofstream out = open_output(path);
  out << "side,kind,entity,confidence,usage\n";
  for (const auto* list : {&pro, &anti}) {
    const char* name = list == &pro ? "pro" : "anti";
    for (const auto& e : *list) {
      out << name << ',' << to_string(e.entity.kind) << ','
          << csv_escape(e.entity.name) << ',' << format_fixed(e.confidence, 6)
          << ',' << format_double(e.usage) << '\n';
    }
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

EntityStanceReport entity_stance_report(const BipartiteMatrix& matrix,
                                        const StanceTable& users, double theta,
                                        std::size_t top_n) {
  StanceVector user_stance(matrix.num_rows());
  for (std::size_t r = 0; r < matrix.num_rows(); ++r) {
    user_stance.values[r] = users.stance_of(matrix.row_ids()[r]);
    user_stance.confidence[r] = user_stance.values[r] == Stance::kNone ? 0 : 1;
  }
  const StanceVector entities =
      propagate_to_entities(matrix, user_stance, theta);
  const std::vector<double> usage = matrix.col_sums();

  std::map<std::pair<EntityKind, Stance>, std::vector<EntityStanceEntry>>
      groups;
  for (std::size_t c = 0; c < matrix.num_cols(); ++c) {
    if (entities.values[c] == Stance::kNone) continue;
    const Entity& e = matrix.col_ids()[c];
    groups[{e.kind, entities.values[c]}].push_back(
        {e, entities.values[c], entities.confidence[c], usage[c]});
  }

  EntityStanceReport report;
  report.theta = theta;
  report.top_n = top_n;
  for (auto& [key, list] : groups) {
    sort_by_usage(list);
    if (top_n > 0 && list.size() > top_n) list.resize(top_n);
    auto& dest = key.second == Stance::kPro ? report.pro : report.anti;
    dest.insert(dest.end(), list.begin(), list.end());
  }
  sort_by_usage(report.pro);
  sort_by_usage(report.anti);
  return report;
}

json CrossTab::to_json() const {
  return json{{"labels", {"pro", "anti"}},
              {"counts",
               {{counts[0][0], counts[0][1]}, {counts[1][0], counts[1][1]}}},
              {"row_totals", row_totals},
              {"col_totals", col_totals},
              {"total", total},
              {"warnings", warnings}};
}

CrossTab stance_cross_tab(const StanceTable& a, const StanceTable& b) {
  CrossTab t;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Stance sa = a.stance[i];
    if (sa == Stance::kNone) continue;
    const Stance sb = b.stance_of(a.users[i]);
    if (sb == Stance::kNone) continue;
    ++t.counts[side(sa)][side(sb)];
    ++t.row_totals[side(sa)];
    ++t.col_totals[side(sb)];
    ++t.total;
  }
  if (t.total == 0) {
    t.warnings.push_back("no user has a non-zero stance in both tables");
  }
  return t;
}

}  // namespace stance
