#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "linsys/linear_system.hpp"

namespace linsys {

enum class DimStatus { Empty, Regular, SpecialKnown, Unknown };

std::string_view to_string(DimStatus status);
DimStatus parse_status(std::string_view text);

struct TraceNode;
using TracePtr = std::shared_ptr<const TraceNode>;

/// One step of a dimension argument. `method` names the rule applied at
/// this node, `data` carries whatever the replayer needs to re-check it,
/// and `children` are the sub-results the rule consumed.
struct TraceNode {
  std::string method;
  LinearSystem system;
  DimStatus status = DimStatus::Unknown;
  Int ell = -1;
  nlohmann::json data = nlohmann::json::object();
  std::vector<TracePtr> children;
};

struct DimVerdict {
  DimStatus status = DimStatus::Unknown;
  /// Projective dimension; meaningless when status is Unknown.
  Int ell = -1;
  TracePtr trace;

  bool decisive() const noexcept { return status != DimStatus::Unknown; }
  /// Empty or Regular.
  bool non_special() const noexcept {
    return status == DimStatus::Empty || status == DimStatus::Regular;
  }
};

/// Status implied by a known dimension: Empty at -1, Regular when it
/// equals the expected dimension, SpecialKnown otherwise.
DimStatus status_for(const LinearSystem& system, Int ell);

DimVerdict make_verdict(std::string method, const LinearSystem& system, DimStatus status, Int ell,
                        nlohmann::json data = nlohmann::json::object(),
                        std::vector<TracePtr> children = {});

/// Serializes a trace DAG as {"root": id, "nodes": [...]}, sharing
/// repeated subtrees by id.
nlohmann::json trace_to_json(const TracePtr& root);
TracePtr trace_from_json(const nlohmann::json& doc);

}  // namespace linsys
