#include "linsys/verdict.hpp"

#include <stdexcept>
#include <unordered_map>

namespace linsys {

std::string_view to_string(DimStatus status) {
  switch (status) {
    case DimStatus::Empty: return "Empty";
    case DimStatus::Regular: return "Regular";
    case DimStatus::SpecialKnown: return "SpecialKnown";
    case DimStatus::Unknown: return "Unknown";
  }
  return "Unknown";
}

DimStatus parse_status(std::string_view text) {
  if (text == "Empty") return DimStatus::Empty;
  if (text == "Regular") return DimStatus::Regular;
  if (text == "SpecialKnown") return DimStatus::SpecialKnown;
  if (text == "Unknown") return DimStatus::Unknown;
  throw std::invalid_argument("unknown status '" + std::string(text) + "'");
}

DimStatus status_for(const LinearSystem& system, Int ell) {
  if (ell < 0) return DimStatus::Empty;
  if (ell == expected_dim(system)) return DimStatus::Regular;
  return DimStatus::SpecialKnown;
}

DimVerdict make_verdict(std::string method, const LinearSystem& system, DimStatus status, Int ell,
                        nlohmann::json data, std::vector<TracePtr> children) {
  auto node = std::make_shared<TraceNode>();
  node->method = std::move(method);
  node->system = system;
  node->status = status;
  node->ell = status == DimStatus::Empty ? -1 : ell;
  node->data = std::move(data);
  node->children = std::move(children);
  return DimVerdict{status, node->ell, node};
}

namespace {

std::size_t emit(const TracePtr& node, nlohmann::json& nodes,
                 std::unordered_map<const TraceNode*, std::size_t>& ids) {
  if (auto it = ids.find(node.get()); it != ids.end()) return it->second;
  std::vector<std::size_t> kids;
  kids.reserve(node->children.size());
  for (const auto& child : node->children) kids.push_back(emit(child, nodes, ids));
  std::size_t id = nodes.size();
  nodes.push_back({{"id", id},
                   {"method", node->method},
                   {"system", node->system.to_string()},
                   {"status", to_string(node->status)},
                   {"ell", node->ell},
                   {"data", node->data},
                   {"children", kids}});
  ids.emplace(node.get(), id);
  return id;
}

}  // namespace

nlohmann::json trace_to_json(const TracePtr& root) {
  nlohmann::json nodes = nlohmann::json::array();
  std::unordered_map<const TraceNode*, std::size_t> ids;
  std::size_t root_id = root ? emit(root, nodes, ids) : 0;
  return {{"root", root_id}, {"nodes", nodes}};
}

TracePtr trace_from_json(const nlohmann::json& doc) {
  const auto& nodes = doc.at("nodes");
  std::vector<std::shared_ptr<TraceNode>> built(nodes.size());
  // Children always precede parents in the emitted order.
  for (const auto& entry : nodes) {
    auto id = entry.at("id").get<std::size_t>();
    if (id >= built.size()) throw std::invalid_argument("trace node id out of range");
    auto node = std::make_shared<TraceNode>();
    node->method = entry.at("method").get<std::string>();
    node->system = LinearSystem::parse(entry.at("system").get<std::string>());
    node->status = parse_status(entry.at("status").get<std::string>());
    node->ell = entry.at("ell").get<Int>();
    node->data = entry.at("data");
    for (auto child : entry.at("children")) {
      auto cid = child.get<std::size_t>();
      if (cid >= id || !built[cid]) throw std::invalid_argument("trace child must precede parent");
      node->children.push_back(built[cid]);
    }
    built[id] = std::move(node);
  }
  auto root = doc.at("root").get<std::size_t>();
  if (root >= built.size() || !built[root]) throw std::invalid_argument("trace root missing");
  return built[root];
}

}  // namespace linsys
