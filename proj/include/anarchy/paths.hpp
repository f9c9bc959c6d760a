#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "anarchy/network.hpp"

namespace anarchy {

struct Path {
  std::string origin;       // end-host id
  std::string destination;  // end-host id
  std::vector<std::string> links;
};

/// All simple AS-level paths for one OD pair, ordered by (free-flow cost,
/// hop count, lexicographic link-id sequence). If k is given, the first k.
/// Throws NoPathError if the pair is disconnected.
std::vector<Path> enumerate_paths(const Network& net, const std::string& origin_host,
                                  const std::string& destination_host,
                                  std::optional<std::size_t> k = std::nullopt);

/// One demand's slice of the path universe: a contiguous run of path ids.
struct OdBlock {
  std::size_t demand_index = 0;
  std::string origin;  // end-host owning the block under origin attribution
  std::string destination;
  double volume = 0.0;
  std::size_t first_path = 0;
  std::size_t path_count = 0;
};

/// Fixed path universe over which flow patterns are defined. Paths of all
/// positive-volume demands, concatenated block by block. Immutable.
class PathUniverse {
 public:
  static PathUniverse build(const Network& net,
                            std::optional<std::size_t> k = std::nullopt);

  const Network& net() const { return *net_; }
  const std::vector<Path>& paths() const { return paths_; }
  const std::vector<OdBlock>& blocks() const { return blocks_; }
  std::size_t link_count() const { return link_ids_.size(); }

  const std::vector<std::size_t>& path_links(std::size_t path_id) const {
    return path_link_ids_[path_id];
  }
  std::size_t block_of_path(std::size_t path_id) const { return path_block_[path_id]; }
  const std::string& link_id(std::size_t link_index) const { return link_ids_[link_index]; }
  const CostPolynomial& link_cost(std::size_t link_index) const {
    return link_costs_[link_index];
  }
  std::size_t link_index(const std::string& link_id) const;

  /// Block indices owned by one end-host (blocks whose demand originates there).
  std::vector<std::size_t> blocks_of_host(const std::string& endhost_id) const;

 private:
  const Network* net_ = nullptr;
  std::vector<Path> paths_;
  std::vector<OdBlock> blocks_;
  std::vector<std::vector<std::size_t>> path_link_ids_;
  std::vector<std::size_t> path_block_;
  std::vector<std::string> link_ids_;
  std::vector<CostPolynomial> link_costs_;
};

}  // namespace anarchy
