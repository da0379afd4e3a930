#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "swarmwatch/gnn/graph.hpp"
#include "swarmwatch/gnn/network.hpp"

namespace swarmwatch::gnn {

inline constexpr std::uint32_t kParamsFormatVersion = 1;
inline constexpr std::uint32_t kDatasetFormatVersion = 1;

/// Parameters are stored as binary32; loading yields the rounded values.
std::vector<std::uint8_t> encode_params(GnnParams params);
GnnParams decode_params(const std::vector<std::uint8_t>& bytes);

void save_params(const GnnParams& params, const std::string& path);
GnnParams load_params(const std::string& path);

struct DatasetHeader {
  std::uint32_t num_agents = 0;
  std::uint32_t num_goals = 0;
  std::uint32_t max_candidates = 0;
  std::uint32_t count = 0;
  std::uint64_t seed = 0;
};

struct Dataset {
  DatasetHeader header;
  std::vector<LabeledGraph> graphs;
};

std::vector<std::uint8_t> encode_dataset(const Dataset& dataset);
/// Rebuilds each graph from the stored positions; stored labels are kept.
Dataset decode_dataset(const std::vector<std::uint8_t>& bytes);

void save_dataset(const Dataset& dataset, const std::string& path);
Dataset load_dataset(const std::string& path);

}  // namespace swarmwatch::gnn
