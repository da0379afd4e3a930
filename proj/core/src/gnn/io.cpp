#include "swarmwatch/gnn/io.hpp"

#include <fstream>
#include <iterator>

#include "detail/byte_io.hpp"
#include "swarmwatch/error.hpp"

namespace swarmwatch {

namespace detail {

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot create " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path);
}

}  // namespace detail

namespace gnn {

namespace {

constexpr char kParamsMagic[4] = {'S', 'W', 'G', 'N'};
constexpr char kDatasetMagic[4] = {'S', 'W', 'D', 'S'};

void expect_magic(detail::ByteReader& in, const char (&magic)[4], const char* what) {
  if (in.raw(4) != std::string(magic, 4)) {
    throw Error(ErrorCode::kMalformed, std::string("not a ") + what + " file (bad magic)");
  }
}

std::uint32_t checked_u32(std::size_t v, const char* what) {
  if (v > 0xffffffffu) throw Error(ErrorCode::kTooLarge, std::string(what) + " does not fit in u32");
  return static_cast<std::uint32_t>(v);
}

}  // namespace

std::vector<std::uint8_t> encode_params(GnnParams params) {
  detail::ByteWriter w;
  w.raw(kParamsMagic, 4);
  w.u32(kParamsFormatVersion);
  const GnnShape& s = params.shape;
  for (std::size_t v : {s.goal_slots, s.goal_channels, s.agent_channels, s.state_width, s.mlp_width,
                        s.rounds, s.hidden_width()}) {
    w.u32(checked_u32(v, "shape field"));
  }
  auto tensors = params.tensors();
  w.u32(checked_u32(tensors.size(), "tensor count"));
  for (const auto& t : tensors) {
    w.u32(checked_u32(t.rows, "rows"));
    w.u32(checked_u32(t.cols, "cols"));
  }
  for (const auto& t : tensors) {
    for (std::size_t k = 0; k < t.size(); ++k) w.f32(static_cast<float>(t.data[k]));
  }
  return w.bytes();
}

GnnParams decode_params(const std::vector<std::uint8_t>& bytes) {
  detail::ByteReader in(bytes, "parameter file");
  expect_magic(in, kParamsMagic, "parameter");
  if (const auto v = in.u32(); v != kParamsFormatVersion) {
    throw Error(ErrorCode::kMalformed, "unsupported parameter file version " + std::to_string(v));
  }
  GnnShape s;
  s.goal_slots = in.u32();
  s.goal_channels = in.u32();
  s.agent_channels = in.u32();
  s.state_width = in.u32();
  s.mlp_width = in.u32();
  s.rounds = in.u32();
  const std::uint32_t d_h = in.u32();
  try {
    s.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kMalformed, std::string("parameter file shape: ") + e.what());
  }
  if (d_h != s.hidden_width()) {
    throw Error(ErrorCode::kMalformed, "declared hidden width " + std::to_string(d_h) +
                                           " disagrees with shape (" +
                                           std::to_string(s.hidden_width()) + ")");
  }
  GnnParams params = GnnParams::zeros(s);
  auto tensors = params.tensors();
  if (in.u32() != tensors.size()) throw Error(ErrorCode::kMalformed, "tensor count mismatch");
  for (const auto& t : tensors) {
    const std::uint32_t rows = in.u32(), cols = in.u32();
    if (rows != t.rows || cols != t.cols) {
      throw Error(ErrorCode::kMalformed, "tensor " + t.name + " has dimensions " +
                                             std::to_string(rows) + "x" + std::to_string(cols));
    }
  }
  for (auto& t : tensors) {
    for (std::size_t k = 0; k < t.size(); ++k) t.data[k] = in.f32();
  }
  if (!in.done()) throw Error(ErrorCode::kMalformed, "trailing bytes after parameters");
  if (!params.all_finite()) throw Error(ErrorCode::kMalformed, "non-finite parameter values");
  return params;
}

void save_params(const GnnParams& params, const std::string& path) {
  detail::write_file(path, encode_params(params));
}

GnnParams load_params(const std::string& path) { return decode_params(detail::read_file(path)); }

std::vector<std::uint8_t> encode_dataset(const Dataset& dataset) {
  const DatasetHeader& h = dataset.header;
  if (dataset.graphs.size() != h.count) {
    throw Error(ErrorCode::kCountMismatch, "header declares " + std::to_string(h.count) +
                                               " graphs, have " +
                                               std::to_string(dataset.graphs.size()));
  }
  if (h.num_goals > 255) throw Error(ErrorCode::kTooLarge, "labels are stored as u8");
  detail::ByteWriter w;
  w.raw(kDatasetMagic, 4);
  w.u32(kDatasetFormatVersion);
  w.u32(h.num_agents);
  w.u32(h.num_goals);
  w.u32(h.max_candidates);
  w.u32(h.count);
  w.u64(h.seed);
  for (std::size_t k = 0; k < dataset.graphs.size(); ++k) {
    const LabeledGraph& lg = dataset.graphs[k];
    const AgentGoalGraph& g = lg.graph;
    if (g.num_agents() != h.num_agents || g.goal_positions.size() != h.num_goals) {
      throw Error(ErrorCode::kShapeMismatch, "graph " + std::to_string(k) + " does not match header");
    }
    for (const auto& p : g.agent_positions) {
      w.f64(p.x);
      w.f64(p.y);
    }
    for (const auto& p : g.goal_positions) {
      w.f64(p.x);
      w.f64(p.y);
    }
    for (std::size_t goal : lg.label) w.u8(static_cast<std::uint8_t>(goal));
  }
  return w.bytes();
}

Dataset decode_dataset(const std::vector<std::uint8_t>& bytes) {
  detail::ByteReader in(bytes, "dataset file");
  expect_magic(in, kDatasetMagic, "dataset");
  if (const auto v = in.u32(); v != kDatasetFormatVersion) {
    throw Error(ErrorCode::kMalformed, "unsupported dataset file version " + std::to_string(v));
  }
  Dataset d;
  DatasetHeader& h = d.header;
  h.num_agents = in.u32();
  h.num_goals = in.u32();
  h.max_candidates = in.u32();
  h.count = in.u32();
  h.seed = in.u64();
  if (h.num_agents == 0 || h.num_goals < h.num_agents || h.max_candidates == 0) {
    throw Error(ErrorCode::kMalformed, "implausible dataset header");
  }
  const std::size_t record = 16 * (h.num_agents + h.num_goals) + h.num_agents;
  if ((bytes.size() - in.offset()) != record * h.count) {
    throw Error(ErrorCode::kMalformed, "dataset body is " + std::to_string(bytes.size() - in.offset()) +
                                           " bytes, header implies " +
                                           std::to_string(record * h.count));
  }
  d.graphs.reserve(h.count);
  for (std::uint32_t k = 0; k < h.count; ++k) {
    std::vector<Point2> agents(h.num_agents), goals(h.num_goals);
    for (auto& p : agents) p = {in.f64(), in.f64()};
    for (auto& p : goals) p = {in.f64(), in.f64()};
    Assignment label(h.num_agents);
    for (auto& l : label) {
      l = in.u8();
      if (l >= h.num_goals) throw Error(ErrorCode::kMalformed, "label out of range in graph " + std::to_string(k));
    }
    LabeledGraph lg;
    lg.graph = build_graph(agents, goals, h.max_candidates);
    lg.optimal_cost = assignment_cost(lg.graph.true_cost, label);
    lg.label = std::move(label);
    d.graphs.push_back(std::move(lg));
  }
  return d;
}

void save_dataset(const Dataset& dataset, const std::string& path) {
  detail::write_file(path, encode_dataset(dataset));
}

Dataset load_dataset(const std::string& path) { return decode_dataset(detail::read_file(path)); }

}  // namespace gnn
}  // namespace swarmwatch
