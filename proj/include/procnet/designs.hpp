#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "procnet/combinators.hpp"
#include "procnet/network.hpp"
#include "procnet/oracle.hpp"

namespace procnet {

/// The five matrix-multiplication networks.
enum class DesignId {
  D1_DataParallel,
  D2_Stream,
  D3_Pipeline,
  D4_TurnoutPipeline,
  D5_MultilevelSystolic,
};

inline constexpr std::array<DesignId, 5> kAllDesigns = {
    DesignId::D1_DataParallel, DesignId::D2_Stream, DesignId::D3_Pipeline,
    DesignId::D4_TurnoutPipeline, DesignId::D5_MultilevelSystolic};

/// Short key, "d1" .. "d5".
const char* to_string(DesignId id);
/// Accepts the short key or the full enumerator name.
std::optional<DesignId> parse_design(std::string_view s);
/// Designs whose structure does not depend on k.
bool is_pipelined(DesignId id);

struct Dims {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t k = 0;

  friend bool operator==(const Dims&, const Dims&) = default;
  friend auto operator<=>(const Dims&, const Dims&) = default;
};

std::string to_string(const Dims& d);

/// A constructed network together with the means to read its output.
struct BuiltDesign {
  DesignId id{};
  Dims dims;
  Network network;
  /// css ByCols, valid after a completed run.
  std::function<Matrix()> collect;
  /// How the network emits css before normalization.
  std::string raw_order;
  /// Port the result store reads.
  Port css;
  /// Forwarded column stream of the turnout designs.
  std::optional<Port> through;
};

// Builders take ass ByRows (n x m) and bss ByCols (m x k), both at the width of
// the network; they throw ConstructionError on empty or mismatched dimensions.

/// Broadcast ass to k copies of VMMULT, each n parallel scalar products.
BuiltDesign build_d1(const Matrix& ass, const Matrix& bss);
/// D1 before the broadcast rewrite: one producer of ass per output column.
BuiltDesign build_d1_unfactored(const Matrix& ass, const Matrix& bss);
/// bss streamed; one VMMULT per column streams the rows of ass through a
/// single scalar-product network.
BuiltDesign build_d2(const Matrix& ass, const Matrix& bss);
/// Pipeline of n stages, one row each, over ⟨bs, y⟩ tuples.
BuiltDesign build_d3(const Matrix& ass, const Matrix& bss);
/// Turnout pipeline: stage i emits row i of css on its own stream.
BuiltDesign build_d4(const Matrix& ass, const Matrix& bss);
/// Turnout pipeline of systolic rows: an n x m grid of cells.
BuiltDesign build_d5(const Matrix& ass, const Matrix& bss);

BuiltDesign build_design(DesignId id, const Matrix& ass, const Matrix& bss);

struct DesignRun {
  DesignId design{};
  Dims dims;
  Matrix css;
  TraceMetrics metrics;
  std::string raw_order;
  std::vector<std::string> warnings;
};

/// A run that did not complete, tagged with the design.
class DesignFailure : public std::runtime_error {
 public:
  DesignFailure(DesignId id, RunStatus status, const std::string& diagnostic);

  DesignId design() const { return design_; }
  RunStatus status() const { return status_; }

 private:
  DesignId design_;
  RunStatus status_;
};

/// Builds, runs to completion and normalizes css to ByCols.
DesignRun run_design(DesignId id, const Matrix& ass, const Matrix& bss,
                     std::uint64_t max_cycles);

/// Network processes named "vmmult", in id order; used to compare D1 variants.
std::vector<ProcessId> column_subnetworks(const Network& net);

}  // namespace procnet
