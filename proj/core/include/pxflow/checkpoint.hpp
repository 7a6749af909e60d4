#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pxflow/fields.hpp"

namespace pxflow {

/// Byte layout is described in docs/checkpoint_format.md.
inline constexpr char kCheckpointMagic[8] = {'P', 'X', 'F', 'L', 'C', 'K', 'P', 'T'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  Grid grid;
  double time = 0.0;
  /// Scalar fields, each grid.size() row-major samples.
  std::vector<std::vector<double>> fields;
};

void write_checkpoint(const std::string& path, const Checkpoint& ck);
Checkpoint read_checkpoint(const std::string& path);

/// Velocity snapshot helpers: one field per component.
void write_velocity_checkpoint(const std::string& path, const VectorField& u, double time);
VectorField read_velocity_checkpoint(const std::string& path, double* time = nullptr);

}  // namespace pxflow
