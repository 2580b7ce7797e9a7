#pragma once

#include "gaussch/linalg.hpp"

namespace gaussch {

/// Single-mode Gaussian channel acting as V -> X^T V X + Y.
struct ChannelXY {
  Mat2 X = Mat2::identity();
  SymMat2 Y{};
};

}  // namespace gaussch
