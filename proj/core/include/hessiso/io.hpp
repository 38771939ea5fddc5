#pragma once

#include "hessiso/tensor.hpp"

#include <ostream>

namespace hessiso {

/// One row per multi-index, columns i,j[,k[,l]],value with 17 significant digits.
void write_csv(std::ostream& os, const Mat& g);
void write_csv(std::ostream& os, const Tensor3& C);
void write_csv(std::ostream& os, const Tensor4& R);

}  // namespace hessiso
