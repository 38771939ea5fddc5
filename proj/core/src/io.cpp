#include "hessiso/io.hpp"

#include <iomanip>

namespace hessiso {

void write_csv(std::ostream& os, const Mat& g) {
  os << "i,j,value\n" << std::setprecision(17);
  for (int i = 0; i < g.rows(); ++i)
    for (int j = 0; j < g.cols(); ++j) os << i << ',' << j << ',' << g(i, j) << '\n';
}

void write_csv(std::ostream& os, const Tensor3& C) {
  const int n = C.dim();
  os << "i,j,k,value\n" << std::setprecision(17);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) os << i << ',' << j << ',' << k << ',' << C(i, j, k) << '\n';
}

void write_csv(std::ostream& os, const Tensor4& R) {
  const int n = R.dim();
  os << "i,j,k,l,value\n" << std::setprecision(17);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) os << i << ',' << j << ',' << k << ',' << l << ',' << R(i, j, k, l) << '\n';
}

}  // namespace hessiso
